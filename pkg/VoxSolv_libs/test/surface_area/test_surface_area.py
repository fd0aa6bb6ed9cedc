import math, numpy as np, pytest

import init_paths
from VoxSolv_libs.grid import Grid, BinaryField, SOLUTE, SOLVENT
from VoxSolv_libs.kernels import KernelSpec, build_stencil
from VoxSolv_libs.surface_area import surface_energy, estimate_area, interface_solute_cells, FFTSurfaceEvaluator, _solvent_kernel_sum
from VoxSolv_libs.initials import ball_field

def make_stencil(a=1.0, n=16, C=1.5, kind='sin2', gamma0=0.174):
	grid = Grid(a, n)
	return grid, build_stencil(KernelSpec.from_grid(kind, C, grid), grid, gamma0)

def random_field(grid, rng, solute_fraction=0.5):
	return BinaryField(grid, np.where(rng.random(grid.num_cells) < solute_fraction, SOLUTE, SOLVENT).astype(np.int8))

def test_trivial_fields():
	grid, stencil = make_stencil()
	assert surface_energy(BinaryField.filled(grid, SOLVENT), stencil) == 0.0
	assert surface_energy(BinaryField.filled(grid, SOLVENT), stencil, method='fft') == pytest.approx(0.0, abs=1e-12)

	field = BinaryField.filled(grid, SOLVENT)
	field.phi[grid.linear_index((8, 8, 8))] = SOLUTE
	assert np.isclose(surface_energy(field, stencil), stencil.neighbor_weights.sum(), rtol=1e-12)

def test_direct_matches_fft():
	rng = np.random.default_rng(0)
	for n, C, kind in [(12, 1.2, 'sin2'), (16, 1.5, 'cos1'), (20, 2.0, 'sin2')]:
		grid, stencil = make_stencil(n=n, C=C, kind=kind)
		evaluator = FFTSurfaceEvaluator(stencil)
		for fraction in [0.1, 0.5, 0.9]:
			field = random_field(grid, rng, fraction)
			direct = surface_energy(field, stencil)
			assert abs(direct - evaluator.surface_energy(field)) <= 1e-9 * abs(direct)

		# the box boundary counts as interface
		solute = BinaryField.filled(grid, SOLUTE)
		direct = surface_energy(solute, stencil)
		assert direct > 0
		assert abs(direct - evaluator.surface_energy(solute)) <= 1e-9 * direct

def test_interface_cells_cover_all_contributions():
	rng = np.random.default_rng(1)
	grid, stencil = make_stencil(n=14, C=1.3)
	field = ball_field(grid, [0.1, -0.05, 0.0], 0.6)
	field.phi[rng.integers(0, grid.num_cells, size=20)] = SOLUTE

	cells = interface_solute_cells(field, stencil.spec.kappa)
	every = np.flatnonzero(field.phi == SOLUTE).astype(np.int64)
	assert set(cells.tolist()) <= set(every.tolist())
	full = _solvent_kernel_sum(field.phi, grid.n, every, stencil.neighbor_offsets, stencil.neighbor_weights)
	assert np.isclose(full.sum(), surface_energy(field, stencil), rtol=1e-12)

	# cells left out contribute nothing
	outside = np.setdiff1d(every, cells)
	if outside.size:
		assert np.all(_solvent_kernel_sum(field.phi, grid.n, outside, stencil.neighbor_offsets, stencil.neighbor_weights) == 0)

def test_complement_symmetry():
	# ball farther than kappa from the walls: the complement only adds the wall terms of the full box
	grid, stencil = make_stencil(n=20, C=1.5)
	field = ball_field(grid, [0.05, 0.0, -0.05], 0.4)
	walls = surface_energy(BinaryField.filled(grid, SOLUTE), stencil)
	complement = surface_energy(field.negated(), stencil)
	assert np.isclose(complement - walls, surface_energy(field, stencil), rtol=1e-9)

def test_sphere_area():
	grid, stencil = make_stencil(a=1.0, n=100, C=3.0, gamma0=1.0)
	field = ball_field(grid, [0.003, -0.004, 0.002], 0.5)
	area = estimate_area(field, stencil, method='fft')
	assert abs(area - math.pi) / math.pi < 0.03

def test_area_scales_with_gamma0():
	grid, stencil = make_stencil(n=16, C=1.5, gamma0=0.174)
	_, unit = make_stencil(n=16, C=1.5, gamma0=1.0)
	field = ball_field(grid, [0.0, 0.0, 0.0], 0.5)
	assert np.isclose(estimate_area(field, stencil), estimate_area(field, unit), rtol=1e-12)
	assert np.isclose(surface_energy(field, stencil), 0.174 * surface_energy(field, unit), rtol=1e-12)

if __name__ == '__main__':
	test_trivial_fields()
	test_direct_matches_fft()
	test_interface_cells_cover_all_contributions()
	test_sphere_area()
	test_area_scales_with_gamma0()
