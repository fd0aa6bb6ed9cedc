import numpy as np, pytest

import init_paths
from reference_energy import naive_total, naive_delta_g
from VoxSolv_libs.grid import Grid, BinaryField, SOLUTE, SOLVENT, connected_components
from VoxSolv_libs.kernels import KernelSpec, build_stencil
from VoxSolv_libs.site_energy import Atom, AtomSet, PhysicalParams, SiteEnergies, precompute_site_energies
from VoxSolv_libs.minimizer import FlipState, EnergyTrace, delta_g, apply_flip, total_energy, exit_scan, replay_trace, \
	minimize, interface_band, _cell_opposite_count
from VoxSolv_libs.initials import ball_field, loose_initial, tight_initial
from VoxSolv_libs.errors import NumericError

def setup(a=2.0, n=8, C=1.5, atoms=None, gamma0=0.174):
	grid = Grid(a, n)
	params = PhysicalParams(gamma0=gamma0)
	stencil = build_stencil(KernelSpec.from_grid('sin2', C, grid), grid, gamma0)
	if atoms is None: atoms = AtomSet([Atom([0.1, -0.2, 0.05], 1.0, 1.0, 0.2)])
	site = precompute_site_energies(grid, atoms, params)
	return grid, params, stencil, site

def random_field(grid, rng, fraction=0.5):
	return BinaryField(grid, np.where(rng.random(grid.num_cells) < fraction, SOLUTE, SOLVENT).astype(np.int8))

def test_total_energy_matches_naive():
	rng = np.random.default_rng(0)
	grid, params, stencil, site = setup()
	for fraction in [0.2, 0.6, 1.0]:
		field = random_field(grid, rng, fraction)
		breakdown = total_energy(field, stencil, site)
		surf, vdw, elec, total = naive_total(field, stencil.spec, params.gamma0, site)
		assert np.isclose(breakdown.surf, surf, rtol=1e-9)
		assert np.isclose(breakdown.vdw, vdw, rtol=1e-12) and np.isclose(breakdown.elec, elec, rtol=1e-12)
		assert np.isclose(breakdown.total, total, rtol=1e-9, atol=1e-12)

def test_total_energy_random_instances():
	rng = np.random.default_rng(10)
	params = PhysicalParams()
	for instance in range(50):
		grid = Grid(2.0, int(rng.integers(12, 17)))
		stencil = build_stencil(KernelSpec.from_grid(str(rng.choice(['sin2', 'cos1'])), 1.2, grid), grid, params.gamma0)
		atoms = AtomSet([Atom(rng.uniform(-1.5, 1.5, size=3), rng.uniform(-1, 1), rng.uniform(0.5, 1.5), rng.uniform(0.0, 0.5))
			for _ in range(int(rng.integers(0, 4)))])
		site = precompute_site_energies(grid, atoms, params)
		field = random_field(grid, rng, rng.uniform(0.05, 0.95))
		surf, vdw, elec, expected = naive_total(field, stencil.spec, params.gamma0, site)
		assert abs(total_energy(field, stencil, site).total - expected) <= 1e-10 * (abs(surf) + abs(vdw) + abs(elec))

def test_delta_g_matches_brute_force():
	rng = np.random.default_rng(1)
	grid, params, stencil, site = setup()
	field = ball_field(grid, [0.0, 0.0, 0.0], 1.1)
	field.phi[rng.integers(0, grid.num_cells, size=10)] = SOLUTE
	corner = grid.linear_index((0, 0, 0))
	for cell in list(rng.integers(0, grid.num_cells, size=12)) + [corner]:
		expected = naive_delta_g(int(cell), field, stencil.spec, params.gamma0, site)
		scale = max(1.0, abs(expected))
		assert abs(delta_g(int(cell), field, stencil, site) - expected) <= 1e-9 * scale

def test_delta_g_signs_without_atoms():
	grid, params, stencil, _ = setup(n=12, atoms=AtomSet())
	site = SiteEnergies.zeros(grid)
	field = BinaryField.filled(grid, SOLVENT)
	cell = grid.linear_index((6, 6, 6))
	field.phi[cell] = SOLUTE
	assert np.isclose(delta_g(cell, field, stencil, site), -stencil.neighbor_weights.sum())

	# a hole deep inside the solute costs the whole stencil
	assert np.isclose(delta_g(cell, loose_initial(grid), stencil, site), stencil.neighbor_weights.sum())

	empty = total_energy(BinaryField.filled(grid, SOLVENT), stencil, site)
	assert (empty.surf, empty.vdw, empty.elec, empty.total) == (0.0, 0.0, 0.0, 0.0)

def test_flip_twice_is_identity():
	rng = np.random.default_rng(2)
	grid, params, stencil, site = setup()
	field = random_field(grid, rng)
	start = field.phi.copy()
	state = FlipState(field, stencil, site)
	delta, opposite, valid = state.delta_g.copy(), state.opposite.copy(), state.valid == 1
	members = state.heap.members()

	cell = int(rng.integers(0, grid.num_cells))
	apply_flip(state, cell)
	apply_flip(state, cell)
	assert np.array_equal(state.phi, start)
	assert np.array_equal(state.opposite, opposite)
	assert np.allclose(state.delta_g[valid], delta[valid], rtol=1e-12, atol=1e-12 * stencil.max_weight)
	assert np.array_equal(state.heap.members(), members)

def test_cache_stays_exact_after_random_flips():
	rng = np.random.default_rng(3)
	grid, params, stencil, site = setup(n=10)
	state = FlipState(ball_field(grid, [0.0, 0.1, 0.0], 1.2), stencil, site)
	scale = max(stencil.max_weight, np.abs(site.g_site).max())

	for step in range(500):
		# mostly near the interface, sometimes anywhere
		band = np.flatnonzero(state.opposite > 0)
		cell = int(rng.choice(band)) if band.size and rng.random() < 0.8 else int(rng.integers(0, grid.num_cells))
		apply_flip(state, cell)
	assert state.heap.is_consistent()

	n, offsets, weights = grid.n, stencil.neighbor_offsets, stencil.neighbor_weights
	for cell in range(grid.num_cells):
		assert state.opposite[cell] == _cell_opposite_count(cell, state.phi, n, offsets)
		exact = delta_g(cell, state.field, stencil, site)
		if state.valid[cell]: assert abs(state.delta_g[cell] - exact) <= 1e-10 * scale

		# heap holds exactly the adjacent cells with negative delta G, up to rounding at zero
		if abs(exact) > 1e-9 * scale:
			assert (cell in state.heap) == (state.opposite[cell] > 0 and exact < 0)

def test_flips_away_from_the_interface():
	# cells with no opposite neighbor enter the cache without a stencil pass, interior and wall cells alike
	rng = np.random.default_rng(5)
	grid, params, stencil, site = setup(a=2.0, n=20)
	state = FlipState(ball_field(grid, [0.0, 0.0, 0.0], 0.6), stencil, site)
	n, reach = grid.n, state.reach
	assert 0 < reach < n // 2

	cells = np.arange(grid.num_cells)
	i, j, k = cells % n, (cells // n) % n, cells // (n * n)
	interior = (np.minimum(np.minimum(i, j), k) >= reach) & (np.maximum(np.maximum(i, j), k) < n - reach)
	far = (state.opposite == 0) & (state.valid == 0)
	picks = list(rng.choice(np.flatnonzero(far & interior), size=3, replace=False)) + \
		list(rng.choice(np.flatnonzero(far & ~interior), size=3, replace=False))
	for cell in picks: apply_flip(state, int(cell))
	assert state.heap.is_consistent()

	scale = max(stencil.max_weight, np.abs(site.g_site).max())
	for cell in range(grid.num_cells):
		assert state.opposite[cell] == _cell_opposite_count(cell, state.phi, n, stencil.neighbor_offsets)
		if state.opposite[cell] > 0: assert state.valid[cell] == 1
		if state.valid[cell]:
			exact = delta_g(cell, state.field, stencil, site)
			assert abs(state.delta_g[cell] - exact) <= 1e-12 * scale
			if abs(exact) > 1e-9 * scale: assert (cell in state.heap) == (state.opposite[cell] > 0 and exact < 0)

def test_interface_band_is_superset():
	rng = np.random.default_rng(4)
	grid, params, stencil, site = setup(n=10)
	field = random_field(grid, rng, 0.1)
	band = set(interface_band(field, stencil.spec.kappa).tolist())
	for cell in range(grid.num_cells):
		if _cell_opposite_count(cell, field.phi, grid.n, stencil.neighbor_offsets) > 0: assert cell in band
	assert interface_band(BinaryField.filled(grid, SOLVENT), stencil.spec.kappa).size == 0

def test_zero_atoms_single_voxel():
	grid, params, stencil, _ = setup(n=9, atoms=AtomSet())
	site = SiteEnergies.zeros(grid)
	field = BinaryField.filled(grid, SOLVENT)
	field.phi[grid.linear_index((4, 4, 4))] = SOLUTE
	final, breakdown, trace = minimize(field, stencil, site, params)
	assert final.solute_count == 0
	assert breakdown.total == 0.0 and breakdown.flips == 1 and len(trace) == 1
	assert field.solute_count == 1

def test_zero_atoms_small_ball_dissolves():
	grid, params, stencil, _ = setup(a=2.0, n=12, atoms=AtomSet())
	site = SiteEnergies.zeros(grid)
	field = ball_field(grid, [0.0, 0.0, 0.0], 0.6 * stencil.spec.kappa)
	assert field.solute_count > 0
	final, breakdown, trace = minimize(field, stencil, site, params)
	assert final.solute_count == 0
	assert breakdown.total == pytest.approx(0.0, abs=1e-12)
	assert np.all(trace.delta_g < 0)

def test_zero_atoms_loose_keeps_interior():
	grid, params, stencil, _ = setup(a=2.0, n=12, atoms=AtomSet())
	site = SiteEnergies.zeros(grid)
	start = loose_initial(grid)
	initial = total_energy(start, stencil, site).total
	final, breakdown, trace = minimize(start, stencil, site, params)
	assert final.phi[grid.linear_index((6, 6, 6))] == SOLUTE
	assert breakdown.total <= initial
	assert np.all(trace.delta_g < 0)

def one_atom_run(n=16):
	atoms = AtomSet([Atom([0.05, -0.1, 0.02], 1.0, 1.5, 0.3)])
	grid, params, stencil, site = setup(a=4.0, n=n, atoms=atoms)
	return grid, params, stencil, site, tight_initial(grid, atoms)

def test_descent_trace_and_certificate():
	grid, params, stencil, site, start = one_atom_run()
	final, breakdown, trace = minimize(start, stencil, site, params)

	energies = trace.energies
	assert energies.shape[0] == len(trace) + 1 == breakdown.flips + 1
	assert np.all(trace.delta_g < 0)
	assert np.allclose(np.diff(energies), trace.delta_g, rtol=1e-12, atol=1e-12)
	assert np.isclose(energies[0], total_energy(start, stencil, site).total)
	assert np.isclose(energies[-1], breakdown.total, rtol=1e-9, atol=1e-9)

	for step, traced, recomputed in replay_trace(start, trace, stencil, site, every=10):
		assert abs(traced - recomputed) <= 1e-9 * max(1.0, abs(recomputed))

	min_delta, _ = exit_scan(final, stencil, site)
	assert min_delta >= -1e-9 * stencil.max_weight
	assert final.solute_count > 0 and not final.touches_boundary()
	assert connected_components(final)[0] == 1

def test_descent_is_deterministic():
	grid, params, stencil, site, start = one_atom_run(n=12)
	first = minimize(start, stencil, site, params)
	second = minimize(start, stencil, site, params)
	assert np.array_equal(first[0].phi, second[0].phi)
	assert np.array_equal(first[2].cells, second[2].cells)
	assert first[1].total == second[1].total

def test_batches_do_not_change_the_result():
	grid, params, stencil, site, start = one_atom_run(n=12)
	whole = minimize(start, stencil, site, params)
	batched = minimize(start, stencil, site, params, batch_flips=3)
	assert np.array_equal(whole[2].cells, batched[2].cells)
	assert np.array_equal(whole[0].phi, batched[0].phi)

def test_flip_cap():
	grid, params, stencil, _ = setup(a=2.0, n=10, atoms=AtomSet())
	site = SiteEnergies.zeros(grid)
	with pytest.raises(NumericError): minimize(loose_initial(grid), stencil, site, params, max_flips=1)

def test_energy_trace_rows():
	trace = EnergyTrace(5.0)
	trace.extend(np.array([3, 7]), np.array([-1.0, -0.5]), np.array([4.0, 3.5]))
	trace.extend(np.array([2]), np.array([-0.25]), np.array([3.25]))
	assert len(trace) == 3
	assert trace.cells.tolist() == [3, 7, 2]
	assert trace.rows() == [(0, 5.0), (1, 4.0), (2, 3.5), (3, 3.25)]

if __name__ == '__main__':
	test_total_energy_matches_naive()
	test_delta_g_matches_brute_force()
	test_flip_twice_is_identity()
	test_cache_stays_exact_after_random_flips()
	test_flips_away_from_the_interface()
	test_zero_atoms_single_voxel()
	test_descent_trace_and_certificate()
	test_flip_cap()
