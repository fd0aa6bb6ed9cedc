# interface area and surface energy of a binary field by the discrete double sum
#   G_surf = sum_{i in Omega_m} sum_{j in Omega_w, |x_j - x_i| <= kappa} K_ij
# cells outside the box count as solvent

import numpy as np
from numba import jit, prange
from scipy import fft as sp_fft
from scipy import ndimage
from VoxSolv_libs.grid import SOLUTE, SOLVENT

@jit(nopython=True, parallel=True, cache=True)
def _solvent_kernel_sum(phi, n, cells, offsets, weights):
	# for each listed cell, the stencil weight landing on solvent (or outside the box)
	out = np.zeros(cells.shape[0])
	for c in prange(cells.shape[0]):
		cell = cells[c]
		i = cell % n
		j = (cell // n) % n
		k = cell // (n * n)
		acc = 0.0
		for m in range(offsets.shape[0]):
			x = i + offsets[m, 0]
			y = j + offsets[m, 1]
			z = k + offsets[m, 2]
			if x < 0 or x >= n or y < 0 or y >= n or z < 0 or z >= n:
				acc += weights[m]
			elif phi[x + n * (y + n * z)] > 0:
				acc += weights[m]
		out[c] = acc
	return out

def interface_solute_cells(field, kappa):
	'''
	flat indices of solute cells with a solvent cell (or the box outside) within kappa, in
	ascending order; the other solute cells contribute exactly zero to the double sum
	'''
	grid = field.grid
	solute = np.pad(field.volume() == SOLUTE, 1, mode='constant', constant_values=False)
	if not solute.any(): return np.zeros(0, dtype=np.int64)
	dist = ndimage.distance_transform_edt(solute, sampling=grid.h)[1:-1, 1:-1, 1:-1]
	near = (dist <= kappa * (1.0 + 1e-9)) & (dist > 0)
	return np.flatnonzero(grid.to_flat(near)).astype(np.int64)

class FFTSurfaceEvaluator(object):
	'''
	evaluates the same double sum by FFT convolution of the solvent indicator with the kernel,
	the kernel spectrum is computed once per grid and reused across fields
	'''
	def __init__(self, stencil, workers=None):
		self.stencil = stencil
		self.workers = workers
		n, reach = stencil.grid.n, stencil.radius_cells
		self.reach = reach
		self.fft_shape = tuple([sp_fft.next_fast_len(n + 4 * reach, real=True)] * 3)
		self.kernel_spectrum = sp_fft.rfftn(stencil.kernel_volume(), s=self.fft_shape, workers=workers)

	def solvent_sum(self, field):
		n, reach = field.grid.n, self.reach
		solvent = np.pad((field.volume() == SOLVENT).astype(np.float64), reach, mode='constant', constant_values=1.0)
		conv = sp_fft.irfftn(sp_fft.rfftn(solvent, s=self.fft_shape, workers=self.workers) * self.kernel_spectrum,
			s=self.fft_shape, workers=self.workers)
		return conv[2 * reach:2 * reach + n, 2 * reach:2 * reach + n, 2 * reach:2 * reach + n]

	def surface_energy(self, field):
		assert field.grid == self.stencil.grid, 'error, the stencil was built on another grid'
		per_cell = self.solvent_sum(field)
		return float(np.sum(per_cell[field.volume() == SOLUTE]))

def surface_energy(field, stencil, method='direct'):
	'''
	surface energy in kBT; method 'direct' sums over interface-adjacent solute cells,
	'fft' convolves (same value up to round-off, faster when kappa / h is large)
	'''
	assert field.grid == stencil.grid, 'error, the stencil was built on another grid'
	if method == 'fft': return FFTSurfaceEvaluator(stencil).surface_energy(field)
	assert method == 'direct', 'error, unknown surface evaluation method %s' % method

	cells = interface_solute_cells(field, stencil.spec.kappa)
	if cells.size == 0: return 0.0
	per_cell = _solvent_kernel_sum(field.phi, field.grid.n, cells, stencil.neighbor_offsets, stencil.neighbor_weights)
	return float(np.sum(per_cell))

def estimate_area(field, stencil, method='direct'):
	# interface area in Angstrom^2
	return surface_energy(field, stencil, method=method) / stencil.gamma0
