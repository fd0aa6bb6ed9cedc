# greedy steepest-descent flipping of the binary field
#   Delta G_i = sum_{j != i} phi_i phi_j K_ij - phi_i (G^vdW_i + G^elec_i),  phi = +1 outside the box
# the flippable cells are those with an opposite-sign cell within kappa, kept in an indexed min-heap

import numpy as np
from numba import jit, prange
from scipy import ndimage
from VoxSolv_libs.grid import SOLUTE, SOLVENT
from VoxSolv_libs.heap import IndexedMinHeap, heap_upsert, heap_remove, heap_pop
from VoxSolv_libs.surface_area import surface_energy
from VoxSolv_libs.errors import NumericError
from voxsolv_miscellaneous import print_log, print_warning, Timer

DEFAULT_BATCH_FLIPS = 100000

############ compiled kernels

@jit(nopython=True, cache=True)
def _cell_delta_g(cell, phi, n, offsets, weights, g_site):
	i = cell % n
	j = (cell // n) % n
	k = cell // (n * n)
	phi_i = phi[cell]
	acc = 0.0
	for m in range(offsets.shape[0]):
		x = i + offsets[m, 0]
		y = j + offsets[m, 1]
		z = k + offsets[m, 2]
		if x < 0 or x >= n or y < 0 or y >= n or z < 0 or z >= n: acc += weights[m]
		else: acc += phi[x + n * (y + n * z)] * weights[m]
	return phi_i * acc - phi_i * g_site[cell]

@jit(nopython=True, cache=True)
def _weight_sum(weights):
	# same summation order as _cell_delta_g, so a cell without opposite neighbors gets the identical value
	acc = 0.0
	for m in range(weights.shape[0]): acc += weights[m]
	return acc

@jit(nopython=True, cache=True)
def _cell_opposite_count(cell, phi, n, offsets):
	i = cell % n
	j = (cell // n) % n
	k = cell // (n * n)
	phi_i = phi[cell]
	count = 0
	for m in range(offsets.shape[0]):
		x = i + offsets[m, 0]
		y = j + offsets[m, 1]
		z = k + offsets[m, 2]
		if x < 0 or x >= n or y < 0 or y >= n or z < 0 or z >= n:
			if phi_i < 0: count += 1
		elif phi[x + n * (y + n * z)] != phi_i: count += 1
	return count

@jit(nopython=True, parallel=True, cache=True)
def _band_state(cells, phi, n, offsets, weights, g_site, delta_g, valid, opposite):
	# opposite-sign counts and Delta G for the listed cells, each slot written once
	for c in prange(cells.shape[0]):
		cell = cells[c]
		count = _cell_opposite_count(cell, phi, n, offsets)
		opposite[cell] = count
		if count > 0:
			delta_g[cell] = _cell_delta_g(cell, phi, n, offsets, weights, g_site)
			valid[cell] = 1

@jit(nopython=True, cache=True)
def _refresh(cell, phi, n, offsets, weights, g_site, delta_g, valid, opposite, keys, heap_cells, pos, size):
	if opposite[cell] > 0:
		if valid[cell] == 0:
			delta_g[cell] = _cell_delta_g(cell, phi, n, offsets, weights, g_site)
			valid[cell] = 1
		if delta_g[cell] < 0: heap_upsert(keys, heap_cells, pos, size, cell, delta_g[cell])
		else: heap_remove(keys, heap_cells, pos, size, cell)
	else:
		heap_remove(keys, heap_cells, pos, size, cell)

@jit(nopython=True, cache=True)
def _flip(cell, phi, n, offsets, weights, g_site, delta_g, valid, opposite, keys, heap_cells, pos, size,
	flat_offsets, reach, weight_sum):
	pre = phi[cell]
	# a cell with no opposite neighbor sees the whole stencil with its own sign
	if opposite[cell] == 0:
		delta_g[cell] = weight_sum - pre * g_site[cell]
		valid[cell] = 1
	phi[cell] = -pre
	if valid[cell] == 1: delta_g[cell] = -delta_g[cell]
	opposite[cell] = offsets.shape[0] - opposite[cell]

	i = cell % n
	j = (cell // n) % n
	k = cell // (n * n)
	inside = i >= reach and i < n - reach and j >= reach and j < n - reach and k >= reach and k < n - reach
	for m in range(offsets.shape[0]):
		if inside:
			other = cell + flat_offsets[m]
		else:
			x = i + offsets[m, 0]
			y = j + offsets[m, 1]
			z = k + offsets[m, 2]
			if x < 0 or x >= n or y < 0 or y >= n or z < 0 or z >= n: continue
			other = x + n * (y + n * z)
		phi_o = phi[other]
		count = opposite[other]
		if count == 0:
			delta_g[other] = weight_sum - phi_o * g_site[other]
			valid[other] = 1
		if phi_o == pre: count += 1
		else: count -= 1
		opposite[other] = count
		if valid[other] == 1: delta_g[other] -= 2.0 * pre * phi_o * weights[m]

		# the heap is only entered when the cell is or becomes a member
		if count > 0:
			if valid[other] == 0:
				_refresh(other, phi, n, offsets, weights, g_site, delta_g, valid, opposite, keys, heap_cells, pos, size)
			elif delta_g[other] < 0:
				heap_upsert(keys, heap_cells, pos, size, other, delta_g[other])
			elif pos[other] >= 0:
				heap_remove(keys, heap_cells, pos, size, other)
		elif pos[other] >= 0:
			heap_remove(keys, heap_cells, pos, size, other)
	_refresh(cell, phi, n, offsets, weights, g_site, delta_g, valid, opposite, keys, heap_cells, pos, size)

@jit(nopython=True, cache=True)
def _descend(max_steps, energy, phi, n, offsets, weights, g_site, delta_g, valid, opposite,
	keys, heap_cells, pos, size, flat_offsets, reach, weight_sum, out_cells, out_delta, out_energy):
	# pop-and-flip until the heap empties or max_steps flips were made, returns the flip count
	steps = 0
	while steps < max_steps and size[0] > 0:
		cell, key = heap_pop(keys, heap_cells, pos, size)
		energy += key
		out_cells[steps] = cell
		out_delta[steps] = key
		out_energy[steps] = energy
		_flip(cell, phi, n, offsets, weights, g_site, delta_g, valid, opposite, keys, heap_cells, pos, size,
			flat_offsets, reach, weight_sum)
		steps += 1
	return steps

@jit(nopython=True, parallel=True, cache=True)
def _scan(cells, phi, n, offsets, weights, g_site):
	out = np.full(cells.shape[0], np.inf)
	for c in prange(cells.shape[0]):
		cell = cells[c]
		if _cell_opposite_count(cell, phi, n, offsets) > 0:
			out[c] = _cell_delta_g(cell, phi, n, offsets, weights, g_site)
	return out

############ band of candidate cells

def interface_band(field, kappa):
	'''
	flat indices (ascending) of cells within kappa of an opposite-sign cell, a superset of the
	interface-adjacent cells; the box outside counts as solvent
	'''
	grid = field.grid
	vol = field.volume()
	slack = kappa * (1.0 + 1e-9)
	band = np.zeros(grid.shape, dtype=bool)

	solute = np.pad(vol == SOLUTE, 1, mode='constant', constant_values=False)
	if solute.any():
		dist = ndimage.distance_transform_edt(solute, sampling=grid.h)[1:-1, 1:-1, 1:-1]
		band |= (vol == SOLUTE) & (dist <= slack)

		solvent = ~solute
		dist = ndimage.distance_transform_edt(solvent, sampling=grid.h)[1:-1, 1:-1, 1:-1]
		band |= (vol == SOLVENT) & (dist <= slack)
	return np.flatnonzero(grid.to_flat(band)).astype(np.int64)

############ state and results

class EnergyBreakdown(object):
	'''
	component energies in kBT, outside-box parts included in vdw / elec and also itemized
	'''
	def __init__(self, surf, vdw, elec, outside_vdw=0.0, outside_elec=0.0, flips=0, wall_time=0.0, init_time=0.0):
		self.surf, self.vdw, self.elec = float(surf), float(vdw), float(elec)
		self.total = self.surf + self.vdw + self.elec
		self.outside_vdw, self.outside_elec = float(outside_vdw), float(outside_elec)
		self.flips = int(flips)
		self.wall_time = float(wall_time)
		self.init_time = float(init_time)

	def __str__(self):
		return 'surf: {:.6f}, vdw: {:.6f}, elec: {:.6f}, total: {:.6f} kBT'.format(self.surf, self.vdw, self.elec, self.total)

	def as_dict(self):
		return {'surf': self.surf, 'vdw': self.vdw, 'elec': self.elec, 'total': self.total,
			'outside': {'vdw': self.outside_vdw, 'elec': self.outside_elec},
			'flips': self.flips, 'time': {'init': self.init_time, 'flipping': self.wall_time}}

class EnergyTrace(object):
	'''
	energies[k] is the total energy after k flips; cells[k] / delta_g[k] describe flip k + 1
	'''
	def __init__(self, initial_energy):
		self.initial_energy = float(initial_energy)
		self._cells, self._delta, self._energy = [], [], []

	def extend(self, cells, delta_g, energies):
		self._cells.append(cells.copy())
		self._delta.append(delta_g.copy())
		self._energy.append(energies.copy())

	@property
	def cells(self):
		return np.concatenate(self._cells) if self._cells else np.zeros(0, dtype=np.int64)

	@property
	def delta_g(self):
		return np.concatenate(self._delta) if self._delta else np.zeros(0)

	@property
	def energies(self):
		return np.concatenate([np.array([self.initial_energy])] + self._energy)

	def __len__(self):
		return sum(tmp.shape[0] for tmp in self._cells)

	def rows(self):
		# (flip count, total energy) pairs, starting at (0, initial energy)
		return list(zip(range(len(self) + 1), self.energies.tolist()))

class FlipState(object):
	'''
	field with its delta G cache (valid flags), opposite-sign neighbor counts and the heap of
	interface-adjacent cells with negative delta G; the field passed in is flipped in place
	'''
	def __init__(self, field, stencil, site):
		assert field.grid == stencil.grid, 'error, the stencil was built on another grid'
		assert site.g_site.shape == (field.grid.num_cells, ), 'error, site energies do not match the grid'
		self.field = field
		self.stencil = stencil
		self.site = site
		self.n = field.grid.n
		num_cells = field.grid.num_cells

		self.delta_g = np.zeros(num_cells, dtype=np.float64)
		self.valid = np.zeros(num_cells, dtype=np.uint8)
		self.opposite = np.zeros(num_cells, dtype=np.int64)
		self.heap = IndexedMinHeap(num_cells)

		# flat neighbor steps for cells whose whole stencil lies inside the box
		offsets = stencil.neighbor_offsets
		self.flat_offsets = np.ascontiguousarray(offsets[:, 0] + self.n * (offsets[:, 1] + self.n * offsets[:, 2]), dtype=np.int64)
		self.reach = stencil.radius_cells
		self.weight_sum = float(_weight_sum(stencil.neighbor_weights))

		band = interface_band(field, stencil.spec.kappa)
		if band.size:
			_band_state(band, field.phi, self.n, stencil.neighbor_offsets, stencil.neighbor_weights, site.g_site,
				self.delta_g, self.valid, self.opposite)
		start = band[(self.opposite[band] > 0) & (self.delta_g[band] < 0)]
		self.heap.upsert_many(start, self.delta_g[start])

	@property
	def phi(self):
		return self.field.phi

	def kernel_args(self):
		return (self.field.phi, self.n, self.stencil.neighbor_offsets, self.stencil.neighbor_weights, self.site.g_site,
			self.delta_g, self.valid, self.opposite, self.heap.keys, self.heap.cells, self.heap.pos, self.heap.size,
			self.flat_offsets, self.reach, self.weight_sum)

############ operations

def delta_g(cell, field, stencil, site):
	'''
	energy change (after - before) of flipping one cell, from scratch
	'''
	assert 0 <= cell < field.grid.num_cells, 'error, cell index %s is out of range' % cell
	return float(_cell_delta_g(int(cell), field.phi, field.grid.n, stencil.neighbor_offsets, stencil.neighbor_weights, site.g_site))

def apply_flip(state, cell):
	# flip one cell and update the cache, the counts and the heap around it
	assert 0 <= cell < state.field.grid.num_cells, 'error, cell index %s is out of range' % cell
	_flip(int(cell), *state.kernel_args())

def total_energy(field, stencil, site, method='direct'):
	'''
	surface energy plus the site energies of the solvent cells plus the outside-box integrals
	'''
	solvent = field.phi == SOLVENT
	surf = surface_energy(field, stencil, method=method)
	vdw = float(np.sum(site.g_vdw[solvent])) + site.outside_vdw
	elec = float(np.sum(site.g_elec[solvent])) + site.outside_elec
	return EnergyBreakdown(surf, vdw, elec, site.outside_vdw, site.outside_elec)

def exit_scan(field, stencil, site):
	'''
	minimum from-scratch delta G over the interface-adjacent cells

	outputs:
		min_delta:      inf when no cell is interface-adjacent
		cell:           the cell attaining it, -1 when none
	'''
	band = interface_band(field, stencil.spec.kappa)
	if band.size == 0: return np.inf, -1
	values = _scan(band, field.phi, field.grid.n, stencil.neighbor_offsets, stencil.neighbor_weights, site.g_site)
	index = int(np.argmin(values))
	return float(values[index]), int(band[index]) if np.isfinite(values[index]) else -1

def replay_trace(initial_field, trace, stencil, site, every=1000):
	'''
	re-apply the recorded flips to a copy of the initial field and recompute the total energy
	from scratch every few flips

	outputs:
		checks:         list of (flip count, traced energy, recomputed energy)
	'''
	field = initial_field.copy()
	energies = trace.energies
	checks = [(0, float(energies[0]), total_energy(field, stencil, site).total)]
	for step, cell in enumerate(trace.cells, start=1):
		field.phi[cell] = -field.phi[cell]
		if step % every == 0 or step == len(trace):
			checks.append((step, float(energies[step]), total_energy(field, stencil, site).total))
	return checks

def minimize(field, stencil, site, params=None, max_flips=None, batch_flips=DEFAULT_BATCH_FLIPS, log=None, certify=True):
	'''
	extract-min and flip until no interface-adjacent flip lowers the energy

	parameters:
		field:          initial BinaryField, left untouched
		max_flips:      abort with NumericError past this many flips, default 10 n^3
		batch_flips:    flips per compiled batch, one progress line is logged per batch
		certify:        run the exhaustive exit scan

	outputs:
		final_field:    BinaryField
		breakdown:      EnergyBreakdown recomputed from scratch
		trace:          EnergyTrace
	'''
	if params is not None: assert abs(params.gamma0 - stencil.gamma0) <= 1e-12 * params.gamma0, 'error, stencil built with another gamma0'
	grid = field.grid
	if max_flips is None: max_flips = 10 * grid.num_cells
	assert batch_flips > 0, 'error, batch_flips should be positive'

	init_timer = Timer()
	init_timer.tic()
	state = FlipState(field.copy(), stencil, site)
	energy = total_energy(state.field, stencil, site).total
	init_time = init_timer.toc(average=False)
	print_log('descent init: %d cells in the heap, E0 = %.6f kBT, %.3f s' % (len(state.heap), energy, init_time), log=log)

	trace = EnergyTrace(energy)
	out_cells = np.zeros(batch_flips, dtype=np.int64)
	out_delta = np.zeros(batch_flips, dtype=np.float64)
	out_energy = np.zeros(batch_flips, dtype=np.float64)

	timer = Timer()
	timer.tic()
	flips = 0
	while len(state.heap) > 0:
		if flips >= max_flips:
			raise NumericError('descent exceeded %d flips with %d cells still in the heap' % (max_flips, len(state.heap)))
		steps = _descend(min(batch_flips, max_flips - flips), energy, *state.kernel_args(), out_cells, out_delta, out_energy)
		trace.extend(out_cells[:steps], out_delta[:steps], out_energy[:steps])
		flips += steps
		energy = float(out_energy[steps - 1])
		print_log('flips: %d, heap: %d, energy: %.6f kBT' % (flips, len(state.heap), energy), log=log, display=False)
	flip_time = timer.toc(average=False)

	breakdown = total_energy(state.field, stencil, site)
	breakdown.flips, breakdown.wall_time, breakdown.init_time = flips, flip_time, init_time
	print_log('descent done: %d flips in %.3f s, %s' % (flips, flip_time, breakdown), log=log)

	if certify:
		min_delta, cell = exit_scan(state.field, stencil, site)
		tolerance = 1e-9 * stencil.max_weight
		if min_delta < -tolerance:
			raise NumericError('exit scan found cell %d with delta G %.3e after the heap emptied' % (cell, min_delta))
	if state.field.touches_boundary():
		print_warning('final solute region touches the box boundary, consider a larger box', log=log)
	return state.field, breakdown, trace
