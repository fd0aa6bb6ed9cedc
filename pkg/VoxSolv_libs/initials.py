# initial binary fields: loose (all solute), tight (union of sigma-balls), digitized balls

import math, numpy as np
from VoxSolv_libs.grid import BinaryField, SOLUTE, SOLVENT
from VoxSolv_libs.errors import ConfigError
from VoxSolv_libs.io import load_mask
from voxsolv_miscellaneous import is3dpts, isnonnegativescalar, print_warning

INIT_KINDS = ['tight', 'loose']

def loose_initial(grid):
	return BinaryField.filled(grid, SOLUTE)

def _mark_ball(solute, grid, center, radius):
	'''
	set solute cells whose centers lie in the closed ball, only the index window around it is visited;
	returns the number of cells inside the ball
	'''
	axis = grid.axis_centers()
	window = []
	for dim in range(3):
		lo = int(max(math.floor((center[dim] - radius + grid.half_width_a) / grid.h - 0.5), 0))
		hi = int(min(math.ceil((center[dim] + radius + grid.half_width_a) / grid.h - 0.5), grid.n - 1))
		if hi < lo: return 0
		window.append(slice(lo, hi + 1))

	dx = (axis[window[0]] - center[0])[:, None, None]
	dy = (axis[window[1]] - center[1])[None, :, None]
	dz = (axis[window[2]] - center[2])[None, None, :]
	inside = dx * dx + dy * dy + dz * dz <= radius * radius
	solute[window[0], window[1], window[2]] |= inside
	return int(np.count_nonzero(inside))

def tight_initial(grid, atoms, log=None):
	'''
	cell solute iff its center is within sigma_j of some atom j
	'''
	if len(atoms) == 0: raise ConfigError('tight initial needs at least one atom, use loose or a mask for an empty atom set')
	solute = np.zeros(grid.shape, dtype=bool)
	for atom in atoms:
		if _mark_ball(solute, grid, atom.position, atom.sigma) == 0:
			print_warning('atom %s (sigma %.4f A) covers no cell center at h = %.4f A' % (atom.name, atom.sigma, grid.h), log=log)
	return BinaryField.from_volume(grid, np.where(solute, SOLUTE, SOLVENT))

def ball_field(grid, center, radius):
	'''
	digitized closed ball: solute where the cell center is within radius of center
	'''
	assert is3dpts(center), 'error, ball center should be 3 finite numbers'
	assert isnonnegativescalar(radius), 'error, ball radius should be non-negative'
	solute = np.zeros(grid.shape, dtype=bool)
	_mark_ball(solute, grid, np.asarray(center, dtype=np.float64), float(radius))
	return BinaryField.from_volume(grid, np.where(solute, SOLUTE, SOLVENT))

def sphere_field(grid, radius, rng=None, perturb=0.0):
	'''
	ball of the given radius around the origin, the center shifted uniformly in [-perturb, perturb]^3
	when rng is given; returns the field and the center used
	'''
	center = np.zeros(3)
	if rng is not None and perturb > 0: center = rng.uniform(-perturb, perturb, size=3)
	return ball_field(grid, center, radius), center

def build_initial(kind, grid, atoms, log=None):
	'''
	tight or loose by name, anything else is read as a mask file path
	'''
	if kind == 'tight': return tight_initial(grid, atoms, log=log)
	if kind == 'loose': return loose_initial(grid)

	field = load_mask(kind)
	if field.grid != grid:
		raise ConfigError('initial mask %s was written for %s, the run uses %s' % (kind, field.grid, grid))
	return field
