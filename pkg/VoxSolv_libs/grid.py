# uniform cell-centered voxel grid over the box [-a, a]^3 and the binary field living on it

import numpy as np
from scipy import ndimage
from voxsolv_miscellaneous import ispositivescalar, ispositiveinteger, isinteger, isspinarray

SOLUTE, SOLVENT = -1, 1

class Grid(object):
	'''
	n intervals per side, cell (i, j, k) centered at (-a + (i + 1/2) h, ...), h = 2a / n,
	cells are stored flat in x-fastest order: l = i + n * (j + n * k)
	'''
	def __init__(self, half_width_a, n):
		assert ispositivescalar(half_width_a), 'error, box half-width should be positive, got %s' % half_width_a
		assert ispositiveinteger(n), 'error, number of intervals should be a positive integer, got %s' % n
		self.half_width_a = float(half_width_a)
		self.n = int(n)
		self.h = 2.0 * self.half_width_a / self.n

	def __str__(self):
		return 'a: {}, n: {}, h: {}'.format(self.half_width_a, self.n, self.h)

	def __eq__(self, other):
		return isinstance(other, Grid) and self.half_width_a == other.half_width_a and self.n == other.n

	@property
	def num_cells(self):
		return self.n ** 3

	@property
	def shape(self):
		return (self.n, self.n, self.n)

	def linear_index(self, index):
		i, j, k = index
		assert self.contains(index), 'error, cell index %s is out of range for n = %d' % (str(index), self.n)
		return int(i) + self.n * (int(j) + self.n * int(k))

	def multi_index(self, linear):
		assert isinteger(linear) and 0 <= linear < self.num_cells, 'error, linear index %s is out of range' % linear
		linear = int(linear)
		return (linear % self.n, (linear // self.n) % self.n, linear // (self.n * self.n))

	def contains(self, index):
		return all(isinteger(tmp) and 0 <= tmp < self.n for tmp in index)

	def cell_center(self, index):
		# out-of-range index is a contract violation
		assert len(index) == 3 and self.contains(index), 'error, cell index %s is out of range for n = %d' % (str(index), self.n)
		return np.array([-self.half_width_a + (tmp + 0.5) * self.h for tmp in index])

	def axis_centers(self):
		return -self.half_width_a + (np.arange(self.n) + 0.5) * self.h

	def centers(self):
		# n^3 x 3 array of cell centers in flat (x-fastest) order
		axis = self.axis_centers()
		xx, yy, zz = np.meshgrid(axis, axis, axis, indexing='ij')
		return np.stack([xx.ravel(order='F'), yy.ravel(order='F'), zz.ravel(order='F')], axis=1)

	def to_volume(self, flat):
		# flat per-cell array -> (n, n, n) view indexed [i, j, k]
		assert flat.shape == (self.num_cells, ), 'error, expected %d cells, got %s' % (self.num_cells, str(flat.shape))
		return flat.reshape(self.shape, order='F')

	def to_flat(self, volume):
		assert volume.shape == self.shape, 'error, expected volume of shape %s' % str(self.shape)
		return np.asarray(volume).ravel(order='F')

class BinaryField(object):
	'''
	the binary level set: phi = -1 on solute cells (Omega_m), +1 on solvent cells (Omega_w)
	'''
	def __init__(self, grid, phi):
		phi = np.ascontiguousarray(phi, dtype=np.int8).reshape(-1)
		assert phi.shape == (grid.num_cells, ), 'error, field has %d cells but the grid has %d' % (phi.size, grid.num_cells)
		assert isspinarray(phi), 'error, every entry of the binary field should be -1 or +1'
		self.grid = grid
		self.phi = phi

	@classmethod
	def filled(cls, grid, value):
		assert value in (SOLUTE, SOLVENT), 'error, fill value should be -1 or +1'
		return cls(grid, np.full(grid.num_cells, value, dtype=np.int8))

	@classmethod
	def from_volume(cls, grid, volume):
		return cls(grid, grid.to_flat(volume))

	def copy(self):
		return BinaryField(self.grid, self.phi.copy())

	def negated(self):
		return BinaryField(self.grid, -self.phi)

	def volume(self):
		return self.grid.to_volume(self.phi)

	@property
	def solute_count(self):
		return int(np.count_nonzero(self.phi == SOLUTE))

	@property
	def solvent_count(self):
		return int(np.count_nonzero(self.phi == SOLVENT))

	def touches_boundary(self):
		'''
		True if any solute cell lies on the box boundary, i.e. the box was chosen too small
		'''
		vol = self.volume() == SOLUTE
		return bool(vol[0].any() or vol[-1].any() or vol[:, 0].any() or vol[:, -1].any() or vol[:, :, 0].any() or vol[:, :, -1].any())

def connected_components(field, region=SOLUTE):
	'''
	6-connectivity labeling of the cells with the requested sign

	outputs:
		count:          number of components
		labels:         flat per-cell label, dense from 0, -1 for cells of the other sign
	'''
	assert region in (SOLUTE, SOLVENT), 'error, region should be -1 (solute) or +1 (solvent)'
	structure = ndimage.generate_binary_structure(3, 1)
	labeled, count = ndimage.label(field.volume() == region, structure=structure)
	labels = field.grid.to_flat(labeled).astype(np.int64) - 1
	return int(count), labels

class QuadMesh(object):
	'''
	closed voxel-face mesh: vertices (V x 3) in Angstrom, quads (F x 4) indexing the vertices,
	counter-clockwise seen from the solvent so normals point into the solvent
	'''
	def __init__(self, vertices, quads, h):
		self.vertices = vertices
		self.quads = quads
		self.h = h

	@property
	def num_quads(self):
		return self.quads.shape[0]

	def area(self):
		return self.num_quads * self.h * self.h

	def normals(self):
		if self.num_quads == 0: return np.zeros((0, 3))
		v = self.vertices[self.quads]
		normal = np.cross(v[:, 1] - v[:, 0], v[:, 2] - v[:, 0])
		return normal / np.linalg.norm(normal, axis=1, keepdims=True)

def extract_surface_mesh(field):
	'''
	one h x h quad per face separating a solute cell from a solvent cell,
	cells outside the box are treated as solvent
	'''
	grid = field.grid
	n = grid.n
	solute = np.pad(field.volume() == SOLUTE, 1, mode='constant', constant_values=False)

	corners_all = []
	for axis in range(3):
		u, v = (axis + 1) % 3, (axis + 2) % 3
		for side in (1, -1):
			neighbor = np.roll(solute, -side, axis=axis)
			cells = np.argwhere(solute & ~neighbor)				# padded indices, >= 1
			if cells.shape[0] == 0: continue
			cells = cells - 1

			# lattice corner (integer, 0..n) of the face, then its 4 corners in (u, v)
			base = cells.copy()
			if side == 1: base[:, axis] += 1
			du, dv = np.zeros(3, dtype=np.int64), np.zeros(3, dtype=np.int64)
			du[u], dv[v] = 1, 1
			quad = np.stack([base, base + du, base + du + dv, base + dv], axis=1)		# F x 4 x 3
			if side == -1: quad = quad[:, ::-1]
			corners_all.append(quad)

	if len(corners_all) == 0:
		return QuadMesh(np.zeros((0, 3)), np.zeros((0, 4), dtype=np.int64), grid.h)

	corners = np.concatenate(corners_all, axis=0)
	lattice, inverse = np.unique(corners.reshape(-1, 3), axis=0, return_inverse=True)
	quads = inverse.reshape(-1, 4).astype(np.int64)
	vertices = -grid.half_width_a + lattice * grid.h
	return QuadMesh(vertices, quads, grid.h)

def count_interface_faces(field):
	'''
	unordered adjacent (-1, +1) cell pairs plus faces of solute cells on the box boundary
	'''
	solute = field.volume() == SOLUTE
	count = 0
	for axis in range(3):
		first = np.take(solute, range(0, field.grid.n - 1), axis=axis)
		second = np.take(solute, range(1, field.grid.n), axis=axis)
		count += int(np.count_nonzero(first != second))
		count += int(np.count_nonzero(np.take(solute, 0, axis=axis))) + int(np.count_nonzero(np.take(solute, -1, axis=axis)))
	return count
