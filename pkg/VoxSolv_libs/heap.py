# array-backed indexed binary min-heap over cell indices, keyed by (delta G, cell index)
# the compiled functions work on the raw arrays so the descent loop can call them without leaving numba

import numpy as np
from numba import jit

@jit(nopython=True, cache=True)
def _less(keys, cells, a, b):
	# lexicographic (key, cell): equal keys pop the smaller cell index first
	if keys[a] < keys[b]: return True
	if keys[a] > keys[b]: return False
	return cells[a] < cells[b]

@jit(nopython=True, cache=True)
def _swap(keys, cells, pos, a, b):
	keys[a], keys[b] = keys[b], keys[a]
	cells[a], cells[b] = cells[b], cells[a]
	pos[cells[a]] = a
	pos[cells[b]] = b

@jit(nopython=True, cache=True)
def _sift_up(keys, cells, pos, slot):
	while slot > 0:
		parent = (slot - 1) >> 1
		if not _less(keys, cells, slot, parent): break
		_swap(keys, cells, pos, slot, parent)
		slot = parent

@jit(nopython=True, cache=True)
def _sift_down(keys, cells, pos, size, slot):
	while True:
		child = 2 * slot + 1
		if child >= size: break
		if child + 1 < size and _less(keys, cells, child + 1, child): child += 1
		if not _less(keys, cells, child, slot): break
		_swap(keys, cells, pos, slot, child)
		slot = child

@jit(nopython=True, cache=True)
def heap_upsert(keys, cells, pos, size, cell, key):
	'''
	insert cell with key, or change its key if already stored; size is a 1-element array
	'''
	slot = pos[cell]
	if slot < 0:
		slot = size[0]
		size[0] += 1
		keys[slot] = key
		cells[slot] = cell
		pos[cell] = slot
		_sift_up(keys, cells, pos, slot)
		return
	old = keys[slot]
	keys[slot] = key
	if key < old: _sift_up(keys, cells, pos, slot)
	elif key > old: _sift_down(keys, cells, pos, size[0], slot)

@jit(nopython=True, cache=True)
def heap_remove(keys, cells, pos, size, cell):
	# delete by cell index, no-op if absent
	slot = pos[cell]
	if slot < 0: return
	last = size[0] - 1
	size[0] = last
	pos[cell] = -1
	if slot == last: return
	keys[slot] = keys[last]
	cells[slot] = cells[last]
	pos[cells[slot]] = slot
	_sift_down(keys, cells, pos, last, slot)
	_sift_up(keys, cells, pos, slot)

@jit(nopython=True, cache=True)
def heap_upsert_many(keys, cells, pos, size, new_cells, new_keys):
	for index in range(new_cells.shape[0]):
		heap_upsert(keys, cells, pos, size, new_cells[index], new_keys[index])

@jit(nopython=True, cache=True)
def heap_pop(keys, cells, pos, size):
	# remove the root, returns (cell, key); the caller checks size > 0
	cell, key = cells[0], keys[0]
	heap_remove(keys, cells, pos, size, cell)
	return cell, key

class IndexedMinHeap(object):
	'''
	exact-membership min-heap over the cells 0 .. capacity - 1

	parameters:
		capacity:       number of cells, each stored at most once
	'''
	def __init__(self, capacity):
		assert capacity >= 0, 'error, heap capacity should be non-negative'
		self.capacity = int(capacity)
		self.keys = np.zeros(self.capacity, dtype=np.float64)
		self.cells = np.zeros(self.capacity, dtype=np.int64)
		self.pos = np.full(self.capacity, -1, dtype=np.int64)			# heap slot of every cell, -1 if absent
		self.size = np.zeros(1, dtype=np.int64)

	def __len__(self):
		return int(self.size[0])

	def __contains__(self, cell):
		return 0 <= cell < self.capacity and self.pos[cell] >= 0

	def upsert(self, cell, key):
		assert 0 <= cell < self.capacity, 'error, cell %d is outside the heap capacity %d' % (cell, self.capacity)
		heap_upsert(self.keys, self.cells, self.pos, self.size, int(cell), float(key))

	def upsert_many(self, cells, keys):
		cells = np.ascontiguousarray(cells, dtype=np.int64)
		keys = np.ascontiguousarray(keys, dtype=np.float64)
		assert cells.shape == keys.shape, 'error, cells and keys differ in length'
		assert cells.size == 0 or (cells.min() >= 0 and cells.max() < self.capacity), 'error, cell outside the heap capacity'
		heap_upsert_many(self.keys, self.cells, self.pos, self.size, cells, keys)

	def remove(self, cell):
		assert 0 <= cell < self.capacity, 'error, cell %d is outside the heap capacity %d' % (cell, self.capacity)
		heap_remove(self.keys, self.cells, self.pos, self.size, int(cell))

	def pop(self):
		assert len(self) > 0, 'error, pop from an empty heap'
		cell, key = heap_pop(self.keys, self.cells, self.pos, self.size)
		return int(cell), float(key)

	def peek(self):
		assert len(self) > 0, 'error, peek into an empty heap'
		return int(self.cells[0]), float(self.keys[0])

	def key_of(self, cell):
		assert cell in self, 'error, cell %d is not in the heap' % cell
		return float(self.keys[self.pos[cell]])

	def members(self):
		# stored cells in ascending index order
		return np.sort(self.cells[:len(self)])

	def is_consistent(self):
		'''
		heap order holds at every slot and the position map matches the slots
		'''
		size = len(self)
		for slot in range(size):
			if self.pos[self.cells[slot]] != slot: return False
			for child in (2 * slot + 1, 2 * slot + 2):
				if child < size and (self.keys[child], self.cells[child]) < (self.keys[slot], self.cells[slot]): return False
		return int(np.count_nonzero(self.pos >= 0)) == size
