import numpy as np, pytest
from hypothesis import given, strategies as st

import init_paths
from VoxSolv_libs.grid import Grid, BinaryField, SOLUTE, SOLVENT, connected_components, extract_surface_mesh, count_interface_faces

def test_cell_center():
	grid = Grid(1.0, 4)
	assert grid.h == 0.5
	assert np.allclose(grid.cell_center((0, 0, 0)), [-0.75, -0.75, -0.75])
	assert np.allclose(grid.cell_center((3, 0, 2)), [0.75, -0.75, 0.25])

	grid = Grid(2.0, 2)
	assert np.allclose(grid.cell_center((1, 1, 1)), [1.0, 1.0, 1.0])
	assert np.allclose(Grid(1.0, 2).cell_center((0, 0, 0)), [-0.5, -0.5, -0.5])
	assert np.allclose(Grid(5.0, 100).cell_center((50, 50, 50)), [0.05, 0.05, 0.05])

	with pytest.raises(AssertionError): grid.cell_center((2, 0, 0))
	with pytest.raises(AssertionError): grid.cell_center((-1, 0, 0))

def test_grid_invalid():
	with pytest.raises(AssertionError): Grid(1.0, 0)
	with pytest.raises(AssertionError): Grid(-1.0, 4)
	with pytest.raises(AssertionError): Grid(1.0, 2.5)

def test_centers_flat_order():
	grid = Grid(1.5, 3)
	centers = grid.centers()
	assert centers.shape == (27, 3)
	for linear in [0, 1, 5, 13, 26]:
		assert np.allclose(centers[linear], grid.cell_center(grid.multi_index(linear)))
	# x runs fastest
	assert centers[1, 0] > centers[0, 0] and centers[1, 1] == centers[0, 1]

@given(st.integers(min_value=1, max_value=12), st.data())
def test_index_round_trip(n, data):
	grid = Grid(1.0, n)
	index = tuple(data.draw(st.integers(min_value=0, max_value=n - 1)) for _ in range(3))
	assert grid.multi_index(grid.linear_index(index)) == index

def test_volume_view():
	grid = Grid(1.0, 5)
	flat = np.arange(grid.num_cells)
	vol = grid.to_volume(flat)
	assert vol[2, 3, 4] == grid.linear_index((2, 3, 4))
	assert np.array_equal(grid.to_flat(vol), flat)

def test_binary_field():
	grid = Grid(1.0, 4)
	field = BinaryField.filled(grid, SOLVENT)
	assert field.solute_count == 0 and field.solvent_count == 64
	field.phi[grid.linear_index((1, 2, 1))] = SOLUTE
	assert field.solute_count == 1
	assert field.negated().solute_count == 63
	assert not field.touches_boundary()
	assert BinaryField.filled(grid, SOLUTE).touches_boundary()

	with pytest.raises(AssertionError): BinaryField(grid, np.zeros(64))
	with pytest.raises(AssertionError): BinaryField(grid, np.ones(63))

def test_connected_components():
	grid = Grid(1.0, 6)
	vol = np.full(grid.shape, SOLVENT, dtype=np.int8)
	vol[1, 1, 1] = SOLUTE
	vol[4, 4, 4] = SOLUTE
	vol[4, 4, 3] = SOLUTE
	field = BinaryField.from_volume(grid, vol)
	count, labels = connected_components(field)
	assert count == 2
	assert labels[grid.linear_index((4, 4, 4))] == labels[grid.linear_index((4, 4, 3))]
	assert labels[grid.linear_index((1, 1, 1))] != labels[grid.linear_index((4, 4, 4))]
	assert labels[grid.linear_index((0, 0, 0))] == -1

	# diagonal contact does not connect under 6-connectivity
	vol[2, 2, 2] = SOLUTE
	count, _ = connected_components(BinaryField.from_volume(grid, vol))
	assert count == 3

	count, _ = connected_components(BinaryField.filled(grid, SOLUTE))
	assert count == 1
	count, _ = connected_components(BinaryField.filled(grid, SOLVENT), region=SOLVENT)
	assert count == 1

def test_surface_mesh_single_voxel():
	grid = Grid(1.0, 4)
	field = BinaryField.filled(grid, SOLVENT)
	field.phi[grid.linear_index((1, 1, 1))] = SOLUTE
	mesh = extract_surface_mesh(field)
	assert mesh.num_quads == 6
	assert mesh.vertices.shape == (8, 3)
	assert np.isclose(mesh.area(), 6 * grid.h ** 2)

	# normals point from the voxel center into the solvent
	center = grid.cell_center((1, 1, 1))
	face_centers = mesh.vertices[mesh.quads].mean(axis=1)
	assert np.all(np.sum(mesh.normals() * (face_centers - center), axis=1) > 0)

def test_surface_mesh_counts():
	grid = Grid(1.0, 6)
	rng = np.random.default_rng(3)
	for _ in range(5):
		field = BinaryField(grid, rng.choice(np.array([SOLUTE, SOLVENT], dtype=np.int8), size=grid.num_cells))
		assert extract_surface_mesh(field).num_quads == count_interface_faces(field)

	block = BinaryField.filled(grid, SOLVENT)
	block.phi[[grid.linear_index((2, 3, 3)), grid.linear_index((3, 3, 3))]] = SOLUTE
	assert extract_surface_mesh(block).num_quads == 10

	# the whole box: only the 6 n^2 boundary faces
	assert count_interface_faces(BinaryField.filled(grid, SOLUTE)) == 6 * 36
	assert extract_surface_mesh(BinaryField.filled(grid, SOLVENT)).num_quads == 0

if __name__ == '__main__':
	test_cell_center()
	test_grid_invalid()
	test_centers_flat_order()
	test_volume_view()
	test_binary_field()
	test_connected_components()
	test_surface_mesh_single_voxel()
	test_surface_mesh_counts()
