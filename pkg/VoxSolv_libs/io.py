# atom files in, masks / meshes / energy reports out

import math, json, numpy as np
from VoxSolv_libs.grid import Grid, BinaryField, SOLUTE, SOLVENT
from VoxSolv_libs.site_energy import Atom, AtomSet
from VoxSolv_libs.errors import AtomFileError, ConfigError
from voxsolv_io import is_path_exists, mkdir_if_missing, load_txt_file, save_txt_file
from voxsolv_miscellaneous import print_warning

ATOM_FIELDS = ['name', 'x', 'y', 'z', 'Q', 'sigma', 'epsilon']

################## loading

def parse_atoms(text, log=None):
	'''
	one atom per line: name x y z Q sigma epsilon (A, e, A, kBT), whitespace-delimited,
	blank lines and lines starting with # are skipped
	'''
	atoms = list()
	for line_number, line in enumerate(text.splitlines(), start=1):
		line = line.strip()
		if len(line) == 0 or line.startswith('#'): continue

		# parse the 7 fields in each line
		fields = line.split()
		if len(fields) != len(ATOM_FIELDS):
			raise AtomFileError('expected %d fields (%s), got %d' % (len(ATOM_FIELDS), ' '.join(ATOM_FIELDS), len(fields)), line_number)
		try: values = [float(tmp) for tmp in fields[1:]]
		except ValueError: raise AtomFileError('non-numeric field in "%s"' % line, line_number)
		if not all(math.isfinite(tmp) for tmp in values): raise AtomFileError('non-finite number in "%s"' % line, line_number)

		x, y, z, charge, sigma, epsilon = values
		if sigma <= 0: raise AtomFileError('sigma should be positive, got %s' % sigma, line_number)
		if epsilon < 0: raise AtomFileError('epsilon should be non-negative, got %s' % epsilon, line_number)
		atoms.append(Atom([x, y, z], charge, sigma, epsilon, name=fields[0]))

	atom_set = AtomSet(atoms)
	if len(atom_set) > 1:
		_, counts = np.unique(atom_set.positions, axis=0, return_counts=True)
		if np.any(counts > 1): print_warning('%d atom positions occur more than once' % int(np.sum(counts > 1)), log=log)
	return atom_set

def load_atoms(file_path, log=None):
	if not is_path_exists(file_path): raise ConfigError('atom file not found: %s' % file_path)
	lines, _ = load_txt_file(file_path)
	return parse_atoms('\n'.join(lines), log=log)

def format_atoms(atoms):
	lines = ['# ' + ' '.join(ATOM_FIELDS)]
	for atom in atoms:
		lines.append('%s %r %r %r %r %r %r' % (atom.name, float(atom.position[0]), float(atom.position[1]), float(atom.position[2]),
			atom.charge, atom.sigma, atom.epsilon))
	return '\n'.join(lines) + '\n'

def save_atoms(atoms, save_path):
	save_txt_file(format_atoms(atoms).splitlines(), save_path)

################## masks

def save_mask(field, save_path):
	'''
	text header "n a h" then n^3 raw bytes in x-fastest order, 0 = solute, 1 = solvent
	'''
	grid = field.grid
	mkdir_if_missing(save_path)
	with open(save_path, 'wb') as file:
		file.write(('%d %r %r\n' % (grid.n, grid.half_width_a, grid.h)).encode('ascii'))
		file.write((field.phi == SOLVENT).astype(np.uint8).tobytes())

def load_mask(file_path):
	if not is_path_exists(file_path): raise ConfigError('mask file not found: %s' % file_path)
	with open(file_path, 'rb') as file:
		header = file.readline().decode('ascii', errors='replace').split()
		data = file.read()
	try:
		n, a, h = int(header[0]), float(header[1]), float(header[2])
	except (IndexError, ValueError):
		raise ConfigError('mask file %s has a malformed "n a h" header' % file_path)
	if n < 1 or not a > 0: raise ConfigError('mask file %s has an invalid grid n = %d, a = %s' % (file_path, n, a))

	grid = Grid(a, n)
	if abs(grid.h - h) > 1e-12 * grid.h: raise ConfigError('mask file %s: h = %s does not match 2a / n = %s' % (file_path, h, grid.h))
	if len(data) != grid.num_cells: raise ConfigError('mask file %s holds %d cells, expected %d' % (file_path, len(data), grid.num_cells))

	raw = np.frombuffer(data, dtype=np.uint8)
	if np.any(raw > 1): raise ConfigError('mask file %s has cell values other than 0 and 1' % file_path)
	return BinaryField(grid, np.where(raw == 1, SOLVENT, SOLUTE).astype(np.int8))

################## meshes and reports

def save_obj(mesh, save_path):
	# Wavefront OBJ, 1-based quad faces
	lines = ['# voxel interface: %d vertices, %d quads, area %.6f A^2' % (mesh.vertices.shape[0], mesh.num_quads, mesh.area())]
	lines += ['v %.6f %.6f %.6f' % tuple(vertex) for vertex in mesh.vertices]
	lines += ['f %d %d %d %d' % tuple(quad + 1) for quad in mesh.quads]
	save_txt_file(lines, save_path)

def _to_builtin(data):
	# numpy scalars and arrays -> plain python for json
	if isinstance(data, dict): return {key: _to_builtin(value) for key, value in data.items()}
	if isinstance(data, (list, tuple)): return [_to_builtin(value) for value in data]
	if isinstance(data, np.ndarray): return data.tolist()
	if isinstance(data, np.generic): return data.item()
	return data

def save_json(data, save_path):
	mkdir_if_missing(save_path)
	with open(save_path, 'w') as file:
		json.dump(_to_builtin(data), file, indent=2, sort_keys=False)
		file.write('\n')

def load_json(file_path):
	if not is_path_exists(file_path): raise ConfigError('json file not found: %s' % file_path)
	with open(file_path, 'r') as file: return json.load(file)

def energy_report(breakdown, run_params, components=None, solute_cells=None):
	'''
	the energy.json content: parameter echo, breakdown with the outside-box parts itemized, timings
	'''
	report = {'params': run_params, 'energy': breakdown.as_dict()}
	if components is not None: report['solute_components'] = int(components)
	if solute_cells is not None: report['solute_cells'] = int(solute_cells)
	return report

def save_energy_json(breakdown, run_params, save_path, components=None, solute_cells=None):
	save_json(energy_report(breakdown, run_params, components, solute_cells), save_path)

def load_run_params(file_path):
	# the params block of an energy.json, used to recompute a breakdown from a mask
	report = load_json(file_path)
	if 'params' not in report: raise ConfigError('%s has no params block' % file_path)
	return report['params'], report.get('energy')
