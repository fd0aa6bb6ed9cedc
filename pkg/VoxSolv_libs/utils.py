# run configuration: YAML loading, validation and construction of the run objects

import yaml, copy, math, os, numpy as np
from easydict import EasyDict as edict
from VoxSolv_libs.grid import Grid
from VoxSolv_libs.kernels import KernelSpec, KERNEL_KINDS, KERNEL_ALIASES, DEFAULT_MAX_OFFSETS, build_stencil
from VoxSolv_libs.site_energy import PhysicalParams, Atom, AtomSet, load_or_compute_site_energies
from VoxSolv_libs.initials import INIT_KINDS
from VoxSolv_libs.errors import ConfigError
from voxsolv_io import is_path_exists
from voxsolv_miscellaneous import isinteger, isscalar, print_log, log_array

DEFAULT_CONFIG = os.path.join(os.path.dirname(os.path.realpath(__file__)), '../configs/default.yml')

def Config(filename):
	listfile1 = open(filename, 'r')
	listfile2 = open(filename, 'r')
	cfg = edict(yaml.safe_load(listfile1) or {})
	settings_show = listfile2.read().splitlines()

	listfile1.close()
	listfile2.close()

	return cfg, settings_show

def _merge(base, override):
	# nested dict update, override wins
	for key, value in override.items():
		if isinstance(value, dict) and isinstance(base.get(key), dict): _merge(base[key], value)
		else: base[key] = value
	return base

def load_config(filename=None):
	'''
	configs/default.yml with the given YAML file laid over it

	outputs:
		cfg:            EasyDict of the merged settings
		settings_show:  lines of the given file (or of the defaults), echoed into the log
	'''
	if filename is not None and not is_path_exists(filename): raise ConfigError('config file not found: %s' % filename)
	default, settings_show = Config(DEFAULT_CONFIG)
	if filename is None: return default, settings_show

	try: user, settings_show = Config(filename)
	except yaml.YAMLError as error: raise ConfigError('cannot parse %s: %s' % (filename, error))
	return edict(_merge(copy.deepcopy(dict(default)), dict(user))), settings_show

def kernel_radius(cfg):
	return float(cfg.kernel.C) * math.sqrt(2.0 * float(cfg.box.a) / int(cfg.grid.n))

def margin_of(cfg, atoms):
	# clearance required across the box, default 2 max sigma + kappa
	if cfg.get('margin') is not None: return float(cfg.margin)
	return 2.0 * atoms.max_sigma() + kernel_radius(cfg)

def validate_config(cfg, atoms=None, require_atoms=False, check_init=True):
	'''
	collect every violation and raise one ConfigError, nothing heavy is computed here
	'''
	errors = list()
	n, a = cfg.grid.get('n'), cfg.box.get('a')
	if not isinteger(n) or n < 1: errors.append('grid.n should be a positive integer, got %s' % n)
	if not isscalar(a) or not a > 0: errors.append('box.a should be positive, got %s' % a)

	kind = KERNEL_ALIASES.get(cfg.kernel.kind, cfg.kernel.kind)
	if kind not in KERNEL_KINDS: errors.append('unknown kernel.kind %s, use one of %s' % (cfg.kernel.kind, ', '.join(KERNEL_KINDS)))
	if kind == 'user_tabulated' and not cfg.kernel.get('table'): errors.append('kernel.kind user_tabulated needs kernel.table')
	if not isscalar(cfg.kernel.C) or not cfg.kernel.C > 0: errors.append('kernel.C should be positive, got %s' % cfg.kernel.C)
	max_offsets = cfg.kernel.get('max_offsets') or DEFAULT_MAX_OFFSETS

	for name in ['gamma0', 'rho_w', 'eps_m', 'eps_w', 'k_e']:
		value = cfg.physics.get(name)
		if not isscalar(value) or not value > 0: errors.append('physics.%s should be positive, got %s' % (name, value))

	if check_init and cfg.init not in INIT_KINDS and not is_path_exists(str(cfg.init)):
		errors.append('init should be tight, loose or an existing mask file, got %s' % cfg.init)
	for name in ['n_theta', 'n_phi', 'n_rho']:
		value = cfg.outside.get(name)
		if not isinteger(value) or value < 1: errors.append('outside.%s should be a positive integer, got %s' % (name, value))
	if cfg.get('max_flips') is not None and (not isinteger(cfg.max_flips) or cfg.max_flips < 1):
		errors.append('max_flips should be a positive integer, got %s' % cfg.max_flips)
	if not isinteger(cfg.batch_flips) or cfg.batch_flips < 1: errors.append('batch_flips should be a positive integer, got %s' % cfg.batch_flips)
	if cfg.get('threads') is not None and (not isinteger(cfg.threads) or cfg.threads < 1):
		errors.append('threads should be a positive integer, got %s' % cfg.threads)

	# geometry checks need a valid grid
	if len(errors) == 0:
		h = 2.0 * a / n
		kappa = kernel_radius(cfg)
		if kappa <= h: errors.append('kernel radius %.4f A does not exceed h = %.4f A, increase kernel.C or grid.n' % (kappa, h))
		estimate = 4.0 / 3.0 * math.pi * (kappa / h) ** 3
		if estimate > max_offsets:
			errors.append('stencil would hold ~%d offsets, above kernel.max_offsets = %d' % (int(estimate), max_offsets))

		if atoms is not None:
			if require_atoms and len(atoms) == 0: errors.append('the atom file holds no atom')
			margin = margin_of(cfg, atoms)
			for index, atom in enumerate(atoms):
				clearance = 2.0 * (a - float(np.max(np.abs(atom.position))))
				if clearance < margin:
					errors.append('atom %d (%s) at %s leaves a clearance of %.4f A across the box, margin is %.4f A' %
						(index, atom.name, atom.position.tolist(), clearance, margin))
		if check_init and cfg.init == 'tight' and atoms is not None and len(atoms) == 0:
			errors.append('init tight needs at least one atom')

	if len(errors): raise ConfigError('invalid configuration:\n  ' + '\n  '.join(errors))

def outside_samples(cfg):
	if not cfg.outside.enabled: return None
	return (int(cfg.outside.n_theta), int(cfg.outside.n_phi), int(cfg.outside.n_rho))

def build_grid(cfg):
	return Grid(float(cfg.box.a), int(cfg.grid.n))

def build_stencil_from_config(cfg, grid, params):
	spec = KernelSpec.from_grid(cfg.kernel.kind, float(cfg.kernel.C), grid, table=cfg.kernel.get('table'))
	return build_stencil(spec, grid, params.gamma0, cfg.kernel.get('max_offsets') or DEFAULT_MAX_OFFSETS)

def initialize(cfg, atoms, log=None):
	'''
	grid, stencil, physical parameters and site energies for a validated configuration
	'''
	grid = build_grid(cfg)
	params = PhysicalParams.from_config(cfg.physics)
	stencil = build_stencil_from_config(cfg, grid, params)
	print_log('grid: %s, kernel: %s, %d stencil offsets' % (grid, stencil.spec, stencil.num_offsets), log=log)

	site = load_or_compute_site_energies(grid, atoms, params, outside_samples(cfg), cfg.get('cache_dir'), log=log)
	log_array('site vdW energies', log, site.g_vdw, display=False)
	log_array('site elec energies', log, site.g_elec, display=False)
	print_log('outside-box correction: vdW %.6f, elec %.6f kBT' % (site.outside_vdw, site.outside_elec), log=log)
	return grid, stencil, params, site

def run_params(cfg, atoms, stencil=None):
	'''
	parameter echo written into energy.json, enough to rebuild the run with config_from_params
	'''
	grid = build_grid(cfg)
	echo = {
		'box': {'a': float(cfg.box.a)},
		'grid': {'n': int(cfg.grid.n), 'h': grid.h},
		'kernel': {'kind': KERNEL_ALIASES.get(cfg.kernel.kind, cfg.kernel.kind), 'C': float(cfg.kernel.C),
			'table': cfg.kernel.get('table'), 'max_offsets': cfg.kernel.get('max_offsets') or DEFAULT_MAX_OFFSETS},
		'physics': {key: float(cfg.physics[key]) for key in ['gamma0', 'rho_w', 'eps_m', 'eps_w', 'k_e', 'temperature'] if key in cfg.physics},
		'outside': {'enabled': bool(cfg.outside.enabled), 'n_theta': int(cfg.outside.n_theta),
			'n_phi': int(cfg.outside.n_phi), 'n_rho': int(cfg.outside.n_rho)},
		'init': str(cfg.init), 'margin': margin_of(cfg, atoms), 'seed': cfg.get('seed'), 'threads': cfg.get('threads'),
		'atoms': atoms.as_list(),
	}
	if stencil is not None:
		echo['kernel'].update({'kappa': stencil.spec.kappa, 'normalization': stencil.normalization, 'num_offsets': stencil.num_offsets})
	return echo

def config_from_params(echo):
	'''
	inverse of run_params: (cfg, atoms) reproducing the echoed run
	'''
	cfg, _ = load_config(None)
	try:
		cfg.box.a, cfg.grid.n = echo['box']['a'], echo['grid']['n']
		cfg.kernel.kind, cfg.kernel.C = echo['kernel']['kind'], echo['kernel']['C']
		cfg.kernel.table, cfg.kernel.max_offsets = echo['kernel'].get('table'), echo['kernel'].get('max_offsets')
		cfg.physics.update(echo['physics'])
		cfg.outside.update(echo['outside'])
		cfg.init, cfg.margin = echo.get('init', cfg.init), echo.get('margin')
		atoms = AtomSet([Atom(tmp['position'], tmp['Q'], tmp['sigma'], tmp['epsilon'], name=tmp['name']) for tmp in echo['atoms']])
	except (KeyError, TypeError) as error:
		raise ConfigError('incomplete parameter echo, missing %s' % error)
	return edict(cfg), atoms
