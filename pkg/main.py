from __future__ import print_function
import os, sys, json, argparse
from VoxSolv_libs.utils import load_config, validate_config, initialize, run_params, config_from_params, build_grid
from VoxSolv_libs.io import load_atoms, save_mask, load_mask, save_obj, save_json, energy_report, load_run_params
from VoxSolv_libs.csv_export import export_trace_csv
from VoxSolv_libs.site_energy import AtomSet, PhysicalParams
from VoxSolv_libs.grid import connected_components, extract_surface_mesh
from VoxSolv_libs.initials import build_initial
from VoxSolv_libs.minimizer import minimize, total_energy
from VoxSolv_libs.analytic import OneAtomParams, one_atom_minimize, one_atom_energy, default_bracket
from VoxSolv_libs.study import run_area_convergence, run_energy_convergence
from VoxSolv_libs.errors import VoxSolvError, ConfigError
from voxsolv_io import mkdir_if_missing, prefix_path
from voxsolv_miscellaneous import get_timestring, print_log, prepare_seed, set_threads, PhaseTimer

def parse_args(argv=None):
	parser = argparse.ArgumentParser(description='VoxSolv: binary level-set solvation free energy on a voxel grid')
	subparsers = parser.add_subparsers(dest='command')

	# options shared by every subcommand
	common = argparse.ArgumentParser(add_help=False)
	common.add_argument('--config', type=str, default=None, help='YAML file laid over configs/default.yml')
	common.add_argument('--threads', type=int, default=None, help='worker threads, falls back to VOXSOLV_THREADS')
	common.add_argument('--seed', type=int, default=None, help='seed of every random choice in the run')
	common.add_argument('--kernel', type=str, default=None, help='sin2, cos1, or a full kernel kind name')
	common.add_argument('--C', type=float, default=None, help='kernel size parameter, kappa = C sqrt(h)')

	run = subparsers.add_parser('minimize', parents=[common], help='relax an initial interface by greedy flipping')
	run.add_argument('--atoms', type=str, required=True, help='atom file, one "name x y z Q sigma epsilon" per line')
	run.add_argument('--box', type=float, default=None, help='box half-width a, the box is [-a, a]^3')
	run.add_argument('--n', type=int, default=None, help='grid intervals per side')
	run.add_argument('--init', type=str, default=None, help='tight, loose or a mask.bin path')
	run.add_argument('--out', type=str, default=None, help='output prefix, default <save_root>/run')
	run.add_argument('--no_outside', action='store_true', help='skip the outside-box correction')
	run.add_argument('--compare_init', action='store_true', help='also relax from the other initial (tight <-> loose)')

	area = subparsers.add_parser('area-convergence', parents=[common], help='sphere-area convergence study')
	area.add_argument('--n_min', type=int, default=None)
	area.add_argument('--n_max', type=int, default=None)
	area.add_argument('--n_step', type=int, default=None)
	area.add_argument('--trials', type=int, default=None)
	area.add_argument('--out', type=str, default=None, help='CSV path, default <save_root>/area_<kernel>_C<C>.csv')

	oracle = subparsers.add_parser('oracle', parents=[common], help='analytic one-atom optimum as JSON')
	oracle.add_argument('--Q', type=float, default=None)
	oracle.add_argument('--sigma', type=float, default=None)
	oracle.add_argument('--epsilon', type=float, default=None)
	oracle.add_argument('--bracket', type=float, nargs=2, default=None, help='R_lo R_hi, default (0.3 sigma, 3 sigma)')

	energy = subparsers.add_parser('energy', parents=[common], help='recompute the energy breakdown of a mask')
	energy.add_argument('--mask', type=str, required=True)
	energy.add_argument('--report', type=str, default=None, help='energy.json whose parameter echo is reused')
	energy.add_argument('--atoms', type=str, default=None, help='atom file, when no report is given')

	convergence = subparsers.add_parser('energy-convergence', parents=[common], help='one-atom energy convergence study')
	convergence.add_argument('--n_list', type=int, nargs='+', default=None)
	convergence.add_argument('--trials', type=int, default=None)
	convergence.add_argument('--out', type=str, default=None, help='CSV path, default <save_root>/energy_convergence.csv')

	args = parser.parse_args(argv)
	if args.command is None: parser.error('a subcommand is required')
	return args

def apply_overrides(cfg, args):
	# command-line values win over the YAML ones
	if args.threads is not None: cfg.threads = args.threads
	if args.seed is not None: cfg.seed = args.seed
	if args.kernel is not None: cfg.kernel.kind = args.kernel
	if args.C is not None: cfg.kernel.C = args.C
	if getattr(args, 'box', None) is not None: cfg.box.a = args.box
	if getattr(args, 'n', None) is not None: cfg.grid.n = args.n
	if getattr(args, 'init', None) is not None: cfg.init = args.init
	if getattr(args, 'no_outside', False): cfg.outside.enabled = False
	for name in ['n_min', 'n_max', 'n_step']:
		if getattr(args, name, None) is not None: cfg.study[name] = getattr(args, name)
	if getattr(args, 'trials', None) is not None:
		if args.command == 'area-convergence': cfg.study.trials = args.trials
		else: cfg.energy_study.trials = args.trials
	if getattr(args, 'n_list', None) is not None: cfg.energy_study.n_list = args.n_list
	return cfg

def open_log(cfg, command, settings_show):
	log = os.path.join(cfg.save_root, 'log/log_%s_%s.txt' % (get_timestring(), command))
	mkdir_if_missing(log); log = open(log, 'w')
	for data in settings_show:
		print_log(data, log, display=False)
	return log

############ subcommands

def relax(cfg, atoms, grid, stencil, params, site, init, log):
	field = build_initial(init, grid, atoms, log=log)
	print_log('initial (%s): %d solute cells' % (init, field.solute_count), log=log)
	return minimize(field, stencil, site, params, max_flips=cfg.get('max_flips'), batch_flips=cfg.batch_flips, log=log)

def run_minimize(cfg, args, log):
	atoms = load_atoms(args.atoms, log=log)
	validate_config(cfg, atoms, require_atoms=True)
	threads = set_threads(cfg.get('threads'))
	print_log('%d atoms, %d threads' % (len(atoms), threads), log=log)

	phases = PhaseTimer()
	phases.start('init')
	grid, stencil, params, site = initialize(cfg, atoms, log=log)
	phases.stop('init')

	final, breakdown, trace = relax(cfg, atoms, grid, stencil, params, site, cfg.init, log)
	breakdown.init_time += phases.total('init')
	components, _ = connected_components(final)
	print_log('final: %s, %d solute components, %d flips, flipping %.3f s, init %.3f s' % (breakdown, components,
		breakdown.flips, breakdown.wall_time, breakdown.init_time), log=log)

	prefix = args.out if args.out is not None else os.path.join(cfg.save_root, 'run')
	report = energy_report(breakdown, run_params(cfg, atoms, stencil), components, final.solute_count)
	if args.compare_init and cfg.init in ('tight', 'loose'):
		other = 'loose' if cfg.init == 'tight' else 'tight'
		_, other_breakdown, _ = relax(cfg, atoms, grid, stencil, params, site, other, log)
		diff = abs(other_breakdown.total - breakdown.total) / max(abs(breakdown.total), 1e-300)
		report['init_comparison'] = {cfg.init: breakdown.total, other: other_breakdown.total, 'relative_difference': diff}
		print_log('initial comparison: %s %.6f, %s %.6f kBT, relative difference %.3e' % (cfg.init, breakdown.total,
			other, other_breakdown.total, diff), log=log)

	save_json(report, prefix_path(prefix, '.energy.json'))
	save_mask(final, prefix_path(prefix, '.mask.bin'))
	save_obj(extract_surface_mesh(final), prefix_path(prefix, '.obj'))
	print_log(export_trace_csv(prefix_path(prefix, '.trace.csv'), trace, grid), log=log)
	print_log('results saved with prefix %s' % prefix, log=log)

def run_area(cfg, args, log):
	validate_config(cfg, check_init=False)
	set_threads(cfg.get('threads'))
	rng = prepare_seed(cfg.seed)
	save_path = args.out if args.out is not None else os.path.join(cfg.save_root, 'area_%s_C%s.csv' % (cfg.kernel.kind, cfg.kernel.C))
	_, slope = run_area_convergence(cfg, rng, save_path=save_path, log=log, workers=cfg.get('threads'))
	print_log('fitted slope: %.4f, CSV: %s' % (slope, save_path), log=log)

def run_oracle(cfg, args):
	study = cfg.energy_study
	params = PhysicalParams.from_config(cfg.physics)
	oracle = OneAtomParams(Q=args.Q if args.Q is not None else study.Q, sigma=args.sigma if args.sigma is not None else study.sigma,
		epsilon=args.epsilon if args.epsilon is not None else study.epsilon, **params.as_dict())
	bracket = tuple(args.bracket) if args.bracket is not None else default_bracket(oracle)
	R_star, G_star = one_atom_minimize(oracle, bracket)
	surf, vdw, elec, total = one_atom_energy(oracle, R_star)
	print(json.dumps({'R_star': R_star, 'G_star': G_star, 'surf': surf, 'vdw': vdw, 'elec': elec, 'total': total,
		'params': oracle.as_dict()}, indent=2))

def run_energy(cfg, args, log):
	field = load_mask(args.mask)
	if args.report is not None:
		echo, reported = load_run_params(args.report)
		cfg, atoms = config_from_params(echo)
	else:
		reported = None
		atoms = load_atoms(args.atoms, log=log) if args.atoms is not None else AtomSet()
		cfg.box.a, cfg.grid.n = field.grid.half_width_a, field.grid.n
	validate_config(cfg, atoms, check_init=False)
	if build_grid(cfg) != field.grid: raise ConfigError('mask grid %s differs from the configured grid %s' % (field.grid, build_grid(cfg)))
	set_threads(cfg.get('threads'))

	_, stencil, _, site = initialize(cfg, atoms, log=log)
	breakdown = total_energy(field, stencil, site)
	components, _ = connected_components(field)
	result = {'energy': breakdown.as_dict(), 'solute_components': components, 'solute_cells': field.solute_count}
	if reported is not None: result['reported_total'] = reported.get('total')
	print_log(json.dumps(result, indent=2), log=log)

def run_convergence(cfg, args, log):
	validate_config(cfg, check_init=False)
	set_threads(cfg.get('threads'))
	rng = prepare_seed(cfg.seed)
	save_path = args.out if args.out is not None else os.path.join(cfg.save_root, 'energy_convergence.csv')
	_, slope = run_energy_convergence(cfg, rng, save_path=save_path, log=log)
	print_log('fitted slope of the total-energy error: %.4f, CSV: %s' % (slope, save_path), log=log)

def main(argv=None):
	args = parse_args(argv)
	log = None
	try:
		cfg, settings_show = load_config(args.config)
		cfg = apply_overrides(cfg, args)
		if args.command == 'oracle':
			run_oracle(cfg, args)
			return 0

		log = open_log(cfg, args.command.replace('-', '_'), settings_show)
		if args.command == 'minimize': run_minimize(cfg, args, log)
		elif args.command == 'area-convergence': run_area(cfg, args, log)
		elif args.command == 'energy': run_energy(cfg, args, log)
		elif args.command == 'energy-convergence': run_convergence(cfg, args, log)
		print_log('\nDone!', log=log)
		return 0
	except VoxSolvError as error:
		print_log('%s: %s' % (type(error).__name__, error), log=log, display=False)
		print('%s: %s' % (type(error).__name__, error), file=sys.stderr)
		return error.exit_code
	finally:
		if log is not None: log.close()

if __name__ == '__main__':

	sys.exit(main())
