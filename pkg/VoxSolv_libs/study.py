# grid-refinement studies: sphere-area convergence and one-atom energy convergence

import math, numpy as np
from VoxSolv_libs.grid import Grid
from VoxSolv_libs.kernels import KernelSpec, build_stencil, sphere_area_bias, DEFAULT_MAX_OFFSETS
from VoxSolv_libs.surface_area import FFTSurfaceEvaluator
from VoxSolv_libs.site_energy import Atom, AtomSet, PhysicalParams, precompute_site_energies
from VoxSolv_libs.initials import sphere_field, tight_initial
from VoxSolv_libs.minimizer import minimize
from VoxSolv_libs.analytic import OneAtomParams, one_atom_minimize, one_atom_energy
from VoxSolv_libs.csv_export import CSVExporter, AREA_STUDY_HEADER, ENERGY_STUDY_HEADER
from VoxSolv_libs.utils import outside_samples
from voxsolv_miscellaneous import print_log, Timer

def fit_slope(ns, errors):
	'''
	least-squares slope of log(error) against log(n), nan with fewer than 2 usable points
	'''
	ns, errors = np.asarray(ns, dtype=np.float64), np.asarray(errors, dtype=np.float64)
	keep = errors > 0
	if np.count_nonzero(keep) < 2: return float('nan')
	return float(np.polyfit(np.log(ns[keep]), np.log(errors[keep]), 1)[0])

def study_sizes(study):
	return list(range(int(study.n_min), int(study.n_max) + 1, int(study.n_step)))

def run_area_convergence(cfg, rng, save_path=None, log=None, workers=None):
	'''
	sphere of radius study.radius in [-study.a, study.a]^3, for every n the center is shifted
	uniformly within +-study.perturb * h, study.trials times; relative area error against 4 pi R^2

	outputs:
		rows:           list of dicts with the AREA_STUDY_HEADER keys
		slope:          fitted slope over all n
	'''
	study = cfg.study
	exact = 4.0 * math.pi * study.radius ** 2
	exporter = CSVExporter(save_path, AREA_STUDY_HEADER) if save_path is not None else None

	rows, ns, errors = list(), list(), list()
	timer = Timer()
	for n in study_sizes(study):
		timer.tic()
		grid = Grid(study.a, n)
		spec = KernelSpec.from_grid(cfg.kernel.kind, float(cfg.kernel.C), grid, table=cfg.kernel.get('table'))
		stencil = build_stencil(spec, grid, 1.0, cfg.kernel.get('max_offsets') or DEFAULT_MAX_OFFSETS)
		evaluator = FFTSurfaceEvaluator(stencil, workers=workers)

		trial_errors = list()
		for _ in range(int(study.trials)):
			field, _ = sphere_field(grid, study.radius, rng, study.perturb * grid.h)
			area = evaluator.surface_energy(field) / stencil.gamma0
			trial_errors.append(abs(area - exact) / exact)

		ns.append(n)
		errors.append(float(np.mean(trial_errors)))
		# signed error of the same kernel without the grid, nan once kappa exceeds the diameter
		bias = sphere_area_bias(spec, study.radius) if spec.kappa <= 2.0 * study.radius else float('nan')
		row = {'n': n, 'h': grid.h, 'kappa': spec.kappa, 'trials': int(study.trials), 'mean_rel_err': errors[-1],
			'kernel_bias': bias, 'slope_so_far': fit_slope(ns, errors)}
		rows.append(row)
		if exporter is not None: exporter.export_dict(row); exporter.flush()
		print_log('n: %3d, h: %.5f, kappa: %.5f, mean rel err: %.3e, kernel bias: %.3e, slope so far: %.3f, %.2f s' % (n, grid.h,
			spec.kappa, row['mean_rel_err'], bias, row['slope_so_far'], timer.toc(average=False)), log=log)

	slope = fit_slope(ns, errors)
	if exporter is not None: exporter.close_file()
	print_log('area convergence (%s, C = %s): fitted slope %.4f, mean rel err at n = %d: %.3e' %
		(cfg.kernel.kind, cfg.kernel.C, slope, ns[-1], errors[-1]), log=log)
	return rows, slope

def one_atom_setup(cfg):
	'''
	the one-atom study atom (at the origin) and its analytic optimum
	'''
	study = cfg.energy_study
	params = PhysicalParams.from_config(cfg.physics)
	oracle = OneAtomParams(Q=study.Q, sigma=study.sigma, epsilon=study.epsilon, **params.as_dict())
	R_star, _ = one_atom_minimize(oracle)
	return params, oracle, R_star, one_atom_energy(oracle, R_star)

def run_energy_convergence(cfg, rng, save_path=None, log=None):
	'''
	one atom near the origin of [-a, a]^3 (shifted uniformly within +-perturb * h per trial),
	tight initial, minimized energy components against the analytic optimum for every n in study.n_list
	'''
	study = cfg.energy_study
	params, oracle, R_star, reference = one_atom_setup(cfg)
	print_log('analytic optimum: R* = %.6f A, surf %.6f, vdw %.6f, elec %.6f, total %.6f kBT' % ((R_star, ) + tuple(reference)), log=log)
	exporter = CSVExporter(save_path, ENERGY_STUDY_HEADER) if save_path is not None else None

	outside = outside_samples(cfg)
	rows, ns, totals = list(), list(), list()
	for n in study.n_list:
		grid = Grid(study.a, int(n))
		spec = KernelSpec.from_grid(cfg.kernel.kind, float(cfg.kernel.C), grid, table=cfg.kernel.get('table'))
		stencil = build_stencil(spec, grid, params.gamma0, cfg.kernel.get('max_offsets') or DEFAULT_MAX_OFFSETS)

		errors = np.zeros((int(study.trials), 4))
		for trial in range(int(study.trials)):
			position = rng.uniform(-study.perturb * grid.h, study.perturb * grid.h, size=3)
			atoms = AtomSet([Atom(position, oracle.Q, oracle.sigma, oracle.epsilon, name='ATOM')])
			site = precompute_site_energies(grid, atoms, params, outside)
			_, breakdown, _ = minimize(tight_initial(grid, atoms, log=log), stencil, site, params, batch_flips=cfg.batch_flips, log=log)
			got = (breakdown.surf, breakdown.vdw, breakdown.elec, breakdown.total)
			errors[trial] = [abs(got[index] - reference[index]) / abs(reference[index]) for index in range(4)]

		mean = errors.mean(axis=0)
		ns.append(int(n))
		totals.append(float(mean[3]))
		row = {'n': int(n), 'h': grid.h, 'kappa': spec.kappa, 'trials': int(study.trials), 'surf_rel_err': float(mean[0]),
			'vdw_rel_err': float(mean[1]), 'elec_rel_err': float(mean[2]), 'total_rel_err': float(mean[3]), 'slope_so_far': fit_slope(ns, totals)}
		rows.append(row)
		if exporter is not None: exporter.export_dict(row); exporter.flush()
		print_log('n: %3d, rel err surf %.3e, vdw %.3e, elec %.3e, total %.3e' % (int(n), mean[0], mean[1], mean[2], mean[3]), log=log)

	if exporter is not None: exporter.close_file()
	return rows, fit_slope(ns, totals)
