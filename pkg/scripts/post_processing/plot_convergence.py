# plots of the study CSVs and of a run's energy trace

import os, sys, argparse, numpy as np
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt

# Add parent directories to Python path for imports
current_dir = os.path.dirname(os.path.abspath(__file__))
root_dir = os.path.join(current_dir, '../../')
sys.path.insert(0, root_dir)

from VoxSolv_libs.csv_export import load_csv_rows
from VoxSolv_libs.study import fit_slope
from voxsolv_io import mkdir_if_missing

def parse_args():
	parser = argparse.ArgumentParser(description='VoxSolv plots')
	parser.add_argument('--area', type=str, nargs='*', default=[], help='area-convergence CSV files, one curve each')
	parser.add_argument('--energy', type=str, default=None, help='energy-convergence CSV file')
	parser.add_argument('--trace', type=str, default=None, help='trace.csv of a minimize run')
	parser.add_argument('--out', type=str, default='./results/plots', help='directory for the PNG files')
	args = parser.parse_args()
	return args

def plot_area_convergence(csv_files, save_path):
	'''
	log-log mean relative area error against n, with the fitted slope in the legend

	outputs:
		slopes:     dict from CSV file name to fitted slope
	'''
	fig = plt.figure(figsize=(7, 5))
	slopes = dict()
	for csv_file in csv_files:
		rows = load_csv_rows(csv_file)
		ns = np.array([float(row['n']) for row in rows])
		errors = np.array([float(row['mean_rel_err']) for row in rows])
		name = os.path.splitext(os.path.basename(csv_file))[0]
		slopes[name] = fit_slope(ns, errors)
		plt.loglog(ns, errors, marker='o', lw=2, label='%s (slope %.2f)' % (name, slopes[name]))
		if 'kernel_bias' in rows[0]:
			plt.loglog(ns, np.abs([float(row['kernel_bias']) for row in rows]), ls='--', lw=1, label='%s, kernel without grid' % name)

	plt.xlabel('grid intervals per side n', fontsize=14)
	plt.ylabel('mean relative area error', fontsize=14)
	plt.grid(which='both', alpha=0.3)
	plt.legend(loc=1)
	mkdir_if_missing(save_path)
	fig.savefig(save_path, bbox_inches='tight')
	plt.close(fig)
	return slopes

def plot_energy_convergence(csv_file, save_path):
	rows = load_csv_rows(csv_file)
	ns = np.array([float(row['n']) for row in rows])
	fig = plt.figure(figsize=(7, 5))
	for key in ['surf_rel_err', 'vdw_rel_err', 'elec_rel_err', 'total_rel_err']:
		plt.loglog(ns, [float(row[key]) for row in rows], marker='o', lw=2, label=key.replace('_rel_err', ''))
	plt.xlabel('grid intervals per side n', fontsize=14)
	plt.ylabel('relative error against the sphere optimum', fontsize=14)
	plt.grid(which='both', alpha=0.3)
	plt.legend(loc=1)
	mkdir_if_missing(save_path)
	fig.savefig(save_path, bbox_inches='tight')
	plt.close(fig)

def plot_trace(csv_file, save_path):
	# total energy against the flip count
	rows = load_csv_rows(csv_file)
	flips = [int(row['flip']) for row in rows]
	energies = [float(row['energy']) for row in rows]
	fig = plt.figure(figsize=(7, 5))
	plt.plot(flips, energies, lw=2)
	plt.xlabel('flips', fontsize=14)
	plt.ylabel('total energy (kBT)', fontsize=14)
	plt.grid(alpha=0.3)
	mkdir_if_missing(save_path)
	fig.savefig(save_path, bbox_inches='tight')
	plt.close(fig)

if __name__ == '__main__':

	args = parse_args()
	if len(args.area): print(plot_area_convergence(args.area, os.path.join(args.out, 'area_convergence.png')))
	if args.energy is not None: plot_energy_convergence(args.energy, os.path.join(args.out, 'energy_convergence.png'))
	if args.trace is not None: plot_trace(args.trace, os.path.join(args.out, 'trace.png'))
