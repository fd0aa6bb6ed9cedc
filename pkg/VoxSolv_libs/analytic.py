# closed-form energy of a single atom enclosed by a sphere of radius R, and its 1-D minimization

import math, sys, numpy as np
from scipy.optimize import brentq
from VoxSolv_libs.site_energy import PhysicalParams
from VoxSolv_libs.errors import ConfigError, NumericError
from voxsolv_miscellaneous import ispositivescalar

DEFAULT_SCAN_SAMPLES = 512

class OneAtomParams(PhysicalParams):
	'''
	physical parameters plus the atom: Q (e), sigma (A), epsilon (kBT)
	'''
	def __init__(self, Q=1.0, sigma=3.5, epsilon=0.3, **physics):
		super().__init__(**physics)
		if not ispositivescalar(sigma): raise ConfigError('LJ sigma should be positive, got %s' % sigma)
		self.Q, self.sigma, self.epsilon = float(Q), float(sigma), float(epsilon)

	@classmethod
	def from_atom(cls, atom, params):
		return cls(Q=atom.charge, sigma=atom.sigma, epsilon=atom.epsilon, **params.as_dict())

	def as_dict(self):
		data = super().as_dict()
		data.update({'Q': self.Q, 'sigma': self.sigma, 'epsilon': self.epsilon})
		return data

	def _elec_factor(self):
		return self.k_e * self.Q * self.Q / 2.0 * (1.0 / self.eps_w - 1.0 / self.eps_m)

def one_atom_energy(p, R):
	'''
	outputs:
		(surf, vdw, elec, total) in kBT for the sphere of radius R around the atom
	'''
	if not R > 0: raise NumericError('sphere radius should be positive, got %s' % R)
	surf = 4.0 * math.pi * R * R * p.gamma0
	vdw = 16.0 * math.pi * p.rho_w * p.epsilon * (p.sigma ** 12 / (9.0 * R ** 9) - p.sigma ** 6 / (3.0 * R ** 3))
	elec = p._elec_factor() / R
	return surf, vdw, elec, surf + vdw + elec

def one_atom_denergy(p, R):
	# dG / dR
	if not R > 0: raise NumericError('sphere radius should be positive, got %s' % R)
	return (8.0 * math.pi * R * p.gamma0
		+ 16.0 * math.pi * p.rho_w * p.epsilon * (p.sigma ** 6 / R ** 4 - p.sigma ** 12 / R ** 10)
		- p._elec_factor() / (R * R))

def default_bracket(p):
	return (0.3 * p.sigma, 3.0 * p.sigma)

def bracketed_minimum(energy, denergy, lo, hi, samples=DEFAULT_SCAN_SAMPLES):
	'''
	lowest local minimum of energy inside [lo, hi]; dG/dR is sampled on a uniform scan and every
	- to + sign change is refined with brentq to 1e-10

	outputs:
		R_min:      location of the lowest local minimum
		G_min:      energy there
	'''
	d_lo, d_hi = denergy(lo), denergy(hi)
	if not (d_lo < 0 < d_hi):
		raise NumericError('no interior minimum in [%g, %g]: dG/dR is %.4e and %.4e at the ends' % (lo, hi, d_lo, d_hi))

	radii = np.linspace(lo, hi, samples + 1)
	slopes = np.array([denergy(R) for R in radii])
	best = None
	for index in np.flatnonzero((slopes[:-1] < 0) & (slopes[1:] >= 0)):
		left, right = float(radii[index]), float(radii[index + 1])
		if slopes[index + 1] == 0: root = right
		else: root = brentq(denergy, left, right, xtol=1e-10, rtol=4 * sys.float_info.epsilon, maxiter=500)
		value = energy(root)
		if best is None or value < best[1]: best = (root, value)
	if best is None: raise NumericError('dG/dR changes sign between samples too often in [%g, %g]' % (lo, hi))
	return best

def one_atom_minimize(p, bracket=None):
	'''
	lowest stationary minimum of G(R) inside the bracket

	outputs:
		R_star:     minimizing radius in A
		G_star:     total energy there in kBT
	'''
	if bracket is None: bracket = default_bracket(p)
	lo, hi = float(bracket[0]), float(bracket[1])
	if not 0 < lo < hi: raise NumericError('invalid bracket (%s, %s)' % (lo, hi))
	return bracketed_minimum(lambda R: one_atom_energy(p, R)[3], lambda R: one_atom_denergy(p, R), lo, hi)
