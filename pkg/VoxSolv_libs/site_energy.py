# per-cell solvent-occupancy energies by the midpoint rule, plus the integral over the region outside the box
# units: Angstrom, kBT, elementary charges

import math, hashlib, os, numpy as np
from numba import jit, prange
from scipy import constants
from VoxSolv_libs.errors import ConfigError, NumericError
from voxsolv_miscellaneous import ispositivescalar, isfinitescalar, is3dpts, is3dptsarray, print_log
from voxsolv_io import mkdir_if_missing, is_path_exists

SINGULAR_DIST = 1e-6		# Angstrom, a cell center this close to an atom is treated as coincident
VDW_CLAMP = 1e12			# kBT, keeps such a cell solute

def coulomb_constant(temperature=298.0):
	'''
	k_e = e^2 / (4 pi eps_0 k_B T) in kBT * Angstrom / e^2, i.e. the vacuum Bjerrum length,
	560.74 at T = 298 K
	'''
	assert temperature > 0, 'error, temperature should be positive'
	return constants.e ** 2 / (4 * math.pi * constants.epsilon_0 * constants.k * temperature) / constants.angstrom

class Atom(object):
	def __init__(self, position, charge, sigma, epsilon, name='ATOM'):
		assert is3dpts(position), 'error, atom position should be 3 finite numbers'
		assert isfinitescalar(charge), 'error, atom charge should be finite'
		assert ispositivescalar(sigma), 'error, LJ sigma should be positive, got %s' % sigma
		assert isfinitescalar(epsilon) and epsilon >= 0, 'error, LJ epsilon should be non-negative, got %s' % epsilon
		self.position = np.asarray(position, dtype=np.float64)
		self.charge = float(charge)
		self.sigma = float(sigma)
		self.epsilon = float(epsilon)
		self.name = name

	def __str__(self):
		return '{} at ({:.4f}, {:.4f}, {:.4f}), Q: {}, sigma: {}, epsilon: {}'.format(self.name,
			self.position[0], self.position[1], self.position[2], self.charge, self.sigma, self.epsilon)

class AtomSet(object):
	'''
	solute atoms stored column-wise for the compiled loops
	'''
	def __init__(self, atoms=()):
		atoms = list(atoms)
		self.names = [atom.name for atom in atoms]
		self.positions = np.array([atom.position for atom in atoms], dtype=np.float64).reshape(-1, 3)
		self.charges = np.array([atom.charge for atom in atoms], dtype=np.float64)
		self.sigmas = np.array([atom.sigma for atom in atoms], dtype=np.float64)
		self.epsilons = np.array([atom.epsilon for atom in atoms], dtype=np.float64)
		assert is3dptsarray(self.positions), 'error, atom positions should be N x 3 finite coordinates'

	def __len__(self):
		return self.charges.shape[0]

	def __getitem__(self, index):
		return Atom(self.positions[index], self.charges[index], self.sigmas[index], self.epsilons[index], self.names[index])

	def __iter__(self):
		for index in range(len(self)): yield self[index]

	def max_sigma(self):
		return float(self.sigmas.max()) if len(self) else 0.0

	def as_list(self):
		return [{'name': atom.name, 'position': atom.position.tolist(), 'Q': atom.charge,
			'sigma': atom.sigma, 'epsilon': atom.epsilon} for atom in self]

class PhysicalParams(object):
	'''
	gamma0 (kBT/A^2), rho_w (A^-3), eps_m, eps_w (relative permittivities), k_e = 1/(4 pi eps_0) (kBT A / e^2)
	'''
	def __init__(self, gamma0=0.174, rho_w=0.0333, eps_m=1.0, eps_w=80.0, k_e=560.74):
		for name, value in [('gamma0', gamma0), ('rho_w', rho_w), ('eps_m', eps_m), ('eps_w', eps_w), ('k_e', k_e)]:
			if not ispositivescalar(value): raise ConfigError('physical parameter %s should be positive, got %s' % (name, value))
		self.gamma0, self.rho_w = float(gamma0), float(rho_w)
		self.eps_m, self.eps_w, self.k_e = float(eps_m), float(eps_w), float(k_e)

	@classmethod
	def from_config(cls, physics):
		return cls(gamma0=physics.gamma0, rho_w=physics.rho_w, eps_m=physics.eps_m, eps_w=physics.eps_w, k_e=physics.k_e)

	def elec_prefactor(self):
		# 1 / (32 pi^2 eps_0) (1/eps_w - 1/eps_m) written with k_e
		return self.k_e / (8.0 * math.pi) * (1.0 / self.eps_w - 1.0 / self.eps_m)

	def as_dict(self):
		return {'gamma0': self.gamma0, 'rho_w': self.rho_w, 'eps_m': self.eps_m, 'eps_w': self.eps_w, 'k_e': self.k_e}

def lj_potential(atom, r):
	# 4 eps [(sigma / r)^12 - (sigma / r)^6]
	if not r > 0: raise NumericError('LJ potential is singular at r = %s' % r)
	sr6 = (atom.sigma / r) ** 6
	return 4.0 * atom.epsilon * (sr6 * sr6 - sr6)

def coulomb_field(atoms, x):
	'''
	vacuum field sum_i Q_i (x - r_i) / |x - r_i|^3 (without the 1 / (4 pi eps_0) factor)
	'''
	x = np.asarray(x, dtype=np.float64)
	field = np.zeros(3)
	for index in range(len(atoms)):
		if atoms.charges[index] == 0: continue
		diff = x - atoms.positions[index]
		dist = np.linalg.norm(diff)
		if dist < SINGULAR_DIST: raise NumericError('Coulomb field evaluated at the center of atom %d' % index)
		field += atoms.charges[index] * diff / dist ** 3
	return field

def cfa_density(atoms, params, x):
	'''
	Coulomb-field-approximation energy density (kBT / A^3): k_e / (8 pi) (1/eps_w - 1/eps_m) |E(x)|^2
	'''
	field = coulomb_field(atoms, x)
	return params.elec_prefactor() * float(np.dot(field, field))

@jit(nopython=True, cache=True)
def _point_energy_density(x, y, z, positions, charges, sigmas, epsilons, rho_w, elec_pref):
	# (rho_w sum_j U_j, CFA density) at one point, with the clamp for coincident atoms
	vdw, ex, ey, ez = 0.0, 0.0, 0.0, 0.0
	clamped = False
	for a in range(positions.shape[0]):
		dx = x - positions[a, 0]
		dy = y - positions[a, 1]
		dz = z - positions[a, 2]
		r2 = dx * dx + dy * dy + dz * dz
		if r2 < SINGULAR_DIST * SINGULAR_DIST:
			clamped = True
			continue
		sr6 = (sigmas[a] * sigmas[a] / r2) ** 3
		vdw += 4.0 * epsilons[a] * (sr6 * sr6 - sr6)
		inv_r3 = 1.0 / (r2 * math.sqrt(r2))
		ex += charges[a] * dx * inv_r3
		ey += charges[a] * dy * inv_r3
		ez += charges[a] * dz * inv_r3
	if clamped: return VDW_CLAMP, elec_pref * (ex * ex + ey * ey + ez * ez), True
	return rho_w * vdw, elec_pref * (ex * ex + ey * ey + ez * ez), False

@jit(nopython=True, parallel=True, cache=True)
def _cell_energies(n, a, h, positions, charges, sigmas, epsilons, rho_w, elec_pref):
	num_cells = n * n * n
	g_vdw = np.zeros(num_cells)
	g_elec = np.zeros(num_cells)
	vol = h * h * h
	for cell in prange(num_cells):
		x = -a + (cell % n + 0.5) * h
		y = -a + ((cell // n) % n + 0.5) * h
		z = -a + (cell // (n * n) + 0.5) * h
		vdw, elec, clamped = _point_energy_density(x, y, z, positions, charges, sigmas, epsilons, rho_w, elec_pref)
		if clamped: g_vdw[cell] = VDW_CLAMP
		else: g_vdw[cell] = vdw * vol
		g_elec[cell] = elec * vol
	return g_vdw, g_elec

@jit(nopython=True, parallel=True, cache=True)
def _outside_box_integral(a, n_theta, n_phi, n_rho, positions, charges, sigmas, epsilons, rho_w, elec_pref):
	'''
	midpoint rule in (theta, phi, rho = 1/r) over the complement of [-a, a]^3; along each ray the
	box is left at r_exit = a / max(|u_x|, |u_y|, |u_z|), so rho runs over (0, 1 / r_exit]
	'''
	d_theta = math.pi / n_theta
	d_phi = 2.0 * math.pi / n_phi
	vdw_rows = np.zeros(n_theta)
	elec_rows = np.zeros(n_theta)
	for t in prange(n_theta):
		theta = (t + 0.5) * d_theta
		sin_t, cos_t = math.sin(theta), math.cos(theta)
		vdw_acc, elec_acc = 0.0, 0.0
		for p in range(n_phi):
			phi = (p + 0.5) * d_phi
			ux, uy, uz = sin_t * math.cos(phi), sin_t * math.sin(phi), cos_t
			rho_exit = max(abs(ux), max(abs(uy), abs(uz))) / a
			d_rho = rho_exit / n_rho
			for l in range(n_rho):
				rho = (l + 0.5) * d_rho
				r = 1.0 / rho
				vdw, elec, clamped = _point_energy_density(r * ux, r * uy, r * uz, positions, charges, sigmas, epsilons, rho_w, elec_pref)
				jac = d_rho / (rho * rho * rho * rho)
				vdw_acc += vdw * jac
				elec_acc += elec * jac
		vdw_rows[t] = vdw_acc * sin_t * d_theta * d_phi
		elec_rows[t] = elec_acc * sin_t * d_theta * d_phi
	return vdw_rows, elec_rows

def outside_box_correction(atoms, params, box_half_width, n_theta=64, n_phi=128, n_rho=64):
	'''
	(vdW, elec) integrals in kBT over the region outside the box [-a, a]^3
	'''
	if len(atoms) == 0: return 0.0, 0.0
	if np.any(np.abs(atoms.positions) >= box_half_width):
		raise ConfigError('outside-box integration needs every atom strictly inside the box [-%g, %g]^3' % (box_half_width, box_half_width))
	assert n_theta > 0 and n_phi > 0 and n_rho > 0, 'error, sample counts should be positive'
	vdw_rows, elec_rows = _outside_box_integral(float(box_half_width), int(n_theta), int(n_phi), int(n_rho), atoms.positions,
		atoms.charges, atoms.sigmas, atoms.epsilons, params.rho_w, params.elec_prefactor())
	return float(np.sum(vdw_rows)), float(np.sum(elec_rows))

class SiteEnergies(object):
	'''
	per-cell energy (kBT) of filling the cell with solvent, and the outside-box integrals
	'''
	def __init__(self, g_vdw, g_elec, outside_vdw=0.0, outside_elec=0.0):
		assert g_vdw.shape == g_elec.shape, 'error, site energy arrays differ in length'
		self.g_vdw = g_vdw
		self.g_elec = g_elec
		self.outside_vdw = float(outside_vdw)
		self.outside_elec = float(outside_elec)
		self.g_site = np.ascontiguousarray(g_vdw + g_elec)

	@classmethod
	def zeros(cls, grid):
		return cls(np.zeros(grid.num_cells), np.zeros(grid.num_cells))

def precompute_site_energies(grid, atoms, params, outside_samples=None):
	'''
	G^vdW_i = rho_w h^3 sum_j U_j(|x_i - r_j|), G^elec_i = h^3 cfa_density(x_i) for every cell;
	outside_samples = (n_theta, n_phi, n_rho) also computes the outside-box integrals
	'''
	if len(atoms) == 0:
		site = SiteEnergies.zeros(grid)
	else:
		g_vdw, g_elec = _cell_energies(grid.n, grid.half_width_a, grid.h, atoms.positions, atoms.charges,
			atoms.sigmas, atoms.epsilons, params.rho_w, params.elec_prefactor())
		site = SiteEnergies(g_vdw, g_elec)

	if outside_samples is not None and len(atoms) > 0:
		site.outside_vdw, site.outside_elec = outside_box_correction(atoms, params, grid.half_width_a, *outside_samples)
	return site

def site_energy_key(grid, atoms, params, outside_samples=None):
	# content hash of everything the site energies depend on
	digest = hashlib.sha256()
	digest.update(np.array([grid.half_width_a, grid.n], dtype=np.float64).tobytes())
	for array in [atoms.positions, atoms.charges, atoms.sigmas, atoms.epsilons]:
		digest.update(np.ascontiguousarray(array, dtype=np.float64).tobytes())
	digest.update(np.array([params.gamma0, params.rho_w, params.eps_m, params.eps_w, params.k_e], dtype=np.float64).tobytes())
	digest.update(repr(tuple(outside_samples) if outside_samples is not None else None).encode('utf-8'))
	digest.update(repr((SINGULAR_DIST, VDW_CLAMP)).encode('utf-8'))
	return digest.hexdigest()

def load_or_compute_site_energies(grid, atoms, params, outside_samples=None, cache_dir=None, log=None):
	'''
	precompute_site_energies with an optional .npz cache keyed by site_energy_key
	'''
	if cache_dir is None: return precompute_site_energies(grid, atoms, params, outside_samples)

	cache_file = os.path.join(cache_dir, 'site_%s.npz' % site_energy_key(grid, atoms, params, outside_samples))
	if is_path_exists(cache_file):
		data = np.load(cache_file)
		print_log('site energies loaded from cache %s' % cache_file, log=log, display=False)
		return SiteEnergies(data['g_vdw'], data['g_elec'], float(data['outside_vdw']), float(data['outside_elec']))

	site = precompute_site_energies(grid, atoms, params, outside_samples)
	mkdir_if_missing(cache_file)
	np.savez(cache_file, g_vdw=site.g_vdw, g_elec=site.g_elec, outside_vdw=site.outside_vdw, outside_elec=site.outside_elec)
	print_log('site energies cached to %s' % cache_file, log=log, display=False)
	return site
