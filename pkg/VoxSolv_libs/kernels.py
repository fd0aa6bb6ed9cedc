# compactly supported radial kernels, their normalization constant and the discrete stencil K_ij

import math, numpy as np
from scipy.integrate import quad
from scipy.special import gamma as gamma_function
from VoxSolv_libs.errors import ConfigError, NumericError
from voxsolv_miscellaneous import ispositivescalar, print_warning

KERNEL_KINDS = ['sin_squared', 'cos_plus_one', 'user_tabulated']
KERNEL_ALIASES = {'sin2': 'sin_squared', 'cos1': 'cos_plus_one', 'table': 'user_tabulated'}
DEFAULT_MAX_OFFSETS = 2000000

class KernelSpec(object):
	'''
	kernel K on [0, 1] scaled to radius kappa = C * sqrt(h)

	parameters:
		kind:       sin_squared (K1 = sin^2(pi r)), cos_plus_one (K2 = cos(pi r) + 1) or user_tabulated
		C:          size parameter
		kappa:      kernel radius in Angstrom
		d:          dimension
		table:      for user_tabulated, list of (r, K(r)) samples, linearly interpolated
	'''
	def __init__(self, kind, C, kappa, d=3, table=None):
		kind = KERNEL_ALIASES.get(kind, kind)
		if kind not in KERNEL_KINDS: raise ConfigError('unknown kernel kind %s, use one of %s' % (kind, ', '.join(KERNEL_KINDS)))
		if not ispositivescalar(C): raise ConfigError('kernel size parameter C should be positive, got %s' % C)
		if not ispositivescalar(kappa): raise ConfigError('kernel radius should be positive, got %s' % kappa)
		assert d >= 2, 'error, kernel dimension should be at least 2'
		self.kind, self.C, self.kappa, self.d = kind, float(C), float(kappa), int(d)

		self.table = None
		if kind == 'user_tabulated':
			if table is None or len(table) < 2: raise ConfigError('user_tabulated kernel needs kernel.table with at least 2 (r, K) samples')
			table = np.asarray(table, dtype=np.float64)
			if table.ndim != 2 or table.shape[1] != 2: raise ConfigError('kernel.table should be a list of (r, K(r)) pairs')
			order = np.argsort(table[:, 0])
			table = table[order]
			if table[0, 0] > 0 or table[-1, 0] < 1: raise ConfigError('kernel.table should cover r in [0, 1]')
			if np.any(table[:, 1] < 0): raise ConfigError('kernel.table values should be non-negative')
			if abs(np.interp(1.0, table[:, 0], table[:, 1])) > 0:
				print_warning('tabulated kernel does not vanish at r = 1, the first-order area guarantee degrades')
			self.table = table

	@classmethod
	def from_grid(cls, kind, C, grid, d=3, table=None):
		return cls(kind, C, C * math.sqrt(grid.h), d=d, table=table)

	def __str__(self):
		return 'kind: {}, C: {}, kappa: {}, d: {}'.format(self.kind, self.C, self.kappa, self.d)

	def as_dict(self):
		data = {'kind': self.kind, 'C': self.C, 'kappa': self.kappa, 'd': self.d}
		if self.table is not None: data['table'] = self.table.tolist()
		return data

def kernel_value(spec, r):
	'''
	K(r) for a scalar or an array of dimensionless radii r >= 0, zero for r >= 1
	'''
	r_arr = np.asarray(r, dtype=np.float64)
	assert np.all(r_arr >= 0), 'error, kernel radius argument should be non-negative'

	inside = r_arr < 1.0
	if spec.kind == 'sin_squared':   value = np.sin(np.pi * r_arr) ** 2
	elif spec.kind == 'cos_plus_one': value = np.cos(np.pi * r_arr) + 1.0
	else: value = np.interp(r_arr, spec.table[:, 0], spec.table[:, 1])
	value = np.where(inside, value, 0.0)

	if np.ndim(r) == 0: return float(value)
	return value

def dimension_constant(d):
	# C_d = 2 pi^((d-1)/2) / ((d-1) Gamma((d-1)/2)), C_2 = 2, C_3 = pi
	return 2.0 * math.pi ** ((d - 1) / 2.0) / ((d - 1) * gamma_function((d - 1) / 2.0))

def radial_moment(spec, power=None):
	'''
	int_0^1 K(r) r^power dr (power defaults to d) by adaptive quadrature, relative tolerance 1e-10;
	a tabulated kernel is piecewise linear, so its moment is summed exactly segment by segment
	'''
	if power is None: power = spec.d
	if spec.table is not None: return _tabulated_moment(spec.table, power)
	moment, _ = quad(lambda r: kernel_value(spec, r) * r ** power, 0.0, 1.0, epsabs=0.0, epsrel=1e-10, limit=200)
	return moment

def _tabulated_moment(table, d):
	r = np.clip(table[:, 0], 0.0, 1.0)
	k = table[:, 1]
	r0, r1, k0, k1 = r[:-1], r[1:], k[:-1], k[1:]
	keep = r1 > r0
	r0, r1, k0, k1 = r0[keep], r1[keep], k0[keep], k1[keep]

	# K = alpha + beta r on each segment
	beta = (k1 - k0) / (r1 - r0)
	alpha = k0 - beta * r0
	return float(np.sum(alpha * (r1 ** (d + 1) - r0 ** (d + 1)) / (d + 1) + beta * (r1 ** (d + 2) - r0 ** (d + 2)) / (d + 2)))

def kernel_constant(spec):
	'''
	C_{K,kappa,d} = (kappa^(d+1) C_d int_0^1 K(r) r^d dr)^-1
	'''
	moment = radial_moment(spec)
	if not moment > 0: raise NumericError('degenerate kernel, the radial moment is %s' % moment)
	return 1.0 / (spec.kappa ** (spec.d + 1) * dimension_constant(spec.d) * moment)

class KernelStencil(object):
	'''
	integer offsets o with |o| h <= kappa and weights K_o = gamma0 C_{K,kappa,d} h^6 K(|o| h / kappa),
	the center offset is kept, offsets are closed under negation
	'''
	def __init__(self, spec, grid, gamma0, offsets, weights, normalization):
		self.spec = spec
		self.grid = grid
		self.gamma0 = gamma0
		self.offsets = offsets
		self.weights = weights
		self.normalization = normalization

		# neighbors without the center, the only ones entering the energy sums
		not_center = np.any(offsets != 0, axis=1)
		self.neighbor_offsets = np.ascontiguousarray(offsets[not_center])
		self.neighbor_weights = np.ascontiguousarray(weights[not_center])
		self.radius_cells = int(np.abs(offsets).max()) if offsets.size else 0

	@property
	def num_offsets(self):
		return self.offsets.shape[0]

	@property
	def max_weight(self):
		return float(np.abs(self.weights).max())

	def kernel_volume(self):
		# dense (2R+1)^3 weight array centered on the zero offset, indexed [dx, dy, dz]
		size = 2 * self.radius_cells + 1
		volume = np.zeros((size, size, size), dtype=np.float64)
		shifted = self.offsets + self.radius_cells
		volume[shifted[:, 0], shifted[:, 1], shifted[:, 2]] = self.weights
		return volume

def build_stencil(spec, grid, gamma0, max_offsets=DEFAULT_MAX_OFFSETS):
	'''
	enumerate every integer offset within the closed ball of radius kappa / h
	'''
	if not ispositivescalar(gamma0): raise ConfigError('surface tension gamma0 should be positive, got %s' % gamma0)
	assert spec.d == 3, 'error, the discrete stencil is three-dimensional'
	h = grid.h
	if spec.kappa <= h:
		raise ConfigError('kernel radius %.4f A does not exceed the cell size %.4f A, increase kernel.C or n' % (spec.kappa, h))

	radius = spec.kappa / h
	estimate = 4.0 / 3.0 * math.pi * radius ** 3
	if estimate > max_offsets:
		raise ConfigError('stencil would hold ~%d offsets (kappa / h = %.1f) above the cap of %d, '
			'lower kernel.C, use a coarser grid or raise kernel.max_offsets' % (int(estimate), radius, max_offsets))

	reach = int(math.floor(radius + 1e-9))
	axis = np.arange(-reach, reach + 1, dtype=np.int64)
	dx, dy, dz = np.meshgrid(axis, axis, axis, indexing='ij')
	offsets = np.stack([dx.ravel(), dy.ravel(), dz.ravel()], axis=1)
	norm2 = np.sum(offsets * offsets, axis=1)

	# closed ball, the relative slack keeps lattice points exactly at kappa
	offsets = offsets[norm2 <= radius * radius * (1.0 + 1e-12)]
	dist = np.sqrt(np.sum(offsets * offsets, axis=1).astype(np.float64)) * h

	normalization = kernel_constant(spec)
	weights = gamma0 * normalization * h ** 6 * kernel_value(spec, np.minimum(dist / spec.kappa, 1.0))
	return KernelStencil(spec, grid, float(gamma0), np.ascontiguousarray(offsets), np.ascontiguousarray(weights), normalization)

def flat_interface_ratio(stencil):
	'''
	estimated area per unit area of an infinite grid-aligned plane, C h^4 sum_{dx > 0} dx K,
	tends to 1 at first order
	'''
	dx = stencil.offsets[:, 0]
	h = stencil.grid.h
	return float(np.sum(np.where(dx > 0, dx, 0) * stencil.weights) / (stencil.gamma0 * h * h))

def sphere_area_bias(spec, radius):
	'''
	relative error of the continuous kernel estimate (no grid) of the area of a ball, exact for
	kappa <= 2 radius; there |B| - |B cap (B + s)| = pi R^2 t - pi t^3 / 12 with t = |s|, so the
	estimate is 4 pi R^2 (1 - kappa^2 M_5 / (12 R^2 M_3)), M_p = int_0^1 K(r) r^p dr
	'''
	assert spec.d == 3, 'error, the ball bias is three-dimensional'
	assert ispositivescalar(radius), 'error, ball radius should be positive'
	if spec.kappa > 2.0 * radius: raise NumericError('kernel radius %.4f exceeds the ball diameter %.4f' % (spec.kappa, 2.0 * radius))
	return -spec.kappa ** 2 * radial_moment(spec, 5) / (12.0 * radius ** 2 * radial_moment(spec, 3))
