import math, pytest
from hypothesis import given, settings, strategies as st

import init_paths
from VoxSolv_libs.analytic import OneAtomParams, one_atom_energy, one_atom_denergy, one_atom_minimize, default_bracket, \
	bracketed_minimum
from VoxSolv_libs.site_energy import Atom, PhysicalParams
from VoxSolv_libs.errors import ConfigError, NumericError

def test_energy_components():
	p = OneAtomParams()
	surf, vdw, elec, total = one_atom_energy(p, 3.0)
	assert surf == pytest.approx(4 * math.pi * 9.0 * 0.174)
	assert elec == pytest.approx(-92.29, abs=0.01)
	assert total == pytest.approx(surf + vdw + elec)
	assert one_atom_energy(p, 3.5)[1] == pytest.approx(16 * math.pi * 0.0333 * 0.3 * 3.5 ** 3 * (1.0 / 9 - 1.0 / 3))

	with pytest.raises(NumericError): one_atom_energy(p, 0.0)
	with pytest.raises(NumericError): one_atom_denergy(p, -1.0)

@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=2.0, max_value=8.0))
def test_derivative_matches_central_difference(R):
	p = OneAtomParams(Q=1.0, sigma=3.5, epsilon=0.3)
	step = 1e-5
	numeric = (one_atom_energy(p, R + step)[3] - one_atom_energy(p, R - step)[3]) / (2 * step)
	assert abs(numeric - one_atom_denergy(p, R)) <= 1e-5 * max(1.0, abs(numeric))

def test_uncharged_without_tension():
	p = OneAtomParams(Q=0.0, sigma=3.5, epsilon=0.3, gamma0=1e-12)
	R_star, G_star = one_atom_minimize(p)
	assert R_star == pytest.approx(3.5, abs=1e-8)
	assert G_star == pytest.approx(-32 * math.pi / 9 * 0.0333 * 0.3 * 3.5 ** 3, rel=1e-8)

def test_minimum_is_stationary():
	p = OneAtomParams()
	R_star, G_star = one_atom_minimize(p)
	lo, hi = default_bracket(p)
	assert lo < R_star < hi
	assert abs(one_atom_denergy(p, R_star)) < 1e-6
	assert G_star < one_atom_energy(p, R_star - 0.01)[3] and G_star < one_atom_energy(p, R_star + 0.01)[3]

@pytest.mark.parametrize('tilt, expected', [(0.3, 1.0), (-0.3, 3.0)])
def test_lowest_of_two_minima(tilt, expected):
	# minima near 1 and 3 with a maximum at 2 in between, the tilt decides which one is lower
	energy = lambda R: (R - 1) ** 2 * (R - 3) ** 2 + tilt * (R - 1)
	denergy = lambda R: 4 * (R - 1) * (R - 2) * (R - 3) + tilt
	R_min, G_min = bracketed_minimum(energy, denergy, 0.2, 3.8)
	assert abs(R_min - expected) < 0.1
	assert abs(denergy(R_min)) < 1e-8
	assert G_min == pytest.approx(energy(R_min))
	assert G_min < energy(2.0)
	assert (denergy(R_min + 1e-4) - denergy(R_min - 1e-4)) > 0

def test_tension_and_charge_shrink_the_sphere():
	base = one_atom_minimize(OneAtomParams(Q=0.0, gamma0=1e-12))[0]
	tension = one_atom_minimize(OneAtomParams(Q=0.0))[0]
	charged = one_atom_minimize(OneAtomParams(Q=1.0))[0]
	assert tension < base
	assert charged < tension

def test_bracket_errors():
	p = OneAtomParams()
	with pytest.raises(NumericError): one_atom_minimize(p, bracket=(10.0, 20.0))
	with pytest.raises(NumericError): one_atom_minimize(p, bracket=(2.0, 1.0))
	with pytest.raises(ConfigError): OneAtomParams(sigma=0.0)

def test_from_atom():
	params = PhysicalParams(gamma0=0.2)
	p = OneAtomParams.from_atom(Atom([0, 0, 0], -2.0, 3.0, 0.1), params)
	assert (p.Q, p.sigma, p.epsilon, p.gamma0) == (-2.0, 3.0, 0.1, 0.2)
	assert p.as_dict()['sigma'] == 3.0

if __name__ == '__main__':
	test_energy_components()
	test_uncharged_without_tension()
	test_minimum_is_stationary()
	test_tension_and_charge_shrink_the_sphere()
	test_bracket_errors()
	test_from_atom()
