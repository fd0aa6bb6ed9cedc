import numpy as np, pytest

import init_paths
from voxsolv_miscellaneous import prepare_seed, resolve_threads, set_threads, THREADS_ENV

def test_prepare_seed():
	first = prepare_seed(7).uniform(size=4)
	second = prepare_seed(7).uniform(size=4)
	assert np.array_equal(first, second)
	assert not np.array_equal(first, prepare_seed(8).uniform(size=4))

def test_resolve_threads(monkeypatch):
	monkeypatch.setenv(THREADS_ENV, '3')
	assert resolve_threads() == 3
	assert resolve_threads(2) == 2

	monkeypatch.setenv(THREADS_ENV, ' ')
	assert resolve_threads() >= 1
	monkeypatch.delenv(THREADS_ENV)
	assert resolve_threads() >= 1
	with pytest.raises(AssertionError): resolve_threads(0)

def test_set_threads():
	assert set_threads(1) == 1
	assert set_threads(10 ** 6) >= 1

if __name__ == '__main__':
	test_prepare_seed()
