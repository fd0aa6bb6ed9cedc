# checks on scalar arguments, used by the asserts guarding the solver entry points
import math, numpy as np

def isnparray(nparray_test):
	return isinstance(nparray_test, np.ndarray)

def isinteger(integer_test):
	if isnparray(integer_test): return False
	if isinstance(integer_test, (bool, np.bool_)): return False
	return isinstance(integer_test, (int, np.integer))

def isscalar(scalar_test):
	if isinstance(scalar_test, (bool, np.bool_)): return False
	return isinstance(scalar_test, (int, float, np.integer, np.floating))

def isfinitescalar(scalar_test):
	return isscalar(scalar_test) and math.isfinite(float(scalar_test))

def ispositiveinteger(integer_test):
	return isinteger(integer_test) and integer_test > 0

def ispositivescalar(scalar_test):
	return isfinitescalar(scalar_test) and scalar_test > 0

def isnonnegativescalar(scalar_test):
	return isfinitescalar(scalar_test) and scalar_test >= 0

def is3dpts(pts_test):
	'''
	a single 3d point: list, tuple or numpy array of 3 finite numbers
	'''
	try: arr = np.asarray(pts_test, dtype=np.float64)
	except (TypeError, ValueError): return False
	return arr.shape == (3, ) and bool(np.all(np.isfinite(arr)))

def is3dptsarray(pts_test):
	'''
	N x 3 numpy array of finite coordinates, N may be 0
	'''
	return isnparray(pts_test) and pts_test.ndim == 2 and pts_test.shape[1] == 3 and bool(np.all(np.isfinite(pts_test)))

def isspinarray(spin_test):
	'''
	a numpy array whose entries are all exactly -1 or +1
	'''
	return isnparray(spin_test) and bool(np.all(np.abs(spin_test) == 1))
