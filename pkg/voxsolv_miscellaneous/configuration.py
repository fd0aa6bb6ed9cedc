# seeding and worker-thread control

import os, random, numpy as np

THREADS_ENV = 'VOXSOLV_THREADS'

def prepare_seed(rand_seed):
	'''
	seed the global generators and return a dedicated numpy Generator, all randomness of a
	run (perturbed sphere centers, perturbed atoms, random test fields) flows from it
	'''
	np.random.seed(rand_seed)
	random.seed(rand_seed)
	return np.random.default_rng(rand_seed)

def resolve_threads(threads=None):
	'''
	--threads flag first, then the VOXSOLV_THREADS environment variable, then all cores;
	returns a positive integer
	'''
	if threads is None:
		env = os.environ.get(THREADS_ENV)
		if env is not None and env.strip() != '': threads = int(env)
	if threads is None: threads = os.cpu_count() or 1
	threads = int(threads)
	assert threads > 0, 'error, the number of threads should be positive, got %d' % threads
	return threads

def set_threads(threads=None):
	'''
	cap the numba worker pool, returns the thread count in effect
	'''
	import numba
	threads = min(resolve_threads(threads), numba.config.NUMBA_NUM_THREADS)
	numba.set_num_threads(threads)
	return threads
