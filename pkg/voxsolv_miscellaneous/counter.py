# timers for the initialization and flipping phases

import time

class Timer(object):
	"""A simple timer."""
	def __init__(self):
		self.total_time = 0.
		self.calls = 0
		self.start_time = 0.
		self.diff = 0.
		self.average_time = 0.

	def tic(self):
		# perf_counter is monotonic, unaffected by wall-clock adjustments
		self.start_time = time.perf_counter()

	def toc(self, average=True):
		self.diff = time.perf_counter() - self.start_time
		self.total_time += self.diff
		self.calls += 1
		self.average_time = self.total_time / self.calls
		if average:
			return self.average_time
		else:
			return self.diff

class PhaseTimer(object):
	'''
	named wall-clock phases of one run, e.g. 'init' (grid, kernel, site energies, first heap fill)
	and 'flip' (the descent itself), reported separately in the energy report
	'''
	def __init__(self):
		self.timers = dict()

	def start(self, name):
		if name not in self.timers: self.timers[name] = Timer()
		self.timers[name].tic()

	def stop(self, name):
		assert name in self.timers, 'error, phase %s was never started' % name
		return self.timers[name].toc(average=False)

	def total(self, name):
		if name not in self.timers: return 0.0
		return self.timers[name].total_time

	def as_dict(self):
		return {name: timer.total_time for name, timer in self.timers.items()}

def get_timestring():
	return time.strftime('%Y%m%d_%Hh%Mm%Ss')
