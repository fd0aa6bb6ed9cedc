# -*- coding: utf-8 -*-
# logging to the terminal and to an opened log file

from __future__ import print_function
import warnings

def print_log(print_str, log, same_line=False, display=True):
	'''
	print a string to a log file

	parameters:
		print_str:          a string to print
		log:                a opened file to save the log, None to skip the file
		same_line:          True if we want to print the string without a new next line
		display:            False if we want to disable to print the string onto the terminal
	'''
	if display:
		if same_line: print('{}'.format(print_str), end='')
		else: print('{}'.format(print_str))

	if log is not None:
		if same_line: log.write('{}'.format(print_str))
		else: log.write('{}\n'.format(print_str))
		log.flush()

def print_warning(warn_str, log=None, stacklevel=2):
	'''
	raise a python warning and mirror it into the log file, so warnings are both
	catchable by the caller (pytest.warns) and kept with the run
	'''
	warnings.warn(warn_str, stacklevel=stacklevel + 1)
	print_log('WARNING: %s' % warn_str, log=log, display=False)

def log_array(text, log, array=None, display=True):
	'''
	print a text message, and the shape, min and max of a numpy array if given,
	used to summarize per-cell energy arrays after precomputation
	'''
	if array is not None:
		text = text.ljust(25)
		text += ('shape: {:16}  min: {:14.6e}  max: {:14.6e}'.format(
			str(array.shape),
			float(array.min()) if array.size else float('nan'),
			float(array.max()) if array.size else float('nan')))
	print_log(text, log=log, display=display)

