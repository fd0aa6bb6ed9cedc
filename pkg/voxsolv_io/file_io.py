# this file contains the file-system plumbing shared by the result writers
import os

def is_path_exists(pathname):
	try: return isinstance(pathname, str) and len(pathname) > 0 and os.path.exists(pathname)
	except OSError: return False

def fileparts(input_path):
	'''
	this function return a tuple, which contains (directory, filename, extension)
	if the file has multiple extension, only last one will be displayed

	parameters:
		input_path:     a string path

	outputs:
		directory:      the parent directory
		filename:       the file name without extension
		ext:            the extension
	'''
	assert isinstance(input_path, str), 'path is not a string: %s' % input_path
	good_path = os.path.normpath(input_path)
	if input_path.endswith('/'): return (good_path, '', '')
	directory = os.path.dirname(os.path.abspath(good_path))
	filename, ext = os.path.splitext(os.path.basename(good_path))
	return (directory, filename, ext)

def mkdir_if_missing(input_path):
	'''
	create a directory if not existing:
		1. if the input is a path of file (it has an extension), create the parent directory of this file
		2. otherwise create the directory itself, including all missing parents
	'''
	directory, filename, ext = fileparts(input_path)
	if len(ext) == 0 and not input_path.endswith('/'):
		directory = os.path.normpath(os.path.abspath(input_path))
	if not is_path_exists(directory): os.makedirs(directory, exist_ok=True)

def prefix_path(prefix, suffix):
	'''
	output file for a run prefix, e.g. ('results/run1', '.energy.json') -> 'results/run1.energy.json',
	creates the parent directory
	'''
	save_path = prefix + suffix
	mkdir_if_missing(save_path)
	return save_path

def load_txt_file(file_path):
	'''
	load lines of text from a file, returns (lines, number of lines)
	'''
	assert is_path_exists(file_path), 'text file is not existing at path: %s!' % file_path
	with open(file_path, 'r') as file: data = file.read().splitlines()
	return data, len(data)

def save_txt_file(data_list, save_path):
	'''
	save a list of string to a file, one item per line
	'''
	mkdir_if_missing(save_path)
	with open(save_path, 'w') as file:
		file.write('\n'.join(['%s' % item for item in data_list]))
