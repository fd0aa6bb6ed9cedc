from .file_io import *
