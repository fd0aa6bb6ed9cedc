# user-facing failures, mapped to process exit codes by main.py
# programming errors stay plain asserts

class VoxSolvError(Exception):
	exit_code = 1

class ConfigError(VoxSolvError, ValueError):
	# invalid run configuration, reported before any heavy compute
	exit_code = 2

class AtomFileError(VoxSolvError, ValueError):
	exit_code = 2

	def __init__(self, message, line_number=None):
		if line_number is not None: message = 'line %d: %s' % (line_number, message)
		super().__init__(message)
		self.line_number = line_number

class NumericError(VoxSolvError, ArithmeticError):
	# singular evaluation, exceeded iteration cap, missing bracketed minimum
	exit_code = 3
