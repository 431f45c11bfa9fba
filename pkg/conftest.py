# Puts the repository root on sys.path so tests import the grtlab package in place.
