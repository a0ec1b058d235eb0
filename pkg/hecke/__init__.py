# This file makes the 'hecke' directory a Python package.
