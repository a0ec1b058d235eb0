# This file makes the 'fock' directory a Python package.
