# This file makes the 'mult' directory a Python package.
