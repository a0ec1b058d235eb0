# This file makes the 'soergel' directory a Python package.
