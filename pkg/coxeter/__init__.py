# This file makes the 'coxeter' directory a Python package.
