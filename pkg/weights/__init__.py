# This file makes the 'weights' directory a Python package.
