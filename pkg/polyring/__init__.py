# This file makes the 'polyring' directory a Python package.
