from setuptools import setup

# All configuration is in setup.cfg.
setup()
