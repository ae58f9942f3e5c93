"""Build hook: compile the mod-p kernel if Cython is available.

The package works without the extension; quadlie._fast falls back to the
pure-Python kernel at import time, so any build failure here is non-fatal.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/quadlie/_fast/_fpcore.pyx"],
        language_level=3,
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
