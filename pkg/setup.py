"""Build script: compiles the optional Cython sweep kernels.

The package is fully functional without the extension (a numpy fallback is
selected at import time), so any compilation failure degrades gracefully to
a pure-Python install.
"""
import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/cylharm/_kernels.pyx"],
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": "3",
        },
    )
    include_dirs = [numpy.get_include()]
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"cylharm: skipping compiled kernels ({exc!r}); "
          "pure-python backend will be used", file=sys.stderr)
    include_dirs = []

setup(ext_modules=ext_modules, include_dirs=include_dirs)
