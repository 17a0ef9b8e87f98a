"""Build script for the optional compiled kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so build failures here are non-fatal.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "rulebench.kernels._native",
                ["src/rulebench/kernels/_native.pyx"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
