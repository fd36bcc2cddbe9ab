"""Builds the optional compiled kernel extension.

The package works without it: gridcast._kernels falls back to the pure
Python implementation when the extension is missing.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "gridcast._kernels._speedups",
                ["src/gridcast/_kernels/_speedups.pyx"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
