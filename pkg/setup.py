"""Build script: compiles the exact-elimination kernel.

The compiled extension is optional at runtime; sgtc falls back to the pure
Python implementation when the import fails.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/sgtc/exact/_rowred.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
