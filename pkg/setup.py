"""Build the optional compiled scan kernel.

The package is pure Python except for g2heights._scan, a small Cython
kernel for the enumeration inner loop.  If Cython or a C compiler is not
available the build proceeds without it and the package falls back to the
numpy scan path at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/g2heights/_scan.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception:
    pass

setup(ext_modules=ext_modules)
