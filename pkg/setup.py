"""Optional compiled kernel; the package works without it."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("HCIZ_NO_EXT", "") in ("", "0"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/hciz/algebra/_kernel.pyx"],
            compiler_directives={"language_level": 3},
            quiet=True,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
