"""Build script: compiles the optional rank-counting extension.

The package works without the extension (a numpy fallback is selected at
import time), so any build failure here is demoted to a warning.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/mbrank/_kernels.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover
    print(f"warning: skipping _kernels extension ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
