"""Build script for the compiled integrator kernels.

The package works without the extension (a numpy fallback is selected at
import time), so a failed compile is not fatal for development installs:
run with WINFREE_SKIP_EXT=1 to skip the extension entirely.
"""

import os

import numpy as np
from setuptools import Extension, setup

if os.environ.get("WINFREE_SKIP_EXT", "") not in ("", "0"):
    ext_modules = []
else:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "winfree.backends._fast",
                ["src/winfree/backends/_fast.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
