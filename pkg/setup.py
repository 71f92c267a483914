import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    USE_CYTHON = True
except ImportError:
    USE_CYTHON = False

# Set VKNOT_NO_EXT=1 to install the pure-Python package only.
SKIP_EXT = bool(os.environ.get("VKNOT_NO_EXT"))

extensions = []
if USE_CYTHON and not SKIP_EXT:
    extensions = cythonize(
        [
            Extension(
                "vknot._speedups",
                ["src/vknot/_speedups.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )

setup(ext_modules=extensions)
