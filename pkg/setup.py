# Builds the optional Cython kernel extension.  If Cython or the numpy
# headers are unavailable the package still installs; trapgas._kernels then
# falls back to the pure-numpy implementation at import time.
from setuptools import setup

try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "trapgas._kernels._fast",
                sources=["src/trapgas/_kernels/_fast.pyx"],
                include_dirs=[np.get_include()],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
