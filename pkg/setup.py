"""Build script for the optional compiled kernels.

The package works without the extension (a numpy fallback is selected at
import time); set NECLUSTER_SKIP_EXT=1 to force a pure-Python build.
"""

import os

from setuptools import Extension, setup


def extensions():
    if os.environ.get("NECLUSTER_SKIP_EXT", "").strip() not in ("", "0"):
        return []
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "necluster._ckernels",
        ["src/necluster/_ckernels.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level="3")


setup(ext_modules=extensions())
