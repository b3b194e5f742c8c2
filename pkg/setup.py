"""Build the optional compiled kernels.

The package works without them (``slpenc._pykernels`` is the fallback), so a
missing compiler or Cython only costs speed.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("SLPENC_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "slpenc._ckernels",
                    ["src/slpenc/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
