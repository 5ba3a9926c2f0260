"""Build hook for the optional Cython kernels.

The package works without the extension; when Cython or a compiler is
missing the build falls back to the pure-Python kernels.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("CHORDCUT_NO_EXT", "") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "chordcut._ckernels",
                    ["src/chordcut/_ckernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3", "embedsignature": True},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
