import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("CQARANK_SKIP_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "cqarank._kernels._native",
                    ["src/cqarank/_kernels/_native.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        # No Cython/numpy at build time: install pure-Python only, the
        # package selects the fallback kernels at import.
        ext_modules = []

setup(ext_modules=ext_modules)
