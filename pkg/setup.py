import os

from setuptools import Extension, setup

# The compiled kernels are optional: the package falls back to the numpy
# implementation at import time when the extension is missing.  Set
# FRACEIG_PURE_PYTHON=1 to skip compilation entirely.
ext_modules = []
if os.environ.get("FRACEIG_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "fraceig._kernels_cy",
                    sources=["src/fraceig/_kernels_cy.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
