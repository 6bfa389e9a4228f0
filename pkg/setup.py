"""Builds the optional Cython gate kernels.

The package works without the extension: vqcnet._kernels falls back to the
NumPy implementation when the compiled module is missing.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "vqcnet._kernels._gates_cy",
                ["src/vqcnet/_kernels/_gates_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
