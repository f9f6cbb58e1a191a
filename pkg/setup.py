"""Build script for the optional compiled kernels.

The Cython extension is optional: if Cython is missing or compilation
fails, the package falls back to the numpy implementation at import time.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "calabi_workbench._ckernels",
                ["src/calabi_workbench/_ckernels.pyx"],
                extra_compile_args=["-O3", "-fno-math-errno"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )

setup(ext_modules=ext_modules)
