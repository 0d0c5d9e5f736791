"""Build the optional Cython kernels.

The extension is marked optional: if Cython or a C compiler is missing the
package installs without it and ``pubgoods.kernels`` falls back to the
pure-Python implementation.
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
                "pubgoods._kernels",
                ["src/pubgoods/_kernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
