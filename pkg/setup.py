"""Build script for the optional compiled core.

The package is fully functional without the extension (a pure-Python twin
of every kernel ships in liftsampler._purecore); the extension is marked
optional so a missing or failing C toolchain degrades to the fallback.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "liftsampler._core",
                sources=["src/liftsampler/_core.pyx"],
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
except ImportError:
    extensions = []

setup(ext_modules=extensions)
