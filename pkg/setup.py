"""Builds the optional compiled kernels.

The package works without them: prereqmine._kernels falls back to a pure
numpy implementation when the extension is missing, so a failed build (no
compiler, no Cython) still yields a usable install.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = cythonize(
        [
            Extension(
                "prereqmine._kernels._native",
                ["src/prereqmine/_kernels/_native.pyx"],
                optional=True,
            )
        ],
        language_level="3",
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
