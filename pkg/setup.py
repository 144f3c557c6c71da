"""Build script for the optional compiled ferry kernel.

The package works without the extension (a pure-Python kernel is selected at
import time); building it just makes large optimizer runs much faster.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "ferrylink.ferry._kernel",
                ["src/ferrylink/ferry/_kernel.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
