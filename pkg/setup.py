"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a NumPy fallback is selected at
import time), so any failure to cythonize or compile only downgrades to the
pure-Python kernels instead of aborting the install.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that tolerates a missing or broken C toolchain."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            warnings.warn(f"skipping compiled kernels ({exc}); "
                          "falling back to pure-Python kernels")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"could not compile {ext.name} ({exc}); "
                          "falling back to pure-Python kernels")


ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("rabicav.kernels._core", ["src/rabicav/kernels/_core.pyx"])],
        language_level=3,
    )
except Exception as exc:
    warnings.warn(f"Cython unavailable ({exc}); building without compiled kernels")

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
