"""Build script: compiles the optional Cython kernel core.

The package is fully functional without the extension; ``rotor_caustics._kernels``
falls back to a numpy implementation when the compiled module is missing, so a
failed extension build downgrades the install instead of breaking it.
"""

import os

import numpy as np
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible, otherwise warn and continue."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(f"warning: compiled kernel build failed ({exc}); "
              "using the pure numpy fallback")


def extensions():
    from Cython.Build import cythonize

    ext = Extension(
        "rotor_caustics._kernels._core",
        sources=[os.path.join("src", "rotor_caustics", "_kernels", "_core.pyx")],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
