"""Build script: compiles the optional speedup extension.

The package works without the extension (a pure-Python implementation of the
same kernels is selected at import time), so a failed compile only costs
performance.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible; fall back to pure Python otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler/toolchain missing
            print(f"warning: speedup extension not built ({exc}); "
                  "using pure-Python kernels")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not compile {ext.name} ({exc}); "
                  "using pure-Python kernels")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [Extension(
            "rotlab._kernels._speedups",
            ["src/rotlab/_kernels/_speedups.pyx"],
            extra_compile_args=["-O3"],
        )],
        language_level=3,
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
