"""Build script: compiles the optional simulation kernels.

The compiled extension is a performance twin of sptlab/_kernels_py.py; the
package works without it (set SPTLAB_NO_EXTENSION=1 to skip the build).
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the extension if possible, fall back to pure Python otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, etc.
            print(f"warning: skipping compiled kernels ({exc}); "
                  "sptlab will use the pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not compile {ext.name} ({exc}); "
                  "sptlab will use the pure-Python fallback")


ext_modules = []
cmdclass = {}
if os.environ.get("SPTLAB_NO_EXTENSION") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "sptlab._kernels",
                    ["src/sptlab/_kernels.pyx"],
                    # -ffp-contract=off keeps the arithmetic bit-identical to
                    # the pure-Python twin (no FMA contraction).
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
        cmdclass = {"build_ext": optional_build_ext}
    except ImportError:
        print("warning: Cython not available; building without compiled kernels")

setup(ext_modules=ext_modules, cmdclass=cmdclass)
