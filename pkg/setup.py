"""Build script: compiles the optional speedup extension.

The package is pure Python plus one optional Cython extension holding the
random-variate kernel.  If Cython or a C compiler is unavailable the build
falls back to the pure-Python kernel (chromaboltz._kernel_py) selected at
import time; set CHROMA_BOLTZ_NO_EXT=1 to skip the extension on purpose.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the extension if possible, otherwise continue without it."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: speedup extension not built ({exc}); "
                  "falling back to the pure-Python kernel")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to compile {ext.name} ({exc}); "
                  "falling back to the pure-Python kernel")


ext_modules = []
cmdclass = {}
if not os.environ.get("CHROMA_BOLTZ_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("chromaboltz._speedups",
                       ["src/chromaboltz/_speedups.pyx"])],
            language_level="3",
        )
        cmdclass = {"build_ext": optional_build_ext}
    except ImportError:
        print("warning: Cython not available; building without the "
              "speedup extension")

setup(ext_modules=ext_modules, cmdclass=cmdclass)
