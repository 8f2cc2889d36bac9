"""Build the optional compiled core.

The extension is optional: when Cython or a C compiler is missing the
package installs without it and falls back to ``maxtail._pure``.
"""
import os
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover
            print(f"maxtail: compiled core not built ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover
            print(f"maxtail: compiled core not built ({exc})", file=sys.stderr)


ext_modules = []
if not os.environ.get("MAXTAIL_NO_EXTENSION"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        extensions = [
            Extension(
                "maxtail._core",
                ["src/maxtail/_core.pyx"],
                # no -ffast-math: the kernels must round exactly like the fallback
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ]
        ext_modules = cythonize(
            extensions,
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except Exception as exc:  # pragma: no cover
        print(f"maxtail: building without compiled core ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
