"""Build script: compiles the Cython DP kernels when a toolchain is available.

The extension is optional.  If compilation fails (no compiler, no Cython),
the package installs anyway and falls back to the pure-Python kernels in
``termdisco._kernels.reference`` at import time.

To force a rebuild in place::

    python setup.py build_ext --inplace
"""

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Skip the extension instead of aborting the install on build failure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"WARNING: skipping Cython kernels ({exc}); "
                  "pure-Python fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"WARNING: failed to build {ext.name} ({exc}); "
                  "pure-Python fallback will be used")


def extensions():
    try:
        from Cython.Build import cythonize
        from setuptools.extension import Extension
    except ImportError:  # pragma: no cover - minimal environments
        return []
    ext = Extension(
        "termdisco._kernels._core",
        sources=["src/termdisco/_kernels/_core.pyx"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
