import warnings

import numpy
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the accelerator extension if possible, fall back to pure python."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            warnings.warn(f"compiled kernels skipped ({exc}); pure-python backend will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"compiled kernels skipped ({exc}); pure-python backend will be used")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [
            Extension(
                "bidisc._kernels",
                ["src/bidisc/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                # fp-contract off keeps results bit-identical to the numpy
                # fallback (FMA contraction changes the last bits).
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
