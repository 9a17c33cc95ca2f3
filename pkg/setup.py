"""Build script: compiles the sweep kernel when Cython + a C toolchain exist.

The package is fully functional without the extension (a numpy fallback is
selected at import), so any failure here downgrades to a pure build instead of
aborting the install.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # toolchain missing or broken
            print(f"plaitnest: skipping compiled kernel ({exc!r})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"plaitnest: skipping {ext.name} ({exc!r})")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "plaitnest.geometry._kernels",
        ["src/plaitnest/geometry/_kernels.pyx"],
        # -ffp-contract=off keeps the compiled kernel bit-identical to the
        # numpy fallback (no FMA fusion of the crossing determinants).
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
