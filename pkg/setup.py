import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("CHEBHALLEY_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext = Extension(
            "chebhalley._orbits",
            ["src/chebhalley/_orbits.pyx"],
            # The compiled kernels must reproduce the pure-Python backend bit
            # for bit: no FMA contraction, and no fusing of adjacent sin/cos
            # calls into glibc's sincos (which rounds differently).
            extra_compile_args=[
                "-O2",
                "-ffp-contract=off",
                "-fno-builtin-sin",
                "-fno-builtin-cos",
            ],
        )
        ext_modules = cythonize(
            ext, compiler_directives={"language_level": "3"}, quiet=True
        )

setup(ext_modules=ext_modules)
