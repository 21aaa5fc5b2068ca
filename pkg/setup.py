"""Build script.

The compiled kernel is optional: if Cython or a C compiler is missing the
install still succeeds and the package falls back to the pure-Python kernel.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "tristeiner.kernels._fast",
                sources=["src/tristeiner/kernels/_fast.pyx"],
                # fp-contract off: the compiled kernel must match the pure
                # backend bit for bit, so fused multiply-adds are disabled.
                extra_compile_args=["-O2", "-ffp-contract=off"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
