from setuptools import Extension, setup

# The compiled kernels are an optimisation, not a requirement: if Cython
# (or a C compiler) is unavailable the package installs without the
# extension and falls back to the numpy implementation at import time.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "symsing._kernels._core",
                ["src/symsing/_kernels/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
