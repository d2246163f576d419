import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # fall back to the numpy kernels at import time
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "pacman_ca._kernels._ckernels",
                ["src/pacman_ca/_kernels/_ckernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )

setup(ext_modules=ext_modules)
