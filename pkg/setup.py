import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

compile_args = ["-O3", "-fno-associative-math"]
directives = {"boundscheck": False, "wraparound": False, "cdivision": True,
              "initializedcheck": False, "language_level": 3}

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [Extension("sectorflow._kernels", ["src/sectorflow/_kernels.pyx"],
                   include_dirs=[np.get_include()],
                   extra_compile_args=compile_args)],
        compiler_directives=directives,
    )

setup(ext_modules=ext_modules)
