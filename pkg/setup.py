"""Build the optional Cython kernels; the package falls back to pure Python without them."""

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = cythonize(
    [
        Extension(
            "treespile._kernels",
            ["src/treespile/_kernels.pyx"],
            include_dirs=[np.get_include()],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            optional=True,
        )
    ],
    compiler_directives={"language_level": "3"},
)

setup(ext_modules=extensions)
