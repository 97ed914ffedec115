import os

import numpy as np
from setuptools import Extension, setup

# The compiled kernel is optional: without Cython or a C compiler the package
# installs with its pure-Python fallback.
ext_modules = []
if os.environ.get("SUBOPT_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "subopt._wolfe",
                    ["src/subopt/_wolfe.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
