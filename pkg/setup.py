import numpy as np
from setuptools import Extension, setup
from Cython.Build import cythonize

ext = Extension(
    "heatplan.powerflow._nr_cy",
    ["src/heatplan/powerflow/_nr_cy.pyx"],
    include_dirs=[np.get_include()],
    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
)

setup(
    ext_modules=cythonize(
        [ext],
        compiler_directives={"language_level": 3, "boundscheck": False, "wraparound": False},
    ),
)
