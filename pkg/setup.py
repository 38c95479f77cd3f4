import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "gourds._kernel_c",
                ["src/gourds/_kernel_c.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )
except ImportError:
    # the pure-Python kernel twin is used when the extension is unavailable
    extensions = []

setup(ext_modules=extensions)
