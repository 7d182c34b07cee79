"""Build script for the compiled evaluator extension.

The package works without the extension (a numpy fallback is selected at
import time); building it speeds up the quadrature hot loops
considerably.  `pip install -e . --no-build-isolation` builds in place.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "formcalc._core",
                ["src/formcalc/_core.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3", "-fno-math-errno"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
