"""Build script: compiles the Dijkstra kernel when Cython + a C compiler are present.

The package works without the extension (a pure-Python twin is selected at
import time); the extension only accelerates distance-field computations.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "subnodal._kernels._dijkstra",
                ["src/subnodal/_kernels/_dijkstra.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"subnodal: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
