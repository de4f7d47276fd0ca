"""Build hook for the optional compiled Toda kernels.

If Cython or a C compiler is unavailable the package still installs and uses
the numpy fallback.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("COXTK_NO_EXT", "") in ("", "0"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "coxtk._toda_c",
                    ["src/coxtk/_toda_c.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
