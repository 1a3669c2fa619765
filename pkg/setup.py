"""Build hook for the optional compiled arithmetic kernel.

The package is fully functional without the extension (the pure-Python
kernel is selected at import time), so a failed compile only costs speed.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "tracepir.kernels.fast",
                ["src/tracepir/kernels/fast.pyx"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
