"""Build script for the optional compiled Viterbi kernel.

The package works without the extension (a numpy fallback is selected at
import time), so a failed compile only costs speed, not functionality.
"""

from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    extensions = cythonize(
        [
            Extension(
                "ofdmcovert._kernels.viterbi_cy",
                sources=["src/ofdmcovert/_kernels/viterbi_cy.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": "3",
        },
    )
except Exception:  # pragma: no cover - build hosts without cython/compiler
    extensions = []

setup(ext_modules=extensions)
