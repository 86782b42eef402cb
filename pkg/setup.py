"""Build script for the optional compiled decision-diagram core.

The package is pure Python except for ``elgames._bddcore``, a Cython
version of the diagram engine in ``elgames._bddcore_py``.  If Cython or
a C compiler is unavailable the extension is skipped and the package
falls back to the pure-Python core at import time.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/elgames/_bddcore.pyx"],
        compiler_directives={"language_level": "3", "boundscheck": False},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
