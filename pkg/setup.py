"""Build script for the compiled exact-cover kernel.

The extension is optional: if Cython (or a C compiler) is unavailable the
package installs anyway and falls back to the pure-Python kernel in
``mubkit._cover_py``.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/mubkit/_cover.pyx"],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
