"""Build hook for the optional compiled kernel.

The Cython extension is a performance twin of ``lgmf/_kernel_py.py``; when
Cython or a C compiler is unavailable the build falls back to pure Python
silently (the extension is marked optional).
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/lgmf/_kernel_cy.pyx", language_level=3
    )
    for ext in ext_modules:
        ext.optional = True
except ImportError:
    pass

setup(ext_modules=ext_modules)
