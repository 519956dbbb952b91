"""Build script: compiles the optional Cython kernel when Cython is available."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
except ImportError:  # the pure-Python kernel is used instead
    pass
else:
    ext_modules = cythonize(
        ["src/splicekit/_ckernels.pyx"],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
