from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:  # build without the compiled kernels
    ext_modules = []
else:
    ext_modules = cythonize(["src/secretpi/_ckernels.pyx"], language_level=3, quiet=True)

setup(ext_modules=ext_modules)
