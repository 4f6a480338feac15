from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/concatqec/backends/_kernels.pyx",
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # The package runs on the pure-numpy backend if Cython is unavailable.
    ext_modules = []

setup(ext_modules=ext_modules)
