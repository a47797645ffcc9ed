import os

from setuptools import Extension, setup

# The compiled kernel is optional: without Cython (or with SEPLAB_NO_EXT=1)
# the package installs pure Python and seplab.kernels uses the fallback.
ext_modules = []
if not os.environ.get("SEPLAB_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "seplab._kernels",
                    ["src/seplab/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
