import os

from setuptools import setup

ext_modules = []
if not os.environ.get("VQESWEEP_NO_EXT"):
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/vqesweep/kernels/_fast.pyx",
        compiler_directives={"language_level": 3},
    )
    for ext in ext_modules:
        ext.extra_compile_args = ["-O3"]

setup(ext_modules=ext_modules)
