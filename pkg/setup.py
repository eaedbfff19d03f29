"""Build the optional compiled kernel.  Without Cython the package installs
pure Python and selects the fallback kernel at import."""
from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        "src/pcfgames/_kernel_c.pyx",
        compiler_directives={"language_level": "3"},
        quiet=True,
    )

setup(ext_modules=ext_modules)
