from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # NumPy fallback is selected at import time
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("gronwall._kernels", ["src/gronwall/_kernels.pyx"], extra_compile_args=["-O3"])],
        language_level=3,
    )

setup(ext_modules=ext_modules)
