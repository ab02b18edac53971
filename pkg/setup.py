from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # Pure-Python install; hyperghz.kernels falls back to the numpy path.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "hyperghz._kernels",
                ["src/hyperghz/_kernels.pyx"],
                # -fcx-limited-range: finite-only complex multiply, no
                # inf/nan fixup pass; amplitudes are finite by construction
                extra_compile_args=["-O3", "-fcx-limited-range"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
