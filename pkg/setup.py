from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    # The extension is an accelerator only; polarks falls back to the pure
    # Python kernels when the build is unavailable.
    extensions = cythonize(
        [
            Extension(
                "polarks._core",
                ["src/polarks/_core.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    extensions = []

setup(ext_modules=extensions)
