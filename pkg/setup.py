"""Build script: compiles the optional scanning-kernel extension.

The package works without the extension (pure-Python fallback is selected
at import time), so any compiler or Cython failure downgrades to a plain
build instead of aborting the install.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "atnorm._speedups",
                sources=["src/atnorm/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - exercised only on broken toolchains
    print(f"atnorm: skipping compiled kernels ({exc!r}); pure-Python fallback will be used")

setup(ext_modules=ext_modules)
