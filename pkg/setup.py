"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure-numpy backend is
selected at import time); the build therefore tolerates a missing
compiler or Cython and falls back to a pure-Python install.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "satrack._kernels_cy",
                ["src/satrack/_kernels_cy.pyx"],
                include_dirs=[numpy.get_include()],
                # -ffp-contract=off: no fused multiply-add, so the compiled
                # loops are bit-identical to the numpy fallback on every arch
                extra_compile_args=["-O2", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - depends on toolchain
    print(f"satrack: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
