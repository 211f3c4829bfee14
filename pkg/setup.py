"""Build hook for the optional compiled GF(2) kernel."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # fallback kernel only
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "upsilon_cover._gf2_ext",
                ["src/upsilon_cover/_gf2_ext.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
