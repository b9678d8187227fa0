"""Build script: compiles the optional integration kernel extension.

The extension is best-effort; when Cython or a C compiler is unavailable the
package installs anyway and the pure-Python kernels take over at import time.
"""

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:             # missing compiler etc.
            print(f"skipping compiled kernels: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"skipping compiled kernel {ext.name}: {exc}")


ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("sphereflow.kernels._kernels",
                   ["src/sphereflow/kernels/_kernels.pyx"],
                   include_dirs=[numpy.get_include()],
                   define_macros=[("NPY_NO_DEPRECATED_API",
                                   "NPY_1_7_API_VERSION")])],
        compiler_directives={"language_level": "3"},
    )
except ImportError as exc:
    print(f"skipping compiled kernels: {exc}")

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
