from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

import numpy
from Cython.Build import cythonize


class OptionalFlagsBuildExt(build_ext):
    """Add the fast-math-free vector flags only when the compiler takes them."""

    candidate_flags = ["-O3", "-march=native", "-funroll-loops"]
    fallback_flags = ["-O3"]

    def build_extensions(self):
        flags = self.candidate_flags if self._flags_ok(self.candidate_flags) else self.fallback_flags
        for ext in self.extensions:
            ext.extra_compile_args = flags
        super().build_extensions()

    def _flags_ok(self, flags):
        import os
        import tempfile

        with tempfile.TemporaryDirectory() as tmp:
            probe = os.path.join(tmp, "probe.c")
            with open(probe, "w") as fh:
                fh.write("int main(void) {return 0;}\n")
            try:
                self.compiler.compile([probe], output_dir=tmp, extra_postargs=flags)
            except Exception:
                return False
        return True


extensions = [
    Extension(
        name="gfrscreen._kernels",
        sources=["src/gfrscreen/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}),
    cmdclass={"build_ext": OptionalFlagsBuildExt},
)
