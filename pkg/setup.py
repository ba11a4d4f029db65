"""Build script: compiles the optional simplex speedup extension.

The package is fully functional without the extension (a pure-Python
kernel is selected at import time), so any build failure here downgrades
to a warning instead of aborting the install.
"""

import sys

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = cythonize(
        [
            Extension(
                "effix._kernel._speedups",
                ["src/effix/_kernel/_speedups.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - depends on toolchain
    print(f"warning: skipping speedup extension ({exc}); "
          "falling back to the pure-Python kernel", file=sys.stderr)
    extensions = []

setup(ext_modules=extensions)
