"""Build script: compiles the optional LBT event-loop extension.

The package works without the extension (a pure-Python kernel is selected
at import time), so a failed compile only costs speed. Set MIDMILE_NO_EXT=1
to skip the extension build entirely.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("MIDMILE_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "midmile._lbtcore",
                    ["src/midmile/_lbtcore.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    # -ffp-contract=off keeps float results bit-identical to the
                    # pure-Python kernel (no fused multiply-add contraction).
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "language_level": 3,
            },
        )
    except Exception as exc:  # pragma: no cover - build-environment dependent
        print(f"warning: building without the compiled kernel ({exc})")

setup(ext_modules=ext_modules)
