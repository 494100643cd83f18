"""Build the optional compiled ranking kernel.

The package works without it; absynth.ranking falls back to the pure
Python implementation when the extension is missing.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("absynth._bpath", ["src/absynth/_bpath.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
