"""Builds the Rust extension with cargo and drops the cdylib where
setuptools expects the compiled module."""

import shutil
import subprocess
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CargoBuildExt(build_ext):
    def build_extension(self, ext):
        crate_dir = Path(__file__).resolve().parent
        subprocess.run(
            ["cargo", "build", "--release", "--features", "extension-module"],
            cwd=crate_dir,
            check=True,
        )
        built = crate_dir.parent.parent / "target" / "release" / "libfank_py.so"
        dest = Path(self.get_ext_fullpath(ext.name))
        dest.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built, dest)


setup(
    ext_modules=[Extension("fank", sources=[])],
    cmdclass={"build_ext": CargoBuildExt},
)
