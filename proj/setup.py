"""Builds the _treespan extension by delegating to the CMake project.

The CMake build is the single source of truth for compiler flags and sources;
this shim configures it into the setuptools temp dir, builds only the module
target, and copies the result to wherever setuptools expects the extension.
"""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp).resolve()
        build_dir.mkdir(parents=True, exist_ok=True)
        config = "Debug" if self.debug else "Release"
        subprocess.run(
            [
                "cmake",
                str(source_dir),
                f"-DCMAKE_BUILD_TYPE={config}",
                f"-DPython3_EXECUTABLE={sys.executable}",
            ],
            cwd=build_dir,
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_treespan", "--parallel"],
            cwd=build_dir,
            check=True,
        )
        target = Path(self.get_ext_fullpath(ext.name)).resolve()
        built = sorted((build_dir / "python" / "treespan").glob("_treespan.*"))
        if not built:
            raise RuntimeError("cmake did not produce the _treespan module")
        target.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built[-1], target)


setup(
    ext_modules=[CMakeExtension("treespan._treespan")],
    cmdclass={"build_ext": CMakeBuild},
)
