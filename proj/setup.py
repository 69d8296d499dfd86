"""Builds the _gclist extension through the project's CMake tree."""

import shutil
import subprocess
import sys
from pathlib import Path

import pybind11
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).parent.resolve()
        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        subprocess.run(
            [
                "cmake",
                str(source_dir),
                "-DCMAKE_BUILD_TYPE=Release",
                "-DGCLIST_BUILD_TESTS=OFF",
                "-DGCLIST_BUILD_TOOLS=OFF",
                "-DGCLIST_BUILD_PYTHON=ON",
                f"-DCMAKE_PREFIX_PATH={pybind11.get_cmake_dir()}",
                f"-DPYTHON_EXECUTABLE={sys.executable}",
            ],
            cwd=build_dir,
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_gclist", "-j2"],
            cwd=build_dir,
            check=True,
        )

        built = sorted((build_dir / "python" / "gclist").glob("_gclist.*"))
        if not built:
            raise RuntimeError("cmake did not produce the _gclist module")
        target = Path(self.get_ext_fullpath(ext.name))
        target.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built[0], target)


setup(
    packages=["gclist"],
    package_dir={"": "python"},
    ext_modules=[CMakeExtension("gclist._gclist")],
    cmdclass={"build_ext": CMakeBuild},
    zip_safe=False,
)
