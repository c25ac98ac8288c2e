#!/usr/bin/env python3
"""
Setup script for the numerical radius geometry toolkit.
Installs the wgeo package and the `wgeo` console command.
"""

from pathlib import Path

from setuptools import find_packages, setup


def read_requirements(name):
    """Read a requirements file, skipping comments and blank lines"""
    lines = Path(__file__).with_name(name).read_text().splitlines()
    return [line.strip() for line in lines if line.strip() and not line.startswith("#")]


setup(
    name="wgeo",
    version="1.0.0",
    description="Numerical radius, Birkhoff-James orthogonality and best approximation on polyhedral spaces",
    packages=find_packages(include=["wgeo", "wgeo.*"]),
    py_modules=["cli"],
    python_requires=">=3.9",
    install_requires=read_requirements("requirements-runtime.txt"),
    extras_require={"test": ["pytest>=7.0.0", "hypothesis>=6.80.0", "scipy>=1.10.0"]},
    entry_points={"console_scripts": ["wgeo=cli:main"]},
)
