#!/usr/bin/env python3
from setuptools import setup, find_packages

with open("requirements.txt", "r") as f:
    requirements = [line.strip() for line in f
                    if line.strip() and not line.startswith("#") and not line.startswith("pytest")]

with open("README.md", "r", encoding="utf-8") as f:
    long_description = f.read()

setup(
    name="quantum-geometric-limit",
    version="1.0.0",
    description="Event-count bounds for covariant spacetime regions, quantum clocks and Regge complexes",
    long_description=long_description,
    long_description_content_type="text/markdown",
    author="Quantum Geometric Limit",
    author_email="",
    url="",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    py_modules=["main"],
    include_package_data=True,
    package_data={"scenarios": ["*.json", "*.yaml"]},
    install_requires=requirements,
    extras_require={"test": ["pytest>=7.0"]},
    python_requires=">=3.9",
    entry_points={
        "console_scripts": [
            "qgl=main:main",
        ],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Physics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
    ],
    keywords="quantum gravity Margolus-Levitin Regge calculus Monte Carlo general relativity",
)
