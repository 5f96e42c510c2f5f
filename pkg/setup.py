#!/usr/bin/env python3
"""
Setup script for nextbit-coder
"""

from pathlib import Path
from setuptools import setup, find_packages

# Read README
readme_path = Path(__file__).parent / "README.md"
long_description = readme_path.read_text(encoding="utf-8") if readme_path.exists() else ""

setup(
    name="nextbit-coder",
    version="0.3.1",
    description="Arithmetic coding driven by pseudo-deterministic next-bits predictors",
    long_description=long_description,
    long_description_content_type="text/markdown",
    author="Nextbit Coder Team",

    # Package configuration
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    python_requires=">=3.10",

    # Dependencies
    install_requires=[
        "pandas>=1.5.0",
        "numpy>=1.24.0",
        "regex>=2023.0.0",
    ],

    extras_require={
        "dev": [
            "pytest>=7.0.0",
            "pytest-cov>=4.0.0",
            "black>=23.0.0",
            "isort>=5.0.0",
            "flake8>=6.0.0",
            "mypy>=1.0.0",
        ],
    },

    entry_points={
        "console_scripts": [
            "nextbit-coder=nextbit_coder.cli:main",
        ],
    },

    package_data={
        "nextbit_coder": [
            "data/*.json",
            "data/*.jsonl",
        ],
    },

    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: System :: Archiving :: Compression",
    ],

    keywords="arithmetic-coding compression elias-gamma pseudo-deterministic entropy",
)
