"""
Setup script for the OFDM-IM dither toolkit
"""
from setuptools import setup, find_packages
from pathlib import Path

# Read README
readme_file = Path(__file__).parent / "README.md"
long_description = readme_file.read_text() if readme_file.exists() else ""

# Runtime dependencies imported by the package (requirements.txt is a dev-environment freeze)
requirements = [
    "numpy",
    "scipy",
    "pydantic>=2",
    "pydantic-settings",
    "PyYAML",
    "python-json-logger",
]

setup(
    name="ofdm-im-dither",
    version="0.1.0",
    author="OFDM-IM Dither Team",
    author_email="",
    description="OFDM index modulation with multilevel dither PAPR reduction and Monte-Carlo harness",
    long_description=long_description,
    long_description_content_type="text/markdown",
    url="",
    packages=find_packages(exclude=["tests"]),
    py_modules=["main"],
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
    ],
    python_requires=">=3.10",
    install_requires=requirements,
    entry_points={
        'console_scripts': [
            'ofdm-im-dither=main:main',
        ],
    },
    include_package_data=True,
)
