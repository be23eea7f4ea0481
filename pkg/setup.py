from setuptools import setup

VERSION = "0.1.0"
LICENSE = "MIT"
PACKAGES = ["bootperc", "bootperc.fields"]

with open("README.md", "r", encoding="utf-8") as f:
    LONG_DESCRIPTION = f.read()

with open("requirements.txt", "r") as f:
    REQUIREMENTS = f.readlines()

    while "\n" in REQUIREMENTS:
        REQUIREMENTS.remove("\n")

EXTRA_REQUIREMENTS = {
    "tests": ["pytest", "hypothesis"],
    "docs": ["sphinx", "pydata-sphinx-theme"],
}

setup(
    name="bootperc",
    author="bootperc developers",
    version=VERSION,
    license=LICENSE,
    description='Simulator and verification suite for majority bootstrap percolation on rings and r-wheels',
    long_description=LONG_DESCRIPTION,
    long_description_content_type="text/markdown",
    include_package_data=True,
    install_requires=REQUIREMENTS,
    extras_require=EXTRA_REQUIREMENTS,
    packages=PACKAGES,
    entry_points={
        "console_scripts": ["bootperc = bootperc.cli:main"],
    },
    python_requires='>=3.8.0',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'License :: OSI Approved :: MIT License',
        'Intended Audience :: Science/Research',
        'Natural Language :: English',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Typing :: Typed',
    ]
)
