import setuptools
import os
import importlib

with open("README.md", "r") as fh:
    long_description = fh.read()

# Load a version number module
spec = importlib.util.spec_from_file_location(
    'version', 'schemacache/cli_version.py'
)
version_module = importlib.util.module_from_spec(spec)
spec.loader.exec_module(version_module)

version = version_module.__version__

setuptools.setup(
    name="schemacache-cli",
    version=version,
    author="schemacache developers",
    description="Command-line tools for the schemacache engine: precompute, run, verify, bench and demo asset generation.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_namespace_packages(
        where='./',
    ),
    classifiers=[ 
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: GNU General Public License v3 or later (GPLv3+)",
        "Operating System :: OS Independent",
    ],
    python_requires='>=3.10',
    install_requires=[
        "schemacache-base>=0.1,<0.2",
        "schemacache-flow>=0.1,<0.2",
        "pyyaml",
        "jsonschema",
        "tabulate",
        "prometheus-client",
    ],
    scripts=[
        "scripts/schemacache",
        "scripts/sc-precompute",
        "scripts/sc-run",
        "scripts/sc-verify",
        "scripts/sc-bench",
        "scripts/sc-make-demo",
    ]
)
