import setuptools

# Aggregate build of the three distributions sharing the `schemacache`
# namespace package (see DEVELOPER_GUIDE.md); each tree is also
# installable on its own from its subdirectory.

trees = [ "schemacache-base", "schemacache-flow", "schemacache-cli" ]

packages = [ "schemacache" ]
package_dir = {}

for tree in trees:
    for pkg in setuptools.find_namespace_packages(
        where=tree, include=["schemacache.*"]
    ):
        packages.append(pkg)
        package_dir[pkg] = tree + "/" + pkg.replace(".", "/")

# Shared top-level modules of the namespace live in schemacache-base
package_dir["schemacache"] = "schemacache-base/schemacache"

setuptools.setup(
    name="schemacache-dev",
    version="0.1.0",
    description="Development build of schemacache-base, -flow and -cli.",
    packages=packages,
    package_dir=package_dir,
    python_requires='>=3.10',
    install_requires=[
        "prometheus-client",
        "jsonschema",
        "torch",
        "numpy",
        "pyyaml",
        "tabulate",
    ],
    scripts=[
        "schemacache-cli/scripts/schemacache",
        "schemacache-cli/scripts/sc-precompute",
        "schemacache-cli/scripts/sc-run",
        "schemacache-cli/scripts/sc-verify",
        "schemacache-cli/scripts/sc-bench",
        "schemacache-cli/scripts/sc-make-demo",
    ],
)
