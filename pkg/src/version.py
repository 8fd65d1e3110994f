"""
Version information for GrassMean.

This module follows semantic versioning: MAJOR.MINOR.PATCH
- MAJOR: Changes to the matrix file or CSV contracts, renamed operations
- MINOR: New evaluators, experiments or subcommands (backwards compatible)
- PATCH: Numerical fixes, tolerance tweaks, documentation
"""

__version__ = "0.3.0"

VERSION_STRING = "0.3.0"
VERSION_FULL = f"GrassMean v{VERSION_STRING}"


def get_full_version():
    """Return the full version string with product name."""
    return VERSION_FULL
