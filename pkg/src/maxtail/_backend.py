"""Select the kernel implementation at import time.

Set ``MAXTAIL_PURE_PYTHON=1`` to force the pure-Python kernels.
"""
import importlib
import os

__all__ = ["kernels", "BACKEND", "load"]


def load(name):
    """Return the kernel module ``"compiled"`` or ``"python"``."""
    if name == "compiled":
        return importlib.import_module("maxtail._core")
    if name == "python":
        return importlib.import_module("maxtail._pure")
    raise ValueError(f"unknown backend {name!r}")


if os.environ.get("MAXTAIL_PURE_PYTHON"):
    kernels = load("python")
    BACKEND = "python"
else:
    try:
        kernels = load("compiled")
        BACKEND = "compiled"
    except ImportError:
        kernels = load("python")
        BACKEND = "python"
