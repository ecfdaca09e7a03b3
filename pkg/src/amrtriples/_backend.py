"""Select the matching kernel at import.

``AMRTRIPLES_KERNEL`` may be ``auto`` (default: compiled if importable),
``cython`` (fail if the extension is missing) or ``python``.
"""

import importlib
import logging
import os

log = logging.getLogger(__name__)

ENV_VAR = "AMRTRIPLES_KERNEL"


def load_kernel(name: str = "auto"):
    if name == "python":
        return importlib.import_module("amrtriples._kernel_py")
    if name == "cython":
        return importlib.import_module("amrtriples._kernel")
    if name != "auto":
        raise ValueError(f"unknown kernel {name!r}; expected auto, cython or python")
    try:
        return importlib.import_module("amrtriples._kernel")
    except ImportError:
        log.debug("compiled kernel unavailable, using pure Python")
        return importlib.import_module("amrtriples._kernel_py")


def available() -> list[str]:
    names = ["python"]
    try:
        importlib.import_module("amrtriples._kernel")
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names


kernel = load_kernel(os.environ.get(ENV_VAR, "auto"))
