"""Hot integer loops: residue sieving of point candidates and omega sieves.

The numba implementation is used when numba imports cleanly, unless
``HYPERPENCIL_DISABLE_NUMBA`` is set to a non-empty value other than ``0``,
in which case the pure-numpy implementation is used. Both modules expose
the same functions and are importable directly for benchmarking.
"""

import logging
import os

from hyperpencil.kernels import _numpy as numpy_impl

log = logging.getLogger(__name__)

ENV_FLAG = "HYPERPENCIL_DISABLE_NUMBA"

numba_impl = None
if os.environ.get(ENV_FLAG, "") in ("", "0"):
    try:
        from hyperpencil.kernels import _numba as numba_impl
    except ImportError as exc:  # pragma: no cover - numba missing
        log.info("numba unavailable (%s); using numpy kernels", exc)

backend = numba_impl if numba_impl is not None else numpy_impl
BACKEND_NAME = "numba" if numba_impl is not None else "numpy"

survivor_mask = backend.survivor_mask
spf_sieve = backend.spf_sieve
omega_sieve = backend.omega_sieve
product_omega = backend.product_omega

__all__ = [
    "BACKEND_NAME", "numpy_impl", "numba_impl",
    "survivor_mask", "spf_sieve", "omega_sieve", "product_omega",
]
