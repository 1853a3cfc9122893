"""Hot kernels: compiled extension when available, pure Python otherwise.

Set ``EUCLIDEAN_IDEALS_PURE=1`` to force the fallback.  ``BACKEND`` names
the implementation in use.
"""

import os

from . import _fallback

if os.environ.get("EUCLIDEAN_IDEALS_PURE") == "1":
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

enumerate_ellipsoid = _impl.enumerate_ellipsoid
sieve_segment = _impl.sieve_segment
progression_primes = _impl.progression_primes
power_orders_ok = _impl.power_orders_ok

# both implementations raise their own class; callers catch either
NodeLimitExceeded = (_fallback.NodeLimitExceeded, getattr(_impl, "NodeLimitExceeded", _fallback.NodeLimitExceeded))

__all__ = [
    "BACKEND",
    "NodeLimitExceeded",
    "enumerate_ellipsoid",
    "power_orders_ok",
    "progression_primes",
    "sieve_segment",
]
