"""Numba switch.

Kernels are JIT-compiled with numba when it is importable and the
environment variable ``COSET_RESONANCE_DISABLE_NUMBA`` is unset (or "0").
Otherwise the pure-numpy implementations in :mod:`coset_resonance.kernels`
are used.
"""
import os

_flag = os.environ.get("COSET_RESONANCE_DISABLE_NUMBA", "").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        # bare @njit or @njit(cache=True)
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


USE_NUMBA = HAS_NUMBA
