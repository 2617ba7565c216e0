"""Kernel lane selection: numba-compiled vs pure numpy.

The hot loops of this package evaluate sparse trigonometric series at
arbitrary (non-uniform) points.  When numba imports cleanly those loops run
as compiled parallel kernels; setting ``HELICITY_LAB_DISABLE_NUMBA=1``
forces the pure-numpy implementations instead.  The two lanes agree to
round-off and both stay importable for benchmarking.

``HELICITY_LAB_THREADS`` caps the numba thread pool.
"""

import os


def _env_flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in {"1", "true", "yes", "on"}


NUMBA_DISABLED = _env_flag("HELICITY_LAB_DISABLE_NUMBA")

NUMBA_AVAILABLE = False
if not NUMBA_DISABLED:
    try:
        import numba  # noqa: F401

        NUMBA_AVAILABLE = True
    except ImportError:
        NUMBA_AVAILABLE = False

NUMBA_ENABLED = NUMBA_AVAILABLE and not NUMBA_DISABLED

_threads = os.environ.get("HELICITY_LAB_THREADS", "").strip()
if NUMBA_ENABLED and _threads:
    import numba

    try:
        # set_num_threads only accepts values up to the pool size numba
        # created at startup, hence the min().
        numba.set_num_threads(
            max(1, min(int(_threads), numba.config.NUMBA_NUM_THREADS))
        )
    except (ValueError, RuntimeError):
        pass


def active_lane() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
