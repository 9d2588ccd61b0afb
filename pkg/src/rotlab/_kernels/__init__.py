"""Kernel dispatch: compiled speedups when available, pure Python otherwise.

Set ROTLAB_PURE_PYTHON=1 to force the fallback (useful for benchmarking and
for debugging kernel discrepancies).
"""

import os

if os.environ.get("ROTLAB_PURE_PYTHON") == "1":
    from rotlab._kernels import _reference as _impl
    HAVE_SPEEDUPS = False
else:
    try:
        from rotlab._kernels import _speedups as _impl  # type: ignore
        HAVE_SPEEDUPS = True
    except ImportError:
        from rotlab._kernels import _reference as _impl
        HAVE_SPEEDUPS = False

trig_lift_checkpoints = _impl.trig_lift_checkpoints
trig_orbit_points = _impl.trig_orbit_points
trig_bmv_profile = _impl.trig_bmv_profile
torus_lift_checkpoints = _impl.torus_lift_checkpoints
torus_orbit_points = _impl.torus_orbit_points
torus_bmv_profile = _impl.torus_bmv_profile
greedy_separated_count = _impl.greedy_separated_count
greedy_separated_indices = _impl.greedy_separated_indices

__all__ = [
    "HAVE_SPEEDUPS",
    "trig_lift_checkpoints",
    "trig_orbit_points",
    "trig_bmv_profile",
    "torus_lift_checkpoints",
    "torus_orbit_points",
    "torus_bmv_profile",
    "greedy_separated_count",
    "greedy_separated_indices",
]
