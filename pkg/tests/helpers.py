"""Comparison helpers shared by the force tests.

Per-component relative error is ill-posed where components cancel: a
particle whose neighbors pull at magnitude ~1e2 can have a net x-component
of ~1e-6, and two correct double-precision evaluations then differ by
rounding of the large terms (~1e-14 absolute), which reads as ~1e-8
"relative" error against the tiny component. The standard resolution is to
measure such degenerate components against a small fraction of the
particle's own force scale. A floor fraction of 1e-3 keeps the check strict:
any wrong, missing, or spurious pair shifts a component by at least the pair
force itself, orders of magnitude above rtol times the floored denominator.
"""

import numpy as np

FLOOR_FRACTION = 1e-3


def per_component_rel_error(got, ref, floor_fraction=FLOOR_FRACTION):
    """Max per-component |got - ref| / denom, with the denominator per
    component floored at floor_fraction times the row's max magnitude."""
    got = np.asarray(got, dtype=np.float64)
    ref = np.asarray(ref, dtype=np.float64)
    row_scale = np.max(np.abs(ref), axis=-1, keepdims=True)
    denom = np.maximum(np.abs(ref), floor_fraction * row_scale)
    denom = np.maximum(denom, np.finfo(np.float64).tiny)
    return float(np.max(np.abs(got - ref) / denom))


def scalar_rel_error(got, ref, floor_fraction=FLOOR_FRACTION):
    """Relative error for per-particle scalars, floored at a fraction of
    the largest magnitude in the reference set."""
    got = np.asarray(got, dtype=np.float64)
    ref = np.asarray(ref, dtype=np.float64)
    denom = np.maximum(np.abs(ref), floor_fraction * np.max(np.abs(ref)))
    denom = np.maximum(denom, np.finfo(np.float64).tiny)
    return float(np.max(np.abs(got - ref) / denom))
