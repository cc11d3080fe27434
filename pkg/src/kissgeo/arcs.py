"""Angular interval arithmetic on the unit circle.

Used for coverage questions about boundaries of unions of unit-radius
disks: which part of one circle lies inside the open disks around other
centers.  Intervals are (start, length) pairs with start in [0, 2*pi).
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import TWO_PI, norm, polar_angle

Interval = tuple[float, float]


def coverage_interval(center: np.ndarray, other: np.ndarray) -> Interval | None:
    """Angular interval of the unit circle at `center` covered by the open
    unit disk at `other`; None when the disks' boundaries do not overlap."""
    d = norm(np.asarray(other, dtype=float) - np.asarray(center, dtype=float))
    if d == 0.0 or d >= 2.0:
        return None
    half = math.acos(d / 2.0)
    mid = polar_angle(np.asarray(other, dtype=float) - np.asarray(center, dtype=float))
    return ((mid - half) % TWO_PI, 2.0 * half)


def merge_intervals(intervals: list[Interval]) -> list[Interval]:
    """Union of circular intervals, merged and sorted by start angle."""
    if not intervals:
        return []
    # Split wrap-around intervals at 0, then do a linear sweep.
    flat = []
    for s, ln in intervals:
        ln = min(ln, TWO_PI)
        if ln >= TWO_PI:
            return [(0.0, TWO_PI)]
        s %= TWO_PI
        if s + ln > TWO_PI:
            flat.append((s, TWO_PI - s))
            flat.append((0.0, s + ln - TWO_PI))
        else:
            flat.append((s, ln))
    flat.sort()
    merged = [list(flat[0])]
    for s, ln in flat[1:]:
        cur = merged[-1]
        if s <= cur[0] + cur[1]:
            cur[1] = max(cur[1], s + ln - cur[0])
        else:
            merged.append([s, ln])
    # Re-join across the 0 seam.
    if len(merged) > 1:
        first, last = merged[0], merged[-1]
        if last[0] + last[1] >= TWO_PI and first[0] <= last[0] + last[1] - TWO_PI:
            first_end = first[0] + first[1]
            last[1] = max(last[1], first_end + TWO_PI - last[0])
            merged.pop(0)
    if len(merged) == 1 and merged[0][1] >= TWO_PI:
        return [(0.0, TWO_PI)]
    return [(s % TWO_PI, ln) for s, ln in merged]


def complement(intervals: list[Interval], min_length: float = 1e-12) -> list[Interval]:
    """Complement of a union of circular intervals; drops slivers shorter
    than `min_length` (isolated touch points of open coverings)."""
    merged = merge_intervals(intervals)
    if not merged:
        return [(0.0, TWO_PI)]
    if merged[0][1] >= TWO_PI:
        return []
    out = []
    for k, (s, ln) in enumerate(merged):
        nxt = merged[(k + 1) % len(merged)][0]
        gap = (nxt - (s + ln)) % TWO_PI
        if len(merged) == 1:
            gap = TWO_PI - ln
        if gap > min_length:
            out.append(((s + ln) % TWO_PI, gap))
    return out


def intersect_interval(a: Interval, b: Interval) -> list[Interval]:
    """Intersection of two circular intervals (0, 1 or 2 pieces)."""
    out = []
    s_a, l_a = a
    for shift in (-TWO_PI, 0.0):
        s_b = (b[0] - s_a) % TWO_PI + shift
        lo = max(0.0, s_b)
        hi = min(l_a, s_b + b[1])
        if hi > lo:
            out.append(((s_a + lo) % TWO_PI, hi - lo))
    return merge_intervals(out) if len(out) > 1 else out


def contains_angle(interval: Interval, theta: float, tol: float = 0.0) -> bool:
    s, ln = interval
    return (theta - s) % TWO_PI <= ln + tol or (s - theta) % TWO_PI <= tol


def total_length(intervals: list[Interval]) -> float:
    return float(sum(ln for _, ln in intervals))


def uncovered_intervals(
    center: np.ndarray, others: np.ndarray, min_length: float = 1e-12
) -> list[Interval]:
    """Parts of the unit circle at `center` lying outside every open unit
    disk centered at the rows of `others`."""
    covered = []
    for o in np.atleast_2d(np.asarray(others, dtype=float)):
        iv = coverage_interval(center, o)
        if iv is not None:
            covered.append(iv)
    return complement(covered, min_length=min_length)


def sample_interval(
    center: np.ndarray, interval: Interval, count: int = 256
) -> np.ndarray:
    """Points on the unit circle at `center` across the interval (inclusive)."""
    s, ln = interval
    theta = s + np.linspace(0.0, ln, count)
    return np.asarray(center, dtype=float) + np.stack(
        [np.cos(theta), np.sin(theta)], axis=1
    )
