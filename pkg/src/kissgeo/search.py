"""Stochastic search for large packings of bounded kissing radius.

Simulated annealing over tangency-preserving moves: angular jitter of a
disk about its parent, insertion of a new disk tangent to an existing
one (preferring double-tangency spots, which is how hexagonal fits are
found), and deletion.  Validity (pairwise separation and kissing radius)
is a hard constraint; the Metropolis rule acts on the disk count only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .pipeline import certify
from .geometry import TWO_PI
from .packing import PackingInstance


@dataclass
class SearchState:
    n: int
    seed: int
    budget: int
    best: PackingInstance | None = None
    best_count: int = 0
    iterations: int = 0
    trajectory: list = field(default_factory=list)  # (iteration, best_count)


def _profile(centers: np.ndarray, eps: float = 1e-9):
    """(valid, radius) for a center array with source at row 0."""
    n = len(centers)
    d = np.linalg.norm(centers[:, None, :] - centers[None, :, :], axis=2)
    iu = np.triu_indices(n, k=1)
    if n > 1 and np.min(d[iu]) < 1.0 - eps:
        return False, math.inf
    adj = (d >= 1.0 - eps) & (d <= 1.0 + eps)
    reached = np.zeros(n, dtype=bool)
    reached[0] = True
    frontier = reached.copy()
    radius = 0
    while True:
        nxt = adj[frontier].any(axis=0) & ~reached
        if not nxt.any():
            break
        reached |= nxt
        frontier = nxt
        radius += 1
    if not reached.all():
        return False, math.inf
    return True, radius


def _canon_key(centers: np.ndarray) -> bytes:
    rounded = np.round(centers, 12)
    order = np.lexsort((rounded[:, 1], rounded[:, 0]))
    return rounded[order].tobytes()


def _insertion_candidates(centers: np.ndarray, pid: int, rng) -> list[np.ndarray]:
    """Tangency spots on the circle around disk pid: double-tangency points
    with every nearby disk first, then a few random angles."""
    base = centers[pid]
    out = []
    d = np.linalg.norm(centers - base, axis=1)
    near = [i for i in range(len(centers)) if i != pid and d[i] <= 2.0]
    rng.shuffle(near)
    for i in near:
        other = centers[i]
        dist = d[i]
        if dist == 0.0:
            continue
        mid = 0.5 * (base + other)
        h2 = 1.0 - 0.25 * dist * dist
        if h2 <= 0.0:
            out.append(mid)
            continue
        h = math.sqrt(h2)
        u = (other - base) / dist
        nvec = np.array([-u[1], u[0]])
        out.extend([mid + h * nvec, mid - h * nvec])
    for theta in rng.uniform(0.0, TWO_PI, 4):
        out.append(base + np.array([math.cos(theta), math.sin(theta)]))
    return out


def _anneal(n: int, budget: int, rng, init: PackingInstance | None) -> SearchState:
    if init is not None:
        src = init.source or 0
        centers = np.vstack(
            [init.centers[src], np.delete(init.centers, src, axis=0)]
        ) - init.centers[src]
        ok, radius = _profile(centers)
        if not ok or radius > n:
            raise ValueError("initial packing is invalid for this radius")
    else:
        centers = np.zeros((1, 2))
    state = SearchState(n=n, seed=0, budget=budget)
    best_key = None

    def record(it):
        nonlocal best_key
        if len(centers) > state.best_count or (
            len(centers) == state.best_count
            and best_key is not None
            and _canon_key(centers) < best_key
        ):
            state.best_count = len(centers)
            best_key = _canon_key(centers)
            state.best = PackingInstance(centers.copy(), source=0)
            state.trajectory.append((it, state.best_count))

    record(0)
    t_hi, t_lo = 1.0, 0.02
    s_hi, s_lo = 0.2, 0.01
    for it in range(budget):
        frac = it / max(1, budget - 1)
        temp = t_hi * (t_lo / t_hi) ** frac
        sigma = s_hi * (s_lo / s_hi) ** frac
        move = rng.random()
        if move < 0.5 and len(centers) > 1:
            # Jitter: rotate a disk about its nearest tangent anchor.
            k = int(rng.integers(1, len(centers)))
            d = np.linalg.norm(centers - centers[k], axis=1)
            d[k] = math.inf
            anchor = int(np.argmin(np.abs(d - 1.0)))
            rel = centers[k] - centers[anchor]
            theta = math.atan2(rel[1], rel[0]) + rng.normal(0.0, sigma)
            cand = centers.copy()
            cand[k] = centers[anchor] + np.array(
                [math.cos(theta), math.sin(theta)]
            )
            ok, radius = _profile(cand)
            if ok and radius <= n:
                centers = cand
        elif move < 0.85:
            # Insert tangent to a random disk.
            pid = int(rng.integers(0, len(centers)))
            for spot in _insertion_candidates(centers, pid, rng):
                cand = np.vstack([centers, spot])
                ok, radius = _profile(cand)
                if ok and radius <= n:
                    centers = cand
                    break
        elif len(centers) > 1:
            # Delete: uphill in count, Metropolis-gated.
            if rng.random() < math.exp(-1.0 / temp):
                k = int(rng.integers(1, len(centers)))
                cand = np.delete(centers, k, axis=0)
                ok, radius = _profile(cand)
                if ok and radius <= n:
                    centers = cand
        record(it + 1)
        state.iterations = it + 1
    return state


def optimize(
    n: int,
    budget: int,
    seed: int,
    restarts: int = 1,
    init: PackingInstance | None = None,
) -> SearchState:
    """Best packing of kissing radius <= n found within the budget.

    Deterministic for fixed (n, budget, seed, restarts, init): each
    restart owns the RNG stream seeded by (seed + restart index), and the
    best-so-far never decreases.  The winner is re-certified before being
    returned (for n <= 3, where the certificate applies).
    """
    if not (1 <= n <= 4):
        raise ValueError(f"kissing radius {n} unsupported")
    best_state = None
    for r in range(restarts):
        rng = np.random.default_rng(seed + r)
        st = _anneal(n, budget, rng, init)
        st.seed = seed + r
        if (
            best_state is None
            or st.best_count > best_state.best_count
            or (
                st.best_count == best_state.best_count
                and _canon_key(st.best.centers) < _canon_key(best_state.best.centers)
            )
        ):
            best_state = st
    if n <= 3 and best_state.best is not None and len(best_state.best) >= 3:
        certify(best_state.best, n)  # a failure here is a genuine finding
    return best_state
