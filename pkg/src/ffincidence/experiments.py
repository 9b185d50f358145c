"""Finite, checkable reports for each incidence and distance inequality.

Every report keeps the raw counts next to the inequality verdict.  Where the
inequality only involves integers, rationals and square roots of integers it
is decided exactly by squaring both sides with :class:`fractions.Fraction`.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .algebra import FieldCtx, RingCtx, divisor_stats
from .errors import CapExceeded, InvalidInput
from .geometry import (
    DiagonalForm,
    SphereSet,
    all_points,
    as_points,
    as_spheres,
    count_incidences,
    count_incidences_ring,
    distance_counts,
    distance_matrix,
    pinned_distance_sizes,
    ring_sphere_value,
    zero_distance_pairs,
)
from .spectral import CAYLEY_Q, CAYLEY_QPRIME, SUM_PRODUCT, build_graph, edge_count

SINGULAR_CAP = 60
ISO_ORACLE_CAP = 200


def _abs_dev_within(value, main: Fraction, bound_sq: Fraction) -> bool:
    """|value - main| <= sqrt(bound_sq), decided exactly."""
    dev = Fraction(value) - main
    return dev * dev <= bound_sq


# -- incidences ----------------------------------------------------------------


@dataclass
class IncidenceReport:
    count: int
    main: Fraction
    error_bound: float
    slack: float
    verdict: bool
    n_points: int = 0
    n_spheres: int = 0

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "main": float(self.main),
            "error_bound": self.error_bound,
            "slack": self.slack,
            "verdict": self.verdict,
            "n_points": self.n_points,
            "n_spheres": self.n_spheres,
        }


def _incidence_report(count, n_p, n_s, q, bound_factor_sq: Fraction) -> IncidenceReport:
    main = Fraction(n_p * n_s, q)
    bound_sq = bound_factor_sq * n_p * n_s
    error_bound = math.sqrt(bound_sq)
    return IncidenceReport(
        count=count,
        main=main,
        error_bound=error_bound,
        slack=error_bound - abs(float(count - main)),
        verdict=_abs_dev_within(count, main, bound_sq),
        n_points=n_p,
        n_spheres=n_s,
    )


def incidence_bound_report(P, S, Q: DiagonalForm) -> IncidenceReport:
    """I(P, S) against |P||S|/q with error term q^(d/2) sqrt(|P||S|)."""
    P, S = as_points(P, Q.d), as_spheres(S, Q.d)
    count = count_incidences(P, S, Q)
    return _incidence_report(count, len(P), len(S), Q.q, Fraction(Q.q**Q.d))


def ring_incidence_bound_report(P, S, ring: RingCtx, d: int) -> IncidenceReport:
    """Z_q version: error term sqrt(2 tau(q)) q^d / gamma(q)^(d/2) sqrt(|P||S|)."""
    if ring.q % 2 == 0:
        raise InvalidInput("q must be odd")
    P, S = as_points(P, d), as_spheres(S, d)
    count = count_incidences_ring(P, S, ring, d)
    stats = divisor_stats(ring.q)
    factor_sq = Fraction(2 * stats.tau * ring.q ** (2 * d), stats.gamma**d)
    return _incidence_report(count, len(P), len(S), ring.q, factor_sq)


def point_vertices(P) -> np.ndarray:
    """Points p as vertices (0, p) of C_Q."""
    P = np.asarray(P, dtype=np.int64)
    return np.concatenate([np.zeros((len(P), 1), dtype=np.int64), P], axis=1)


def sphere_vertices(S: SphereSet) -> np.ndarray:
    """Spheres (b, r) as vertices (r, b) of C_Q."""
    return np.concatenate([S.radii[:, None], S.centers], axis=1)


def incidences_via_cayley(P, S, Q: DiagonalForm) -> int:
    """I(P, S) as the arc count e(U, W) in C_Q between the encoded sets."""
    P, S = as_points(P, Q.d), as_spheres(S, Q.d)
    g = build_graph(CAYLEY_Q, Q.ctx, Q.d, Q)
    return edge_count(g, point_vertices(P), sphere_vertices(S))


def sp_point_vertex(p, ring: RingCtx) -> np.ndarray:
    p = np.asarray(p, dtype=np.int64)
    return np.concatenate([[-(p * p).sum() % ring.q], p % ring.q])


def sp_sphere_vertex(center, radius, ring: RingCtx) -> np.ndarray:
    a = np.asarray(center, dtype=np.int64)
    return np.concatenate([[(radius - (a * a).sum()) % ring.q], (-2 * a) % ring.q])


def sp_encoding_check(p, s, ring: RingCtx, d: int) -> bool:
    """Incidence of p with s agrees with adjacency of their sum-product vertices."""
    if ring.q % 2 == 0:
        raise InvalidInput("q must be odd")
    center, radius = s
    incident = int(ring_sphere_value(p, center, ring)) == int(radius) % ring.q
    u = sp_point_vertex(p, ring)
    w = sp_sphere_vertex(center, radius, ring)
    adjacent = (u[0] + w[0]) % ring.q == int(u[1:] @ w[1:]) % ring.q
    return incident == adjacent


def incidences_via_sum_product(P, S, ring: RingCtx, d: int) -> int:
    P, S = as_points(P, d), as_spheres(S, d)
    g = build_graph(SUM_PRODUCT, ring, d)
    U = np.array([sp_point_vertex(p, ring) for p in P]).reshape(-1, d + 1)
    W = np.array([sp_sphere_vertex(c, r, ring) for c, r in S]).reshape(-1, d + 1)
    return edge_count(g, U, W)


# -- pinned distances ----------------------------------------------------------


@dataclass
class PinnedReport:
    c: float
    threshold_size: float
    good_pins: int
    size: int
    hypothesis: bool
    verdict: bool
    average: float
    average_bound: float
    average_ok: bool

    def to_dict(self) -> dict:
        return asdict(self)


def pinned_distance_report(E, Q: DiagonalForm, c: float) -> PinnedReport:
    """Pins p in E with |Delta_Q(E, p)| > (1 - c) q, against (1 - c)|E|."""
    if not 0 < c < 1:
        raise InvalidInput("c must lie in (0, 1)")
    E = as_points(E, Q.d)
    q, d = Q.q, Q.d
    threshold = math.sqrt((1 - c * c) / c**4) * q ** ((d + 1) / 2)
    sizes = pinned_distance_sizes(E, Q)
    good = int((sizes > (1 - c) * q).sum())
    n = len(E)
    hypothesis = n > threshold
    average = float(sizes.mean()) if n else 0.0
    average_bound = (1 - c * c) * q
    return PinnedReport(
        c=c,
        threshold_size=threshold,
        good_pins=good,
        size=n,
        hypothesis=hypothesis,
        verdict=(good >= (1 - c) * n) if hypothesis else True,
        average=average,
        average_bound=average_bound,
        average_ok=(average > average_bound) if hypothesis else True,
    )


# -- random point / sphere sets ------------------------------------------------


def _trial(q, d, Q, t, seq) -> bool:
    rng = np.random.default_rng(seq)
    p_idx = rng.choice(q**d, size=t, replace=False)
    s_idx = rng.choice(q ** (d + 1), size=t, replace=False)
    P = _decode(p_idx, q, d)
    full = _decode(s_idx, q, d + 1)
    S = SphereSet(full[:, :d], full[:, d])
    return count_incidences(P, S, Q) == 0


def _decode(idx, q, dim):
    idx = np.asarray(idx, dtype=np.int64)
    return (idx[:, None] // q ** np.arange(dim - 1, -1, -1)) % q


def random_incidence_trials(
    q: int, d: int, Q: DiagonalForm, t: int, trials: int, seed: int, jobs: int = 1
) -> float:
    """Fraction of trials in which t random points meet none of t random spheres.

    Points are drawn uniformly without replacement from F_q^d and spheres
    from the q^(d+1) (center, radius) pairs.  Trial i uses the i-th child of
    ``np.random.SeedSequence(seed)``, so the result does not depend on
    ``jobs``.
    """
    if Q.q != q or Q.d != d:
        raise InvalidInput("form does not match q and d")
    if t < 0 or t > q**d:
        raise InvalidInput(f"t must lie in [0, q^d] = [0, {q**d}]")
    if trials < 1:
        raise InvalidInput("need at least one trial")
    seqs = np.random.SeedSequence(seed).spawn(trials)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            empty = list(pool.map(lambda s: _trial(q, d, Q, t, s), seqs))
    else:
        empty = [_trial(q, d, Q, t, s) for s in seqs]
    return sum(empty) / trials


# -- isosceles triangles and T_1 -----------------------------------------------


@dataclass
class TripleReport:
    iso: int
    t1: int
    z: int
    identity_ok: bool
    bound_ok: bool
    size: int

    def to_dict(self) -> dict:
        return asdict(self)


def isosceles_count(E, Q: DiagonalForm) -> int:
    """Ordered distinct triples (x, y, z) with Q(x - y) = Q(x - z), via apex histograms."""
    D = distance_matrix(E, Q)
    n = len(D)
    if n < 3:
        return 0
    hist = np.zeros((n, Q.q), dtype=np.int64)
    rows = np.broadcast_to(np.arange(n)[:, None], D.shape)
    off = ~np.eye(n, dtype=bool)
    np.add.at(hist, (rows[off], D[off]), 1)
    return int((hist * (hist - 1)).sum())


def isosceles_count_bruteforce(E, Q: DiagonalForm) -> int:
    E = as_points(E, Q.d)
    if len(E) > ISO_ORACLE_CAP:
        raise CapExceeded(f"cubic oracle needs |E| <= {ISO_ORACLE_CAP}")
    D = distance_matrix(E, Q).tolist()
    n = len(E)
    total = 0
    for x in range(n):
        row = D[x]
        for y in range(n):
            if y == x:
                continue
            for z in range(n):
                if z != x and z != y and row[y] == row[z]:
                    total += 1
    return total


def t1_edge_count(E, Q: DiagonalForm) -> int:
    """e(U, W) in C_Q' with U = {(1, x, x)} and W = {(1, y, z)} over E."""
    E = as_points(E, Q.d)
    n = len(E)
    if n == 0:
        return 0
    g = build_graph(CAYLEY_QPRIME, Q.ctx, Q.d, Q)
    U = np.concatenate([np.ones((n, 1), dtype=np.int64), E, E], axis=1)
    yz = np.concatenate([np.repeat(E, n, axis=0), np.tile(E, (n, 1))], axis=1)
    W = np.concatenate([np.ones((n * n, 1), dtype=np.int64), yz], axis=1)
    return edge_count(g, U, W)


def isosceles_report(E, Q: DiagonalForm) -> TripleReport:
    E = as_points(E, Q.d)
    n, q = len(E), Q.q
    iso = isosceles_count(E, Q)
    z = zero_distance_pairs(E, Q) if n else 0
    t1 = t1_edge_count(E, Q)
    bound_sq = Fraction(q ** (2 * Q.d) * n**3)
    return TripleReport(
        iso=iso,
        t1=t1,
        z=z,
        identity_ok=t1 == n * n + iso + 2 * z,
        bound_ok=_abs_dev_within(t1, Fraction(n**3, q), bound_sq),
        size=n,
    )


# -- T_2 -----------------------------------------------------------------------


@dataclass
class T2Report:
    counts: list
    t2: int
    deviation: float
    bound: int
    verdict: bool

    def to_dict(self) -> dict:
        return asdict(self)


def t2_report(E, Q: DiagonalForm) -> T2Report:
    """T_2 = sum_r N_r^2 against |E|^4/q with error q^d |E|^2."""
    E = as_points(E, Q.d)
    n = len(E)
    N = distance_counts(E, Q, include_equal=True) if n else np.zeros(Q.q, dtype=np.int64)
    t2 = int((N.astype(object) ** 2).sum())
    dev = abs(Fraction(t2) - Fraction(n**4, Q.q))
    bound = Q.q**Q.d * n * n
    return T2Report(
        counts=[int(v) for v in N],
        t2=t2,
        deviation=float(dev),
        bound=bound,
        verdict=dev <= bound,
    )


# -- distinct-distance subsets -------------------------------------------------


def _has_disjoint_repeat(D: np.ndarray) -> bool:
    n = len(D)
    if n < 4:
        return False
    idx = np.arange(n)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            keep = (idx != i) & (idx != j)
            sub = D[np.ix_(keep, keep)]
            hits = sub == D[i, j]
            np.fill_diagonal(hits, False)
            if hits.any():
                return True
    return False


def is_distinct_distance_subset(U, Q: DiagonalForm) -> bool:
    """No four distinct x, y, z, t in U with Q(x - y) = Q(z - t)."""
    U = as_points(U, Q.d)
    return not _has_disjoint_repeat(distance_matrix(U, Q))


def size_envelope(q: int) -> tuple:
    return (int(math.floor(q ** (1 / 3) / 2)), int(math.floor(math.sqrt(2 * q))) + 1)


@dataclass
class DDSubsetReport:
    subset: list
    method: str
    valid: bool
    size: int
    size_envelope: tuple
    in_envelope: bool
    maximal: Optional[bool] = None
    sample_size: Optional[int] = None
    singular_in_sample: Optional[int] = None
    edge_estimate: Optional[float] = None

    def to_dict(self) -> dict:
        out = asdict(self)
        out["size_envelope"] = list(self.size_envelope)
        return {k: v for k, v in out.items() if v is not None}


def _order(E: np.ndarray, order, seed: Optional[int]) -> np.ndarray:
    n = len(E)
    if isinstance(order, str) and order == "lex":
        return np.lexsort(E.T[::-1]) if n else np.arange(0)
    if order == "shuffle":
        return np.random.default_rng(seed).permutation(n)
    if isinstance(order, str):
        raise InvalidInput(f"unknown order {order!r}")
    perm = np.asarray(order, dtype=np.int64)
    if sorted(perm.tolist()) != list(range(n)):
        raise InvalidInput("order must be a permutation of range(len(E))")
    return perm


def _can_add(D: np.ndarray, chosen: list, c: int) -> bool:
    """Whether adding index c keeps the chosen set free of disjoint repeats."""
    if len(chosen) < 3:
        return True
    ch = np.array(chosen)
    sub = D[np.ix_(ch, ch)]
    k = len(ch)
    off = ~np.eye(k, dtype=bool)
    for i, u in enumerate(ch):
        mask = off.copy()
        mask[i, :] = False
        mask[:, i] = False
        old = sub[mask]
        if np.isin([D[c, u], D[u, c]], old).any():
            return False
    return True


def greedy_ddsubset(E, Q: DiagonalForm, order="lex", seed: Optional[int] = None) -> DDSubsetReport:
    """Greedy maximal distinct Q-distance subset.

    ``order`` is ``"lex"`` (lexicographic by coordinates), ``"shuffle"``
    (seeded permutation) or an explicit permutation of the indices of E.
    """
    E = as_points(E, Q.d)
    perm = _order(E, order, seed)
    D = distance_matrix(E, Q)
    chosen: list = []
    for c in perm:
        if _can_add(D, chosen, int(c)):
            chosen.append(int(c))
    U = E[chosen]
    rest = [i for i in range(len(E)) if i not in set(chosen)]
    maximal = not any(_can_add(D, chosen, i) for i in rest)
    return _dd_report(U, Q, "greedy", maximal=maximal)


def _dd_report(U, Q, method, **extra) -> DDSubsetReport:
    env = size_envelope(Q.q)
    n = len(U)
    return DDSubsetReport(
        subset=[[int(x) for x in row] for row in U],
        method=method,
        valid=is_distinct_distance_subset(U, Q),
        size=n,
        size_envelope=env,
        in_envelope=env[0] <= n <= env[1],
        **extra,
    )


_PAIRS = list(itertools.combinations(range(4), 2))
_PAIR_PAIRS = list(itertools.combinations(range(6), 2))


def _singular_mask(D: np.ndarray, quads: np.ndarray) -> np.ndarray:
    """For each row of 4 indices: do two distinct pairs share a Q-distance?

    Both orientations of each pair are considered, so for forms with odd
    exponents Q(x - y) and Q(y - x) both count as distances of {x, y}.
    """
    fwd = np.stack([D[quads[:, a], quads[:, b]] for a, b in _PAIRS], axis=1)
    bwd = np.stack([D[quads[:, b], quads[:, a]] for a, b in _PAIRS], axis=1)
    vals = np.stack([fwd, bwd], axis=2)  # (N, 6, 2)
    out = np.zeros(len(quads), dtype=bool)
    for i, j in _PAIR_PAIRS:
        out |= (vals[:, i, :, None] == vals[:, j, None, :]).any(axis=(1, 2))
    return out


def _quads(n: int) -> np.ndarray:
    if n < 4:
        return np.zeros((0, 4), dtype=np.int64)
    flat = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(n), 4)),
        dtype=np.int64,
        count=4 * math.comb(n, 4),
    )
    return flat.reshape(-1, 4)


def singular_4subsets(E, Q: DiagonalForm) -> np.ndarray:
    """Index quadruples (lexicographic) of the singular 4-subsets of E."""
    E = as_points(E, Q.d)
    quads = _quads(len(E))
    if len(quads) == 0:
        return quads
    return quads[_singular_mask(distance_matrix(E, Q), quads)]


def count_singular_4subsets(E, Q: DiagonalForm, cap: int = SINGULAR_CAP) -> int:
    E = as_points(E, Q.d)
    if len(E) > cap:
        raise CapExceeded(f"exhaustive 4-subset scan needs |E| <= {cap}")
    return len(singular_4subsets(E, Q))


def deletion_sample_size(n: int, q: int) -> tuple:
    """(edge estimate, sample size) for the k = 4 deletion method."""
    m_hat = 2 * n**4 / q / math.factorial(4)
    s = max(4, int(math.floor((n**4 / (4 * m_hat)) ** (1 / 3))))
    return m_hat, min(s, n)


def deletion_ddsubset(E, Q: DiagonalForm, seed: int) -> DDSubsetReport:
    """Random sample of E with one vertex deleted per singular 4-subset."""
    E = as_points(E, Q.d)
    if len(E) < 4:
        raise InvalidInput("deletion method needs |E| >= 4")
    m_hat, s = deletion_sample_size(len(E), Q.q)
    rng = np.random.default_rng(seed)
    sample = np.sort(rng.choice(len(E), size=s, replace=False))
    S = E[sample]
    edges = singular_4subsets(S, Q)
    alive = np.ones(s, dtype=bool)
    for quad in edges:
        if alive[quad].all():
            alive[quad[-1]] = False
    return _dd_report(
        S[alive],
        Q,
        "deletion",
        sample_size=s,
        singular_in_sample=len(edges),
        edge_estimate=m_hat,
    )


def full_plane(ctx: FieldCtx, d: int = 2) -> np.ndarray:
    return all_points(ctx.q, d)
