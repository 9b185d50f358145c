"""Diagonal forms, Q-spheres and incidence counting over F_q^d and Z_q^d.

Points are integer arrays of shape (n, d) holding element codes (see
:mod:`ffincidence.algebra`); a single point is any length-d sequence.
Spheres are (center, radius) pairs and are kept as such: two pairs with the
same point set are two different spheres.
"""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable
from dataclasses import dataclass, field
from math import gcd
from typing import NamedTuple

import numpy as np

from .algebra import FieldCtx, RingCtx
from .errors import InvalidInput

DEFAULT_MAX_EXP = 16


@dataclass(frozen=True)
class DiagonalForm:
    """Q(x) = a_1 x_1^{c_1} + ... + a_d x_d^{c_d} over a finite field."""

    ctx: FieldCtx
    coeffs: tuple
    exps: tuple
    max_exp: int = field(default=DEFAULT_MAX_EXP, compare=False)

    def __post_init__(self):
        coeffs = tuple(int(a) for a in self.coeffs)
        exps = tuple(int(c) for c in self.exps)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "exps", exps)
        if not coeffs or len(coeffs) != len(exps):
            raise InvalidInput("need one coefficient per exponent and d >= 1")
        for a in coeffs:
            self.ctx.check(a)
            if a == 0:
                raise InvalidInput("zero coefficients are not allowed")
        for c in exps:
            if not 2 <= c <= self.max_exp:
                raise InvalidInput(f"exponent {c} outside [2, {self.max_exp}]")
            if gcd(c, self.ctx.p) != 1:
                raise InvalidInput(f"exponent {c} shares a factor with p={self.ctx.p}")

    @classmethod
    def sum_of_squares(cls, ctx: FieldCtx, d: int) -> "DiagonalForm":
        return cls(ctx, (1,) * d, (2,) * d)

    @property
    def d(self) -> int:
        return len(self.coeffs)

    @property
    def q(self) -> int:
        return self.ctx.q

    def is_even(self) -> bool:
        """True when Q(-x) = Q(x) identically (every exponent even)."""
        return all(c % 2 == 0 for c in self.exps)

    def difference_form(self) -> "DiagonalForm":
        """Q'(x, y) = Q(x) - Q(y) on 2d coordinates."""
        neg = self.ctx.neg_table
        return DiagonalForm(
            self.ctx,
            self.coeffs + tuple(int(neg[a]) for a in self.coeffs),
            self.exps + self.exps,
            self.max_exp,
        )

    def evaluate(self, v) -> np.ndarray:
        """Q applied along the last axis of an integer array of codes."""
        v = np.asarray(v, dtype=np.int64)
        if v.shape[-1:] != (self.d,):
            raise InvalidInput(f"expected {self.d} coordinates, got shape {v.shape}")
        add, mul = self.ctx.add_table, self.ctx.mul_table
        out = np.zeros(v.shape[:-1], dtype=np.int64)
        for i, (a, c) in enumerate(zip(self.coeffs, self.exps)):
            out = add[out, mul[a, self.ctx.pow_table(c)[v[..., i]]]]
        return out

    def __str__(self):
        terms = [
            f"{'' if a == 1 else a}x{i + 1}^{c}"
            for i, (a, c) in enumerate(zip(self.coeffs, self.exps))
        ]
        return " + ".join(terms)


def evaluate_form(Q: DiagonalForm, v) -> int:
    return int(Q.evaluate(np.asarray(v, dtype=np.int64)))


class QSphere(NamedTuple):
    center: tuple
    radius: int


@dataclass(frozen=True)
class SphereSet:
    """Spheres as parallel arrays: centers (n, d) and radii (n,)."""

    centers: np.ndarray
    radii: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.centers, dtype=np.int64)
        r = np.asarray(self.radii, dtype=np.int64).reshape(-1)
        if c.ndim != 2 or c.shape[0] != r.shape[0]:
            raise InvalidInput("centers must be (n, d) with one radius per center")
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "radii", r)

    @classmethod
    def from_pairs(cls, pairs: Iterable, d: int) -> "SphereSet":
        pairs = list(pairs)
        centers = np.array([tuple(s[0]) for s in pairs], dtype=np.int64).reshape(-1, d)
        radii = np.array([int(s[1]) for s in pairs], dtype=np.int64)
        return cls(centers, radii)

    @classmethod
    def empty(cls, d: int) -> "SphereSet":
        return cls(np.zeros((0, d), dtype=np.int64), np.zeros(0, dtype=np.int64))

    @property
    def d(self) -> int:
        return self.centers.shape[1]

    def __len__(self):
        return self.radii.shape[0]

    def __iter__(self):
        for c, r in zip(self.centers, self.radii):
            yield QSphere(tuple(int(x) for x in c), int(r))


def as_points(P, d: int) -> np.ndarray:
    arr = np.asarray(list(P) if not isinstance(P, np.ndarray) else P, dtype=np.int64)
    if arr.size == 0:
        return np.zeros((0, d), dtype=np.int64)
    if arr.ndim == 1 and d == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[1] != d:
        raise InvalidInput(f"points must have {d} coordinates, got shape {arr.shape}")
    return arr


def as_spheres(S, d: int) -> SphereSet:
    if isinstance(S, SphereSet):
        if len(S) and S.d != d:
            raise InvalidInput(f"spheres live in dimension {S.d}, expected {d}")
        return S
    return SphereSet.from_pairs(S, d) if S is not None else SphereSet.empty(d)


def all_points(q: int, d: int) -> np.ndarray:
    """Every point of (Z/q or F_q)^d in lexicographic order, as codes."""
    if d == 0:
        return np.zeros((1, 0), dtype=np.int64)
    idx = np.arange(q**d, dtype=np.int64)
    return (idx[:, None] // q ** np.arange(d - 1, -1, -1)) % q


def all_spheres(q: int, d: int) -> SphereSet:
    """All q^(d+1) (center, radius) pairs; index i has radius i % q."""
    full = all_points(q, d + 1)
    return SphereSet(full[:, :d], full[:, d])


def is_distinct_rows(arr: np.ndarray) -> bool:
    return len(np.unique(arr, axis=0)) == len(arr)


def _check_codes(arr: np.ndarray, q: int):
    if arr.size and (arr.min() < 0 or arr.max() >= q):
        raise InvalidInput(f"coordinates must lie in [0, {q})")


# -- incidences ----------------------------------------------------------------


def on_sphere(Q: DiagonalForm, s, x) -> bool:
    center, radius = s
    diff = Q.ctx.sub_table[np.asarray(x, dtype=np.int64), np.asarray(center, dtype=np.int64)]
    return int(Q.evaluate(diff)) == int(radius)


def _center_grouped_count(vals_fn, P: np.ndarray, S: SphereSet, q: int) -> int:
    if len(P) == 0 or len(S) == 0:
        return 0
    centers, inverse = np.unique(S.centers, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    vals = vals_fn(P[:, None, :], centers[None, :, :])  # (|P|, #centers)
    hist = np.zeros((len(centers), q), dtype=np.int64)
    np.add.at(hist, (np.broadcast_to(np.arange(len(centers)), vals.shape), vals), 1)
    return int(hist[inverse, S.radii].sum())


def count_incidences(P, S, Q: DiagonalForm) -> int:
    """Number of (point, sphere) pairs with Q(point - center) = radius.

    Spheres sharing a center are grouped so that Q is evaluated once per
    (point, center) pair; each radius is then a histogram lookup.
    """
    P = as_points(P, Q.d)
    S = as_spheres(S, Q.d)
    _check_codes(P, Q.q)
    sub = Q.ctx.sub_table
    return _center_grouped_count(lambda x, b: Q.evaluate(sub[x, b]), P, S, Q.q)


def count_incidences_naive(P, S, Q: DiagonalForm) -> int:
    """Double loop over every (point, sphere) pair."""
    P = as_points(P, Q.d)
    return sum(on_sphere(Q, s, p) for p in P for s in as_spheres(S, Q.d))


def ring_sphere_value(x, b, ring: RingCtx) -> np.ndarray:
    diff = (np.asarray(x, dtype=np.int64) - np.asarray(b, dtype=np.int64)) % ring.q
    return (diff * diff).sum(axis=-1) % ring.q


def count_incidences_ring(P, S, ring: RingCtx, d: int) -> int:
    """Incidences with the spheres sum_i (x_i - b_i)^2 = r over Z_q^d."""
    if ring.q % 2 == 0:
        raise InvalidInput("q must be odd")
    P = as_points(P, d)
    S = as_spheres(S, d)
    _check_codes(P, ring.q)
    return _center_grouped_count(
        lambda x, b: ring_sphere_value(x, b, ring), P, S, ring.q
    )


# -- distances -----------------------------------------------------------------


def distance_matrix(E, Q: DiagonalForm) -> np.ndarray:
    """D[i, j] = Q(E[i] - E[j])."""
    E = as_points(E, Q.d)
    return Q.evaluate(Q.ctx.sub_table[E[:, None, :], E[None, :, :]])


def distance_counts(E, Q: DiagonalForm, include_equal: bool = True) -> np.ndarray:
    """Length-q array whose entry r counts ordered pairs at Q-distance r."""
    D = distance_matrix(E, Q)
    if not include_equal:
        D = D[~np.eye(len(D), dtype=bool)]
    return np.bincount(D.reshape(-1), minlength=Q.q)


def distance_histogram(E, Q: DiagonalForm, include_equal: bool = True) -> dict:
    counts = distance_counts(E, Q, include_equal)
    return {int(r): int(n) for r, n in enumerate(counts) if n}


def pinned_distance_set(E, p, Q: DiagonalForm) -> frozenset:
    """The values Q(y - p) for y in E."""
    E = as_points(E, Q.d)
    if len(E) == 0:
        return frozenset()
    diff = Q.ctx.sub_table[E, np.asarray(p, dtype=np.int64)[None, :]]
    return frozenset(int(v) for v in np.unique(Q.evaluate(diff)))


def pinned_distance_sizes(E, Q: DiagonalForm) -> np.ndarray:
    """|Delta_Q(E, p)| for every p in E, in order."""
    D = distance_matrix(E, Q)  # D[i, j] = Q(E[i] - E[j]); pin is the column
    if D.size == 0:
        return np.zeros(0, dtype=np.int64)
    seen = np.zeros((D.shape[1], Q.q), dtype=bool)
    seen[np.broadcast_to(np.arange(D.shape[1]), D.shape), D] = True
    return seen.sum(axis=1)


def zero_distance_pairs(E, Q: DiagonalForm) -> int:
    """Ordered pairs x != y in E with Q(x - y) = 0."""
    D = distance_matrix(E, Q)
    return int((D == 0).sum() - len(D))


# -- CSV interchange -----------------------------------------------------------


def format_elem(ctx, x: int) -> str:
    """Base-p digit string, low-to-high, for field codes; plain residue for rings."""
    if isinstance(ctx, FieldCtx) and ctx.k > 1:
        return "".join(str(c) for c in ctx.coeffs(int(x)))
    return str(int(x))


def parse_elem(ctx, text: str) -> int:
    text = text.strip()
    if isinstance(ctx, FieldCtx) and ctx.k > 1:
        if len(text) != ctx.k or not text.isdigit():
            raise InvalidInput(f"expected {ctx.k} base-{ctx.p} digits, got {text!r}")
        return ctx.elem(int(ch) for ch in text)
    try:
        return ctx.check(int(text))
    except ValueError as exc:
        if isinstance(exc, InvalidInput):
            raise
        raise InvalidInput(f"bad coordinate {text!r}") from exc


def points_to_csv(P, ctx, d: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"x{i + 1}" for i in range(d)])
    for row in as_points(P, d):
        w.writerow([format_elem(ctx, x) for x in row])
    return buf.getvalue()


def spheres_to_csv(S, ctx, d: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"b{i + 1}" for i in range(d)] + ["r"])
    for center, radius in as_spheres(S, d):
        w.writerow([format_elem(ctx, x) for x in center] + [format_elem(ctx, radius)])
    return buf.getvalue()


def _rows(text: str) -> list:
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if rows and not all(cell.strip().isdigit() for cell in rows[0]):
        rows = rows[1:]
    return rows


def points_from_csv(text: str, ctx, d: int) -> np.ndarray:
    rows = _rows(text)
    if any(len(r) != d for r in rows):
        raise InvalidInput(f"every point row needs {d} fields")
    pts = np.array([[parse_elem(ctx, c) for c in r] for r in rows], dtype=np.int64)
    pts = pts.reshape(-1, d)
    if not is_distinct_rows(pts):
        raise InvalidInput("duplicate points")
    return pts


def spheres_from_csv(text: str, ctx, d: int) -> SphereSet:
    rows = _rows(text)
    if any(len(r) != d + 1 for r in rows):
        raise InvalidInput(f"every sphere row needs {d + 1} fields")
    vals = np.array([[parse_elem(ctx, c) for c in r] for r in rows], dtype=np.int64)
    vals = vals.reshape(-1, d + 1)
    if not is_distinct_rows(vals):
        raise InvalidInput("duplicate spheres")
    return SphereSet(vals[:, :d], vals[:, d])


def enumerate_sphere(Q: DiagonalForm, s) -> list:
    """Point set of a sphere by brute force over F_q^d."""
    pts = all_points(Q.q, Q.d)
    return [tuple(int(c) for c in pt) for pt in pts if on_sphere(Q, s, pt)]
