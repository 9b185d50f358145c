"""The three algebraic graphs, their spectra and (n, d, lambda) certificates.

Vertices of every graph are points of (F_q or Z_q)^(D+1) stored as integer
codes; vertex index i is the lexicographic position of the point, i.e. the
coordinates are the base-q digits of i with coordinate 0 most significant.

Orientation.  In the Cayley digraphs there is an arc X -> Y exactly when
x_0 - y_0 + Q(x - y) = 0, i.e. when X - Y lies in S' = {(u_0, u) : u_0 +
Q(u) = 0}.  For the character psi_m this gives

    (A psi_m)(X) = sum_{s in S'} psi_m(X - s) = psi_m(X) * sum_{s in S'} psi_m(-s),

so the eigenvalue attached to m is lambda_m = sum_u psi_m(Q(u), -u).  When
some exponent is odd this is the conjugate of the sum over S' itself; the
moduli agree either way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .algebra import FieldCtx, RingCtx, divisor_stats
from .errors import CapExceeded, InvalidInput, NonConvergence
from .geometry import DiagonalForm, all_points

CAYLEY_Q = "cayley_Q"
CAYLEY_QPRIME = "cayley_Qprime"
SUM_PRODUCT = "sum_product"
KINDS = (CAYLEY_Q, CAYLEY_QPRIME, SUM_PRODUCT)

RESIDUAL_CAP = 2000
DENSE_CAP = 4000
VERDICT_RTOL = 1e-9

# Work arrays in the character-sum kernel are capped at this many entries.
_CHUNK = 1 << 22


@dataclass(frozen=True)
class AlgebraicGraph:
    kind: str
    ambient: Union[FieldCtx, RingCtx]
    d: int
    form: Optional[DiagonalForm]
    n: int
    degree: int

    @property
    def q(self) -> int:
        return self.ambient.q

    @property
    def connection_form(self) -> DiagonalForm:
        """The form whose level set defines the arcs: Q, or Q' = Q(x) - Q(y)."""
        if self.kind == CAYLEY_QPRIME:
            return self.form.difference_form()
        return self.form

    @property
    def dim(self) -> int:
        """Number of coordinates of a vertex."""
        if self.kind == CAYLEY_QPRIME:
            return 2 * self.d + 1
        return self.d + 1

    @property
    def is_cayley(self) -> bool:
        return self.kind != SUM_PRODUCT

    def claimed_bound(self) -> float:
        q, d = self.q, self.d
        if self.kind == CAYLEY_Q:
            return q ** (d / 2)
        if self.kind == CAYLEY_QPRIME:
            return float(q**d)
        stats = divisor_stats(q)
        return math.sqrt(2 * stats.tau) * q**d / stats.gamma ** (d / 2)

    def vertices(self) -> np.ndarray:
        return all_points(self.q, self.dim)

    def index(self, verts) -> np.ndarray:
        verts = np.asarray(verts, dtype=np.int64).reshape(-1, self.dim)
        return verts @ (self.q ** np.arange(self.dim - 1, -1, -1, dtype=np.int64))

    def decode(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64).reshape(-1)
        return (idx[:, None] // self.q ** np.arange(self.dim - 1, -1, -1)) % self.q

    def out_neighbors(self, verts) -> np.ndarray:
        """Vertex indices of the out-neighbours, shape (len(verts), degree)."""
        verts = np.asarray(verts, dtype=np.int64).reshape(-1, self.dim)
        q = self.q
        if self.kind == SUM_PRODUCT:
            # (a, b) ~ (c, e) iff a + c = b.e, so c = b.e - a for each e.
            e = all_points(q, self.d)
            a, b = verts[:, 0], verts[:, 1:]
            c = ((b @ e.T) - a[:, None]) % q
            tail = e @ (q ** np.arange(self.d - 1, -1, -1, dtype=np.int64))
            return c * q**self.d + tail[None, :]
        form = self.connection_form
        sub, add = self.ambient.sub_table, self.ambient.add_table
        y = all_points(q, form.d)
        x0, x = verts[:, 0], verts[:, 1:]
        y0 = add[x0[:, None], form.evaluate(sub[x[:, None, :], y[None, :, :]])]
        tail = y @ (q ** np.arange(form.d - 1, -1, -1, dtype=np.int64))
        return y0 * q**form.d + tail[None, :]


def build_graph(kind: str, ctx, d: int, Q: Optional[DiagonalForm] = None) -> AlgebraicGraph:
    if kind not in KINDS:
        raise InvalidInput(f"unknown graph kind {kind!r}")
    if d < 1:
        raise InvalidInput("d must be >= 1")
    if ctx.q % 2 == 0:
        raise InvalidInput("q must be odd")
    q = ctx.q
    if kind == SUM_PRODUCT:
        if not isinstance(ctx, RingCtx):
            raise InvalidInput("the sum-product graph lives over Z_q")
        return AlgebraicGraph(kind, ctx, d, None, q ** (d + 1), q**d)
    if not isinstance(ctx, FieldCtx):
        raise InvalidInput("Cayley graphs need a field context")
    if Q is None:
        Q = DiagonalForm.sum_of_squares(ctx, d)
    if Q.ctx != ctx or Q.d != d:
        raise InvalidInput("form does not match the field or dimension")
    if kind == CAYLEY_Q:
        return AlgebraicGraph(kind, ctx, d, Q, q ** (d + 1), q**d)
    return AlgebraicGraph(kind, ctx, d, Q, q ** (2 * d + 1), q ** (2 * d))


# -- Cayley spectra ------------------------------------------------------------


def _roots(p: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(p) / p)


def _character_phases(g: AlgebraicGraph, ms: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Tr(m . x) mod p for every pair (m, x); shape (len(ms), len(pts))."""
    tm = g.ambient.trace_mul_table
    acc = np.zeros((len(ms), len(pts)), dtype=np.int64)
    for j in range(ms.shape[1]):
        acc += tm[ms[:, j][:, None], pts[:, j][None, :]]
    return acc % g.ambient.p


def _require_cayley(g: AlgebraicGraph):
    if not g.is_cayley:
        raise InvalidInput("character-sum spectra need a Cayley kind")


def character_eigenvalues(g: AlgebraicGraph, ms) -> np.ndarray:
    """lambda_m = sum_u psi_m(Q(u), -u) for each character index m (rows)."""
    _require_cayley(g)
    form = g.connection_form
    ms = np.asarray(ms, dtype=np.int64).reshape(-1, g.dim)
    u = all_points(g.q, form.d)
    # The conjugate-direction difference set -S' = {(Q(u), -u)}.
    neg_s = np.concatenate([form.evaluate(u)[:, None], g.ambient.neg_table[u]], axis=1)
    roots = _roots(g.ambient.p)
    out = np.empty(len(ms), dtype=complex)
    step = max(1, _CHUNK // len(neg_s))
    for start in range(0, len(ms), step):
        block = ms[start:start + step]
        out[start:start + step] = roots[_character_phases(g, block, neg_s)].sum(axis=1)
    return out


def cayley_spectrum(g: AlgebraicGraph) -> np.ndarray:
    """All n eigenvalues, entry i belonging to the character indexed by vertex i."""
    return character_eigenvalues(g, g.vertices())


def character_vector(g: AlgebraicGraph, m) -> np.ndarray:
    """(psi_m(X))_X over all vertices, as a complex array."""
    m = np.asarray(m, dtype=np.int64).reshape(1, g.dim)
    return _roots(g.ambient.p)[_character_phases(g, m, g.vertices())[0]]


def adjacency_lists(g: AlgebraicGraph) -> np.ndarray:
    return g.out_neighbors(g.vertices())


def eigvec_residual(g: AlgebraicGraph, m, cap: int = RESIDUAL_CAP) -> float:
    """max |A v - lambda_m v| for the character vector v of index m."""
    _require_cayley(g)
    if g.n > cap:
        raise CapExceeded(f"residual check needs n <= {cap}, got {g.n}")
    m = np.asarray(m, dtype=np.int64).reshape(g.dim)
    v = character_vector(g, m)
    lam = character_eigenvalues(g, m)[0]
    Av = v[adjacency_lists(g)].sum(axis=1)
    return float(np.max(np.abs(Av - lam * v)))


# -- dense symmetric spectrum --------------------------------------------------


def adjacency_matrix(g: AlgebraicGraph, cap: int = DENSE_CAP) -> np.ndarray:
    if g.n > cap:
        raise CapExceeded(f"dense adjacency needs n <= {cap}, got {g.n}")
    A = np.zeros((g.n, g.n))
    nbrs = adjacency_lists(g)
    np.add.at(A, (np.repeat(np.arange(g.n), g.degree), nbrs.reshape(-1)), 1.0)
    return A


def _round_robin(n: int):
    """n - 1 rounds of n/2 disjoint index pairs covering every pair once (n even)."""
    players = list(range(n))
    for _ in range(n - 1):
        half = n // 2
        yield [(players[i], players[n - 1 - i]) for i in range(half)]
        players = [players[0]] + [players[-1]] + players[1:-1]


def off_norm(A: np.ndarray) -> float:
    off = A - np.diag(np.diag(A))
    return float(np.sqrt(np.sum(off * off)))


def jacobi_eigenvalues(
    A: np.ndarray, tol: Optional[float] = None, max_sweeps: int = 60
) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once, in round-robin order, so
    that the n/2 rotations of a round act on disjoint rows and columns and
    are applied together.  Iteration stops when the off-diagonal Frobenius
    norm drops to ``tol`` (default 1e-10 * n).

    Returns the eigenvalues sorted ascending.
    """
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidInput("need a square matrix")
    if not np.allclose(A, A.T):
        raise InvalidInput("matrix is not symmetric")
    n = A.shape[0]
    if tol is None:
        tol = 1e-10 * n
    m = n + (n % 2)
    if m != n:  # pad with an isolated zero row so the pairing is perfect
        A = np.pad(A, ((0, 1), (0, 1)))
    rounds = [np.array(r).T for r in _round_robin(m)]
    for _ in range(max_sweeps):
        if off_norm(A) <= tol:
            return np.sort(np.diag(A)[:n])
        for P, Q in rounds:
            apq = A[P, Q]
            active = np.abs(apq) > 1e-300
            if not active.any():
                continue
            P, Q, apq = P[active], Q[active], apq[active]
            tau = (A[Q, Q] - A[P, P]) / (2.0 * apq)
            t = np.sign(tau) / (np.abs(tau) + np.hypot(1.0, tau))
            t[tau == 0] = 1.0
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            colP, colQ = A[:, P].copy(), A[:, Q]
            A[:, P] = c * colP - s * colQ
            A[:, Q] = s * colP + c * colQ
            rowP, rowQ = A[P, :].copy(), A[Q, :]
            A[P, :] = c[:, None] * rowP - s[:, None] * rowQ
            A[Q, :] = s[:, None] * rowP + c[:, None] * rowQ
    if off_norm(A) <= tol:
        return np.sort(np.diag(A)[:n])
    raise NonConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")


def symmetric_spectrum(g: AlgebraicGraph, cap: int = DENSE_CAP) -> np.ndarray:
    if g.kind != SUM_PRODUCT:
        raise InvalidInput("dense symmetric spectrum is for the sum-product graph")
    return jacobi_eigenvalues(adjacency_matrix(g, cap))


# -- edges and certificates ----------------------------------------------------


def _vertex_indices(g: AlgebraicGraph, V) -> np.ndarray:
    V = np.asarray(V, dtype=np.int64)
    if V.size == 0:
        return np.zeros(0, dtype=np.int64)
    if V.ndim == 1:
        return V
    return g.index(V)


def edge_count(g: AlgebraicGraph, B, C) -> int:
    """Ordered pairs (u, w) in B x C with an arc u -> w.

    B and C are either arrays of vertex coordinates, shape (k, dim), or 1-d
    arrays of vertex indices.
    """
    b = _vertex_indices(g, B)
    c = _vertex_indices(g, C)
    if len(b) == 0 or len(c) == 0:
        return 0
    member = np.zeros(g.n, dtype=bool)
    member[c] = True
    verts = g.decode(b)
    total = 0
    step = max(1, _CHUNK // g.degree)
    for start in range(0, len(verts), step):
        total += int(member[g.out_neighbors(verts[start:start + step])].sum())
    return total


@dataclass
class SpectralCert:
    n: int
    degree: int
    lambda_: float
    bound: float
    method: str
    verdict: bool
    trivial: float
    vacuous: bool
    kind: str = ""
    spectrum: np.ndarray = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "degree": self.degree,
            "lambda": float(self.lambda_),
            "bound": float(self.bound),
            "verdict": bool(self.verdict),
            "method": self.method,
            "trivial": float(self.trivial),
            "vacuous": bool(self.vacuous),
        }


def certify(g: AlgebraicGraph) -> SpectralCert:
    """Compute lambda(G) and compare it with the claimed (n, d, lambda) bound."""
    if g.is_cayley:
        spec = cayley_spectrum(g)
        trivial = spec[0].real  # index 0 is the zero character
        lam = float(np.abs(spec[1:]).max()) if g.n > 1 else 0.0
        method = "character_sum"
    else:
        spec = symmetric_spectrum(g)
        trivial = spec[-1]
        rest = spec[:-1]
        lam = float(np.abs(rest).max()) if len(rest) else 0.0
        method = "dense_symmetric"
    bound = g.claimed_bound()
    return SpectralCert(
        n=g.n,
        degree=g.degree,
        lambda_=lam,
        bound=bound,
        method=method,
        verdict=lam <= bound * (1 + VERDICT_RTOL),
        trivial=float(trivial),
        vacuous=bound >= g.degree,
        kind=g.kind,
        spectrum=spec,
    )


@dataclass
class MixingReport:
    edges: int
    expected: float
    lhs: float
    rhs: float
    verdict: bool

    def to_dict(self) -> dict:
        return {
            "edges": self.edges,
            "expected": self.expected,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "verdict": self.verdict,
        }


def mixing_check(cert: SpectralCert, g: AlgebraicGraph, B, C) -> MixingReport:
    """|e(B, C) - degree |B||C|/n| against lambda sqrt(|B||C|), certified lambda."""
    nb, nc = len(_vertex_indices(g, B)), len(_vertex_indices(g, C))
    e = edge_count(g, B, C)
    expected = g.degree * nb * nc / g.n
    lhs = abs(e - expected)
    rhs = cert.lambda_ * math.sqrt(nb * nc)
    slack = VERDICT_RTOL * max(1.0, rhs, expected)
    return MixingReport(e, expected, lhs, rhs, lhs <= rhs + slack)
