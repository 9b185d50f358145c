"""The desk-scale verification suite.

Each ``criterion_*`` function runs one group of checks and returns a
:class:`CriterionResult`.  The results are deterministic functions of the
seed; wall-clock times only enter through the boolean runtime flags.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .algebra import field_make, ring_make
from .experiments import (
    deletion_ddsubset,
    greedy_ddsubset,
    incidence_bound_report,
    isosceles_count,
    isosceles_count_bruteforce,
    isosceles_report,
    pinned_distance_report,
    random_incidence_trials,
    ring_incidence_bound_report,
    sp_encoding_check,
    t2_report,
)
from .geometry import DiagonalForm, SphereSet, all_points, all_spheres
from .spectral import (
    CAYLEY_Q,
    CAYLEY_QPRIME,
    SUM_PRODUCT,
    adjacency_matrix,
    build_graph,
    certify,
    eigvec_residual,
    mixing_check,
)

RUNTIME_TARGET = 60.0


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "number": self.number,
            "name": self.name,
            "passed": bool(self.passed),
            "details": self.details,
        }

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}"


def _rng(seed: int, number: int) -> np.random.Generator:
    return np.random.default_rng([seed, number])


# -- graph grids ---------------------------------------------------------------


def cayley_grid():
    """(q, d, form) for the C_Q certification grid."""
    out = []
    for q in (3, 5, 7, 9):
        F = field_make(*{9: (3, 2)}.get(q, (q, 1)))
        out.append((q, 1, DiagonalForm.sum_of_squares(F, 1)))
        out.append((q, 2, DiagonalForm.sum_of_squares(F, 2)))
        if F.p % 3 != 0:
            out.append((q, 2, DiagonalForm(F, (1, 1), (2, 3))))
    return out


def qprime_grid():
    return [(q, 1, DiagonalForm.sum_of_squares(field_make(q), 1)) for q in (3, 5)]


SUM_PRODUCT_GRID = ((5, 1), (9, 1), (15, 1), (5, 2))


def _graph_label(g) -> str:
    form = f" Q={g.form}" if g.form is not None else ""
    return f"{g.kind} q={g.q} d={g.d}{form}"


def certified_graphs():
    graphs = [build_graph(CAYLEY_Q, Q.ctx, d, Q) for _, d, Q in cayley_grid()]
    graphs += [build_graph(CAYLEY_QPRIME, Q.ctx, d, Q) for _, d, Q in qprime_grid()]
    graphs += [build_graph(SUM_PRODUCT, ring_make(q), d) for q, d in SUM_PRODUCT_GRID]
    return graphs


def _weil_bound(Q: DiagonalForm) -> float:
    return math.prod(c - 1 for c in Q.exps) * Q.q ** (Q.d / 2)


def criterion_1(seed: int) -> CriterionResult:
    start = time.perf_counter()
    cases, ok = [], True
    for q, d, Q in cayley_grid():
        g = build_graph(CAYLEY_Q, Q.ctx, d, Q)
        cert = certify(g)
        trivial_ok = abs(cert.trivial - g.degree) <= 1e-9 * g.degree
        case_ok = cert.verdict and trivial_ok
        ok &= case_ok
        cases.append({
            "graph": _graph_label(g),
            "lambda": cert.lambda_,
            "bound": cert.bound,
            "weil_bound": _weil_bound(Q),
            "trivial_ok": trivial_ok,
            "verdict": case_ok,
        })
    g = build_graph(CAYLEY_Q, field_make(3), 1)
    moduli = np.sort(np.abs(certify(g).spectrum))
    expected = np.sort([3.0, 0.0, 0.0] + [math.sqrt(3)] * 6)
    multiset_ok = bool(np.max(np.abs(moduli - expected)) <= 1e-9)
    runtime_ok = time.perf_counter() - start < RUNTIME_TARGET
    failing = [c["graph"] for c in cases if not c["verdict"]]
    return CriterionResult(
        1,
        "Cayley C_Q spectra within q^(d/2)",
        ok and multiset_ok and runtime_ok,
        {"cases": cases, "failing": failing, "multiset_ok": multiset_ok,
         "runtime_ok": runtime_ok},
    )


def criterion_2(seed: int) -> CriterionResult:
    cases = []
    for q, d, Q in qprime_grid():
        g = build_graph(CAYLEY_QPRIME, Q.ctx, d, Q)
        cert = certify(g)
        cases.append({"graph": _graph_label(g), "lambda": cert.lambda_,
                      "bound": cert.bound, "verdict": cert.verdict})
    return CriterionResult(2, "Cayley C_Q' spectra within q^d",
                           all(c["verdict"] for c in cases), {"cases": cases})


def criterion_3(seed: int) -> CriterionResult:
    cases = []
    for q, d in SUM_PRODUCT_GRID:
        g = build_graph(SUM_PRODUCT, ring_make(q), d)
        cert = certify(g)
        A = adjacency_matrix(g)
        regular = bool((A.sum(axis=0) == g.degree).all() and (A.sum(axis=1) == g.degree).all())
        bound_ok = cert.lambda_ <= cert.bound + 1e-8
        cases.append({"graph": _graph_label(g), "lambda": cert.lambda_,
                      "bound": cert.bound, "regular": regular,
                      "vacuous": cert.vacuous, "verdict": bound_ok and regular})
    return CriterionResult(3, "sum-product spectra within sqrt(2 tau) q^d / gamma^(d/2)",
                           all(c["verdict"] for c in cases), {"cases": cases})


def criterion_4(seed: int) -> CriterionResult:
    rng = _rng(seed, 4)
    cases = []
    for g in certified_graphs():
        if not g.is_cayley or g.n > 2000:
            continue
        ms = g.decode(rng.integers(0, g.n, size=50))
        worst = max(eigvec_residual(g, m) for m in ms)
        cases.append({"graph": _graph_label(g), "max_residual": worst,
                      "verdict": worst <= 1e-9 * g.degree})
    return CriterionResult(4, "character eigenvector residuals",
                           all(c["verdict"] for c in cases), {"cases": cases})


def criterion_5(seed: int) -> CriterionResult:
    cases = []
    for g in certified_graphs():
        spec = certify(g).spectrum
        if g.is_cayley:
            loops = g.n  # one loop at every vertex, Q(0) = 0
        else:
            loops = int(np.trace(adjacency_matrix(g)))
        tr = complex(np.sum(spec))
        fro = float(np.sum(np.abs(spec) ** 2))
        trace_ok = abs(tr - loops) <= 1e-6 * max(loops, 1)
        parseval_ok = abs(fro - g.n * g.degree) <= 1e-6 * g.n * g.degree
        cases.append({"graph": _graph_label(g), "trace": tr.real, "loops": loops,
                      "frobenius": fro, "verdict": trace_ok and parseval_ok})
    return CriterionResult(5, "trace and Parseval identities",
                           all(c["verdict"] for c in cases), {"cases": cases})


def _random_subset(rng, q, dim, size=None) -> np.ndarray:
    total = q**dim
    k = int(rng.integers(1, total + 1)) if size is None else size
    idx = rng.choice(total, size=k, replace=False)
    return (idx[:, None] // q ** np.arange(dim - 1, -1, -1)) % q


def _random_spheres(rng, q, d, size=None) -> SphereSet:
    full = _random_subset(rng, q, d + 1, size)
    return SphereSet(full[:, :d], full[:, d])


def incidence_grid():
    out = []
    for q in (3, 5):
        F = field_make(q)
        for d in (1, 2):
            out.append(DiagonalForm.sum_of_squares(F, d))
    out.append(DiagonalForm(field_make(5), (1, 1), (2, 3)))
    return out


def criterion_6(seed: int, instances: int = 1000) -> CriterionResult:
    rng = _rng(seed, 6)
    cases = []
    for Q in incidence_grid():
        q, d = Q.q, Q.d
        full = incidence_bound_report(all_points(q, d), all_spheres(q, d), Q)
        failures = 0
        for _ in range(instances):
            rep = incidence_bound_report(_random_subset(rng, q, d), _random_spheres(rng, q, d), Q)
            failures += not rep.verdict
        cases.append({"form": f"q={q} d={d} Q={Q}", "random_failures": failures,
                      "full_count": full.count, "full_main": float(full.main),
                      "verdict": failures == 0 and full.verdict
                      and full.count == full.main == q ** (2 * d)})
    F3 = DiagonalForm.sum_of_squares(field_make(3), 1)
    exact = incidence_bound_report(all_points(3, 1), all_spheres(3, 1), F3)
    exact_ok = exact.count == 9 and exact.main == 9
    return CriterionResult(6, "point-sphere incidence bound over F_q",
                           all(c["verdict"] for c in cases) and exact_ok,
                           {"cases": cases, "f3_exact": exact_ok})


def criterion_7(seed: int, instances: int = 1000, encodings: int = 500) -> CriterionResult:
    rng = _rng(seed, 7)
    cases = []
    for q, d in ((9, 1), (15, 1), (5, 2)):
        R = ring_make(q)
        failures = 0
        for _ in range(instances):
            rep = ring_incidence_bound_report(
                _random_subset(rng, q, d), _random_spheres(rng, q, d), R, d)
            failures += not rep.verdict
        full = ring_incidence_bound_report(all_points(q, d), all_spheres(q, d), R, d)
        pts = rng.integers(0, q, size=(encodings, d))
        sph = rng.integers(0, q, size=(encodings, d + 1))
        enc_bad = sum(
            not sp_encoding_check(p, (s[:d], s[d]), R, d) for p, s in zip(pts, sph)
        )
        cases.append({"ring": f"Z_{q} d={d}", "random_failures": failures,
                      "full_verdict": full.verdict, "encoding_failures": enc_bad,
                      "verdict": failures == 0 and enc_bad == 0 and full.verdict})
    return CriterionResult(7, "point-sphere incidence bound over Z_q and its encoding",
                           all(c["verdict"] for c in cases), {"cases": cases})


def criterion_8(seed: int, instances: int = 100) -> CriterionResult:
    rng = _rng(seed, 8)
    cases = []
    for g in certified_graphs():
        cert = certify(g)
        failures = 0
        for _ in range(instances):
            B = rng.choice(g.n, size=int(rng.integers(1, g.n + 1)), replace=False)
            C = rng.choice(g.n, size=int(rng.integers(1, g.n + 1)), replace=False)
            failures += not mixing_check(cert, g, B, C).verdict
        cases.append({"graph": _graph_label(g), "failures": failures,
                      "verdict": failures == 0})
    return CriterionResult(8, "expander mixing with certified lambda",
                           all(c["verdict"] for c in cases), {"cases": cases})


def criterion_9(seed: int, runs: int = 20) -> CriterionResult:
    Q = DiagonalForm.sum_of_squares(field_make(13), 2)
    cases = []
    for k in range(runs):
        E = _random_subset(_rng(seed, 900 + k), 13, 2, size=30)
        rep = pinned_distance_report(E, Q, 0.9)
        cases.append({"run": k, "good_pins": rep.good_pins, "average": rep.average,
                      "hypothesis": rep.hypothesis,
                      "verdict": rep.hypothesis and rep.verdict and rep.average_ok})
    return CriterionResult(9, "pinned distance sets",
                           all(c["verdict"] for c in cases), {"cases": cases})


def _triple_sets(seed: int, number: int, per_config: int):
    rng = _rng(seed, number)
    for q in (5, 7):
        Q = DiagonalForm.sum_of_squares(field_make(q), 2)
        yield Q, "full", all_points(q, 2)
        for k in range(per_config):
            yield Q, f"random{k}", _random_subset(rng, q, 2)


def criterion_10(seed: int, per_config: int = 50) -> CriterionResult:
    cases = []
    for Q, label, E in _triple_sets(seed, 10, per_config):
        rep = isosceles_report(E, Q)
        oracle_ok = isosceles_count(E, Q) == isosceles_count_bruteforce(E, Q)
        cases.append({"q": Q.q, "set": label, "iso": rep.iso, "t1": rep.t1,
                      "verdict": rep.identity_ok and rep.bound_ok and oracle_ok})
    bad = [c for c in cases if not c["verdict"]]
    return CriterionResult(10, "isosceles identity and T_1 bound", not bad,
                           {"instances": len(cases), "failures": bad})


def criterion_11(seed: int, per_config: int = 50) -> CriterionResult:
    cases = []
    for Q, label, E in _triple_sets(seed, 11, per_config):
        rep = t2_report(E, Q)
        cases.append({"q": Q.q, "set": label, "t2": rep.t2, "verdict": rep.verdict})
    base = t2_report(all_points(3, 1), DiagonalForm.sum_of_squares(field_make(3), 1))
    exact_ok = base.t2 == 45 and base.deviation == 18 and base.bound == 27
    bad = [c for c in cases if not c["verdict"]]
    return CriterionResult(11, "T_2 bound", not bad and exact_ok,
                           {"instances": len(cases), "failures": bad, "f3_exact": exact_ok})


def criterion_12(seed: int, seeds: int = 10) -> CriterionResult:
    runs, excursions, ok = [], [], True
    for q in (7, 11, 13):
        Q = DiagonalForm.sum_of_squares(field_make(q), 2)
        E = all_points(q, 2)
        reports = [greedy_ddsubset(E, Q, "lex")]
        for k in range(seeds):
            s = seed * 1000 + k
            reports.append(greedy_ddsubset(E, Q, "shuffle", s))
            reports.append(deletion_ddsubset(E, Q, s))
        for rep in reports:
            good = rep.valid and (rep.method != "greedy" or rep.maximal)
            ok &= good
            runs.append({"q": q, "method": rep.method, "size": rep.size,
                         "valid": rep.valid, "maximal": rep.maximal})
            if not rep.in_envelope:
                excursions.append({"q": q, "method": rep.method, "size": rep.size,
                                   "envelope": list(rep.size_envelope)})
    return CriterionResult(12, "distinct-distance subsets", ok,
                           {"runs": runs, "envelope_excursions": excursions})


def criterion_13(seed: int) -> CriterionResult:
    start = time.perf_counter()
    Q = DiagonalForm.sum_of_squares(field_make(23), 2)
    freq = random_incidence_trials(23, 2, Q, 4 * 23, 200, 1)
    control = random_incidence_trials(23, 2, Q, 0, 200, 1)
    runtime_ok = time.perf_counter() - start < RUNTIME_TARGET
    return CriterionResult(
        13, "random incidence harness", freq <= 0.01 and control == 1.0 and runtime_ok,
        {"frequency": freq, "control": control, "runtime_ok": runtime_ok},
    )


CRITERIA = [
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
    criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12,
    criterion_13,
]


def run_suite(seed: int, keep_going: bool = False, echo=None) -> list:
    """Run the criteria in order; stop at the first failure unless keep_going."""
    results = []
    for crit in CRITERIA:
        res = crit(seed)
        results.append(res)
        if echo is not None:
            echo(res.line())
        if not res.passed and not keep_going:
            break
    return results
