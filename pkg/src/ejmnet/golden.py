"""Golden-value checks run by ``ejmnet verify``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from . import qmath
from .analysis import TRILOCAL_BOUND
from .correlator import (
    distribution,
    polygon_closed_form,
    prob_all_equal,
    prob_conditional,
    prob_conditional_all_given_prefix,
    prob_pair_equal,
    ring_distribution,
    ring_prob_all_equal,
)
from .ejm import basis_entanglement, ejm_basis, tetrahedron_vectors
from .network import RingNetwork
from .sources import Partial, Product, Singlet, Werner, parse_sources


@dataclass
class CheckResult:
    name: str
    passed: bool
    computed: str
    expected: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}: computed={self.computed} expected={self.expected}"


def as_fraction(x: float, max_den: int = 4096, tol: float = 1e-12) -> Fraction | None:
    """Exact rational p/q (q <= max_den) within ``tol`` of ``x``, if any."""
    f = Fraction(x).limit_denominator(max_den)
    return f if abs(float(f) - x) <= tol else None


def _close(name: str, computed: float, expected: Fraction | float, tol: float = 1e-12) -> CheckResult:
    ok = abs(computed - float(expected)) <= tol
    return CheckResult(name, ok, f"{computed:.17g}", str(expected))


def _triangle(pattern: str, theta: float = 0.0):
    return distribution(RingNetwork(parse_sources(pattern)), theta)


def check_triangle_singlets() -> Iterator[CheckResult]:
    d = _triangle("sss")
    worst = {"kkk": 0.0, "kkm": 0.0, "knm": 0.0}
    expected = {"kkk": Fraction(25, 256), "kkm": Fraction(1, 256), "knm": Fraction(5, 256)}
    for outcome, p in d.items():
        kind = {1: "kkk", 2: "kkm", 3: "knm"}[len(set(outcome))]
        worst[kind] = max(worst[kind], abs(p - float(expected[kind])))
    for kind, err in worst.items():
        yield CheckResult(f"sss p({kind})", err <= 1e-12, f"max|err|={err:.2e}", str(expected[kind]))
    yield _close("sss normalization", float(d.probs.sum()), 1)
    yield _close("sss p(a=b)", prob_pair_equal(d, 0, 1), Fraction(7, 16))
    yield _close("sss p(a=k|b=c=k)", prob_conditional(d, 0, (1, 2)), Fraction(25, 28))
    yield _close("sss p(a=b=c)", prob_all_equal(d), Fraction(25, 64))


def check_product_triangles() -> Iterator[CheckResult]:
    for pattern, per_k, total in (
        ("pss", Fraction(41, 512), Fraction(41, 128)),
        ("pps", Fraction(17, 512), Fraction(68, 512)),
    ):
        d = _triangle(pattern)
        for k in range(1, 5):
            yield _close(f"{pattern} p({k},{k},{k})", d[(k, k, k)], per_k)
        yield _close(f"{pattern} p(a=b=c)", prob_all_equal(d), total)


def check_bound_relations() -> Iterator[CheckResult]:
    yield CheckResult("bound constant", TRILOCAL_BOUND == Fraction(61, 256), str(TRILOCAL_BOUND), "61/256")
    for pattern, above in (("pss", True), ("pps", False)):
        value = as_fraction(prob_all_equal(_triangle(pattern)))
        ok = value is not None and (value > TRILOCAL_BOUND) == above
        rel = ">" if above else "<"
        yield CheckResult(f"{pattern} p(a=b=c) {rel} 61/256", ok, str(value), f"{rel} 61/256")


def check_polygon_conditionals() -> Iterator[CheckResult]:
    for pattern, expected in (
        ("sssp", Fraction(5, 11)),
        ("sspp", Fraction(416, 1024)),
        ("sppp", Fraction(224, 512)),
    ):
        d = distribution(RingNetwork(parse_sources(pattern)), 0.0)
        yield _close(f"N=4 {pattern} conditional", prob_conditional_all_given_prefix(d), expected)


def check_closed_form() -> Iterator[CheckResult]:
    cf3 = polygon_closed_form(3)
    yield CheckResult("closed form N=3", cf3 == Fraction(25, 64), str(cf3), "25/64")
    for n in range(3, 9):
        ring = ring_prob_all_equal(RingNetwork([Singlet()] * n), 0.0)
        yield _close(f"closed form vs ring N={n}", ring, polygon_closed_form(n))


def random_sources(rng: np.random.Generator, n: int):
    out = []
    for _ in range(n):
        kind = rng.integers(4)
        if kind == 0:
            out.append(Singlet())
        elif kind == 1:
            u = qmath.normalize(rng.normal(size=2) + 1j * rng.normal(size=2))
            v = qmath.normalize(rng.normal(size=2) + 1j * rng.normal(size=2))
            out.append(Product(u, v))
        elif kind == 2:
            out.append(Partial(float(rng.uniform()), int(rng.choice([-1, 1]))))
        else:
            out.append(Werner(float(rng.uniform())))
    return out


ORACLE_THETAS = (0.0, np.pi / 8, np.pi / 4, 3 * np.pi / 8, np.pi / 2)


def ring_vs_dense_deviation(patterns: int = 20, seed: int = 2024) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in (3, 4, 5):
        for _ in range(patterns):
            net = RingNetwork(random_sources(rng, n))
            for theta in ORACLE_THETAS:
                dense = distribution(net, theta)
                ring = ring_distribution(net, theta)
                worst = max(worst, dense.max_abs_difference(ring))
    return worst


def check_oracle_equivalence() -> Iterator[CheckResult]:
    dev = ring_vs_dense_deviation()
    yield CheckResult("ring vs dense N=3,4,5", dev < 1e-12, f"max|dev|={dev:.2e}", "< 1e-12")


def basis_property_errors(n_theta: int = 50) -> dict[str, float]:
    errs = {"orthonormality": 0.0, "completeness": 0.0, "marginals": 0.0}
    verts = tetrahedron_vectors()
    for theta in np.linspace(0, np.pi / 2, n_theta):
        basis = ejm_basis(theta)
        errs["orthonormality"] = max(errs["orthonormality"], basis.orthonormality_error())
        errs["completeness"] = max(errs["completeness"], basis.completeness_error())
        for b in range(4):
            for slot, sign in ((0, 1), (1, -1)):
                bloch = qmath.bloch_vector(basis.marginal(b, slot))
                target = sign * np.cos(theta) / 2 * verts[b]
                errs["marginals"] = max(errs["marginals"], float(np.max(np.abs(bloch - target))))
    return errs


def check_basis_properties() -> Iterator[CheckResult]:
    for name, err in basis_property_errors().items():
        yield CheckResult(f"EJM {name}", err < 1e-12, f"max|err|={err:.2e}", "< 1e-12")
    h0 = qmath.binary_entropy((1 + np.sqrt(3) / 2) / 2)
    yield _close("EJM entanglement theta=0", basis_entanglement(0.0), h0)
    yield _close("EJM entanglement theta=pi/2", basis_entanglement(np.pi / 2), 1)


CHECKS: tuple[Callable[[], Iterator[CheckResult]], ...] = (
    check_triangle_singlets,
    check_product_triangles,
    check_bound_relations,
    check_polygon_conditionals,
    check_closed_form,
    check_oracle_equivalence,
    check_basis_properties,
)


def run_all() -> list[CheckResult]:
    return [r for check in CHECKS for r in check()]
