"""Diagonal Einstein metrics on M = H x H / Delta K.

With cas = kappa I and a uniform Killing ratio a, the Einstein condition for
(x, x, 1) reduces to the quadratic 2 a x^2 - (2 kappa + 1) x + (1 - a + kappa),
whose roots are x+- when the discriminant is nonnegative; abelian K (a = 0)
degenerates to the single root x = (kappa + 1)/(2 kappa + 1).

Equality detection and all ordering claims are decided in exact rational
arithmetic on numbers of the form p + q sqrt(disc); square roots are taken in
doubles only when building the returned metrics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .catalog import SpaceSpec, cond2_discriminant
from .diagonal import DiagonalMetric, einstein_residual, ricci_diagonal, scal_n_diagonal
from .errors import UnsupportedSpaceError

LABELS = ("g1_plus", "g2_minus", "abelian", "g3", "g4", "g5", "g6")

RESIDUAL_BOUND = 1e-10


@dataclass(frozen=True)
class Surd:
    """Exact number p + q sqrt(disc) with rational p, q and disc >= 0."""

    p: Fraction
    q: Fraction
    disc: Fraction

    def __float__(self) -> float:
        return float(self.p) + float(self.q) * math.sqrt(float(self.disc))

    def shift(self, c) -> "Surd":
        return Surd(self.p - Fraction(c), self.q, self.disc)

    def sign(self) -> int:
        """Exact sign of p + q sqrt(disc)."""
        p, q, disc = self.p, self.q, self.disc
        if q == 0 or disc == 0:
            return (p > 0) - (p < 0)
        if p == 0:
            return (q > 0) - (q < 0)
        if p > 0 and q > 0:
            return 1
        if p < 0 and q < 0:
            return -1
        lhs, rhs = p * p, q * q * disc
        if p > 0:  # q < 0
            return (lhs > rhs) - (lhs < rhs)
        return (rhs > lhs) - (rhs < lhs)  # p < 0, q > 0

    def cmp(self, c) -> int:
        """Exact sign of (self - c) for rational c."""
        return self.shift(c).sign()


@dataclass(frozen=True)
class EinsteinSolution:
    metric: object  # DiagonalMetric or FullMetric
    rho: float
    scal_n: float
    residual: float
    label: str
    exact_x: Surd | None = None  # x1 = x2 value for diagonal solutions
    isometric_to: str | None = None

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown solution label {self.label!r}")
        if not self.rho > 0:
            raise ValueError(f"Einstein constant must be positive, got {self.rho}")
        if not self.residual < RESIDUAL_BOUND:
            raise ValueError(
                f"residual {self.residual:.3e} exceeds {RESIDUAL_BOUND:.0e}; "
                "formula regression"
            )


def _require_solvable(spec: SpaceSpec) -> Fraction:
    if not spec.flags.uniform_a:
        raise UnsupportedSpaceError(
            f"{spec.id}: diagonal Einstein equations need abelian K or a uniform ratio"
        )
    return spec.a


def exact_roots(spec: SpaceSpec) -> list[Surd]:
    """Exact x-values of the diagonal Einstein metrics (x, x, 1), if any."""
    a = _require_solvable(spec)
    kappa = spec.kappa
    if a == 0:
        x = (kappa + 1) / (2 * kappa + 1)
        return [Surd(x, Fraction(0), Fraction(0))]
    disc = cond2_discriminant(spec)
    if disc < 0:
        return []
    if disc == 0:
        return [Surd((2 * kappa + 1) / (4 * a), Fraction(0), Fraction(0))]
    center = (2 * kappa + 1) / (4 * a)
    q = 1 / (4 * a)
    return [Surd(center, q, disc), Surd(center, -q, disc)]


def rho_of_x(spec: SpaceSpec, x: float) -> float:
    kappa = float(spec.kappa)
    return ((2 * kappa + 1) * x - kappa) / (4 * x * x)


def scal_n_plain(spec: SpaceSpec, x: float) -> float:
    """scal_N of (x, x, 1) at a critical point: (2n+d)((2k+1)x - k)/(4 x^(2 alpha))."""
    kappa = float(spec.kappa)
    return spec.dim_m * ((2 * kappa + 1) * x - kappa) / (4.0 * x ** (2 * float(spec.alpha)))


def solve_diagonal(spec: SpaceSpec) -> list[EinsteinSolution]:
    """All diagonal Einstein metrics, normalized to x3 = 1.

    Returns two solutions (labels g1_plus/g2_minus, x+ first), one for abelian
    K or a vanishing discriminant, and none when the existence condition
    fails.  Every emitted solution is re-checked against the closed-form Ricci
    operator.
    """
    roots = exact_roots(spec)
    a = spec.a
    out = []
    if not roots:
        return out
    if len(roots) == 1:
        label = "abelian" if a == 0 else "g1_plus"
        out.append(_solution_from_root(spec, roots[0], label))
        return out
    out.append(_solution_from_root(spec, roots[0], "g1_plus"))
    out.append(_solution_from_root(spec, roots[1], "g2_minus"))
    return out


def _solution_from_root(spec: SpaceSpec, root: Surd, label: str) -> EinsteinSolution:
    x = float(root)
    metric = DiagonalMetric(x, x, 1.0)
    return EinsteinSolution(
        metric=metric,
        rho=rho_of_x(spec, x),
        scal_n=scal_n_diagonal(spec, metric),
        residual=einstein_residual(spec, metric),
        label=label,
        exact_x=root,
    )


# ---------------------------------------------------------------------------
# ordering and scaling claims
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrderingReport:
    space_id: str
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list[str]:
        return [name for name, passed in self.checks.items() if not passed]


def ordering_checks(spec: SpaceSpec, sols: list[EinsteinSolution]) -> OrderingReport:
    """Exact-arithmetic ordering relations between x-, x+ and kappa/a markers."""
    if len(sols) != 2:
        raise ValueError(f"{spec.id}: ordering checks need two distinct solutions")
    a, kappa = spec.a, spec.kappa
    xp, xm = sols[0].exact_x, sols[1].exact_x
    mid = (2 * kappa + 1) / (4 * a)
    cap = (2 * kappa + 1) / (2 * a)
    sep = 2 * (1 - a + kappa) / (2 * kappa + 1)
    checks = {
        "xm_below_vertex": xm.cmp(mid) < 0,
        "vertex_below_xp": xp.cmp(mid) > 0,
        "xp_at_most_cap": xp.cmp(cap) <= 0,
        "xm_below_separator": xm.cmp(sep) < 0,
        "separator_below_xp": xp.cmp(sep) > 0,
    }
    if a < kappa:
        checks["xm_below_one"] = xm.cmp(1) < 0
        checks["one_below_xp"] = xp.cmp(1) > 0
    report = OrderingReport(spec.id, checks)
    if not report.ok:
        raise AssertionError(
            f"{spec.id}: ordering regression in {report.failures()}"
        )
    return report


def x3_normal_form(spec: SpaceSpec) -> list[float]:
    """x3 of the homothety representatives (1, 1, x3) of the solutions.

    The plus root here rescales to the minus solution and vice versa:
    x3(+-) = 1/x(-+), so the returned list pairs with solve_diagonal's order
    reversed.  Abelian K gives the single value (2 kappa + 1)/(kappa + 1).
    """
    a = _require_solvable(spec)
    kappa = spec.kappa
    if a == 0:
        return [float((2 * kappa + 1) / (kappa + 1))]
    disc = cond2_discriminant(spec)
    if disc < 0:
        return []
    den = 2 * (1 - a + kappa)
    if disc == 0:
        return [float((2 * kappa + 1) / den)]
    root = math.sqrt(float(disc))
    return [(float(2 * kappa + 1) + root) / float(den),
            (float(2 * kappa + 1) - root) / float(den)]


def besse_condition(spec: SpaceSpec) -> bool:
    """Canonical-variation existence test (2k+1)^2/16 >= (a/2)(1 - a + k).

    Exactly the two-solution condition with equality allowed, evaluated in
    rational arithmetic; agrees with existence_condition strict-or-equality.
    """
    a = _require_solvable(spec)
    kappa = spec.kappa
    return (2 * kappa + 1) ** 2 * Fraction(1, 16) >= Fraction(a, 2) * (1 - a + kappa)


# ---------------------------------------------------------------------------
# the scalar-curvature slice s(x) = scal_N(x, x, 1)
# ---------------------------------------------------------------------------


def scal_slice(spec: SpaceSpec, x: float) -> float:
    """scal_N of (x, x, 1)."""
    return scal_n_diagonal(spec, DiagonalMetric(x, x, 1.0))


def scal_slice_derivative(spec: SpaceSpec, x: float) -> float:
    """s'(x); proportional to the Einstein quadratic, so it vanishes at x+-.

    s'(x) = d [2 a n x^2 - (2 d (1-a) + n) x + (1-a)(n+d)] x^(-2 alpha) / (2 D x)
    with D = 2n + d.
    """
    a = float(_require_solvable(spec))
    n, d, dim = spec.n, spec.d, spec.dim_m
    quad = 2 * a * n * x * x - (2 * d * (1 - a) + n) * x + (1 - a) * (n + d)
    return d * quad * x ** (-2 * float(spec.alpha)) / (2 * dim * x)


def solutions_to_json(spec: SpaceSpec, sols: list[EinsteinSolution]) -> dict:
    entries = []
    for sol in sols:
        m = sol.metric
        x4 = getattr(m, "x4", 0.0)
        entries.append(
            {
                "label": sol.label,
                "x1": float(m.x1),
                "x2": float(m.x2),
                "x3": float(m.x3),
                "x4": float(x4),
                "rho": sol.rho,
                "scal_n": sol.scal_n,
                "residual": sol.residual,
                "isometric_to": sol.isometric_to,
            }
        )
    return {"space_id": spec.id, "solutions": entries}
