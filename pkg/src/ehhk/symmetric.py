"""Four-parameter metrics (x1, x2, x3, x4) when H/K is irreducible symmetric.

The off-diagonal coefficient x4 couples the two copies of the isotropy module.
Positive-definiteness is x1, x2, x3 > 0 and x1 x2 > x4^2.  The Ricci tensor is
available in closed form for symmetric H/K; the Einstein classification then
consists of the diagonal pair g1/g2 (ratio a < 1/2), the genuinely
non-diagonal pair g3/g4 (a > 1/2), and the pair g5/g6 which is Einstein for
every irreducible symmetric H/K regardless of proportionality of the Killing
ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .catalog import SpaceSpec
from .diagonal import DiagonalMetric
from .errors import NonEinsteinInputError, UnsupportedSpaceError
from .solver import EinsteinSolution, Surd, exact_roots

HALF = Fraction(1, 2)

FULL_RESIDUAL_BOUND = 1e-10


@dataclass(frozen=True)
class FullMetric:
    x1: object
    x2: object
    x3: object
    x4: object

    def __post_init__(self):
        if not (self.x1 > 0 and self.x2 > 0 and self.x3 > 0):
            raise ValueError(f"need x1, x2, x3 > 0, got {self}")
        if not self.x1 * self.x2 > self.x4 * self.x4:
            raise ValueError(f"need x1 x2 > x4^2 for positive-definiteness, got {self}")

    @property
    def disc(self):
        """x1 x2 - x4^2, the determinant of the coupled 2x2 block."""
        return self.x1 * self.x2 - self.x4 * self.x4

    def diagonal_part(self) -> DiagonalMetric:
        return DiagonalMetric(self.x1, self.x2, self.x3)


@dataclass(frozen=True)
class RicciComponents:
    """Ricci data of a full metric in Einstein-ratio form.

    r1, r2 and the per-ideal r3 are Ricci-operator block eigenvalues; r12 is
    the coupled-block ratio ricci(p1, p2)/(-x4 Kil); the metric is Einstein
    iff all of them agree (the r12 equation is vacuous when x4 = 0).  R is the
    scale-invariant auxiliary bracket sum entering r3.
    """

    r1: object
    r2: object
    r12: object
    r3: tuple
    R: object


def _require_symmetric(spec: SpaceSpec) -> None:
    if not spec.flags.symmetric:
        raise UnsupportedSpaceError(
            f"{spec.id}: the 4-parameter Ricci tensor needs an irreducible "
            "symmetric H/K"
        )


def ricci_full(spec: SpaceSpec, g: FullMetric) -> RicciComponents:
    """Closed-form Ricci of (x1, x2, x3, x4) for symmetric H/K.

    Stated at x3 = 1; a general x3 is handled by the homothety g -> g/x3,
    under which the Ricci operator scales by 1/x3 and R is unchanged.
    """
    _require_symmetric(spec)
    scale = g.x3
    x1, x2, x4 = g.x1 / scale, g.x2 / scale, g.x4 / scale
    D = x1 * x2 - x4 * x4
    r1 = -x2 / (8 * x1 * D) + x4 * x4 / (2 * D) + 1 / (2 * x1)
    r2 = -x1 / (8 * x2 * D) + x4 * x4 / (2 * D) + 1 / (2 * x2)
    r12 = (4 * x1 * x2 - 1) / (8 * D)
    R = (
        -2 * x4 * x4 / D
        + 1 / (4 * x1 * x1)
        + (x1 * x1 - x4 * x4) ** 2 / (4 * x1 * x1 * D * D)
        + x4 * x4 / (2 * x1 * x1 * D)
    )
    r3 = tuple((a_l * (1 - R) + R) / 2 for a_l, _ in spec.killing_ratios)
    return RicciComponents(
        r1 / scale, r2 / scale, r12 / scale, tuple(v / scale for v in r3), R
    )


def einstein_residual_full(spec: SpaceSpec, g: FullMetric) -> float:
    """Dimensionless Einstein defect over (r1, r2, r12, r3_l).

    The mean is the block-dimension weighted trace mean; the r12 ratio is only
    constrained when x4 != 0.
    """
    rc = ricci_full(spec, g)
    weights = [spec.n, spec.n] + [d_l for _, d_l in spec.killing_ratios]
    values = [float(rc.r1), float(rc.r2)] + [float(v) for v in rc.r3]
    rbar = sum(w * v for w, v in zip(weights, values)) / sum(weights)
    devs = [abs(v - rbar) for v in values]
    if float(g.x4) != 0.0:
        devs.append(abs(float(rc.r12) - rbar))
    return max(devs) / abs(rbar)


def classify_symmetric(spec: SpaceSpec) -> list[EinsteinSolution]:
    """All invariant Einstein metrics up to scaling, per the symmetric case.

    Uniform ratio a:
      a < 1/2: g1 = (x+, x+, 1, 0), g2 = (x-, x-, 1, 0), g5, g6
      a > 1/2: g3 = (1, 1, 1, y), g4 = (1, 1, 1, -y) with
               y = (1/2) sqrt((2a-1)/(2-a)), plus g5, g6
      a = 1/2: the single diagonal solution plus g5, g6
    Non-uniform ratios: only the always-Einstein pair g5, g6 (existence, not a
    classification).  a = 0 (only SU(2)/S^1) is out of scope.
    """
    _require_symmetric(spec)
    sols: list[EinsteinSolution] = []
    if spec.flags.uniform_a:
        a = spec.a
        if a == 0:
            raise UnsupportedSpaceError(
                f"{spec.id}: a = 0 symmetric pair is excluded from the classification"
            )
        if a < HALF:
            for root, label in zip(exact_roots(spec), ("g1_plus", "g2_minus")):
                x = float(root)
                sols.append(_full_solution(spec, FullMetric(x, x, 1.0, 0.0), label, root))
        elif a > HALF:
            y = 0.5 * math.sqrt(float((2 * a - 1) / (2 - a)))
            sols.append(_full_solution(spec, FullMetric(1.0, 1.0, 1.0, y), "g3",
                                       partner="g4"))
            sols.append(_full_solution(spec, FullMetric(1.0, 1.0, 1.0, -y), "g4",
                                       partner="g3"))
        else:  # a = 1/2: double root of the diagonal quadratic
            root = exact_roots(spec)[0]
            x = float(root)
            sols.append(_full_solution(spec, FullMetric(x, x, 1.0, 0.0), "g1_plus", root))
    sols.append(_full_solution(spec, FullMetric(0.5, 1.5, 1.0, 0.5), "g5", partner="g6"))
    sols.append(_full_solution(spec, FullMetric(1.5, 0.5, 1.0, 0.5), "g6", partner="g5"))
    return sols


def _full_solution(
    spec: SpaceSpec,
    metric: FullMetric,
    label: str,
    exact_x: Surd | None = None,
    partner: str | None = None,
) -> EinsteinSolution:
    rc = ricci_full(spec, metric)
    return EinsteinSolution(
        metric=metric,
        rho=float(rc.r1),
        scal_n=scal_n_full(spec, metric),
        residual=einstein_residual_full(spec, metric),
        label=label,
        exact_x=exact_x,
        isometric_to=partner,
    )


def scal_n_full(spec: SpaceSpec, metric: FullMetric) -> float:
    """Normalized scalar curvature of an Einstein 4-parameter metric.

    scal_N = dim(M) rho det^(1/dim) with det = (x1 x2 - x4^2)^n x3^d; for
    Einstein metrics at x3 = 1 this is (2n+d)(4 x1 x2 - 1)/(8 (x1 x2 - x4^2)^alpha).
    """
    if einstein_residual_full(spec, metric) > 1e-8:
        raise NonEinsteinInputError(
            f"{spec.id}: scal_N closed form evaluated off the Einstein locus"
        )
    rc = ricci_full(spec, metric)
    det = float(metric.disc) ** spec.n * float(metric.x3) ** spec.d
    return spec.dim_m * float(rc.r1) * det ** (1.0 / spec.dim_m)


def scal_n_g5(spec: SpaceSpec) -> float:
    """(2n+d) 2^(alpha - 2), the normalized scalar curvature of g5 and g6."""
    return spec.dim_m * 2.0 ** (float(spec.alpha) - 2.0)


def scal_n_g3(spec: SpaceSpec, a: Fraction | None = None) -> float:
    """3(2n+d)/8 * (4(2-a)/(3(3-2a)))^alpha, for symmetric spaces with a > 1/2."""
    a = float(spec.a if a is None else a)
    base = 4 * (2 - a) / (3 * (3 - 2 * a))
    return 3 * spec.dim_m / 8 * base ** float(spec.alpha)


# ---------------------------------------------------------------------------
# family closed forms (Sc-table rows with a free parameter)
# ---------------------------------------------------------------------------

SCAL_FAMILIES = ("SU(m)/SO(m)", "SO(2m)/SO(m)^2")


def family_scal_formulas(family: str, m: int) -> dict:
    """Closed-form scal_N(g1), scal_N(g2) for the two parametric Sc rows.

    These are the general expressions specialized at kappa = 1/2 with the
    family's a(m) substituted; the exponent base is 1/x+- (the published
    variants with base (m-2)/(1 +- sqrt(m+2)) resp. leading factor
    3m-1+2 sqrt(2m) do not agree with the general formula and are undefined
    for the minus sign).
    """
    if family == "SU(m)/SO(m)":
        if m < 3:
            raise ValueError("SU(m)/SO(m) scal formulas need m >= 3")
        s = math.sqrt(m + 2.0)
        lead = 3 * m * m + m - 4  # (3m+4)(m-1) = 2(2n+d)
        expo = 4 * (m + 1) / (3 * m + 4.0)  # 2 alpha
        g1 = lead * (3 * m + 2 + 4 * s) / (16 * (m - 2)) * ((m - 2) / (m + s)) ** expo
        g2 = lead * (3 * m + 2 - 4 * s) / (16 * (m - 2)) * ((m - 2) / (m - s)) ** expo
        return {"g1": g1, "g2": g2}
    if family == "SO(2m)/SO(m)^2":
        if m < 4:
            raise ValueError("SO(2m)/SO(m)^2 scal formulas need m >= 4")
        s = math.sqrt(2.0 * m)
        lead = m * (3 * m - 1)  # = 2n + d
        expo = (4 * m - 2) / (3 * m - 1.0)  # 2 alpha
        g1 = (lead * (3 * m - 2 + 2 * s) / (8 * (m - 2))
              * ((2 * m - 2 + s) / (2 * (m - 2))) ** -expo)
        g2 = (lead * (3 * m - 2 - 2 * s) / (8 * (m - 2))
              * ((2 * m - 2 - s) / (2 * (m - 2))) ** -expo)
        return {"g1": g1, "g2": g2}
    raise ValueError(f"no closed scal formulas for family {family!r}")


def nonhomothety_check(spec: SpaceSpec) -> bool:
    """Strict scal_N orderings separating the Einstein metrics up to homothety.

    a < 1/2: scal_N(g1) < scal_N(g2) < scal_N(g5);
    a > 1/2: scal_N(g3) < scal_N(g5).
    """
    _require_symmetric(spec)
    a = spec.a
    if a == HALF:
        raise UnsupportedSpaceError(f"{spec.id}: orderings need a != 1/2")
    by_label = {s.label: s for s in classify_symmetric(spec)}
    if a < HALF:
        ordered = (
            by_label["g1_plus"].scal_n < by_label["g2_minus"].scal_n < by_label["g5"].scal_n
        )
    else:
        ordered = by_label["g3"].scal_n < by_label["g5"].scal_n
    if not ordered:
        raise AssertionError(f"{spec.id}: scal_N ordering regression")
    return True


# ---------------------------------------------------------------------------
# Sc-table reproduction
# ---------------------------------------------------------------------------


def sc_table_rows(catalog, which: str, m: int | None = None) -> list[tuple]:
    """Rows (space_id, scal values...) of the normalized-scalar-curvature tables.

    'sc1' lists symmetric rows with a < 1/2 as (id, g1, g2, g5) - including
    the provisional G2/SU(2)xSU(2) row, whose g1/g2 columns are reproduction
    data evaluated at the recorded provisional ratio.  'sc2' lists a > 1/2
    rows as (id, g3, g5).  Family rows are included only when m is given.
    """
    if which not in ("sc1", "sc2"):
        raise ValueError("table selector must be 'sc1' or 'sc2'")
    rows = []
    for row in catalog.rows:
        if row.is_family:
            if m is None or "symmetric" not in row.flag_tokens:
                continue
            try:
                spec = catalog.spec(row.id, m=m)
            except Exception:
                continue
        else:
            spec = row.spec
        if not spec.flags.symmetric:
            continue
        a_eff = spec.provisional_a if spec.provisional_a is not None else spec.a
        if which == "sc1" and a_eff < HALF:
            g5 = scal_n_g5(spec)
            if spec.provisional_a is not None:
                g1, g2 = _provisional_diagonal_scal(spec)
            else:
                sols = {s.label: s for s in classify_symmetric(spec)}
                g1, g2 = sols["g1_plus"].scal_n, sols["g2_minus"].scal_n
            rows.append((spec.id, g1, g2, g5))
        elif which == "sc2" and a_eff > HALF:
            rows.append((spec.id, scal_n_g3(spec), scal_n_g5(spec)))
    return rows


def _provisional_diagonal_scal(spec: SpaceSpec) -> tuple[float, float]:
    """g1/g2 scal_N columns for the provisional row, from the effective a."""
    a = float(spec.provisional_a)
    root = math.sqrt(1 - a * (3 - 2 * a))
    out = []
    for sgn in (1.0, -1.0):
        x = (1 + sgn * root) / (2 * a)
        out.append(spec.dim_m * (4 * x - 1) / (8 * x ** (2 * float(spec.alpha))))
    return out[0], out[1]
