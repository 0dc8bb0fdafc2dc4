"""Closed-form curvature of diagonal metrics on M = H x H / Delta K.

A diagonal metric (x1, x2, x3) weighs the blocks p1 = (q, 0), p2 = (0, q) and
p3 = {(Z, -Z)} of the reductive complement against the bi-invariant metric
-Kil_g.  All formulas here accept exact rationals or floats alike (only +,-,*,/
and integer powers are used); the exact path backs the identity tests, the
float path the sweeps.

Ricci data is reported as Ricci-*operator* block eigenvalues r_k, so a metric
is Einstein precisely when all r_k coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .catalog import SpaceSpec
from .errors import UnsupportedSpaceError


@dataclass(frozen=True)
class DiagonalMetric:
    x1: object
    x2: object
    x3: object

    def __post_init__(self):
        if not (self.x1 > 0 and self.x2 > 0 and self.x3 > 0):
            raise ValueError(f"diagonal metric needs positive coefficients, got {self}")

    def scaled(self, c) -> "DiagonalMetric":
        return DiagonalMetric(c * self.x1, c * self.x2, c * self.x3)


@dataclass(frozen=True)
class NormalMetric:
    """Bi-invariant datum z1 (-Kil_(h,0)) + z2 (-Kil_(0,h))."""

    z1: object
    z2: object

    def __post_init__(self):
        if not (self.z1 > 0 and self.z2 > 0):
            raise ValueError(f"normal metric needs positive coefficients, got {self}")


@dataclass(frozen=True)
class RicciEigenvalues:
    r1: object
    r2: object
    r3: tuple  # one entry per isotropy block, center first

    def as_list(self):
        return [self.r1, self.r2, *self.r3]


@dataclass(frozen=True)
class StructuralConstants:
    """Fully symmetric bracket-square sums [ijk] over labeled blocks."""

    labels: tuple[str, ...]
    dims: tuple[int, ...]
    values: dict  # canonical (sorted index triple) -> value

    def get(self, i: int, j: int, k: int):
        return self.values.get(tuple(sorted((i, j, k))), 0)

    def with_entry(self, i: int, j: int, k: int, value) -> "StructuralConstants":
        vals = dict(self.values)
        vals[tuple(sorted((i, j, k)))] = value
        return StructuralConstants(self.labels, self.dims, vals)


def ricci_diagonal(spec: SpaceSpec, g: DiagonalMetric) -> RicciEigenvalues:
    """Ricci operator eigenvalues of (x1, x2, x3); p3 splits per ideal."""
    x1, x2, x3 = g.x1, g.x2, g.x3
    kappa = spec.kappa
    r1 = (1 - x3 / (2 * x1)) * kappa / (2 * x1) + 1 / (4 * x1)
    r2 = (1 - x3 / (2 * x2)) * kappa / (2 * x2) + 1 / (4 * x2)
    mix = (1 / (x1 * x1) + 1 / (x2 * x2)) * x3 / 8
    r3 = tuple(a_l * (1 / (2 * x3) - mix) + mix for a_l, _ in spec.killing_ratios)
    return RicciEigenvalues(r1, r2, r3)


def scal_diagonal(spec: SpaceSpec, g: DiagonalMetric):
    """Scalar curvature = block-dimension weighted trace of the Ricci operator."""
    r = ricci_diagonal(spec, g)
    out = spec.n * (r.r1 + r.r2)
    for (a_l, d_l), r3l in zip(spec.killing_ratios, r.r3):
        out = out + d_l * r3l
    return out


def scal_n_diagonal(spec: SpaceSpec, g: DiagonalMetric) -> float:
    """Normalized scalar curvature scal * det^(1/dim), a homothety invariant."""
    n, d, dim = spec.n, spec.d, spec.dim_m
    det = float(g.x1) ** n * float(g.x2) ** n * float(g.x3) ** d
    return float(scal_diagonal(spec, g)) * det ** (1.0 / dim)


def einstein_residual(spec: SpaceSpec, g: DiagonalMetric) -> float:
    """Dimensionless Einstein defect max_k |r_k - rbar| / rbar.

    rbar is the block-dimension weighted mean of the Ricci eigenvalues, so the
    residual is zero exactly at Einstein metrics and invariant under scaling.
    """
    r = ricci_diagonal(spec, g)
    weights = [spec.n, spec.n] + [d_l for _, d_l in spec.killing_ratios]
    values = [float(v) for v in r.as_list()]
    rbar = sum(w * v for w, v in zip(weights, values)) / sum(weights)
    return max(abs(v - rbar) for v in values) / abs(rbar)


# ---------------------------------------------------------------------------
# structural constants
# ---------------------------------------------------------------------------

P_LABELS = ("p1", "p2", "p3")


def structural_constants_closed(spec: SpaceSpec) -> StructuralConstants:
    """[111] = [222] = (1 - 2 kappa) n, [113] = [223] = kappa n / 2, rest 0.

    Valid whenever the Casimir of the isotropy representation is scalar and
    the Killing ratio is uniform (abelian K counts as uniform with a = 0).
    """
    if not spec.flags.uniform_a:
        raise UnsupportedSpaceError(
            f"{spec.id}: closed-form structural constants need Kil_k = a Kil_h|_k"
        )
    n, kappa = spec.n, spec.kappa
    sc = StructuralConstants(P_LABELS, (spec.n, spec.n, spec.d), {})
    sc = sc.with_entry(0, 0, 0, (1 - 2 * kappa) * n)
    sc = sc.with_entry(1, 1, 1, (1 - 2 * kappa) * n)
    sc = sc.with_entry(0, 0, 2, kappa * n / 2)
    sc = sc.with_entry(1, 1, 2, kappa * n / 2)
    return sc


def ricci_from_structural(
    spec: SpaceSpec, g: DiagonalMetric, sc: StructuralConstants
) -> RicciEigenvalues:
    """Ricci eigenvalues from [ijk] data: r_k = 1/(2x_k) - correction terms.

    Blocks are measured against -Kil_g, i.e. b_k = 1 for all of them.
    """
    if sc.dims != (spec.n, spec.n, spec.d):
        raise ValueError(
            f"structural constants have block dims {sc.dims}, expected "
            f"{(spec.n, spec.n, spec.d)}"
        )
    x = (g.x1, g.x2, g.x3)
    out = []
    for k in range(3):
        acc = 1 / (2 * x[k])
        corr = 0
        for i in range(3):
            for j in range(3):
                v = sc.get(i, j, k)
                if v:
                    corr = corr + v * (
                        x[i] / (x[j] * x[k]) + x[j] / (x[i] * x[k]) - x[k] / (x[i] * x[j])
                    )
        out.append(acc - corr / (4 * sc.dims[k]))
    r3 = tuple(out[2] for _ in spec.killing_ratios)
    return RicciEigenvalues(out[0], out[1], r3)


# ---------------------------------------------------------------------------
# normal metrics
# ---------------------------------------------------------------------------


def normal_to_diagonal(nm: NormalMetric, scale=(1, 1, 1)) -> DiagonalMetric:
    """(x1, x2, x3)_{g_b} = (z1 x1, z2 x2, 2 z1 z2 x3 / (z1 + z2)) w.r.t. -Kil_g."""
    z1, z2 = nm.z1, nm.z2
    x1, x2, x3 = scale
    return DiagonalMetric(z1 * x1, z2 * x2, 2 * z1 * z2 * x3 / (z1 + z2))


def scalar_normal(spec: SpaceSpec, nm: NormalMetric):
    """Scalar curvature of the normal metric (z1, z2)."""
    z1, z2 = nm.z1, nm.z2
    n, d, s = spec.n, spec.d, spec.s_sum
    num = (d + n) * z1 * z1 + 2 * (2 * d + n - s) * z1 * z2 + (d + n) * z2 * z2
    return num / (4 * z1 * z2 * (z1 + z2))


def scal_n_normal(spec: SpaceSpec, nm: NormalMetric) -> float:
    """Normalized scalar curvature of a normal metric."""
    return scal_n_diagonal(spec, normal_to_diagonal(nm))


def normal_profile(spec: SpaceSpec, z: float) -> dict:
    """Section z -> (z, 1/z) of the normal family on the unit-volume slice.

    Returns f(z) = scal_N and the (constant) second derivative value at the
    critical point z = 1, which is positive for every space.
    """
    if z <= 0:
        raise ValueError("z must be positive")
    n, d = spec.n, spec.d
    s = float(spec.s_sum)
    z = float(z)
    num = (d + n) * z**4 + 2 * (2 * d + n - s) * z * z + (d + n)
    f = num / (4 * z * (z * z + 1)) * (2 * z / (z * z + 1)) ** (d / (2 * n + d))
    fpp1 = -(d + n) * (d - 2 * n - s) / (4 * n + 2 * d)
    return {"f": f, "fpp1": fpp1}


def normal_residual_grid_min(
    spec: SpaceSpec, z_lo: float = 0.1, z_hi: float = 10.0, count: int = 25
) -> float:
    """Minimum Einstein residual of induced diagonal metrics over a log grid."""
    ratio = math.log(z_hi / z_lo)
    grid = [z_lo * math.exp(ratio * i / (count - 1)) for i in range(count)]
    best = float("inf")
    for z1 in grid:
        for z2 in grid:
            g = normal_to_diagonal(NormalMetric(z1, z2))
            best = min(best, einstein_residual(spec, g))
    return best


# ---------------------------------------------------------------------------
# unit-volume surface grid (the data behind the scalar-curvature pictures)
# ---------------------------------------------------------------------------


def unit_volume_x3(spec: SpaceSpec, x1: float, x2: float) -> float:
    """x3 making x1^n x2^n x3^d = 1."""
    return float((float(x1) * float(x2)) ** (-spec.n / spec.d))


def surface_grid(
    spec: SpaceSpec, lo: float = 0.1, hi: float = 10.0, count: int = 40
):
    """Yield (x1, x2, scal_N) over a log-spaced grid on the unit-volume slice."""
    ratio = math.log(hi / lo)
    grid = [lo * math.exp(ratio * i / (count - 1)) for i in range(count)]
    for x1 in grid:
        for x2 in grid:
            g = DiagonalMetric(x1, x2, unit_volume_x3(spec, x1, x2))
            yield x1, x2, scal_n_diagonal(spec, g)
