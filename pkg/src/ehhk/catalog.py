"""Machine-readable catalog of homogeneous pairs H/K as pure numerics.

Each space is reduced to the integers (dim H, d = dim K, n = dim H/K), the
exact rational Killing ratios a_l of the isotropy ideals, and derived scalars
kappa (Casimir eigenvalue of the isotropy representation w.r.t. the Killing
metric) and rho (Einstein constant of the standard metric on H/K).  All table
values are exact rationals; floats appear only at presentation boundaries.

The packaged data file lists every table row; parametric families stay
symbolic until :func:`instantiate_family` evaluates them at concrete integer
parameters.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .errors import CatalogError, InvariantError, OutOfRangeError, UnsupportedSpaceError

HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# expression / guard grammar
# ---------------------------------------------------------------------------

_CMP_OPS = ("==", "!=", "<=", ">=", "<", ">")


def _tokenize(text: str) -> list[str]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(text[i:j])
            i = j
        elif ch.isalpha():
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(text[i:j])
            i = j
        elif text[i : i + 2] in _CMP_OPS:
            tokens.append(text[i : i + 2])
            i += 2
        elif ch in "+-*/^()<>":
            tokens.append(ch)
            i += 1
        else:
            raise CatalogError(f"unexpected character {ch!r} in expression {text!r}")
    return tokens


class _Parser:
    """Recursive-descent parser for rational expressions and boolean guards."""

    def __init__(self, text: str, env: dict[str, int]):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.env = env

    def _peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _next(self) -> str:
        tok = self._peek()
        if tok is None:
            raise CatalogError(f"unexpected end of expression {self.text!r}")
        self.pos += 1
        return tok

    def _expect(self, tok: str) -> None:
        got = self._next()
        if got != tok:
            raise CatalogError(f"expected {tok!r}, got {got!r} in {self.text!r}")

    # arithmetic: expr := term (+|- term)*; term := factor (*|/ factor)*;
    # factor := atom (^ factor)?; atom := int | name | (expr) | -atom
    def expr(self) -> Fraction:
        value = self.term()
        while self._peek() in ("+", "-"):
            if self._next() == "+":
                value = value + self.term()
            else:
                value = value - self.term()
        return value

    def term(self) -> Fraction:
        value = self.factor()
        while self._peek() in ("*", "/"):
            if self._next() == "*":
                value = value * self.factor()
            else:
                value = value / self.factor()
        return value

    def factor(self) -> Fraction:
        base = self.atom()
        if self._peek() == "^":
            self._next()
            power = self.factor()
            if power.denominator != 1:
                raise CatalogError(f"non-integer exponent in {self.text!r}")
            return base ** int(power)
        return base

    def atom(self) -> Fraction:
        tok = self._next()
        if tok == "-":
            return -self.atom()
        if tok == "(":
            value = self.expr()
            self._expect(")")
            return value
        if tok.isdigit():
            return Fraction(int(tok))
        if tok in self.env:
            return Fraction(self.env[tok])
        raise CatalogError(f"unknown name {tok!r} in {self.text!r}")

    # guards: or_expr := and_expr ('or' and_expr)*; and_expr := cmp ('and' cmp)*
    def bool_expr(self) -> bool:
        value = self.bool_and()
        while self._peek() == "or":
            self._next()
            rhs = self.bool_and()
            value = value or rhs
        return value

    def bool_and(self) -> bool:
        value = self.bool_cmp()
        while self._peek() == "and":
            self._next()
            rhs = self.bool_cmp()
            value = value and rhs
        return value

    def bool_cmp(self) -> bool:
        if self._peek() == "(":
            # Either a parenthesized boolean or an arithmetic atom; try boolean
            # first by scanning for a comparison before the matching paren ends.
            save = self.pos
            self._next()
            depth = 1
            has_cmp = False
            k = self.pos
            while k < len(self.tokens) and depth > 0:
                if self.tokens[k] == "(":
                    depth += 1
                elif self.tokens[k] == ")":
                    depth -= 1
                elif depth >= 1 and self.tokens[k] in _CMP_OPS:
                    has_cmp = True
                k += 1
            if has_cmp:
                value = self.bool_expr()
                self._expect(")")
                return value
            self.pos = save
        lhs = self.expr()
        op = self._next()
        rhs = self.expr()
        if op == "==":
            return lhs == rhs
        if op == "!=":
            return lhs != rhs
        if op == "<=":
            return lhs <= rhs
        if op == ">=":
            return lhs >= rhs
        if op == "<":
            return lhs < rhs
        if op == ">":
            return lhs > rhs
        raise CatalogError(f"expected comparison operator, got {op!r} in {self.text!r}")


def eval_expr(text: str, env: dict[str, int] | None = None) -> Fraction:
    parser = _Parser(text, env or {})
    value = parser.expr()
    if parser._peek() is not None:
        raise CatalogError(f"trailing tokens in expression {text!r}")
    return value


def eval_guard(text: str, env: dict[str, int]) -> bool:
    parser = _Parser(text, env)
    value = parser.bool_expr()
    if parser._peek() is not None:
        raise CatalogError(f"trailing tokens in guard {text!r}")
    return value


def resolve_cond2(spec_text: str, env: dict[str, int]) -> str | None:
    """Evaluate a cond2 column entry ('yes'/'no'/'eq', guarded list, or '-')."""
    if spec_text == "-":
        return None
    if spec_text in ("yes", "no", "eq"):
        return spec_text
    for clause in spec_text.split(";"):
        guard, _, outcome = clause.rpartition(":")
        outcome = outcome.strip()
        if outcome not in ("yes", "no", "eq"):
            raise CatalogError(f"bad cond2 outcome {outcome!r}")
        if guard.strip() == "" or eval_guard(guard, env):
            return outcome
    raise CatalogError(f"no cond2 clause matched in {spec_text!r}")


# ---------------------------------------------------------------------------
# space specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpaceFlags:
    symmetric: bool = False
    abelian_k: bool = False
    uniform_a: bool = True


@dataclass(frozen=True)
class SpaceSpec:
    """A homogeneous pair H/K reduced to numerics.

    killing_ratios lists (a_l, d_l) per isotropy block, center (a_0 = 0)
    first when present.  For uniform rows the ideals are merged into a single
    entry since nothing downstream needs the finer split.
    """

    id: str
    family: str | None
    family_params: tuple[int, ...]
    dim_h: int
    d: int
    n: int
    killing_ratios: tuple[tuple[Fraction, int], ...]
    kappa: Fraction
    rho: Fraction
    flags: SpaceFlags
    provisional_a: Fraction | None = None
    cond2_expected: str | None = None
    order: tuple[int, int] = (0, 0)

    # -- derived scalars -----------------------------------------------------
    @property
    def dim_m(self) -> int:
        """Dimension of M = H x H / Delta K."""
        return 2 * self.n + self.d

    @property
    def a(self) -> Fraction:
        """The uniform Killing ratio (0 for abelian K)."""
        if not self.flags.uniform_a:
            raise UnsupportedSpaceError(
                f"{self.id}: Killing ratios are not proportional; no single a"
            )
        return self.killing_ratios[0][0]

    @property
    def s_sum(self) -> Fraction:
        """S = sum of a_l * d_l over the isotropy blocks."""
        return sum((a * dl for a, dl in self.killing_ratios), Fraction(0))

    @property
    def alpha(self) -> Fraction:
        """Exponent (n + d)/(2n + d) of the normalized scalar curvature."""
        return Fraction(self.n + self.d, self.dim_m)

    def validate(self) -> None:
        if self.n <= 0:
            raise InvariantError(self.id, "n", f"n = {self.n} must be positive")
        if self.d <= 0:
            raise InvariantError(self.id, "d", f"d = {self.d} must be positive")
        if self.n + self.d != self.dim_h:
            raise InvariantError(
                self.id, "dim_h", f"n + d = {self.n + self.d} != dim_h = {self.dim_h}"
            )
        if sum(dl for _, dl in self.killing_ratios) != self.d:
            raise InvariantError(self.id, "killing_ratios", "block dims do not sum to d")
        for a_l, d_l in self.killing_ratios:
            if not (0 <= a_l < 1):
                raise InvariantError(self.id, "killing_ratios", f"a_l = {a_l} not in [0,1)")
            if d_l <= 0:
                raise InvariantError(self.id, "killing_ratios", f"d_l = {d_l} not positive")
        if not (0 < self.kappa <= HALF):
            raise InvariantError(self.id, "kappa", f"kappa = {self.kappa} not in (0, 1/2]")
        if (self.kappa == HALF) != self.flags.symmetric:
            raise InvariantError(
                self.id, "kappa", "kappa = 1/2 exactly for symmetric spaces and only for them"
            )
        if self.flags.uniform_a and self.kappa * self.n != (1 - self.a) * self.d:
            raise InvariantError(self.id, "kappa", "kappa*n != (1-a)*d on a uniform row")
        if self.flags.abelian_k and self.kappa * self.n != self.d:
            raise InvariantError(self.id, "kappa", "abelian row with kappa != d/n")
        if self.rho != (self.kappa + HALF) / 2:
            raise InvariantError(self.id, "rho", "rho != (kappa + 1/2)/2")


def make_space_spec(
    space_id: str,
    dim_h: int,
    d: int,
    n: int,
    killing_ratios: tuple[tuple[Fraction, int], ...],
    flags: SpaceFlags,
    family: str | None = None,
    family_params: tuple[int, ...] = (),
    provisional_a: Fraction | None = None,
    cond2_expected: str | None = None,
    order: tuple[int, int] = (0, 0),
) -> SpaceSpec:
    s_sum = sum((a * dl for a, dl in killing_ratios), Fraction(0))
    kappa = (d - s_sum) / n
    rho = (kappa + HALF) / 2
    spec = SpaceSpec(
        id=space_id,
        family=family,
        family_params=family_params,
        dim_h=dim_h,
        d=d,
        n=n,
        killing_ratios=killing_ratios,
        kappa=kappa,
        rho=rho,
        flags=flags,
        provisional_a=provisional_a,
        cond2_expected=cond2_expected,
        order=order,
    )
    spec.validate()
    return spec


# ---------------------------------------------------------------------------
# catalog rows and loading
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogRow:
    """One line of the catalog file; families stay symbolic."""

    id: str
    param_names: tuple[str, ...]
    param_ranges: tuple[tuple[str, int], ...]  # (name, minimum)
    dim_h_expr: str
    d_expr: str
    n_expr: str
    a_expr: str
    flag_tokens: tuple[str, ...]
    cond2_expr: str
    order: tuple[int, int]
    spec: SpaceSpec | None = None  # pre-evaluated for sporadic rows

    @property
    def is_family(self) -> bool:
        return bool(self.param_names)


def _parse_flags(token: str) -> tuple[SpaceFlags, Fraction | None, bool]:
    symmetric = abelian = nonuniform = False
    provisional = None
    if token != "-":
        for part in token.split(","):
            part = part.strip()
            if part == "symmetric":
                symmetric = True
            elif part == "abelian":
                abelian = True
            elif part == "nonuniform":
                nonuniform = True
            elif part.startswith("provisional="):
                provisional = eval_expr(part.split("=", 1)[1])
            else:
                raise CatalogError(f"unknown flag {part!r}")
    flags = SpaceFlags(symmetric=symmetric, abelian_k=abelian, uniform_a=not nonuniform)
    return flags, provisional, nonuniform


def _parse_ratios(text: str, d: int, env: dict[str, int]) -> tuple[tuple[Fraction, int], ...]:
    if ":" in text:
        pairs = []
        for item in text.split(";"):
            a_txt, d_txt = item.split(":")
            pairs.append((eval_expr(a_txt, env), int(eval_expr(d_txt, env))))
        return tuple(pairs)
    return ((eval_expr(text, env), d),)


def _row_to_spec(row: CatalogRow, params: dict[str, int]) -> SpaceSpec:
    env = dict(params)
    dim_h = int(eval_expr(row.dim_h_expr, env))
    d = int(eval_expr(row.d_expr, env))
    n = int(eval_expr(row.n_expr, env))
    flags, provisional, _ = _parse_flags(",".join(row.flag_tokens) if row.flag_tokens else "-")
    ratios = _parse_ratios(row.a_expr, d, env)
    cond2 = resolve_cond2(row.cond2_expr, env)
    space_id = row.id
    if params:
        space_id = f"{row.id}[{','.join(f'{k}={params[k]}' for k in row.param_names)}]"
    return make_space_spec(
        space_id,
        dim_h,
        d,
        n,
        ratios,
        flags,
        family=row.id if row.is_family else None,
        family_params=tuple(params[k] for k in row.param_names),
        provisional_a=provisional,
        cond2_expected=cond2,
        order=row.order,
    )


def _parse_params(token: str) -> tuple[tuple[str, ...], tuple[tuple[str, int], ...]]:
    if token == "-":
        return (), ()
    names, ranges = [], []
    for part in token.split(","):
        if ">=" not in part:
            raise CatalogError(f"param spec {part!r} lacks a range")
        name, minimum = part.split(">=")
        names.append(name.strip())
        ranges.append((name.strip(), int(minimum)))
    return tuple(names), tuple(ranges)


class Catalog:
    """All catalog rows, in file (= table) order, immutable after load."""

    def __init__(self, rows: list[CatalogRow]):
        self.rows = tuple(rows)
        self._by_id = {row.id: row for row in rows}

    def __len__(self) -> int:
        return len(self.rows)

    def row(self, row_id: str) -> CatalogRow:
        try:
            return self._by_id[row_id]
        except KeyError:
            raise KeyError(f"no catalog row with id {row_id!r}") from None

    def spec(self, space_id: str, **params: int) -> SpaceSpec:
        row = self.row(space_id)
        if row.is_family:
            return instantiate_family(row, **params)
        return row.spec

    def sporadic_specs(self, include_provisional: bool = False) -> list[SpaceSpec]:
        out = []
        for row in self.rows:
            if row.spec is None:
                continue
            if row.spec.provisional_a is not None and not include_provisional:
                continue
            out.append(row.spec)
        return out

    def family_rows(self) -> list[CatalogRow]:
        return [row for row in self.rows if row.is_family]

    def audit_specs(self, instances_per_param: int = 3) -> list[SpaceSpec]:
        """Sporadic rows plus each family at its smallest parameter values.

        Two-parameter families get the full grid of the smallest values per
        parameter, plus the exact-equality points when the family has any.
        """
        specs = list(self.sporadic_specs())
        for row in self.family_rows():
            grids = [
                [low + i for i in range(instances_per_param)] for _, low in row.param_ranges
            ]
            combos = [()]
            for axis in grids:
                combos = [prefix + (v,) for prefix in combos for v in axis]
            extra = []
            if row.id == "Sp(mk)/Sp(k)^m":
                extra = [(3, 8), (4, 3)]
            for combo in combos + extra:
                params = dict(zip(row.param_names, combo))
                specs.append(instantiate_family(row, **params))
        return specs


def default_catalog_path() -> Path:
    override = os.environ.get("EHHK_CATALOG")
    if override:
        return Path(override)
    return Path(str(resources.files("ehhk").joinpath("data/catalog.txt")))


def load_catalog(path: str | Path | None = None) -> Catalog:
    """Parse the catalog file; parse errors carry the line number."""
    path = Path(path) if path is not None else default_catalog_path()
    rows: list[CatalogRow] = []
    table_index = 0
    row_index = 0
    last_blank = True
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                last_blank = True
                continue
            if line.startswith("#"):
                continue
            if last_blank:
                table_index += 1
                row_index = 0
            last_blank = False
            row_index += 1
            cols = [c.strip() for c in line.split("|")]
            if len(cols) != 8:
                raise CatalogError(f"expected 8 columns, found {len(cols)}", lineno)
            try:
                names, ranges = _parse_params(cols[1])
                flag_tokens = tuple(t.strip() for t in cols[6].split(",")) if cols[6] != "-" else ()
                row = CatalogRow(
                    id=cols[0],
                    param_names=names,
                    param_ranges=ranges,
                    dim_h_expr=cols[2],
                    d_expr=cols[3],
                    n_expr=cols[4],
                    a_expr=cols[5],
                    flag_tokens=flag_tokens,
                    cond2_expr=cols[7],
                    order=(table_index, row_index),
                )
                if not row.is_family:
                    row = replace(row, spec=_row_to_spec(row, {}))
            except CatalogError as exc:
                if exc.lineno is None:
                    raise CatalogError(str(exc), lineno) from exc
                raise
            rows.append(row)
    return Catalog(rows)


def instantiate_family(row: CatalogRow, **params: int) -> SpaceSpec:
    """Evaluate a family row at integer parameters, re-checking invariants."""
    if not row.is_family:
        if params:
            raise OutOfRangeError(f"{row.id} is not parametric")
        return row.spec
    missing = [name for name in row.param_names if name not in params]
    if missing:
        raise OutOfRangeError(f"{row.id}: missing parameter(s) {missing}")
    unknown = [name for name in params if name not in row.param_names]
    if unknown:
        raise OutOfRangeError(f"{row.id}: unknown parameter(s) {unknown}")
    for name, low in row.param_ranges:
        value = params[name]
        if not isinstance(value, int) or value < low:
            raise OutOfRangeError(f"{row.id}: requires {name} >= {low}, got {value}")
    return _row_to_spec(row, dict(params))


# ---------------------------------------------------------------------------
# derived quantities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExistenceResult:
    strict: bool
    equality: bool

    @property
    def outcome(self) -> str:
        return "yes" if self.strict else ("eq" if self.equality else "no")


def cond2_discriminant(spec: SpaceSpec) -> Fraction:
    """(2 kappa + 1)^2 - 8 a (1 - a + kappa), exactly."""
    if not spec.flags.uniform_a:
        raise UnsupportedSpaceError(f"{spec.id}: existence condition needs a uniform ratio")
    a, kappa = spec.a, spec.kappa
    return (2 * kappa + 1) ** 2 - 8 * a * (1 - a + kappa)


def existence_condition(spec: SpaceSpec) -> ExistenceResult:
    """Exact two-solution test; abelian rows are trivially strict (a = 0)."""
    disc = cond2_discriminant(spec)
    return ExistenceResult(strict=disc > 0, equality=disc == 0)


def quadratic_form_q(spec: SpaceSpec) -> tuple[int, int, int]:
    """Coefficients (A, B, C) of q(a) = A a^2 + B a + C, the existence
    condition cleared of kappa via kappa = (1-a) d / n and scaled by n^2."""
    n, d = spec.n, spec.d
    A = 4 * (2 * n * n + 2 * n * d + d * d)
    B = -4 * (2 * n * n + 3 * n * d + 2 * d * d)
    C = (n + 2 * d) ** 2
    return A, B, C


def eval_quadratic_form(spec: SpaceSpec, a: Fraction) -> Fraction:
    A, B, C = quadratic_form_q(spec)
    return A * a * a + B * a + C
