"""Structure constants of the left-symmetric families on the Witt and
Virasoro algebras, formal elements, and the bilinear product and bracket.

Families:
  * VAlphaTheta(alpha, theta)    -- graded, f(a,b) = (alpha+b+alpha*theta*a)(1+theta*b)/(1+theta*(a+b))
  * VGammaLambda(gamma, lambda)  -- graded with one exceptional line lambda+a+b = 0
  * WAlphaMuZeta(alpha, mu, zeta)-- f(a,b) = alpha+b plus constant shift term mu on L_{a+b+zeta}
  * VirTheta(theta)              -- V_{0,theta} extended by a central K with an exact 2-cocycle
  * CustomTable                  -- user-supplied finite window tables

Case splits (the exceptional line, the Kronecker delta in the cocycle) are
decided by exact integer-vector equality, never by scalar comparison.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import groups
from .groups import GroupElement
from .report import Counterexample, Report, make_report
from .scalars import ParseError, Scalar, Symbols, parse_scalar, scalar_sum


class SpecError(Exception):
    """Invalid structure description or misuse of a structure's operations."""


class TableDomainError(SpecError):
    """A custom table was consulted outside its finite domain."""


# ---------------------------------------------------------------------------
# Basis symbols and formal elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Witt:
    a: GroupElement

    def render(self) -> str:
        return f"L({','.join(str(x) for x in self.a)})"

    def sort_key(self) -> tuple:
        return (0, self.a, 0)


@dataclass(frozen=True)
class Central:
    def render(self) -> str:
        return "K"

    def sort_key(self) -> tuple:
        return (1, (), 0)


@dataclass(frozen=True)
class ModuleVec:
    a: GroupElement

    def render(self) -> str:
        return f"v({','.join(str(x) for x in self.a)})"

    def sort_key(self) -> tuple:
        return (2, self.a, 0)


@dataclass(frozen=True)
class Aff:
    a: GroupElement
    i: int

    def render(self) -> str:
        return f"x({','.join(str(x) for x in self.a)};{self.i})"

    def sort_key(self) -> tuple:
        return (3, self.a, self.i)


class Element:
    """Finite formal linear combination of basis symbols with Scalar
    coefficients; zero coefficients are never stored."""

    __slots__ = ("symbols", "coeffs")

    def __init__(self, symbols: Symbols, coeffs: Optional[dict] = None):
        self.symbols = symbols
        self.coeffs = coeffs or {}

    @classmethod
    def basis(cls, symbols: Symbols, key) -> "Element":
        return cls(symbols, {key: symbols.one()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Element)
            and self.symbols == other.symbols
            and self.coeffs == other.coeffs
        )

    def __add__(self, other: "Element") -> "Element":
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            s = out.get(key)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return Element(self.symbols, out)

    def __neg__(self) -> "Element":
        return Element(self.symbols, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c: Scalar) -> "Element":
        if c.is_zero():
            return Element(self.symbols)
        return Element(self.symbols, {k: v * c for k, v in self.coeffs.items()})

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for key in sorted(self.coeffs, key=lambda k: k.sort_key()):
            parts.append(f"({self.coeffs[key].render()})*{key.render()}")
        return " + ".join(parts)

    def render_eval(self, assignment: Mapping) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for key in sorted(self.coeffs, key=lambda k: k.sort_key()):
            parts.append(f"({self.coeffs[key].evaluate(assignment)})*{key.render()}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Element({self.render()})"


def element_sum(symbols: Symbols, parts: Iterable[Tuple[object, Scalar]]) -> Element:
    """Combine (basis key, scalar) contributions, summing coefficients per key
    over one common denominator so cancellations are detected cheaply."""
    buckets: dict = {}
    for key, c in parts:
        buckets.setdefault(key, []).append(c)
    out = {}
    for key, cs in buckets.items():
        total = cs[0] if len(cs) == 1 else scalar_sum(symbols, cs)
        if not total.is_zero():
            out[key] = total
    return Element(symbols, out)


# ---------------------------------------------------------------------------
# Structure specifications
# ---------------------------------------------------------------------------


class StructureSpec:
    """Base of all family descriptions.  Instances are immutable; the
    structure-constant accessors are memoized per instance."""

    kind: str = "?"

    def __init__(self, symbols: Symbols):
        self.symbols = symbols
        self._f_cache: Dict[tuple, Scalar] = {}
        self._g_cache: Dict[tuple, Scalar] = {}

    @property
    def rank(self) -> int:
        return self.symbols.rank

    # family capabilities
    is_graded: bool = True  # no shift term g
    has_central: bool = False
    zeta: Optional[GroupElement] = None

    def f_of(self, a: GroupElement, b: GroupElement) -> Scalar:
        key = (a, b)
        val = self._f_cache.get(key)
        if val is None:
            val = self._f(a, b)
            self._f_cache[key] = val
        return val

    def g_of(self, a: GroupElement, b: GroupElement) -> Scalar:
        return self.symbols.zero()

    def phi_of(self, a: GroupElement, b: GroupElement) -> Scalar:
        return self.symbols.zero()

    def defined_at(self, a: GroupElement, b: GroupElement) -> bool:
        return True

    def _f(self, a: GroupElement, b: GroupElement) -> Scalar:
        raise NotImplementedError

    def validate(self) -> Report:
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError

    def describe(self) -> str:
        p = ", ".join(f"{k}={v}" for k, v in self.params().items())
        return f"{self.kind}({p})"

    def _embed(self, a: GroupElement) -> Scalar:
        return groups.embed(self.symbols, a)

    def _genericity(self, named: Sequence[Tuple[str, Scalar]]) -> List[str]:
        notes = []
        for name, value in named:
            if any(not self.symbols.is_grading(i) for i in value.num.used_indices() | value.den.used_indices()):
                notes.append(f"{name} treated as a generic parameter")
        return notes


def _validity_report(spec: StructureSpec, failures: List[Tuple[str, str, str]], assumptions: List[str], cases: int) -> Report:
    ces = [Counterexample(inputs=(), lhs=f"{name}: {lhs}", rhs=rhs) for (name, lhs, rhs) in failures]
    rep = make_report(
        identity="spec-validity",
        rank=spec.rank,
        radius=0,
        cases_checked=cases,
        skipped=0,
        counterexamples=[],
        assumptions=assumptions,
    )
    rep.counterexamples = ces
    rep.passed = not ces
    return rep


class VAlphaTheta(StructureSpec):
    """Graded family with parameters alpha, theta (theta = 0 or 1/theta not in
    the grading lattice)."""

    kind = "V_alpha_theta"
    is_graded = True

    def __init__(self, symbols: Symbols, alpha: Scalar, theta: Scalar):
        super().__init__(symbols)
        self.alpha = alpha
        self.theta = theta

    def _f(self, a: GroupElement, b: GroupElement) -> Scalar:
        A, B = self._embed(a), self._embed(b)
        al, th = self.alpha, self.theta
        num = (al + B + al * th * A) * (1 + th * B)
        den = 1 + th * (A + B)
        return num / den

    def validate(self) -> Report:
        failures = []
        if not self.theta.is_zero():
            inv_theta = self.theta.inv()
            if groups.is_in_group(inv_theta) is not None:
                failures.append(
                    ("theta constraint", "1/theta", f"lattice point {groups.is_in_group(inv_theta)}")
                )
        assumptions = self._genericity([("alpha", self.alpha), ("theta", self.theta)])
        if not self.theta.is_zero() and not failures and self._genericity([("theta", self.theta)]):
            assumptions.append("theta generic implies 1/theta is not a lattice point")
        return _validity_report(self, failures, assumptions, cases=1)

    def params(self) -> dict:
        return {"alpha": self.alpha.render(), "theta": self.theta.render()}


class VGammaLambda(StructureSpec):
    """Graded family with parameter gamma and lattice point lambda; the line
    lambda + a + b = 0 carries the exceptional entries."""

    kind = "V_gamma_lambda"
    is_graded = True

    def __init__(self, symbols: Symbols, gamma: Scalar, lam: GroupElement):
        super().__init__(symbols)
        if len(lam) != symbols.rank:
            raise SpecError("lambda has wrong rank")
        self.gamma = gamma
        self.lam = tuple(lam)

    def _f(self, a: GroupElement, b: GroupElement) -> Scalar:
        L = self._embed(self.lam)
        B = self._embed(b)
        if not groups.is_zero(groups.add(self.lam, groups.add(a, b))):
            return L + B
        return (L + B) * (self.gamma - L - B) / (self.gamma - L)

    def validate(self) -> Report:
        failures = []
        if self.gamma == self._embed(self.lam):
            failures.append(("gamma-lambda constraint", "gamma", f"equals lattice value of lambda {list(self.lam)}"))
        assumptions = self._genericity([("gamma", self.gamma)])
        return _validity_report(self, failures, assumptions, cases=1)

    def params(self) -> dict:
        return {"gamma": self.gamma.render(), "lambda": list(self.lam)}


class WAlphaMuZeta(StructureSpec):
    """The Novikov family: f(a,b) = alpha + b with constant symmetric shift
    term g = mu on L_{a+b+zeta}, zeta a fixed nonzero lattice vector."""

    kind = "W_alpha_mu_zeta"

    def __init__(self, symbols: Symbols, alpha: Scalar, mu: Scalar, zeta: GroupElement):
        super().__init__(symbols)
        if len(zeta) != symbols.rank:
            raise SpecError("zeta has wrong rank")
        self.alpha = alpha
        self.mu = mu
        self.zeta = tuple(zeta)

    @property
    def is_graded(self) -> bool:  # type: ignore[override]
        return self.mu.is_zero()

    def _f(self, a: GroupElement, b: GroupElement) -> Scalar:
        return self.alpha + self._embed(b)

    def g_of(self, a: GroupElement, b: GroupElement) -> Scalar:
        return self.mu

    def validate(self) -> Report:
        failures = []
        if groups.is_zero(self.zeta):
            failures.append(("zeta constraint", "zeta", "is the zero vector"))
        assumptions = self._genericity([("alpha", self.alpha), ("mu", self.mu)])
        return _validity_report(self, failures, assumptions, cases=1)

    def params(self) -> dict:
        return {"alpha": self.alpha.render(), "mu": self.mu.render(), "zeta": list(self.zeta)}


class VirTheta(StructureSpec):
    """V_{0,theta} extended by a central element K: the product carries the
    exact cocycle (1/24)(b^3 - b - (theta - 1/theta) b^2) on the line a+b = 0,
    and K annihilates everything."""

    kind = "Vir_theta"
    is_graded = True
    has_central = True

    def __init__(self, symbols: Symbols, theta: Scalar):
        super().__init__(symbols)
        self.theta = theta
        self._phi_cache: Dict[tuple, Scalar] = {}

    def _f(self, a: GroupElement, b: GroupElement) -> Scalar:
        A, B = self._embed(a), self._embed(b)
        th = self.theta
        return B * (1 + th * B) / (1 + th * (A + B))

    def phi_of(self, a: GroupElement, b: GroupElement) -> Scalar:
        if not groups.is_zero(groups.add(a, b)):
            return self.symbols.zero()
        key = (a, b)
        val = self._phi_cache.get(key)
        if val is None:
            B = self._embed(b)
            th = self.theta
            val = (B**3 - B - (th - th.inv()) * B**2) * Fraction(1, 24)
            self._phi_cache[key] = val
        return val

    def validate(self) -> Report:
        failures = []
        if self.theta.is_zero():
            failures.append(("theta constraint", "theta", "is zero"))
        else:
            inv_theta = self.theta.inv()
            if groups.is_in_group(inv_theta) is not None:
                failures.append(
                    ("theta constraint", "1/theta", f"lattice point {groups.is_in_group(inv_theta)}")
                )
        assumptions = self._genericity([("theta", self.theta)])
        if assumptions and not failures:
            assumptions.append("theta generic implies 1/theta is not a lattice point")
        return _validity_report(self, failures, assumptions, cases=2)

    def params(self) -> dict:
        return {"theta": self.theta.render()}


class CustomTable(StructureSpec):
    """Finite window table of structure constants, optionally with a shift
    component g and its vector zeta.  Checks against a custom table clip to
    the table's domain; consumers count the skipped cases."""

    kind = "custom"

    def __init__(
        self,
        symbols: Symbols,
        f: Mapping[Tuple[GroupElement, GroupElement], Scalar],
        g: Optional[Mapping[Tuple[GroupElement, GroupElement], Scalar]] = None,
        zeta: Optional[GroupElement] = None,
    ):
        super().__init__(symbols)
        self.f_table = dict(f)
        self.g_table = dict(g) if g is not None else None
        self.zeta = tuple(zeta) if zeta is not None else None
        for (a, b) in self.f_table:
            if len(a) != symbols.rank or len(b) != symbols.rank:
                raise SpecError(f"table key {(a, b)} has wrong rank")
        if self.g_table is not None and self.zeta is None:
            raise SpecError("a table with a g component needs zeta")

    @property
    def is_graded(self) -> bool:  # type: ignore[override]
        return self.g_table is None or all(v.is_zero() for v in self.g_table.values())

    def defined_at(self, a: GroupElement, b: GroupElement) -> bool:
        if (a, b) not in self.f_table:
            return False
        if self.g_table is not None and (a, b) not in self.g_table:
            return False
        return True

    def _f(self, a: GroupElement, b: GroupElement) -> Scalar:
        try:
            return self.f_table[(a, b)]
        except KeyError:
            raise TableDomainError(f"f undefined at {(a, b)}") from None

    def g_of(self, a: GroupElement, b: GroupElement) -> Scalar:
        if self.g_table is None:
            return self.symbols.zero()
        try:
            return self.g_table[(a, b)]
        except KeyError:
            raise TableDomainError(f"g undefined at {(a, b)}") from None

    def covers(self, radius: int) -> bool:
        win = groups.window(self.rank, radius)
        return all(self.defined_at(a, b) for a in win for b in win)

    def perturbed(self, a: GroupElement, b: GroupElement, delta: Scalar) -> "CustomTable":
        """Copy of the table with f(a,b) shifted by delta."""
        f = dict(self.f_table)
        f[(a, b)] = f[(a, b)] + delta
        return CustomTable(self.symbols, f, self.g_table, self.zeta)

    def validate(self) -> Report:
        failures = []
        if self.g_table is not None:
            if self.zeta is None or groups.is_zero(self.zeta):
                failures.append(("zeta constraint", "zeta", "missing or zero for a table with g"))
        if not self.f_table:
            failures.append(("table", "f", "is empty"))
        return _validity_report(self, failures, [], cases=2)

    def params(self) -> dict:
        out = {"entries": len(self.f_table)}
        if self.zeta is not None:
            out["zeta"] = list(self.zeta)
        return out


def validate_spec(spec: StructureSpec) -> Report:
    return spec.validate()


# ---------------------------------------------------------------------------
# Bilinear product and bracket
# ---------------------------------------------------------------------------


def _product_contribs(spec: StructureSpec, x: Element, y: Element, sign: int) -> list:
    contribs = []
    for kx, cx in x.coeffs.items():
        if isinstance(kx, Central):
            if not spec.has_central:
                raise SpecError(f"central element not supported by {spec.kind}")
            continue  # K annihilates everything
        if not isinstance(kx, Witt):
            raise SpecError(f"cannot multiply {type(kx).__name__} elements")
        for ky, cy in y.coeffs.items():
            if isinstance(ky, Central):
                if not spec.has_central:
                    raise SpecError(f"central element not supported by {spec.kind}")
                continue
            if not isinstance(ky, Witt):
                raise SpecError(f"cannot multiply {type(ky).__name__} elements")
            a, b = kx.a, ky.a
            c = cx * cy if sign > 0 else -(cx * cy)
            fv = spec.f_of(a, b)
            if not fv.is_zero():
                contribs.append((Witt(groups.add(a, b)), fv * c))
            if spec.zeta is not None:
                gv = spec.g_of(a, b)
                if not gv.is_zero():
                    contribs.append((Witt(groups.add(groups.add(a, b), spec.zeta)), gv * c))
            if spec.has_central:
                pv = spec.phi_of(a, b)
                if not pv.is_zero():
                    contribs.append((Central(), pv * c))
    return contribs


def multiply(spec: StructureSpec, x: Element, y: Element) -> Element:
    """Bilinear extension of the basis products L_a . L_b."""
    return element_sum(spec.symbols, _product_contribs(spec, x, y, +1))


def bracket(spec: StructureSpec, x: Element, y: Element) -> Element:
    """Commutator xy - yx of the left-symmetric product."""
    contribs = _product_contribs(spec, x, y, +1) + _product_contribs(spec, y, x, -1)
    return element_sum(spec.symbols, contribs)


def witt(symbols: Symbols, a: GroupElement) -> Element:
    return Element.basis(symbols, Witt(tuple(a)))


def central(symbols: Symbols) -> Element:
    return Element.basis(symbols, Central())


def to_table(spec: StructureSpec, radius: int) -> CustomTable:
    """Snapshot the structure constants on the radius window as a table."""
    win = groups.window(spec.rank, radius)
    f = {(a, b): spec.f_of(a, b) for a in win for b in win}
    g = None
    if spec.zeta is not None:
        g = {(a, b): spec.g_of(a, b) for a in win for b in win}
    return CustomTable(spec.symbols, f, g, spec.zeta)


# ---------------------------------------------------------------------------
# Spec files (TOML)
# ---------------------------------------------------------------------------

try:
    import tomllib as _toml
except ModuleNotFoundError:  # Python < 3.11
    import tomli as _toml

_FAMILY_PARAMS = {
    "V_alpha_theta": ("alpha", "theta"),
    "V_gamma_lambda": ("gamma",),
    "W_alpha_mu_zeta": ("alpha", "mu"),
    "Vir_theta": ("theta",),
    "custom": (),
    "module_v": ("alpha", "beta"),
    "module_a": ("gamma",),
    "module_b": ("gamma",),
}


def read_spec_config(path: str) -> dict:
    """Read and sanity-check a TOML spec file; returns the raw config dict
    with derived keys `family`, `rank` and `params` filled in."""
    with open(path, "rb") as fh:
        try:
            config = _toml.load(fh)
        except _toml.TOMLDecodeError as exc:
            raise SpecError(f"{path}: invalid TOML: {exc}") from None
    family = config.get("family")
    if family not in _FAMILY_PARAMS:
        raise SpecError(f"{path}: unknown or missing family {family!r}; expected one of {sorted(_FAMILY_PARAMS)}")
    rank = config.get("rank")
    if not isinstance(rank, int) or rank < 1:
        raise SpecError(f"{path}: rank must be a positive integer")
    params = list(_FAMILY_PARAMS[family])
    for extra in config.get("params", []):
        if extra not in params:
            params.append(extra)
    config["params"] = tuple(params)
    config["_path"] = path
    return config


def symbols_for(config: dict) -> Symbols:
    return Symbols(config["rank"], config["params"])


def _parse_param(config: dict, key: str, symbols: Symbols, default: Optional[str] = None) -> Scalar:
    raw = config.get(key, default)
    if raw is None:
        raise SpecError(f"{config['_path']}: missing required key {key!r}")
    if not isinstance(raw, str):
        raw = str(raw)
    try:
        return parse_scalar(raw, symbols)
    except ParseError as exc:
        raise SpecError(f"{config['_path']}: key {key!r}: {exc}") from None


def _parse_vector(config: dict, key: str, rank: int, required: bool = True) -> Optional[GroupElement]:
    raw = config.get(key)
    if raw is None:
        if required:
            raise SpecError(f"{config['_path']}: missing required key {key!r}")
        return None
    if not isinstance(raw, list) or len(raw) != rank or not all(isinstance(x, int) for x in raw):
        raise SpecError(f"{config['_path']}: key {key!r} must be a list of {rank} integers")
    return tuple(raw)


def parse_pair_key(key: str, rank: int) -> Tuple[GroupElement, GroupElement]:
    """Parse an 'a|b' coordinate pair key, e.g. '1,0|-1,2'."""
    try:
        left, right = key.split("|")
        a = tuple(int(x) for x in left.split(","))
        b = tuple(int(x) for x in right.split(","))
    except ValueError:
        raise SpecError(f"malformed pair key {key!r}; expected 'a1,..,an|b1,..,bn'") from None
    if len(a) != rank or len(b) != rank:
        raise SpecError(f"pair key {key!r} has wrong rank (expected {rank})")
    return a, b


def render_pair_key(a: GroupElement, b: GroupElement) -> str:
    return ",".join(str(x) for x in a) + "|" + ",".join(str(x) for x in b)


def _parse_table(config: dict, key: str, symbols: Symbols) -> Optional[dict]:
    raw = config.get(key)
    if raw is None:
        return None
    if isinstance(raw, str):
        raw = json.loads(raw)
    table = {}
    for pair_key, expr in raw.items():
        pair = parse_pair_key(pair_key, symbols.rank)
        try:
            table[pair] = parse_scalar(expr, symbols)
        except ParseError as exc:
            raise SpecError(f"{config['_path']}: table {key!r} entry {pair_key!r}: {exc}") from None
    return table


def build_spec(config: dict, symbols: Symbols) -> StructureSpec:
    family = config["family"]
    rank = config["rank"]
    if family == "V_alpha_theta":
        return VAlphaTheta(
            symbols,
            _parse_param(config, "alpha", symbols, default="alpha"),
            _parse_param(config, "theta", symbols, default="theta"),
        )
    if family == "V_gamma_lambda":
        return VGammaLambda(
            symbols,
            _parse_param(config, "gamma", symbols, default="gamma"),
            _parse_vector(config, "lambda", rank),
        )
    if family == "W_alpha_mu_zeta":
        return WAlphaMuZeta(
            symbols,
            _parse_param(config, "alpha", symbols, default="alpha"),
            _parse_param(config, "mu", symbols, default="mu"),
            _parse_vector(config, "zeta", rank),
        )
    if family == "Vir_theta":
        return VirTheta(symbols, _parse_param(config, "theta", symbols, default="theta"))
    if family == "custom":
        f = _parse_table(config, "f", symbols)
        if f is None:
            raise SpecError(f"{config['_path']}: custom spec needs an f table")
        g = _parse_table(config, "g", symbols)
        zeta = _parse_vector(config, "zeta", rank, required=g is not None)
        return CustomTable(symbols, f, g, zeta)
    raise SpecError(f"{config['_path']}: family {family!r} does not describe an algebra structure")


def load_spec(path: str, symbols: Optional[Symbols] = None) -> StructureSpec:
    config = read_spec_config(path)
    if symbols is None:
        symbols = symbols_for(config)
    return build_spec(config, symbols)
