"""Affinization: the Laurent-polynomial bracket that is a Lie bracket exactly
when the underlying algebra is Novikov.

The generator x(a; i) stands for the basis element of group degree a tensored
with t^(i+1); in this indexing the bracket reads

  [x(a;i), x(b;j)] = ((i+1) f(a,b) - (j+1) f(b,a)) x(a+b; i+j)
                   + ((i+1) g(a,b) - (j+1) g(b,a)) x(a+b+zeta; i+j)

plus, for the centrally extended family, a central component k(i+j) with
coefficient (i+1) phi(a,b) - (j+1) phi(b,a); central generators bracket to
zero with everything.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from . import groups
from .groups import GroupElement
from .report import Counterexample, Report, make_report
from .scalars import Scalar, Symbols, scalar_sum
from .structures import SpecError, StructureSpec, TableDomainError
from .verifier import DEFAULT_MAX_COUNTEREXAMPLES, _SKIP, _scan

# basis keys: ("x", a, i) for group degree a and t-degree i; ("k", i) central
AffKey = tuple


def _key_sort(key: AffKey) -> tuple:
    if key[0] == "x":
        return (0, key[1], key[2])
    return (1, (), key[1])


def _render_key(key: AffKey) -> str:
    if key[0] == "x":
        coords = ",".join(str(c) for c in key[1])
        return f"x({coords};{key[2]})"
    return f"k({key[1]})"


class AffElement:
    """Finite linear combination of affinized generators."""

    __slots__ = ("symbols", "coeffs")

    def __init__(self, symbols: Symbols, coeffs: Optional[dict] = None):
        self.symbols = symbols
        self.coeffs = coeffs or {}

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AffElement)
            and self.symbols == other.symbols
            and self.coeffs == other.coeffs
        )

    def __add__(self, other: "AffElement") -> "AffElement":
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            s = out.get(key)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return AffElement(self.symbols, out)

    def __neg__(self) -> "AffElement":
        return AffElement(self.symbols, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: "AffElement") -> "AffElement":
        return self + (-other)

    def scale(self, c: Scalar) -> "AffElement":
        if c.is_zero():
            return AffElement(self.symbols)
        return AffElement(self.symbols, {k: v * c for k, v in self.coeffs.items()})

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for key in sorted(self.coeffs, key=_key_sort):
            parts.append(f"({self.coeffs[key].render()})*{_render_key(key)}")
        return " + ".join(parts)

    def render_eval(self, assignment: Mapping) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for key in sorted(self.coeffs, key=_key_sort):
            parts.append(f"({self.coeffs[key].evaluate(assignment)})*{_render_key(key)}")
        return " + ".join(parts)

    def to_entries(self) -> list:
        """JSON form: one entry per generator, ordered."""
        out = []
        for key in sorted(self.coeffs, key=_key_sort):
            if key[0] == "x":
                out.append({"a": list(key[1]), "i": key[2], "coeff": self.coeffs[key].render()})
            else:
                out.append({"central": True, "i": key[1], "coeff": self.coeffs[key].render()})
        return out

    def __repr__(self) -> str:
        return f"AffElement({self.render()})"


def aff(symbols: Symbols, a: GroupElement, i: int) -> AffElement:
    return AffElement(symbols, {("x", tuple(a), i): symbols.one()})


def _basis_bracket(spec: StructureSpec, key1: AffKey, key2: AffKey) -> list:
    """Contribution list of [key1, key2] on basis generators."""
    if key1[0] == "k" or key2[0] == "k":
        return []  # products with the central element vanish both ways
    a, i = key1[1], key1[2]
    b, j = key2[1], key2[2]
    symbols = spec.symbols
    contribs = []
    wi = symbols.rational(i + 1)
    wj = symbols.rational(j + 1)
    coeff = wi * spec.f_of(a, b) - wj * spec.f_of(b, a)
    if not coeff.is_zero():
        contribs.append((("x", groups.add(a, b), i + j), coeff))
    if spec.zeta is not None:
        gc = wi * spec.g_of(a, b) - wj * spec.g_of(b, a)
        if not gc.is_zero():
            contribs.append((("x", groups.add(groups.add(a, b), spec.zeta), i + j), gc))
    if spec.has_central:
        pc = wi * spec.phi_of(a, b) - wj * spec.phi_of(b, a)
        if not pc.is_zero():
            contribs.append((("k", i + j), pc))
    return contribs


def affine_bracket(spec: StructureSpec, x: AffElement, y: AffElement) -> AffElement:
    """Bilinear extension of the basis bracket."""
    symbols = spec.symbols
    buckets: dict = {}
    for k1, c1 in x.coeffs.items():
        for k2, c2 in y.coeffs.items():
            c = c1 * c2
            for key, base in _basis_bracket(spec, k1, k2):
                buckets.setdefault(key, []).append(base * c)
    out = {}
    for key, parts in buckets.items():
        total = parts[0] if len(parts) == 1 else scalar_sum(symbols, parts)
        if not total.is_zero():
            out[key] = total
    return AffElement(symbols, out)


def check_jacobi(
    spec: StructureSpec,
    group_radius: int,
    t_radius: int,
    partitions: int = 1,
    max_counterexamples: int = DEFAULT_MAX_COUNTEREXAMPLES,
) -> Report:
    """Antisymmetry and the Jacobi identity on all basis pairs/triples with
    group degrees in the group window and t-degrees in [-t_radius, t_radius].
    """
    if group_radius < 1 or t_radius < 1:
        raise ValueError("both radii must be >= 1")
    symbols = spec.symbols
    basis = [
        (a, i)
        for a in groups.window(spec.rank, group_radius)
        for i in range(-t_radius, t_radius + 1)
    ]
    cache: Dict[tuple, AffElement] = {}

    def br_basis(p, q) -> AffElement:
        key = (p, q)
        out = cache.get(key)
        if out is None:
            contribs = _basis_bracket(spec, ("x",) + p, ("x",) + q)
            coeffs = {k: c for k, c in contribs}
            out = AffElement(symbols, coeffs)
            cache[key] = out
        return out

    def br_elem(x: AffElement, q) -> AffElement:
        """[x, x_q] for a basis generator q, via the cached basis brackets."""
        total = AffElement(symbols)
        for key, c in x.coeffs.items():
            if key[0] == "k":
                continue
            total = total + br_basis((key[1], key[2]), q).scale(c)
        return total

    def run(case):
        if len(case) == 2:
            p, q = case
            try:
                lhs = br_basis(p, q)
                rhs = -br_basis(q, p)
            except TableDomainError:
                return _SKIP
            if lhs == rhs:
                return None
            return Counterexample(
                inputs=(p[0], (p[1],), q[0], (q[1],)), lhs=lhs, rhs=rhs
            )
        p, q, r = case
        try:
            total = (
                br_elem(br_basis(p, q), r)
                + br_elem(br_basis(q, r), p)
                + br_elem(br_basis(r, p), q)
            )
        except TableDomainError:
            return _SKIP
        if total.is_zero():
            return None
        zero = AffElement(symbols)
        return Counterexample(
            inputs=(p[0], (p[1],), q[0], (q[1],), r[0], (r[1],)), lhs=total, rhs=zero
        )

    cases: List[tuple] = list(itertools.product(basis, basis))
    cases += list(itertools.product(basis, basis, basis))
    found, checked, skipped = _scan(cases, run, partitions, max_counterexamples)
    return make_report(
        "jacobi",
        spec.rank,
        group_radius,
        checked,
        skipped,
        found,
        t_radius=t_radius,
    )
