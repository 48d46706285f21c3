"""Exact window verification of the identity systems.

Every check walks a finite window of the grading group in lexicographic
order, evaluates both sides of the identity exactly and reports pass/fail
with exact counterexamples.  Window iteration may be split into partitions;
the merged report is byte-identical regardless of the partitioning.

Checks against a custom table clip to the table's domain: a case is checked
only when every lookup it needs is available, and skipped cases are counted
so a pass is never silently vacuous.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from . import groups
from .groups import GroupElement
from .report import Counterexample, Report, make_report
from .scalars import Scalar, Symbols, scalar_sum
from .structures import (
    Central,
    CustomTable,
    Element,
    SpecError,
    StructureSpec,
    TableDomainError,
    Witt,
    bracket,
    multiply,
    witt,
)

DEFAULT_MAX_COUNTEREXAMPLES = 10

_SKIP = object()


def _scan(
    cases: Sequence,
    fn: Callable,
    partitions: int,
    max_counterexamples: int,
) -> Tuple[List[Counterexample], int, int]:
    """Run fn over all cases, split into `partitions` contiguous chunks.

    fn returns None (pass), a Counterexample, or _SKIP.  The merged result is
    independent of the chunking: counterexamples are sorted and capped after
    the full scan.
    """
    if partitions < 1:
        raise ValueError("partitions must be >= 1")
    found: List[Counterexample] = []
    skipped = 0
    n = len(cases)
    bounds = [(i * n) // partitions for i in range(partitions + 1)]
    for lo, hi in zip(bounds, bounds[1:]):
        part_found = []
        part_skipped = 0
        for case in cases[lo:hi]:
            out = fn(case)
            if out is None:
                continue
            if out is _SKIP:
                part_skipped += 1
            else:
                part_found.append(out)
        found.extend(part_found)
        skipped += part_skipped
    found.sort(key=Counterexample.sort_key)
    if max_counterexamples >= 0:
        found = found[:max_counterexamples]
    return found, len(cases) - skipped, skipped


def _pairs(rank: int, radius: int) -> List[tuple]:
    win = groups.window(rank, radius)
    return list(itertools.product(win, win))


def _triples(rank: int, radius: int) -> List[tuple]:
    win = groups.window(rank, radius)
    return list(itertools.product(win, win, win))


def _spec_assumptions(spec: StructureSpec) -> List[str]:
    report = spec.validate()
    return list(report.assumptions)


def check_left_symmetric(
    spec: StructureSpec,
    radius: int,
    partitions: int = 1,
    max_counterexamples: int = DEFAULT_MAX_COUNTEREXAMPLES,
) -> Report:
    """(xy)z - x(yz) = (yx)z - y(xz) on all basis triples of the window."""
    symbols = spec.symbols

    def run(case):
        a, b, c = case
        la, lb, lc = witt(symbols, a), witt(symbols, b), witt(symbols, c)
        try:
            lhs = multiply(spec, multiply(spec, la, lb), lc) - multiply(spec, la, multiply(spec, lb, lc))
            rhs = multiply(spec, multiply(spec, lb, la), lc) - multiply(spec, lb, multiply(spec, la, lc))
        except TableDomainError:
            return _SKIP
        if lhs == rhs:
            return None
        return Counterexample(inputs=(a, b, c), lhs=lhs, rhs=rhs)

    found, checked, skipped = _scan(_triples(spec.rank, radius), run, partitions, max_counterexamples)
    return make_report(
        "left-symmetric", spec.rank, radius, checked, skipped, found, _spec_assumptions(spec)
    )


def check_pair_identities(
    spec: StructureSpec,
    radius: int,
    partitions: int = 1,
    max_counterexamples: int = DEFAULT_MAX_COUNTEREXAMPLES,
) -> Report:
    """The pair-level identities: f(a,b) - f(b,a) = b - a, and symmetry of g
    when the structure has a shift component."""
    symbols = spec.symbols
    has_g = spec.zeta is not None

    def run(case):
        tag, a, b = case
        try:
            if tag == 0:
                lhs = spec.f_of(a, b) - spec.f_of(b, a)
                rhs = groups.embed(symbols, b) - groups.embed(symbols, a)
            else:
                lhs = spec.g_of(a, b)
                rhs = spec.g_of(b, a)
        except TableDomainError:
            return _SKIP
        if lhs == rhs:
            return None
        return Counterexample(inputs=(a, b), lhs=lhs, rhs=rhs)

    cases = [(0, a, b) for a, b in _pairs(spec.rank, radius)]
    if has_g:
        cases += [(1, a, b) for a, b in _pairs(spec.rank, radius)]
    found, checked, skipped = _scan(cases, run, partitions, max_counterexamples)
    return make_report(
        "pair-identities", spec.rank, radius, checked, skipped, found, _spec_assumptions(spec)
    )


def check_graded_equations(
    spec: StructureSpec,
    radius: int,
    partitions: int = 1,
    max_counterexamples: int = DEFAULT_MAX_COUNTEREXAMPLES,
) -> Report:
    """The two functional equations of a graded structure:
    f(a,b) - f(b,a) = b - a on pairs, and
    (b-a) f(a+b,c) = f(b,c) f(a,b+c) - f(a,c) f(b,a+c) on triples."""
    if not spec.is_graded:
        raise SpecError("graded-equations check requires a structure without a shift component")
    symbols = spec.symbols

    def run(case):
        if len(case) == 2:
            a, b = case
            try:
                lhs = spec.f_of(a, b) - spec.f_of(b, a)
            except TableDomainError:
                return _SKIP
            rhs = groups.embed(symbols, b) - groups.embed(symbols, a)
            if lhs == rhs:
                return None
            return Counterexample(inputs=(a, b), lhs=lhs, rhs=rhs)
        a, b, c = case
        A, B = groups.embed(symbols, a), groups.embed(symbols, b)
        try:
            lhs = (B - A) * spec.f_of(groups.add(a, b), c)
            rhs = spec.f_of(b, c) * spec.f_of(a, groups.add(b, c)) - spec.f_of(a, c) * spec.f_of(
                b, groups.add(a, c)
            )
        except TableDomainError:
            return _SKIP
        if lhs == rhs:
            return None
        return Counterexample(inputs=(a, b, c), lhs=lhs, rhs=rhs)

    cases = _pairs(spec.rank, radius) + _triples(spec.rank, radius)
    found, checked, skipped = _scan(cases, run, partitions, max_counterexamples)
    return make_report(
        "graded-eqs", spec.rank, radius, checked, skipped, found, _spec_assumptions(spec)
    )


def check_nongraded_equations(
    spec: StructureSpec,
    radius: int,
    partitions: int = 1,
    max_counterexamples: int = DEFAULT_MAX_COUNTEREXAMPLES,
) -> Report:
    """The five equation systems of a structure with shift component g:
    the two graded equations for f, symmetry of g, the quadratic g relation
    with shifted argument, and the mixed f/g relation.  Together these are
    equivalent to left-symmetry of the two-term product."""
    if spec.zeta is None:
        raise SpecError("non-graded equations need a structure with a shift component and zeta")
    symbols = spec.symbols
    zeta = spec.zeta

    def run(case):
        tag = case[0]
        try:
            if tag == "f-skew":
                _, a, b = case
                lhs = spec.f_of(a, b) - spec.f_of(b, a)
                rhs = groups.embed(symbols, b) - groups.embed(symbols, a)
                inputs = (a, b)
            elif tag == "g-sym":
                _, a, b = case
                lhs, rhs = spec.g_of(a, b), spec.g_of(b, a)
                inputs = (a, b)
            elif tag == "f-quad":
                _, a, b, c = case
                A, B = groups.embed(symbols, a), groups.embed(symbols, b)
                lhs = (B - A) * spec.f_of(groups.add(a, b), c)
                rhs = spec.f_of(b, c) * spec.f_of(a, groups.add(b, c)) - spec.f_of(
                    a, c
                ) * spec.f_of(b, groups.add(a, c))
                inputs = (a, b, c)
            elif tag == "g-quad":
                _, a, b, c = case
                lhs = spec.g_of(b, c) * spec.g_of(a, groups.add(groups.add(b, c), zeta))
                rhs = spec.g_of(a, c) * spec.g_of(b, groups.add(groups.add(a, c), zeta))
                inputs = (a, b, c)
            else:  # mixed f/g relation
                _, a, b, c = case
                A, B = groups.embed(symbols, a), groups.embed(symbols, b)
                lhs = spec.f_of(b, c) * spec.g_of(a, groups.add(b, c)) - spec.f_of(
                    a, c
                ) * spec.g_of(b, groups.add(a, c))
                rhs = (
                    spec.g_of(a, c) * spec.f_of(b, groups.add(groups.add(a, c), zeta))
                    - spec.g_of(b, c) * spec.f_of(a, groups.add(groups.add(b, c), zeta))
                    + (B - A) * spec.g_of(groups.add(a, b), c)
                )
                inputs = (a, b, c)
        except TableDomainError:
            return _SKIP
        if lhs == rhs:
            return None
        return Counterexample(inputs=inputs, lhs=lhs, rhs=rhs)

    pairs = _pairs(spec.rank, radius)
    triples = _triples(spec.rank, radius)
    cases: List[tuple] = [("f-skew", a, b) for a, b in pairs]
    cases += [("g-sym", a, b) for a, b in pairs]
    cases += [("f-quad",) + t for t in triples]
    cases += [("g-quad",) + t for t in triples]
    cases += [("fg-mixed",) + t for t in triples]
    found, checked, skipped = _scan(cases, run, partitions, max_counterexamples)
    assumptions = _spec_assumptions(spec)
    assumptions.append("this equation system is equivalent to the left-symmetric identity for two-term products")
    return make_report(
        "nongraded-eqs", spec.rank, radius, checked, skipped, found, assumptions
    )


def check_sub_adjacent(
    spec: StructureSpec,
    radius: int,
    partitions: int = 1,
    max_counterexamples: int = DEFAULT_MAX_COUNTEREXAMPLES,
) -> Report:
    """bracket(L_a, L_b) equals the Witt bracket (b-a) L_{a+b}, plus the
    (1/12)(b^3-b) central term on the line a+b=0 for the central family."""
    symbols = spec.symbols

    def run(case):
        a, b = case
        try:
            lhs = bracket(spec, witt(symbols, a), witt(symbols, b))
        except TableDomainError:
            return _SKIP
        A, B = groups.embed(symbols, a), groups.embed(symbols, b)
        contribs = [(Witt(groups.add(a, b)), B - A)]
        if spec.has_central and groups.is_zero(groups.add(a, b)):
            contribs.append((Central(), (B**3 - B) * Fraction(1, 12)))
        rhs = _element_from(symbols, contribs)
        if lhs == rhs:
            return None
        return Counterexample(inputs=(a, b), lhs=lhs, rhs=rhs)

    found, checked, skipped = _scan(_pairs(spec.rank, radius), run, partitions, max_counterexamples)
    return make_report(
        "sub-adjacent", spec.rank, radius, checked, skipped, found, _spec_assumptions(spec)
    )


def _element_from(symbols: Symbols, contribs) -> Element:
    out = {}
    for key, c in contribs:
        if not c.is_zero():
            out[key] = c
    return Element(symbols, out)


def check_novikov(
    spec: StructureSpec,
    radius: int,
    partitions: int = 1,
    max_counterexamples: int = DEFAULT_MAX_COUNTEREXAMPLES,
) -> Report:
    """Right commutativity (x.y).z = (x.z).y on all basis triples."""
    symbols = spec.symbols

    def run(case):
        a, b, c = case
        la, lb, lc = witt(symbols, a), witt(symbols, b), witt(symbols, c)
        try:
            lhs = multiply(spec, multiply(spec, la, lb), lc)
            rhs = multiply(spec, multiply(spec, la, lc), lb)
        except TableDomainError:
            return _SKIP
        if lhs == rhs:
            return None
        return Counterexample(inputs=(a, b, c), lhs=lhs, rhs=rhs)

    found, checked, skipped = _scan(_triples(spec.rank, radius), run, partitions, max_counterexamples)
    return make_report(
        "novikov", spec.rank, radius, checked, skipped, found, _spec_assumptions(spec)
    )


# ---------------------------------------------------------------------------
# Modules of intermediate series
# ---------------------------------------------------------------------------


class ModuleSpec:
    """Weight module with one-dimensional weight spaces; the action maps
    v_b to a scalar multiple of v_{a+b}."""

    kind: str = "?"

    def __init__(self, symbols: Symbols):
        self.symbols = symbols
        self._cache: Dict[tuple, Scalar] = {}

    @property
    def rank(self) -> int:
        return self.symbols.rank

    def action(self, a: GroupElement, b: GroupElement) -> Scalar:
        """Coefficient of v_{a+b} in L_a . v_b."""
        key = (a, b)
        val = self._cache.get(key)
        if val is None:
            val = self._action(a, b)
            self._cache[key] = val
        return val

    def _action(self, a, b) -> Scalar:
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError

    def describe(self) -> str:
        p = ", ".join(f"{k}={v}" for k, v in self.params().items())
        return f"{self.kind}({p})"


class VModule(ModuleSpec):
    """L_a v_b = (alpha + b + a*beta) v_{a+b}."""

    kind = "module_v"

    def __init__(self, symbols: Symbols, alpha: Scalar, beta: Scalar):
        super().__init__(symbols)
        self.alpha = alpha
        self.beta = beta

    def _action(self, a, b) -> Scalar:
        A, B = groups.embed(self.symbols, a), groups.embed(self.symbols, b)
        return self.alpha + B + A * self.beta

    def params(self) -> dict:
        return {"alpha": self.alpha.render(), "beta": self.beta.render()}


class AModule(ModuleSpec):
    """L_a v_b = (a+b) v_{a+b} for b != 0, and a(gamma+a) v_a for b = 0."""

    kind = "module_a"

    def __init__(self, symbols: Symbols, gamma: Scalar):
        super().__init__(symbols)
        self.gamma = gamma

    def _action(self, a, b) -> Scalar:
        A = groups.embed(self.symbols, a)
        if groups.is_zero(b):
            return A * (self.gamma + A)
        return A + groups.embed(self.symbols, b)

    def params(self) -> dict:
        return {"gamma": self.gamma.render()}


class BModule(ModuleSpec):
    """L_a v_b = b v_{a+b} for a+b != 0, and -a(gamma+a) v_0 for a+b = 0."""

    kind = "module_b"

    def __init__(self, symbols: Symbols, gamma: Scalar):
        super().__init__(symbols)
        self.gamma = gamma

    def _action(self, a, b) -> Scalar:
        A = groups.embed(self.symbols, a)
        if groups.is_zero(groups.add(a, b)):
            return -A * (self.gamma + A)
        return groups.embed(self.symbols, b)

    def params(self) -> dict:
        return {"gamma": self.gamma.render()}


def check_module(
    mspec: ModuleSpec,
    radius: int,
    partitions: int = 1,
    max_counterexamples: int = DEFAULT_MAX_COUNTEREXAMPLES,
) -> Report:
    """[L_a, L_b] v_c = L_a (L_b v_c) - L_b (L_a v_c) with the Witt bracket
    (b-a) L_{a+b}; the central element acts as zero throughout."""
    symbols = mspec.symbols

    def run(case):
        a, b, c = case
        A, B = groups.embed(symbols, a), groups.embed(symbols, b)
        lhs = (B - A) * mspec.action(groups.add(a, b), c)
        rhs = mspec.action(a, groups.add(b, c)) * mspec.action(b, c) - mspec.action(
            b, groups.add(a, c)
        ) * mspec.action(a, c)
        if lhs == rhs:
            return None
        return Counterexample(inputs=(a, b, c), lhs=lhs, rhs=rhs)

    found, checked, skipped = _scan(_triples(mspec.rank, radius), run, partitions, max_counterexamples)
    return make_report(f"module ({mspec.kind})", mspec.rank, radius, checked, skipped, found)


# ---------------------------------------------------------------------------
# Cocycle identities
# ---------------------------------------------------------------------------

PhiMap = Union[None, Dict[Tuple[GroupElement, GroupElement], Scalar], Callable]


def _phi_lookup(spec: StructureSpec, phi: PhiMap):
    if phi is None:
        return lambda a, b: spec.phi_of(a, b)
    if callable(phi):
        return phi
    def lookup(a, b):
        try:
            return phi[(a, b)]
        except KeyError:
            raise TableDomainError(f"phi undefined at {(a, b)}") from None
    return lookup


def check_cocycle(
    spec: StructureSpec,
    phi: PhiMap,
    radius: int,
    partitions: int = 1,
    max_counterexamples: int = DEFAULT_MAX_COUNTEREXAMPLES,
) -> Report:
    """The two cocycle identities of a central extension whose commutator
    reproduces the Virasoro bracket:
      phi(a,b) - phi(b,a) = (1/12)(b^3 - b) on the line a+b = 0, and
      (b-a) phi(a+b,c) = phi(a,b+c) f(b,c) - phi(b,a+c) f(a,c)."""
    if not spec.is_graded:
        raise SpecError("cocycle check requires a graded structure")
    symbols = spec.symbols
    lookup = _phi_lookup(spec, phi)

    def run(case):
        if len(case) == 2:
            a, b = case
            try:
                lhs = lookup(a, b) - lookup(b, a)
            except TableDomainError:
                return _SKIP
            if groups.is_zero(groups.add(a, b)):
                B = groups.embed(symbols, b)
                rhs = (B**3 - B) * Fraction(1, 12)
            else:
                rhs = symbols.zero()
            if lhs == rhs:
                return None
            return Counterexample(inputs=(a, b), lhs=lhs, rhs=rhs)
        a, b, c = case
        A, B = groups.embed(symbols, a), groups.embed(symbols, b)
        try:
            lhs = (B - A) * lookup(groups.add(a, b), c)
            rhs = lookup(a, groups.add(b, c)) * spec.f_of(b, c) - lookup(
                b, groups.add(a, c)
            ) * spec.f_of(a, c)
        except TableDomainError:
            return _SKIP
        if lhs == rhs:
            return None
        return Counterexample(inputs=(a, b, c), lhs=lhs, rhs=rhs)

    cases = _pairs(spec.rank, radius) + _triples(spec.rank, radius)
    found, checked, skipped = _scan(cases, run, partitions, max_counterexamples)
    return make_report(
        "cocycle", spec.rank, radius, checked, skipped, found, _spec_assumptions(spec)
    )
