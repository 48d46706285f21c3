"""Parameter recovery from structure-constant tables, the isomorphism
decision for the graded families, and the exact central-extension solver.

The solver builds the full linear system of both cocycle identities over the
scalar field, with one unknown per window pair whose product index stays in
the window, and performs exact Gauss-Jordan elimination with ordered
pivoting.  No numerical rank decisions anywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import groups
from .groups import GroupElement
from .scalars import Scalar, Symbols
from .structures import (
    CustomTable,
    SpecError,
    StructureSpec,
    VAlphaTheta,
    VGammaLambda,
    WAlphaMuZeta,
    render_pair_key,
)


@dataclass
class FitResult:
    """All families that reproduce a table exactly; empty means unclassified."""

    candidates: List[Tuple[StructureSpec, bool]]
    probe_log: List[dict]
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "candidates": [
                {"family": spec.kind, "params": spec.params(), "residual_free": exact}
                for spec, exact in self.candidates
            ],
            "probe_log": self.probe_log,
            "notes": list(self.notes),
        }


@dataclass
class CocycleSolution:
    """Solution status of the cocycle linear system on one window."""

    status: str  # "none" | "unique" | "underdetermined"
    phi: Optional[Dict[Tuple[GroupElement, GroupElement], Scalar]]
    system_size: Tuple[int, int]
    free_unknowns: int = 0

    def to_dict(self) -> dict:
        out = {
            "status": self.status,
            "system_size": list(self.system_size),
            "free_unknowns": self.free_unknowns,
        }
        if self.phi is not None:
            out["phi"] = {
                render_pair_key(a, b): self.phi[(a, b)].render()
                for (a, b) in sorted(self.phi)
            }
        else:
            out["phi"] = None
        return out


# ---------------------------------------------------------------------------
# Univariate polynomials over the scalar field (for exact theta recovery)
# ---------------------------------------------------------------------------


def _upoly_trim(p: List[Scalar]) -> List[Scalar]:
    while p and p[-1].is_zero():
        p.pop()
    return p


def _upoly_monic(p: List[Scalar]) -> List[Scalar]:
    lead = p[-1]
    return [c / lead for c in p]


def _upoly_mod(p: List[Scalar], q: List[Scalar]) -> List[Scalar]:
    r = list(p)
    dq = len(q) - 1
    lead = q[-1]
    while len(r) - 1 >= dq and r:
        shift = len(r) - 1 - dq
        factor = r[-1] / lead
        for i, c in enumerate(q):
            r[shift + i] = r[shift + i] - factor * c
        r.pop()
        _upoly_trim(r)
    return r


def _upoly_gcd(p: List[Scalar], q: List[Scalar]) -> List[Scalar]:
    p, q = list(p), list(q)
    while q:
        p, q = q, _upoly_mod(p, q)
    return _upoly_monic(p) if p else p


# ---------------------------------------------------------------------------
# identify
# ---------------------------------------------------------------------------


def _table_matches(spec: StructureSpec, table: CustomTable, pairs) -> bool:
    graded_table = table.is_graded
    if graded_table != spec.is_graded:
        return False
    if not graded_table:
        if spec.zeta != table.zeta:
            return False
    for a, b in pairs:
        if spec.f_of(a, b) != table.f_of(a, b):
            return False
        if not graded_table and spec.g_of(a, b) != table.g_of(a, b):
            return False
    return True


def _probe_entry(pair, table_value: Scalar, model_value: Scalar) -> dict:
    return {
        "inputs": [list(pair[0]), list(pair[1])],
        "table": table_value.render(),
        "model": model_value.render(),
    }


def identify(table: CustomTable, radius: int) -> FitResult:
    """Hypothesize each classified family from probe entries, then keep every
    hypothesis that reproduces the entire table exactly."""
    symbols = table.symbols
    rank = symbols.rank
    if radius < 1:
        raise ValueError("window too small to contain any probe (radius 0)")
    win = groups.window(rank, radius)
    pairs = list(itertools.product(win, win))
    missing = [p for p in pairs if not table.defined_at(*p)]
    if missing:
        raise ValueError(f"table incomplete: {len(missing)} window pairs undefined, first {missing[0]}")

    zero_vec = groups.zero(rank)
    alpha0 = table.f_of(zero_vec, zero_vec)
    candidates: List[Tuple[StructureSpec, bool]] = []
    probe_log: List[dict] = []
    notes: List[str] = []
    graded = table.is_graded

    if graded:
        _fit_v_alpha_theta(table, pairs, alpha0, candidates, probe_log, notes)
        _fit_v_gamma_lambda(table, pairs, alpha0, candidates, probe_log, notes)
        _fit_w_graded(table, pairs, alpha0, candidates, probe_log, notes)
    else:
        _fit_w_shifted(table, pairs, alpha0, candidates, probe_log, notes)
    return FitResult(candidates, probe_log, notes)


def _theta_quadratic(table: CustomTable, alpha0: Scalar, a, b) -> List[Scalar]:
    """Coefficients of the polynomial (in the unknown theta) that the table
    entry at (a, b) must annihilate for the alpha-theta family:
    fab*(1 + t(A+B)) - (alpha + B + alpha*t*A)(1 + t*B)."""
    symbols = table.symbols
    A, B = groups.embed(symbols, a), groups.embed(symbols, b)
    fab = table.f_of(a, b)
    c0 = fab - alpha0 - B
    c1 = fab * (A + B) - alpha0 * A - (alpha0 + B) * B
    c2 = -(alpha0 * A * B)
    return _upoly_trim([c0, c1, c2])


def _fit_v_alpha_theta(table, pairs, alpha0, candidates, probe_log, notes) -> None:
    symbols = table.symbols
    rank = symbols.rank
    e1 = tuple([1] + [0] * (rank - 1))
    probe_pairs = [(e1, e1)] + [
        p for p in pairs if not groups.is_zero(p[0]) and not groups.is_zero(p[1]) and p != (e1, e1)
    ]
    g: Optional[List[Scalar]] = None
    used = 0
    for pair in probe_pairs:
        quad = _theta_quadratic(table, alpha0, *pair)
        if not quad:
            continue
        used += 1
        g = quad if g is None else _upoly_gcd(g, quad)
        if len(g) == 1:
            break  # no common root left
        if used >= 8:
            break
    roots: List[Scalar] = []
    if g is None:
        # every probed entry satisfies the family identically; only theta = 0
        # remains meaningful to try
        roots = [symbols.zero()]
        notes.append("theta probes degenerate; trying theta = 0 only")
    elif len(g) == 1:
        notes.append("no theta satisfies the probe relations")
    elif len(g) == 2:
        roots = [-(g[0] / g[1])]
    else:  # degree 2: both roots recoverable only via the exact zero test
        if g[0].is_zero():
            roots = [symbols.zero(), -(g[1] / g[2])]
            notes.append("two thetas satisfy all probes (the shared-alpha exchange pair)")
        else:
            notes.append("theta probe relation is an irreducible quadratic; no exact root extraction")
    seen = []
    for theta in roots:
        if any(theta == s for s in seen):
            continue
        seen.append(theta)
        cand = VAlphaTheta(symbols, alpha0, theta)
        if not cand.validate().passed:
            continue
        if _table_matches(cand, table, pairs):
            candidates.append((cand, True))
            probe = probe_pairs[0]
            probe_log.append(_probe_entry(probe, table.f_of(*probe), cand.f_of(*probe)))


def _fit_v_gamma_lambda(table, pairs, alpha0, candidates, probe_log, notes) -> None:
    symbols = table.symbols
    lam = groups.is_in_group(alpha0)
    if lam is None:
        return
    Lam = groups.embed(symbols, lam)
    gamma = None
    probe_pair = None
    for b, c in pairs:
        if not groups.is_zero(groups.add(lam, groups.add(b, c))):
            continue  # off the exceptional line
        if groups.is_zero(groups.add(lam, c)):
            continue  # entry forced to zero, carries no gamma information
        t = table.f_of(b, c)
        C = groups.embed(symbols, c)
        denom = t - Lam - C
        if denom.is_zero():
            continue
        gamma = (t * Lam - (Lam + C) ** 2) / denom
        probe_pair = (b, c)
        break
    if gamma is None:
        notes.append(
            "exceptional line for the recovered lambda has no usable window entry; gamma unconstrained"
        )
        return
    cand = VGammaLambda(symbols, gamma, lam)
    if not cand.validate().passed:
        return
    if _table_matches(cand, table, pairs):
        candidates.append((cand, True))
        probe_log.append(_probe_entry(probe_pair, table.f_of(*probe_pair), cand.f_of(*probe_pair)))


def _unit_vector(rank: int) -> GroupElement:
    return tuple([1] + [0] * (rank - 1))


def _fit_w_graded(table, pairs, alpha0, candidates, probe_log, notes) -> None:
    symbols = table.symbols
    for a, b in pairs:
        if table.f_of(a, b) != alpha0 + groups.embed(symbols, b):
            return
    cand = WAlphaMuZeta(symbols, alpha0, symbols.zero(), _unit_vector(symbols.rank))
    candidates.append((cand, True))
    zero_vec = groups.zero(symbols.rank)
    probe_log.append(_probe_entry((zero_vec, zero_vec), alpha0, cand.f_of(zero_vec, zero_vec)))
    notes.append("mu = 0 leaves the shift vector arbitrary")


def _fit_w_shifted(table, pairs, alpha0, candidates, probe_log, notes) -> None:
    symbols = table.symbols
    zero_vec = groups.zero(symbols.rank)
    mu0 = table.g_of(zero_vec, zero_vec)
    cand = WAlphaMuZeta(symbols, alpha0, mu0, table.zeta)
    if not cand.validate().passed:
        notes.append("table shift vector is invalid (zero)")
        return
    if _table_matches(cand, table, pairs):
        candidates.append((cand, True))
        probe_log.append(_probe_entry((zero_vec, zero_vec), table.f_of(zero_vec, zero_vec), alpha0))


# ---------------------------------------------------------------------------
# Isomorphism decision for the graded families
# ---------------------------------------------------------------------------


def _not_in_lattice(s: Scalar) -> bool:
    return groups.is_in_group(s) is None


def are_isomorphic(spec1: StructureSpec, spec2: StructureSpec) -> Tuple[bool, str]:
    """Decide isomorphism of two graded structures by exact case analysis.

    The four patterns, with the orientation sign of the underlying basis
    correspondence (+: f1(a,b) = f2(a,b); -: f1(a,b) = -f2(-a,-b)):
      1. identical parameters (+)
      2. theta exchange {0, 1/alpha} at shared alpha, alpha not a lattice point (+)
      3. parameter negation (alpha,theta) -> (-alpha,-theta) (-)
      4. gamma negation at lambda = 0 (-)
    plus the composition of 2 and 3, which the equivalence closure requires.
    """
    for spec in (spec1, spec2):
        if not isinstance(spec, (VAlphaTheta, VGammaLambda)):
            raise SpecError(
                f"isomorphism decision covers the graded families only, not {spec.kind}"
            )
    if isinstance(spec1, VAlphaTheta) and isinstance(spec2, VAlphaTheta):
        return _iso_alpha_theta(spec1, spec2)
    if isinstance(spec1, VGammaLambda) and isinstance(spec2, VGammaLambda):
        return _iso_gamma_lambda(spec1, spec2)
    return (False, "no isomorphism between the alpha-theta and gamma-lambda families")


def _iso_alpha_theta(s1: VAlphaTheta, s2: VAlphaTheta) -> Tuple[bool, str]:
    a1, t1, a2, t2 = s1.alpha, s1.theta, s2.alpha, s2.theta
    if a1 == a2 and t1 == t2:
        return (True, "case 1: identical parameters (orientation +)")
    if a1 == a2 and not a1.is_zero() and _not_in_lattice(a1):
        inv_a = a1.inv()
        if (t1.is_zero() and t2 == inv_a) or (t2.is_zero() and t1 == inv_a):
            return (
                True,
                "case 2: theta exchange {0, 1/alpha} at shared alpha, alpha not a lattice point (orientation +)",
            )
    if a1 == -a2 and t1 == -t2:
        return (True, "case 3: parameter negation (orientation -)")
    if a1 == -a2 and not a1.is_zero() and _not_in_lattice(a1):
        inv_a = a1.inv()
        if (t1.is_zero() and t2 == -inv_a) or (t2.is_zero() and t1 == inv_a):
            return (
                True,
                "cases 2+3 composed: negation together with theta exchange (orientation -)",
            )
    return (False, "alpha-theta parameters match no isomorphism case")


def _iso_gamma_lambda(s1: VGammaLambda, s2: VGammaLambda) -> Tuple[bool, str]:
    if s1.lam == s2.lam and s1.gamma == s2.gamma:
        return (True, "case 1: identical parameters (orientation +)")
    if groups.is_zero(s1.lam) and groups.is_zero(s2.lam) and s1.gamma == -s2.gamma:
        return (True, "case 4: gamma negation at lambda = 0 (orientation -)")
    return (False, "gamma-lambda parameters match no isomorphism case")


# ---------------------------------------------------------------------------
# Central-extension solver
# ---------------------------------------------------------------------------


def solve_cocycle(spec: StructureSpec, radius: int) -> CocycleSolution:
    """Assemble the exact linear system of both cocycle identities in the
    unknowns phi(a,b), for window pairs whose product index a+b stays inside
    the window, then eliminate.

    The unknowns are NOT assumed to be supported on the line a+b = 0; the
    system itself must force the off-line values to zero.
    """
    if radius < 2:
        raise ValueError("cocycle solving needs radius >= 2")
    if not spec.is_graded:
        raise SpecError("cocycle solving requires a graded structure")
    symbols = spec.symbols
    rank = symbols.rank
    win = groups.window(rank, radius)
    wset = set(win)

    unknowns = [(a, b) for a in win for b in win if groups.add(a, b) in wset]
    index = {pair: i for i, pair in enumerate(unknowns)}
    embeds = {a: groups.embed(symbols, a) for a in win}

    equations: List[Tuple[Dict[int, Scalar], Scalar]] = []

    # skew part: phi(a,b) - phi(b,a) = (1/12)(b^3 - b) on the line a+b = 0
    one = symbols.one()
    for (a, b) in unknowns:
        if not a < b:
            continue
        if groups.is_zero(groups.add(a, b)):
            B = embeds[b]
            rhs = (B**3 - B) * Fraction(1, 12)
        else:
            rhs = symbols.zero()
        equations.append(({index[(a, b)]: one, index[(b, a)]: -one}, rhs))

    # product compatibility: (b-a) phi(a+b,c) = phi(a,b+c) f(b,c) - phi(b,a+c) f(a,c)
    for a in win:
        for b in win:
            if not a < b:
                continue
            ab = groups.add(a, b)
            if ab not in wset:
                continue
            for c in win:
                bc = groups.add(b, c)
                ac = groups.add(a, c)
                if bc not in wset or ac not in wset or groups.add(ab, c) not in wset:
                    continue
                if not (spec.defined_at(b, c) and spec.defined_at(a, c)):
                    continue
                coeffs: Dict[int, Scalar] = {}
                _accumulate(coeffs, index[(ab, c)], embeds[b] - embeds[a])
                _accumulate(coeffs, index[(a, bc)], -spec.f_of(b, c))
                _accumulate(coeffs, index[(b, ac)], spec.f_of(a, c))
                coeffs = {v: s for v, s in coeffs.items() if not s.is_zero()}
                if coeffs:
                    equations.append((coeffs, symbols.zero()))

    status, values, free = _solve_linear(symbols, len(unknowns), equations)
    if status == "none":
        return CocycleSolution("none", None, (len(unknowns), len(equations)))
    if status == "underdetermined":
        return CocycleSolution("underdetermined", None, (len(unknowns), len(equations)), free)
    phi = {pair: values[i] for pair, i in index.items()}
    return CocycleSolution("unique", phi, (len(unknowns), len(equations)))


def _accumulate(coeffs: Dict[int, Scalar], var: int, value: Scalar) -> None:
    if var in coeffs:
        coeffs[var] = coeffs[var] + value
    else:
        coeffs[var] = value


def _solve_linear(symbols: Symbols, n_vars: int, equations) -> Tuple[str, Optional[list], int]:
    """Exact solve: constraint propagation to a fixpoint, then Gauss-Jordan
    elimination on whatever residual system is left.

    Propagation repeatedly substitutes already-determined values and solves
    equations that drop to a single unknown; on these cocycle systems this
    pins almost everything (most values are zero), leaving the elimination a
    small residual.  Both phases are deterministic and exact.
    """
    known: Dict[int, Scalar] = {}
    pending = list(equations)
    while True:
        progress = False
        residual = []
        for coeffs, rhs in pending:
            live: Dict[int, Scalar] = {}
            for v, c in coeffs.items():
                val = known.get(v)
                if val is None:
                    live[v] = c
                elif not val.is_zero():
                    rhs = rhs - c * val
            if not live:
                if not rhs.is_zero():
                    return ("none", None, 0)
                progress = True
                continue
            if len(live) == 1:
                ((v, c),) = live.items()
                known[v] = rhs / c
                progress = True
                continue
            residual.append((live, rhs))
        pending = residual
        if not progress:
            break

    if pending:
        status, values, free = _eliminate(symbols, n_vars, pending, frozenset(known))
        if status != "unique":
            return (status, None, free)
        for v, val in known.items():
            values[v] = val
        return ("unique", values, 0)

    free = n_vars - len(known)
    if free:
        return ("underdetermined", None, free)
    values = [None] * n_vars
    for v, val in known.items():
        values[v] = val
    return ("unique", values, 0)


def _eliminate(symbols: Symbols, n_vars: int, equations, solved=frozenset()) -> Tuple[str, Optional[list], int]:
    """Incremental exact Gauss-Jordan over the scalar field.

    Pivot rows are kept in solved form x_p = rhs - sum(others) and never
    reference other pivot variables; processing order is deterministic, so
    the outcome is too.
    """
    order = sorted(
        range(len(equations)),
        key=lambda k: (len(equations[k][0]), tuple(sorted(equations[k][0])), k),
    )
    pivots: Dict[int, Tuple[Dict[int, Scalar], Scalar]] = {}
    referencing: Dict[int, set] = {}

    for k in order:
        coeffs, rhs = equations[k]
        row = dict(coeffs)
        # substitute known pivots
        for v in sorted(row):
            if v not in pivots or v not in row:
                continue
            cv = row.pop(v)
            others, prhs = pivots[v]
            rhs = rhs - cv * prhs
            for w, ow in others.items():
                nv = row.get(w, None)
                nv = (-cv) * ow if nv is None else nv - cv * ow
                if nv.is_zero():
                    row.pop(w, None)
                else:
                    row[w] = nv
        row = {v: s for v, s in row.items() if not s.is_zero()}
        if not row:
            if not rhs.is_zero():
                return ("none", None, 0)
            continue
        p = min(row)
        cp = row.pop(p)
        others = {w: s / cp for w, s in row.items()}
        prhs = rhs / cp
        # restore the invariant: no stored row references the new pivot
        for q in sorted(referencing.pop(p, ())):
            qothers, qrhs = pivots[q]
            cq = qothers.pop(p)
            qrhs = qrhs - cq * prhs
            for w, ow in others.items():
                cur = qothers.get(w)
                nv = (-cq) * ow if cur is None else cur - cq * ow
                if nv.is_zero():
                    if w in qothers:
                        del qothers[w]
                        referencing[w].discard(q)
                else:
                    if w not in qothers:
                        referencing.setdefault(w, set()).add(q)
                    qothers[w] = nv
            pivots[q] = (qothers, qrhs)
        pivots[p] = (others, prhs)
        for w in others:
            referencing.setdefault(w, set()).add(p)

    free = sorted(set(range(n_vars)) - set(pivots) - solved)
    if free:
        return ("underdetermined", None, len(free))
    # all pivot rows must now be constant (no free vars exist)
    values = [None] * n_vars
    for p, (others, prhs) in pivots.items():
        if others:
            return ("underdetermined", None, 0)
        values[p] = prhs
    return ("unique", values, 0)
