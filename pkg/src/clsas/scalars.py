"""Exact arithmetic in the field of multivariate rational functions over Q.

Everything downstream (structure constants, identity checks, the linear
cocycle solver) rides on this module, so canonical form is taken seriously:
a Scalar is a fraction of sparse polynomials with gcd(num, den) = 1 and the
denominator normalized to coprime integer coefficients with positive leading
coefficient under graded lexicographic order.  Structural equality of
canonical Scalars is mathematical equality.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union


class ScalarError(Exception):
    """Base class for errors raised by this module."""


class ParseError(ScalarError):
    """Syntax or symbol error in a scalar expression, with 0-based position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class SingularEvaluation(ScalarError):
    """The denominator of a Scalar vanishes at the given assignment."""


RationalLike = Union[int, Fraction]


class Symbols:
    """The ordered indeterminate table of one session.

    Grading symbols e1..eN come first, parameter symbols (theta, alpha, ...)
    after them.  The declaration order fixes the graded lexicographic term
    order once and for all, so canonical forms are reproducible across runs.
    """

    __slots__ = ("rank", "names", "_index", "_zero", "_one")

    def __init__(self, rank: int, params: Sequence[str] = ()):
        if rank < 1:
            raise ValueError("rank must be >= 1")
        names = tuple(f"e{i}" for i in range(1, rank + 1)) + tuple(params)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate symbol names in {names}")
        for name in names:
            if not name or not (name[0].isalpha() or name[0] == "_"):
                raise ValueError(f"invalid symbol name {name!r}")
        self.rank = rank
        self.names = names
        self._index = {name: i for i, name in enumerate(names)}
        self._zero = None
        self._one = None

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"undeclared symbol {name!r}") from None

    def is_grading(self, index: int) -> bool:
        return index < self.rank

    def __eq__(self, other) -> bool:
        return isinstance(other, Symbols) and self.names == other.names and self.rank == other.rank

    def __hash__(self) -> int:
        return hash((self.rank, self.names))

    def __repr__(self) -> str:
        return f"Symbols(rank={self.rank}, names={self.names})"

    # -- convenience constructors ------------------------------------------

    def zero(self) -> "Scalar":
        if self._zero is None:
            self._zero = Scalar(Polynomial.const(self, 0), Polynomial.const(self, 1), _canonical=True)
        return self._zero

    def one(self) -> "Scalar":
        if self._one is None:
            self._one = self.rational(1)
        return self._one

    def rational(self, value: RationalLike) -> "Scalar":
        return Scalar(Polynomial.const(self, Fraction(value)), Polynomial.const(self, 1), _canonical=True)

    def sym(self, name: str) -> "Scalar":
        return Scalar(Polynomial.var(self, self.index_of(name)), Polynomial.const(self, 1), _canonical=True)

    def scalar(self, expr: str) -> "Scalar":
        return parse_scalar(expr, self)


# ---------------------------------------------------------------------------
# Term-dict helpers.  A term dict maps exponent tuples (one slot per declared
# symbol) to nonzero Fractions; the empty dict is the zero polynomial.
# ---------------------------------------------------------------------------


def _grlex_key(exp: tuple) -> tuple:
    return (sum(exp), exp)


def _add_terms(a: dict, b: dict) -> dict:
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    for exp, c in b.items():
        s = out.get(exp)
        if s is None:
            out[exp] = c
        else:
            s = s + c
            if s:
                out[exp] = s
            else:
                del out[exp]
    return out


def _neg_terms(a: dict) -> dict:
    return {exp: -c for exp, c in a.items()}


def _scale_terms(a: dict, c: Fraction) -> dict:
    if not c:
        return {}
    return {exp: coef * c for exp, coef in a.items()}


def _mul_terms(a: dict, b: dict) -> dict:
    if not a or not b:
        return {}
    if len(b) > len(a):
        a, b = b, a
    out: dict = {}
    for eb, cb in b.items():
        for ea, ca in a.items():
            exp = tuple(x + y for x, y in zip(ea, eb))
            c = ca * cb
            s = out.get(exp)
            if s is None:
                out[exp] = c
            else:
                s = s + c
                if s:
                    out[exp] = s
                else:
                    del out[exp]
    return out


def _mono_mul_terms(a: dict, exp_shift: tuple, c: Fraction) -> dict:
    return {tuple(x + y for x, y in zip(exp, exp_shift)): coef * c for exp, coef in a.items()}


def _leading(a: dict) -> tuple:
    return max(a, key=_grlex_key)


def _content(a: dict) -> Fraction:
    """Positive rational c with a/c having coprime integer coefficients."""
    num_gcd = 0
    den_lcm = 1
    for c in a.values():
        num_gcd = math.gcd(num_gcd, abs(c.numerator))
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    return Fraction(num_gcd, den_lcm)


def _primitive(a: dict) -> dict:
    """Strip rational content and sign: coprime integer coefficients, positive leading."""
    if not a:
        return {}
    c = _content(a)
    if a[_leading(a)] < 0:
        c = -c
    if c == 1:
        return dict(a)
    return {exp: coef / c for exp, coef in a.items()}


def _deg_v(a: dict, v: int) -> int:
    return max(exp[v] for exp in a)


def _min_var(a: dict, b: dict, nvars: int) -> Optional[int]:
    for v in range(nvars):
        if any(exp[v] for exp in a) or any(exp[v] for exp in b):
            return v
    return None


def _coeff_v(a: dict, v: int, d: int) -> dict:
    """Coefficient of v^d, as a term dict with the v slot zeroed."""
    out = {}
    for exp, c in a.items():
        if exp[v] == d:
            e = list(exp)
            e[v] = 0
            out[tuple(e)] = c
    return out


def _exact_div(a: dict, d: dict) -> dict:
    """Exact multivariate division a / d; raises if d does not divide a."""
    if not a:
        return {}
    if len(d) == 1:
        ((dexp, dc),) = d.items()
        if not any(dexp):
            return _scale_terms(a, 1 / dc)
        out = {}
        for exp, c in a.items():
            q = tuple(x - y for x, y in zip(exp, dexp))
            if any(x < 0 for x in q):
                raise ArithmeticError("inexact polynomial division")
            out[q] = c / dc
        return out
    lead_d = _leading(d)
    cd = d[lead_d]
    rem = dict(a)
    quo: dict = {}
    while rem:
        lead_r = _leading(rem)
        qexp = tuple(x - y for x, y in zip(lead_r, lead_d))
        if any(x < 0 for x in qexp):
            raise ArithmeticError("inexact polynomial division")
        qc = rem[lead_r] / cd
        quo[qexp] = qc
        rem = _add_terms(rem, _mono_mul_terms(d, qexp, -qc))
    return quo


def _prem(a: dict, b: dict, v: int) -> dict:
    """Pseudo-remainder of a by b in the variable v, up to content (the PRS
    loop primitivizes afterwards, so each step may strip rational content to
    keep coefficient growth in check)."""
    db = _deg_v(b, v)
    lb = _coeff_v(b, v, db)
    r = a
    while r:
        dr = _deg_v(r, v)
        if dr < db:
            break
        lr = _coeff_v(r, v, dr)
        shift = [0] * len(next(iter(b)))
        shift[v] = dr - db
        r = _add_terms(_mul_terms(lb, r), _neg_terms(_mono_mul_terms(_mul_terms(lr, b), tuple(shift), Fraction(1))))
        if r:
            c = _content(r)
            if c != 1:
                r = {exp: coef / c for exp, coef in r.items()}
    return r


def _content_v(a: dict, v: int) -> dict:
    """Gcd of the coefficients of a viewed as univariate in v (primitive)."""
    coeffs = {}
    for exp, c in a.items():
        e = list(exp)
        d = e[v]
        e[v] = 0
        key = tuple(e)
        bucket = coeffs.setdefault(d, {})
        bucket[key] = c
    acc = None
    for d in sorted(coeffs):
        acc = coeffs[d] if acc is None else _gcd_terms(acc, coeffs[d])
        if len(acc) == 1 and not any(_leading(acc)):
            break  # gcd already 1
    return _primitive(acc)


_ONE_CACHE: dict = {}


def _one_terms(width: int) -> dict:
    t = _ONE_CACHE.get(width)
    if t is None:
        t = {(0,) * width: Fraction(1)}
        _ONE_CACHE[width] = t
    return dict(t)


_CERT_PRIMES = (2147483629, 2147483587, 2147483563)


def _umod_gcd_degree(p1: list, p2: list, p: int) -> int:
    """Degree of gcd of two univariate polynomials over GF(p)."""
    while p2:
        while p2 and p2[-1] % p == 0:
            p2.pop()
        if not p2:
            break
        inv = pow(p2[-1], p - 2, p)
        while len(p1) >= len(p2):
            if p1[-1]:
                f = p1[-1] * inv % p
                off = len(p1) - len(p2)
                for i in range(len(p2) - 1):
                    p1[off + i] = (p1[off + i] - f * p2[i]) % p
            p1.pop()
        p1, p2 = p2, p1
    return len(p1) - 1


def _var_images(terms: dict, v: int, pts: list, p: int) -> Optional[list]:
    """Specialize all variables but v at pts (mod p); None if a coefficient
    denominator vanishes mod p."""
    deg = _deg_v(terms, v)
    img = [0] * (deg + 1)
    for exp, c in terms.items():
        den = c.denominator % p
        if den == 0:
            return None
        m = (c.numerator % p) * pow(den, p - 2, p) % p
        for j, e in enumerate(exp):
            if e and j != v:
                m = m * pow(pts[j], e, p) % p
        img[exp[v]] = (img[exp[v]] + m) % p
    return img


def _certify_coprime(a: dict, b: dict, active: list) -> bool:
    """True when gcd(a, b) is certified constant: for every variable v, a
    specialization of the remaining variables over GF(p) that preserves the
    v-degree of a yields coprime univariate images.  Inconclusive cases
    return False and fall through to the PRS."""
    for p_index, p in enumerate(_CERT_PRIMES):
        for attempt in range(3):
            x = 0x5DEECE66D + p_index * 7919 + attempt * 104729
            pts = []
            for _ in range(len(next(iter(a)))):
                x = (x * 1103515245 + 12345) % (1 << 31)
                pts.append(2 + x % (p - 3))
            ok = True
            for v in active:
                img_a = _var_images(a, v, pts, p)
                img_b = _var_images(b, v, pts, p)
                if img_a is None or img_b is None:
                    ok = None  # bad prime for these coefficients
                    break
                if img_a[-1] == 0 or not any(img_b):
                    ok = False  # degree collapsed; retry with another point
                    break
                if _umod_gcd_degree(img_a, img_b, p) > 0:
                    return False  # possibly a real common factor
            if ok:
                return True
            if ok is None:
                break  # try the next prime
    return False


def _try_exact_div(a: dict, d: dict) -> Optional[dict]:
    try:
        return _exact_div(a, d)
    except ArithmeticError:
        return None


def _gcd_terms(a: dict, b: dict) -> dict:
    """Primitive gcd (positive leading coefficient).

    Layered for speed: trivial and monomial cases first, then a certified
    GF(p) coprimality test (the common case in cancellation-heavy work), an
    exact-division shortcut, and finally a primitive PRS on the variable of
    least degree.
    """
    if not a:
        return _primitive(b)
    if not b:
        return _primitive(a)
    width = len(next(iter(a)))
    if a == b:
        return _primitive(a)
    if len(a) == 1 or len(b) == 1:
        exp = tuple(
            min(min(e[v] for e in a), min(e[v] for e in b)) for v in range(width)
        )
        return {exp: Fraction(1)}

    # split off monomial content: gcd(m_a a', m_b b') = gcd(m_a, m_b) gcd(a', b')
    mono_a = tuple(min(e[v] for e in a) for v in range(width))
    mono_b = tuple(min(e[v] for e in b) for v in range(width))
    common = tuple(min(x, y) for x, y in zip(mono_a, mono_b))
    if any(mono_a) or any(mono_b):
        a = {tuple(x - y for x, y in zip(exp, mono_a)): c for exp, c in a.items()}
        b = {tuple(x - y for x, y in zip(exp, mono_b)): c for exp, c in b.items()}
    inner = _gcd_core(a, b, width)
    if any(common):
        inner = _mono_mul_terms(inner, common, Fraction(1))
    return inner


def _gcd_core(a: dict, b: dict, width: int) -> dict:
    shared = [
        v
        for v in range(width)
        if any(e[v] for e in a) and any(e[v] for e in b)
    ]
    if not shared:
        # monomial-content-free with no shared variable: no common factor
        return _one_terms(width)
    if len(a) + len(b) > 16:
        active = sorted(
            set(v for e in a for v in range(width) if e[v])
            | set(v for e in b for v in range(width) if e[v])
        )
        if _certify_coprime(a, b, active):
            return _one_terms(width)
        if len(a) >= len(b) and _try_exact_div(a, b) is not None:
            return _primitive(b)
        if len(b) >= len(a) and _try_exact_div(b, a) is not None:
            return _primitive(a)

    v = min(shared, key=lambda u: _deg_v(a, u) * _deg_v(b, u))
    ca = _content_v(a, v)
    cb = _content_v(b, v)
    c = _gcd_terms(ca, cb)
    f = _exact_div(a, ca)
    g = _exact_div(b, cb)
    if _deg_v(f, v) < _deg_v(g, v):
        f, g = g, f
    while True:
        r = _prem(f, g, v)
        if not r:
            pp = g
            break
        r = _exact_div(r, _content_v(r, v))
        if _deg_v(r, v) == 0:
            pp = _one_terms(width)
            break
        f, g = g, r
    return _primitive(_mul_terms(c, pp))


class Polynomial:
    """Sparse multivariate polynomial over Q with a fixed symbol table."""

    __slots__ = ("symbols", "terms")

    def __init__(self, symbols: Symbols, terms: dict):
        self.symbols = symbols
        self.terms = terms

    @classmethod
    def const(cls, symbols: Symbols, value: RationalLike) -> "Polynomial":
        value = Fraction(value)
        if not value:
            return cls(symbols, {})
        return cls(symbols, {(0,) * symbols.nvars: value})

    @classmethod
    def var(cls, symbols: Symbols, index: int) -> "Polynomial":
        exp = [0] * symbols.nvars
        exp[index] = 1
        return cls(symbols, {tuple(exp): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get((0,) * self.symbols.nvars) == 1

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(exp) for exp in self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.symbols == other.symbols
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.symbols, frozenset(self.terms.items())))

    def _check(self, other: "Polynomial") -> None:
        if self.symbols != other.symbols:
            raise ValueError("polynomials belong to different symbol tables")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        return Polynomial(self.symbols, _add_terms(self.terms, other.terms))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        return Polynomial(self.symbols, _add_terms(self.terms, _neg_terms(other.terms)))

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.symbols, _neg_terms(self.terms))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        return Polynomial(self.symbols, _mul_terms(self.terms, other.terms))

    def evaluate(self, values: Sequence[Fraction]) -> Fraction:
        total = Fraction(0)
        for exp, c in self.terms.items():
            term = c
            for v, e in zip(values, exp):
                if e:
                    term *= v**e
            total += term
        return total

    def used_indices(self) -> set:
        used = set()
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    used.add(i)
        return used

    def render(self) -> str:
        return _render_terms(self.terms, self.symbols.names)

    def __repr__(self) -> str:
        return f"Polynomial({self.render()})"


def _render_terms(terms: dict, names: Sequence[str]) -> str:
    if not terms:
        return "0"
    pieces = []
    for exp in sorted(terms, key=_grlex_key, reverse=True):
        c = terms[exp]
        factors = []
        for name, e in zip(names, exp):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        pieces.append(("-" if c < 0 else "+", body))
    sign, body = pieces[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


class Scalar:
    """Canonical fraction of two Polynomials; immutable value type.

    Structural equality is mathematical equality, which the verifier relies on
    throughout: an identity holds exactly iff its residual Scalar is the zero
    Scalar.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial, _canonical: bool = False):
        if not _canonical:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_fraction(cls, symbols: Symbols, value: RationalLike) -> "Scalar":
        return symbols.rational(value)

    # -- predicates ----------------------------------------------------------

    @property
    def symbols(self) -> Symbols:
        return self.num.symbols

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_rational(self) -> bool:
        """True when the value is a plain rational constant."""
        return self.den.is_one() and self.num.total_degree() == 0

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self.render()} is not a rational constant")
        if self.num.is_zero():
            return Fraction(0)
        return next(iter(self.num.terms.values()))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.symbols.rational(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    # -- field operations ----------------------------------------------------

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction)):
            return self.symbols.rational(other)
        raise TypeError(f"cannot combine Scalar with {type(other).__name__}")

    def __add__(self, other) -> "Scalar":
        other = self._coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            return Scalar(self.num + other.num, self.den)
        g = Polynomial(self.den.symbols, _gcd_terms(self.den.terms, other.den.terms))
        if g.is_one():
            num = self.num * other.den + other.num * self.den
            den = self.den * other.den
        else:
            da = Polynomial(g.symbols, _exact_div(self.den.terms, g.terms))
            db = Polynomial(g.symbols, _exact_div(other.den.terms, g.terms))
            num = self.num * db + other.num * da
            den = self.den * db
        return Scalar(num, den)

    def __radd__(self, other) -> "Scalar":
        return self.__add__(other)

    def __neg__(self) -> "Scalar":
        return Scalar(-self.num, self.den, _canonical=True)

    def __sub__(self, other) -> "Scalar":
        return self.__add__(-self._coerce(other))

    def __rsub__(self, other) -> "Scalar":
        return (-self).__add__(other)

    def __mul__(self, other) -> "Scalar":
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return self.symbols.zero()
        # inputs are canonical, so cancelling the two cross gcds suffices
        g1 = _gcd_terms(self.num.terms, other.den.terms)
        g2 = _gcd_terms(other.num.terms, self.den.terms)
        n1 = self.num.terms if _is_one_terms(g1) else _exact_div(self.num.terms, g1)
        d2 = other.den.terms if _is_one_terms(g1) else _exact_div(other.den.terms, g1)
        n2 = other.num.terms if _is_one_terms(g2) else _exact_div(other.num.terms, g2)
        d1 = self.den.terms if _is_one_terms(g2) else _exact_div(self.den.terms, g2)
        num = Polynomial(self.symbols, _mul_terms(n1, n2))
        den = Polynomial(self.symbols, _mul_terms(d1, d2))
        return Scalar(*_normalize_units(num, den), _canonical=True)

    def __rmul__(self, other) -> "Scalar":
        return self.__mul__(other)

    def inv(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("zero scalar has no inverse")
        num, den = _normalize_units(self.den, self.num)
        return Scalar(num, den, _canonical=True)

    def __truediv__(self, other) -> "Scalar":
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other) -> "Scalar":
        return self._coerce(other) * self.inv()

    def __pow__(self, n: int) -> "Scalar":
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.inv() ** (-n)
        out = self.symbols.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    # -- evaluation and rendering ---------------------------------------------

    def evaluate(self, assignment: Mapping[str, RationalLike]) -> Fraction:
        """Exact rational value at the assignment; every symbol occurring in
        the scalar must be assigned."""
        values = [None] * self.symbols.nvars
        for name, value in assignment.items():
            values[self.symbols.index_of(name)] = Fraction(value)
        used = self.num.used_indices() | self.den.used_indices()
        missing = [self.symbols.names[i] for i in sorted(used) if values[i] is None]
        if missing:
            raise ValueError(f"assignment missing symbols: {', '.join(missing)}")
        values = [v if v is not None else Fraction(0) for v in values]
        den = self.den.evaluate(values)
        if den == 0:
            raise SingularEvaluation(f"denominator {self.den.render()} vanishes at the assignment")
        return self.num.evaluate(values) / den

    def render(self) -> str:
        if self.den.is_one():
            return self.num.render()
        return f"({self.num.render()})/({self.den.render()})"

    def __repr__(self) -> str:
        return f"Scalar({self.render()})"


def _is_one_terms(t: dict) -> bool:
    return len(t) == 1 and not any(next(iter(t))) and next(iter(t.values())) == 1


def _normalize_units(num: Polynomial, den: Polynomial):
    """Scale a coprime num/den pair so den is primitive with positive lead."""
    c = _content(den.terms)
    if den.terms[_leading(den.terms)] < 0:
        c = -c
    if c == 1:
        return num, den
    inv = 1 / c
    return (
        Polynomial(num.symbols, _scale_terms(num.terms, inv)),
        Polynomial(den.symbols, _scale_terms(den.terms, inv)),
    )


def _normalize(num: Polynomial, den: Polynomial):
    if num.symbols != den.symbols:
        raise ValueError("numerator and denominator use different symbol tables")
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return Polynomial.const(num.symbols, 0), Polynomial.const(num.symbols, 1)
    g = _gcd_terms(num.terms, den.terms)
    if not _is_one_terms(g):
        num = Polynomial(num.symbols, _exact_div(num.terms, g))
        den = Polynomial(den.symbols, _exact_div(den.terms, g))
    return _normalize_units(num, den)


def scalar_sum(symbols: Symbols, parts: Iterable[Scalar]) -> Scalar:
    """Sum many Scalars over one common denominator, cancelling once at the
    end.  In identity checks the numerator usually collapses to zero, which
    makes this much cheaper than folding with pairwise addition."""
    parts = [p for p in parts if not p.is_zero()]
    if not parts:
        return symbols.zero()
    if len(parts) == 1:
        return parts[0]
    den = parts[0].den.terms
    cofactors = [_one_terms(symbols.nvars)]
    for p in parts[1:]:
        g = _gcd_terms(den, p.den.terms)
        extra = p.den.terms if _is_one_terms(g) else _exact_div(p.den.terms, g)
        if not _is_one_terms(extra):
            cofactors = [_mul_terms(cf, extra) for cf in cofactors]
        cofactors.append(_exact_div(den, g) if not _is_one_terms(g) else dict(den))
        den = _mul_terms(den, extra)
    num: dict = {}
    for p, cf in zip(parts, cofactors):
        num = _add_terms(num, _mul_terms(p.num.terms, cf))
    return Scalar(Polynomial(symbols, num), Polynomial(symbols, den))


# ---------------------------------------------------------------------------
# Expression parser.  Grammar (whitespace insignificant):
#   expr   := term (('+'|'-') term)*
#   term   := factor (('*'|'/') factor)*
#   factor := rational | symbol | '(' expr ')' | '-' factor | factor '^' uint
#   rational := int ('/' uint)?
# ---------------------------------------------------------------------------


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self._skip_ws()
        if self.pos >= len(self.text):
            return ("end", None, self.pos)
        ch = self.text[self.pos]
        if ch.isdigit():
            j = self.pos
            while j < len(self.text) and self.text[j].isdigit():
                j += 1
            return ("int", int(self.text[self.pos : j]), self.pos)
        if ch.isalpha() or ch == "_":
            j = self.pos
            while j < len(self.text) and (self.text[j].isalnum() or self.text[j] == "_"):
                j += 1
            return ("name", self.text[self.pos : j], self.pos)
        if ch in "+-*/^()":
            return (ch, ch, self.pos)
        raise ParseError(f"unexpected character {ch!r}", self.pos)

    def next(self):
        kind, value, pos = self.peek()
        if kind == "int":
            while self.pos < len(self.text) and self.text[self.pos].isspace():
                self.pos += 1
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
        elif kind == "name":
            while self.pos < len(self.text) and self.text[self.pos].isspace():
                self.pos += 1
            while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
                self.pos += 1
        elif kind != "end":
            self._skip_ws()
            self.pos += 1
        return (kind, value, pos)


class _Parser:
    def __init__(self, text: str, symbols: Symbols):
        self.toks = _Tokenizer(text)
        self.symbols = symbols

    def parse(self) -> Scalar:
        value = self._expr()
        kind, _, pos = self.toks.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {kind!r}", pos)
        return value

    def _expr(self) -> Scalar:
        value = self._term()
        while True:
            kind, _, _ = self.toks.peek()
            if kind == "+":
                self.toks.next()
                value = value + self._term()
            elif kind == "-":
                self.toks.next()
                value = value - self._term()
            else:
                return value

    def _term(self) -> Scalar:
        value = self._factor()
        while True:
            kind, _, pos = self.toks.peek()
            if kind == "*":
                self.toks.next()
                value = value * self._factor()
            elif kind == "/":
                self.toks.next()
                rhs = self._factor()
                if rhs.is_zero():
                    raise ParseError("division by the zero polynomial", pos)
                value = value / rhs
            else:
                return value

    def _factor(self) -> Scalar:
        kind, value, pos = self.toks.peek()
        if kind == "-":
            self.toks.next()
            return -self._factor()
        if kind == "int":
            self.toks.next()
            base = self.symbols.rational(value)
        elif kind == "name":
            self.toks.next()
            try:
                base = self.symbols.sym(value)
            except KeyError:
                raise ParseError(f"unknown symbol {value!r}", pos) from None
        elif kind == "(":
            self.toks.next()
            base = self._expr()
            kind, _, pos = self.toks.peek()
            if kind != ")":
                raise ParseError("expected ')'", pos)
            self.toks.next()
        else:
            raise ParseError(f"expected a factor, found {kind!r}", pos)
        while True:
            kind, _, pos = self.toks.peek()
            if kind != "^":
                return base
            self.toks.next()
            kind, exponent, pos = self.toks.peek()
            if kind != "int":
                raise ParseError("exponent must be an unsigned integer", pos)
            self.toks.next()
            base = base**exponent


def parse_scalar(expr: str, symbols: Symbols) -> Scalar:
    """Parse an expression into a canonical Scalar.

    Raises ParseError (position-annotated) on syntax errors, unknown symbols
    and division by the zero polynomial.
    """
    return _Parser(expr, symbols).parse()
