"""Exact Laurent polynomials.

QLaurent   - Laurent polynomials over Q in z-variables, z_i = q_i^(1/2).
TorusPoly  - finite sums  sum_mu c_mu x^mu  with QLaurent coefficients.
QRatio     - a quotient of two QLaurent values.

Coefficients are kept as Python ints whenever possible and as Fractions
otherwise.  Exact division is greedy leading-term elimination under the
lexicographic exponent order and raises when a remainder would be left.
"""
from __future__ import annotations

import heapq
import math
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np


class InexactDivision(ArithmeticError):
    pass


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return int(c.numerator)
    return c


def _div(a, b):
    if type(a) is int and type(b) is int and a % b == 0:
        return a // b
    return _norm(Fraction(a) / b)


def _neg_t(e):
    return tuple(-x for x in e)


def _add_t(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub_t(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _box(num_terms, den_terms):
    """Per-coordinate bounds any exact quotient must respect (Newton polytopes add)."""
    nk = list(num_terms)
    dk = list(den_terms)
    m = len(nk[0])
    lo = tuple(min(e[i] for e in nk) - min(e[i] for e in dk) for i in range(m))
    hi = tuple(max(e[i] for e in nk) - max(e[i] for e in dk) for i in range(m))
    return lo, hi


def _inside(e, lo, hi) -> bool:
    return all(a <= x <= b for x, a, b in zip(e, lo, hi))


def fmt_rational(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if not isinstance(s, str):
        raise ValueError(f"expected an exact rational string, got {s!r}")
    return Fraction(s.strip())


# ---------------------------------------------------------------------------
# square roots of rationals, used by exact evaluation
# ---------------------------------------------------------------------------

def _isqrt_exact(n: int):
    r = math.isqrt(n)
    return r if r * r == n else None


def _squarefree_split(n: int) -> tuple[int, int]:
    """n = s^2 * r with r squarefree; returns (s, r).  Trial division, n small."""
    s, r, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            r *= p
        p += 1
    return s, r * n


def sqrt_rational(x: Fraction) -> tuple[Fraction, int]:
    """sqrt(x) = a * sqrt(r) with a rational, r a squarefree integer."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("square root of a negative rational")
    if x == 0:
        return Fraction(0), 1
    # sqrt(p/q) = sqrt(p q) / q
    s, r = _squarefree_split(x.numerator * x.denominator)
    return Fraction(s, x.denominator), r


class QLaurent:
    """Laurent polynomial in nvars commuting variables with rational coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping | None = None, _clean: bool = False):
        self.nvars = nvars
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            self.terms = {tuple(e): _norm(Fraction(c) if not isinstance(c, int) else c)
                          for e, c in terms.items() if c != 0}

    # ---- constructors ----
    @classmethod
    def const(cls, nvars: int, c=1) -> "QLaurent":
        c = _norm(Fraction(c)) if not isinstance(c, int) else c
        return cls(nvars, {(0,) * nvars: c} if c != 0 else {}, _clean=True)

    @classmethod
    def monomial(cls, exps, c=1) -> "QLaurent":
        exps = tuple(int(e) for e in exps)
        return cls(len(exps), {exps: c} if c != 0 else {})

    # ---- predicates ----
    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_one(self) -> bool:
        return self.terms == {(0,) * self.nvars: 1}

    def monomial_data(self):
        if len(self.terms) != 1:
            raise ValueError("not a monomial")
        (e, c), = self.terms.items()
        return e, c

    # ---- arithmetic ----
    def _coerce(self, other) -> "QLaurent":
        if isinstance(other, QLaurent):
            return other
        return QLaurent.const(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for e, c in small.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = _norm(v)
            else:
                out.pop(e, None)
        return QLaurent(self.nvars, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return QLaurent(self.nvars, {e: -c for e, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, QLaurent):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            if other == 0:
                return QLaurent(self.nvars)
            other = _norm(Fraction(other)) if not isinstance(other, int) else other
            return QLaurent(self.nvars, {e: _norm(c * other) for e, c in self.terms.items()},
                            _clean=True)
        if len(other.terms) == 1:
            (e2, c2), = other.terms.items()
            return self.mul_monomial(e2, c2)
        if len(self.terms) == 1:
            (e1, c1), = self.terms.items()
            return other.mul_monomial(e1, c1)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return QLaurent(self.nvars, {e: _norm(c) for e, c in out.items() if c != 0}, _clean=True)

    __rmul__ = __mul__

    def mul_monomial(self, exps, c=1) -> "QLaurent":
        if c == 0:
            return QLaurent(self.nvars)
        if c == 1:
            return QLaurent(self.nvars, {tuple(a + b for a, b in zip(e, exps)): v
                                         for e, v in self.terms.items()}, _clean=True)
        return QLaurent(self.nvars, {tuple(a + b for a, b in zip(e, exps)): _norm(v * c)
                                     for e, v in self.terms.items()}, _clean=True)

    def __pow__(self, k: int):
        if k < 0:
            e, c = self.monomial_data()
            return QLaurent(self.nvars, {tuple(k * x for x in e): _norm(Fraction(c) ** k)},
                            _clean=True)
        out = QLaurent.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse_monomial(self) -> "QLaurent":
        return self ** -1

    def substitute_inverse(self) -> "QLaurent":
        """p(z) -> p(1/z)."""
        return QLaurent(self.nvars, {_neg_t(e): c for e, c in self.terms.items()}, _clean=True)

    def __eq__(self, other):
        if isinstance(other, QLaurent):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == QLaurent.const(self.nvars, other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # ---- division ----
    def divide_exact(self, den: "QLaurent") -> "QLaurent":
        """Quotient q with q * den == self; raises InexactDivision otherwise."""
        if den.is_zero():
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if self.is_zero():
            return QLaurent(self.nvars)
        if len(den.terms) == 1:
            (e, c), = den.terms.items()
            ne = _neg_t(e)
            return QLaurent(self.nvars, {_add_t(k, ne): _div(v, c) for k, v in self.terms.items()},
                            _clean=True)
        d_lead = max(den.terms)
        c_lead = den.terms[d_lead]
        lo, hi = _box(self.terms, den.terms)
        rem = dict(self.terms)
        heap = [_neg_t(e) for e in rem]
        heapq.heapify(heap)
        quot: dict = {}
        while rem:
            top = _neg_t(heapq.heappop(heap))
            if top not in rem:
                continue
            qe = _sub_t(top, d_lead)
            if not _inside(qe, lo, hi):
                raise InexactDivision("Laurent division leaves a remainder")
            qc = _div(rem[top], c_lead)
            quot[qe] = qc
            for e, c in den.terms.items():
                k = _add_t(qe, e)
                v = rem.get(k, 0) - qc * c
                if v:
                    if k not in rem:
                        heapq.heappush(heap, _neg_t(k))
                    rem[k] = _norm(v)
                else:
                    rem.pop(k, None)
        return QLaurent(self.nvars, quot, _clean=True)

    def __truediv__(self, other):
        if isinstance(other, QLaurent):
            return self.divide_exact(other)
        return self * (Fraction(1) / Fraction(other))

    # ---- evaluation ----
    def evaluate(self, zvals) -> float:
        tot = 0.0
        for e, c in self.terms.items():
            t = float(c)
            for z, k in zip(zvals, e):
                if k:
                    t *= z ** k
            tot += t
        return tot

    def evaluate_exact(self, qvals) -> Fraction:
        """Exact value at z_i = sqrt(q_i) for rational q_i.

        Raises ValueError if the value is irrational.
        """
        roots = [sqrt_rational(Fraction(q)) for q in qvals]
        acc: dict = {}
        for e, c in self.terms.items():
            val = Fraction(c)
            rad = 1
            for (a, r), q, k in zip(roots, qvals, e):
                q = Fraction(q)
                half, odd = divmod(k, 2)
                val *= q ** half
                if odd:
                    val *= a
                    rad *= r
            if rad != 1:
                s, rad = _squarefree_split(rad)
                val *= s
            acc[rad] = acc.get(rad, 0) + val
        bad = {r: v for r, v in acc.items() if r != 1 and v != 0}
        if bad:
            raise ValueError("value is irrational at these parameters")
        return Fraction(acc.get(1, 0))

    # ---- text ----
    def to_text(self, names=None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"z{i}" for i in range(self.nvars)]
        parts = []
        for e in sorted(self.terms, reverse=True):
            s = fmt_rational(self.terms[e])
            for nm, k in zip(names, e):
                if k == 1:
                    s += f"*{nm}"
                elif k:
                    s += f"*{nm}^{k}"
            parts.append(s)
        return " + ".join(parts)

    @classmethod
    def from_text(cls, text: str, names) -> "QLaurent":
        n = len(names)
        idx = {nm: i for i, nm in enumerate(names)}
        out = QLaurent(n)
        text = text.strip()
        if text == "0":
            return out
        for part in text.split(" + "):
            toks = part.split("*")
            e = [0] * n
            for t in toks[1:]:
                nm, _, k = t.partition("^")
                e[idx[nm]] += int(k) if k else 1
            out = out + QLaurent.monomial(e, Fraction(toks[0]))
        return out

    def __repr__(self):
        return f"QLaurent({self.to_text()})"


class QRatio:
    """num/den with QLaurent parts; equality by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num: QLaurent, den: QLaurent | None = None):
        if den is None:
            den = QLaurent.const(num.nvars, 1)
        if den.is_zero():
            raise ZeroDivisionError("QRatio with zero denominator")
        self.num = num
        self.den = den

    def _c(self, o):
        if isinstance(o, QRatio):
            return o
        if isinstance(o, QLaurent):
            return QRatio(o)
        return QRatio(QLaurent.const(self.num.nvars, o))

    def __add__(self, o):
        o = self._c(o)
        if self.den == o.den:
            return QRatio(self.num + o.num, self.den)
        return QRatio(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return QRatio(-self.num, self.den)

    def __sub__(self, o):
        return self + (-self._c(o))

    def __mul__(self, o):
        o = self._c(o)
        return QRatio(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._c(o)
        return QRatio(self.num * o.den, self.den * o.num)

    def __eq__(self, o):
        o = self._c(o)
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        raise TypeError("QRatio is unhashable")

    def simplify(self) -> "QRatio":
        try:
            return QRatio(self.num.divide_exact(self.den))
        except InexactDivision:
            return self

    def as_laurent(self) -> QLaurent:
        return self.num.divide_exact(self.den)

    def evaluate(self, zvals) -> float:
        return self.num.evaluate(zvals) / self.den.evaluate(zvals)

    def evaluate_exact(self, qvals) -> Fraction:
        return self.num.evaluate_exact(qvals) / self.den.evaluate_exact(qvals)

    def to_text(self, names=None) -> str:
        r = self.simplify()
        if r.den.is_one():
            return r.num.to_text(names)
        return f"({r.num.to_text(names)}) / ({r.den.to_text(names)})"

    def __repr__(self):
        return f"QRatio({self.to_text()})"


# ---------------------------------------------------------------------------
# torus polynomials
# ---------------------------------------------------------------------------

class UPoint:
    """u in Hom(P, C^x), stored as u_i = u^{lambda_i}."""

    __slots__ = ("values",)

    def __init__(self, values: Iterable[complex]):
        self.values = tuple(complex(v) for v in values)

    def power(self, mu) -> complex:
        out = 1 + 0j
        for v, c in zip(self.values, mu):
            if c:
                out *= v ** c
        return out

    def __mul__(self, other: "UPoint") -> "UPoint":
        return UPoint(a * b for a, b in zip(self.values, other.values))

    def inverse(self) -> "UPoint":
        return UPoint(1 / v for v in self.values)

    def conj(self) -> "UPoint":
        return UPoint(v.conjugate() for v in self.values)


class TorusPoly:
    """sum_mu c_mu x^mu with QLaurent coefficients."""

    __slots__ = ("rank", "nz", "terms")

    def __init__(self, rank: int, nz: int, terms: Mapping | None = None):
        self.rank = rank
        self.nz = nz
        self.terms = {} if terms is None else {tuple(k): v for k, v in terms.items()
                                                if not v.is_zero()}

    @classmethod
    def _raw(cls, rank, nz, terms) -> "TorusPoly":
        p = cls.__new__(cls)
        p.rank, p.nz, p.terms = rank, nz, terms
        return p

    @classmethod
    def x(cls, mu, nz: int, coeff: QLaurent | None = None) -> "TorusPoly":
        coeff = QLaurent.const(nz, 1) if coeff is None else coeff
        return cls(len(mu), nz, {tuple(mu): coeff})

    @classmethod
    def const(cls, rank: int, nz: int, c=1) -> "TorusPoly":
        c = c if isinstance(c, QLaurent) else QLaurent.const(nz, c)
        return cls(rank, nz, {(0,) * rank: c})

    @classmethod
    def binomial(cls, c: QLaurent, d, nz: int) -> "TorusPoly":
        """1 - c x^d."""
        rank = len(d)
        return cls(rank, nz, {(0,) * rank: QLaurent.const(nz, 1), tuple(d): -c})

    def coeff(self, mu) -> QLaurent:
        return self.terms.get(tuple(mu), QLaurent(self.nz))

    coefficient = coeff

    def is_zero(self) -> bool:
        return not self.terms

    def support(self):
        return sorted(self.terms)

    def __add__(self, o: "TorusPoly") -> "TorusPoly":
        out = dict(self.terms)
        for k, v in o.terms.items():
            if k in out:
                s = out[k] + v
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = v
        return TorusPoly._raw(self.rank, self.nz, out)

    def __neg__(self):
        return TorusPoly._raw(self.rank, self.nz, {k: -v for k, v in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o) -> "TorusPoly":
        if isinstance(o, QLaurent):
            if o.is_zero():
                return TorusPoly(self.rank, self.nz)
            return TorusPoly._raw(self.rank, self.nz, {k: v * o for k, v in self.terms.items()})
        if not isinstance(o, TorusPoly):
            return self * QLaurent.const(self.nz, o)
        acc: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in o.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                p = v1 * v2
                if k in acc:
                    acc[k] = acc[k] + p
                else:
                    acc[k] = p
        return TorusPoly(self.rank, self.nz, acc)

    __rmul__ = __mul__

    def shift(self, mu) -> "TorusPoly":
        return TorusPoly._raw(self.rank, self.nz,
                              {tuple(a + b for a, b in zip(k, mu)): v for k, v in self.terms.items()})

    def __eq__(self, o):
        if not isinstance(o, TorusPoly):
            return NotImplemented
        return self.terms == o.terms

    def weyl_act(self, w) -> "TorusPoly":
        return TorusPoly._raw(self.rank, self.nz, {w.act(k): v for k, v in self.terms.items()})

    # ---- division ----
    def divide_binomial(self, c: QLaurent, d) -> "TorusPoly":
        """Exact quotient by (1 - c x^d), c a QLaurent monomial, d != 0."""
        d = tuple(d)
        p = next(i for i, v in enumerate(d) if v)
        dp = d[p]
        ce, cc = c.monomial_data()
        lines: dict = {}
        for e, v in self.terms.items():
            t = e[p] // dp
            base = tuple(a - t * b for a, b in zip(e, d))
            lines.setdefault(base, {})[t] = v
        out: dict = {}
        for base, line in lines.items():
            ts = sorted(line)
            lo, hi = ts[0], ts[-1]
            prev = None
            for t in range(lo, hi + 1):
                cur = line.get(t)
                if prev is not None:
                    carry = prev.mul_monomial(ce, cc)
                    cur = carry if cur is None else cur + carry
                if cur is None or cur.is_zero():
                    prev = None
                    continue
                if t == hi:
                    raise InexactDivision("binomial division leaves a remainder")
                out[tuple(a + t * b for a, b in zip(base, d))] = cur
                prev = cur
            # nonzero running value must vanish exactly at the top of the line
        return TorusPoly._raw(self.rank, self.nz, out)

    def exact_divide(self, den: "TorusPoly") -> "TorusPoly":
        """Greedy lex elimination with zero-remainder assertion."""
        if den.is_zero():
            raise ZeroDivisionError("division by zero torus polynomial")
        if self.is_zero():
            return TorusPoly(self.rank, self.nz)
        if len(den.terms) == 1:
            (e, c), = den.terms.items()
            ne = _neg_t(e)
            return TorusPoly._raw(self.rank, self.nz,
                                  {_add_t(k, ne): v.divide_exact(c) for k, v in self.terms.items()})
        d_lead = max(den.terms)
        c_lead = den.terms[d_lead]
        lo, hi = _box(self.terms, den.terms)
        rem = dict(self.terms)
        heap = [_neg_t(e) for e in rem]
        heapq.heapify(heap)
        quot: dict = {}
        while rem:
            top = _neg_t(heapq.heappop(heap))
            if top not in rem:
                continue
            qe = _sub_t(top, d_lead)
            if not _inside(qe, lo, hi):
                raise InexactDivision("torus division leaves a remainder")
            qc = rem[top].divide_exact(c_lead)
            quot[qe] = qc
            for e, c in den.terms.items():
                k = _add_t(qe, e)
                v = rem.get(k)
                v = -(qc * c) if v is None else v - qc * c
                if v.is_zero():
                    rem.pop(k, None)
                else:
                    if k not in rem:
                        heapq.heappush(heap, _neg_t(k))
                    rem[k] = v
        return TorusPoly._raw(self.rank, self.nz, quot)

    # ---- evaluation ----
    def eval_at(self, u: UPoint, zvals) -> complex:
        tot = 0j
        for mu, c in self.terms.items():
            tot += c.evaluate(zvals) * u.power(mu)
        return tot

    def numeric_terms(self, zvals) -> tuple[np.ndarray, np.ndarray]:
        """(exponents int64[K, n], coefficients float64[K]) at the given z values."""
        keys = sorted(self.terms)
        exps = np.array(keys, dtype=np.int64).reshape(len(keys), self.rank)
        coeffs = np.array([self.terms[k].evaluate(zvals) for k in keys], dtype=np.float64)
        return exps, coeffs

    def __repr__(self):
        inner = ", ".join(f"{k}: {v.to_text()}" for k, v in sorted(self.terms.items()))
        return f"TorusPoly({{{inner}}})"


class TorusRational:
    """numerator / denominator; reduced only by exact division."""

    __slots__ = ("num", "den")

    def __init__(self, num: TorusPoly, den: TorusPoly):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = num, den

    def reduce(self) -> TorusPoly:
        return self.num.exact_divide(self.den)

    def eval_at(self, u: UPoint, zvals) -> complex:
        d = self.den.eval_at(u, zvals)
        if abs(d) < 1e-300:
            raise ZeroDivisionError("denominator vanishes at this point")
        return self.num.eval_at(u, zvals) / d


def torus_mul(a: TorusPoly, b: TorusPoly) -> TorusPoly:
    return a * b


def exact_divide(num: TorusPoly, den: TorusPoly) -> TorusPoly:
    return num.exact_divide(den)


def weyl_act(w, p: TorusPoly) -> TorusPoly:
    return p.weyl_act(w)


def eval_at(p: TorusPoly, u: UPoint, zvals) -> complex:
    return p.eval_at(u, zvals)
