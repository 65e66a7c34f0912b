"""Finitely supported elements of the semigroup algebra and weighted norms.

An element ``a = sum a_s delta_s`` is stored as a finite coefficient map.
Its norm for a length function ``l`` is ``sum |a_s| * base**l(s)``.
"""
from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Callable

from .core import Element, MultiplicationOracle, SemigroupError
from .length import TOL, LengthTable, OutsideBall

PRUNE = 1e-15


class SupportOutsideBall(OutsideBall):
    pass


class ZeroOperand(SemigroupError, ValueError):
    pass


class DomainMismatch(SemigroupError, ValueError):
    pass


class NotComplete(SemigroupError, ValueError):
    pass


def _key(x):
    return x.key if isinstance(x, Element) else x


def _check_base(base):
    if not base > 1:
        raise ValueError(f"norm base must be > 1, got {base!r}")


class AlgebraElement(Mapping):
    """Immutable finitely supported map ``Element -> complex``.

    Coefficients with modulus below 1e-15 are dropped on construction.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
            for s, v in items:
                k = _key(s)
                c[k] = c.get(k, 0j) + complex(v)
        self._c = {k: v for k, v in c.items() if abs(v) >= PRUNE}

    @classmethod
    def delta(cls, s, coeff=1.0) -> "AlgebraElement":
        return cls({_key(s): coeff})

    @classmethod
    def zero(cls) -> "AlgebraElement":
        return cls()

    def __getitem__(self, s):
        return self._c.get(_key(s), 0j)

    def __iter__(self):
        return (Element(k) for k in self._c)

    def __len__(self):
        return len(self._c)

    def __contains__(self, s):
        return _key(s) in self._c

    @property
    def support(self) -> frozenset:
        return frozenset(Element(k) for k in self._c)

    def raw_items(self):
        return self._c.items()

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0j) + v
        return AlgebraElement(c)

    def __neg__(self):
        return AlgebraElement({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, AlgebraElement):
            return NotImplemented
        return AlgebraElement({k: scalar * v for k, v in self._c.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self._c == other._c
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def isclose(self, other: "AlgebraElement", tol: float = 1e-9) -> bool:
        keys = set(self._c) | set(other._c)
        return all(abs(self._c.get(k, 0j) - other._c.get(k, 0j)) <= tol for k in keys)

    def __repr__(self):
        body = " + ".join(f"{v!r}*d[{k!r}]" for k, v in self._c.items())
        return f"AlgebraElement({body or '0'})"


def convolve(a: AlgebraElement, b: AlgebraElement, oracle: MultiplicationOracle) -> AlgebraElement:
    """``(a*b)_u = sum over s*t == u of a_s * b_t``."""
    mul = oracle.mul
    for k in list(a._c) + list(b._c):
        oracle.validate(k)
    out: dict = {}
    for s, x in a._c.items():
        for t, y in b._c.items():
            u = mul(s, t)
            out[u] = out.get(u, 0j) + x * y
    return AlgebraElement(out)


def _weight(table: LengthTable, k, base):
    try:
        ell = table.length(k)
    except OutsideBall:
        raise SupportOutsideBall(f"support element {k!r} is not in the length ball") from None
    return base ** float(ell)


def norm_of(a: AlgebraElement, table: LengthTable, base: float = math.e) -> float:
    """``sum |a_s| * base**l(s)`` (compensated summation)."""
    _check_base(base)
    return math.fsum(abs(v) * _weight(table, k, base) for k, v in a._c.items())


def submultiplicativity_ratio(a: AlgebraElement, b: AlgebraElement, table: LengthTable,
                              oracle: MultiplicationOracle | None = None,
                              base: float = math.e) -> float:
    """``||a*b|| / (||a|| * ||b||)``; at most 1 for a length function."""
    oracle = oracle or table.oracle
    if not a or not b:
        raise ZeroOperand("submultiplicativity ratio needs non-zero operands")
    na = norm_of(a, table, base)
    nb = norm_of(b, table, base)
    nab = norm_of(convolve(a, b, oracle), table, base)
    return nab / (na * nb)


@dataclass(frozen=True)
class NormComparison:
    """Optimal constants with ``lower*||a||_1 <= ||a||_2 <= upper*||a||_1``
    on the compared set, and the point masses attaining them."""

    lower: float
    upper: float
    lower_at: Element
    upper_at: Element

    def sandwich(self, n1: float, n2: float, tol: float = TOL) -> bool:
        return self.lower * n1 <= n2 * (1 + tol) + tol and n2 <= self.upper * n1 * (1 + tol) + tol


def comparison_constants(table1: LengthTable, table2: LengthTable,
                         base: float = math.e) -> NormComparison:
    """Best constants comparing the norms of two complete tables over the
    same finite set: the extremes of ``base**(l_2(s) - l_1(s))``."""
    _check_base(base)
    for t in (table1, table2):
        if not t.complete_to_radius:
            raise NotComplete("comparison needs complete tables")
    k1, k2 = set(table1.keys()), set(table2.keys())
    if k1 != k2:
        raise DomainMismatch(f"tables differ on {len(k1 ^ k2)} element(s)")
    if not k1:
        raise DomainMismatch("tables are empty")
    sk = table1.oracle.sort_key
    diffs = sorted(((table2.length(k) - table1.length(k), sk(k), k) for k in k1),
                   key=lambda r: (r[0], r[1]))
    lo = diffs[0]
    top = diffs[-1][0]
    hi = next(r for r in diffs if r[0] == top)
    return NormComparison(base ** float(lo[0]), base ** float(hi[0]), Element(lo[2]), Element(hi[2]))


def partial_norm(coeff_rule: Mapping | Callable, table: LengthTable,
                 base: float = math.e) -> tuple[float, int]:
    """Partial sum of the norm series of an infinitely supported element
    over the settled elements of ``table``.  No convergence claim."""
    _check_base(base)
    terms = []
    for k, e in table.items():
        if isinstance(coeff_rule, Mapping):
            c = coeff_rule.get(Element(k), coeff_rule.get(k, 0))
        else:
            c = coeff_rule(Element(k))
        terms.append(abs(complex(c)) * base ** float(e.length))
    return math.fsum(terms), len(terms)
