"""Finite Laurent polynomials in N with an optional polynomial dependence on c = M/N."""
from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Mapping, Union

Number = Union[Fraction, int, float]


def _as_number(x) -> Number:
    if isinstance(x, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, float):
        return x
    try:
        import numpy as np

        if isinstance(x, np.integer):
            return Fraction(int(x))
        if isinstance(x, np.floating):
            return float(x)
    except ImportError:  # pragma: no cover
        pass
    raise TypeError(f"unsupported coefficient {x!r}")


class LaurentValue:
    """Sum of ``coef * N**n_exp * c**c_exp`` terms.

    ``terms`` maps ``(n_exp, c_exp)`` to the coefficient.  Coefficients are
    ``Fraction`` when the computation is exact and ``float`` once numeric
    data has entered.  Zero coefficients are never stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], Number] | None = None):
        clean: dict[tuple[int, int], Number] = {}
        for (n_exp, c_exp), coef in (terms or {}).items():
            if c_exp < 0:
                raise ValueError("powers of c must be nonnegative")
            coef = _as_number(coef)
            key = (int(n_exp), int(c_exp))
            total = clean.get(key, 0) + coef
            if total == 0:
                clean.pop(key, None)
            else:
                clean[key] = total
        self.terms = clean

    @classmethod
    def constant(cls, value: Number) -> "LaurentValue":
        return cls({(0, 0): value})

    @classmethod
    def monomial(cls, coef: Number = 1, n_exp: int = 0, c_exp: int = 0) -> "LaurentValue":
        return cls({(n_exp, c_exp): coef})

    def is_zero(self) -> bool:
        return not self.terms

    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.terms.values())

    def coefficient(self, n_exp: int, c_exp: int = 0) -> Number:
        return self.terms.get((n_exp, c_exp), Fraction(0))

    def constant_term(self) -> "LaurentValue":
        """The N⁰ part, still a polynomial in c."""
        return LaurentValue({k: v for k, v in self.terms.items() if k[0] == 0})

    def max_n_exponent(self) -> int | None:
        return max((k[0] for k in self.terms), default=None)

    def shift(self, n_exp: int) -> "LaurentValue":
        """Multiply by N**n_exp."""
        return LaurentValue({(a + n_exp, b): v for (a, b), v in self.terms.items()})

    def substitute_c(self, c: Number) -> "LaurentValue":
        out: dict[tuple[int, int], Number] = {}
        for (a, b), v in self.terms.items():
            out[(a, 0)] = out.get((a, 0), 0) + v * _as_number(c) ** b
        return LaurentValue(out)

    def evaluate(self, N: Number, c: Number | None = None) -> Number:
        total: Number = Fraction(0)
        N = _as_number(N)
        for (a, b), v in self.terms.items():
            if b and c is None:
                raise ValueError("value depends on c; pass c")
            term = v * N**a
            if b:
                term *= _as_number(c) ** b
            total += term
        return total

    def as_number(self) -> Number:
        """The value when it is a bare constant."""
        if any(k != (0, 0) for k in self.terms):
            raise ValueError(f"{self} is not a constant")
        return self.coefficient(0, 0)

    def __add__(self, other) -> "LaurentValue":
        other = _coerce(other)
        merged = dict(self.terms)
        for k, v in other.terms.items():
            merged[k] = merged.get(k, 0) + v
        return LaurentValue(merged)

    __radd__ = __add__

    def __neg__(self) -> "LaurentValue":
        return LaurentValue({k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> "LaurentValue":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "LaurentValue":
        return _coerce(other) - self

    def __mul__(self, other) -> "LaurentValue":
        other = _coerce(other)
        out: dict[tuple[int, int], Number] = {}
        for (a1, b1), v1 in self.terms.items():
            for (a2, b2), v2 in other.terms.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0) + v1 * v2
        return LaurentValue(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"LaurentValue({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms, key=lambda k: (-k[0], k[1])):
            coef = self.terms[key]
            mono = monomial_name(*key)
            if mono == "1":
                parts.append(str(coef))
            elif mono.startswith("1/"):
                parts.append(f"{coef}{mono[1:]}")
            else:
                parts.append(f"{coef}*{mono}")
        return " + ".join(parts)

    def to_json(self) -> dict[str, object]:
        """Monomial names to coefficients; rationals become ``"p/q"`` strings."""
        out: dict[str, object] = {}
        for key in sorted(self.terms, key=lambda k: (-k[0], k[1])):
            coef = self.terms[key]
            out[monomial_name(*key)] = str(coef) if isinstance(coef, Fraction) else coef
        return out

    @classmethod
    def from_json(cls, data: Mapping[str, object]) -> "LaurentValue":
        terms = {}
        for name, coef in data.items():
            if isinstance(coef, str):
                coef = Fraction(coef)
            terms[parse_monomial(name)] = coef
        return cls(terms)


def _coerce(x) -> LaurentValue:
    if isinstance(x, LaurentValue):
        return x
    return LaurentValue.constant(_as_number(x))


def monomial_name(n_exp: int, c_exp: int) -> str:
    """``(-2, 1)`` → ``"c/N^2"``, ``(1, 0)`` → ``"N"``, ``(0, 0)`` → ``"1"``."""
    c_part = "" if c_exp == 0 else ("c" if c_exp == 1 else f"c^{c_exp}")
    if n_exp == 0:
        return c_part or "1"
    power = "N" if abs(n_exp) == 1 else f"N^{abs(n_exp)}"
    if n_exp > 0:
        return f"{c_part}*{power}" if c_part else power
    return f"{c_part or '1'}/{power}"


_MONOMIAL = re.compile(r"^(?:(1|c(?:\^(\d+))?)(?:/N(?:\^(\d+))?)?|(?:(c(?:\^(\d+))?)\*)?N(?:\^(\d+))?)$")


def parse_monomial(name: str) -> tuple[int, int]:
    m = _MONOMIAL.match(name.replace(" ", ""))
    if not m:
        raise ValueError(f"not a monomial name: {name!r}")
    head, head_pow, inv_pow, c_mul, c_mul_pow, n_pow = m.groups()
    if head is not None:
        c_exp = 0 if head == "1" else int(head_pow or 1)
        if "/N" in name:
            return (-int(inv_pow or 1), c_exp)
        return (0, c_exp)
    c_exp = 0 if c_mul is None else int(c_mul_pow or 1)
    return (int(n_pow or 1), c_exp)
