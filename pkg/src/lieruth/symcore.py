"""Exact multivariate polynomials over the rationals.

Smooth functions on a coordinate chart are modelled by polynomials in the
chart coordinates.  Coefficients are :class:`fractions.Fraction`, so every
identity checked downstream is checked with zero tolerance.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import PolyParseError, StructureError, UnknownIdentifierError

Rat = Fraction

__all__ = ["Rat", "Poly", "parse_poly", "poly_arith", "partial", "grlex_key"]


def grlex_key(exponents):
    return (sum(exponents), exponents)


def _as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as a rational coefficient")


class Poly:
    """Immutable polynomial with rational coefficients.

    ``terms`` maps exponent tuples (one entry per variable) to nonzero
    fractions.  Two polynomials over the same variables are equal iff their
    term maps are equal, and :meth:`terms` lists them in a fixed graded-lex
    order, so printing is canonical.
    """

    __slots__ = ("variables", "_terms", "_hash")

    def __init__(self, variables: Sequence[str] = (), terms: Mapping | None = None, *, _trusted=False):
        self.variables = variables if isinstance(variables, tuple) else tuple(variables)
        if terms is None:
            self._terms = {}
        elif _trusted:
            self._terms = terms
        else:
            m = len(self.variables)
            clean = {}
            for exps, coeff in terms.items():
                exps = tuple(exps)
                if len(exps) != m or any(e < 0 for e in exps):
                    raise StructureError(f"exponent vector {exps} does not fit variables {self.variables}")
                coeff = _as_fraction(coeff)
                if coeff:
                    clean[exps] = clean.get(exps, 0) + coeff
            self._terms = {k: v for k, v in clean.items() if v}
        self._hash = None

    # construction helpers

    @classmethod
    def constant(cls, variables, value=1):
        variables = tuple(variables)
        value = _as_fraction(value)
        if not value:
            return cls(variables)
        return cls(variables, {(0,) * len(variables): value}, _trusted=True)

    @classmethod
    def zero(cls, variables):
        return cls(tuple(variables))

    @classmethod
    def one(cls, variables):
        return cls.constant(variables, 1)

    @classmethod
    def var(cls, variables, index: int):
        variables = tuple(variables)
        if not 0 <= index < len(variables):
            raise IndexError(f"variable index {index} out of range for {variables}")
        exps = [0] * len(variables)
        exps[index] = 1
        return cls(variables, {tuple(exps): Fraction(1)}, _trusted=True)

    @classmethod
    def coordinates(cls, variables):
        variables = tuple(variables)
        return tuple(cls.var(variables, i) for i in range(len(variables)))

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.variables is not self.variables and other.variables != self.variables:
                raise StructureError(
                    f"variable lists differ: {self.variables} vs {other.variables}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.variables, other)
        return NotImplemented

    # inspection

    def terms(self):
        """Terms as ``(exponents, coefficient)`` pairs in descending graded-lex order."""
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    @property
    def term_map(self):
        return dict(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((0,) * len(self.variables), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * len(self.variables), Fraction(0))

    def degree(self):
        return max((sum(e) for e in self._terms), default=-1)

    def __len__(self):
        return len(self._terms)

    # arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k)
            if s is None:
                out[k] = v
            else:
                s += v
                if s:
                    out[k] = s
                else:
                    del out[k]
        return Poly(self.variables, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.variables, {k: -v for k, v in self._terms.items()}, _trusted=True)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly(self.variables)
            return Poly(self.variables, {k: v * other for k, v in self._terms.items()}, _trusted=True)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return Poly(self.variables)
        a, b = self._terms, other._terms
        if len(a) == 1 and not any(next(iter(a))):
            return other * next(iter(a.values()))
        if len(b) == 1 and not any(next(iter(b))):
            return self * next(iter(b.values()))
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(e)
                out[e] = ca * cb if s is None else s + ca * cb
        return Poly(self.variables, {k: v for k, v in out.items() if v}, _trusted=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Poly.one(self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.variables == other.variables and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self._terms.items())))
        return self._hash

    # calculus and evaluation

    def partial(self, index: int) -> "Poly":
        if not 0 <= index < len(self.variables):
            raise IndexError(f"coordinate index {index} out of range for {self.variables}")
        out = {}
        for e, c in self._terms.items():
            k = e[index]
            if k:
                ne = e[:index] + (k - 1,) + e[index + 1:]
                out[ne] = c * k
        return Poly(self.variables, out, _trusted=True)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != len(self.variables):
            raise StructureError("evaluation point has the wrong dimension")
        point = [_as_fraction(p) for p in point]
        total = Fraction(0)
        for e, c in self._terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t *= x ** k
            total += t
        return total

    def with_variables(self, variables) -> "Poly":
        """Re-express over a variable list that contains all current variables."""
        variables = tuple(variables)
        index = {name: i for i, name in enumerate(variables)}
        try:
            positions = [index[v] for v in self.variables]
        except KeyError as exc:
            raise StructureError(f"variable {exc.args[0]!r} missing from {variables}") from None
        out = {}
        for e, c in self._terms.items():
            ne = [0] * len(variables)
            for p, k in zip(positions, e):
                ne[p] = k
            out[tuple(ne)] = c
        return Poly(variables, out, _trusted=True)

    # printing

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for e, c in self.terms():
            mono = "*".join(
                name if k == 1 else f"{name}^{k}"
                for name, k in zip(self.variables, e) if k)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({str(self)!r}, {self.variables})"


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    if not isinstance(a, Poly) or not isinstance(b, Poly):
        raise StructureError("poly_arith expects two Poly operands")
    if a.variables != b.variables:
        raise StructureError(f"variable lists differ: {a.variables} vs {b.variables}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def partial(p: Poly, index: int) -> Poly:
    return p.partial(index)


# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("ident", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise PolyParseError(f"unexpected character {ch!r}", text, m.start(3))
            tokens.append(("op", ch, m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, variables):
        self.text = text
        self.variables = tuple(variables)
        self.index = {name: i for i, name in enumerate(self.variables)}
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return PolyParseError(message, self.text, tok[2])

    def expect(self, value):
        tok = self.take()
        if tok[0] != "op" or tok[1] != value:
            raise self.error(f"expected {value!r}", tok)

    def parse(self):
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self):
        sign = 1
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        p = self.term() * sign
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                q = self.term()
                p = p + q if tok[1] == "+" else p - q
            else:
                return p

    def term(self):
        p = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            p = p * self.factor()
        return p

    def factor(self):
        p = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "int":
                raise self.error("exponent must be a non-negative integer", tok)
            p = p ** int(tok[1])
        return p

    def base(self):
        tok = self.take()
        kind, value, pos = tok
        if kind == "int":
            num = int(value)
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                den = self.take()
                if den[0] != "int":
                    raise self.error("denominator must be an unsigned integer", den)
                if int(den[1]) == 0:
                    raise self.error("zero denominator", den)
                return Poly.constant(self.variables, Fraction(num, int(den[1])))
            return Poly.constant(self.variables, num)
        if kind == "ident":
            if value not in self.index:
                raise UnknownIdentifierError(value, self.text, pos)
            return Poly.var(self.variables, self.index[value])
        if kind == "op" and value == "(":
            p = self.expr()
            self.expect(")")
            return p
        if kind == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected token {value!r}", tok)


def parse_poly(text: str, variables: Iterable[str] = ()) -> Poly:
    """Parse ``text`` as a polynomial over the declared coordinates."""
    if isinstance(text, (int, Fraction)):
        return Poly.constant(tuple(variables), text)
    if not isinstance(text, str):
        raise PolyParseError(f"expected a polynomial string, got {type(text).__name__}")
    return _Parser(text, variables).parse()
