"""Exact polynomials and rational functions over Q or F_p.

Variables live in a :class:`Context`, which also records for each variable
its class (``param``, ``value`` or ``residue``) and its value in an ordered
group.  Polynomials are sparse dicts ``exponent tuple -> coefficient``;
negative exponents are allowed so the same container doubles as a Laurent
polynomial where an operation needs one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import DivisionByZero, ParseError, UnknownVariable, WrongCharacteristic
from .ordered_group import GroupElement, OrderSpec

VAR_CLASSES = ("param", "value", "residue")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The ground field: Q for characteristic 0, otherwise F_p."""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p != 0 and (not _is_prime(p) or p >= 2**16):
            raise ValueError(f"characteristic must be 0 or a prime below 2^16, got {p}")

    def coerce(self, x) -> int | Fraction:
        p = self.characteristic
        if p == 0:
            return Fraction(x)
        x = Fraction(x)
        if x.denominator % p == 0:
            raise WrongCharacteristic(f"{x} is not defined in characteristic {p}")
        return x.numerator * pow(x.denominator, -1, p) % p

    def reduce(self, c):
        return c % self.characteristic if self.characteristic else c

    def inv(self, c):
        if self.characteristic:
            c %= self.characteristic
            if c == 0:
                raise DivisionByZero("division by zero in the ground field")
            return pow(c, -1, self.characteristic)
        if c == 0:
            raise DivisionByZero("division by zero in the ground field")
        return 1 / Fraction(c)


@dataclass(frozen=True)
class VarDecl:
    name: str
    kind: str
    value: GroupElement

    def __post_init__(self):
        if not _IDENT.match(self.name):
            raise ValueError(f"invalid variable name {self.name!r}")
        if self.kind not in VAR_CLASSES:
            raise ValueError(f"variable class must be one of {VAR_CLASSES}, got {self.kind!r}")
        if not isinstance(self.value, GroupElement):
            object.__setattr__(self, "value", GroupElement(self.value))
        if self.kind == "residue" and not self.value.is_zero():
            raise ValueError(f"residue variable {self.name} must have value 0")


@dataclass(frozen=True)
class Context:
    """A valued rational function field ``k(vars)``."""

    field: FieldSpec
    vars: tuple[VarDecl, ...]
    order: OrderSpec

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        names = [v.name for v in self.vars]
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        for v in self.vars:
            if v.value.rank != self.order.rank:
                raise ValueError(f"value of {v.name} has rank {v.value.rank}, order has rank {self.order.rank}")

    @classmethod
    def build(cls, characteristic: int, order: OrderSpec, decls: Iterable[tuple]) -> "Context":
        """Convenience constructor from ``(name, class, coords)`` triples."""
        vs = []
        for name, kind, *rest in decls:
            coords = rest[0] if rest else (0,) * order.rank
            vs.append(VarDecl(name, kind, GroupElement(coords)))
        return cls(FieldSpec(characteristic), tuple(vs), order)

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.vars)

    @cached_property
    def index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.names)}

    @property
    def nvars(self) -> int:
        return len(self.vars)

    @cached_property
    def tx(self) -> tuple[int, ...]:
        """Positions of param- and value-class variables."""
        return tuple(i for i, v in enumerate(self.vars) if v.kind != "residue")

    @cached_property
    def residues(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.vars) if v.kind == "residue")

    def of_kind(self, kind: str) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.vars) if v.kind == kind)

    @cached_property
    def value_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Rows: value coordinates of the tx variables, in order."""
        return tuple(self.vars[i].value.coords for i in self.tx)

    def tx_part(self, exps: Sequence[int]) -> tuple[int, ...]:
        return tuple(exps[i] for i in self.tx)

    def embed_tx(self, txexps: Sequence[int]) -> tuple[int, ...]:
        out = [0] * self.nvars
        for i, e in zip(self.tx, txexps):
            out[i] = e
        return tuple(out)

    def var(self, name: str) -> "Polynomial":
        return Polynomial.var(self, name)

    def parse(self, text: str) -> "RationalFunction":
        return parse_ratfun(text, self)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


def _grlex_key(exps):
    return (sum(exps), exps)


class Polynomial:
    """Sparse (Laurent) polynomial with coefficients in the context's field."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: Context, terms: Mapping[tuple, object] | None = None, _normalized: bool = False):
        self.ctx = ctx
        if _normalized:
            self.terms = terms
            return
        f = ctx.field
        out = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != ctx.nvars:
                raise ValueError("exponent vector length differs from number of variables")
            c = f.coerce(c)
            out[e] = out.get(e, 0) + c
        if f.characteristic:
            out = {e: c % f.characteristic for e, c in out.items()}
        self.terms = {e: c for e, c in out.items() if c != 0}

    # constructors ----------------------------------------------------------
    @classmethod
    def zero(cls, ctx: Context) -> "Polynomial":
        return cls(ctx, {}, True)

    @classmethod
    def const(cls, ctx: Context, c) -> "Polynomial":
        return cls(ctx, {(0,) * ctx.nvars: c})

    @classmethod
    def monomial(cls, ctx: Context, exps: Sequence[int], c=1) -> "Polynomial":
        return cls(ctx, {tuple(exps): c})

    @classmethod
    def var(cls, ctx: Context, name: str) -> "Polynomial":
        if name not in ctx.index:
            raise UnknownVariable(f"unknown variable {name!r}")
        e = [0] * ctx.nvars
        e[ctx.index[name]] = 1
        return cls.monomial(ctx, e)

    def _wrap(self, terms: dict) -> "Polynomial":
        p = self.ctx.field.characteristic
        if p:
            terms = {e: c % p for e, c in terms.items()}
        return Polynomial(self.ctx, {e: c for e, c in terms.items() if c != 0}, True)

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial.const(self.ctx, other)

    # arithmetic --------------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return self._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = self.ctx.field.coerce(other)
            return self._wrap({e: c * v for e, v in self.terms.items()})
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return self._wrap(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent for a polynomial")
        result = Polynomial.const(self.ctx, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, exps: Sequence[int]) -> "Polynomial":
        """Multiply by the (Laurent) monomial with exponents ``exps``."""
        return Polynomial(
            self.ctx, {tuple(a + b for a, b in zip(e, exps)): c for e, c in self.terms.items()}, True
        )

    def scale(self, c) -> "Polynomial":
        return self * c

    # inspection --------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant(self):
        return self.terms.get((0,) * self.ctx.nvars, 0)

    def is_laurent(self) -> bool:
        return any(x < 0 for e in self.terms for x in e)

    def sorted_terms(self) -> list[tuple[tuple, object]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading(self):
        return max(self.terms.items(), key=lambda t: _grlex_key(t[0]))

    def min_exponents(self) -> tuple[int, ...]:
        return tuple(min(col) for col in zip(*self.terms)) if self.terms else (0,) * self.ctx.nvars

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Polynomial.const(self.ctx, other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r})"


def _format_monomial(exps, names) -> str:
    parts = []
    for e, n in zip(exps, names):
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}" if e > 0 else f"{n}^({e})")
    return "*".join(parts)


def format_poly(f: Polynomial) -> str:
    if f.is_zero():
        return "0"
    names = f.ctx.names
    out = []
    for i, (e, c) in enumerate(f.sorted_terms()):
        neg = f.ctx.field.characteristic == 0 and c < 0
        a = -c if neg else c
        mono = _format_monomial(e, names)
        if mono:
            body = mono if a == 1 else f"{a}*{mono}"
        else:
            body = str(a)
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def substitute_monomials(f: Polynomial, target: Context, images: Sequence[Sequence[int]]) -> Polynomial:
    """Replace variable i of ``f`` by the target-context monomial ``images[i]``."""
    if target.field != f.ctx.field:
        raise ValueError("substitution between contexts over different fields")
    out: dict = {}
    n = target.nvars
    for e, c in f.terms.items():
        new = [0] * n
        for k, ek in enumerate(e):
            if ek:
                img = images[k]
                for j in range(n):
                    new[j] += ek * img[j]
        key = tuple(new)
        out[key] = out.get(key, 0) + c
    return Polynomial(target, out)


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


class RationalFunction:
    """``num/den`` with common monomial factor and den's leading coefficient removed.

    Equality is equality in the field (cross-multiplication); there is no
    multivariate gcd, so two equal elements may have different representations.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None):
        ctx = num.ctx
        if den is None:
            den = Polynomial.const(ctx, 1)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            self.num, self.den = num, Polynomial.const(ctx, 1)
            return
        m = tuple(min(a, b) for a, b in zip(num.min_exponents(), den.min_exponents()))
        if any(m):
            neg = tuple(-x for x in m)
            num, den = num.shift(neg), den.shift(neg)
        lc = den.leading()[1]
        if lc != 1:
            inv = ctx.field.inv(lc)
            num, den = num * inv, den * inv
        self.num, self.den = num, den

    @property
    def ctx(self) -> Context:
        return self.num.ctx

    @classmethod
    def const(cls, ctx: Context, c) -> "RationalFunction":
        return cls(Polynomial.const(ctx, c))

    @classmethod
    def var(cls, ctx: Context, name: str) -> "RationalFunction":
        return cls(Polynomial.var(ctx, name))

    @classmethod
    def monomial(cls, ctx: Context, exps: Sequence[int], c=1) -> "RationalFunction":
        """Laurent monomial as a fraction of two monomials."""
        pos = tuple(max(x, 0) for x in exps)
        neg = tuple(max(-x, 0) for x in exps)
        return cls(Polynomial.monomial(ctx, pos, c), Polynomial.monomial(ctx, neg))

    @classmethod
    def from_laurent(cls, num: Polynomial, den: Polynomial | None = None) -> "RationalFunction":
        """Normalize a quotient of Laurent polynomials into polynomial form."""
        if den is None:
            den = Polynomial.const(num.ctx, 1)
        m = tuple(min(a, b) for a, b in zip(num.min_exponents(), den.min_exponents()))
        neg = tuple(-x for x in m)
        return cls(num.shift(neg), den.shift(neg))

    def _lift(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        return RationalFunction.const(self.ctx, other)

    def __add__(self, other):
        o = self._lift(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inv(self) -> "RationalFunction":
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        return self * self._lift(other).inv()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        return RationalFunction(self.num**n, self.den**n)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            other = self._lift(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def same_form(self, other: "RationalFunction") -> bool:
        """Equality of normalized representations (stronger than ``==``)."""
        return self.num == other.num and self.den == other.den

    def substitute(self, target: Context, images) -> "RationalFunction":
        return RationalFunction.from_laurent(
            substitute_monomials(self.num, target, images), substitute_monomials(self.den, target, images)
        )

    def __str__(self):
        return format_ratfun(self)

    def __repr__(self):
        return f"RationalFunction({format_ratfun(self)!r})"


def format_ratfun(f: RationalFunction) -> str:
    if f.den == 1:
        return format_poly(f.num)
    num = format_poly(f.num)
    if len(f.num) > 1 or num.startswith("-"):
        num = f"({num})"
    den = format_poly(f.den)
    if len(f.den) > 1 or "*" in den or "^" in den:
        den = f"({den})"
    return f"{num}/{den}"


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        num, ident, op = m.groups()
        if num is not None:
            toks.append(("int", num))
        elif ident is not None:
            toks.append(("ident", ident))
        else:
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r} at position {m.start(3)}")
            toks.append(("op", op))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str, ctx: Context):
        self.toks = _tokenize(text)
        self.i = 0
        self.ctx = ctx

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"expected {value or kind}, got {tok[1]!r}")
        self.i += 1
        return tok

    def parse(self) -> RationalFunction:
        if not self.toks:
            raise ParseError("empty expression")
        out = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"unexpected token {self.peek()[1]!r}")
        return out

    def expr(self):
        acc = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                acc = acc * rhs
            else:
                if rhs.is_zero():
                    if self.ctx.field.characteristic:
                        raise WrongCharacteristic(
                            f"divisor vanishes in characteristic {self.ctx.field.characteristic}"
                        )
                    raise DivisionByZero("division by zero")
                acc = acc / rhs
        return acc

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            if self.peek() == ("op", "("):
                self.take()
                n = int(self.take("int")[1])
                self.take("op", ")")
            else:
                n = int(self.take("int")[1])
            base = base**n
        return base

    def atom(self):
        kind, val = self.peek()
        if kind == "int":
            self.take()
            return RationalFunction.const(self.ctx, int(val))
        if kind == "ident":
            self.take()
            if val not in self.ctx.index:
                raise UnknownVariable(f"unknown variable {val!r}")
            return RationalFunction.var(self.ctx, val)
        if (kind, val) == ("op", "("):
            self.take()
            inner = self.expr()
            self.take("op", ")")
            return inner
        raise ParseError(f"unexpected token {val!r}")


def parse_ratfun(text: str, ctx: Context) -> RationalFunction:
    """Parse an infix expression (``+ - * / ^``, integers, identifiers)."""
    return _Parser(text, ctx).parse()


def poly_arith(op: str, f: Polynomial, g) -> Polynomial:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "pow":
        return f**g
    raise ValueError(f"unknown operation {op!r}")


def ratfun_arith(op: str, f: RationalFunction, g: RationalFunction | None = None) -> RationalFunction:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "inv":
        return f.inv()
    raise ValueError(f"unknown operation {op!r}")
