"""Sparse multivariate polynomials over exact rationals.

Coefficients are ``fractions.Fraction`` throughout; there is no floating
point anywhere in the symbolic layer.  A ring is an ordered tuple of
variable names, optionally extended by a Laurent parameter (conventionally
``t``) whose exponent may be negative.  All other exponents are >= 0.

Polynomials are immutable; every operation returns a new value.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DeclaredVariableError,
    ParseError,
    PoleError,
    RingMismatchError,
)

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class Ring:
    """An ordered list of variable names, plus an optional Laurent parameter.

    The Laurent parameter occupies the last exponent slot and is the only
    variable allowed a negative exponent.
    """

    variables: tuple[str, ...]
    laurent: str | None = None

    def __post_init__(self):
        names = list(self.variables) + ([self.laurent] if self.laurent else [])
        if len(set(names)) != len(names):
            raise DeclaredVariableError(f"duplicate variable names in {names}")
        for name in names:
            if not _NAME_RE.fullmatch(name):
                raise DeclaredVariableError(f"bad variable name {name!r}")

    @property
    def names(self) -> tuple[str, ...]:
        return self.variables + ((self.laurent,) if self.laurent else ())

    @property
    def nslots(self) -> int:
        return len(self.variables) + (1 if self.laurent else 0)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise DeclaredVariableError(f"{name!r} is not declared in ring {self.names}")

    def with_laurent(self, name: str = "t") -> "Ring":
        if self.laurent:
            return self
        return Ring(self.variables, name)

    def drop_laurent(self) -> "Ring":
        return Ring(self.variables, None)

    def laurent_as_variable(self) -> "Ring":
        """Demote the Laurent parameter to an ordinary (>= 0) variable."""
        if not self.laurent:
            return self
        return Ring(self.variables + (self.laurent,), None)

    def without(self, names) -> "Ring":
        drop = set(names)
        return Ring(tuple(v for v in self.variables if v not in drop), self.laurent)

    def extend(self, names) -> "Ring":
        return Ring(self.variables + tuple(names), self.laurent)


def _check_exponents(ring: Ring, exps: tuple[int, ...]):
    n = len(ring.variables)
    if len(exps) != ring.nslots:
        raise DeclaredVariableError(
            f"exponent tuple {exps} has wrong length for ring {ring.names}"
        )
    for e in exps[:n]:
        if e < 0:
            raise PoleError(f"negative exponent on a non-Laurent variable: {exps}")


class Poly:
    """Immutable sparse polynomial: a map from exponent tuples to Fractions."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: dict):
        clean = {}
        for exps, coeff in terms.items():
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            exps = tuple(exps)
            _check_exponents(ring, exps)
            clean[exps] = coeff
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(ring: Ring) -> "Poly":
        return Poly(ring, {})

    @staticmethod
    def constant(ring: Ring, c) -> "Poly":
        return Poly(ring, {(0,) * ring.nslots: Fraction(c)})

    @staticmethod
    def variable(ring: Ring, name: str) -> "Poly":
        i = ring.index(name)
        exps = [0] * ring.nslots
        exps[i] = 1
        return Poly(ring, {tuple(exps): Fraction(1)})

    @staticmethod
    def monomial(ring: Ring, exponents: dict, coeff=1) -> "Poly":
        exps = [0] * ring.nslots
        for name, e in exponents.items():
            exps[ring.index(name)] = e
        return Poly(ring, {tuple(exps): Fraction(coeff)})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return next(iter(self.terms.values()), Fraction(0))

    def total_degree(self) -> int:
        """Total degree in the non-Laurent variables (0 for the zero poly)."""
        n = len(self.ring.variables)
        return max((sum(e[:n]) for e in self.terms), default=0)

    def variables_used(self) -> set:
        used = set()
        names = self.ring.names
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    used.add(names[i])
        return used

    def degree_in(self, name: str) -> int:
        i = self.ring.index(name)
        return max((e[i] for e in self.terms), default=0)

    def coefficient_of(self, name: str, power: int) -> "Poly":
        """The coefficient of name**power, as a polynomial in the other slots."""
        i = self.ring.index(name)
        out = {}
        for exps, c in self.terms.items():
            if exps[i] == power:
                reduced = exps[:i] + (0,) + exps[i + 1:]
                out[reduced] = out.get(reduced, Fraction(0)) + c
        return Poly(self.ring, out)

    def min_laurent_power(self) -> int:
        if not self.ring.laurent or not self.terms:
            return 0
        return min(e[-1] for e in self.terms)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatchError(f"{other.ring.names} vs {self.ring.names}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.ring, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for exps, c in other.terms.items():
            out[exps] = out.get(exps, Fraction(0)) + c
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.constant(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        return Poly(self.ring, {e: coeff * c for e, coeff in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(self.ring, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.ring, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- calculus / specialization -----------------------------------------

    def derivative(self, name: str) -> "Poly":
        i = self.ring.index(name)
        out = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e == 0:
                continue
            new = exps[:i] + (e - 1,) + exps[i + 1:]
            out[new] = out.get(new, Fraction(0)) + c * e
        return Poly(self.ring, out)

    def evaluate(self, point: dict) -> Fraction:
        """Evaluate at a full rational point (every variable assigned)."""
        total = Fraction(0)
        names = self.ring.names
        vals = [Fraction(point[name]) for name in names]
        for exps, c in self.terms.items():
            v = c
            for x, e in zip(vals, exps):
                if e:
                    v *= x ** e
            total += v
        return total

    def map_ring(self, ring: Ring) -> "Poly":
        """Re-express this polynomial in another ring containing its variables."""
        n = len(self.ring.variables)
        out = {}
        for exps, c in self.terms.items():
            new = [0] * ring.nslots
            for i, e in enumerate(exps):
                if not e:
                    continue
                name = self.ring.names[i]
                j = ring.index(name)
                if i >= n and ring.laurent != name and e < 0:
                    raise PoleError(f"negative {name}-power cannot enter ring {ring.names}")
                new[j] = e
            key = tuple(new)
            out[key] = out.get(key, Fraction(0)) + c
        return Poly(ring, out)

    # -- printing / parsing --------------------------------------------------

    def _sorted_terms(self):
        def key(item):
            exps, _ = item
            return (sum(exps), tuple(-e for e in reversed(exps)))

        return sorted(self.terms.items(), key=key, reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.names
        parts = []
        for exps, coeff in self._sorted_terms():
            factors = []
            for name, e in zip(names, exps):
                if e == 0:
                    continue
                factors.append(name if e == 1 else f"{name}^{e}")
            mono = "*".join(factors)
            c = coeff if parts == [] else abs(coeff)
            if not mono:
                body = str(c)
            elif c == 1:
                body = mono
            elif c == -1:
                body = f"-{mono}"
            else:
                body = f"{c}*{mono}"
            if not parts:
                parts.append(body)
            else:
                parts.append(("- " if coeff < 0 else "+ ") + body)
        return " ".join(parts)

    __repr__ = __str__


@dataclass(frozen=True)
class Substitution:
    """A variable assignment; unassigned variables map to themselves.

    Image polynomials must all live in one ring, which becomes the ring of
    every substituted result.
    """

    ring: Ring
    assignments: dict

    def __post_init__(self):
        for name, img in self.assignments.items():
            if not isinstance(img, Poly) or img.ring != self.ring:
                raise RingMismatchError(f"assignment image for {name!r} is not in the target ring")

    def image(self, name: str) -> Poly:
        if name in self.assignments:
            return self.assignments[name]
        return Poly.variable(self.ring, name)

    def compose(self, inner: "Substitution") -> "Substitution":
        """self after inner: (self.compose(inner))(f) == self(inner(f))."""
        names = set(inner.assignments) | set(self.assignments)
        return Substitution(self.ring, {n: substitute(inner.image(n), self) for n in names})


def substitute(f: Poly, s) -> Poly:
    """Replace variables by polynomials and expand to canonical form.

    ``s`` may be a Substitution or a plain dict mapping names to Poly
    (or rational constants) over the target ring; the target ring defaults
    to f's ring.
    """
    if isinstance(s, Substitution):
        target, assignments = s.ring, s.assignments
    else:
        assignments = {}
        target = None
        for name, img in s.items():
            if isinstance(img, Poly):
                target = img.ring
        if target is None:
            target = f.ring
        for name, img in s.items():
            if not isinstance(img, Poly):
                img = Poly.constant(target, img)
            assignments[name] = img
    if f.ring.laurent and f.ring.laurent in assignments:
        raise DeclaredVariableError("the Laurent parameter always maps to itself")
    for name in assignments:
        f.ring.index(name)  # declared-variable check

    nvars = len(f.ring.variables)
    images = []
    for name in f.ring.variables:
        if name in assignments:
            images.append(assignments[name])
        else:
            images.append(Poly.variable(target, name))
    if f.ring.laurent and target.laurent != f.ring.laurent:
        raise RingMismatchError("target ring lost the Laurent parameter")

    result = Poly.zero(target)
    for exps, coeff in f.terms.items():
        term = Poly.constant(target, coeff)
        for img, e in zip(images, exps[:nvars]):
            if e:
                term = term * img ** e
        if f.ring.laurent and exps[-1]:
            term = term * t_monomial(target, exps[-1])
        result = result + term
    return result


def weighted_scale(f: Poly, weights: dict, negate_power: int) -> Poly:
    """t**(-negate_power) * f(t**w(x) * x, ...), exactly, over the Laurent ring.

    Weights must be supplied for every variable occurring in f.
    """
    if f.ring.laurent:
        raise RingMismatchError("weighted_scale expects a t-free polynomial")
    for name in f.variables_used():
        if name not in weights:
            raise DeclaredVariableError(f"no weight supplied for {name!r}")
    ring = f.ring.with_laurent()
    wvec = [int(weights.get(name, 0)) for name in f.ring.variables]
    out = {}
    for exps, coeff in f.terms.items():
        tpow = sum(w * e for w, e in zip(wvec, exps)) - negate_power
        key = exps + (tpow,)
        out[key] = out.get(key, Fraction(0)) + coeff
    return Poly(ring, out)


def set_t(f: Poly, value) -> Poly:
    """Substitute t := value and drop t from the ring.

    At value 0 any surviving negative t-power is a pole (error); positive
    powers vanish.
    """
    if not f.ring.laurent:
        raise RingMismatchError("set_t expects a Laurent-ring polynomial")
    value = Fraction(value)
    ring = f.ring.drop_laurent()
    out = {}
    for exps, coeff in f.terms.items():
        base, tpow = exps[:-1], exps[-1]
        if value == 0:
            if tpow < 0:
                raise PoleError(f"pole of order {-tpow} at t=0")
            if tpow > 0:
                continue
            c = coeff
        else:
            c = coeff * value ** tpow
        out[base] = out.get(base, Fraction(0)) + c
    return Poly(ring, out)


def t_monomial(ring: Ring, power: int, coeff=1) -> Poly:
    """c * t**power in the Laurent extension of ring."""
    ring = ring.with_laurent()
    exps = (0,) * len(ring.variables) + (power,)
    return Poly(ring, {exps: Fraction(coeff)})


# -- text grammar ------------------------------------------------------------
#
# variables  [a-zA-Z_][a-zA-Z0-9_]*
# rationals  n or n/d
# operators  + - * ^ with explicit *, parentheses allowed
# Exponents may be negative only on the Laurent parameter.

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>\d+)|(?P<op>[-+*^()/]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character at {text[pos:pos + 10]!r}")
        if m.group("name"):
            tokens.append(("name", m.group("name")))
        elif m.group("int"):
            tokens.append(("int", int(m.group("int"))))
        else:
            tokens.append(("op", m.group("op")))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens, ring: Ring):
        self.tokens = tokens
        self.pos = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}")

    def parse_expr(self) -> Poly:
        sign = 1
        kind, val = self.peek()
        if (kind, val) == ("op", "-"):
            self.take()
            sign = -1
        elif (kind, val) == ("op", "+"):
            self.take()
        result = self.parse_term().scale(sign)
        while True:
            kind, val = self.peek()
            if (kind, val) == ("op", "+"):
                self.take()
                result = result + self.parse_term()
            elif (kind, val) == ("op", "-"):
                self.take()
                result = result - self.parse_term()
            else:
                return result

    def parse_term(self) -> Poly:
        result = self.parse_factor()
        while self.peek() == ("op", "*"):
            self.take()
            result = result * self.parse_factor()
        return result

    def parse_factor(self) -> Poly:
        base = self.parse_atom()
        if self.peek() == ("op", "^"):
            self.take()
            neg = False
            if self.peek() == ("op", "-"):
                self.take()
                neg = True
            kind, val = self.take()
            if kind != "int":
                raise ParseError("exponent must be an integer")
            if neg:
                # Only t^-k is legal; base must be the bare Laurent parameter.
                if (
                    self.ring.laurent is None
                    or base != Poly.variable(self.ring, self.ring.laurent)
                ):
                    raise PoleError("negative exponents are reserved for the Laurent parameter")
                return t_monomial(self.ring, -val)
            return base ** val
        return base

    def parse_atom(self) -> Poly:
        kind, val = self.take()
        if kind == "name":
            return Poly.variable(self.ring, val)
        if kind == "int":
            if self.peek() == ("op", "/"):
                self.take()
                dkind, dval = self.take()
                if dkind != "int":
                    raise ParseError("denominator must be an integer")
                return Poly.constant(self.ring, Fraction(val, dval))
            return Poly.constant(self.ring, val)
        if (kind, val) == ("op", "("):
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        if (kind, val) == ("op", "-"):
            return -self.parse_factor()
        raise ParseError(f"unexpected token {val!r}")


def parse_poly(text: str, ring: Ring) -> Poly:
    """Parse the text grammar; round-trips exactly with str()."""
    tokens = _tokenize(text)
    parser = _Parser(tokens, ring)
    result = parser.parse_expr()
    if parser.pos != len(tokens):
        raise ParseError(f"trailing input near token {parser.pos}")
    return result
