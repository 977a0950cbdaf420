"""Sparse multivariate polynomials over float64 coefficients.

A polynomial is stored as a map from exponent tuples to coefficients, kept in
canonical graded-lexicographic order (total degree first, then exponent tuple;
highest term first).  The canonical order fixes the term order for printing and
for the summation order during evaluation, so results are reproducible
bit-for-bit between runs.

Zero coefficients are never stored; the empty polynomial is the zero
polynomial and has total degree 0 by convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

# An exponent tuple, one entry per variable: (2, 0, 1) stands for x1^2 * x3.
Monomial = tuple[int, ...]


def grlex_key(exps: Monomial) -> tuple[int, Monomial]:
    """Sort key for graded-lexicographic order (ascending)."""
    return (sum(exps), exps)


class PolyParseError(ValueError):
    """Raised for malformed polynomial text; carries the offending position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


@dataclass(frozen=True)
class Polynomial:
    """Immutable sparse polynomial in ``nvars`` variables."""

    nvars: int
    terms: tuple[tuple[Monomial, float], ...]

    @staticmethod
    def from_dict(nvars: int, coeffs: Mapping[Monomial, float]) -> "Polynomial":
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        cleaned: dict[Monomial, float] = {}
        for exps, c in coeffs.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent tuple {exps} does not match nvars={nvars}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = float(c)
            if c != 0.0:
                cleaned[exps] = cleaned.get(exps, 0.0) + c
        ordered = sorted(
            ((e, c) for e, c in cleaned.items() if c != 0.0),
            key=lambda t: grlex_key(t[0]),
            reverse=True,
        )
        return Polynomial(nvars, tuple(ordered))

    @staticmethod
    def zero(nvars: int) -> "Polynomial":
        return Polynomial.from_dict(nvars, {})

    @staticmethod
    def constant(nvars: int, value: float) -> "Polynomial":
        return Polynomial.from_dict(nvars, {(0,) * nvars: value})

    @staticmethod
    def variable(nvars: int, index: int) -> "Polynomial":
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for nvars={nvars}")
        exps = tuple(1 if i == index else 0 for i in range(nvars))
        return Polynomial.from_dict(nvars, {exps: 1.0})

    # -- queries ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Largest term degree; 0 for the zero polynomial."""
        if not self.terms:
            return 0
        return max(sum(e) for e, _ in self.terms)

    def coefficient(self, exps: Monomial) -> float:
        for e, c in self.terms:
            if e == tuple(exps):
                return c
        return 0.0

    # -- evaluation -------------------------------------------------------

    def evaluate(self, point: Sequence[float]) -> float:
        """Evaluate at one point, summing terms in canonical order."""
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        total = 0.0
        for exps, c in self.terms:
            v = c
            for x, e in zip(point, exps):
                if e:
                    v *= x ** e
            total += v
        return total

    @cached_property
    def _arrays(self) -> tuple[np.ndarray, np.ndarray]:
        exps = np.array([e for e, _ in self.terms], dtype=np.int64).reshape(len(self.terms), self.nvars)
        coef = np.array([c for _, c in self.terms], dtype=np.float64)
        return exps, coef

    def eval_many(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at a batch of points, shape (k, nvars) -> (k,)."""
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != self.nvars:
            raise ValueError(f"expected shape (k, {self.nvars}), got {pts.shape}")
        if not self.terms:
            return np.zeros(len(pts))
        exps, coef = self._arrays
        return np.prod(pts[:, None, :] ** exps[None, :, :], axis=2) @ coef

    # -- calculus ---------------------------------------------------------

    def partial(self, index: int) -> "Polynomial":
        """Partial derivative with respect to variable ``index`` (0-based)."""
        if not 0 <= index < self.nvars:
            raise ValueError(f"variable index {index} out of range for nvars={self.nvars}")
        out: dict[Monomial, float] = {}
        for exps, c in self.terms:
            e = exps[index]
            if e:
                lowered = exps[:index] + (e - 1,) + exps[index + 1:]
                out[lowered] = out.get(lowered, 0.0) + c * e
        return Polynomial.from_dict(self.nvars, out)

    def gradient(self) -> "PolyVector":
        return PolyVector(tuple(self.partial(i) for i in range(self.nvars)))

    # -- arithmetic -------------------------------------------------------

    def _combine(self, other: "Polynomial", sign: float) -> "Polynomial":
        if other.nvars != self.nvars:
            raise ValueError("variable count mismatch")
        out = {e: c for e, c in self.terms}
        for e, c in other.terms:
            out[e] = out.get(e, 0.0) + sign * c
        return Polynomial.from_dict(self.nvars, out)

    def __add__(self, other: "Polynomial | float") -> "Polynomial":
        if isinstance(other, (int, float)):
            other = Polynomial.constant(self.nvars, other)
        return self._combine(other, 1.0)

    def __sub__(self, other: "Polynomial | float") -> "Polynomial":
        if isinstance(other, (int, float)):
            other = Polynomial.constant(self.nvars, other)
        return self._combine(other, -1.0)

    def __neg__(self) -> "Polynomial":
        return Polynomial.from_dict(self.nvars, {e: -c for e, c in self.terms})

    def __mul__(self, other: "Polynomial | float") -> "Polynomial":
        if isinstance(other, (int, float)):
            return Polynomial.from_dict(self.nvars, {e: c * other for e, c in self.terms})
        if other.nvars != self.nvars:
            raise ValueError("variable count mismatch")
        out: dict[Monomial, float] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0.0) + c1 * c2
        return Polynomial.from_dict(self.nvars, out)

    __rmul__ = __mul__

    def remap(self, new_nvars: int, mapping: Sequence[int]) -> "Polynomial":
        """Embed into a larger variable space; variable i becomes mapping[i]."""
        if len(mapping) != self.nvars:
            raise ValueError("mapping length must equal nvars")
        out: dict[Monomial, float] = {}
        for exps, c in self.terms:
            new = [0] * new_nvars
            for i, e in enumerate(exps):
                if e:
                    new[mapping[i]] += e
            key = tuple(new)
            out[key] = out.get(key, 0.0) + c
        return Polynomial.from_dict(new_nvars, out)


@dataclass(frozen=True)
class PolyVector:
    """A tuple of polynomials over a shared variable space."""

    components: tuple[Polynomial, ...]

    def __post_init__(self):
        if not self.components:
            raise ValueError("PolyVector needs at least one component")
        n = self.components[0].nvars
        if any(p.nvars != n for p in self.components):
            raise ValueError("all components must share the same variable count")

    @property
    def nvars(self) -> int:
        return self.components[0].nvars

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, i: int) -> Polynomial:
        return self.components[i]

    def evaluate(self, point: Sequence[float]) -> np.ndarray:
        return np.array([p.evaluate(point) for p in self.components])

    def eval_many(self, points: np.ndarray) -> np.ndarray:
        """Batch evaluation, shape (k, nvars) -> (k, len(self))."""
        return np.stack([p.eval_many(points) for p in self.components], axis=1)


# -- text format ----------------------------------------------------------
#
# Grammar (whitespace insignificant, no implicit multiplication, no parens):
#   expr   := ['+'|'-'] term (('+'|'-') term)*
#   term   := factor ('*' factor)*
#   factor := primary ['^' INT]
#   primary:= NUMBER ['/' NUMBER] | VARIABLE
# NUMBER is a decimal literal; a '/' between two numbers forms a rational
# literal evaluated by float division (1/3 -> 0.3333...).

_TOKEN_KINDS = ("num", "name", "op")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*^/":
            tokens.append(("op", ch, i))
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            j = i
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            if text[i:j] == ".":
                raise PolyParseError("malformed number", i)
            # scientific suffix: e or E, optional sign, digits
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    while k < n and text[k].isdigit():
                        k += 1
                    j = k
            tokens.append(("num", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        raise PolyParseError(f"unexpected character {ch!r}", i)
    return tokens


class _PolyParser:
    def __init__(self, text: str, names: Sequence[str]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.text = text
        self.index = {name: i for i, name in enumerate(names)}
        self.nvars = len(names)

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise PolyParseError("unexpected end of input", len(self.text))
        self.pos += 1
        return tok

    def parse(self) -> Polynomial:
        result = self.expr()
        tok = self.peek()
        if tok is not None:
            raise PolyParseError(f"unexpected {tok[1]!r}", tok[2])
        return result

    def expr(self) -> Polynomial:
        sign = 1.0
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1.0 if tok[1] == "-" else 1.0
        total = self.term() * sign
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] in "+-":
                self.take()
                nxt = self.term()
                total = total + nxt if tok[1] == "+" else total - nxt
            else:
                return total

    def term(self) -> Polynomial:
        product = self.factor()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] == "*":
                self.take()
                product = product * self.factor()
            elif tok and tok[0] in ("num", "name"):
                raise PolyParseError(
                    f"implicit multiplication before {tok[1]!r} is not allowed; write '*'",
                    tok[2],
                )
            else:
                return product

    def factor(self) -> Polynomial:
        base = self.primary()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.take()
            etok = self.take()
            if etok[0] != "num" or not etok[1].isdigit():
                raise PolyParseError("exponent must be a nonnegative integer", etok[2])
            power = int(etok[1])
            result = Polynomial.constant(self.nvars, 1.0)
            for _ in range(power):
                result = result * base
            return result
        return base

    def primary(self) -> Polynomial:
        tok = self.take()
        if tok[0] == "num":
            value = float(tok[1])
            nxt = self.peek()
            if nxt and nxt[0] == "op" and nxt[1] == "/":
                self.take()
                dtok = self.take()
                if dtok[0] != "num":
                    raise PolyParseError("expected a number after '/'", dtok[2])
                denom = float(dtok[1])
                if denom == 0.0:
                    raise PolyParseError("zero denominator", dtok[2])
                value /= denom
            return Polynomial.constant(self.nvars, value)
        if tok[0] == "name":
            idx = self.index.get(tok[1])
            if idx is None:
                raise PolyParseError(f"unknown variable {tok[1]!r}", tok[2])
            return Polynomial.variable(self.nvars, idx)
        raise PolyParseError(f"unexpected {tok[1]!r}", tok[2])


def default_names(nvars: int, prefix: str = "x") -> tuple[str, ...]:
    """Conventional variable names: x1, x2, ... (1-based suffixes)."""
    return tuple(f"{prefix}{i + 1}" for i in range(nvars))


def parse_poly(text: str, names: Sequence[str]) -> Polynomial:
    """Parse polynomial text over the given variable names."""
    return _PolyParser(text, names).parse()


def _format_number(value: float) -> str:
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def format_poly(p: Polynomial, names: Sequence[str] | None = None) -> str:
    """Canonical text form: graded-lex order, explicit signs and '*'."""
    if names is None:
        names = default_names(p.nvars)
    if len(names) != p.nvars:
        raise ValueError("names length must equal nvars")
    if not p.terms:
        return "0"
    pieces = []
    for k, (exps, c) in enumerate(p.terms):
        mono = "*".join(
            names[i] if e == 1 else f"{names[i]}^{e}"
            for i, e in enumerate(exps)
            if e
        )
        mag = abs(c)
        if not mono:
            body = _format_number(mag)
        elif mag == 1.0:
            body = mono
        else:
            body = f"{_format_number(mag)}*{mono}"
        if k == 0:
            pieces.append(f"-{body}" if c < 0 else body)
        else:
            pieces.append(f"- {body}" if c < 0 else f"+ {body}")
    return " ".join(pieces)
