"""Textual ladder-operator expressions: parse, evaluate, print.

Lets Hamiltonians and witness operators be declared in config files and
tests, e.g. ``"(g1 + g1')*(b + b')^2"``.  The grammar:

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := scalar | atom | '(' expr ')' | factor '^' uint | '-' factor
    atom   := 'g1' | 'g2' | 'b' | 'm', optionally daggered by a trailing
              apostrophe (the Unicode dagger is accepted as an alias)
    scalar := decimal literal with optional trailing 'i', or 'i' alone

``'^'`` binds tighter than ``'*'``, which binds tighter than ``'+'``/``'-'``;
exponent 0 yields the identity.  Whitespace is insignificant.  Products are
noncommutative: factor order within a term is preserved exactly as written.
No simplification or normal ordering is attempted -- expressions evaluate
literally to dense matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .fock import MODES, FockSpace, Operator, annihilator

# The oscillator mode is written "b" in expressions (its ladder operator
# name) but "m" is accepted as well since that is the space's mode label.
_ATOM_TO_MODE = {"g1": "g1", "g2": "g2", "b": "m", "m": "m"}


class ParseError(ValueError):
    """Syntax or validation error, carrying the byte offset of the cause."""

    def __init__(self, reason: str, offset: int):
        super().__init__(f"{reason} (at offset {offset})")
        self.reason = reason
        self.offset = offset


@dataclass(frozen=True)
class ModeSymbol:
    mode: str
    dagger: bool = False


@dataclass(frozen=True)
class Power:
    base: "Factor"
    exponent: int


@dataclass(frozen=True)
class Group:
    expr: "OperatorExpr"


Factor = Union[ModeSymbol, Power, Group]


@dataclass(frozen=True)
class Term:
    coeff: complex
    factors: tuple


@dataclass(frozen=True)
class OperatorExpr:
    terms: tuple


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, reason: str, offset: int | None = None):
        raise ParseError(reason, self.pos if offset is None else offset)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> OperatorExpr:
        expr = self.parse_expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error(f"unexpected input {self.peek()!r}")
        return expr

    def parse_expr(self) -> OperatorExpr:
        terms = [self.parse_term()]
        while True:
            self.skip_ws()
            ch = self.peek()
            if ch in "+-−":
                self.pos += 1
                term = self.parse_term()
                if ch != "+":
                    term = Term(-term.coeff, term.factors)
                terms.append(term)
            else:
                break
        return OperatorExpr(tuple(terms))

    def parse_term(self) -> Term:
        coeff, factors = 1 + 0j, []
        mult, factor = self.parse_factor()
        coeff *= mult
        if factor is not None:
            factors.append(factor)
        while True:
            self.skip_ws()
            if self.peek() == "*":
                self.pos += 1
                mult, factor = self.parse_factor()
                coeff *= mult
                if factor is not None:
                    factors.append(factor)
            else:
                break
        return Term(coeff, tuple(factors))

    def parse_factor(self):
        """Parse one factor; returns (scalar multiplier, Factor or None)."""
        self.skip_ws()
        ch = self.peek()
        if ch in "-−":
            self.pos += 1
            mult, factor = self.parse_factor()
            return -mult, factor
        if ch == "+":
            self.pos += 1
            return self.parse_factor()
        if ch.isdigit() or ch == ".":
            mult, factor = self.parse_scalar(), None
        elif ch.isalpha():
            ident = self.parse_atom()
            if ident is None:
                mult, factor = 1j, None
            else:
                mult, factor = 1 + 0j, ident
        elif ch == "(":
            self.pos += 1
            inner = self.parse_expr()
            self.skip_ws()
            if self.peek() != ")":
                self.error("unbalanced parentheses: expected ')'")
            self.pos += 1
            mult, factor = 1 + 0j, Group(inner)
        else:
            self.error("expected scalar, mode symbol or '('")
        # powers bind tighter than '*'
        while True:
            self.skip_ws()
            if self.peek() != "^":
                break
            self.pos += 1
            exponent = self.parse_uint()
            if factor is None:
                mult = mult**exponent
            else:
                factor = Power(factor, exponent)
        return mult, factor

    def parse_scalar(self) -> complex:
        start = self.pos
        text = self.text
        while self.pos < len(text) and text[self.pos].isdigit():
            self.pos += 1
        if self.pos < len(text) and text[self.pos] == ".":
            self.pos += 1
            while self.pos < len(text) and text[self.pos].isdigit():
                self.pos += 1
        if self.pos < len(text) and text[self.pos] in "eE":
            mark = self.pos
            self.pos += 1
            if self.pos < len(text) and text[self.pos] in "+-":
                self.pos += 1
            if self.pos < len(text) and text[self.pos].isdigit():
                while self.pos < len(text) and text[self.pos].isdigit():
                    self.pos += 1
            else:
                self.pos = mark  # not an exponent after all
        literal = text[start : self.pos]
        try:
            value = float(literal)
        except ValueError:
            self.error(f"malformed scalar {literal!r}", start)
        if self.pos < len(text) and text[self.pos] == "i":
            self.pos += 1
            return value * 1j
        return complex(value)

    def parse_atom(self):
        """Parse an identifier: a mode symbol, or None for the unit 'i'."""
        start = self.pos
        text = self.text
        while self.pos < len(text) and (text[self.pos].isalnum() or text[self.pos] == "_"):
            self.pos += 1
        ident = text[start : self.pos]
        if ident == "i":
            return None
        if ident not in _ATOM_TO_MODE:
            self.error(f"unknown mode {ident}", start)
        dagger = False
        if self.pos < len(text) and text[self.pos] in "'†":
            dagger = True
            self.pos += 1
        return ModeSymbol(_ATOM_TO_MODE[ident], dagger)

    def parse_uint(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected non-negative integer exponent", start)
        return int(self.text[start : self.pos])


def parse(text: str) -> OperatorExpr:
    """Parse an expression string into an AST, or raise ParseError."""
    return _Parser(text).parse()


def support(expr: OperatorExpr) -> frozenset:
    """The set of modes mentioned anywhere in the expression."""
    modes = set()

    def walk_factor(f):
        if isinstance(f, ModeSymbol):
            modes.add(f.mode)
        elif isinstance(f, Power):
            walk_factor(f.base)
        elif isinstance(f, Group):
            for t in f.expr.terms:
                for g in t.factors:
                    walk_factor(g)

    for term in expr.terms:
        for f in term.factors:
            walk_factor(f)
    return frozenset(modes)


def evaluate(expr: OperatorExpr, space: FockSpace) -> Operator:
    """Evaluate an AST to a dense operator on the given space.

    Scalars scale, sums add, products multiply matrices in written order,
    and the dagger maps to the adjoint of the single-mode atom.
    """
    for mode in support(expr):
        if mode not in MODES:
            raise ValueError(f"mode {mode!r} not present in space")
    d = space.dim
    total = np.zeros((d, d), dtype=complex)
    for term in expr.terms:
        acc = term.coeff * np.eye(d, dtype=complex)
        for factor in term.factors:
            acc = acc @ _factor_matrix(factor, space)
        total += acc
    return Operator(space, total)


def _factor_matrix(factor: Factor, space: FockSpace) -> np.ndarray:
    if isinstance(factor, ModeSymbol):
        a = annihilator(space, factor.mode)
        return a.adjoint().mat if factor.dagger else a.mat
    if isinstance(factor, Power):
        return np.linalg.matrix_power(_factor_matrix(factor.base, space), factor.exponent)
    if isinstance(factor, Group):
        return evaluate(factor.expr, space).mat
    raise TypeError(f"unknown factor {factor!r}")


def unparse(expr: OperatorExpr) -> str:
    """Render an AST back to text that reparses to an equivalent expression."""
    return " + ".join(_unparse_term(t) for t in expr.terms)


def _unparse_term(term: Term) -> str:
    pieces = []
    if term.coeff != 1 or not term.factors:
        pieces.append(_format_scalar(term.coeff))
    pieces.extend(_unparse_factor(f) for f in term.factors)
    return "*".join(pieces)


def _unparse_factor(factor: Factor) -> str:
    if isinstance(factor, ModeSymbol):
        name = "b" if factor.mode == "m" else factor.mode
        return name + ("'" if factor.dagger else "")
    if isinstance(factor, Power):
        return f"{_unparse_factor(factor.base)}^{factor.exponent}"
    if isinstance(factor, Group):
        return f"({unparse(factor.expr)})"
    raise TypeError(f"unknown factor {factor!r}")


def _format_scalar(z: complex) -> str:
    re, im = z.real, z.imag
    if im == 0:
        return repr(re)
    if re == 0:
        return "i" if im == 1 else f"{im!r}i"
    return f"({re!r} + {im!r}i)"
