"""Parser for the polynomial-ODE input format, plus equilibrium shifting.

The file format is line-oriented; ``#`` starts a comment and ``;`` may
separate statements on one line:

    vars x y z
    param l1 = 1
    equilibrium 0 0 0          # optional
    basis 1 0 0 0 1 0 0 0 1    # optional, n*n row-major eigenbasis override
    dx/dt = l1*y + x^2 + x*y

Expressions accept ``+ - * ^`` with non-negative integer exponents,
parentheses, numeric literals (decimal or scientific) and declared
parameter names.  Parameters are bound to numbers while parsing, so a
SystemSpec is fully numeric: each right-hand side is a canonical
Polynomial over the declared variables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .errors import (
    DslSyntaxError,
    NonPolynomialError,
    NotAnEquilibriumError,
    UndeclaredNameError,
)
from .poly import Polynomial, PolyMap

EQUILIBRIUM_TOL = 1e-9

_NUM_RE = re.compile(r"\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?")
_NAME_RE = re.compile(r"[A-Za-z_]\w*")
_EQN_LHS_RE = re.compile(r"^d([A-Za-z_]\w*)\s*/\s*dt$")


@dataclass(frozen=True)
class SystemSpec:
    """A parsed polynomial ODE system with numeric parameters."""

    variables: tuple[str, ...]
    parameters: dict[str, float]
    field: PolyMap
    equilibrium: tuple[float, ...] | None = None
    basis: tuple[tuple[float, ...], ...] | None = None

    @property
    def nvars(self) -> int:
        return len(self.variables)


class _Tokens:
    """Cursor over one expression with source positions for errors."""

    def __init__(self, text: str, line: int, col0: int):
        self.toks: list[tuple[str, str, int]] = []  # (kind, lexeme, col)
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            col = col0 + i
            m = _NUM_RE.match(text, i)
            if m:
                self.toks.append(("num", m.group(), col))
                i = m.end()
                continue
            m = _NAME_RE.match(text, i)
            if m:
                self.toks.append(("name", m.group(), col))
                i = m.end()
                continue
            if ch in "+-*^()":
                self.toks.append((ch, ch, col))
                i += 1
                continue
            if ch == "/":
                raise NonPolynomialError(
                    "division is not a polynomial construct", line, col
                )
            raise DslSyntaxError(f"unexpected character {ch!r}", line, col)
        self.toks.append(("end", "", col0 + len(text)))
        self.pos = 0
        self.line = line

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok


class _ExprParser:
    """Recursive descent over + - * ^ with unary sign."""

    def __init__(self, tokens: _Tokens, variables: tuple[str, ...],
                 parameters: dict[str, float]):
        self.t = tokens
        self.variables = variables
        self.parameters = parameters
        self.n = len(variables)

    def parse(self) -> Polynomial:
        p = self.expr()
        kind, lex, col = self.t.peek()
        if kind != "end":
            raise DslSyntaxError(f"unexpected {lex!r}", self.t.line, col)
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while True:
            kind, _, _ = self.t.peek()
            if kind == "+":
                self.t.take()
                p = p + self.term()
            elif kind == "-":
                self.t.take()
                p = p - self.term()
            else:
                return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.t.peek()[0] == "*":
            self.t.take()
            p = p * self.factor()
        return p

    def factor(self) -> Polynomial:
        kind, _, _ = self.t.peek()
        if kind in "+-":
            self.t.take()
            p = self.factor()
            return -p if kind == "-" else p
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.t.peek()[0] != "^":
            return base
        self.t.take()
        kind, lex, col = self.t.take()
        if kind != "num" or not lex.isdigit():
            raise DslSyntaxError(
                "exponent must be a non-negative integer literal", self.t.line, col
            )
        return base ** int(lex)

    def atom(self) -> Polynomial:
        kind, lex, col = self.t.take()
        if kind == "num":
            return Polynomial.constant(self.n, float(lex))
        if kind == "name":
            if self.t.peek()[0] == "(":
                raise NonPolynomialError(
                    f"call of {lex!r}: transcendental functions are not polynomial",
                    self.t.line, col,
                )
            if lex in self.variables:
                return Polynomial.variable(self.n, self.variables.index(lex))
            if lex in self.parameters:
                return Polynomial.constant(self.n, self.parameters[lex])
            raise UndeclaredNameError(
                f"{lex!r} is not a declared variable or parameter", self.t.line, col
            )
        if kind == "(":
            p = self.expr()
            kind2, lex2, col2 = self.t.take()
            if kind2 != ")":
                raise DslSyntaxError("expected ')'", self.t.line, col2)
            return p
        raise DslSyntaxError(
            f"expected a number, name or '(', got {lex!r}" if lex else
            "unexpected end of expression",
            self.t.line, col,
        )


def _parse_number(word: str, line: int, col: int) -> float:
    try:
        return float(word)
    except ValueError:
        raise DslSyntaxError(f"{word!r} is not a number", line, col) from None


def parse_system(text: str) -> SystemSpec:
    """Parse the input format into a fully numeric SystemSpec."""
    variables: tuple[str, ...] | None = None
    parameters: dict[str, float] = {}
    equilibrium: tuple[float, ...] | None = None
    basis_flat: list[float] | None = None
    equations: dict[str, Polynomial] = {}
    eqn_lines: dict[str, int] = {}

    statements = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        # ';' separates statements within one physical line
        offset = 0
        for piece in body.split(";"):
            statements.append((lineno, offset, piece))
            offset += len(piece) + 1

    for lineno, base_col, line in statements:
        line = line.rstrip()
        if not line.strip():
            continue
        stripped = line.lstrip()
        indent = base_col + len(line) - len(stripped)
        head = stripped.split(None, 1)[0]

        if head == "vars":
            if variables is not None:
                raise DslSyntaxError("duplicate 'vars' line", lineno, indent + 1)
            names = stripped.split()[1:]
            if not names:
                raise DslSyntaxError("'vars' needs at least one name", lineno, indent + 1)
            for name in names:
                if not _NAME_RE.fullmatch(name):
                    raise DslSyntaxError(f"bad variable name {name!r}", lineno, indent + 1)
            if len(set(names)) != len(names):
                raise DslSyntaxError("duplicate variable name", lineno, indent + 1)
            variables = tuple(names)
        elif head == "param":
            body = stripped[len("param"):]
            if "=" not in body:
                raise DslSyntaxError("expected 'param <name> = <number>'", lineno, indent + 1)
            name, value = body.split("=", 1)
            name = name.strip()
            if not _NAME_RE.fullmatch(name):
                raise DslSyntaxError(f"bad parameter name {name!r}", lineno, indent + 1)
            if name in parameters:
                raise DslSyntaxError(f"duplicate parameter {name!r}", lineno, indent + 1)
            parameters[name] = _parse_number(value.strip(), lineno,
                                             indent + 1 + len("param") + len(name))
        elif head == "equilibrium":
            words = stripped.split()[1:]
            equilibrium = tuple(_parse_number(w, lineno, indent + 1) for w in words)
        elif head == "basis":
            words = stripped.split()[1:]
            basis_flat = [_parse_number(w, lineno, indent + 1) for w in words]
        elif "=" in stripped and _EQN_LHS_RE.match(stripped.split("=", 1)[0].strip()):
            lhs, rhs = stripped.split("=", 1)
            var = _EQN_LHS_RE.match(lhs.strip()).group(1)
            if variables is None:
                raise DslSyntaxError("'vars' must come before equations", lineno, indent + 1)
            if var not in variables:
                raise UndeclaredNameError(f"equation for undeclared variable {var!r}",
                                          lineno, indent + 1)
            if var in equations:
                raise DslSyntaxError(f"duplicate equation for {var!r}", lineno, indent + 1)
            col0 = indent + 1 + len(lhs) + 1
            tokens = _Tokens(rhs, lineno, col0)
            equations[var] = _ExprParser(tokens, variables, parameters).parse()
            eqn_lines[var] = lineno
        else:
            raise DslSyntaxError(f"unrecognized directive {head!r}", lineno, indent + 1)

    if variables is None:
        raise DslSyntaxError("missing 'vars' line", 0, 0)
    missing = [v for v in variables if v not in equations]
    if missing:
        raise DslSyntaxError(f"missing equation for {missing[0]!r}", 0, 0)
    n = len(variables)
    if equilibrium is not None and len(equilibrium) != n:
        raise DslSyntaxError(
            f"equilibrium has {len(equilibrium)} entries, expected {n}", 0, 0
        )
    basis = None
    if basis_flat is not None:
        if len(basis_flat) != n * n:
            raise DslSyntaxError(
                f"basis has {len(basis_flat)} entries, expected {n * n}", 0, 0
            )
        basis = tuple(tuple(basis_flat[i * n:(i + 1) * n]) for i in range(n))

    return SystemSpec(
        variables=variables,
        parameters=parameters,
        field=PolyMap(equations[v] for v in variables),
        equilibrium=equilibrium,
        basis=basis,
    )


def render_system(spec: SystemSpec) -> str:
    """Canonical text for a SystemSpec; parse(render(spec)) == spec."""
    lines = ["vars " + " ".join(spec.variables)]
    for name, value in spec.parameters.items():
        lines.append(f"param {name} = {value!r}")
    if spec.equilibrium is not None:
        lines.append("equilibrium " + " ".join(repr(v) for v in spec.equilibrium))
    if spec.basis is not None:
        flat = [repr(v) for row in spec.basis for v in row]
        lines.append("basis " + " ".join(flat))
    for name, poly in zip(spec.variables, spec.field):
        lines.append(f"d{name}/dt = {poly.render(spec.variables)}")
    return "\n".join(lines) + "\n"


def shift_equilibrium(spec: SystemSpec, point, check: bool = True) -> SystemSpec:
    """Re-expand the field about ``point`` so the equilibrium sits at the origin.

    With ``check`` on (the public contract), a residual constant term above
    EQUILIBRIUM_TOL in any component raises NotAnEquilibriumError listing the
    per-component residuals.  ``check=False`` performs the bare coordinate
    shift, which is what the shift-then-unshift identity needs.
    """
    point = tuple(float(v) for v in point)
    n = spec.nvars
    if len(point) != n:
        raise DslSyntaxError(f"shift point has {len(point)} entries, expected {n}", 0, 0)
    subs = {
        i: Polynomial.variable(n, i) + Polynomial.constant(n, point[i])
        for i in range(n)
        if point[i] != 0.0
    }
    shifted = spec.field.substitute(subs, nvars_out=n) if subs else spec.field
    if check:
        origin = (0,) * n
        residuals = [
            (name, abs(p.coefficient(origin)))
            for name, p in zip(spec.variables, shifted)
        ]
        if any(r > EQUILIBRIUM_TOL for _, r in residuals):
            raise NotAnEquilibriumError(residuals)
    return replace(spec, field=shifted, equilibrium=(0.0,) * n)
