"""Exact-shape multivariate polynomial arithmetic over float coefficients.

A polynomial is a sparse map from exponent vectors (one non-negative
integer per variable, dense tuples) to coefficients.  Coefficients whose
magnitude falls below ``PRUNE_TOL`` are dropped on construction, so a
cancellation like (x^2 + y) + (-x^2) really yields ``y``.

Values are immutable after construction and safe to share across threads.
Term order everywhere is graded lexicographic: lower total degree first,
ties broken by descending exponent vector, so x^2 < x*y < y^2 within
degree two and rendered text is deterministic.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatchError

PRUNE_TOL = 1e-14

Monomial = tuple  # exponent vector, one entry per variable


def grlex_key(exps: Monomial):
    return (sum(exps), tuple(-e for e in exps))


def monomials_of_degree(nvars: int, degree: int) -> list[Monomial]:
    """All exponent vectors of the given total degree, in graded-lex order."""
    if nvars == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - first):
            out.append((first,) + rest)
    return out


class Polynomial:
    """Immutable sparse polynomial in ``nvars`` real variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping | Iterable = ()):
        if nvars < 1:
            raise ValueError("polynomial needs at least one variable")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, float] = {}
        for exps, coeff in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise DimensionMismatchError(
                    f"exponent vector {exps} has length {len(exps)}, expected {nvars}"
                )
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            acc[exps] = acc.get(exps, 0.0) + float(coeff)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(
            self, "terms", {e: c for e, c in acc.items() if abs(c) >= PRUNE_TOL}
        )

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value: float) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, index: int, coeff: float = 1.0) -> "Polynomial":
        if not 0 <= index < nvars:
            raise DimensionMismatchError(f"variable index {index} out of range")
        exps = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(nvars, {exps: coeff})

    @classmethod
    def linear_form(cls, row: Sequence[float]) -> "Polynomial":
        """The form row[0]*x0 + row[1]*x1 + ... in len(row) variables."""
        n = len(row)
        return cls(n, {tuple(1 if i == j else 0 for i in range(n)): row[j]
                       for j in range(n)})

    # -- inspection ---------------------------------------------------

    @property
    def degree(self) -> int:
        """Max total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def coefficient(self, exps: Monomial) -> float:
        return self.terms.get(tuple(exps), 0.0)

    def is_zero(self) -> bool:
        return not self.terms

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def sorted_terms(self) -> list[tuple[Monomial, float]]:
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    def homogeneous_part(self, degree: int) -> "Polynomial":
        return Polynomial(
            self.nvars, {e: c for e, c in self.terms.items() if sum(e) == degree}
        )

    # -- arithmetic ---------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.nvars != other.nvars:
            raise DimensionMismatchError(
                f"mixing polynomials in {self.nvars} and {other.nvars} variables"
            )

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = Polynomial.constant(self.nvars, other)
        self._check(other)
        acc = dict(self.terms)
        for e, c in other.terms.items():
            acc[e] = acc.get(e, 0.0) + c
        return Polynomial(self.nvars, acc)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = Polynomial.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Polynomial(
                self.nvars, {e: c * other for e, c in self.terms.items()}
            )
        self._check(other)
        acc: dict[Monomial, float] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                acc[key] = acc.get(key, 0.0) + c1 * c2
        return Polynomial(self.nvars, acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self.nvars, 1.0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    __hash__ = None

    def allclose(self, other: "Polynomial", tol: float = 1e-12) -> bool:
        self._check(other)
        keys = set(self.terms) | set(other.terms)
        return all(
            abs(self.terms.get(k, 0.0) - other.terms.get(k, 0.0)) <= tol for k in keys
        )

    # -- calculus and composition -------------------------------------

    def truncate(self, max_degree: int) -> "Polynomial":
        """Drop every term of total degree above ``max_degree``."""
        if max_degree < 0:
            raise ValueError("max_degree must be >= 0")
        return Polynomial(
            self.nvars, {e: c for e, c in self.terms.items() if sum(e) <= max_degree}
        )

    def partial(self, var: int) -> "Polynomial":
        """Formal partial derivative with respect to variable ``var``."""
        if not 0 <= var < self.nvars:
            raise DimensionMismatchError(f"variable index {var} out of range")
        acc: dict[Monomial, float] = {}
        for e, c in self.terms.items():
            if e[var] == 0:
                continue
            key = tuple(x - 1 if i == var else x for i, x in enumerate(e))
            acc[key] = acc.get(key, 0.0) + c * e[var]
        return Polynomial(self.nvars, acc)

    def compose_linear(self, matrix) -> "Polynomial":
        """Substitute x_i -> sum_j M[i][j] * u_j (new variables span M's input)."""
        rows = [list(map(float, row)) for row in matrix]
        if len(rows) != self.nvars or any(len(r) != self.nvars for r in rows):
            raise DimensionMismatchError(
                f"matrix must be {self.nvars}x{self.nvars} for this polynomial"
            )
        forms = [Polynomial.linear_form(r) for r in rows]
        return self._compose(forms, self.nvars)

    def substitute(self, subs: Mapping[int, "Polynomial"], nvars_out: int | None = None
                   ) -> "Polynomial":
        """Full composition: variable index -> replacement polynomial.

        Indices absent from ``subs`` map identically onto the target space,
        so the caller's variable order must embed into the target's.
        """
        target = nvars_out
        for p in subs.values():
            if target is None:
                target = p.nvars
            elif p.nvars != target:
                raise DimensionMismatchError(
                    "substituting polynomials live in inconsistent variable spaces"
                )
        if target is None:
            target = self.nvars
        reps = []
        for i in range(self.nvars):
            if i in subs:
                reps.append(subs[i])
            else:
                if i >= target:
                    raise DimensionMismatchError(
                        f"unsubstituted variable {i} has no slot in a "
                        f"{target}-variable target space"
                    )
                reps.append(Polynomial.variable(target, i))
        return self._compose(reps, target)

    def _compose(self, reps: list["Polynomial"], target: int) -> "Polynomial":
        # cache powers of each replacement; degrees here are always small
        pow_cache: list[dict[int, Polynomial]] = [
            {0: Polynomial.constant(target, 1.0)} for _ in reps
        ]

        def power(i: int, n: int) -> Polynomial:
            cache = pow_cache[i]
            if n not in cache:
                cache[n] = power(i, n - 1) * reps[i]
            return cache[n]

        out = Polynomial.zero(target)
        for e, c in self.terms.items():
            term = Polynomial.constant(target, c)
            for i, exp in enumerate(e):
                if exp:
                    term = term * power(i, exp)
            out = out + term
        return out

    def evaluate(self, point: Sequence[float]) -> float:
        if len(point) != self.nvars:
            raise DimensionMismatchError(
                f"point has {len(point)} coordinates, expected {self.nvars}"
            )
        total = 0.0
        for e, c in self.terms.items():
            val = c
            for x, k in zip(point, e):
                if k:
                    val *= x**k
            total += val
        return total

    # -- rendering ----------------------------------------------------

    def render(self, names: Sequence[str] | None = None) -> str:
        """Canonical text: graded-lex order, explicit ``^`` and ``*``."""
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        if len(names) != self.nvars:
            raise DimensionMismatchError("one name per variable required")
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            factors = [repr(abs(c))]
            for name, k in zip(names, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            body = "*".join(factors)
            if not pieces:
                pieces.append(f"-{body}" if c < 0 else body)
            else:
                pieces.append(f"- {body}" if c < 0 else f"+ {body}")
        return " ".join(pieces)

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.render()!r})"


class PolyMap:
    """Ordered tuple of polynomials over one shared variable space."""

    __slots__ = ("components",)

    def __init__(self, components: Iterable[Polynomial]):
        comps = tuple(components)
        if not comps:
            raise ValueError("a map needs at least one component")
        n = comps[0].nvars
        for p in comps:
            if p.nvars != n:
                raise DimensionMismatchError(
                    "all components must share one variable space"
                )
        object.__setattr__(self, "components", comps)

    def __setattr__(self, name, value):
        raise AttributeError("PolyMap is immutable")

    @property
    def nvars(self) -> int:
        return self.components[0].nvars

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i) -> Polynomial:
        return self.components[i]

    def __eq__(self, other):
        return isinstance(other, PolyMap) and self.components == other.components

    __hash__ = None

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.components)

    def max_abs_coeff(self) -> float:
        return max(p.max_abs_coeff() for p in self.components)

    def truncate(self, max_degree: int) -> "PolyMap":
        return PolyMap(p.truncate(max_degree) for p in self.components)

    def compose_linear(self, matrix) -> "PolyMap":
        return PolyMap(p.compose_linear(matrix) for p in self.components)

    def substitute(self, subs, nvars_out=None) -> "PolyMap":
        return PolyMap(p.substitute(subs, nvars_out) for p in self.components)

    def evaluate(self, point: Sequence[float]) -> list[float]:
        return [p.evaluate(point) for p in self.components]

    def evaluator(self):
        """Compile the map into a fast ``f(state) -> list`` closure."""
        data = [list(p.terms.items()) for p in self.components]

        def call(x):
            out = []
            for terms in data:
                total = 0.0
                for e, c in terms:
                    val = c
                    for xi, k in zip(x, e):
                        if k == 1:
                            val *= xi
                        elif k:
                            val *= xi**k
                    total += val
                out.append(total)
            return out

        return call

    def __repr__(self):
        inner = ", ".join(p.render() for p in self.components)
        return f"PolyMap([{inner}])"
