"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial is a mapping from monomials to nonzero ``Fraction`` coefficients.
Monomials are stored sparsely as tuples of ``(variable index, exponent)``
pairs, strictly increasing in the index, with no zero exponents; the empty
tuple is the unit monomial.  Variables live in a registry that assigns dense
indices in insertion order, and two polynomials interoperate only when they
share a registry (mixing registries raises ``RegistryMismatch``).

Canonical forms: equality is exact equality of term sets; printing orders
terms by descending (total degree, exponent vector) and factors inside a
monomial by descending variable index, so ``h^2 + 4*xp*xm`` renders exactly
like that once ``h`` precedes ``xm`` and ``xp`` in the registry.

The module also carries the exact linear algebra used everywhere else:

* determinants of polynomial matrices by Laplace expansion along the first
  row with minors memoised per column subset,
* matrix rank, either by randomised rational specialisation or by symbolic
  fraction-free (Bareiss) elimination with exact polynomial division,
* rational nullspaces in reduced-echelon parametrisation, dense and sparse.
"""

from __future__ import annotations

import ast
import random
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

Monomial = tuple[tuple[int, int], ...]
UNIT_MONOMIAL: Monomial = ()

_ZERO = Fraction(0)


class RegistryMismatch(ValueError):
    """Operands from different variable registries were combined."""


class MissingVariable(ValueError):
    """An evaluation or substitution does not cover a variable, or a name
    is not registered."""


class BudgetExceeded(RuntimeError):
    """A configured size budget would be exceeded."""


class VarId(NamedTuple):
    name: str
    index: int


class VarRegistry:
    """Assigns dense indices to unique variable names in insertion order."""

    __slots__ = ("_vars", "_by_name")

    def __init__(self, names: Iterable[str] = ()):
        self._vars: list[VarId] = []
        self._by_name: dict[str, VarId] = {}
        for name in names:
            self.add(name)

    def add(self, name: str) -> VarId:
        if name in self._by_name:
            raise ValueError(f"variable {name!r} already registered")
        vid = VarId(name, len(self._vars))
        self._vars.append(vid)
        self._by_name[name] = vid
        return vid

    def var(self, name: str) -> VarId:
        try:
            return self._by_name[name]
        except KeyError:
            raise MissingVariable(f"unknown variable {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __len__(self) -> int:
        return len(self._vars)

    @property
    def var_ids(self) -> tuple[VarId, ...]:
        return tuple(self._vars)

    def name_of(self, index: int) -> str:
        return self._vars[index].name

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, value) -> "Polynomial":
        c = Fraction(value)
        return Polynomial(self, {UNIT_MONOMIAL: c} if c else {})

    def poly(self, name, coeff=1) -> "Polynomial":
        """The variable `name` as a polynomial, optionally scaled."""
        vid = name if isinstance(name, VarId) else self.var(name)
        c = Fraction(coeff)
        return Polynomial(self, {((vid.index, 1),): c} if c else {})


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out: list[tuple[int, int]] = []
    ia = ib = 0
    while ia < len(a) and ib < len(b):
        va, ea = a[ia]
        vb, eb = b[ib]
        if va == vb:
            out.append((va, ea + eb))
            ia += 1
            ib += 1
        elif va < vb:
            out.append((va, ea))
            ia += 1
        else:
            out.append((vb, eb))
            ib += 1
    out.extend(a[ia:])
    out.extend(b[ib:])
    return tuple(out)


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_div(num: Monomial, den: Monomial) -> Monomial | None:
    """num / den as a monomial, or None when not divisible."""
    exps = dict(num)
    for v, e in den:
        r = exps.get(v, 0) - e
        if r < 0:
            return None
        if r:
            exps[v] = r
        else:
            exps.pop(v, None)
    return tuple(sorted(exps.items()))


def _dense_vector(m: Monomial, size: int) -> tuple[int, ...]:
    vec = [0] * size
    for i, e in m:
        vec[i] = e
    return tuple(vec)


class Polynomial:
    """Immutable sparse polynomial over one variable registry.

    Supports +, -, * (with polynomials or rational scalars), ** with a
    nonnegative integer, exact equality, partial derivatives, exact
    evaluation, and substitution of polynomials for variables.
    """

    __slots__ = ("registry", "terms")

    def __init__(self, registry: VarRegistry, terms: Mapping[Monomial, Fraction]):
        self.registry = registry
        self.terms = {m: c for m, c in terms.items() if c}

    # ------------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.registry is not self.registry:
                raise RegistryMismatch(
                    "operands come from different variable registries")
            return other
        if isinstance(other, (int, Fraction)):
            return self.registry.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.terms.items():
            s = out.get(m, _ZERO) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial(self.registry, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.registry,
                          {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return self.registry.zero()
            return Polynomial(self.registry,
                              {m: c * v for m, v in self.terms.items()})
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, _ZERO) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial(self.registry, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers take nonnegative integers")
        result = self.registry.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.registry is other.registry and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == self.registry.const(other).terms
        return NotImplemented

    __hash__ = None  # mutable dict inside; equality is structural

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    # ------------------------------------------------------------------
    def total_degree(self) -> int:
        return max((_mono_degree(m) for m in self.terms), default=0)

    def support_indices(self) -> frozenset[int]:
        out: set[int] = set()
        for m in self.terms:
            for i, _ in m:
                out.add(i)
        return frozenset(out)

    def variables(self) -> tuple[VarId, ...]:
        ids = sorted(self.support_indices())
        return tuple(self.registry.var_ids[i] for i in ids)

    def coefficient(self, mono) -> Fraction:
        """Coefficient of a monomial given as {name: exponent} or a raw key."""
        if isinstance(mono, Mapping):
            key = tuple(sorted((self.registry.var(n).index, e)
                               for n, e in mono.items() if e))
        else:
            key = tuple(mono)
        return self.terms.get(key, _ZERO)

    def partial(self, v) -> "Polynomial":
        vid = v if isinstance(v, VarId) else self.registry.var(v)
        idx = vid.index
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            for pos, (i, e) in enumerate(m):
                if i == idx:
                    if e == 1:
                        nm = m[:pos] + m[pos + 1:]
                    else:
                        nm = m[:pos] + ((i, e - 1),) + m[pos + 1:]
                    s = out.get(nm, _ZERO) + c * e
                    if s:
                        out[nm] = s
                    else:
                        out.pop(nm, None)
                    break
        return Polynomial(self.registry, out)

    def _resolve_assignment(self, assignment: Mapping) -> dict[int, Fraction]:
        amap: dict[int, Fraction] = {}
        for k, v in assignment.items():
            vid = k if isinstance(k, VarId) else self.registry.var(k)
            amap[vid.index] = Fraction(v)
        return amap

    def eval(self, assignment: Mapping) -> Fraction:
        """Exact evaluation; every variable present must be assigned."""
        amap = self._resolve_assignment(assignment)
        total = _ZERO
        for m, c in self.terms.items():
            prod = c
            for i, e in m:
                if i not in amap:
                    raise MissingVariable(
                        f"no value for {self.registry.name_of(i)!r}")
                prod *= amap[i] ** e
            total += prod
        return total

    def eval_float(self, assignment: Mapping) -> float:
        """Floating-point evaluation with the same coverage rule as eval."""
        amap = {}
        for k, v in assignment.items():
            vid = k if isinstance(k, VarId) else self.registry.var(k)
            amap[vid.index] = float(v)
        total = 0.0
        for m, c in self.terms.items():
            prod = float(c)
            for i, e in m:
                if i not in amap:
                    raise MissingVariable(
                        f"no value for {self.registry.name_of(i)!r}")
                prod *= amap[i] ** e
            total += prod
        return total

    def substitute(self, images: Mapping) -> "Polynomial":
        """Ring homomorphism sending each variable to its image polynomial.

        All images must share one registry (the target); variables of self
        without an image raise MissingVariable.  With no images the
        polynomial is returned unchanged.
        """
        if not images:
            return self
        imap: dict[int, Polynomial] = {}
        target: VarRegistry | None = None
        for k, img in images.items():
            vid = k if isinstance(k, VarId) else self.registry.var(k)
            if not isinstance(img, Polynomial):
                raise TypeError("substitution images must be polynomials")
            if target is None:
                target = img.registry
            elif img.registry is not target:
                raise RegistryMismatch(
                    "substitution images span several registries")
            imap[vid.index] = img
        assert target is not None
        pow_cache: dict[tuple[int, int], Polynomial] = {}
        out = target.zero()
        for m, c in self.terms.items():
            acc = target.const(c)
            for i, e in m:
                if i not in imap:
                    raise MissingVariable(
                        f"no image for {self.registry.name_of(i)!r}")
                key = (i, e)
                p = pow_cache.get(key)
                if p is None:
                    p = imap[i] ** e
                    pow_cache[key] = p
                acc = acc * p
            out = out + acc
        return out

    # ------------------------------------------------------------------
    def _sort_key(self, m: Monomial):
        return (_mono_degree(m), _dense_vector(m, len(self.registry)))

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in canonical order: descending (degree, exponent vector)."""
        return sorted(self.terms.items(), key=lambda mc: self._sort_key(mc[0]),
                      reverse=True)

    def _mono_text(self, m: Monomial) -> str:
        parts = []
        for i, e in reversed(m):
            name = self.registry.name_of(i)
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    def text(self) -> str:
        if not self.terms:
            return "0"
        chunks: list[str] = []
        for m, c in self.sorted_terms():
            mono = self._mono_text(m)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not chunks:
                chunks.append(body if c > 0 else f"-{body}")
            else:
                chunks.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(chunks)

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"Polynomial({self.text()})"

    def to_json(self) -> dict:
        return {"terms": [
            {"coeff": str(c),
             "monomial": {self.registry.name_of(i): e for i, e in reversed(m)}}
            for m, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, registry: VarRegistry, data: Mapping) -> "Polynomial":
        out: dict[Monomial, Fraction] = {}
        for term in data["terms"]:
            mono = tuple(sorted((registry.var(n).index, int(e))
                                for n, e in term["monomial"].items()))
            c = Fraction(term["coeff"])
            if c:
                out[mono] = out.get(mono, _ZERO) + c
        return cls(registry, out)


def parse_polynomial(text: str, registry: VarRegistry) -> Polynomial:
    """Parse an arithmetic expression (+, -, *, /, **, ^ and parentheses)
    over registered variable names and rational literals."""
    try:
        node = ast.parse(text.replace("^", "**").strip(), mode="eval").body
    except SyntaxError as exc:
        raise ValueError(f"cannot parse polynomial: {exc}") from None

    def walk(nd) -> Polynomial:
        if isinstance(nd, ast.BinOp):
            if isinstance(nd.op, ast.Add):
                return walk(nd.left) + walk(nd.right)
            if isinstance(nd.op, ast.Sub):
                return walk(nd.left) - walk(nd.right)
            if isinstance(nd.op, ast.Mult):
                return walk(nd.left) * walk(nd.right)
            if isinstance(nd.op, ast.Div):
                right = walk(nd.right)
                if right.support_indices():
                    raise ValueError("division only by rational constants")
                c = right.coefficient({})
                if not c:
                    raise ValueError("division by zero")
                return walk(nd.left) * (Fraction(1) / c)
            if isinstance(nd.op, ast.Pow):
                right = nd.right
                if isinstance(right, ast.Constant) and isinstance(right.value, int):
                    return walk(nd.left) ** right.value
                raise ValueError("exponents must be literal nonnegative integers")
            raise ValueError("unsupported operator")
        if isinstance(nd, ast.UnaryOp):
            if isinstance(nd.op, ast.USub):
                return -walk(nd.operand)
            if isinstance(nd.op, ast.UAdd):
                return walk(nd.operand)
            raise ValueError("unsupported unary operator")
        if isinstance(nd, ast.Name):
            return registry.poly(nd.id)
        if isinstance(nd, ast.Constant):
            if isinstance(nd.value, int):
                return registry.const(nd.value)
            if isinstance(nd.value, float):
                return registry.const(Fraction(str(nd.value)))
            raise ValueError(f"unsupported literal {nd.value!r}")
        raise ValueError(f"unsupported expression node {type(nd).__name__}")

    return walk(node)


# ----------------------------------------------------------------------
# Matrices


class PolyMatrix:
    """Dense rectangular matrix of polynomials from one registry."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[Polynomial]):
        if rows < 1 or cols < 1:
            raise ValueError("matrix dimensions must be positive")
        if len(entries) != rows * cols:
            raise ValueError("entry count does not match dimensions")
        reg = entries[0].registry
        for e in entries:
            if e.registry is not reg:
                raise RegistryMismatch("matrix entries mix registries")
        self.rows = rows
        self.cols = cols
        self.entries = tuple(entries)

    @classmethod
    def from_rows(cls, rows_: Sequence[Sequence[Polynomial]]) -> "PolyMatrix":
        nrows = len(rows_)
        ncols = len(rows_[0])
        flat: list[Polynomial] = []
        for r in rows_:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            flat.extend(r)
        return cls(nrows, ncols, flat)

    @property
    def registry(self) -> VarRegistry:
        return self.entries[0].registry

    def at(self, i: int, j: int) -> Polynomial:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Polynomial, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.cols, self.rows,
                          [self.at(i, j) for j in range(self.cols)
                           for i in range(self.rows)])

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("inner dimensions differ")
        out: list[Polynomial] = []
        for i in range(self.rows):
            for j in range(other.cols):
                acc = self.registry.zero()
                for k in range(self.cols):
                    a = self.at(i, k)
                    b = other.at(k, j)
                    if a and b:
                        acc = acc + a * b
                out.append(acc)
        return PolyMatrix(self.rows, other.cols, out)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return PolyMatrix(self.rows, self.cols,
                          [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return PolyMatrix(self.rows, self.cols,
                          [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "PolyMatrix":
        return PolyMatrix(self.rows, self.cols, [-e for e in self.entries])

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix(self.rows, self.cols, [fn(e) for e in self.entries])

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and \
            all(a == b for a, b in zip(self.entries, other.entries))

    __hash__ = None

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.at(i, j) == self.at(j, i)
            for i in range(self.rows) for j in range(i + 1, self.cols))

    def is_antisymmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(self.at(i, j) == -self.at(j, i)
                   for i in range(self.rows) for j in range(i, self.cols))

    def eval(self, assignment: Mapping) -> list[list[Fraction]]:
        return [[self.at(i, j).eval(assignment) for j in range(self.cols)]
                for i in range(self.rows)]

    def constant_entries(self) -> list[list[Fraction]]:
        """Entries as rationals; raises if any entry has positive degree."""
        out: list[list[Fraction]] = []
        for i in range(self.rows):
            row = []
            for j in range(self.cols):
                e = self.at(i, j)
                if e.support_indices():
                    raise ValueError("matrix entry is not constant")
                row.append(e.coefficient({}))
            out.append(row)
        return out


def det(matrix: PolyMatrix) -> Polynomial:
    """Determinant by Laplace expansion along the first remaining row,
    with minors memoised per column subset."""
    if matrix.rows != matrix.cols:
        raise ValueError("determinant of a non-square matrix")
    size = matrix.rows
    reg = matrix.registry
    memo: dict[int, Polynomial] = {0: reg.one()}

    def minor(colmask: int) -> Polynomial:
        cached = memo.get(colmask)
        if cached is not None:
            return cached
        row = size - bin(colmask).count("1")
        acc: dict[Monomial, Fraction] = {}
        sign = 1
        mask = colmask
        while mask:
            low = mask & -mask
            j = low.bit_length() - 1
            entry = matrix.at(row, j)
            if entry:
                sub = minor(colmask ^ low)
                prod = entry * sub
                for m, c in prod.terms.items():
                    s = acc.get(m, _ZERO) + (c if sign > 0 else -c)
                    if s:
                        acc[m] = s
                    else:
                        acc.pop(m, None)
            sign = -sign
            mask ^= low
        result = Polynomial(reg, acc)
        memo[colmask] = result
        return result

    return minor((1 << size) - 1)


def _leading(p: Polynomial) -> tuple[Monomial, Fraction]:
    size = len(p.registry)
    m = max(p.terms, key=lambda mm: (_mono_degree(mm), _dense_vector(mm, size)))
    return m, p.terms[m]


def exact_div(num: Polynomial, den: Polynomial) -> Polynomial:
    """Exact polynomial division; raises ArithmeticError when not exact."""
    if den.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    reg = num.registry
    dm, dc = _leading(den)
    quo = reg.zero()
    rem = num
    while rem.terms:
        rm, rc = _leading(rem)
        qm = _mono_div(rm, dm)
        if qm is None:
            raise ArithmeticError("polynomial division is not exact")
        q = Polynomial(reg, {qm: rc / dc})
        quo = quo + q
        rem = rem - q * den
    return quo


def _rank_fraction_free(matrix: PolyMatrix) -> int:
    """Symbolic rank via Bareiss fraction-free elimination."""
    m = [[matrix.at(i, j) for j in range(matrix.cols)]
         for i in range(matrix.rows)]
    reg = matrix.registry
    prev = reg.one()
    r = 0
    for c in range(matrix.cols):
        pivot = next((i for i in range(r, matrix.rows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, matrix.rows):
            if not any(m[i][cc] for cc in range(c, matrix.cols)):
                continue
            for cc in range(c + 1, matrix.cols):
                num = m[r][c] * m[i][cc] - m[i][c] * m[r][cc]
                m[i][cc] = exact_div(num, prev) if not num.is_zero else num
            m[i][c] = reg.zero()
        prev = m[r][c]
        r += 1
        if r == matrix.rows:
            break
    return r


def rank(matrix: PolyMatrix, strategy: str = "specialize", *,
         seed: int = 0, trials: int = 3) -> int:
    """Rank of a polynomial matrix.

    specialize: evaluate at random rational points (numerators uniform in
    [-10^6, 10^6]) and take the maximum exact rank over `trials` draws.
    exact_symbolic: fraction-free symbolic elimination.
    """
    if strategy == "exact_symbolic":
        return _rank_fraction_free(matrix)
    if strategy != "specialize":
        raise ValueError(f"unknown rank strategy {strategy!r}")
    rng = random.Random(seed)
    best = 0
    var_ids = matrix.registry.var_ids
    for _ in range(max(1, trials)):
        assignment = {v: Fraction(rng.randint(-10 ** 6, 10 ** 6))
                      for v in var_ids}
        best = max(best, rank_rational(matrix.eval(assignment)))
    return best


# ----------------------------------------------------------------------
# Rational linear algebra


def rank_rational(rows: Sequence[Sequence[Fraction]]) -> int:
    """Exact rank of a rational matrix by Gaussian elimination."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = Fraction(1) / m[r][c]
        for i in range(r + 1, len(m)):
            if m[i][c]:
                f = m[i][c] * inv
                for cc in range(c, ncols):
                    m[i][cc] -= f * m[r][cc]
        r += 1
        if r == len(m):
            break
    return r


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (matrix, pivot column list)."""
    m = [list(map(Fraction, r)) for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace(rows: Sequence[Sequence[Fraction]],
              ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right nullspace, one vector per free column, in the
    deterministic reduced-echelon parametrisation."""
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for an empty system")
        ncols = len(rows[0])
    reduced, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis: list[list[Fraction]] = []
    for f in free:
        v = [_ZERO] * ncols
        v[f] = Fraction(1)
        for r_i, p in enumerate(pivots):
            v[p] = -reduced[r_i][f]
        basis.append(v)
    return basis


def sparse_nullspace(rows: Iterable[Mapping[int, Fraction]],
                     ncols: int) -> list[list[Fraction]]:
    """Nullspace basis for a system given as sparse rows {col: coeff}.

    Produces the same reduced-echelon parametrisation as `nullspace`,
    independent of row order redundancy.
    """
    pivot_rows: dict[int, dict[int, Fraction]] = {}
    for raw in rows:
        r = {c: Fraction(v) for c, v in raw.items() if v}
        # eliminate every pivot column present, smallest first
        while r:
            pcols = sorted(c for c in r if c in pivot_rows)
            if not pcols:
                break
            c = pcols[0]
            f = r.pop(c)
            for cc, vv in pivot_rows[c].items():
                if cc == c:
                    continue
                nv = r.get(cc, _ZERO) - f * vv
                if nv:
                    r[cc] = nv
                else:
                    r.pop(cc, None)
        if not r:
            continue
        c = min(r)
        inv = Fraction(1) / r[c]
        row = {cc: vv * inv for cc, vv in r.items()}
        # keep earlier pivot rows fully reduced
        for pc, pr in pivot_rows.items():
            if c in pr:
                f = pr.pop(c)
                for cc, vv in row.items():
                    if cc == c:
                        continue
                    nv = pr.get(cc, _ZERO) - f * vv
                    if nv:
                        pr[cc] = nv
                    else:
                        pr.pop(cc, None)
        pivot_rows[c] = row
    free = [c for c in range(ncols) if c not in pivot_rows]
    basis: list[list[Fraction]] = []
    for f in free:
        v = [_ZERO] * ncols
        v[f] = Fraction(1)
        for p, pr in pivot_rows.items():
            if f in pr:
                v[p] = -pr[f]
        basis.append(v)
    return basis
