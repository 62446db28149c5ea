"""Concrete algebras from structure constants: axiom validation and exact
numerical verification of identities by substitution.

An algebra is given by exact rational structure constants for the bilinear
and trilinear operations on a chosen basis. The validator checks the six
defining axioms exhaustively on basis tuples (multilinearity makes that
sufficient). Algebras can be entered directly, taken from a Lie bracket
(trilinear operation zero), or derived from a binary product satisfying the
derivation identity {{a,b},c} = {{a,c},b} + {a,{b,c}} via the
skew-symmetrization [a,b] = {a,b} - {b,a} and ⟨a,b,c⟩ = {c,{a,b}}.

Identity checks substitute vectors for the variables and contract through
the structure constants; alternating identities are evaluated through the
determinant of the coordinate matrix, which keeps the n!-term alternation
exact and cheap.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction

from . import _perm, freealg
from ._data import data_text

__all__ = [
    "AlgebraSC",
    "LeibnizSC",
    "Violation",
    "CheckResult",
    "validate",
    "validate_leibniz",
    "from_leibniz",
    "from_lie",
    "evaluate",
    "check_identity",
    "load_algebra",
    "bundled_algebras",
]

MAX_VALIDATE_DIM = 16

Vector = tuple[Fraction, ...]


@dataclass(frozen=True)
class Violation:
    """A failed axiom with the first offending basis tuple (1-based)."""

    axiom: str
    witness: tuple[int, ...]

    def render(self) -> str:
        args = ", ".join(f"e{i}" for i in self.witness)
        return f"{self.axiom} fails at ({args})"


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class AlgebraSC:
    """Structure constants for one bilinear and one trilinear operation.

    c[i][j][k] is the e_k coefficient of [e_i, e_j]; t[i][j][k][l] the e_l
    coefficient of ⟨e_i, e_j, e_k⟩ (0-based internally, 1-based in files
    and witnesses). The constructor does not enforce the axioms — validate
    reports violations as data.
    """

    __slots__ = ("dimension", "name", "_c", "_t", "_brk", "_trp")

    def __init__(self, dimension: int, bilinear=None, trilinear=None, name: str = ""):
        if dimension < 1:
            raise ValueError("dimension must be positive")
        d = dimension
        zero3 = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
        zero4 = [[[[Fraction(0)] * d for _ in range(d)] for _ in range(d)] for _ in range(d)]
        c = bilinear if bilinear is not None else zero3
        t = trilinear if trilinear is not None else zero4
        object.__setattr__(self, "dimension", d)
        object.__setattr__(self, "name", name)
        object.__setattr__(
            self, "_c",
            tuple(tuple(tuple(_as_fraction(x) for x in row) for row in plane) for plane in c),
        )
        object.__setattr__(
            self, "_t",
            tuple(
                tuple(tuple(tuple(_as_fraction(x) for x in row) for row in plane) for plane in cube)
                for cube in t
            ),
        )
        if len(self._c) != d or any(len(p) != d or any(len(r) != d for r in p) for p in self._c):
            raise ValueError("bilinear table must be dimension^3")
        if len(self._t) != d or any(
            len(cu) != d or any(len(p) != d or any(len(r) != d for r in p) for p in cu)
            for cu in self._t
        ):
            raise ValueError("trilinear table must be dimension^4")
        brk = {}
        for i in range(d):
            for j in range(d):
                entries = {k: x for k, x in enumerate(self._c[i][j]) if x}
                if entries:
                    brk[i, j] = entries
        trp = {}
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    entries = {l: x for l, x in enumerate(self._t[i][j][k]) if x}
                    if entries:
                        trp[i, j, k] = entries
        object.__setattr__(self, "_brk", brk)
        object.__setattr__(self, "_trp", trp)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraSC is immutable")

    @classmethod
    def from_sparse(cls, dimension: int, bilinear=(), trilinear=(), name: str = "") -> "AlgebraSC":
        """Build from 1-based sparse entries (i, j, k, coeff) and (i, j, k, l, coeff)."""
        d = dimension
        c = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
        t = [[[[Fraction(0)] * d for _ in range(d)] for _ in range(d)] for _ in range(d)]
        for i, j, k, coeff in bilinear:
            c[i - 1][j - 1][k - 1] += _as_fraction(coeff)
        for i, j, k, l, coeff in trilinear:
            t[i - 1][j - 1][k - 1][l - 1] += _as_fraction(coeff)
        return cls(dimension, c, t, name=name)

    def zero(self) -> Vector:
        return (Fraction(0),) * self.dimension

    def bracket(self, u, v) -> Vector:
        out = [Fraction(0)] * self.dimension
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                entries = self._brk.get((i, j))
                if entries:
                    uv = ui * vj
                    for k, x in entries.items():
                        out[k] += uv * x
        return tuple(out)

    def triple(self, u, v, w) -> Vector:
        out = [Fraction(0)] * self.dimension
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                uv = ui * vj
                for k, wk in enumerate(w):
                    if not wk:
                        continue
                    entries = self._trp.get((i, j, k))
                    if entries:
                        uvw = uv * wk
                        for l, x in entries.items():
                            out[l] += uvw * x
        return tuple(out)

    def basis(self, i: int) -> Vector:
        """The 0-based i-th basis vector."""
        v = [Fraction(0)] * self.dimension
        v[i] = Fraction(1)
        return tuple(v)

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"AlgebraSC(dim={self.dimension}{tag})"


class LeibnizSC:
    """A binary product table; validate_leibniz checks the derivation identity."""

    __slots__ = ("dimension", "name", "_p", "_mul")

    def __init__(self, dimension: int, product=None, name: str = ""):
        if dimension < 1:
            raise ValueError("dimension must be positive")
        d = dimension
        p = product if product is not None else [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
        object.__setattr__(self, "dimension", d)
        object.__setattr__(self, "name", name)
        object.__setattr__(
            self, "_p",
            tuple(tuple(tuple(_as_fraction(x) for x in row) for row in plane) for plane in p),
        )
        if len(self._p) != d or any(len(pl) != d or any(len(r) != d for r in pl) for pl in self._p):
            raise ValueError("product table must be dimension^3")
        mul = {}
        for i in range(d):
            for j in range(d):
                entries = {k: x for k, x in enumerate(self._p[i][j]) if x}
                if entries:
                    mul[i, j] = entries
        object.__setattr__(self, "_mul", mul)

    def __setattr__(self, name, value):
        raise AttributeError("LeibnizSC is immutable")

    @classmethod
    def from_sparse(cls, dimension: int, product=(), name: str = "") -> "LeibnizSC":
        d = dimension
        p = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
        for i, j, k, coeff in product:
            p[i - 1][j - 1][k - 1] += _as_fraction(coeff)
        return cls(dimension, p, name=name)

    def product(self, u, v) -> Vector:
        out = [Fraction(0)] * self.dimension
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                entries = self._mul.get((i, j))
                if entries:
                    uv = ui * vj
                    for k, x in entries.items():
                        out[k] += uv * x
        return tuple(out)

    def basis(self, i: int) -> Vector:
        v = [Fraction(0)] * self.dimension
        v[i] = Fraction(1)
        return tuple(v)

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"LeibnizSC(dim={self.dimension}{tag})"


def _vadd(*vs) -> Vector:
    return tuple(sum(col) for col in zip(*vs))


def validate(alg: AlgebraSC) -> list[Violation]:
    """Check the six axioms on all basis tuples; empty list means valid.

    Reports the first witness per violated axiom. The trilinear-derivation
    axiom scans dimension^5 tuples, so dimensions beyond 16 are rejected.
    """
    d = alg.dimension
    if d > MAX_VALIDATE_DIM:
        raise ValueError(f"validation supports dimension <= {MAX_VALIDATE_DIM}, got {d}")
    B = [alg.basis(i) for i in range(d)]
    zero = alg.zero()
    out: list[Violation] = []

    def first(axiom, gen):
        for witness, ok in gen:
            if not ok:
                out.append(Violation(axiom, tuple(w + 1 for w in witness)))
                return

    first("LY1", (
        ((i, j), not any(_vadd(alg.bracket(B[i], B[j]), alg.bracket(B[j], B[i])))
         if i != j else alg.bracket(B[i], B[i]) == zero)
        for i in range(d) for j in range(i, d)
    ))
    first("LY2", (
        ((i, j, k), not any(_vadd(alg.triple(B[i], B[j], B[k]), alg.triple(B[j], B[i], B[k])))
         if i != j else alg.triple(B[i], B[i], B[k]) == zero)
        for i in range(d) for j in range(i, d) for k in range(d)
    ))

    def ly3():
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    s = zero
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        s = _vadd(s, alg.bracket(alg.bracket(B[a], B[b]), B[c]),
                                  alg.triple(B[a], B[b], B[c]))
                    yield (i, j, k), not any(s)

    first("LY3", ly3())

    def ly4():
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    for l in range(d):
                        s = zero
                        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                            s = _vadd(s, alg.triple(alg.bracket(B[a], B[b]), B[c], B[l]))
                        yield (i, j, k, l), not any(s)

    first("LY4", ly4())

    def ly5():
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    for l in range(d):
                        lhs = alg.triple(B[i], B[j], alg.bracket(B[k], B[l]))
                        rhs = _vadd(alg.bracket(alg.triple(B[i], B[j], B[k]), B[l]),
                                    alg.bracket(B[k], alg.triple(B[i], B[j], B[l])))
                        yield (i, j, k, l), lhs == rhs

    first("LY5", ly5())

    def ly6():
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    for l in range(d):
                        for e in range(d):
                            lhs = alg.triple(B[i], B[j], alg.triple(B[k], B[l], B[e]))
                            rhs = _vadd(
                                alg.triple(alg.triple(B[i], B[j], B[k]), B[l], B[e]),
                                alg.triple(B[k], alg.triple(B[i], B[j], B[l]), B[e]),
                                alg.triple(B[k], B[l], alg.triple(B[i], B[j], B[e])),
                            )
                            yield (i, j, k, l, e), lhs == rhs

    first("LY6", ly6())
    return out


def validate_leibniz(lb: LeibnizSC) -> list[Violation]:
    """Check {{a,b},c} = {{a,c},b} + {a,{b,c}} on all basis triples."""
    d = lb.dimension
    if d > MAX_VALIDATE_DIM:
        raise ValueError(f"validation supports dimension <= {MAX_VALIDATE_DIM}, got {d}")
    B = [lb.basis(i) for i in range(d)]
    for i in range(d):
        for j in range(d):
            for k in range(d):
                lhs = lb.product(lb.product(B[i], B[j]), B[k])
                rhs = _vadd(lb.product(lb.product(B[i], B[k]), B[j]),
                            lb.product(B[i], lb.product(B[j], B[k])))
                if lhs != rhs:
                    return [Violation("leibniz", (i + 1, j + 1, k + 1))]
    return []


def from_leibniz(lb: LeibnizSC) -> AlgebraSC:
    """The algebra carried by a product satisfying the derivation identity:
    [a,b] = {a,b} - {b,a} and ⟨a,b,c⟩ = {c,{a,b}}.

    Up to rescaling ([,] -> β[,] forces ⟨,,⟩ -> β²⟨,,⟩), this trilinear
    operation is the unique one of the form α{[a,b],c} + γ{c,[a,b]} for
    which every valid product yields a valid algebra: the cyclic axiom
    forces α + 2γ = 1 and the trilinear derivation axiom then pins
    (α, γ) = (0, ½); since {c,{b,a}} = -{c,{a,b}}, γ = ½ collapses to the
    form used here.
    """
    bad = validate_leibniz(lb)
    if bad:
        raise ValueError(f"not a valid product: {bad[0].render()}")
    d = lb.dimension
    B = [lb.basis(i) for i in range(d)]
    c = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    t = [[[[Fraction(0)] * d for _ in range(d)] for _ in range(d)] for _ in range(d)]
    for i in range(d):
        for j in range(d):
            skew = tuple(x - y for x, y in zip(lb.product(B[i], B[j]), lb.product(B[j], B[i])))
            c[i][j] = list(skew)
            inner = lb.product(B[i], B[j])
            for k in range(d):
                t[i][j][k] = list(lb.product(B[k], inner))
    return AlgebraSC(d, c, t, name=lb.name)


def from_lie(dimension: int, bilinear=(), name: str = "") -> AlgebraSC:
    """A Lie bracket as an algebra with zero trilinear operation (the cyclic
    axiom then reduces to the Jacobi identity; validate confirms)."""
    return AlgebraSC.from_sparse(dimension, bilinear=bilinear, name=name)


# -- evaluation ------------------------------------------------------------------


def _eval_tree(tree, alg: AlgebraSC, vectors):
    if isinstance(tree, int):
        return vectors[tree - 1]
    if tree[0] == 2:
        return alg.bracket(_eval_tree(tree[1], alg, vectors), _eval_tree(tree[2], alg, vectors))
    return alg.triple(
        _eval_tree(tree[1], alg, vectors),
        _eval_tree(tree[2], alg, vectors),
        _eval_tree(tree[3], alg, vectors),
    )


def _det(mat) -> Fraction:
    """Determinant of a small square matrix by Gaussian elimination."""
    m = [list(row) for row in mat]
    n = len(m)
    sign = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        for r in range(col + 1, n):
            if m[r][col]:
                factor = m[r][col] / m[col][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    out = Fraction(sign)
    for i in range(n):
        out *= m[i][i]
    return out


def _check_assignment(degree: int, alg: AlgebraSC, assignment):
    vectors = tuple(tuple(_as_fraction(x) for x in v) for v in assignment)
    if len(vectors) != degree:
        raise ValueError(f"need {degree} vectors, got {len(vectors)}")
    for v in vectors:
        if len(v) != alg.dimension:
            raise ValueError(f"vector of length {len(v)} in dimension {alg.dimension}")
    return vectors


def evaluate(item, alg: AlgebraSC, assignment) -> Vector:
    """Exact value of a polynomial or explicit identity at an assignment of
    one vector per variable.

    Alternating identities expand over the basis: the alternation of the
    coordinate products is the determinant of the selected coordinate
    matrix, and tuples with a repeated basis index drop out (equal rows),
    so only injective index tuples are walked.
    """
    from . import pipeline  # evaluation of ExplicitIdentity; late to avoid a cycle

    if isinstance(item, pipeline.ExplicitIdentity):
        n = item.degree
        vectors = _check_assignment(n, alg, assignment)
        offset = freealg.count_types(n).all - len(freealg.binary_types(n))
        trees = [
            (coeff, freealg.labeled_tree(freealg.Monomial(n, offset + j, _perm.identity(n))))
            for j, coeff in item.terms
        ]
        if not item.alternating:
            out = alg.zero()
            for coeff, tree in trees:
                out = _vadd(out, tuple(coeff * x for x in _eval_tree(tree, alg, vectors)))
            return out
        out = list(alg.zero())
        for idxs in itertools.permutations(range(alg.dimension), n):
            basis_vectors = [alg.basis(i) for i in idxs]
            det = None
            for coeff, tree in trees:
                val = _eval_tree(tree, alg, basis_vectors)
                if not any(val):
                    continue
                if det is None:
                    det = _det([[vectors[k][idxs[i]] for k in range(n)] for i in range(n)])
                    if not det:
                        break
                scale = coeff * det
                for l, x in enumerate(val):
                    if x:
                        out[l] += scale * x
        return tuple(out)

    poly: freealg.Polynomial = item
    vectors = _check_assignment(poly.degree, alg, assignment)
    out = alg.zero()
    for mono, coeff in poly.sorted_terms():
        val = _eval_tree(freealg.labeled_tree(mono), alg, vectors)
        out = _vadd(out, tuple(coeff * x for x in val))
    return out


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    assignments_checked: int
    witness: tuple | None = None
    value: Vector | None = None


EXHAUSTIVE_LIMIT = 10 ** 6


def check_identity(item, alg: AlgebraSC, trials: int = 20, seed: int = 0) -> CheckResult:
    """Evaluate on `trials` pseudorandom small-rational assignments, then on
    every basis tuple when dimension^degree is within reach; the first
    nonzero value is returned as a witness."""
    degree = item.degree
    d = alg.dimension
    rng = random.Random(seed)
    checked = 0

    def run(vectors):
        nonlocal checked
        value = evaluate(item, alg, vectors)
        checked += 1
        return value

    for _ in range(trials):
        vectors = tuple(
            tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(d))
            for _ in range(degree)
        )
        value = run(vectors)
        if any(value):
            return CheckResult(False, checked, vectors, value)
    if d ** degree <= EXHAUSTIVE_LIMIT:
        for combo in itertools.product(range(d), repeat=degree):
            vectors = tuple(alg.basis(i) for i in combo)
            value = run(vectors)
            if any(value):
                return CheckResult(False, checked, vectors, value)
    return CheckResult(True, checked)


# -- the algebra file format -------------------------------------------------------


def load_algebra(text: str) -> AlgebraSC:
    """Parse the JSON algebra format.

    Required fields: dimension, construction ("direct", "lie" or "leibniz").
    Constants are sparse 1-based lists with exact string coefficients:
    bilinear [i, j, k, "num/den"], trilinear [i, j, k, l, "num/den"], and
    for the leibniz construction a product table [i, j, k, "num/den"] from
    which both operations are derived.
    """
    doc = json.loads(text)
    dim = doc["dimension"]
    name = doc.get("name", "")
    construction = doc["construction"]
    if construction == "direct":
        return AlgebraSC.from_sparse(
            dim,
            bilinear=[(i, j, k, Fraction(c)) for i, j, k, c in doc.get("bilinear", [])],
            trilinear=[(i, j, k, l, Fraction(c)) for i, j, k, l, c in doc.get("trilinear", [])],
            name=name,
        )
    if construction == "lie":
        return from_lie(
            dim,
            bilinear=[(i, j, k, Fraction(c)) for i, j, k, c in doc.get("bilinear", [])],
            name=name,
        )
    if construction == "leibniz":
        lb = LeibnizSC.from_sparse(
            dim,
            product=[(i, j, k, Fraction(c)) for i, j, k, c in doc.get("product", [])],
            name=name,
        )
        return from_leibniz(lb)
    raise ValueError(f"unknown construction {construction!r}")


BUNDLED = (
    "zero",
    "cross_product",
    "nilpotent_leibniz",
    "nonlie_leibniz",
)


def bundled_algebras() -> dict[str, AlgebraSC]:
    """The sample algebras shipped with the package, keyed by name."""
    return {name: load_algebra(data_text(f"algebras/{name}.json")) for name in BUNDLED}
