"""Defining identities of the bilinear/trilinear structure and their liftings.

The seeds are the multilinear identities f (degree 3), g1 and g2 (degree 4),
and h (degree 5), written against canonical monomials. Lifting a degree-n
identity raises its degree by substituting a product for one variable or by
multiplying the whole identity into a new product; the generators of degree n
are the binary liftings of degree n-1 and the ternary liftings of degree n-2.

Each identity carries its lineage: the seed name followed by the lifting
steps that produced it. Replaying a lineage from the seed terms reproduces
the identity's polynomial exactly, which is the integrity check used in
tests and in serialized identity files.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import factorial

import numpy as np

from . import freealg, symrep
from .exactla import GF101, FieldSpec, IncrementalReducer

__all__ = [
    "Identity",
    "GenerationSet",
    "seed_identities",
    "lift_binary",
    "lift_ternary",
    "generate",
    "lifting_count",
    "replay",
    "identity_rows",
    "filter_redundant",
]

# seed terms as (coefficient, labeled tree); variables are 1-based
_SEED_TERMS: dict[str, tuple[tuple[int, object], ...]] = {
    "f": (
        (1, (2, (2, 1, 2), 3)),
        (-1, (2, (2, 1, 3), 2)),
        (1, (2, (2, 2, 3), 1)),
        (1, (3, 1, 2, 3)),
        (-1, (3, 1, 3, 2)),
        (1, (3, 2, 3, 1)),
    ),
    "g1": (
        (1, (3, (2, 1, 2), 3, 4)),
        (-1, (3, (2, 1, 3), 2, 4)),
        (1, (3, (2, 2, 3), 1, 4)),
    ),
    "g2": (
        (1, (3, 1, 2, (2, 3, 4))),
        (-1, (2, (3, 1, 2, 3), 4)),
        (1, (2, (3, 1, 2, 4), 3)),
    ),
    "h": (
        (1, (3, 1, 2, (3, 3, 4, 5))),
        (-1, (3, (3, 1, 2, 3), 4, 5)),
        (1, (3, (3, 1, 2, 4), 3, 5)),
        (-1, (3, 3, 4, (3, 1, 2, 5))),
    ),
}

Step = tuple


@dataclass(frozen=True)
class Identity:
    """A multilinear polynomial asserted to vanish, plus how it was built."""

    polynomial: freealg.Polynomial
    lineage: tuple[Step, ...]

    @property
    def degree(self) -> int:
        return self.polynomial.degree

    def render_lineage(self) -> str:
        bits = []
        for step in self.lineage:
            if step[0] == "seed":
                bits.append(step[1])
            elif len(step) == 1:
                bits.append(step[0])
            else:
                bits.append(f"{step[0]}({step[1]})")
        return " -> ".join(bits)

    def __repr__(self):
        return f"Identity({self.render_lineage()}, {len(self.polynomial)} terms)"


@dataclass(frozen=True)
class GenerationSet:
    """Ordered identities of one degree, unfiltered or rank-filtered."""

    degree: int
    identities: tuple[Identity, ...]
    filtered: bool = False
    ranks: dict | None = dc_field(default=None, compare=False)

    def __len__(self):
        return len(self.identities)


_tree_of = freealg.labeled_tree


def _poly_terms(poly: freealg.Polynomial):
    return [(c, _tree_of(m)) for m, c in poly.sorted_terms()]


def _substitute(tree, var: int, repl):
    if isinstance(tree, int):
        return repl if tree == var else tree
    return (tree[0], *(_substitute(c, var, repl) for c in tree[1:]))


def _apply_step(terms, degree: int, step: Step):
    """One lifting step on (coeff, tree) terms; returns (terms, new degree)."""
    kind = step[0]
    n = degree
    if kind == "binary-sub":
        i = step[1]
        out = [(c, _substitute(t, i, (2, i, n + 1))) for c, t in terms]
        return out, n + 1
    if kind == "binary-mul":
        return [(c, (2, t, n + 1)) for c, t in terms], n + 1
    if kind == "ternary-sub":
        i = step[1]
        out = [(c, _substitute(t, i, (3, i, n + 1, n + 2))) for c, t in terms]
        return out, n + 2
    if kind == "ternary-mul":
        pos = step[1]
        if pos == 1:
            return [(c, (3, t, n + 1, n + 2)) for c, t in terms], n + 2
        if pos == 3:
            return [(c, (3, n + 1, n + 2, t)) for c, t in terms], n + 2
        raise ValueError(f"ternary-mul position must be 1 or 3, got {pos}")
    raise ValueError(f"unknown lifting step {step!r}")


def seed_identities() -> dict[str, Identity]:
    return {
        name: Identity(freealg.expand(terms), (("seed", name),))
        for name, terms in _SEED_TERMS.items()
    }


def _lift(ident: Identity, steps: list[Step]) -> list[Identity]:
    if not ident.polynomial:
        return []
    terms = _poly_terms(ident.polynomial)
    out = []
    for step in steps:
        lifted, _ = _apply_step(terms, ident.degree, step)
        poly = freealg.expand(lifted)
        if poly:
            out.append(Identity(poly, ident.lineage + (step,)))
    return out


def lift_binary(ident: Identity) -> list[Identity]:
    """The n+1 binary liftings: substitutions at 1..n, then the multiplication."""
    n = ident.degree
    steps = [("binary-sub", i) for i in range(1, n + 1)] + [("binary-mul",)]
    return _lift(ident, steps)


def lift_ternary(ident: Identity) -> list[Identity]:
    """The n+2 ternary liftings: substitutions, then multiplications f.. and ..f."""
    n = ident.degree
    steps = [("ternary-sub", i) for i in range(1, n + 1)]
    steps += [("ternary-mul", 1), ("ternary-mul", 3)]
    return _lift(ident, steps)


def replay(lineage: tuple[Step, ...]) -> freealg.Polynomial:
    """Re-execute a lineage from its seed; must reproduce Identity.polynomial."""
    if not lineage or lineage[0][0] != "seed":
        raise ValueError(f"lineage must start with a seed step: {lineage!r}")
    name = lineage[0][1]
    if name not in _SEED_TERMS:
        raise ValueError(f"unknown seed {name!r}")
    terms = list(_SEED_TERMS[name])
    degree = max(_leaf_count(t) for _, t in terms)
    for step in lineage[1:]:
        terms, degree = _apply_step(terms, degree, step)
    return freealg.expand(terms)


def _leaf_count(tree) -> int:
    return 1 if isinstance(tree, int) else sum(_leaf_count(c) for c in tree[1:])


def lifting_count(n: int) -> int:
    """Number of lifted generators in degree n: (n+1)!/20 for n >= 4."""
    if n < 4:
        raise ValueError("the lifting count starts at degree 4")
    return factorial(n + 1) // 20


def generate(n: int, filtered_inputs: dict[int, GenerationSet] | None = None) -> GenerationSet:
    """All generators of degree n, in deterministic order.

    Degree 3 is the seed f; degree 4 is g1, g2 and the binary liftings of f;
    degree 5 is h, then binary liftings of degree 4, then ternary liftings of
    degree 3; beyond that every generator is lifted. filtered_inputs may map
    a source degree to a (typically filtered) GenerationSet to lift instead
    of the full one.
    """
    if n < 3:
        raise ValueError("identities start at degree 3")
    seeds = seed_identities()
    if n == 3:
        return GenerationSet(3, (seeds["f"],))

    def inputs(k: int) -> GenerationSet:
        if filtered_inputs and k in filtered_inputs:
            return filtered_inputs[k]
        return generate(k, filtered_inputs)

    out: list[Identity] = []
    if n == 4:
        out += [seeds["g1"], seeds["g2"]]
    if n == 5:
        out.append(seeds["h"])
    for ident in inputs(n - 1).identities:
        out += lift_binary(ident)
    if n >= 5:
        for ident in inputs(n - 2).identities:
            out += lift_ternary(ident)
    return GenerationSet(n, tuple(out))


# -- representation rows and rank filtering ------------------------------------


def identity_rows(ident: Identity | freealg.Polynomial, table: symrep.RepTable) -> np.ndarray:
    """Block row of one identity for one partition: d rows, m*d columns.

    Column block j holds the representation matrix of the identity's
    component in the j-th association type (deglex order, binary types last).
    """
    poly = ident.polynomial if isinstance(ident, Identity) else ident
    d = table.dim
    m = freealg.count_types(poly.degree).all
    out = np.zeros((d, m * d), dtype=np.int64)
    for ti, perms in poly.by_type().items():
        out[:, (ti - 1) * d : ti * d] = table.element(perms)
    return out


def filter_redundant(gen: GenerationSet, field: FieldSpec = GF101) -> GenerationSet:
    """Keep the identities that grow some partition's accumulated row space.

    Every identity is appended to every partition's reducer (no short
    circuit), so the kept set spans the same row space as the input in every
    partition; the final ranks are returned on the result.
    """
    pis = symrep.partitions(gen.degree)
    tables = [symrep.RepTable(pi, field) for pi in pis]
    reducers = [IncrementalReducer(freealg.count_types(gen.degree).all * t.dim, field) for t in tables]
    kept = []
    for ident in gen.identities:
        grew = False
        for table, red in zip(tables, reducers):
            if red.append(identity_rows(ident, table)):
                grew = True
        if grew:
            kept.append(ident)
    ranks = {pi: red.rank for pi, red in zip(pis, reducers)}
    return GenerationSet(gen.degree, tuple(kept), filtered=True, ranks=ranks)
