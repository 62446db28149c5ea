"""Per-partition consequence matrices and the search for new binary identities.

For a partition pi of n, the lifted identities fill a block matrix L_pi with
one d x d representation block per association type, binary types rightmost.
A row of RCF(L_pi) whose leading 1 falls in a binary block is zero everywhere
left of it, so it is an identity involving the bilinear operation alone; the
submatrix A_pi of such rows is measured against B_pi, the reduced
skew-symmetry relations of the binary types. A row of A_pi outside the row
space of B_pi is an identity the bilinear operation satisfies beyond
anticommutativity. In the sign representation the blocks are 1 x 1 and rows
are alternating sums, which is where the degree-8 identity appears.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _perm, freealg, liftgen, symrep
from .exactla import GF101, QQ, ExactMatrix, FieldSpec, IncrementalReducer

__all__ = [
    "ExplicitIdentity",
    "PartitionReport",
    "ResourceCaps",
    "CertifyResult",
    "build_L_pi",
    "reduce_identities",
    "extract_A_pi",
    "build_B_pi",
    "analyze_partition",
    "select_partitions",
    "analyze_degree",
    "default_generation",
    "reconstruct_identity",
    "alternation_polynomial",
    "certify_new",
    "report_payload",
    "timings_payload",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExplicitIdentity:
    """An identity of the bilinear operation: terms over binary types.

    terms pairs a binary type index (1-based within the degree's binary
    types) with an exact coefficient. With the alternating flag the identity
    is the sum over all sigma in S_n with sign epsilon(sigma) of the terms'
    bracketings applied to the permuted variables.
    """

    degree: int
    terms: tuple[tuple[int, object], ...]
    alternating: bool = True

    def __post_init__(self):
        if not self.terms:
            raise ValueError("an explicit identity needs at least one term")
        b = len(freealg.binary_types(self.degree))
        for j, coeff in self.terms:
            if not 1 <= j <= b:
                raise ValueError(f"binary type index {j} out of range 1..{b}")
            if not coeff:
                raise ValueError("zero coefficient in explicit identity")

    def render(self) -> str:
        n = self.degree
        offset = freealg.count_types(n).all - len(freealg.binary_types(n))
        lines = []
        if self.alternating:
            lines.append(
                f"sum over all sigma in S_{n}, with sign eps(sigma), applied to the variables of:"
            )
        mags = [str(abs(Fraction(c))) for _, c in self.terms]
        width = max(len(m) for m in mags)
        for (j, coeff), mag in zip(self.terms, mags):
            mono = freealg.Monomial(n, offset + j, _perm.identity(n))
            sgn = "+" if coeff > 0 else "-"
            lines.append(f"  {sgn} {mag:<{width}} {freealg.render_monomial(mono, pretty=True)}")
        return "\n".join(lines)


@dataclass(frozen=True)
class ResourceCaps:
    """Per-partition limits: basis rows held in memory and wall seconds."""

    max_rows: int | None = None
    max_seconds: float | None = None


@dataclass(frozen=True)
class CertifyResult:
    not_anticommutative_consequence: bool
    is_LY_consequence: bool


@dataclass(frozen=True)
class PartitionReport:
    partition: symrep.Partition
    dim: int
    field: FieldSpec
    a_rank: int | None
    c_rank: int | None
    new_rows: tuple[tuple, ...]
    status: str = "ok"
    seconds: float = 0.0

    @property
    def contains(self) -> bool | None:
        """True iff rowspace(A) is inside rowspace(B); None when aborted."""
        if self.status != "ok":
            return None
        return not self.new_rows


def _column_split(degree: int, d: int) -> tuple[int, int, int]:
    """(total columns, first binary column, binary columns) for one partition."""
    m = freealg.count_types(degree).all
    b = len(freealg.binary_types(degree))
    return m * d, (m - b) * d, b * d


def build_L_pi(gen: liftgen.GenerationSet, pi: symrep.Partition, field: FieldSpec) -> ExactMatrix:
    """Stacked block rows of every identity; binary types rightmost."""
    if pi.n != gen.degree:
        raise ValueError(f"partition of {pi.n} against degree-{gen.degree} identities")
    table = symrep.RepTable(pi, field)
    cols, _, _ = _column_split(gen.degree, table.dim)
    rows: list[list[int]] = []
    for ident in gen.identities:
        rows.extend(liftgen.identity_rows(ident, table).tolist())
    return ExactMatrix(field, cols, rows)


def reduce_identities(
    gen: liftgen.GenerationSet,
    pi: symrep.Partition,
    field: FieldSpec,
    caps: ResourceCaps | None = None,
) -> tuple[IncrementalReducer, str]:
    """Feed every identity's block rows through an incremental reducer.

    Returns the reducer and a status: "ok", or an aborted marker when a
    resource cap was hit (the reducer then holds a partial row space).
    """
    if pi.n != gen.degree:
        raise ValueError(f"partition of {pi.n} against degree-{gen.degree} identities")
    table = symrep.RepTable(pi, field)
    d = table.dim
    cols, _, _ = _column_split(gen.degree, d)
    red = IncrementalReducer(cols, field)
    start = time.monotonic()
    # batch identities so each append is one large matmul, capping the batch
    # row count so the reducer's float64 staging buffer stays near 128 MB
    chunk = max(1, min(2048, (1 << 24) // cols) // d)
    p = field.characteristic
    block: list[np.ndarray] = []
    for k, ident in enumerate(gen.identities):
        rows = liftgen.identity_rows(ident, table)
        # int8 keeps wide batches small; the reducer upcasts on append
        block.append(np.asarray(rows % p, dtype=np.int8) if p else rows)
        if len(block) == chunk or k + 1 == len(gen.identities):
            red.append(np.concatenate(block))
            block.clear()
            if caps and caps.max_rows is not None and red.rank > caps.max_rows:
                return red, "aborted-rows"
            if caps and caps.max_seconds is not None and time.monotonic() - start > caps.max_seconds:
                return red, "aborted-time"
    return red, "ok"


def extract_A_pi(l_rcf: ExactMatrix, degree: int) -> ExactMatrix:
    """Rows of RCF(L_pi) whose leading 1 sits in a binary block, restricted
    to the binary columns (echelon rows are zero left of their pivot)."""
    m = freealg.count_types(degree).all
    if l_rcf.cols % m:
        raise ValueError(f"{l_rcf.cols} columns do not split into {m} type blocks")
    d = l_rcf.cols // m
    _, first_binary, bcols = _column_split(degree, d)
    rows = []
    for row in l_rcf.entries:
        lead = next((i for i, x in enumerate(row) if x), None)
        if lead is not None and lead >= first_binary:
            rows.append(row[first_binary:])
    return ExactMatrix(l_rcf.field, bcols, rows)


def _skew_reducer(pi: symrep.Partition, degree: int, field: FieldSpec) -> IncrementalReducer:
    table = symrep.RepTable(pi, field)
    d = table.dim
    btypes = freealg.binary_types(degree)
    red = IncrementalReducer(len(btypes) * d, field)
    eye = np.eye(d, dtype=np.int64)
    for j, t in enumerate(btypes):
        for g in freealg.skew_generators(t):
            rows = np.zeros((d, len(btypes) * d), dtype=np.int64)
            rows[:, j * d : (j + 1) * d] = eye + table.matrix(g.perm).astype(np.int64)
            red.append(rows)
    return red


def build_B_pi(pi: symrep.Partition, degree: int, field: FieldSpec) -> ExactMatrix:
    """RCF'd nonzero rows of the binary skew-symmetry relations iota + sigma."""
    return _skew_reducer(pi, degree, field).snapshot()


def default_generation(n: int, filtered: bool = True) -> liftgen.GenerationSet:
    """The identities analyze_degree works from.

    Degrees 6 and 7 filter the full 252/2016 sets; degree 8 lifts the two
    filtered sets, giving the 1616 generators. filtered=False returns the
    full lifting sets everywhere.
    """
    if n <= 5 or not filtered:
        return liftgen.generate(n)
    f6 = liftgen.filter_redundant(liftgen.generate(6))
    if n == 6:
        return f6
    f7 = liftgen.filter_redundant(liftgen.generate(7))
    if n == 7:
        return f7
    return liftgen.generate(8, {6: f6, 7: f7})


def analyze_partition(
    pi: symrep.Partition,
    gen: liftgen.GenerationSet,
    field: FieldSpec,
    caps: ResourceCaps | None,
) -> PartitionReport:
    t0 = time.monotonic()
    d = pi.dimension
    _, first_binary, _ = _column_split(gen.degree, d)
    red, status = reduce_identities(gen, pi, field, caps)
    if status != "ok":
        return PartitionReport(pi, d, field, None, None, (), status, time.monotonic() - t0)
    a_rows = red.tail_rows(first_binary)
    skew = _skew_reducer(pi, gen.degree, field)
    new_rows = tuple(tuple(row) for row in a_rows if not skew.contains(row))
    report = PartitionReport(
        pi, d, field, len(a_rows), skew.rank, new_rows, "ok", time.monotonic() - t0
    )
    log.info(
        "degree %d partition %s: a_rank %d, c_rank %d, new rows %d (%.1fs)",
        gen.degree, pi.render(), report.a_rank, report.c_rank, len(new_rows), report.seconds,
    )
    return report


def select_partitions(n: int, selector) -> tuple[symrep.Partition, ...]:
    if selector == "all":
        return symrep.partitions(n)
    if selector == "sign":
        return (symrep.Partition((1,) * n),)
    out = []
    for item in selector:
        pi = symrep.parse_partition(item) if isinstance(item, str) else item
        if pi.n != n:
            raise ValueError(f"partition {pi.render()} is not a partition of {n}")
        out.append(pi)
    return tuple(out)


def analyze_degree(
    n: int,
    field: FieldSpec = GF101,
    partitions="all",
    generation: liftgen.GenerationSet | None = None,
    filtered: bool = True,
    caps: ResourceCaps | None = None,
) -> list[PartitionReport]:
    """Run the A_pi against B_pi comparison for the requested partitions."""
    if not 4 <= n <= 8:
        raise ValueError("analysis covers degrees 4 through 8")
    gen = generation if generation is not None else default_generation(n, filtered)
    if gen.degree != n:
        raise ValueError(f"degree-{gen.degree} generation set for a degree-{n} analysis")
    return [analyze_partition(pi, gen, field, caps) for pi in select_partitions(n, partitions)]


def reconstruct_identity(row, degree: int) -> ExplicitIdentity:
    """Turn a row of A_{1^n} (one entry per binary type) into an identity."""
    b = len(freealg.binary_types(degree))
    row = list(row)
    if len(row) != b:
        raise ValueError(f"expected {b} binary-type entries, got {len(row)}")
    terms = tuple((j + 1, x) for j, x in enumerate(row) if x)
    if not terms:
        raise ValueError("zero row does not define an identity")
    return ExplicitIdentity(degree, terms, alternating=True)


def alternation_polynomial(identity: ExplicitIdentity) -> freealg.Polynomial:
    """Expand the identity into the canonical monomial basis.

    Alternating identities expand over all of S_n with signs; n = 8 means
    40320 straightenings per term.
    """
    n = identity.degree
    offset = freealg.count_types(n).all - len(freealg.binary_types(n))
    terms = []
    for j, coeff in identity.terms:
        base = freealg.labeled_tree(freealg.Monomial(n, offset + j, _perm.identity(n)))
        if not identity.alternating:
            terms.append((coeff, base))
            continue
        for sigma in _perm.all_perms(n):
            terms.append((coeff * _perm.sign(sigma), _relabel(base, sigma)))
    return freealg.expand(terms)


def _relabel(tree, sigma: tuple[int, ...]):
    if isinstance(tree, int):
        return sigma[tree - 1]
    return (tree[0], *(_relabel(c, sigma) for c in tree[1:]))


def _phantom_type(t: freealg.AssocType) -> bool:
    """True when the alternating sum over the type cancels to zero: the sum
    vanishes exactly when some skew generator is an even permutation."""
    return any(g.sign == 1 for g in freealg.skew_generators(t))


def certify_new(
    identity: ExplicitIdentity,
    degree: int,
    field: FieldSpec = QQ,
    generation: liftgen.GenerationSet | None = None,
) -> CertifyResult:
    """Check a sign-representation identity against the skews and against
    the lifted identities: new means (True, True)."""
    if identity.degree != degree:
        raise ValueError(f"identity degree {identity.degree} does not match {degree}")
    if not identity.alternating:
        raise ValueError("certification applies to alternating (sign representation) identities")
    btypes = freealg.binary_types(degree)
    if all(_phantom_type(btypes[j - 1]) for j, _ in identity.terms):
        raise ValueError("degenerate identity: every term's alternation cancels to zero")
    sign = symrep.Partition((1,) * degree)
    vec = [0] * len(btypes)
    for j, coeff in identity.terms:
        vec[j - 1] = coeff
    skew = _skew_reducer(sign, degree, field)
    not_skew_consequence = not skew.contains(vec)
    gen = generation if generation is not None else (
        default_generation(degree) if degree >= 4 else liftgen.generate(degree)
    )
    red, status = reduce_identities(gen, sign, field)
    assert status == "ok"
    _, first_binary, _ = _column_split(degree, 1)
    padded = [0] * first_binary + vec
    return CertifyResult(not_skew_consequence, red.contains(padded))


# -- report serialization -------------------------------------------------------


def _entry_str(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def report_payload(degree: int, reports: list[PartitionReport], generated: int) -> dict:
    """Deterministic report body; wall times live in timings_payload."""
    fields = {rep.field.characteristic for rep in reports}
    return {
        "degree": degree,
        "characteristic": sorted(fields)[0] if len(fields) == 1 else sorted(fields),
        "identities": generated,
        "partitions": [
            {
                "partition": rep.partition.render(),
                "dim": rep.dim,
                "status": rep.status,
                "a_rank": rep.a_rank,
                "c_rank": rep.c_rank,
                "contains": rep.contains,
                "new_rows": [[_entry_str(x) for x in row] for row in rep.new_rows],
            }
            for rep in reports
        ],
    }


def timings_payload(reports: list[PartitionReport]) -> dict:
    return {
        "partitions": [
            {"partition": rep.partition.render(), "seconds": round(rep.seconds, 3)}
            for rep in reports
        ]
    }
