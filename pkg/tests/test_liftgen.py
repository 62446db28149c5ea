"""Seeds, liftings, generation counts, lineage replay, and the rank filter."""

from fractions import Fraction
from math import factorial

import pytest

from lyident import freealg, liftgen, symrep
from lyident.exactla import GF101, QQ, IncrementalReducer


def signed_renders(poly):
    return [
        ("+" if c > 0 else "-") + freealg.render_monomial(m)
        for m, c in poly.sorted_terms()
    ]


SEED_RENDERS = {
    "f": ["+<abc>", "-<acb>", "+<bca>", "+[[ab]c]", "-[[ac]b]", "+[[bc]a]"],
    "g1": ["+<[ab]cd>", "-<[ac]bd>", "+<[bc]ad>"],
    "g2": ["-[<abc>d]", "+[<abd>c]", "+<ab[cd]>"],
    "h": ["+<ab<cde>>", "-<cd<abe>>", "-<<abc>de>", "+<<abd>ce>"],
}


class TestSeeds:
    def test_seed_polynomials(self):
        seeds = liftgen.seed_identities()
        assert set(seeds) == {"f", "g1", "g2", "h"}
        for name, expected in SEED_RENDERS.items():
            assert signed_renders(seeds[name].polynomial) == expected

    def test_seed_degrees_and_lineage(self):
        seeds = liftgen.seed_identities()
        assert [seeds[k].degree for k in ("f", "g1", "g2", "h")] == [3, 4, 4, 5]
        assert seeds["f"].lineage == (("seed", "f"),)
        assert seeds["h"].render_lineage() == "h"

    def test_seed_coefficients_are_units(self):
        for ident in liftgen.seed_identities().values():
            assert all(c in (1, -1) for _, c in ident.polynomial.sorted_terms())


class TestLiftings:
    def test_binary_lifting_count_and_lineage(self):
        f = liftgen.seed_identities()["f"]
        lifted = liftgen.lift_binary(f)
        assert [i.lineage[-1] for i in lifted] == [
            ("binary-sub", 1),
            ("binary-sub", 2),
            ("binary-sub", 3),
            ("binary-mul",),
        ]
        assert all(i.degree == 4 for i in lifted)

    def test_ternary_lifting_count_and_lineage(self):
        f = liftgen.seed_identities()["f"]
        lifted = liftgen.lift_ternary(f)
        assert [i.lineage[-1] for i in lifted] == [
            ("ternary-sub", 1),
            ("ternary-sub", 2),
            ("ternary-sub", 3),
            ("ternary-mul", 1),
            ("ternary-mul", 3),
        ]
        assert all(i.degree == 5 for i in lifted)

    def test_binary_substitution_golden(self):
        # f with a -> [a,d]; note the reorientation sign on [[ad][bc]]
        f = liftgen.seed_identities()["f"]
        got = signed_renders(liftgen.lift_binary(f)[0].polynomial)
        assert got == [
            "+<bc[ad]>",
            "+<[ad]bc>",
            "-<[ad]cb>",
            "-[[ad][bc]]",
            "+[[[ad]b]c]",
            "-[[[ad]c]b]",
        ]

    def test_binary_multiplication_golden(self):
        f = liftgen.seed_identities()["f"]
        got = signed_renders(liftgen.lift_binary(f)[3].polynomial)
        assert got == [
            "+[<abc>d]",
            "-[<acb>d]",
            "+[<bca>d]",
            "+[[[ab]c]d]",
            "-[[[ac]b]d]",
            "+[[[bc]a]d]",
        ]

    def test_ternary_multiplication_golden(self):
        f = liftgen.seed_identities()["f"]
        got = signed_renders(liftgen.lift_ternary(f)[4].polynomial)
        assert got == [
            "+<de<abc>>",
            "-<de<acb>>",
            "+<de<bca>>",
            "+<de[[ab]c]>",
            "-<de[[ac]b]>",
            "+<de[[bc]a]>",
        ]

    def test_lifting_preserves_term_count_here(self):
        # no cancellation occurs in these liftings, only reorientation signs
        f = liftgen.seed_identities()["f"]
        for ident in liftgen.lift_binary(f) + liftgen.lift_ternary(f):
            assert len(ident.polynomial) == 6

    def test_zero_polynomial_lifts_to_nothing(self):
        zero = liftgen.Identity(freealg.Polynomial(3), (("seed", "f"),))
        assert liftgen.lift_binary(zero) == []
        assert liftgen.lift_ternary(zero) == []

    def test_bad_ternary_position(self):
        with pytest.raises(ValueError, match="position"):
            liftgen._apply_step([(1, (2, 1, 2))], 2, ("ternary-mul", 2))


class TestGenerate:
    def test_sizes(self):
        assert [len(liftgen.generate(n)) for n in (3, 4, 5, 6)] == [1, 6, 36, 252]

    def test_degree_4_order(self):
        lineages = [i.render_lineage() for i in liftgen.generate(4).identities]
        assert lineages == [
            "g1",
            "g2",
            "f -> binary-sub(1)",
            "f -> binary-sub(2)",
            "f -> binary-sub(3)",
            "f -> binary-mul",
        ]

    def test_degree_5_starts_with_h_then_binary_then_ternary(self):
        lineages = [i.render_lineage() for i in liftgen.generate(5).identities]
        assert lineages[0] == "h"
        assert lineages[1] == "g1 -> binary-sub(1)"
        assert lineages[-1] == "f -> ternary-mul(3)"
        assert sum(1 for s in lineages if s.endswith("ternary-mul(1)")) == 1

    def test_all_degrees_match(self):
        for n in (3, 4, 5):
            g = liftgen.generate(n)
            assert g.degree == n and not g.filtered
            assert all(i.degree == n for i in g.identities)

    def test_filtered_inputs_are_used(self):
        g4 = liftgen.generate(4)
        small = liftgen.GenerationSet(4, g4.identities[:2], filtered=True)
        g5 = liftgen.generate(5, {4: small})
        # h + 2 * 5 binary liftings + 5 ternary liftings of f
        assert len(g5) == 1 + 10 + 5

    def test_rejects_tiny_degrees(self):
        with pytest.raises(ValueError):
            liftgen.generate(2)


class TestCounts:
    def test_lifting_count_values(self):
        assert [liftgen.lifting_count(n) for n in range(4, 9)] == [
            6,
            36,
            252,
            2016,
            18144,
        ]

    def test_lifting_count_formula_and_recurrence(self):
        for n in range(4, 30):
            assert Fraction(factorial(n + 1), 20) == liftgen.lifting_count(n)
        for n in range(6, 30):
            assert liftgen.lifting_count(n) == n * (
                liftgen.lifting_count(n - 1) + liftgen.lifting_count(n - 2)
            )

    def test_generate_matches_lifting_count(self):
        for n in (4, 5, 6):
            assert len(liftgen.generate(n)) == liftgen.lifting_count(n)

    def test_lifting_count_domain(self):
        with pytest.raises(ValueError):
            liftgen.lifting_count(3)


class TestReplay:
    def test_replay_reproduces_generate_5(self):
        for ident in liftgen.generate(5).identities:
            assert liftgen.replay(ident.lineage) == ident.polynomial

    def test_replay_spot_check_degree_6(self):
        g6 = liftgen.generate(6)
        for ident in g6.identities[::25]:
            assert liftgen.replay(ident.lineage) == ident.polynomial

    def test_replay_rejects_bad_lineages(self):
        with pytest.raises(ValueError):
            liftgen.replay(())
        with pytest.raises(ValueError):
            liftgen.replay((("binary-mul",),))
        with pytest.raises(ValueError):
            liftgen.replay((("seed", "nope"),))


class TestIdentityRows:
    def test_degree_3_sign_partition(self):
        f = liftgen.seed_identities()["f"]
        tab = symrep.RepTable(symrep.Partition((1, 1, 1)), QQ)
        assert liftgen.identity_rows(f, tab).tolist() == [[3, 3]]

    def test_degree_3_trivial_partition(self):
        f = liftgen.seed_identities()["f"]
        tab = symrep.RepTable(symrep.Partition((3,)), QQ)
        assert liftgen.identity_rows(f, tab).tolist() == [[1, 1]]

    def test_degree_3_standard_partition(self):
        f = liftgen.seed_identities()["f"]
        tab = symrep.RepTable(symrep.Partition((2, 1)), QQ)
        assert liftgen.identity_rows(f, tab).tolist() == [
            [1, 0, 1, 0],
            [-2, 0, -2, 0],
        ]

    def test_shape(self):
        g1 = liftgen.seed_identities()["g1"]
        tab = symrep.RepTable(symrep.Partition((2, 1, 1)), GF101)
        rows = liftgen.identity_rows(g1, tab)
        assert rows.shape == (3, freealg.count_types(4).all * 3)


DEG4_KEPT = [
    "g1",
    "g2",
    "f -> binary-sub(1)",
    "f -> binary-sub(2)",
    "f -> binary-mul",
]

DEG4_RANKS = {"4": 4, "3+1": 10, "2^2": 7, "2+1^2": 10, "1^4": 4}

DEG5_KEPT = [
    "h",
    "g1 -> binary-sub(1)",
    "g1 -> binary-sub(2)",
    "g1 -> binary-sub(4)",
    "g1 -> binary-mul",
    "g2 -> binary-sub(1)",
    "g2 -> binary-sub(3)",
    "g2 -> binary-mul",
    "f -> binary-sub(1) -> binary-sub(1)",
    "f -> binary-sub(1) -> binary-sub(2)",
    "f -> binary-sub(1) -> binary-mul",
    "f -> binary-mul -> binary-mul",
    "f -> ternary-sub(1)",
    "f -> ternary-mul(1)",
]

DEG5_RANKS = {
    "5": 10,
    "4+1": 40,
    "3+2": 50,
    "3+1^2": 61,
    "2^2+1": 50,
    "2+1^3": 41,
    "1^5": 11,
}


class TestFilter:
    def test_degree_4(self):
        filt = liftgen.filter_redundant(liftgen.generate(4))
        assert filt.filtered and filt.degree == 4
        assert [i.render_lineage() for i in filt.identities] == DEG4_KEPT
        assert {pi.render(): r for pi, r in filt.ranks.items()} == DEG4_RANKS

    def test_degree_4_rational_field_agrees(self):
        filt = liftgen.filter_redundant(liftgen.generate(4), QQ)
        assert [i.render_lineage() for i in filt.identities] == DEG4_KEPT
        assert {pi.render(): r for pi, r in filt.ranks.items()} == DEG4_RANKS

    def test_degree_5(self):
        filt = liftgen.filter_redundant(liftgen.generate(5))
        assert [i.render_lineage() for i in filt.identities] == DEG5_KEPT
        assert {pi.render(): r for pi, r in filt.ranks.items()} == DEG5_RANKS

    @pytest.mark.parametrize("field", [QQ, GF101], ids=["QQ", "GF101"])
    def test_row_space_equality_degree_4(self, field):
        g = liftgen.generate(4)
        filt = liftgen.filter_redundant(g, field)
        for pi in symrep.partitions(4):
            tab = symrep.RepTable(pi, field)
            cols = freealg.count_types(4).all * tab.dim
            full, kept = (IncrementalReducer(cols, field) for _ in range(2))
            for ident in g.identities:
                full.append(liftgen.identity_rows(ident, tab))
            for ident in filt.identities:
                kept.append(liftgen.identity_rows(ident, tab))
            assert full.snapshot() == kept.snapshot()

    def test_row_space_equality_degree_5(self):
        g = liftgen.generate(5)
        filt = liftgen.filter_redundant(g)
        for pi in symrep.partitions(5):
            tab = symrep.RepTable(pi, GF101)
            cols = freealg.count_types(5).all * tab.dim
            full, kept = (IncrementalReducer(cols, GF101) for _ in range(2))
            for ident in g.identities:
                full.append(liftgen.identity_rows(ident, tab))
            for ident in filt.identities:
                kept.append(liftgen.identity_rows(ident, tab))
            assert full.pivots == kept.pivots
            assert full.snapshot() == kept.snapshot()

    def test_degree_6_keeps_48(self):
        filt = liftgen.filter_redundant(liftgen.generate(6))
        assert len(filt) == 48
