import random

import pytest
from hypothesis import given, strategies as st

from foxcover.errors import (MalformedExponent, NotCyclicallyReduced, PresentationSyntaxError,
                             UnknownGenerator)
from foxcover.presentation import (IDENTITY, Presentation, Word, abelianized_relator_matrix,
                                   cyclically_reduce, exponent_sum, format_presentation, free_reduce,
                                   is_cyclically_reduced, is_proper_power, parse_presentation,
                                   parse_word, relator_warnings, word_inverse, word_multiply,
                                   word_power)
from randgen import random_word, random_word_raw

A, T = 0, 1


def W(*syl):
    return Word(tuple(syl))


def letters(w: Word) -> list[tuple[int, int]]:
    out = []
    for g, e in w.syllables:
        out.extend([(g, 1 if e > 0 else -1)] * abs(e))
    return out


def brute_force_power(w: Word):
    """Largest k with the letter string equal to (prefix)^k."""
    s = letters(w)
    n = len(s)
    for k in range(n, 1, -1):
        if n % k == 0 and s == s[: n // k] * k:
            return k
    return None


syllables = st.lists(st.tuples(st.integers(0, 2), st.integers(-3, 3).filter(bool)), max_size=12)


class TestParse:
    def test_baumslag_solitar(self):
        p = parse_presentation("< a, t | t a^2 t^-1 a^-4 >")
        assert p.names == ["a", "t"]
        assert p.relators == (W((T, 1), (A, 2), (T, -1), (A, -4)),)

    def test_free_group(self):
        p = parse_presentation("< a | >")
        assert p.names == ["a"] and p.relators == ()

    def test_adjacent_tokens_merge(self):
        p = parse_presentation("< a, t | t a a t^-1 a t a^-1 >")
        assert p.relators[0] == W((T, 1), (A, 2), (T, -1), (A, 1), (T, 1), (A, -1))

    def test_multiline_and_several_relators(self):
        p = parse_presentation("<x,y|\n x^2,\n y^3, x y x^-1 y^-1>")
        assert p.n_relators == 3

    def test_empty_presentation(self):
        p = parse_presentation("< | >")
        assert p.n_generators == 0 and p.n_relators == 0

    @pytest.mark.parametrize("text, exc", [
        ("< a | b >", UnknownGenerator),
        ("< a | a^0 >", MalformedExponent),
        ("< a | a^x >", MalformedExponent),
        ("< a | a^ >", MalformedExponent),
        ("< a | a", PresentationSyntaxError),
        ("a | a >", PresentationSyntaxError),
        ("< a, a | a >", PresentationSyntaxError),
        ("< a | a, >", PresentationSyntaxError),
        ("< a | a > junk", PresentationSyntaxError),
        ("< a | a$ >", PresentationSyntaxError),
    ])
    def test_errors(self, text, exc):
        with pytest.raises(exc):
            parse_presentation(text)

    def test_error_position(self):
        with pytest.raises(UnknownGenerator) as info:
            parse_presentation("< a, t |\n  t b >")
        assert (info.value.line, info.value.column) == (2, 5)

    @given(st.lists(syllables, max_size=3))
    def test_round_trip(self, rels):
        p = Presentation.from_names(["a", "t", "u"], [free_reduce(r) for r in rels if free_reduce(r)])
        assert parse_presentation(format_presentation(p)) == p

    def test_parse_word(self):
        assert parse_word("a^3 t", ["a", "t"]) == W((A, 3), (T, 1))


class TestFreeReduce:
    def test_cancel(self):
        assert free_reduce([(A, 1), (A, -1)]) == IDENTITY

    def test_merge(self):
        assert free_reduce([(A, 2), (A, 3)]) == W((A, 5))

    def test_cascade(self):
        assert free_reduce([(T, 1), (A, 2), (A, -2), (T, -1)]) == IDENTITY

    def test_word_rejects_unreduced(self):
        with pytest.raises(ValueError):
            Word(((A, 1), (A, 1)))

    @given(syllables)
    def test_idempotent(self, raw):
        w = free_reduce(raw)
        assert free_reduce(w.syllables) == w

    def test_cancelling_pair_insertion(self):
        rng = random.Random(11)
        for _ in range(1000):
            raw = random_word_raw(rng, 3, 10)
            g, e = rng.randrange(3), rng.choice([-2, -1, 1, 2])
            pos = rng.randint(0, len(raw))
            assert free_reduce(raw[:pos] + [(g, e), (g, -e)] + raw[pos:]) == free_reduce(raw)


class TestGroupOps:
    def test_inverse(self):
        assert word_inverse(W((T, 1), (A, 2))) == W((A, -2), (T, -1))

    def test_power(self):
        assert word_power(W((A, 1)), -3) == W((A, -3))
        assert word_power(W((A, 1), (T, 1)), 2) == W((A, 1), (T, 1), (A, 1), (T, 1))
        assert word_power(W((A, 1), (T, 1), (A, 1)), 2) == W((A, 1), (T, 1), (A, 2), (T, 1), (A, 1))
        assert word_power(W((A, 1), (T, 1), (A, -1)), 3) == W((A, 1), (T, 3), (A, -1))

    def test_group_axioms_randomized(self):
        rng = random.Random(5)
        for _ in range(1000):
            u, v, w = (random_word(rng, 3, 8) for _ in range(3))
            assert word_multiply(word_multiply(u, v), w) == word_multiply(u, word_multiply(v, w))
            assert word_inverse(word_inverse(u)) == u
            assert word_multiply(u, word_inverse(u)) == IDENTITY
            assert word_multiply(IDENTITY, u) == u == word_multiply(u, IDENTITY)
            assert word_multiply(u, v) == free_reduce(u.syllables + v.syllables)

    def test_power_matches_repeated_product(self):
        rng = random.Random(8)
        for _ in range(300):
            u = random_word(rng, 2, 6)
            k = rng.randint(-4, 4)
            expected = IDENTITY
            for _ in range(abs(k)):
                expected = expected * (u if k > 0 else u.inverse())
            assert word_power(u, k) == expected


class TestCyclic:
    def test_examples(self):
        assert cyclically_reduce(W((A, 1), (T, 2), (A, -1))) == (W((T, 2)), W((A, 1)))
        w = W((T, 1), (A, 2), (T, -1), (A, -4))
        assert cyclically_reduce(w) == (w, IDENTITY)
        assert cyclically_reduce(IDENTITY) == (IDENTITY, IDENTITY)

    def test_partial_exponents(self):
        w = W((A, 3), (T, 1), (A, -1))
        core, c = cyclically_reduce(w)
        assert core == W((A, 2), (T, 1)) and c == W((A, 1))

    @given(syllables)
    def test_reconstruction(self, raw):
        w = free_reduce(raw)
        core, c = cyclically_reduce(w)
        assert is_cyclically_reduced(core)
        assert c * core * c.inverse() == w


class TestProperPower:
    def test_examples(self):
        assert is_proper_power(W((A, 4))) == (W((A, 1)), 4)
        assert is_proper_power(W((A, -4))) == (W((A, -1)), 4)
        assert is_proper_power(W((A, 2), (T, 2), (A, 2), (T, 2))) == (W((A, 2), (T, 2)), 2)
        assert is_proper_power(W((A, 1))) is None
        assert is_proper_power(IDENTITY) is None

    def test_bs24_relator_is_not_a_power(self):
        w = W((T, 1), (A, 2), (T, -1), (A, -4))
        assert brute_force_power(w) is None
        assert is_proper_power(w) is None

    def test_boundary_syllable_split(self):
        # (a t a)^2 = a t a^2 t a: the middle syllable straddles the two copies
        w = W((A, 1), (T, 1), (A, 2), (T, 1), (A, 1))
        assert is_proper_power(w) == (W((A, 1), (T, 1), (A, 1)), 2)

    def test_rejects_non_cyclically_reduced(self):
        with pytest.raises(NotCyclicallyReduced):
            is_proper_power(W((A, 1), (T, 1), (A, -1)))

    def test_against_brute_force(self):
        rng = random.Random(3)
        checked = 0
        while checked < 1000:
            w, _ = cyclically_reduce(random_word(rng, 2, 6, 3))
            if rng.random() < 0.5 and w:
                w = word_power(w, rng.randint(2, 4))
            if not w:
                continue
            got = is_proper_power(w)
            expected = brute_force_power(w)
            assert (got[1] if got else None) == expected
            if got:
                assert word_power(got[0], got[1]) == w
            checked += 1

    def test_powers_of_non_powers(self):
        rng = random.Random(4)
        done = 0
        while done < 300:
            u, _ = cyclically_reduce(random_word(rng, 3, 7))
            if not u or is_proper_power(u) is not None:
                continue
            k = rng.randint(2, 5)
            root, e = is_proper_power(word_power(u, k))
            assert e % k == 0
            assert word_power(root, e) == word_power(u, k)
            done += 1


class TestAbelianized:
    def test_bs_column(self):
        for m, n in [(2, 4), (3, 5), (-2, 7)]:
            p = parse_presentation(f"< a, t | t a^{m} t^-1 a^{-n} >")
            assert abelianized_relator_matrix(p).to_lists() == [[m - n], [0]]

    def test_meskin_column(self):
        p = parse_presentation("< s1, s2 | s1^2 s2^2 >")
        assert abelianized_relator_matrix(p).to_lists() == [[2], [2]]

    def test_free_group(self):
        a = abelianized_relator_matrix(parse_presentation("< a, b, c | >"))
        assert (a.rows, a.cols) == (3, 0)

    def test_matches_exponent_sums(self):
        rng = random.Random(9)
        for _ in range(200):
            rels = [random_word(rng, 3, 10) for _ in range(rng.randint(0, 3))]
            p = Presentation.from_names(["x", "y", "z"], rels)
            a = abelianized_relator_matrix(p)
            for j, r in enumerate(rels):
                for i in range(3):
                    assert a[i, j] == exponent_sum(r, i)


def test_relator_warnings():
    assert relator_warnings(parse_presentation("< a | a^6 >"))
    assert relator_warnings(parse_presentation("< a, t | t a t^-1 a t a^-1 t^-1 a >")) == []
    # proper power hidden behind a conjugator
    assert relator_warnings(parse_presentation("< a, t | t a^2 t^-1 >"))
    assert relator_warnings(parse_presentation("< a, t | t a t a t^-1 >")) == []
