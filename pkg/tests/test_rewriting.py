import itertools
import random

import pytest

from monvar import (
    EMPTY,
    ContentUnbalancedError,
    DerivationCertificate,
    ExactClass,
    Identity,
    NotClosed,
    NotConnected,
    Presentation,
    SearchBounds,
    Substitution,
    Variable,
    Word,
    class_closure_verify,
    default_bounds,
    derive,
    enumerate_class,
    explore,
    format_certificate,
    isoterm_exact,
    match_pattern,
    one_step_successors,
    parse_certificate,
    parse_word,
    verify_certificate,
)

X, Y = Variable("x"), Variable("y")

POWER = Presentation.of("x = x^3")
SIGMA_X1 = Presentation.of("xyxyx = yxyxx", "xyyxx = yxxyx")
SIGMA_Y1 = Presentation.of("xyxyx = xyyxx")
SIGMA_E = Presentation.of("x^2 = x^3", "x^2y = xyx", "x^2y^2 = y^2x^2")


def brute_force_matches(pattern, target):
    """All substitutions reproducing target, by enumerating image tuples.

    Any image only uses letters of the target, and image lengths must solve
    occ_1*len_1 + ... + occ_k*len_k = len(target); everything satisfying that
    equation is tried.
    """
    variables = list(dict.fromkeys(pattern.letters))
    if not variables:
        return {Substitution()} if len(target) == 0 else set()
    counts = [pattern.letters.count(v) for v in variables]
    alphabet = sorted(set(target.letters)) or []
    total = len(target)
    results = set()

    def assign(i, remaining, images):
        if i == len(variables):
            if remaining == 0:
                subst = Substitution(dict(zip(variables, images)))
                if subst.apply(pattern) == target:
                    results.add(subst)
            return
        for length in range(remaining // counts[i] + 1):
            for letters in itertools.product(alphabet, repeat=length):
                assign(i + 1, remaining - counts[i] * length, images + [Word(letters)])

    assign(0, total, [])
    return results


class TestMatchPattern:
    def test_two_block_splits(self):
        matches = match_pattern(parse_word("xy"), parse_word("x^2y"))
        expected = {
            Substitution({X: parse_word(a), Y: parse_word(b)})
            for a, b in [("1", "x^2y"), ("x", "xy"), ("x^2", "y"), ("x^2y", "1")]
        }
        assert matches == expected

    def test_square_cannot_match_odd(self):
        assert match_pattern(parse_word("x^2"), parse_word("xyx")) == set()

    def test_no_match_across_distinct_profiles(self):
        # occurrence counts 3/2 cannot be reassembled into 2/3 counts
        assert match_pattern(parse_word("xyxyx"), parse_word("yxyxx")) == set()

    def test_domain_is_pattern_content(self):
        for subst in match_pattern(parse_word("xyx"), parse_word("xyx")):
            assert subst.domain == frozenset({X, Y})

    def test_empty_pattern_matches_only_empty(self):
        assert match_pattern(parse_word("1"), parse_word("1")) == {Substitution()}
        assert match_pattern(parse_word("1"), parse_word("x")) == set()

    def test_against_brute_force(self):
        rng = random.Random(2024)
        for _ in range(150):
            pattern = Word(rng.choices([X, Y], k=rng.randint(0, 4)))
            target = Word(rng.choices([X, Y, Variable("z")], k=rng.randint(0, 5)))
            assert match_pattern(pattern, target) == brute_force_matches(pattern, target)


class TestSuccessors:
    def test_power_growth(self):
        succ = one_step_successors(parse_word("x"), POWER)
        assert set(succ) == {parse_word("x"), parse_word("x^3")}

    def test_five_letter_class_jump(self):
        succ = one_step_successors(parse_word("xyxyx"), SIGMA_X1)
        assert set(succ) == {parse_word("xyxyx"), parse_word("yxyxx")}

    def test_empty_word_is_fixed(self):
        succ = one_step_successors(EMPTY, Presentation.of("xy = yx"))
        assert set(succ) == {EMPTY}

    def test_steps_replay(self):
        for word in (parse_word("xyxy"), parse_word("x^2y^2")):
            for q, step in one_step_successors(word, SIGMA_E).items():
                assert step.source(SIGMA_E) == word
                assert step.target(SIGMA_E) == q

    def test_unbalanced_system_rejected(self):
        with pytest.raises(ContentUnbalancedError):
            one_step_successors(parse_word("xy"), Presentation.of("xy = x"))

    def test_symmetry(self):
        rng = random.Random(31)
        for sigma in (POWER, SIGMA_E, SIGMA_X1):
            for _ in range(40):
                p = Word(rng.choices([X, Y], k=rng.randint(0, 6)))
                for q in one_step_successors(p, sigma):
                    assert p in one_step_successors(q, sigma)


class TestDerive:
    def test_power_word_two_steps(self):
        cert = derive(POWER, parse_word("x^9yx^3"), parse_word("x^7yx^5"), SearchBounds(13, 4))
        assert cert is not None and len(cert) == 2
        assert verify_certificate(POWER, cert, parse_word("x^9yx^3"), parse_word("x^7yx^5")).ok

    def test_reflexivity(self):
        cert = derive(SIGMA_E, parse_word("xyxy"), parse_word("xyxy"))
        assert cert is not None and len(cert) == 0

    def test_three_step_chain(self):
        sigma = SIGMA_X1 | SIGMA_Y1
        cert = derive(sigma, parse_word("yxyxx"), parse_word("yxxyx"), SearchBounds(6, 4))
        assert cert is not None and len(cert) == 3
        chain = cert.words(sigma)
        assert chain == [parse_word(w) for w in ("yxyxx", "xyxyx", "xyyxx", "yxxyx")]

    def test_not_found_on_saturated_space(self):
        # odd powers only, so x^2 is never reached
        assert derive(POWER, parse_word("x"), parse_word("x^2"), SearchBounds(9, 10)) is None

    def test_symmetric_derivability(self):
        b = SearchBounds(8, 8)
        there = derive(SIGMA_E, parse_word("xyxy"), parse_word("y^2x^2"), b)
        back = derive(SIGMA_E, parse_word("y^2x^2"), parse_word("xyxy"), b)
        assert there is not None and back is not None
        rev = there.reversed(SIGMA_E)
        assert verify_certificate(SIGMA_E, rev, parse_word("y^2x^2"), parse_word("xyxy")).ok

    def test_derive_matches_exploration(self):
        b = SearchBounds(8, 8)
        exp = explore(SIGMA_E, parse_word("xyxy"), b)
        for target in sorted(exp.words, key=lambda w: w.key)[:10]:
            cert = derive(SIGMA_E, parse_word("xyxy"), target, b)
            assert cert is not None
            assert verify_certificate(SIGMA_E, cert, parse_word("xyxy"), target).ok


class TestVerifyCertificate:
    def test_rejects_tampered_substitution(self):
        cert = derive(POWER, parse_word("x^9yx^3"), parse_word("x^7yx^5"), SearchBounds(13, 4))
        step = cert.steps[0]
        from dataclasses import replace

        tampered = DerivationCertificate(
            cert.start,
            (replace(step, subst=Substitution({X: parse_word("x^2")})),) + cert.steps[1:],
        )
        check = verify_certificate(POWER, tampered)
        assert not check.ok and check.step_index == 0

    def test_rejects_wrong_claimed_end(self):
        cert = DerivationCertificate(parse_word("xy"))
        check = verify_certificate(POWER, cert, expect_end=parse_word("yx"))
        assert not check.ok

    def test_rejects_repeated_words(self):
        forth = derive(POWER, parse_word("x"), parse_word("x^3"), SearchBounds(5, 2))
        back = forth.reversed(POWER)
        loop = DerivationCertificate(parse_word("x"), forth.steps + back.steps)
        check = verify_certificate(POWER, loop)
        assert not check.ok and "repeated" in check.reason

    def test_rejects_bad_identity_index(self):
        cert = derive(POWER, parse_word("x"), parse_word("x^3"), SearchBounds(5, 2))
        check = verify_certificate(Presentation(), cert)
        assert not check.ok and check.step_index == 0


class TestClassVerdicts:
    def test_exact_two_element_class(self):
        verdict = class_closure_verify(
            {parse_word("xyxyx"), parse_word("yxyxx")}, parse_word("xyxyx"), SIGMA_X1
        )
        assert isinstance(verdict, ExactClass)

    def test_exact_power_word_class(self):
        sigma = Presentation.of("x^9yx^3 = x^6yx^7", "x^7yx^5 = x^4yx^9")
        verdict = class_closure_verify(
            {parse_word("x^9yx^3"), parse_word("x^6yx^7")}, parse_word("x^9yx^3"), sigma
        )
        assert isinstance(verdict, ExactClass)

    def test_not_closed_witness(self):
        verdict = class_closure_verify(
            {parse_word("xyxyx")}, parse_word("xyxyx"), Presentation.of("xyxyx = yxyxx")
        )
        assert verdict == NotClosed(parse_word("xyxyx"), parse_word("yxyxx"))

    def test_not_connected_witness(self):
        members = {parse_word("xyxyx"), parse_word("yxyxx"), parse_word("z^3")}
        verdict = class_closure_verify(members, parse_word("xyxyx"), SIGMA_X1)
        assert verdict == NotConnected(parse_word("z^3"))

    def test_base_word_must_be_member(self):
        with pytest.raises(ValueError):
            class_closure_verify({parse_word("xy")}, parse_word("yx"), POWER)

    def test_exact_class_members_stay_inside(self):
        verdict = class_closure_verify(
            {parse_word("xyyxx"), parse_word("yxxyx")}, parse_word("xyyxx"), SIGMA_X1
        )
        assert isinstance(verdict, ExactClass)
        for member in verdict.words:
            assert set(one_step_successors(member, SIGMA_X1)) <= verdict.words


class TestIsoterms:
    def test_isoterm_for_one_identity_system(self):
        assert isoterm_exact(parse_word("yxyxx"), SIGMA_Y1)

    def test_single_letter_isoterm(self):
        assert isoterm_exact(parse_word("x"), Presentation.of("x^2 = x^3"))

    def test_square_is_not_isoterm(self):
        assert not isoterm_exact(parse_word("x^2"), Presentation.of("x^2 = x^3"))

    def test_isoterm_iff_singleton_enumeration(self):
        for word, sigma in [
            (parse_word("yxyxx"), SIGMA_Y1),
            (parse_word("x^2"), Presentation.of("x^2 = x^3")),
            (parse_word("x"), Presentation.of("x^2 = x^3")),
        ]:
            enumeration = enumerate_class(word, sigma, SearchBounds(12, 10))
            singleton = enumeration.complete and enumeration.words == frozenset({word})
            assert isoterm_exact(word, sigma) == singleton


class TestEnumerateClass:
    def test_capped_infinite_class_still_reaches(self):
        enumeration = enumerate_class(parse_word("xyxy"), SIGMA_E, SearchBounds(6, 10))
        assert not enumeration.complete
        assert parse_word("yxyx") in enumeration.words

    def test_odd_powers_exceed_cap(self):
        enumeration = enumerate_class(parse_word("x"), POWER, SearchBounds(7, 10, 100))
        assert not enumeration.complete
        assert enumeration.words == {parse_word(w) for w in ("x", "x^3", "x^5", "x^7")}

    def test_complete_singleton(self):
        enumeration = enumerate_class(parse_word("yxyxx"), SIGMA_Y1)
        assert enumeration.complete
        assert enumeration.words == frozenset({parse_word("yxyxx")})

    def test_complete_matches_exact_class(self):
        enumeration = enumerate_class(parse_word("xyxyx"), SIGMA_X1)
        assert enumeration.complete
        verdict = class_closure_verify(enumeration.words, parse_word("xyxyx"), SIGMA_X1)
        assert isinstance(verdict, ExactClass)


class TestPresentations:
    def test_orientation_and_dedup(self):
        sigma = Presentation.of("yx = xy", "xy = yx", "xy = yx")
        assert len(sigma) == 1
        assert sigma.identities[0] == Identity(parse_word("xy"), parse_word("yx"))

    def test_file_format_round_trip(self):
        text = "# system\nx^2 = x^3\n\nxy = yx  # commutative\n"
        sigma = Presentation.parse(text)
        assert len(sigma) == 2
        assert Presentation.parse(sigma.format()) == sigma

    def test_bad_identity_line(self):
        with pytest.raises(ValueError):
            Presentation.parse("xy == yx")


class TestCertificateSerialization:
    def test_round_trip(self):
        certs = [
            derive(POWER, parse_word("x^9yx^3"), parse_word("x^7yx^5"), SearchBounds(13, 4)),
            derive(SIGMA_X1 | SIGMA_Y1, parse_word("yxyxx"), parse_word("yxxyx"), SearchBounds(6, 4)),
            DerivationCertificate(parse_word("xy")),
        ]
        for cert in certs:
            assert parse_certificate(format_certificate(cert)) == cert

    def test_parsed_copy_verifies(self):
        sigma = SIGMA_X1 | SIGMA_Y1
        cert = derive(sigma, parse_word("yxyxx"), parse_word("yxxyx"), SearchBounds(6, 4))
        again = parse_certificate(format_certificate(cert))
        assert verify_certificate(sigma, again, parse_word("yxyxx"), parse_word("yxxyx")).ok

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_certificate("step: nonsense\n")


class TestBounds:
    def test_bounds_must_be_positive(self):
        with pytest.raises(ValueError):
            SearchBounds(0)
        with pytest.raises(ValueError):
            SearchBounds(5, max_depth=0)

    def test_default_bounds_cover_arguments_and_sides(self):
        b = default_bounds(SIGMA_X1, parse_word("x^9yx^3"))
        assert b.max_word_length == 26
