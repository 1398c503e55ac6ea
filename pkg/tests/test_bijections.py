"""Occurrence-exchanging bijections on non-crossing partitions."""

import pytest

from ncpart.bijections import (
    decode_descent_code,
    descent_code,
    map_descent_code,
    map_equiv,
    map_f,
    map_g,
    map_runrev,
)
from ncpart.core import NCPartition, iter_nc, parse_sequence
from ncpart.errors import (
    EmptyPartition,
    FamilyViolation,
    PatternLengthMismatch,
)
from ncpart.stats import block_count, count_subword

N_MAX = 7


def _all_nc(n_max=N_MAX):
    for n in range(1, n_max + 1):
        yield from iter_nc(n)


# ---------------------------------------------------------------------------
# Window exchange for trailing-run-1 patterns
# ---------------------------------------------------------------------------


def test_map_f_worked_example():
    pi = NCPartition((1, 2, 3, 1, 1, 4, 5, 1, 6, 7, 8, 6, 6, 1, 9))
    image = map_f(pi, "231", "221")
    assert image.letters == (1, 2, 2, 1, 1, 3, 3, 1, 4, 5, 5, 4, 6, 1, 7)


@pytest.mark.parametrize("tau1,tau2", [("231", "221"), ("2221", "2341")])
def test_map_f_exchanges_counts_and_involutes(tau1, tau2):
    for pi in _all_nc():
        image = map_f(pi, tau1, tau2)
        assert count_subword(image, tau2) == count_subword(pi, tau1)
        assert count_subword(image, tau1) == count_subword(pi, tau2)
        assert map_f(image, tau1, tau2) == pi


def test_map_f_is_identity_on_equal_patterns():
    for pi in _all_nc(5):
        assert map_f(pi, "221", "221") == pi


@pytest.mark.parametrize("bad", ["211", "121", "123"])
def test_map_f_rejects_patterns_without_single_trailing_one(bad):
    with pytest.raises(FamilyViolation):
        map_f("121", bad, "221")


def test_map_f_rejects_length_mismatch():
    with pytest.raises(PatternLengthMismatch):
        map_f("121", "231", "2221")


# ---------------------------------------------------------------------------
# Chain reversal exchanging 2·sigma·1^b with 2^b·sigma·1
# ---------------------------------------------------------------------------


def test_map_g_worked_example():
    image = map_g("122322114115", "", 2)
    assert image == NCPartition(parse_sequence("122332214415"))
    assert map_g(image, "", 2) == NCPartition(parse_sequence("122322114115"))


@pytest.mark.parametrize("sigma,b", [("", 2), ("", 3), ("3", 2), ("32", 2)])
def test_map_g_exchange_involution_blocks(sigma, b):
    sig = parse_sequence(sigma) if sigma else ()
    p1 = (2,) + sig + (1,) * b
    p2 = (2,) * b + sig + (1,)
    for pi in _all_nc():
        image = map_g(pi, sigma, b)
        assert count_subword(image, p2) == count_subword(pi, p1)
        assert count_subword(image, p1) == count_subword(pi, p2)
        assert map_g(image, sigma, b) == pi
        assert block_count(image) == block_count(pi)


def test_map_g_does_not_depend_on_b():
    for pi in _all_nc(6):
        assert map_g(pi, "3", 3) == map_g(pi, "3", 2)


@pytest.mark.parametrize("sigma", ["4", "2", "35"])
def test_map_g_rejects_bad_sigma(sigma):
    with pytest.raises(FamilyViolation):
        map_g("121", sigma, 2)


def test_map_g_rejects_b_below_two():
    with pytest.raises(FamilyViolation):
        map_g("121", "", 1)


# ---------------------------------------------------------------------------
# Composite equidistribution map for (rho+1)1^b patterns
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "tau1,tau2",
    [("211", "221"), ("211", "231"), ("2311", "2221"), ("2341", "2111")],
)
def test_map_equiv_transports_counts_injectively(tau1, tau2):
    for n in range(1, N_MAX + 1):
        seen = set()
        for pi in iter_nc(n):
            image = map_equiv(pi, tau1, tau2)
            assert count_subword(image, tau2) == count_subword(pi, tau1)
            seen.add(image)
        # an injection of the finite set onto itself is a bijection
        assert len(seen) == sum(1 for _ in iter_nc(n))


def test_map_equiv_is_identity_on_equal_patterns():
    for pi in _all_nc(5):
        assert map_equiv(pi, "2311", "2311") == pi


def test_map_equiv_rejects_length_mismatch():
    with pytest.raises(PatternLengthMismatch):
        map_equiv("121", "211", "2221")


def test_map_equiv_rejects_wrong_shape():
    with pytest.raises(FamilyViolation):
        map_equiv("121", "112", "122")


# ---------------------------------------------------------------------------
# Run-length reversal exchanging 1^a(rho+1)1^b with 1^b(rho+1)1^a
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("a,rho,b", [(1, "1", 2), (2, "1", 1), (1, "12", 2)])
def test_map_runrev_exchange_and_involution(a, rho, b):
    lifted = tuple(v + 1 for v in parse_sequence(rho))
    p1 = (1,) * a + lifted + (1,) * b
    p2 = (1,) * b + lifted + (1,) * a
    for pi in _all_nc():
        image = map_runrev(pi, a, rho, b)
        assert count_subword(image, p2) == count_subword(pi, p1)
        assert count_subword(image, p1) == count_subword(pi, p2)
        assert map_runrev(image, a, rho, b) == pi
        assert block_count(image) == block_count(pi)


def test_map_runrev_depends_only_on_rho():
    for pi in _all_nc(6):
        assert map_runrev(pi, 1, "1", 2) == map_runrev(pi, 2, "1", 1)
        assert map_runrev(pi, 1, "1", 2) == map_runrev(pi, 1, "1", 3)


def test_map_runrev_rejects_bad_parameters():
    with pytest.raises(FamilyViolation):
        map_runrev("121", 0, "1", 2)
    with pytest.raises(FamilyViolation):
        map_runrev("121", 1, "21", 2)


# ---------------------------------------------------------------------------
# Descent-section codes
# ---------------------------------------------------------------------------


def test_descent_code_anchors():
    assert descent_code("12231") == ((1, 1), ((1, 0, 1), ()))
    assert descent_code("1213311") == ((1, 1, 1), ((1,), (1, 0), (0,)))


def test_descent_code_round_trip():
    for pi in _all_nc():
        bottoms, codes = descent_code(pi)
        assert decode_descent_code(bottoms, codes) == pi


def _sections(letters):
    """Split a word at its descents into maximal weakly increasing runs."""
    parts = [[letters[0]]]
    for prev, nxt in zip(letters, letters[1:]):
        if nxt < prev:
            parts.append([nxt])
        else:
            parts[-1].append(nxt)
    return parts


def test_map_descent_code_involution_and_invariants():
    for n in range(1, N_MAX + 1):
        seen = set()
        for pi in iter_nc(n):
            image = map_descent_code(pi)
            assert map_descent_code(image) == pi
            assert block_count(image) == block_count(pi)
            bottoms, codes = descent_code(pi)
            assert descent_code(image) == (
                bottoms,
                tuple(code[::-1] for code in codes),
            )
            for before, after in zip(
                _sections(pi.letters), _sections(image.letters)
            ):
                assert set(before) == set(after)
            seen.add(image)
        assert len(seen) == sum(1 for _ in iter_nc(n))


@pytest.mark.parametrize("a,m", [(2, 2), (3, 2), (2, 3)])
def test_map_descent_code_exchanges_staircase_counts(a, m):
    p1 = (1,) * a + tuple(range(2, m + 1))
    p2 = tuple(range(1, m)) + (m,) * a
    for pi in _all_nc():
        image = map_descent_code(pi)
        assert count_subword(image, p2) == count_subword(pi, p1)
        assert count_subword(image, p1) == count_subword(pi, p2)


def test_descent_code_requires_nonempty():
    with pytest.raises(EmptyPartition):
        descent_code(())
    with pytest.raises(EmptyPartition):
        map_descent_code("")


@pytest.mark.parametrize(
    "bottoms,codes",
    [
        ((1, 2), ((), ())),  # bottoms must strictly descend
        ((2,), ((),)),  # first section must start at 1
        ((1,), ((2,),)),  # code bits are 0 or 1 only
        ((1,), ((1,), (0,))),  # one code per bottom
    ],
)
def test_decode_rejects_inconsistent_codes(bottoms, codes):
    with pytest.raises(ValueError):
        decode_descent_code(bottoms, codes)
