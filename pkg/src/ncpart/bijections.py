"""Constructive bijections on non-crossing partitions that exchange
subword-pattern statistics.

Four maps are provided, each validated aggressively at runtime (every
structural claim the constructions rely on is asserted, and every
produced word is re-validated as a canonical non-crossing sequence):

* :func:`map_f` — exchanges occurrences of two patterns of the shape
  (rho+1)1 (trailing-run length 1) of equal length, by rewriting each
  occurrence window in place, left to right.
* :func:`map_g` — an involution exchanging occurrences of 2·sigma·1^b
  and 2^b·sigma·1 by reversing run multiplicities inside maximal
  descending chains; it preserves the number of blocks.
* :func:`map_equiv` — the composition g, then f, then g, exchanging any
  two equal-length patterns of the shape (rho+1)1^b.
* :func:`map_runrev` — an involution exchanging occurrences of
  1^a(rho+1)1^b and 1^b(rho+1)1^a by reversing the bottom-letter run
  lengths inside maximal strings.
* :func:`map_descent_code` — an involution that reverses each section's
  ascent/plateau code between descents, exchanging occurrences of
  1^a 2 3 ... m and 1 2 ... (m-1) m^a for all a, m >= 2 at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .core import (
    Letters,
    NCPartition,
    RhoTail,
    Sandwich,
    SubwordPattern,
    as_ncpartition,
    as_pattern,
    classify_pattern,
    is_noncrossing,
    is_restricted_growth,
    parse_sequence,
)
from .errors import EmptyPartition, FamilyViolation, PatternLengthMismatch

__all__ = [
    "TauString",
    "map_f",
    "map_g",
    "map_equiv",
    "map_runrev",
    "descent_code",
    "decode_descent_code",
    "map_descent_code",
]

PartitionLike = Union[NCPartition, Sequence[int], str]
PatternLike = Union[SubwordPattern, Sequence[int], str]


def _std(seq: Sequence[int]) -> tuple[int, ...]:
    """Standardization: relabel the i-th smallest distinct value as i."""
    ranks = {v: i + 1 for i, v in enumerate(sorted(set(seq)))}
    return tuple(ranks[v] for v in seq)


# ---------------------------------------------------------------------------
# Window exchange for trailing-run-1 patterns
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class TauString:
    """An occurrence window found by the exchange scan: the half-open
    span [start, end) and which of the two patterns it realizes
    (kind 0 = first pattern, kind 1 = second)."""

    start: int
    end: int
    kind: int


def _coerce_rho_tail(value: Union[RhoTail, PatternLike]) -> RhoTail:
    if isinstance(value, RhoTail):
        return value
    family = classify_pattern(as_pattern(value))
    if not isinstance(family, RhoTail):
        raise FamilyViolation(
            f"pattern {as_pattern(value).text!r} is not of the shape "
            "(rho+1) followed by a run of 1s"
        )
    return family


def _scan_strings(
    w: Sequence[int], word1: Letters, word2: Letters
) -> list[TauString]:
    """All windows realizing either pattern, left to right.

    Adjacent windows must be disjoint or share exactly one position —
    a structural fact for trailing-run-1 patterns that the sequential
    rewrite relies on, so it is asserted."""
    length = len(word1)
    found: list[TauString] = []
    for start in range(len(w) - length + 1):
        window = _std(w[start : start + length])
        if window == word1:
            found.append(TauString(start, start + length, 0))
        elif window == word2:
            found.append(TauString(start, start + length, 1))
    for prev, nxt in zip(found, found[1:]):
        if nxt.start < prev.end - 1:
            raise AssertionError(
                f"occurrence windows at {prev.start} and {nxt.start} "
                "share more than one position"
            )
    return found


def _convert_window(
    w: list[int], start: int, length: int, target_word: Letters
) -> list[int]:
    """Rewrite the window [start, start+length) to realize target_word.

    The window's distinct letters are v < u_1 < ... < u_s (v is both the
    minimum and the final letter).  The target pattern needs t+1 distinct
    letters.  Extra letters are dropped (values above the window's top
    shift down) or new letters are created just above M = max(prefix
    maximum, u_s) (values above M shift up).  Every structural claim this
    relies on is asserted."""
    window = w[start : start + length]
    v = window[-1]
    distinct = sorted(set(window))
    if distinct[0] != v:
        raise AssertionError("window does not end with its minimum")
    us = distinct[1:]
    s = len(us)
    t = max(target_word) - 1
    for i in range(1, s - 1):
        if us[i + 1] != us[i] + 1:
            raise AssertionError(
                "the window's fresh letters are not consecutive values"
            )
    if t <= s:
        vals = [v] + us[:t]
        removed = set(us[t:])
        threshold = us[-1]
        delta = t - s
        for pos, letter in enumerate(w):
            inside = start <= pos < start + length
            if letter in removed and not inside:
                raise AssertionError(
                    "letters slated for removal occur outside the window"
                )
            if letter > threshold and pos < start:
                raise AssertionError(
                    "letters above the window's top occur before it"
                )
    else:
        prefix_max = max(w[:start], default=0)
        base = max(prefix_max, us[-1])
        vals = [v] + us + list(range(base + 1, base + 1 + (t - s)))
        threshold = base
        delta = t - s
        for pos, letter in enumerate(w):
            if letter > threshold and pos < start + length:
                raise AssertionError(
                    "letters above the new-letter base occur at or before "
                    "the window"
                )
    replacement = [vals[r - 1] for r in target_word]
    out = w[:start] + replacement + w[start + length :]
    if delta:
        for pos in range(len(out)):
            if start <= pos < start + length:
                continue
            if out[pos] > threshold:
                if pos < start:
                    raise AssertionError("letters to shift must follow the window")
                out[pos] += delta
    return out


def map_f(
    pi: PartitionLike,
    tau: Union[RhoTail, PatternLike],
    tau2: Union[RhoTail, PatternLike],
) -> NCPartition:
    """Exchange occurrences of two equal-length patterns of the shape
    (rho+1)1, rewriting each occurrence window left to right.

    The number of tau-occurrences of the input equals the number of
    tau2-occurrences of the output and vice versa; the first and last
    positions of every occurrence window are preserved.
    """
    fam1 = _coerce_rho_tail(tau)
    fam2 = _coerce_rho_tail(tau2)
    if fam1.b != 1 or fam2.b != 1:
        raise FamilyViolation(
            "the window exchange needs trailing-run length 1 on both patterns"
        )
    word1 = fam1.pattern().word
    word2 = fam2.pattern().word
    if len(word1) != len(word2):
        raise PatternLengthMismatch(
            f"patterns have different lengths: {len(word1)} != {len(word2)}"
        )
    partition = as_ncpartition(pi)
    if fam1 == fam2:
        return partition
    length = len(word1)
    w = list(partition.letters)
    base = _scan_strings(w, word1, word2)
    if not base:
        return partition
    words = (word1, word2)
    for i in range(len(base)):
        current = _scan_strings(w, word1, word2)
        expected = [
            TauString(b.start, b.end, b.kind ^ 1 if j < i else b.kind)
            for j, b in enumerate(base)
        ]
        if current != expected:
            raise AssertionError(
                "the occurrence-window set failed to persist across rewrites"
            )
        target = words[base[i].kind ^ 1]
        w = _convert_window(w, base[i].start, length, target)
        if not (is_restricted_growth(w) and is_noncrossing(w)):
            raise AssertionError(
                "intermediate word is not a canonical non-crossing sequence"
            )
    final = _scan_strings(w, word1, word2)
    expected = [TauString(b.start, b.end, b.kind ^ 1) for b in base]
    if final != expected:
        raise AssertionError("final occurrence-window set is not fully exchanged")
    return NCPartition(tuple(w))


# ---------------------------------------------------------------------------
# Run-multiplicity reversal inside descending chains
# ---------------------------------------------------------------------------


def _sigma_word(sigma: PatternLike) -> Letters:
    """Validate and normalize the chain-block suffix sigma.

    2·sigma must be a non-crossing word on {2, 3, ...} (that is, sigma
    shifted down by 1 and prefixed by 1 must be canonical), and sigma
    must start with 3 when nonempty."""
    if isinstance(sigma, str):
        parsed = parse_sequence(sigma)
    elif isinstance(sigma, SubwordPattern):
        parsed = tuple(v + 1 for v in sigma.word)
    else:
        parsed = tuple(int(v) for v in sigma)
    if parsed and parsed[0] != 3:
        raise FamilyViolation("sigma must start with 3 when nonempty")
    shifted = tuple(v - 1 for v in (2,) + parsed)
    if min(shifted, default=1) < 1 or not (
        is_restricted_growth(shifted) and is_noncrossing(shifted)
    ):
        raise FamilyViolation(
            f"2+sigma does not shift down to a canonical non-crossing word: "
            f"{(2,) + parsed}"
        )
    return parsed


def _parse_chain(
    w: Sequence[int], p: int, sigma: Letters
) -> tuple[int, int, list[tuple[int, int, Letters]], tuple[int, int] | None] | None:
    """Parse the maximal descending chain starting at position p.

    A chain is u_1^{r_1} B_1 u_2^{r_2} B_2 ... u_t^{r_t} B_t u^{r} with
    strictly descending u_i, every (u_i,)+B_i order-isomorphic to
    (2,)+sigma, all run lengths >= 1, and a final run of a letter below
    u_t (absent when the word ends inside a link).  A matched block that
    would close the chain — the letter after it is not below u — is left
    outside and the u-run ends the chain instead: no occurrence of
    either exchanged pattern can use such a block, rebuilding places the
    block identically either way, and keeping it out of the span lets a
    chain that genuinely starts inside it be found by a later scan.
    Returns (start, end, links, trailing) or None when no chain (not
    even a junction-free stub) starts at p.
    """
    n = len(w)
    msig = len(sigma)
    target = _std((2,) + sigma)
    links: list[tuple[int, int, Letters]] = []
    trailing: tuple[int, int] | None = None
    pos = p
    while pos < n:
        u = w[pos]
        if links and u >= links[-1][0]:
            break
        run = 1
        while pos + run < n and w[pos + run] == u:
            run += 1
        after = pos + run
        if msig == 0:
            links.append((u, run, ()))
            pos = after
            continue
        block = tuple(w[after : after + msig])
        if len(block) == msig and _std((u,) + block) == target:
            nxt = after + msig
            if nxt == n or w[nxt] < u:
                links.append((u, run, block))
                pos = nxt
                continue
        if links:
            trailing = (u, run)
            pos = after
        break
    if not links:
        return None
    return (p, pos, links, trailing)


def _rebuild_chain(
    links: list[tuple[int, int, Letters]], trailing: tuple[int, int] | None
) -> list[int]:
    runs = [r for (_, r, _) in links]
    if trailing is not None:
        runs.append(trailing[1])
    rev = runs[::-1]
    out: list[int] = []
    for (u, _, block), r in zip(links, rev):
        out.extend([u] * r)
        out.extend(block)
    if trailing is not None:
        out.extend([trailing[0]] * rev[-1])
    return out


def map_g(pi: PartitionLike, sigma: PatternLike, b: int) -> NCPartition:
    """Involution exchanging occurrences of 2·sigma·1^b and 2^b·sigma·1.

    Maximal descending chains are located and their run-multiplicity
    vectors reversed in place; the chain letters and sigma-blocks are
    untouched, so the number of blocks of the partition is preserved.
    The transformation itself does not depend on b; b >= 2 names the
    statistic pair being exchanged and is required.
    """
    if int(b) < 2:
        raise FamilyViolation("the trailing-run length b must be at least 2")
    sig = _sigma_word(sigma)
    partition = as_ncpartition(pi)
    w = list(partition.letters)
    out = list(w)
    p = 0
    prev_end = 0
    while p < len(w):
        res = _parse_chain(w, p, sig)
        if res is None or (len(res[2]) < 2 and res[3] is None):
            # No chain here, or a single link with nothing below it: such a
            # span holds no junction (hence no occurrence of either pattern)
            # and must not consume positions a real chain may start inside.
            p += 1
            continue
        start, end, links, trailing = res
        if start > prev_end and w[start - 1] == w[start]:
            raise AssertionError("chain start is not run-maximal on the left")
        replacement = _rebuild_chain(links, trailing)
        if len(replacement) != end - start:
            raise AssertionError("chain rewrite changed the window length")
        out[start:end] = replacement
        p = end
        prev_end = end
    return NCPartition(tuple(out))


def map_equiv(
    pi: PartitionLike,
    tau: Union[RhoTail, PatternLike],
    tau2: Union[RhoTail, PatternLike],
) -> NCPartition:
    """Exchange occurrences of two equal-length patterns of the shape
    (rho+1)1^b, by reducing each to its trailing-run-1 form with
    :func:`map_g`, exchanging with :func:`map_f`, and lifting back."""
    fam1 = _coerce_rho_tail(tau)
    fam2 = _coerce_rho_tail(tau2)
    len1 = len(fam1.rho) + fam1.b
    len2 = len(fam2.rho) + fam2.b
    if len1 != len2:
        raise PatternLengthMismatch(
            f"patterns have different lengths: {len1} != {len2}"
        )
    partition = as_ncpartition(pi)
    if fam1 == fam2:
        return partition

    def reduced(fam: RhoTail) -> RhoTail:
        if fam.b == 1:
            return fam
        return RhoTail((1,) * fam.b + fam.rho[1:], 1)

    current = partition
    if fam1.b >= 2:
        current = map_g(current, tuple(v + 1 for v in fam1.rho[1:]), fam1.b)
    current = map_f(current, reduced(fam1), reduced(fam2))
    if fam2.b >= 2:
        current = map_g(current, tuple(v + 1 for v in fam2.rho[1:]), fam2.b)
    return current


# ---------------------------------------------------------------------------
# Bottom-run reversal for sandwiched patterns
# ---------------------------------------------------------------------------


def _parse_runstring(
    w: Sequence[int], p: int, rho_word: Letters
) -> tuple[int, int, int, list[int], list[Letters]] | None:
    """Parse the maximal string x^{i_1} A_1 x^{i_2} ... A_r x^{i_{r+1}}
    starting at p: every A_j order-isomorphic to rho_word with all its
    letters above x, every run length >= 1 including the trailing one,
    and at least one block.  Returns (start, end, x, runs, blocks)."""
    n = len(w)
    m = len(rho_word)
    x = w[p]
    run = 1
    while p + run < n and w[p + run] == x:
        run += 1
    runs = [run]
    blocks: list[Letters] = []
    pos = p + run
    while pos + m < n:
        block = tuple(w[pos : pos + m])
        if _std(block) != rho_word or min(block) <= x or w[pos + m] != x:
            break
        tail = 1
        while pos + m + tail < n and w[pos + m + tail] == x:
            tail += 1
        blocks.append(block)
        runs.append(tail)
        pos = pos + m + tail
    if not blocks:
        return None
    return (p, pos, x, runs, blocks)


def map_runrev(
    pi: PartitionLike, a: int, rho: PatternLike, b: int
) -> NCPartition:
    """Involution exchanging occurrences of 1^a(rho+1)1^b and
    1^b(rho+1)1^a: inside every maximal bottom-letter/block string the
    run-length vector is reversed while the blocks stay fixed.

    The transformation depends only on rho; a and b name the exchanged
    statistic pair (any a, b >= 1)."""
    rho_word = as_pattern(rho).word
    Sandwich(int(a), rho_word, int(b))  # validates a, rho, b
    partition = as_ncpartition(pi)
    w = list(partition.letters)
    out = list(w)
    p = 0
    while p < len(w):
        res = _parse_runstring(w, p, rho_word)
        if res is None:
            p += 1
            continue
        start, end, x, runs, blocks = res
        if start > 0 and w[start - 1] == x:
            raise AssertionError("string start is not run-maximal on the left")
        for q in range(start + 1, end):
            probe = _parse_runstring(w, q, rho_word)
            if probe is not None and probe[1] > end:
                raise AssertionError("maximal run strings are not disjoint")
        rev = runs[::-1]
        seq = [x] * rev[0]
        for block, r in zip(blocks, rev[1:]):
            seq.extend(block)
            seq.extend([x] * r)
        if len(seq) != end - start:
            raise AssertionError("run reversal changed the window length")
        out[start:end] = seq
        p = end
    return NCPartition(tuple(out))


# ---------------------------------------------------------------------------
# Descent-section code reversal
# ---------------------------------------------------------------------------


def descent_code(pi: PartitionLike) -> tuple[Letters, tuple[Letters, ...]]:
    """Encode a nonempty partition as (section bottoms, section codes).

    The word splits at descents into maximal weakly increasing sections;
    ``bottoms[i]`` is the first letter of section i (always 1 for the
    first), and ``codes[i]`` records each within-section step as
    1 (ascent) or 0 (plateau)."""
    partition = as_ncpartition(pi)
    if len(partition) == 0:
        raise EmptyPartition("the empty partition has no descent code")
    letters = partition.letters
    bottoms = [letters[0]]
    codes: list[Letters] = []
    bits: list[int] = []
    for prev, nxt in zip(letters, letters[1:]):
        if nxt > prev:
            bits.append(1)
        elif nxt == prev:
            bits.append(0)
        else:
            codes.append(tuple(bits))
            bits = []
            bottoms.append(nxt)
    codes.append(tuple(bits))
    return tuple(bottoms), tuple(codes)


def decode_descent_code(
    bottoms: Sequence[int], codes: Sequence[Sequence[int]]
) -> NCPartition:
    """Rebuild the unique canonical non-crossing word with the given
    section bottoms and ascent/plateau codes.

    Within a section the steps are forced: an ascent always goes to
    (running maximum) + 1 — in a canonical non-crossing word no other
    letter can exceed the current one — and a plateau repeats.  The
    result is validated in full; inconsistent inputs raise ValueError.
    """
    if not bottoms or len(bottoms) != len(codes):
        raise ValueError("need exactly one code per section bottom")
    if bottoms[0] != 1:
        raise ValueError("the first section must start at 1")
    out: list[int] = []
    maximum = 0
    for start, code in zip(bottoms, codes):
        start = int(start)
        if out and start >= out[-1]:
            raise ValueError("every section bottom must descend")
        if start > maximum + 1:
            raise ValueError("section bottom skips unused letters")
        out.append(start)
        maximum = max(maximum, start)
        for bit in code:
            if bit == 1:
                maximum += 1
                out.append(maximum)
            elif bit == 0:
                out.append(out[-1])
            else:
                raise ValueError("code bits must be 0 or 1")
    return NCPartition(tuple(out))


def map_descent_code(pi: PartitionLike) -> NCPartition:
    """Involution that reverses every section's ascent/plateau code while
    keeping the descent bottoms.

    Exchanges occurrences of 1^a 2 3 ... m and 1 2 ... (m-1) m^a for all
    a, m >= 2 simultaneously; sections keep their sets of distinct
    letters, so ascent tops and block count are preserved."""
    partition = as_ncpartition(pi)
    if len(partition) == 0:
        raise EmptyPartition("the empty partition has no descent code")
    bottoms, codes = descent_code(partition)
    flipped = tuple(code[::-1] for code in codes)
    result = decode_descent_code(bottoms, flipped)
    if descent_code(result) != (bottoms, flipped):
        raise AssertionError("descent-code round trip failed")
    return result
