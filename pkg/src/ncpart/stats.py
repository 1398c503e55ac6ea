"""Statistics of non-crossing partitions: subword-pattern occurrence counts
and their exact distributions as marker polynomials.

The distribution builders never materialize the partitions.  One depth-first
walk over the prefix tree carries running occurrence counters down each
branch and folds a histogram at every node, so a single pass produces the
rows for every size up to the requested bound — and a joint distribution
needs exactly one pass, never one per pattern.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .algebra import MultiPoly
from .core import (
    DEFAULT_ENUM_LIMIT,
    NCPartition,
    SubwordPattern,
    as_ncpartition,
    as_pattern,
    catalan,
)
from .errors import EmptyPartition, LimitExceeded

__all__ = [
    "count_subword",
    "rep",
    "block_count",
    "ascent_count",
    "descent_count",
    "DistributionTable",
    "distribution",
    "joint_distribution",
    "rep_joint_distribution",
    "distribution_rows",
    "batch_distribution_rows",
    "joint_rows",
    "rep_joint_rows",
]

Letters = tuple[int, ...]
PatternLike = Union[SubwordPattern, Sequence[int], str]
PartitionLike = Union[NCPartition, Sequence[int], str]


def _pair_constraints(word: Letters) -> tuple[tuple[int, int, int], ...]:
    """All (i, j, sign) order constraints of a pattern word, i < j."""
    out = []
    for j in range(1, len(word)):
        for i in range(j):
            d = word[i] - word[j]
            out.append((i, j, (d > 0) - (d < 0)))
    return tuple(out)


def _window_matches(
    letters: Sequence[int], start: int, pairs: tuple[tuple[int, int, int], ...]
) -> bool:
    for i, j, sign in pairs:
        d = letters[start + i] - letters[start + j]
        if ((d > 0) - (d < 0)) != sign:
            return False
    return True


def count_subword(pi: PartitionLike, tau: PatternLike) -> int:
    """Number of windows of pi order-isomorphic to the pattern tau."""
    letters = as_ncpartition(pi).letters
    word = as_pattern(tau).word
    length = len(word)
    if length > len(letters):
        return 0
    pairs = _pair_constraints(word)
    return sum(
        1
        for start in range(len(letters) - length + 1)
        if _window_matches(letters, start, pairs)
    )


def rep(pi: PartitionLike) -> int:
    """The smallest letter that occurs more than once; 0 if none does.

    Undefined (raises) on the empty partition.
    """
    partition = as_ncpartition(pi)
    if len(partition) == 0:
        raise EmptyPartition("rep is undefined on the empty partition")
    seen: set[int] = set()
    best = 0
    for v in partition.letters:
        if v in seen and (best == 0 or v < best):
            best = v
        seen.add(v)
    return best


def block_count(pi: PartitionLike) -> int:
    """Number of blocks (the largest letter; 0 for the empty partition)."""
    return as_ncpartition(pi).block_count


def ascent_count(pi: PartitionLike) -> int:
    """Number of positions where the next letter is strictly larger."""
    letters = as_ncpartition(pi).letters
    return sum(1 for i in range(len(letters) - 1) if letters[i] < letters[i + 1])


def descent_count(pi: PartitionLike) -> int:
    """Number of positions where the next letter is strictly smaller."""
    letters = as_ncpartition(pi).letters
    return sum(1 for i in range(len(letters) - 1) if letters[i] > letters[i + 1])


# ---------------------------------------------------------------------------
# Distribution engine
# ---------------------------------------------------------------------------


def _check_size(n: int) -> None:
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > DEFAULT_ENUM_LIMIT:
        raise LimitExceeded(
            f"n = {n} exceeds the enumeration limit {DEFAULT_ENUM_LIMIT}"
        )


def _walk_separate(
    n_max: int, words: tuple[Letters, ...]
) -> list[list[dict[int, int]]]:
    """hist[p][k][c] = number of size-k partitions with c occurrences of
    words[p].  One walk serves every pattern and every k <= n_max."""
    num = len(words)
    pairs = [_pair_constraints(w) for w in words]
    lengths = [len(w) for w in words]
    hists: list[list[dict[int, int]]] = [
        [dict() for _ in range(n_max + 1)] for _ in range(num)
    ]
    counts = [0] * num
    letters: list[int] = []
    stack: list[int] = []

    def record(depth: int) -> None:
        for p in range(num):
            h = hists[p][depth]
            c = counts[p]
            h[c] = h.get(c, 0) + 1

    def extend(v: int, depth: int) -> list[int]:
        letters.append(v)
        bumped = []
        for p in range(num):
            length = lengths[p]
            if depth >= length and _window_matches(letters, depth - length, pairs[p]):
                counts[p] += 1
                bumped.append(p)
        return bumped

    def retract(bumped: list[int]) -> None:
        letters.pop()
        for p in bumped:
            counts[p] -= 1

    def walk(depth: int, maximum: int) -> None:
        record(depth)
        if depth == n_max:
            return
        candidates = tuple(stack)
        for idx, v in enumerate(candidates):
            bumped = extend(v, depth + 1)
            tail = stack[idx + 1 :]
            del stack[idx + 1 :]
            walk(depth + 1, maximum)
            stack.extend(tail)
            retract(bumped)
        v = maximum + 1
        bumped = extend(v, depth + 1)
        stack.append(v)
        walk(depth + 1, v)
        stack.pop()
        retract(bumped)

    walk(0, 0)
    return hists


def _walk_joint(
    n_max: int, word1: Letters, word2: Letters
) -> list[dict[tuple[int, int], int]]:
    """hist[k][(c1, c2)] = number of size-k partitions with c1 occurrences
    of word1 and c2 of word2 — computed jointly in one pass."""
    pairs1 = _pair_constraints(word1)
    pairs2 = _pair_constraints(word2)
    len1, len2 = len(word1), len(word2)
    hists: list[dict[tuple[int, int], int]] = [dict() for _ in range(n_max + 1)]
    letters: list[int] = []
    stack: list[int] = []

    def walk(depth: int, maximum: int, c1: int, c2: int) -> None:
        h = hists[depth]
        key = (c1, c2)
        h[key] = h.get(key, 0) + 1
        if depth == n_max:
            return
        candidates = tuple(stack) + (maximum + 1,)
        for idx, v in enumerate(candidates):
            fresh = idx == len(candidates) - 1
            letters.append(v)
            d = depth + 1
            n1 = c1 + (
                1 if d >= len1 and _window_matches(letters, d - len1, pairs1) else 0
            )
            n2 = c2 + (
                1 if d >= len2 and _window_matches(letters, d - len2, pairs2) else 0
            )
            if fresh:
                stack.append(v)
                walk(d, v, n1, n2)
                stack.pop()
            else:
                tail = stack[idx + 1 :]
                del stack[idx + 1 :]
                walk(d, maximum, n1, n2)
                stack.extend(tail)
            letters.pop()

    walk(0, 0, 0, 0)
    return hists


def _walk_rep(n_max: int, word: Letters) -> list[dict[tuple[int, int], int]]:
    """hist[k][(c, r)] = number of size-k partitions with c occurrences of
    the pattern and smallest repeated letter r (0 when nothing repeats)."""
    pairs = _pair_constraints(word)
    length = len(word)
    hists: list[dict[tuple[int, int], int]] = [dict() for _ in range(n_max + 1)]
    letters: list[int] = []
    stack: list[int] = []

    def walk(depth: int, maximum: int, count: int, repeated: int) -> None:
        h = hists[depth]
        key = (count, repeated)
        h[key] = h.get(key, 0) + 1
        if depth == n_max:
            return
        candidates = tuple(stack) + (maximum + 1,)
        for idx, v in enumerate(candidates):
            fresh = idx == len(candidates) - 1
            letters.append(v)
            d = depth + 1
            c = count + (
                1 if d >= length and _window_matches(letters, d - length, pairs) else 0
            )
            if fresh:
                stack.append(v)
                walk(d, v, c, repeated)
                stack.pop()
            else:
                r = v if repeated == 0 or v < repeated else repeated
                tail = stack[idx + 1 :]
                del stack[idx + 1 :]
                walk(d, maximum, c, r)
                stack.extend(tail)
            letters.pop()

    walk(0, 0, 0, 0)
    return hists


# Caches keyed by the request shape; values are (n_max, histogram data).
_SEPARATE_CACHE: dict[tuple[Letters, ...], tuple[int, list[list[dict[int, int]]]]] = {}
_JOINT_CACHE: dict[tuple[Letters, Letters], tuple[int, list[dict[tuple[int, int], int]]]] = {}
_REP_CACHE: dict[Letters, tuple[int, list[dict[tuple[int, int], int]]]] = {}


def _separate_hists(n_max: int, words: tuple[Letters, ...]) -> list[list[dict[int, int]]]:
    cached = _SEPARATE_CACHE.get(words)
    if cached is not None and cached[0] >= n_max:
        return [rows[: n_max + 1] for rows in cached[1]]
    hists = _walk_separate(n_max, words)
    _SEPARATE_CACHE[words] = (n_max, hists)
    return hists


def _joint_hists(
    n_max: int, word1: Letters, word2: Letters
) -> list[dict[tuple[int, int], int]]:
    key = (word1, word2)
    cached = _JOINT_CACHE.get(key)
    if cached is not None and cached[0] >= n_max:
        return cached[1][: n_max + 1]
    hists = _walk_joint(n_max, word1, word2)
    _JOINT_CACHE[key] = (n_max, hists)
    return hists


def _rep_hists(n_max: int, word: Letters) -> list[dict[tuple[int, int], int]]:
    cached = _REP_CACHE.get(word)
    if cached is not None and cached[0] >= n_max:
        return cached[1][: n_max + 1]
    hists = _walk_rep(n_max, word)
    _REP_CACHE[word] = (n_max, hists)
    return hists


# ---------------------------------------------------------------------------
# Distribution tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DistributionTable:
    """Exact distribution rows for one or two statistics.

    ``rows[n]`` is the generating polynomial over all size-n non-crossing
    partitions, with each statistic recorded in its marker.  Construction
    re-checks the two structural invariants: every coefficient is a
    nonnegative integer, and setting every marker to 1 gives the Catalan
    number.
    """

    patterns: tuple[SubwordPattern, ...]
    markers: tuple[str, ...]
    rows: tuple[MultiPoly, ...]

    def __post_init__(self) -> None:
        ones = {name: 1 for name in ("q", "p", "v")}
        for n, row in enumerate(self.rows):
            if not (row.has_integer_coeffs() and row.has_nonnegative_coeffs()):
                raise AssertionError(
                    f"distribution row {n} has a bad coefficient: {row}"
                )
            total = row.substitute(**ones).as_constant()
            if total != catalan(n):
                raise AssertionError(
                    f"distribution row {n} sums to {total}, expected {catalan(n)}"
                )

    def row(self, n: int) -> MultiPoly:
        return self.rows[n]

    @property
    def n_max(self) -> int:
        return len(self.rows) - 1


def distribution_rows(n_max: int, tau: PatternLike) -> list[MultiPoly]:
    """Occurrence distributions (marker q) for every size 0..n_max."""
    return batch_distribution_rows(n_max, [tau])[0]


def batch_distribution_rows(
    n_max: int, taus: Sequence[PatternLike]
) -> list[list[MultiPoly]]:
    """Occurrence distributions for many patterns from one shared walk."""
    _check_size(n_max)
    words = tuple(as_pattern(t).word for t in taus)
    hists = _separate_hists(n_max, words)
    out = []
    for p in range(len(words)):
        rows = [
            MultiPoly({(c, 0, 0): mult for c, mult in hist.items()})
            for hist in hists[p]
        ]
        out.append(rows)
    return out


def joint_rows(n_max: int, tau1: PatternLike, tau2: PatternLike) -> list[MultiPoly]:
    """Joint distributions: tau1 marked by p, tau2 marked by q."""
    _check_size(n_max)
    word1 = as_pattern(tau1).word
    word2 = as_pattern(tau2).word
    hists = _joint_hists(n_max, word1, word2)
    return [
        MultiPoly({(c2, c1, 0): mult for (c1, c2), mult in hist.items()})
        for hist in hists
    ]


def rep_joint_rows(n_max: int, tau: PatternLike) -> list[MultiPoly]:
    """Joint distributions: occurrences marked by q, smallest repeated
    letter marked by v (exponent 0 when nothing repeats)."""
    _check_size(n_max)
    word = as_pattern(tau).word
    hists = _rep_hists(n_max, word)
    return [
        MultiPoly({(c, 0, r): mult for (c, r), mult in hist.items()})
        for hist in hists
    ]


def distribution(n: int, tau: PatternLike) -> MultiPoly:
    """The polynomial sum of q^(occurrences of tau) over all size-n
    non-crossing partitions."""
    pattern = as_pattern(tau)
    rows = distribution_rows(n, pattern)
    table = DistributionTable(
        patterns=(pattern,), markers=("q",), rows=tuple(rows)
    )
    return table.row(n)


def joint_distribution(n: int, tau1: PatternLike, tau2: PatternLike) -> MultiPoly:
    """The polynomial sum of p^(occurrences of tau1) q^(occurrences of tau2)
    over all size-n non-crossing partitions, from a single pass."""
    p1 = as_pattern(tau1)
    p2 = as_pattern(tau2)
    rows = joint_rows(n, p1, p2)
    table = DistributionTable(
        patterns=(p1, p2), markers=("p", "q"), rows=tuple(rows)
    )
    return table.row(n)


def rep_joint_distribution(n: int, tau: PatternLike) -> MultiPoly:
    """The polynomial sum of q^(occurrences) v^(smallest repeated letter)
    over all size-n non-crossing partitions (v-exponent 0 when no letter
    repeats), from a single pass."""
    pattern = as_pattern(tau)
    rows = rep_joint_rows(n, pattern)
    table = DistributionTable(
        patterns=(pattern,), markers=("q", "v"), rows=tuple(rows)
    )
    return table.row(n)
