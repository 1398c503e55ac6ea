"""Canonical sequences of non-crossing set partitions, their enumeration,
and the classification of subword patterns into structural families.

A set partition of {1, ..., n} is encoded by its canonical sequence: letter
i is the block index of element i, blocks numbered by first appearance.
Such sequences are exactly the restricted growth strings.  The partition is
non-crossing when no four positions i < j < k < l carry letters a, b, a, b
with a != b.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, Union

from .errors import FamilyViolation, InvalidPattern, LimitExceeded

__all__ = [
    "DEFAULT_ENUM_LIMIT",
    "CanonicalSeq",
    "NCPartition",
    "SubwordPattern",
    "Run",
    "RunAscent",
    "StaircaseTail",
    "RunStaircase",
    "Sandwich",
    "RhoTail",
    "Generic",
    "PatternFamily",
    "parse_sequence",
    "format_sequence",
    "is_restricted_growth",
    "is_noncrossing",
    "is_noncrossing_pairwise",
    "iter_rgs",
    "iter_nc",
    "enumerate_nc",
    "catalan",
    "classify_pattern",
    "classify_all",
    "as_ncpartition",
    "as_pattern",
]

#: Largest n accepted by the enumerators unless the caller raises the limit.
DEFAULT_ENUM_LIMIT = 16

Letters = tuple[int, ...]
SequenceLike = Union["CanonicalSeq", Sequence[int], str]


def parse_sequence(text: str) -> Letters:
    """Parse the text form of a sequence.

    A digit string such as ``'1231'`` when every letter fits one digit;
    a comma-separated list such as ``'1,2,3,10'`` otherwise.  The empty
    string denotes the empty sequence.
    """
    text = text.strip()
    if not text:
        return ()
    if "," in text:
        return tuple(int(part) for part in text.split(","))
    if not text.isdigit():
        raise ValueError(f"cannot parse sequence text {text!r}")
    return tuple(int(ch) for ch in text)


def format_sequence(letters: Sequence[int]) -> str:
    """Inverse of :func:`parse_sequence`."""
    if not letters:
        return ""
    if max(letters) <= 9:
        return "".join(str(v) for v in letters)
    return ",".join(str(v) for v in letters)


def _letters_of(value: SequenceLike) -> Letters:
    if isinstance(value, CanonicalSeq):
        return value.letters
    if isinstance(value, str):
        return parse_sequence(value)
    return tuple(int(v) for v in value)


def is_restricted_growth(word: SequenceLike) -> bool:
    """True when the word starts at 1 and never jumps past (max so far) + 1."""
    letters = _letters_of(word)
    maximum = 0
    for v in letters:
        if v < 1 or v > maximum + 1:
            return False
        if v > maximum:
            maximum = v
    return True


def is_noncrossing(word: SequenceLike) -> bool:
    """Linear-time check that a restricted growth string is non-crossing.

    Maintains the set of letters that may still recur (kept on a stack in
    increasing order).  A letter repeats legally only if it is still open;
    repeating it closes every letter above it forever.

    Raises ValueError when the word is not restricted growth at all.
    """
    letters = _letters_of(word)
    if not is_restricted_growth(letters):
        raise ValueError(f"not a restricted growth string: {letters!r}")
    stack: list[int] = []
    maximum = 0
    for v in letters:
        if v == maximum + 1:
            stack.append(v)
            maximum = v
        else:
            # v recurs; it must still be open.
            while stack and stack[-1] > v:
                stack.pop()
            if not stack or stack[-1] != v:
                return False
    return True


def is_noncrossing_pairwise(word: SequenceLike) -> bool:
    """Quadratic-time check of the same property, written independently.

    A crossing a-b-a-b (a < b) exists if and only if some position pair
    j < k has word[j] > word[k] while word[j] still occurs after k: the
    first occurrences of the two letters then complete the pattern.

    Raises ValueError when the word is not restricted growth at all.
    """
    letters = _letters_of(word)
    if not is_restricted_growth(letters):
        raise ValueError(f"not a restricted growth string: {letters!r}")
    n = len(letters)
    last: dict[int, int] = {}
    for idx, v in enumerate(letters):
        last[v] = idx
    for j in range(n):
        vj = letters[j]
        for k in range(j + 1, n):
            if letters[k] < vj and last[vj] > k:
                return False
    return True


class CanonicalSeq:
    """A validated restricted growth string (canonical sequence)."""

    __slots__ = ("letters",)

    def __init__(self, letters: SequenceLike) -> None:
        values = _letters_of(letters)
        if not is_restricted_growth(values):
            raise ValueError(f"not a restricted growth string: {values!r}")
        object.__setattr__(self, "letters", values)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def from_text(cls, text: str) -> "CanonicalSeq":
        return cls(parse_sequence(text))

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def text(self) -> str:
        return format_sequence(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, idx):
        return self.letters[idx]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CanonicalSeq):
            return self.letters == other.letters
        return NotImplemented

    def __lt__(self, other: "CanonicalSeq") -> bool:
        return self.letters < other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.text!r})"


class NCPartition(CanonicalSeq):
    """The canonical sequence of a non-crossing set partition."""

    __slots__ = ()

    def __init__(self, letters: SequenceLike) -> None:
        super().__init__(letters)
        if not is_noncrossing(self.letters):
            raise ValueError(f"sequence has a crossing: {self.letters!r}")

    @classmethod
    def _trusted(cls, letters: Letters) -> "NCPartition":
        """Wrap letters known valid by construction (internal fast path)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "letters", letters)
        return obj

    @property
    def block_count(self) -> int:
        return max(self.letters) if self.letters else 0

    def blocks(self) -> list[tuple[int, ...]]:
        """The blocks as tuples of 1-based element indices."""
        out: list[list[int]] = [[] for _ in range(self.block_count)]
        for idx, v in enumerate(self.letters, start=1):
            out[v - 1].append(idx)
        return [tuple(block) for block in out]


def as_ncpartition(value: SequenceLike) -> NCPartition:
    """Coerce text, raw letters, or an existing partition to NCPartition."""
    if isinstance(value, NCPartition):
        return value
    return NCPartition(_letters_of(value))


def catalan(n: int) -> int:
    """The n-th Catalan number, exactly."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return math.comb(2 * n, n) // (n + 1)


def iter_rgs(n: int) -> Iterator[Letters]:
    """All restricted growth strings of length n, in lexicographic order."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        yield ()
        return
    letters = [1] * n
    maxima = [1] * n  # running maximum up to each position
    while True:
        yield tuple(letters)
        # advance like an odometer where position i may hold 1..maxima[i-1]+1
        i = n - 1
        while i > 0 and letters[i] == maxima[i - 1] + 1:
            i -= 1
        if i == 0:
            return
        letters[i] += 1
        maxima[i] = max(maxima[i - 1], letters[i])
        for j in range(i + 1, n):
            letters[j] = 1
            maxima[j] = maxima[i]


def iter_nc(
    n: int,
    *,
    limit: int = DEFAULT_ENUM_LIMIT,
    second_letter: int | None = None,
) -> Iterator[NCPartition]:
    """Yield all non-crossing partitions of size n in lexicographic order.

    The walk extends a prefix letter by letter; the letters that may follow
    a prefix are exactly the still-open letters plus (max so far) + 1, so no
    dead branches are ever visited and nothing is generated-then-filtered.

    With ``second_letter`` (1 or 2) only the sequences whose second letter
    has that value are yielded; the two choices partition the n >= 2 output,
    which lets callers process the ranges independently.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > limit:
        raise LimitExceeded(f"n = {n} exceeds the enumeration limit {limit}")
    if second_letter is not None:
        if second_letter not in (1, 2):
            raise ValueError("second_letter must be 1 or 2")
        if n < 2:
            raise ValueError("second_letter splitting needs n >= 2")
    if n == 0:
        yield NCPartition._trusted(())
        return
    letters = [0] * n
    letters[0] = 1
    stack = [1]

    def walk(pos: int, maximum: int) -> Iterator[NCPartition]:
        if pos == n:
            yield NCPartition._trusted(tuple(letters))
            return
        candidates = tuple(stack)
        for idx, v in enumerate(candidates):
            if pos == 1 and second_letter is not None and v != second_letter:
                continue
            letters[pos] = v
            tail = stack[idx + 1 :]
            del stack[idx + 1 :]
            yield from walk(pos + 1, maximum)
            stack.extend(tail)
        v = maximum + 1
        if not (pos == 1 and second_letter is not None and v != second_letter):
            letters[pos] = v
            stack.append(v)
            yield from walk(pos + 1, v)
            stack.pop()

    yield from walk(1, 1)


def enumerate_nc(
    n: int,
    *,
    limit: int = DEFAULT_ENUM_LIMIT,
    second_letter: int | None = None,
) -> list[NCPartition]:
    """All non-crossing partitions of size n, lexicographically sorted."""
    return list(iter_nc(n, limit=limit, second_letter=second_letter))


# ---------------------------------------------------------------------------
# Subword patterns and their families
# ---------------------------------------------------------------------------


class SubwordPattern:
    """A pattern matched against consecutive windows up to order-isomorphism.

    The word must use every letter of {1, ..., max} at least once.
    """

    __slots__ = ("word",)

    def __init__(self, word: Union["SubwordPattern", Sequence[int], str]) -> None:
        if isinstance(word, SubwordPattern):
            letters = word.word
        elif isinstance(word, str):
            letters = parse_sequence(word)
        else:
            letters = tuple(int(v) for v in word)
        if not letters:
            raise InvalidPattern("a pattern must have at least one letter")
        top = max(letters)
        if min(letters) < 1 or set(letters) != set(range(1, top + 1)):
            raise InvalidPattern(
                f"pattern letters must cover 1..{top} exactly: {letters!r}"
            )
        object.__setattr__(self, "word", letters)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("SubwordPattern is immutable")

    @property
    def text(self) -> str:
        return format_sequence(self.word)

    @property
    def alphabet_size(self) -> int:
        return max(self.word)

    def __len__(self) -> int:
        return len(self.word)

    def __iter__(self) -> Iterator[int]:
        return iter(self.word)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SubwordPattern):
            return self.word == other.word
        return NotImplemented

    def __lt__(self, other: "SubwordPattern") -> bool:
        return self.word < other.word

    def __hash__(self) -> int:
        return hash(("SubwordPattern", self.word))

    def __repr__(self) -> str:
        return f"SubwordPattern({self.text!r})"


def as_pattern(value: Union[SubwordPattern, Sequence[int], str]) -> SubwordPattern:
    if isinstance(value, SubwordPattern):
        return value
    return SubwordPattern(value)


def _validate_rho(rho: Letters, *, single_start: bool) -> None:
    if not rho:
        raise FamilyViolation("rho must be nonempty")
    if not is_restricted_growth(rho) or not is_noncrossing(rho):
        raise FamilyViolation(
            f"rho must be a canonical non-crossing sequence: {rho!r}"
        )
    if single_start and len(rho) > 1 and rho[1] == 1:
        raise FamilyViolation(
            "when the trailing run has length >= 2, rho must begin with "
            f"exactly one 1: {rho!r}"
        )


@dataclass(frozen=True, slots=True)
class Run:
    """Constant patterns 1^a: a repeated letter."""

    a: int

    def __post_init__(self) -> None:
        if self.a < 1:
            raise FamilyViolation("run length must be >= 1")

    def pattern(self) -> SubwordPattern:
        return SubwordPattern((1,) * self.a)


@dataclass(frozen=True, slots=True)
class RunAscent:
    """Patterns 1^a 2: a run followed by one strictly larger letter."""

    a: int

    def __post_init__(self) -> None:
        if self.a < 1:
            raise FamilyViolation("run length must be >= 1")

    def pattern(self) -> SubwordPattern:
        return SubwordPattern((1,) * self.a + (2,))


@dataclass(frozen=True, slots=True)
class StaircaseTail:
    """Patterns 1 2 ... (m-1) m^a: an ascent staircase ending in a run."""

    m: int
    a: int

    def __post_init__(self) -> None:
        if self.m < 2 or self.a < 2:
            raise FamilyViolation("staircase-tail needs m >= 2 and a >= 2")

    def pattern(self) -> SubwordPattern:
        return SubwordPattern(tuple(range(1, self.m)) + (self.m,) * self.a)


@dataclass(frozen=True, slots=True)
class RunStaircase:
    """Patterns 1^a 2 3 ... m: a run followed by an ascent staircase."""

    a: int
    m: int

    def __post_init__(self) -> None:
        if self.a < 2 or self.m < 2:
            raise FamilyViolation("run-staircase needs a >= 2 and m >= 2")

    def pattern(self) -> SubwordPattern:
        return SubwordPattern((1,) * self.a + tuple(range(2, self.m + 1)))


@dataclass(frozen=True, slots=True)
class Sandwich:
    """Patterns 1^a (rho+1) 1^b: a lifted core between two runs of 1s."""

    a: int
    rho: Letters
    b: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "rho", tuple(int(v) for v in self.rho))
        if self.a < 1 or self.b < 1:
            raise FamilyViolation("surrounding runs need a >= 1 and b >= 1")
        _validate_rho(self.rho, single_start=False)

    def pattern(self) -> SubwordPattern:
        lifted = tuple(v + 1 for v in self.rho)
        return SubwordPattern((1,) * self.a + lifted + (1,) * self.b)


@dataclass(frozen=True, slots=True)
class RhoTail:
    """Patterns (rho+1) 1^b: a lifted core followed by a run of 1s."""

    rho: Letters
    b: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "rho", tuple(int(v) for v in self.rho))
        if self.b < 1:
            raise FamilyViolation("trailing run needs b >= 1")
        _validate_rho(self.rho, single_start=self.b >= 2)

    def pattern(self) -> SubwordPattern:
        lifted = tuple(v + 1 for v in self.rho)
        return SubwordPattern(lifted + (1,) * self.b)


@dataclass(frozen=True, slots=True)
class Generic:
    """Any valid pattern not covered by a structured family."""

    word: Letters

    def __post_init__(self) -> None:
        object.__setattr__(self, "word", SubwordPattern(self.word).word)

    def pattern(self) -> SubwordPattern:
        return SubwordPattern(self.word)


PatternFamily = Union[Run, RunAscent, StaircaseTail, RunStaircase, Sandwich, RhoTail, Generic]


def _match_run(word: Letters) -> Run | None:
    if all(v == 1 for v in word):
        return Run(len(word))
    return None


def _match_run_ascent(word: Letters) -> RunAscent | None:
    if len(word) >= 2 and word[-1] == 2 and all(v == 1 for v in word[:-1]):
        return RunAscent(len(word) - 1)
    return None


def _match_staircase_tail(word: Letters) -> StaircaseTail | None:
    m = max(word)
    a = len(word) - (m - 1)
    if m >= 2 and a >= 2 and word == tuple(range(1, m)) + (m,) * a:
        return StaircaseTail(m, a)
    return None


def _match_run_staircase(word: Letters) -> RunStaircase | None:
    m = max(word)
    a = len(word) - (m - 1)
    if m >= 2 and a >= 2 and word == (1,) * a + tuple(range(2, m + 1)):
        return RunStaircase(a, m)
    return None


def _runs_of_ones(word: Letters) -> tuple[int, int]:
    lead = 0
    while lead < len(word) and word[lead] == 1:
        lead += 1
    trail = 0
    while trail < len(word) and word[-1 - trail] == 1:
        trail += 1
    return lead, trail


def _match_sandwich(word: Letters) -> Sandwich | None:
    lead, trail = _runs_of_ones(word)
    if lead < 1 or trail < 1 or lead + trail >= len(word):
        return None
    interior = word[lead : len(word) - trail]
    if min(interior) < 2:
        return None
    rho = tuple(v - 1 for v in interior)
    try:
        return Sandwich(lead, rho, trail)
    except FamilyViolation:
        return None


def _match_rho_tail(word: Letters) -> RhoTail | None:
    _, trail = _runs_of_ones(word)
    if trail < 1 or trail >= len(word):
        return None
    prefix = word[: len(word) - trail]
    if min(prefix) < 2:
        return None
    rho = tuple(v - 1 for v in prefix)
    try:
        return RhoTail(rho, trail)
    except FamilyViolation:
        return None


_MATCHERS = (
    _match_run,
    _match_run_ascent,
    _match_staircase_tail,
    _match_run_staircase,
    _match_sandwich,
    _match_rho_tail,
)


def classify_all(pattern: Union[SubwordPattern, Sequence[int], str]) -> tuple[PatternFamily, ...]:
    """Every family the pattern belongs to, most specific first.

    Falls back to a single Generic tag when no structured family matches.
    """
    word = as_pattern(pattern).word
    matches: list[PatternFamily] = []
    for matcher in _MATCHERS:
        found = matcher(word)
        if found is not None:
            matches.append(found)
    if not matches:
        matches.append(Generic(word))
    return tuple(matches)


def classify_pattern(pattern: Union[SubwordPattern, Sequence[int], str]) -> PatternFamily:
    """The principal (most specific) family tag for a pattern."""
    return classify_all(pattern)[0]
