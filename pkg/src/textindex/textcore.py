"""Alphabet-aware string primitives shared by every index in the package.

Everything here operates on ``bytes``.  A corpus is a byte string with a
distinguished terminator symbol (byte value 0) appended exactly once at the
end; the terminator compares smaller than every other symbol, which is what
the suffix-sorting machinery relies on.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field

TERMINATOR = 0

# Relative letter frequencies of English text, in percent, most common first.
# Used for sketch defaults, synthetic corpora and frequency-weighted sampling.
ENGLISH_LETTER_FREQUENCIES = {
    "e": 12.702, "t": 9.056, "a": 8.167, "o": 7.507, "i": 6.966,
    "n": 6.749, "s": 6.327, "h": 6.094, "r": 5.987, "d": 4.253,
    "l": 4.025, "c": 2.782, "u": 2.758, "m": 2.406, "w": 2.361,
    "f": 2.228, "g": 2.015, "y": 1.974, "p": 1.929, "b": 1.492,
    "v": 0.978, "k": 0.772, "j": 0.153, "x": 0.150, "q": 0.095,
    "z": 0.074,
}


def most_common_letters(count: int) -> bytes:
    """The `count` most frequent English letters, most frequent first."""
    letters = list(ENGLISH_LETTER_FREQUENCIES)
    if count > len(letters):
        raise ValueError(f"only {len(letters)} letters available")
    return "".join(letters[:count]).encode()


def least_common_letters(count: int) -> bytes:
    letters = list(ENGLISH_LETTER_FREQUENCIES)
    if count > len(letters):
        raise ValueError(f"only {len(letters)} letters available")
    return "".join(letters[-count:]).encode()


@dataclass(frozen=True)
class Corpus:
    """Immutable text with the terminator appended as the final symbol.

    ``data`` holds the full byte sequence including the terminator; ``text``
    is the original input.  Symbol value 0 is reserved for the terminator and
    rejected in input.
    """

    data: bytes

    def __post_init__(self):
        if len(self.data) < 1 or self.data[-1] != TERMINATOR:
            raise ValueError("corpus must end with the terminator symbol")
        if TERMINATOR in self.data[:-1]:
            raise ValueError("symbol value 0 is reserved for the terminator")

    @classmethod
    def from_bytes(cls, raw: bytes) -> "Corpus":
        if TERMINATOR in raw:
            raise ValueError("symbol value 0 is reserved for the terminator")
        return cls(bytes(raw) + bytes([TERMINATOR]))

    @property
    def n(self) -> int:
        return len(self.data)

    @property
    def text(self) -> bytes:
        return self.data[:-1]


def printable(data: bytes, terminator_char: str = "$") -> str:
    """Render a byte string for display, showing the terminator as `$`."""
    return "".join(terminator_char if b == TERMINATOR else chr(b) for b in data)


@dataclass(frozen=True)
class QGramRef:
    """A q-gram described by position rather than by a copied substring."""

    start: int
    q: int

    def extract(self, text: bytes) -> bytes:
        return text[self.start:self.start + self.q]


def extract_qgrams(text: bytes, q: int) -> list[QGramRef]:
    """All overlapping q-grams of `text`, shifted by one symbol at a time."""
    if q < 1 or q > len(text):
        raise ValueError(f"q must satisfy 1 <= q <= {len(text)}, got {q}")
    return [QGramRef(i, q) for i in range(len(text) - q + 1)]


@dataclass(frozen=True)
class MinimizerSet:
    """Selected (alpha, q)-minimizers of a text.

    `entries` holds (position, gram) pairs, strictly increasing by position,
    one entry per distinct winning position.  `n` is the length of the text
    the set was computed over.
    """

    alpha: int
    q: int
    n: int
    entries: tuple[tuple[int, bytes], ...]

    @property
    def positions(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.entries)

    @property
    def grams(self) -> tuple[bytes, ...]:
        return tuple(g for _, g in self.entries)


def minimizers(text: bytes, alpha: int, q: int) -> MinimizerSet:
    """Select (alpha, q)-minimizers of `text`.

    A window of alpha consecutive q-grams (q + alpha - 1 symbols) slides over
    the text one symbol at a time; each window contributes its
    lexicographically smallest q-gram, the leftmost one on ties.  Winning
    positions are recorded once each.
    """
    n = len(text)
    if alpha < 1 or q < 1:
        raise ValueError("alpha and q must be positive")
    if n < q + alpha - 1:
        raise ValueError(
            f"text of length {n} is shorter than one window ({q + alpha - 1})")
    last_gram = n - q
    picks: list[int] = []
    # Monotone queue of gram start positions; strict pops keep the leftmost
    # of equal grams at the front.
    window: deque[int] = deque()
    for pos in range(last_gram + 1):
        gram = text[pos:pos + q]
        while window and text[window[-1]:window[-1] + q] > gram:
            window.pop()
        window.append(pos)
        first_in_window = pos - alpha + 1
        if first_in_window >= 0:
            while window[0] < first_in_window:
                window.popleft()
            if not picks or picks[-1] != window[0]:
                picks.append(window[0])
    entries = tuple((p, text[p:p + q]) for p in picks)
    return MinimizerSet(alpha=alpha, q=q, n=n, entries=entries)


@dataclass(frozen=True)
class PhraseDecomposition:
    """Phrases of a text: the substrings between consecutive minimizers.

    Phrase i covers positions [positions[i], positions[i+1] - 1], inclusive,
    so there is one phrase fewer than there are minimizer positions.
    """

    positions: tuple[int, ...]
    ranges: tuple[tuple[int, int], ...]

    def extract(self, text: bytes) -> list[bytes]:
        return [text[a:b + 1] for a, b in self.ranges]


def phrases(text: bytes, minimizer_set: MinimizerSet) -> PhraseDecomposition:
    """Decompose `text` into phrases between consecutive minimizer positions."""
    if minimizer_set.n != len(text):
        raise ValueError("minimizer set was computed over a different text")
    if not minimizer_set.entries:
        raise ValueError("minimizer set is empty")
    pos = minimizer_set.positions
    ranges = tuple((pos[i], pos[i + 1] - 1) for i in range(len(pos) - 1))
    return PhraseDecomposition(positions=pos, ranges=ranges)


@dataclass(frozen=True)
class FrequencyTable:
    """Per-symbol occurrence counts with derived probabilities."""

    counts: dict[int, int] = field(default_factory=dict)

    @classmethod
    def from_bytes(cls, data: bytes) -> "FrequencyTable":
        return cls(dict(Counter(data)))

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def probabilities(self) -> dict[int, float]:
        total = self.total
        if total == 0:
            raise ValueError("empty frequency table")
        return {sym: c / total for sym, c in self.counts.items()}


def entropy(freq: FrequencyTable) -> float:
    """Zero-order entropy in bits per symbol: -sum(p * log2 p), 0 log 0 = 0."""
    if not freq.counts or freq.total == 0:
        raise ValueError("empty frequency table")
    total = freq.total
    result = 0.0
    for count in freq.counts.values():
        if count:
            p = count / total
            result -= p * math.log2(p)
    return result
