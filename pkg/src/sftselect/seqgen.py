"""Reproducible sequence generation and block-frequency estimation.

Sequences are handled as numpy arrays of symbol indices (see
``Alphabet.encode``/``text``); at desk scale (10**6 symbols) this keeps
generation and counting inside the acceptance-time budgets.

The pseudo-random generator is splitmix64, fixed bit-for-bit so samples are
identical across platforms and languages: the state advances by adding
0x9E3779B97F4A7C15 modulo 2**64 and each output is the mixed state
(z ^= z>>30; z *= 0xBF58476D1CE4E5B9; z ^= z>>27; z *= 0x94D049BB133111EB;
z ^= z>>31); a uniform real in [0,1) is the top 53 bits over 2**53.
Symbols are drawn by inverse CDF in alphabet order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .alphabet import Alphabet
from .errors import BlockLengthOutOfRange, DeadEnd, ValidationError
from .measures import MarkovMeasure, block_measure_array

SLIDING = "sliding"
ALIGNED = "aligned"

CHAMPERNOWNE = "champernowne"
MARKOV_SAMPLE = "markov-sample"

_GAMMA = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


class SplitMix64:
    """Scalar splitmix64 stream; the reference for the vectorized path."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = (z ^ (z >> 30)) * _M1 & _MASK
        z = (z ^ (z >> 27)) * _M2 & _MASK
        return z ^ (z >> 31)

    def next_float(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53


def splitmix64_floats(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """Values offset+1 .. offset+count of the splitmix64 [0,1) stream for
    ``seed``, computed in one vectorized pass (the generator is counter
    based: the i-th state is seed + i * gamma)."""
    idx = np.arange(offset + 1, offset + count + 1, dtype=np.uint64)
    z = np.uint64(seed & _MASK) + idx * np.uint64(_GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53


def _cumulative(weights) -> tuple[tuple, int]:
    """Inverse-CDF table in alphabet order plus the fallback index (the last
    positive weight, guarding the never-hit u >= total edge)."""
    cum = []
    acc = 0.0
    fallback = -1
    for i, w in enumerate(weights):
        acc += float(w)
        cum.append(acc)
        if w > 0.0:
            fallback = i
    return tuple(cum), fallback


def _pick(cum, fallback, u) -> int:
    for i, c in enumerate(cum):
        if u < c:
            return i
    return fallback


def _champernowne_chunks(base: int, n: int, chunk: int):
    """Bounded-size pieces of the by-length, then lexicographic word
    concatenation; at most ~chunk symbols are materialized at a time."""
    emitted = 0
    length = 1
    while emitted < n:
        count = base**length
        code = 0
        while code < count and emitted < n:
            batch = min(max(chunk // length, 1), count - code)
            codes = np.arange(code, code + batch, dtype=np.int64)
            digits = np.empty((batch, length), dtype=np.int64)
            for j in range(length - 1, -1, -1):
                digits[:, j] = codes % base
                codes //= base
            flat = digits.reshape(-1)
            take = min(flat.size, n - emitted)
            yield flat[:take]
            emitted += take
            code += batch
        length += 1


def champernowne(alphabet, n: int) -> np.ndarray:
    """First ``n`` symbols of the concatenation of all nonempty words ordered
    by length and then lexicographically; the canonical normal sequence."""
    if not isinstance(alphabet, Alphabet):
        alphabet = Alphabet(alphabet)
    if n < 0:
        raise ValidationError("length must be nonnegative")
    pieces = list(_champernowne_chunks(len(alphabet), n, 1 << 16))
    if not pieces:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(pieces)


def sample_markov(mu: MarkovMeasure, seed: int, n: int) -> np.ndarray:
    """Sample the first ``n`` symbols of a mu-distributed sequence: the first
    symbol from the stationary vector, each next one from the row of its
    predecessor, consuming one splitmix64 value per symbol."""
    if n < 0:
        raise ValidationError("length must be nonnegative")
    out = np.empty(n, dtype=np.int64)
    if n == 0:
        return out
    pi_cum, pi_fb = _cumulative(mu.pi.weights.tolist())
    if pi_fb < 0:
        raise DeadEnd("<initial>")
    rows = [_cumulative(row) for row in mu.P.entries.tolist()]
    us = splitmix64_floats(seed, n).tolist()
    prev = _pick(pi_cum, pi_fb, us[0])
    out[0] = prev
    for j in range(1, n):
        cum, fb = rows[prev]
        if fb < 0:
            raise DeadEnd(mu.alphabet.symbol(prev))
        prev = _pick(cum, fb, us[j])
        out[j] = prev
    return out


@dataclass(frozen=True)
class GeneratorSpec:
    """Reproducible description of an input-sequence source."""

    kind: str
    alphabet: Alphabet
    n: int
    measure: Optional[MarkovMeasure] = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in (CHAMPERNOWNE, MARKOV_SAMPLE):
            raise ValidationError(f"unknown generator kind {self.kind!r}")
        if self.kind == MARKOV_SAMPLE and self.measure is None:
            raise ValidationError("markov-sample generation needs a measure")
        if self.measure is not None and self.measure.alphabet != self.alphabet:
            raise ValidationError("generator measure alphabet mismatch")


def generate(spec: GeneratorSpec) -> np.ndarray:
    if spec.kind == CHAMPERNOWNE:
        return champernowne(spec.alphabet, spec.n)
    return sample_markov(spec.measure, spec.seed, spec.n)


def generate_chunks(spec: GeneratorSpec, chunk: int = 1 << 16) -> Iterable[np.ndarray]:
    """Yield the sequence of ``spec`` in bounded chunks so consumers never
    hold the whole sequence (the splitmix64 stream is counter based, so a
    Markov sample continues exactly across chunk boundaries)."""
    if spec.kind == CHAMPERNOWNE:
        yield from _champernowne_chunks(len(spec.alphabet), spec.n, chunk)
        return
    mu = spec.measure
    pi_cum, pi_fb = _cumulative(mu.pi.weights.tolist())
    if pi_fb < 0:
        raise DeadEnd("<initial>")
    rows = [_cumulative(row) for row in mu.P.entries.tolist()]
    produced = 0
    prev = None
    while produced < spec.n:
        take = min(chunk, spec.n - produced)
        us = splitmix64_floats(spec.seed, take, offset=produced).tolist()
        out = np.empty(take, dtype=np.int64)
        start = 0
        if prev is None:
            prev = _pick(pi_cum, pi_fb, us[0])
            out[0] = prev
            start = 1
        for j in range(start, take):
            cum, fb = rows[prev]
            if fb < 0:
                raise DeadEnd(mu.alphabet.symbol(prev))
            prev = _pick(cum, fb, us[j])
            out[j] = prev
        produced += take
        yield out


class BlockCounter:
    """Streaming block counter over symbol-index chunks.

    SLIDING counts every window of length k (n-k+1 of them over n symbols);
    ALIGNED counts the disjoint blocks w1 w2 ... (floor(n/k) of them).
    Memory is one #A**k count vector plus a k-sized carry.
    """

    def __init__(self, alphabet_size: int, k: int, mode: str = SLIDING):
        if k < 1:
            raise BlockLengthOutOfRange("block length must be at least 1")
        if mode not in (SLIDING, ALIGNED):
            raise ValidationError(f"unknown counting mode {mode!r}")
        self.base = alphabet_size
        self.k = k
        self.mode = mode
        self.counts = np.zeros(alphabet_size**k, dtype=np.int64)
        self.n = 0
        self._carry = np.zeros(0, dtype=np.int64)

    def update(self, chunk: np.ndarray):
        chunk = np.asarray(chunk, dtype=np.int64)
        self.n += chunk.size
        seq = np.concatenate([self._carry, chunk]) if self._carry.size else chunk
        k, base = self.k, self.base
        if self.mode == SLIDING:
            if seq.size >= k:
                codes = seq[: seq.size - k + 1].copy()
                for j in range(1, k):
                    codes *= base
                    codes += seq[j : seq.size - k + 1 + j]
                self.counts += np.bincount(codes, minlength=self.counts.size)
                self._carry = seq[seq.size - k + 1 :].copy()
            else:
                self._carry = seq.copy()
        else:
            whole = (seq.size // k) * k
            if whole:
                blocks = seq[:whole].reshape(-1, k)
                codes = blocks[:, 0].copy()
                for j in range(1, k):
                    codes *= base
                    codes += blocks[:, j]
                self.counts += np.bincount(codes, minlength=self.counts.size)
            self._carry = seq[whole:].copy()

    @property
    def windows(self) -> int:
        """Number of blocks counted so far."""
        if self.mode == SLIDING:
            return max(self.n - self.k + 1, 0)
        return self.n // self.k


@dataclass(frozen=True)
class FrequencyReport:
    """Counts and frequencies of every length-k block over a prefix,
    including blocks that never occur (so discrepancies see them)."""

    alphabet: Alphabet
    mode: str
    k: int
    n: int
    counts: np.ndarray = field(repr=False)

    def __post_init__(self):
        expected = self.n - self.k + 1 if self.mode == SLIDING else self.n // self.k
        total = int(self.counts.sum())
        if total != max(expected, 0):
            raise ValidationError(
                f"block counts sum to {total}, expected {expected}"
            )

    @property
    def windows(self) -> int:
        return self.n - self.k + 1 if self.mode == SLIDING else self.n // self.k

    @property
    def frequencies(self) -> np.ndarray:
        w = self.windows
        return self.counts / w if w else np.zeros_like(self.counts, dtype=float)

    def _code(self, word) -> int:
        word = tuple(word)
        if len(word) != self.k:
            raise BlockLengthOutOfRange(f"block {word!r} does not have length {self.k}")
        code = 0
        for s in word:
            code = code * len(self.alphabet) + self.alphabet.index(s)
        return code

    def count_of(self, word) -> int:
        return int(self.counts[self._code(word)])

    def frequency_of(self, word) -> float:
        w = self.windows
        return self.count_of(word) / w if w else 0.0

    def items(self):
        """(word, count, frequency) for every block, lexicographic order."""
        freqs = self.frequencies
        for code, word in enumerate(self.alphabet.words(self.k)):
            yield word, int(self.counts[code]), float(freqs[code])


def block_frequencies(alphabet, x, k: int, mode: str = SLIDING) -> FrequencyReport:
    """Count the length-k blocks of ``x`` (token iterable or index array)."""
    if not isinstance(alphabet, Alphabet):
        alphabet = Alphabet(alphabet)
    idx = x if isinstance(x, np.ndarray) else alphabet.encode(x)
    if k < 1:
        raise BlockLengthOutOfRange("block length must be at least 1")
    if k > idx.size:
        raise BlockLengthOutOfRange(
            f"block length {k} exceeds the sequence length {idx.size}"
        )
    counter = BlockCounter(len(alphabet), k, mode)
    counter.update(idx)
    return FrequencyReport(
        alphabet=alphabet, mode=mode, k=k, n=counter.n, counts=counter.counts
    )


def discrepancy(report: FrequencyReport, mu: MarkovMeasure) -> float:
    """Largest absolute gap between a block frequency and its measure, over
    all #A**k blocks (absent blocks included)."""
    if mu.alphabet != report.alphabet:
        raise ValidationError("report and measure use different alphabets")
    target = block_measure_array(mu, report.k)
    return float(np.max(np.abs(report.frequencies - target)))
