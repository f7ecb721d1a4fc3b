"""Ordered alphabets and conversion between symbol tokens and index arrays."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import UnknownSymbol, ValidationError

#: Reserved token for the empty word in the text formats; never a valid symbol.
EPSILON_TOKEN = "eps"


class Alphabet:
    """An ordered set of symbol tokens.

    The declaration order is fixed at construction and drives every
    lexicographic enumeration, report ordering, and inverse-CDF sampling in
    the package, so that identical inputs give identical outputs.
    """

    __slots__ = ("_symbols", "_index", "_single_char", "_byte_lut", "_byte_out")

    def __init__(self, symbols: Iterable[str]):
        syms = tuple(str(s) for s in symbols)
        if not syms:
            raise ValidationError("alphabet must contain at least one symbol")
        if len(set(syms)) != len(syms):
            raise ValidationError(f"alphabet symbols are not pairwise distinct: {syms}")
        for s in syms:
            if s == EPSILON_TOKEN:
                raise ValidationError(f"{EPSILON_TOKEN!r} is reserved for the empty word")
            if not s or any(c.isspace() for c in s) or s.startswith("#"):
                raise ValidationError(f"invalid symbol token {s!r}")
        self._symbols = syms
        self._index = {s: i for i, s in enumerate(syms)}
        self._single_char = all(len(s) == 1 for s in syms)
        # byte fast path only when every symbol fits in latin-1
        if self._single_char and all(ord(s) < 256 for s in syms):
            lut = np.full(256, -1, dtype=np.int64)
            out = np.zeros(len(syms), dtype=np.uint8)
            for i, s in enumerate(syms):
                lut[ord(s)] = i
                out[i] = ord(s)
            self._byte_lut = lut
            self._byte_out = out
        else:
            self._byte_lut = None
            self._byte_out = None

    @property
    def symbols(self) -> tuple[str, ...]:
        return self._symbols

    @property
    def single_char(self) -> bool:
        return self._single_char

    def __len__(self) -> int:
        return len(self._symbols)

    def __iter__(self):
        return iter(self._symbols)

    def __contains__(self, symbol) -> bool:
        return symbol in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self._symbols == other._symbols

    def __hash__(self) -> int:
        return hash(self._symbols)

    def __repr__(self) -> str:
        return f"Alphabet({list(self._symbols)!r})"

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise UnknownSymbol(symbol, self._symbols) from None

    def symbol(self, index: int) -> str:
        return self._symbols[index]

    def encode(self, word: Iterable[str]) -> np.ndarray:
        """Convert a word (iterable of tokens; a str iterates per character)
        into an int64 index array."""
        if isinstance(word, str) and self._byte_lut is not None:
            try:
                raw = np.frombuffer(word.encode("latin-1"), dtype=np.uint8)
            except UnicodeEncodeError as exc:
                raise UnknownSymbol(word[exc.start], self._symbols) from None
            idx = self._byte_lut[raw]
            bad = np.nonzero(idx < 0)[0]
            if bad.size:
                raise UnknownSymbol(word[bad[0]], self._symbols)
            return idx
        return np.array([self.index(s) for s in word], dtype=np.int64)

    def decode(self, indices: Sequence[int]) -> tuple[str, ...]:
        return tuple(self._symbols[i] for i in indices)

    def text(self, indices: Sequence[int]) -> str:
        """Render an index array as text: concatenated for single-character
        alphabets, whitespace-separated tokens otherwise."""
        if self._byte_out is not None:
            arr = np.asarray(indices, dtype=np.int64)
            return self._byte_out[arr].tobytes().decode("latin-1")
        sep = "" if self._single_char else " "
        return sep.join(self._symbols[i] for i in indices)

    def word_label(self, word: Iterable[str]) -> str:
        """Human/CSV label for a word of tokens (``eps`` for the empty word)."""
        toks = tuple(word)
        if not toks:
            return EPSILON_TOKEN
        return "".join(toks) if self._single_char else " ".join(toks)

    def words(self, length: int):
        """All words of the given length in lexicographic (declaration) order."""
        if length == 0:
            yield ()
            return
        for prefix in self.words(length - 1):
            for s in self._symbols:
                yield prefix + (s,)


def as_word(word: Iterable[str]) -> tuple[str, ...]:
    """Normalize any token iterable (including a plain str) to a tuple."""
    if isinstance(word, tuple):
        return word
    return tuple(word)
