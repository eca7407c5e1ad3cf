"""Order-k character Markov models with surprise/entropy analytics.

Models are plain count tables: an alphabet of glyphs, one table per context
order from k down to 0, and an additive smoothing constant. Everything is
deterministic, and a model never changes after training or parsing, so it is
safe to share between concurrent encode/decode sessions.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

BOS = 0  # reserved begin-of-stream id; pads contexts, never occurs in text

_MAGIC = b"RWC"
_VERSION = b"1"


class ModelFormatError(ValueError):
    """A model file could not be parsed."""


class BadMagicError(ModelFormatError):
    pass


class UnsupportedVersionError(ModelFormatError):
    pass


class TruncatedModelError(ModelFormatError):
    pass


class UnknownCharacterError(ValueError):
    """A character of the input text is not covered by the model alphabet."""

    def __init__(self, char: str, position: int):
        super().__init__(f"character {char!r} at position {position} is not in the alphabet")
        self.char = char
        self.position = position


@dataclass(frozen=True)
class Alphabet:
    """Bijection between glyphs and dense symbol ids.

    Id 0 is the begin-of-stream sentinel; real glyphs get ids 1..len(glyphs)
    in the order given. `build_alphabet` produces code-point-sorted alphabets;
    hand-built ones may order glyphs however suits the source process.
    """

    glyphs: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "glyphs", tuple(self.glyphs))
        for g in self.glyphs:
            if not isinstance(g, str) or len(g) != 1:
                raise ValueError(f"glyph must be a single character, got {g!r}")
        if len(set(self.glyphs)) != len(self.glyphs):
            raise ValueError("duplicate glyph in alphabet")

    @cached_property
    def _ids(self) -> dict[str, int]:
        return {g: i + 1 for i, g in enumerate(self.glyphs)}

    @property
    def size(self) -> int:
        """Number of symbol ids, sentinel included."""
        return len(self.glyphs) + 1

    def __contains__(self, glyph: str) -> bool:
        return glyph in self._ids

    def id_of(self, glyph: str) -> int:
        try:
            return self._ids[glyph]
        except KeyError:
            raise ValueError(f"glyph {glyph!r} is not in the alphabet") from None

    def glyph_of(self, sym: int) -> str:
        if sym == BOS:
            raise ValueError("the begin-of-stream sentinel has no glyph")
        return self.glyphs[sym - 1]

    def encode(self, text: str) -> list[int]:
        ids = self._ids
        out = []
        for pos, ch in enumerate(text):
            sym = ids.get(ch)
            if sym is None:
                raise UnknownCharacterError(ch, pos)
            out.append(sym)
        return out

    def decode(self, syms: Iterable[int]) -> str:
        return "".join(self.glyph_of(s) for s in syms)


def build_alphabet(corpus: str) -> Alphabet:
    """Alphabet of the distinct scalars of `corpus`, sorted by code point."""
    return Alphabet(tuple(sorted(set(corpus))))


@dataclass(frozen=True)
class Distribution:
    """Per-symbol probabilities, indexed by symbol id (entry 0 is the sentinel)."""

    probs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(self.probs))

    def __len__(self) -> int:
        return len(self.probs)

    def validate(self, tol: float = 1e-9) -> None:
        if any(p < 0.0 for p in self.probs):
            raise ValueError("negative probability")
        if abs(sum(self.probs) - 1.0) > tol:
            raise ValueError(f"probabilities sum to {sum(self.probs)!r}, not 1")

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.probs) if p > 0.0)


def surprise(p: float) -> float:
    """Bits of surprise of a probability-p event: log2(1/p)."""
    if p <= 0.0:
        raise ValueError("zero-probability event")
    return math.log2(1.0 / p)


def entropy(dist: Distribution) -> float:
    """Average surprise of a symbol drawn from `dist`; zero terms contribute 0."""
    return sum(p * math.log2(1.0 / p) for p in dist.probs if p > 0.0)


# Context tables: tables[j] maps a length-j tuple of symbol ids to the counts
# of the symbols that followed it. Orders below k are marginalizations of the
# order-k table and exist so prediction can back off.
Counts = dict[int, int]
Table = dict[tuple[int, ...], Counts]


@dataclass
class ContextModel:
    """Trained order-k model: count tables for orders 0..k plus smoothing."""

    alphabet: Alphabet
    order: int
    smoothing: float
    tables: list[Table]

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be >= 0")
        if self.smoothing < 0:
            raise ValueError("smoothing must be >= 0")
        if len(self.tables) != self.order + 1:
            raise ValueError("need one table per order 0..k")

    @classmethod
    def from_counts(
        cls,
        alphabet: Alphabet,
        order: int,
        counts: Mapping[Sequence[int], Mapping[int, int]],
        smoothing: float = 0.0,
    ) -> "ContextModel":
        """Build a model from explicit order-k counts, marginalizing lower orders.

        `counts` maps length-k context tuples to {symbol id: count}. Useful for
        constructing models whose predictions are exact rationals by design.
        """
        tables: list[Table] = [{} for _ in range(order + 1)]
        for ctx, row in counts.items():
            ctx = tuple(ctx)
            if len(ctx) != order:
                raise ValueError(f"context {ctx!r} does not have length {order}")
            for sym, c in row.items():
                if not (0 < sym < alphabet.size):
                    raise ValueError(f"symbol id {sym} outside alphabet")
                if c < 0:
                    raise ValueError("negative count")
                for j in range(order + 1):
                    sub = ctx[order - j:]
                    bucket = tables[j].setdefault(sub, {})
                    bucket[sym] = bucket.get(sym, 0) + c
        return cls(alphabet, order, smoothing, tables)


def context_key(order: int, history: Sequence[int]) -> tuple[int, ...]:
    """The effective context: the last `order` symbols, padded with BOS."""
    if order == 0:
        return ()
    ctx = tuple(history[-order:])
    if len(ctx) < order:
        ctx = (BOS,) * (order - len(ctx)) + ctx
    return ctx


def train(
    corpus: str,
    order: int,
    smoothing: float,
    alphabet: Alphabet | None = None,
) -> ContextModel:
    """Count every length-(k+1) window of the BOS-padded corpus.

    The alphabet defaults to the corpus's own glyphs; pass one explicitly to
    reserve symbols the corpus does not contain (held-out text, smoothing
    targets).
    """
    if not corpus:
        raise ValueError("empty corpus")
    if order < 0:
        raise ValueError("order must be >= 0")
    if smoothing < 0:
        raise ValueError("smoothing must be >= 0")
    if alphabet is None:
        alphabet = build_alphabet(corpus)
    ids = alphabet.encode(corpus)
    padded = [BOS] * order + ids
    tables: list[Table] = [{} for _ in range(order + 1)]
    for i, sym in enumerate(ids):
        for j in range(order + 1):
            ctx = tuple(padded[i + order - j : i + order])
            bucket = tables[j].setdefault(ctx, {})
            bucket[sym] = bucket.get(sym, 0) + 1
    return ContextModel(alphabet, order, smoothing, tables)


def predict(model: ContextModel, history: Sequence[int]) -> Distribution:
    """Next-symbol distribution after `history` (a sequence of symbol ids).

    Uses the longest trained suffix of the BOS-padded history, applies
    additive smoothing over the non-sentinel alphabet at that order, and
    falls back to uniform when nothing matches. The sentinel always gets
    probability 0.
    """
    n = model.alphabet.size
    if n < 2:
        raise ValueError("alphabet has no symbols to predict")
    key = context_key(model.order, history)
    counts: Counts | None = None
    for j in range(model.order, -1, -1):
        counts = model.tables[j].get(key[model.order - j :])
        if counts:
            break
    probs = [0.0] * n
    if counts:
        beta = model.smoothing
        if beta:
            total = sum(counts.values()) + beta * (n - 1)
            for sym in range(1, n):
                probs[sym] = (counts.get(sym, 0) + beta) / total
        else:
            total = sum(counts.values())
            for sym, c in counts.items():
                probs[sym] = c / total
    else:
        u = 1.0 / (n - 1)
        for sym in range(1, n):
            probs[sym] = u
    return Distribution(tuple(probs))


class _Cursor:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, fmt: str) -> tuple:
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.data):
            raise TruncatedModelError("model file truncated")
        vals = struct.unpack_from(fmt, self.data, self.pos)
        self.pos += size
        return vals

    def done(self) -> bool:
        return self.pos == len(self.data)


def serialize_model(model: ContextModel) -> bytes:
    """Serialize to the versioned "RWC1" little-endian format.

    Layout: magic, order (u32), smoothing (f64), glyph count (u32) and glyph
    code points (u32 each), then per order 0..k a u64 context count followed
    by each context (j u32 ids, u32 row length, and (u32 id, u64 count) pairs).
    Contexts and rows are sorted, so serialization is deterministic.
    """
    out = bytearray()
    out += _MAGIC + _VERSION
    out += struct.pack("<Id", model.order, model.smoothing)
    out += struct.pack("<I", len(model.alphabet.glyphs))
    for g in model.alphabet.glyphs:
        out += struct.pack("<I", ord(g))
    for j in range(model.order + 1):
        table = model.tables[j]
        out += struct.pack("<Q", len(table))
        for ctx in sorted(table):
            if j:
                out += struct.pack(f"<{j}I", *ctx)
            row = table[ctx]
            out += struct.pack("<I", len(row))
            for sym in sorted(row):
                out += struct.pack("<IQ", sym, row[sym])
    return bytes(out)


def parse_model(data: bytes) -> ContextModel:
    """Inverse of `serialize_model`; raises a ModelFormatError subclass on bad input."""
    if len(data) < 4:
        raise TruncatedModelError("model file shorter than its magic")
    if data[:3] != _MAGIC:
        raise BadMagicError("not a model file (bad magic)")
    if data[3:4] != _VERSION:
        raise UnsupportedVersionError(f"unsupported model version {data[3:4]!r}")
    cur = _Cursor(data)
    cur.pos = 4
    order, smoothing = cur.take("<Id")
    if smoothing < 0 or math.isnan(smoothing):
        raise ModelFormatError("invalid smoothing constant")
    (n_glyphs,) = cur.take("<I")
    glyphs = []
    for _ in range(n_glyphs):
        (cp,) = cur.take("<I")
        try:
            glyphs.append(chr(cp))
        except ValueError:
            raise ModelFormatError(f"invalid glyph code point {cp:#x}") from None
    try:
        alphabet = Alphabet(tuple(glyphs))
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from None
    tables: list[Table] = []
    for j in range(order + 1):
        (n_ctx,) = cur.take("<Q")
        table: Table = {}
        for _ in range(n_ctx):
            ctx = cur.take(f"<{j}I") if j else ()
            if any(s >= alphabet.size for s in ctx):
                raise ModelFormatError("context symbol id outside alphabet")
            (n_row,) = cur.take("<I")
            row: Counts = {}
            for _ in range(n_row):
                sym, count = cur.take("<IQ")
                if not (0 < sym < alphabet.size):
                    raise ModelFormatError("symbol id outside alphabet")
                row[sym] = count
            table[ctx] = row
        tables.append(table)
    if not cur.done():
        raise ModelFormatError("trailing data after model")
    return ContextModel(alphabet, order, smoothing, tables)
