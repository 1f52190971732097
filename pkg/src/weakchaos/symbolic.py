"""Partition coding and the recurrence-time orbit codec.

Orbits of the piecewise-linear slow-escape map are coded by their cell
indices.  Because cell k maps onto cell k-1, the index sequence is a
deterministic countdown between visits to cell 0, so the whole sequence
is reconstructible from the initial index plus the index entered after
each visit to 0 — the recurrence record.  That makes an orbit of n
steps describable in about one integer per zero-visit instead of one
per step, which is the engine behind sub-linear orbit complexity.

The codec stores, bit-exactly:

    header   encode_nat(n) ++ encode_nat(location_count) ++ encode_nat(l)
    entries  each recurrence-record entry, self-delimited (codes module)
    raw      one fixed-width cover index (ceil(log2 l) bits) for every
             step whose cell is NOT inside the ball of radius eps at 0

A cell A_k lies inside that ball exactly when xi_{k-1} <= eps, so the
deep tail of every excursion is free: the decoder already knows those
points to accuracy eps (ball center 0).  Only the shallow prefix of
each excursion — at most containment_threshold(eps)+1 symbols — plus
each zero-visit itself needs an explicit cover index.  Decoding walks
the reconstructed symbol timeline and emits cover-ball indices whose
centers track the true orbit within eps (closed: distance can equal eps
exactly when the orbit passes through a breakpoint equal to eps).

codec_length_from_landings mirrors the encoded length arithmetic
directly from a renewal landing sequence, so bit-length curves can be
measured at horizons far beyond what float orbits support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codes import encode_nat, encoded_nat_length, decode_nat
from .errors import (
    CoverError,
    DescentError,
    EpsilonError,
    FixedPointError,
    InsufficientDataError,
    StreamError,
)
from .maps import Orbit, PLMannevilleMap, branch_indices

_SYMBOL_CAP = 2**62


def ceil_log2(m: int) -> int:
    """Smallest w with 2^w >= m, for m >= 1; 0 for m = 1."""
    if m < 1:
        raise ValueError(f"ceil_log2 needs m >= 1, got {m}")
    return (m - 1).bit_length()


@dataclass(frozen=True)
class SymbolSequence:
    """Cell indices of an orbit; index k > 0 is always followed by k-1."""

    symbols: np.ndarray

    def __len__(self) -> int:
        return len(self.symbols)


@dataclass(frozen=True)
class RecurrenceRecord:
    """Initial cell index plus the index entered after each zero-visit."""

    entries: tuple[int, ...]
    zero_visits: int
    horizon: int


def symbolize(pl: PLMannevilleMap, orbit: Orbit) -> SymbolSequence:
    """Cell index of every orbit point; the fixed point 0 has no index."""
    points = np.asarray(orbit.points, dtype=np.float64)
    if np.any(points == 0.0):
        raise FixedPointError(
            "orbit touches the fixed point 0, which has no cell index"
        )
    ks = branch_indices(pl, points, cap=_SYMBOL_CAP)
    return SymbolSequence(symbols=ks)


def _as_symbols(seq) -> np.ndarray:
    if isinstance(seq, SymbolSequence):
        return np.asarray(seq.symbols, dtype=np.int64)
    return np.asarray(seq, dtype=np.int64)


def to_recurrence(seq) -> RecurrenceRecord:
    """Compress a symbol sequence to its recurrence record."""
    symbols = _as_symbols(seq)
    if symbols.size == 0:
        raise InsufficientDataError("empty symbol sequence")
    if symbols.min() < 0:
        raise DescentError("cell indices must be >= 0")
    n = symbols.size - 1
    pos = symbols[:-1] > 0
    if not np.all(symbols[1:][pos] == symbols[:-1][pos] - 1):
        bad = int(np.nonzero(symbols[1:][pos] != symbols[:-1][pos] - 1)[0][0])
        raise DescentError(
            f"index after a positive index must drop by exactly 1 "
            f"(violated near step {bad})"
        )
    zero_steps = np.nonzero(symbols[:-1] == 0)[0]
    entries = (int(symbols[0]),) + tuple(int(symbols[i + 1]) for i in zero_steps)
    zero_visits = int(np.count_nonzero(symbols == 0))
    return RecurrenceRecord(entries=entries, zero_visits=zero_visits, horizon=n)


def reconstruct(entries, n: int) -> SymbolSequence:
    """Inverse of to_recurrence: regenerate the symbol sequence to step n."""
    entries = tuple(int(e) for e in entries)
    if not entries:
        raise InsufficientDataError("recurrence record is empty")
    if n < 0:
        raise ValueError(f"horizon must be >= 0, got {n}")
    out = np.empty(n + 1, dtype=np.int64)
    cur = entries[0]
    out[0] = cur
    used = 1
    for i in range(1, n + 1):
        if cur == 0:
            if used >= len(entries):
                raise InsufficientDataError(
                    f"record exhausted at step {i} of horizon {n}"
                )
            cur = entries[used]
            used += 1
        else:
            cur -= 1
        out[i] = cur
    return SymbolSequence(symbols=out)


@dataclass(frozen=True)
class EpsilonCover:
    """Grid cover of [0,1] by balls of radius eps centered at {j*eps}."""

    eps: float
    l: int
    centers: np.ndarray

    @property
    def index_width(self) -> int:
        """Bits per stored cover index."""
        return ceil_log2(self.l)

    def index_of(self, x: float) -> int:
        """Lowest index whose center is strictly within eps of x."""
        j0 = int(math.floor(x / self.eps))
        for j in (j0 - 1, j0, j0 + 1):
            if 0 <= j < self.l and abs(float(self.centers[j]) - x) < self.eps:
                return j
        raise CoverError(f"no cover ball strictly within {self.eps} of {x}")


def make_cover(eps: float) -> EpsilonCover:
    """The canonical cover: centers 0, eps, 2*eps, ... clamped into [0,1]."""
    if eps <= 0.0:
        raise EpsilonError(f"cover needs eps > 0, got {eps}")
    l = int(math.floor(1.0 / eps)) + 1
    centers = np.minimum(np.arange(l, dtype=np.float64) * eps, 1.0)
    return EpsilonCover(eps=eps, l=l, centers=centers)


def containment_threshold(pl: PLMannevilleMap, eps: float) -> int:
    """Largest cell index whose cell is NOT inside the eps-ball at 0.

    Cell A_k sits inside [0, eps] exactly when xi_{k-1} <= eps, so this
    returns max{k : xi_{k-1} > eps}; -1 when eps >= 1 (every cell is
    contained, including A_0 whose closure is (xi_0, 1]).
    """
    if eps <= 0.0:
        raise EpsilonError(f"containment threshold needs eps > 0, got {eps}")
    if eps >= 1.0:
        return -1
    if eps >= pl.a:
        return 0
    k = int(math.ceil((pl.a / eps) ** (pl.z - 1.0))) - 1
    if k < 1:
        k = 1
    while pl.xi(k) > eps:
        k += 1
    while k > 0 and pl.xi(k - 1) <= eps:
        k -= 1
    return k


@dataclass(frozen=True)
class CodecOutput:
    """Encoded orbit: the bit string, its raw-entry count, and the bound."""

    bits: str
    location_count: int
    bound: int


def _length_bound(entries, location_count: int, width: int, header_len: int) -> int:
    per_entry = sum(2 * ceil_log2(p + 2) + 2 for p in entries)
    return per_entry + location_count * width + header_len


def encode_orbit(
    pl: PLMannevilleMap, orbit: Orbit, cover: EpsilonCover
) -> CodecOutput:
    """Encode an orbit to accuracy cover.eps; see the module docstring."""
    seq = symbolize(pl, orbit)
    record = to_recurrence(seq)
    n = record.horizon
    k_free = containment_threshold(pl, cover.eps)
    width = cover.index_width
    points = orbit.points
    raw_entries = []
    for i, s in enumerate(seq.symbols):
        if s <= k_free:
            raw_entries.append(cover.index_of(float(points[i])))
    location_count = len(raw_entries)
    header = (
        encode_nat(n) + encode_nat(location_count) + encode_nat(cover.l)
    )
    entry_bits = "".join(encode_nat(p) for p in record.entries)
    raw_bits = "".join(format(b, f"0{width}b") if width else "" for b in raw_entries)
    bits = header + entry_bits + raw_bits
    bound = _length_bound(record.entries, location_count, width, len(header))
    assert len(bits) <= bound, "encoded length exceeded its analytic bound"
    return CodecOutput(bits=bits, location_count=location_count, bound=bound)


def decode_orbit(
    bits: str, pl: PLMannevilleMap, cover: EpsilonCover
) -> np.ndarray:
    """Decode to one cover index per step; centers track the orbit within eps.

    Steps whose cell is inside the eps-ball at 0 decode to index 0 (the
    ball centered at 0); every other step reads one stored index.
    """
    n, rest = decode_nat(bits)
    location_count, rest = decode_nat(rest)
    l, rest = decode_nat(rest)
    if l != cover.l:
        raise StreamError(
            f"stream was encoded against a cover of {l} balls, got {cover.l}"
        )
    k_free = containment_threshold(pl, cover.eps)
    width = cover.index_width

    # First pass: replay the symbol timeline, pulling recurrence entries
    # off the stream as needed, and note which steps carry a raw index.
    cur, rest = decode_nat(rest)
    needs_raw = [cur <= k_free]
    for _ in range(n):
        if cur == 0:
            cur, rest = decode_nat(rest)
        else:
            cur -= 1
        needs_raw.append(cur <= k_free)
    expected = location_count * width
    if len(rest) != expected:
        raise StreamError(
            f"raw index section has {len(rest)} bits, expected {expected}"
        )
    if sum(needs_raw) != location_count:
        raise StreamError(
            f"timeline needs {sum(needs_raw)} raw entries, header says "
            f"{location_count}"
        )
    out = np.zeros(n + 1, dtype=np.int64)
    pos = 0
    for i, flag in enumerate(needs_raw):
        if flag:
            if width:
                out[i] = int(rest[pos : pos + width], 2)
            pos += width
    return out


def codec_length_from_landings(
    pl: PLMannevilleMap,
    ks: np.ndarray,
    zeros: np.ndarray,
    n: int,
    cover: EpsilonCover,
) -> int:
    """Encoded bit length of a chain-driven orbit, from its landings alone.

    (ks, zeros) is a landing sequence as produced by the recurrence
    module: the symbol timeline starts at 0, excursion j has landing
    ks[j] and ends with the zero-visit at time zeros[j].  The last
    excursion may cross the horizon.  Mirrors encode_orbit exactly
    (cross-checked in the test suite) without materializing points:
    every step of an excursion deeper than the containment threshold is
    free, the rest cost one fixed-width index each.
    """
    if n < 0:
        raise ValueError(f"horizon must be >= 0, got {n}")
    ks = np.asarray(ks, dtype=np.float64)
    zeros = np.asarray(zeros, dtype=np.int64)
    k_free = containment_threshold(pl, cover.eps)
    width = cover.index_width

    if n == 0:
        n_entries = 0
    else:
        n_entries = 1 + int(np.searchsorted(zeros, n - 1, side="right"))
    if n_entries > len(ks):
        raise InsufficientDataError(
            f"landing sequence ends before horizon {n}: have {len(ks)} "
            f"landings, timeline needs {n_entries}"
        )
    entry_bits = encoded_nat_length(0) + sum(
        encoded_nat_length(int(k)) for k in ks[:n_entries]
    )

    # Raw-index count: the initial zero, then each excursion's shallow part.
    location_count = 1 if k_free >= 0 else 0
    complete = zeros <= n
    ks_complete = ks[complete]
    if k_free >= 0:
        location_count += int(
            np.sum(np.minimum(ks_complete, float(k_free)) + 1.0)
        )
    starts = np.concatenate([[0], zeros[:-1]])
    if n >= 1:
        open_mask = (~complete) & (starts <= n - 1)
    else:
        open_mask = np.zeros(len(ks), dtype=bool)
    for k, start in zip(ks[open_mask], starts[open_mask]):
        m = n - int(start)  # symbols at times start+1 .. n
        location_count += int(max(0.0, m - max(0.0, k - k_free)))

    header_len = (
        encoded_nat_length(n)
        + encoded_nat_length(location_count)
        + encoded_nat_length(cover.l)
    )
    return header_len + entry_bits + location_count * width
