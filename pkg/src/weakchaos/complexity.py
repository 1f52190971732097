"""Computable estimates of how many bits an eps-accurate orbit costs.

The true shortest-description length of an orbit is uncomputable, so
this module provides two concrete upper estimators, both bit-exact and
platform-independent:

    lz     incremental-parsing dictionary compression of the sequence
           of cover-ball indices (works for any map).  Each new phrase
           is a previously seen phrase plus one symbol and costs a
           back-pointer (ceil(log2 of the dictionary size)) plus one
           symbol of ceil(log2 alphabet) bits.
    codec  the recurrence-time codec of the symbolic module (only for
           the piecewise-linear slow-escape family).

Calibration points: positive-entropy maps give linear growth at the
entropy rate (doubling: about 1 bit/step), rigid rotations give strongly
sub-linear growth, and a constant index sequence costs Theta(sqrt(n) *
log n) under dictionary parsing — sub-power-law on any finite window but
not literally logarithmic; see the README note.

Long doubling-map runs use the seeded binary-expansion extension of the
initial condition (maps module): float64 initial conditions are dyadic,
so their literal float orbits hit the fixed point 0 within ~1100 steps
and would fake zero entropy at large n.

point_information_model translates a radius into bits: describing a
point of [0,1]^d to accuracy eps costs about d*log2(1/eps) bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AlphabetError, CoverError, EpsilonError, EstimatorError
from .maps import MapSpec, Orbit, binary_orbit_extension, iterate
from .symbolic import EpsilonCover, ceil_log2, encode_orbit, make_cover

ESTIMATORS = ("codec", "lz")


def cover_index_sequence(spec: MapSpec, orbit, cover: EpsilonCover) -> np.ndarray:
    """Per-step index of the lowest cover ball strictly within eps."""
    points = orbit.points if isinstance(orbit, Orbit) else np.asarray(orbit)
    xs = np.asarray(points, dtype=np.float64)
    j0 = np.floor(xs / cover.eps).astype(np.int64)
    out = np.full(xs.shape, -1, dtype=np.int64)
    for off in (-1, 0, 1):
        j = np.clip(j0 + off, 0, cover.l - 1)
        hit = (np.abs(cover.centers[j] - xs) < cover.eps) & (out < 0)
        out[hit] = j[hit]
    if np.any(out < 0):
        bad = float(xs[out < 0][0])
        raise CoverError(f"no cover ball strictly within {cover.eps} of {bad}")
    return out


class LZDictionary:
    """Streaming dictionary state of the incremental-parsing compressor.

    Phrases live in a prefix tree, so they are distinct by construction.
    Every completed phrase is some earlier phrase (possibly empty)
    extended by one fresh symbol; it costs a back-pointer of
    ceil(log2(number of phrases so far + 1)) bits plus one literal
    symbol of ceil(log2 alphabet) bits.  `emitted_bits` tracks exactly
    that sum over completed phrases.
    """

    __slots__ = ("alphabet", "symbol_width", "phrase_count", "emitted_bits",
                 "_root", "_node")

    def __init__(self, alphabet: int) -> None:
        if alphabet < 1:
            raise AlphabetError(f"alphabet size must be >= 1, got {alphabet}")
        self.alphabet = int(alphabet)
        self.symbol_width = ceil_log2(alphabet)
        self.phrase_count = 0
        self.emitted_bits = 0
        self._root: dict = {}
        self._node = self._root

    def feed(self, symbol) -> None:
        s = int(symbol)
        if not 0 <= s < self.alphabet:
            raise AlphabetError(f"symbol {s} outside alphabet of {self.alphabet}")
        child = self._node.get(s)
        if child is not None:
            self._node = child
            return
        self.emitted_bits += ceil_log2(self.phrase_count + 1) + self.symbol_width
        self.phrase_count += 1
        self._node[s] = {}
        self._node = self._root

    def total_bits(self) -> int:
        """Bits if the stream ended here; a trailing partial phrase
        costs only its back-pointer (the literal symbol is withheld)."""
        if self._node is self._root:
            return self.emitted_bits
        return self.emitted_bits + ceil_log2(self.phrase_count + 1)


def lz_compress(seq, alphabet: int) -> int:
    """Total bits of incremental-parsing compression of `seq`.

    Deterministic and monotone in sequence length.
    """
    state = LZDictionary(alphabet)
    for s in seq:
        state.feed(s)
    return state.total_bits()


@dataclass(frozen=True)
class ComplexityCurve:
    """Bits-to-describe-the-orbit at each horizon, for one estimator."""

    estimator: str
    eps: float
    ns: np.ndarray
    bits: np.ndarray


def orbit_information_curve(
    spec: MapSpec,
    x0: float,
    eps: float,
    n_grid: list[int],
    estimator: str,
    seed: int = 0,
) -> ComplexityCurve:
    """Description length of eps-accurate orbit prefixes at each horizon."""
    ns = list(n_grid)
    if not ns or any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError(f"n_grid must be strictly increasing, got {n_grid}")
    if any(n < 0 for n in ns):
        raise ValueError(f"horizons must be >= 0, got {n_grid}")
    if estimator not in ESTIMATORS:
        raise EstimatorError(
            f"estimator must be one of {ESTIMATORS}, got {estimator!r}"
        )
    cover = make_cover(eps)
    n_max = ns[-1]
    if estimator == "codec":
        if spec.kind != "plmanneville" or spec.pl is None:
            raise EstimatorError(
                "the recurrence codec needs a plmanneville map, got "
                f"{spec.kind!r}"
            )
        orbit = iterate(spec, x0, n_max)
        bits = [
            len(encode_orbit(spec.pl, Orbit(x0, orbit.points[: n + 1]), cover).bits)
            for n in ns
        ]
    else:
        if spec.kind == "doubling":
            points = binary_orbit_extension(x0, n_max, seed)
        else:
            points = iterate(spec, x0, n_max).points
        indices = cover_index_sequence(spec, points, cover)
        state = LZDictionary(cover.l)
        bits = []
        fed = 0
        for n in ns:
            while fed <= n:
                state.feed(indices[fed])
                fed += 1
            bits.append(state.total_bits())
    return ComplexityCurve(
        estimator=estimator,
        eps=eps,
        ns=np.asarray(ns, dtype=np.int64),
        bits=np.asarray(bits, dtype=np.int64),
    )


def point_information_model(eps: float, d: int) -> float:
    """Bits to locate a point of [0,1]^d to accuracy eps: d*log2(1/eps)."""
    if not (0.0 < eps < 1.0):
        raise EpsilonError(f"point information needs eps in (0,1), got {eps}")
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    return -d * float(np.log2(eps))
