"""Bit-string primitives: ranking, self-delimiting codes, dyadic values.

Bit strings are plain Python ``str`` over the characters '0' and '1'.

The ranking enumerates strings by length, then lexicographically with
0 < 1, starting from the empty string:

    "" -> 0, "0" -> 1, "1" -> 2, "00" -> 3, "01" -> 4, "10" -> 5, ...

so a string of length L occupies ranks [2^L - 1, 2^(L+1) - 2].  The
self-delimiting code doubles every payload bit and closes with the
two-bit terminator "01"; since payload pairs are always "00" or "11",
the terminator is unambiguous and the code is prefix-free.  Gluing an
encoded first component onto a raw second component therefore encodes a
pair reversibly.

Dyadic values place the binary point at the midpoint of the string:
a string s of length n is read as sum(s_i * 2^(floor(n/2) - i)) for
i = 1..n.  Values are exact ``fractions.Fraction`` objects, never
floats, so distances between them are exact rationals.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import StreamError


def string_to_nat(s: str) -> int:
    """Rank of a bit string in length-then-lexicographic order."""
    if not s:
        return 0
    return (1 << len(s)) - 1 + int(s, 2)


def nat_to_string(n: int) -> str:
    """Inverse of string_to_nat."""
    if n < 0:
        raise ValueError("rank must be a natural number")
    length = (n + 1).bit_length() - 1
    if length == 0:
        return ""
    offset = n - ((1 << length) - 1)
    return format(offset, f"0{length}b")


def self_delim_encode(s: str) -> str:
    """Double every bit, then append the terminator \"01\"."""
    return "".join(c + c for c in s) + "01"


def self_delim_decode(stream: str) -> tuple[str, str]:
    """Strip one self-delimited string off the front of ``stream``.

    Returns (payload, remainder).  Raises StreamError if a pair "10"
    appears before the terminator or the stream ends mid-pair.
    """
    out: list[str] = []
    i = 0
    while True:
        pair = stream[i : i + 2]
        if len(pair) < 2:
            raise StreamError("stream ended inside a bit pair")
        if pair == "01":
            return "".join(out), stream[i + 2 :]
        if pair[0] != pair[1]:
            raise StreamError(f"invalid pair {pair!r} at offset {i}")
        out.append(pair[0])
        i += 2


def pair_encode(a: str, b: str) -> str:
    """Reversible encoding of the pair (a, b): encoded a, then raw b."""
    return self_delim_encode(a) + b


def encode_nat(m: int) -> str:
    """Self-delimited encoding of a natural number via its rank string."""
    return self_delim_encode(nat_to_string(m))


def decode_nat(stream: str) -> tuple[int, str]:
    """Strip one self-delimited natural off the front of ``stream``."""
    payload, rest = self_delim_decode(stream)
    return string_to_nat(payload), rest


def encoded_nat_length(m: int) -> int:
    """len(encode_nat(m)) without building the string."""
    return 2 * (m + 1).bit_length()


def dyadic_value(s: str) -> Fraction:
    """Exact rational value of a bit string, binary point at its midpoint."""
    n = len(s)
    if n == 0:
        return Fraction(0)
    # sum(s_i 2^(n//2 - i)) == int(s, 2) * 2^(n//2 - n)
    return Fraction(int(s, 2), 1 << (n - n // 2))


def dyadic_distance(s1: str, s2: str, n: int = 0) -> Fraction:
    """Exact distance between the dyadic values of two strings.

    The precision argument ``n`` is part of the interface (callers may
    request the distance to within 2^-n); arithmetic here is exact, so
    the returned value satisfies every tolerance and ``n`` is unused.
    """
    return abs(dyadic_value(s1) - dyadic_value(s2))
