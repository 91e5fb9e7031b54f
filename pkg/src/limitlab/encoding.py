"""Diagonal pairing of naturals, its k-ary extensions, and prefix codes.

Everything here is a bijection (or a section of one) on plain Python ints,
which are already arbitrary precision.  The pairing enumerates pairs by
increasing coordinate sum and, within one diagonal, by increasing first
coordinate:

    pair(0,0)=0  pair(0,1)=1  pair(1,0)=2  pair(0,2)=3  pair(1,1)=4 ...

Tuples of fixed arity fold the pairing from the left; a prefix of a sequence
is coded as the tuple (length-1, v0, ..., vn) so the decoder can recover the
arity from the code itself.
"""

from __future__ import annotations

from math import isqrt

__all__ = [
    "pair",
    "unpair",
    "tuple_code",
    "tuple_decode",
    "encode_prefix",
    "decode_prefix",
]


def pair(x: int, y: int) -> int:
    """Bijective pairing of two naturals: (x+y)(x+y+1)/2 + x."""
    if x < 0 or y < 0:
        raise ValueError("pair is defined on naturals only")
    return (x * x + 2 * x * y + y * y + 3 * x + y) // 2


def unpair(z: int) -> tuple[int, int]:
    """Inverse of pair, via integer square root of the diagonal index."""
    if z < 0:
        raise ValueError("unpair is defined on naturals only")
    d = (isqrt(8 * z + 1) - 1) // 2
    x = z - d * (d + 1) // 2
    return x, d - x


def tuple_code(values: list[int]) -> int:
    """Left-nested fold of pair over values; a single value codes as itself."""
    if not values:
        raise ValueError("tuple_code needs at least one value")
    acc = values[0]
    if acc < 0:
        raise ValueError("tuple_code is defined on naturals only")
    for v in values[1:]:
        acc = pair(acc, v)
    return acc


def tuple_decode(code: int, arity: int) -> list[int]:
    """Recover the arity-tuple whose tuple_code is code."""
    if arity < 1:
        raise ValueError("arity must be at least 1")
    out = []
    for _ in range(arity - 1):
        code, last = unpair(code)
        out.append(last)
    out.append(code)
    out.reverse()
    return out


def encode_prefix(values: list[int]) -> int:
    """Code a non-empty finite sequence as tuple_code([len-1, v0, ..., vn])."""
    if not values:
        raise ValueError("encode_prefix needs a non-empty prefix")
    return tuple_code([len(values) - 1] + list(values))


def decode_prefix(code: int) -> list[int]:
    """Total inverse of encode_prefix.

    Peeling left components of a left-nested tuple code yields a strictly
    decreasing chain while positive, so there is always a least j >= 1 whose
    peeled value is <= j-1.  On codes produced by encode_prefix the chain
    hits the length header exactly (the header equals j-1 there); on other
    codes the same stopping rule still yields a well-defined sequence, which
    makes the decoder total without an error case.
    """
    left = code
    j = 0
    while True:
        left, _ = unpair(left)
        j += 1
        if left <= j - 1:
            break
    return tuple_decode(code, j + 1)[1:]


def is_prefix_code(code: int) -> bool:
    """True iff code is exactly encode_prefix of some sequence.

    The crossing point of the peel chain must land on the length header
    itself; codes that merely cross below it decode (totally) but are not in
    the image, so encode_prefix(decode_prefix(code)) != code for them.
    """
    left = code
    j = 0
    while True:
        left, _ = unpair(left)
        j += 1
        if left <= j - 1:
            return left == j - 1
