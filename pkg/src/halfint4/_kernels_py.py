"""Pure-Python integer kernels for truncated q-series.

Same contract as the compiled ``_kernels`` module, but never declines an
input: the schoolbook loop handles short or sparse operands and Kronecker
substitution (packing into one big integer) handles the rest.
"""

from __future__ import annotations

# below this many nonzero terms in the sparser operand the schoolbook loop wins
SPARSE_CUTOFF = 48


def convolve(a: list[int], b: list[int], n: int) -> list[int]:
    if n <= 0:
        return []
    a = a[:n]
    b = b[:n]
    nza = sum(1 for x in a if x)
    nzb = sum(1 for x in b if x)
    if min(nza, nzb) <= SPARSE_CUTOFF:
        if nzb < nza:
            a, b = b, a
        return schoolbook(a, b, n)
    return kronecker(a, b, n)


def schoolbook(a: list[int], b: list[int], n: int) -> list[int]:
    out = [0] * n
    lb = len(b)
    for i, ai in enumerate(a):
        if not ai or i >= n:
            continue
        top = min(lb, n - i)
        for j in range(top):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def _pack(coeffs: list[int], width: int) -> int:
    # nonnegative digits only, each < 256**width
    return int.from_bytes(b"".join(c.to_bytes(width, "little") for c in coeffs), "little")


def _pack_signed(coeffs: list[int], width: int) -> int:
    pos = [c if c > 0 else 0 for c in coeffs]
    neg = [-c if c < 0 else 0 for c in coeffs]
    return _pack(pos, width) - _pack(neg, width)


def kronecker(a: list[int], b: list[int], n: int) -> list[int]:
    """Truncated product via a single big-integer multiplication."""
    a = a[:n]
    b = b[:n]
    if not a or not b:
        return [0] * n
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    bound = ma * mb * min(len(a), len(b))
    if bound == 0:
        return [0] * n
    # signed digits must satisfy |d| < 2**(bits-1)
    width = (bound.bit_length() + 2 + 7) // 8
    bits = 8 * width
    prod = _pack_signed(a, width) * _pack_signed(b, width)
    half = 1 << (bits - 1)
    modulus = 1 << (bits * n)
    # shifting every digit by +half makes the low n digits nonnegative
    offset = _pack([half] * n, width)
    z = (prod + offset) % modulus
    raw = z.to_bytes(width * n, "little")
    return [
        int.from_bytes(raw[i * width:(i + 1) * width], "little") - half
        for i in range(n)
    ]


def sigma1_table(n: int) -> list[int]:
    if n <= 0:
        return []
    s = [0] * n
    for d in range(1, n):
        for m in range(d, n, d):
            s[m] += d
    return s
