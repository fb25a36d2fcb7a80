"""Arithmetic in GF(2^8) with the irreducible polynomial x^8+x^4+x^3+x^2+1.

Multiplication uses log/antilog tables generated from the primitive element
x (0x02). Addition is XOR. A small Gauss-Jordan inverter for matrices over
the field is included for erasure decoding.
"""

from __future__ import annotations

from .errors import ParamError

POLY = 0x11D
GENERATOR = 0x02

# EXP holds g^i for i in 0..509 (doubled so gf_mul can skip one modulo);
# LOG holds the discrete log of 1..255.
EXP = [0] * 510
LOG = [0] * 256

_x = 1
for _i in range(255):
    EXP[_i] = _x
    LOG[_x] = _i
    _x <<= 1
    if _x & 0x100:
        _x ^= POLY
for _i in range(255, 510):
    EXP[_i] = EXP[_i - 255]
del _x, _i


def gf_add(a: int, b: int) -> int:
    return a ^ b


def gf_mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return EXP[LOG[a] + LOG[b]]


def gf_inv(a: int) -> int:
    if a == 0:
        raise ParamError("0 has no multiplicative inverse in GF(2^8)")
    return EXP[255 - LOG[a]]


def gf_div(a: int, b: int) -> int:
    return gf_mul(a, gf_inv(b))


def gf_mat_inv(matrix: list[list[int]]) -> list[list[int]]:
    """Invert a square matrix over GF(2^8) by Gauss-Jordan elimination."""
    n = len(matrix)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ParamError("matrix is singular over GF(2^8)")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        scale = gf_inv(aug[col][col])
        aug[col] = [gf_mul(v, scale) for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v ^ gf_mul(factor, p) for v, p in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]
