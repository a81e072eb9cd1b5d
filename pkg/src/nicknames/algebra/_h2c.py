"""RFC 9380 hashing for BN254 G1 (suite shape BN254G1_XMD:SHA-256_SVDW_RO_)."""

from __future__ import annotations

import hashlib

from ._pybn254 import G1_B, P, fq_sqrt

_B_IN_BYTES = 32
_S_IN_BYTES = 64
# ceil((ceil(log2(p)) + 128) / 8)
FIELD_ELEMENT_BYTES = 48


def expand_message_xmd(msg: bytes, dst: bytes, length: int) -> bytes:
    if len(dst) > 255:
        raise ValueError("domain separation tag longer than 255 bytes")
    ell = -(-length // _B_IN_BYTES)
    if ell > 255 or length > 65535:
        raise ValueError("requested output too long")
    dst_prime = dst + bytes([len(dst)])
    msg_prime = bytes(_S_IN_BYTES) + msg + length.to_bytes(2, "big") + b"\x00" + dst_prime
    b0 = hashlib.sha256(msg_prime).digest()
    bi = hashlib.sha256(b0 + b"\x01" + dst_prime).digest()
    out = [bi]
    for i in range(2, ell + 1):
        mixed = bytes(x ^ y for x, y in zip(b0, bi))
        bi = hashlib.sha256(mixed + bytes([i]) + dst_prime).digest()
        out.append(bi)
    return b"".join(out)[:length]


def hash_to_field(msg: bytes, dst: bytes, count: int, modulus: int = P) -> list[int]:
    n = FIELD_ELEMENT_BYTES
    uniform = expand_message_xmd(msg, dst, count * n)
    return [int.from_bytes(uniform[i * n : (i + 1) * n], "big") % modulus for i in range(count)]


def _g(x: int) -> int:
    return (x * x * x + G1_B) % P


def _is_square(x: int) -> bool:
    return x == 0 or pow(x, (P - 1) // 2, P) == 1


def _sgn0(x: int) -> int:
    return x & 1


def find_z_svdw() -> int:
    """Smallest-magnitude Z meeting the SVDW criteria (A = 0)."""
    ctr = 1
    while True:
        for z in (ctr, -ctr % P):
            gz = _g(z)
            if gz == 0:
                continue
            h = -(3 * z * z) * pow(4 * gz, -1, P) % P
            if h == 0 or not _is_square(h):
                continue
            if _is_square(gz) or _is_square(_g(-z * pow(2, -1, P) % P)):
                return z
        ctr += 1


Z = find_z_svdw()
_C1 = _g(Z)
_C2 = -Z * pow(2, -1, P) % P
_C3 = fq_sqrt(-_C1 * (3 * Z * Z) % P)
if _sgn0(_C3):
    _C3 = -_C3 % P
_C4 = -4 * _C1 * pow(3 * Z * Z, -1, P) % P


def map_to_curve_svdw(u: int) -> tuple[int, int]:
    tv1 = u * u % P * _C1 % P
    tv2 = (1 + tv1) % P
    tv1 = (1 - tv1) % P
    tv3 = tv1 * tv2 % P
    tv3 = pow(tv3, -1, P) if tv3 else 0
    tv4 = u * tv1 % P * tv3 % P * _C3 % P
    x1 = (_C2 - tv4) % P
    gx1 = _g(x1)
    e1 = _is_square(gx1)
    x2 = (_C2 + tv4) % P
    gx2 = _g(x2)
    e2 = _is_square(gx2) and not e1
    x3 = tv2 * tv2 % P * tv3 % P
    x3 = x3 * x3 % P * _C4 % P
    x3 = (x3 + Z) % P
    x = x3
    if e1:
        x = x1
    if e2:
        x = x2
    y = fq_sqrt(_g(x))
    if _sgn0(u) != _sgn0(y):
        y = -y % P
    return x, y
