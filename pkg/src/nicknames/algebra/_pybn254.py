"""Pure-Python BN254 arithmetic.

Drop-in replacement for the native ``nicknames._bn254`` module: same class
names, same methods, same byte encodings. The optimal ate pairing uses the
same tower (Fq2 = Fq[u]/(u^2+1), Fq6 = Fq2[v]/(v^3 - (9+u)), Fq12 =
Fq6[w]/(w^2 - v)) and the same final-exponentiation addition chain as
arkworks, so target-group values agree bit for bit between backends.

Fq12 elements are flat 12-tuples of ints holding the Fq2 coefficients of
w^0..w^5 (with w^6 = 9+u).
"""

from __future__ import annotations

CURVE_ID = "bn254"

P = 21888242871839275222246405745257275088696311157297823662689037894645226208583
R = 21888242871839275222246405745257275088548364400416034343698204186575808495617
BN_X = 4965661367192848881
ATE_LOOP_COUNT = 6 * BN_X + 2

FLAG_LARGEST = 0x80
FLAG_INFINITY = 0x40
FLAG_MASK = 0xC0

# ---------------------------------------------------------------- Fq2

F2_ZERO = (0, 0)
F2_ONE = (1, 0)
XI = (9, 1)


def f2_add(a, b):
    return ((a[0] + b[0]) % P, (a[1] + b[1]) % P)


def f2_sub(a, b):
    return ((a[0] - b[0]) % P, (a[1] - b[1]) % P)


def f2_neg(a):
    return (-a[0] % P, -a[1] % P)


def f2_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    return ((a0 * b0 - a1 * b1) % P, (a0 * b1 + a1 * b0) % P)


def f2_sqr(a):
    a0, a1 = a
    return ((a0 + a1) * (a0 - a1) % P, 2 * a0 * a1 % P)


def f2_scale(a, k):
    return (a[0] * k % P, a[1] * k % P)


def f2_conj(a):
    return (a[0], -a[1] % P)


def f2_inv(a):
    a0, a1 = a
    t = pow(a0 * a0 + a1 * a1, -1, P)
    return (a0 * t % P, -a1 * t % P)


def f2_mul_xi(a):
    a0, a1 = a
    return ((9 * a0 - a1) % P, (a0 + 9 * a1) % P)


def f2_pow(a, e):
    out = F2_ONE
    while e:
        if e & 1:
            out = f2_mul(out, a)
        a = f2_sqr(a)
        e >>= 1
    return out


def f2_sqrt(a):
    """Square root for p = 3 mod 4, or None if ``a`` is a non-residue."""
    a1 = f2_pow(a, (P - 3) // 4)
    x0 = f2_mul(a1, a)
    alpha = f2_mul(a1, x0)
    if alpha == (P - 1, 0):
        x = f2_mul((0, 1), x0)
    else:
        b = f2_pow(f2_add(F2_ONE, alpha), (P - 1) // 2)
        x = f2_mul(b, x0)
    return x if f2_sqr(x) == a else None


def fq_sqrt(a):
    y = pow(a, (P + 1) // 4, P)
    return y if y * y % P == a % P else None


def fq_is_largest(y):
    return y > P - y


def f2_is_largest(y):
    n1 = -y[1] % P
    if y[1] != n1:
        return y[1] > n1
    return y[0] > -y[0] % P


# ---------------------------------------------------------------- Fq6 (only for inversion)


def _f6_mul(a, b):
    a0, a1, a2 = a
    b0, b1, b2 = b
    t0, t1, t2 = f2_mul(a0, b0), f2_mul(a1, b1), f2_mul(a2, b2)
    c0 = f2_add(t0, f2_mul_xi(f2_sub(f2_mul(f2_add(a1, a2), f2_add(b1, b2)), f2_add(t1, t2))))
    c1 = f2_add(f2_sub(f2_mul(f2_add(a0, a1), f2_add(b0, b1)), f2_add(t0, t1)), f2_mul_xi(t2))
    c2 = f2_add(f2_sub(f2_mul(f2_add(a0, a2), f2_add(b0, b2)), f2_add(t0, t2)), t1)
    return (c0, c1, c2)


def _f6_inv(a):
    b0, b1, b2 = a
    c0 = f2_sub(f2_sqr(b0), f2_mul_xi(f2_mul(b1, b2)))
    c1 = f2_sub(f2_mul_xi(f2_sqr(b2)), f2_mul(b0, b1))
    c2 = f2_sub(f2_sqr(b1), f2_mul(b0, b2))
    t = f2_add(f2_mul(b0, c0), f2_mul_xi(f2_add(f2_mul(b2, c1), f2_mul(b1, c2))))
    ti = f2_inv(t)
    return (f2_mul(c0, ti), f2_mul(c1, ti), f2_mul(c2, ti))


# ---------------------------------------------------------------- Fq12

F12_ONE = (1,) + (0,) * 11
# position of w^i coefficients in the serialized tower order
_TOWER_ORDER = (0, 2, 4, 1, 3, 5)


def f12_coeff(a, i):
    return (a[2 * i], a[2 * i + 1])


def f12_from_coeffs(cs):
    out = []
    for c in cs:
        out += c
    return tuple(out)


def f12_mul(a, b):
    re = [0] * 11
    im = [0] * 11
    for i in range(6):
        ar = a[2 * i]
        ai = a[2 * i + 1]
        if not (ar or ai):
            continue
        for j in range(6):
            br = b[2 * j]
            bi = b[2 * j + 1]
            re[i + j] += ar * br - ai * bi
            im[i + j] += ar * bi + ai * br
    out = [0] * 12
    for k in range(6):
        r = re[k]
        s = im[k]
        if k < 5:
            hr = re[k + 6]
            hi = im[k + 6]
            r += 9 * hr - hi
            s += hr + 9 * hi
        out[2 * k] = r % P
        out[2 * k + 1] = s % P
    return tuple(out)


def f12_sqr(a):
    return f12_mul(a, a)


def f12_conj(a):
    out = list(a)
    for i in (1, 3, 5):
        out[2 * i] = -a[2 * i] % P
        out[2 * i + 1] = -a[2 * i + 1] % P
    return tuple(out)


def f12_inv(a):
    c = [f12_coeff(a, i) for i in range(6)]
    even = (c[0], c[2], c[4])
    odd = (c[1], c[3], c[5])
    e2 = _f6_mul(even, even)
    o2 = _f6_mul(odd, odd)
    o2v = (f2_mul_xi(o2[2]), o2[0], o2[1])
    t = _f6_inv(tuple(f2_sub(x, y) for x, y in zip(e2, o2v)))
    ne = _f6_mul(even, t)
    no = _f6_mul(odd, t)
    no = tuple(f2_neg(x) for x in no)
    return f12_from_coeffs((ne[0], no[0], ne[1], no[1], ne[2], no[2]))


def f12_pow(a, e):
    out = F12_ONE
    for bit in bin(e)[2:]:
        out = f12_sqr(out)
        if bit == "1":
            out = f12_mul(out, a)
    return out


def _frobenius_coeffs():
    table = {}
    for k in (1, 2, 3):
        e = (P**k - 1) // 6
        base = f2_pow(XI, e)
        table[k] = [f2_pow(base, i) for i in range(6)]
    return table


_FROB = _frobenius_coeffs()


def f12_frob(a, k):
    gam = _FROB[k]
    out = []
    for i in range(6):
        c = f12_coeff(a, i)
        if k % 2:
            c = f2_conj(c)
        out += f2_mul(c, gam[i])
    return tuple(out)


# ---------------------------------------------------------------- curves (Jacobian)

G1_B = 3
G2_B = f2_mul((3, 0), f2_inv(XI))


def _g1_dbl(pt):
    X, Y, Z = pt
    if not Y:
        return None
    A = X * X % P
    B = Y * Y % P
    C = B * B % P
    D = 2 * ((X + B) * (X + B) - A - C) % P
    E = 3 * A % P
    X3 = (E * E - 2 * D) % P
    Y3 = (E * (D - X3) - 8 * C) % P
    Z3 = 2 * Y * Z % P
    return (X3, Y3, Z3)


def _g1_add(p1, p2):
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    X1, Y1, Z1 = p1
    X2, Y2, Z2 = p2
    Z1Z1 = Z1 * Z1 % P
    Z2Z2 = Z2 * Z2 % P
    U1 = X1 * Z2Z2 % P
    U2 = X2 * Z1Z1 % P
    S1 = Y1 * Z2 * Z2Z2 % P
    S2 = Y2 * Z1 * Z1Z1 % P
    H = (U2 - U1) % P
    rr = 2 * (S2 - S1) % P
    if not H:
        return _g1_dbl(p1) if not rr else None
    I = 4 * H * H % P
    J = H * I % P
    V = U1 * I % P
    X3 = (rr * rr - J - 2 * V) % P
    Y3 = (rr * (V - X3) - 2 * S1 * J) % P
    Z3 = ((Z1 + Z2) ** 2 - Z1Z1 - Z2Z2) * H % P
    return (X3, Y3, Z3)


def _g1_mul(pt, k):
    out = None
    for bit in bin(k)[2:]:
        if out is not None:
            out = _g1_dbl(out)
        if bit == "1":
            out = _g1_add(out, pt)
    return out


def _g1_affine(pt):
    X, Y, Z = pt
    zi = pow(Z, -1, P)
    zi2 = zi * zi % P
    return (X * zi2 % P, Y * zi2 * zi % P)


def _g2_dbl(pt):
    X, Y, Z = pt
    if Y == F2_ZERO:
        return None
    A = f2_sqr(X)
    B = f2_sqr(Y)
    C = f2_sqr(B)
    D = f2_scale(f2_sub(f2_sqr(f2_add(X, B)), f2_add(A, C)), 2)
    E = f2_scale(A, 3)
    X3 = f2_sub(f2_sqr(E), f2_scale(D, 2))
    Y3 = f2_sub(f2_mul(E, f2_sub(D, X3)), f2_scale(C, 8))
    Z3 = f2_scale(f2_mul(Y, Z), 2)
    return (X3, Y3, Z3)


def _g2_add(p1, p2):
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    X1, Y1, Z1 = p1
    X2, Y2, Z2 = p2
    Z1Z1 = f2_sqr(Z1)
    Z2Z2 = f2_sqr(Z2)
    U1 = f2_mul(X1, Z2Z2)
    U2 = f2_mul(X2, Z1Z1)
    S1 = f2_mul(Y1, f2_mul(Z2, Z2Z2))
    S2 = f2_mul(Y2, f2_mul(Z1, Z1Z1))
    H = f2_sub(U2, U1)
    rr = f2_scale(f2_sub(S2, S1), 2)
    if H == F2_ZERO:
        return _g2_dbl(p1) if rr == F2_ZERO else None
    I = f2_scale(f2_sqr(H), 4)
    J = f2_mul(H, I)
    V = f2_mul(U1, I)
    X3 = f2_sub(f2_sub(f2_sqr(rr), J), f2_scale(V, 2))
    Y3 = f2_sub(f2_mul(rr, f2_sub(V, X3)), f2_scale(f2_mul(S1, J), 2))
    Z3 = f2_mul(f2_sub(f2_sqr(f2_add(Z1, Z2)), f2_add(Z1Z1, Z2Z2)), H)
    return (X3, Y3, Z3)


def _g2_mul(pt, k):
    out = None
    for bit in bin(k)[2:]:
        if out is not None:
            out = _g2_dbl(out)
        if bit == "1":
            out = _g2_add(out, pt)
    return out


def _g2_affine(pt):
    X, Y, Z = pt
    zi = f2_inv(Z)
    zi2 = f2_sqr(zi)
    return (f2_mul(X, zi2), f2_mul(Y, f2_mul(zi2, zi)))


def _scalar(k: bytes) -> int:
    if len(k) != 32:
        raise ValueError("scalar must be 32 bytes")
    return int.from_bytes(k, "big") % R


def _fq(b: bytes) -> int:
    x = int.from_bytes(b, "big")
    if x >= P:
        raise ValueError("field element out of range")
    return x


def _split_flags(data: bytes, n: int):
    if len(data) != n:
        raise ValueError("bad encoding length")
    flags = data[0] & FLAG_MASK
    body = bytes([data[0] & ~FLAG_MASK & 0xFF]) + data[1:]
    if flags == FLAG_LARGEST | FLAG_INFINITY:
        raise ValueError("invalid flag combination")
    if flags == FLAG_INFINITY and any(body):
        raise ValueError("non-canonical point at infinity")
    return flags, body


class G1:
    __slots__ = ("p",)

    def __init__(self, p):
        self.p = p

    @staticmethod
    def generator():
        return G1((1, 2, 1))

    @staticmethod
    def identity():
        return G1(None)

    @staticmethod
    def from_affine(x: bytes, y: bytes):
        xi, yi = _fq(x), _fq(y)
        if (yi * yi - xi * xi * xi - G1_B) % P:
            raise ValueError("point not on curve")
        return G1((xi, yi, 1))

    @staticmethod
    def from_bytes(data: bytes):
        flags, body = _split_flags(data, 32)
        if flags == FLAG_INFINITY:
            return G1(None)
        x = _fq(body)
        y = fq_sqrt((x * x * x + G1_B) % P)
        if y is None:
            raise ValueError("x is not on the curve")
        if fq_is_largest(y) != (flags == FLAG_LARGEST):
            y = -y % P
        return G1((x, y, 1))

    def affine(self):
        return _g1_affine(self.p)

    def to_bytes(self) -> bytes:
        if self.p is None:
            return bytes([FLAG_INFINITY]) + bytes(31)
        x, y = _g1_affine(self.p)
        out = bytearray(x.to_bytes(32, "big"))
        if fq_is_largest(y):
            out[0] |= FLAG_LARGEST
        return bytes(out)

    def add(self, other):
        return G1(_g1_add(self.p, other.p))

    def neg(self):
        if self.p is None:
            return self
        X, Y, Z = self.p
        return G1((X, -Y % P, Z))

    def mul(self, k: bytes):
        if self.p is None:
            return self
        return G1(_g1_mul(self.p, _scalar(k)))

    def mul2(self, x: bytes, other, y: bytes):
        return self.mul(x).add(other.mul(y))

    def is_identity(self) -> bool:
        return self.p is None

    def equals(self, other) -> bool:
        if self.p is None or other.p is None:
            return self.p is None and other.p is None
        X1, Y1, Z1 = self.p
        X2, Y2, Z2 = other.p
        z1s, z2s = Z1 * Z1 % P, Z2 * Z2 % P
        return (X1 * z2s - X2 * z1s) % P == 0 and (Y1 * z2s * Z2 - Y2 * z1s * Z1) % P == 0


class G2:
    __slots__ = ("p",)

    def __init__(self, p):
        self.p = p

    @staticmethod
    def generator():
        x = (
            10857046999023057135944570762232829481370756359578518086990519993285655852781,
            11559732032986387107991004021392285783925812861821192530917403151452391805634,
        )
        y = (
            8495653923123431417604973247489272438418190587263600148770280649306958101930,
            4082367875863433681332203403145435568316851327593401208105741076214120093531,
        )
        return G2((x, y, F2_ONE))

    @staticmethod
    def identity():
        return G2(None)

    @staticmethod
    def from_bytes(data: bytes):
        flags, body = _split_flags(data, 64)
        if flags == FLAG_INFINITY:
            return G2(None)
        x = (_fq(body[32:]), _fq(body[:32]))
        y = f2_sqrt(f2_add(f2_mul(f2_sqr(x), x), G2_B))
        if y is None:
            raise ValueError("x is not on the curve")
        if f2_is_largest(y) != (flags == FLAG_LARGEST):
            y = f2_neg(y)
        pt = (x, y, F2_ONE)
        if _g2_mul(pt, R) is not None:
            raise ValueError("point not in the prime-order subgroup")
        return G2(pt)

    def affine(self):
        return _g2_affine(self.p)

    def to_bytes(self) -> bytes:
        if self.p is None:
            return bytes([FLAG_INFINITY]) + bytes(63)
        x, y = _g2_affine(self.p)
        out = bytearray(x[1].to_bytes(32, "big") + x[0].to_bytes(32, "big"))
        if f2_is_largest(y):
            out[0] |= FLAG_LARGEST
        return bytes(out)

    def add(self, other):
        return G2(_g2_add(self.p, other.p))

    def neg(self):
        if self.p is None:
            return self
        X, Y, Z = self.p
        return G2((X, f2_neg(Y), Z))

    def mul(self, k: bytes):
        if self.p is None:
            return self
        return G2(_g2_mul(self.p, _scalar(k)))

    def mul2(self, x: bytes, other, y: bytes):
        return self.mul(x).add(other.mul(y))

    def is_identity(self) -> bool:
        return self.p is None

    def equals(self, other) -> bool:
        if self.p is None or other.p is None:
            return self.p is None and other.p is None
        X1, Y1, Z1 = self.p
        X2, Y2, Z2 = other.p
        z1s, z2s = f2_sqr(Z1), f2_sqr(Z2)
        return f2_mul(X1, z2s) == f2_mul(X2, z1s) and f2_mul(Y1, f2_mul(z2s, Z2)) == f2_mul(
            Y2, f2_mul(z1s, Z1)
        )


class Gt:
    __slots__ = ("f",)

    def __init__(self, f):
        self.f = f

    @staticmethod
    def one():
        return Gt(F12_ONE)

    @staticmethod
    def from_bytes(data: bytes):
        if len(data) != 384:
            raise ValueError("bad encoding length")
        vals = [_fq(data[32 * i : 32 * i + 32]) for i in range(12)]
        coeffs = [None] * 6
        for slot, wi in enumerate(_TOWER_ORDER):
            coeffs[wi] = (vals[2 * slot], vals[2 * slot + 1])
        f = f12_from_coeffs(coeffs)
        if not any(f) or f12_pow(f, R) != F12_ONE:
            raise ValueError("element not in the target group")
        return Gt(f)

    def to_bytes(self) -> bytes:
        out = bytearray()
        for wi in _TOWER_ORDER:
            c0, c1 = f12_coeff(self.f, wi)
            out += c0.to_bytes(32, "big") + c1.to_bytes(32, "big")
        return bytes(out)

    def mul(self, other):
        return Gt(f12_mul(self.f, other.f))

    def inv(self):
        return Gt(f12_conj(self.f))

    def pow(self, k: bytes):
        return Gt(f12_pow(self.f, _scalar(k)))

    def is_one(self) -> bool:
        return self.f == F12_ONE

    def equals(self, other) -> bool:
        return self.f == other.f


# ---------------------------------------------------------------- pairing

_PSI_X = f2_pow(XI, (P - 1) // 3)
_PSI_Y = f2_pow(XI, (P - 1) // 2)


def _twist_frobenius(q):
    x, y = q
    return (f2_mul(f2_conj(x), _PSI_X), f2_mul(f2_conj(y), _PSI_Y))


def _line(slope, t, xp, yp):
    # untwisted line through T evaluated at P: yP - slope*xP*w + (slope*xT - yT)*w^3
    l1 = f2_neg(f2_scale(slope, xp))
    l3 = f2_sub(f2_mul(slope, t[0]), t[1])
    return (yp, 0) + l1 + (0, 0) + l3 + (0, 0) + (0, 0)


def _double_step(t, xp, yp):
    x, y = t
    slope = f2_mul(f2_scale(f2_sqr(x), 3), f2_inv(f2_scale(y, 2)))
    x3 = f2_sub(f2_sqr(slope), f2_scale(x, 2))
    y3 = f2_sub(f2_mul(slope, f2_sub(x, x3)), y)
    return _line(slope, t, xp, yp), (x3, y3)


def _add_step(t, q, xp, yp):
    if t[0] == q[0]:
        if t[1] == q[1]:
            return _double_step(t, xp, yp)
        # vertical line: lies in Fq6 and vanishes under the final exponentiation
        return None, None
    slope = f2_mul(f2_sub(q[1], t[1]), f2_inv(f2_sub(q[0], t[0])))
    x3 = f2_sub(f2_sub(f2_sqr(slope), t[0]), q[0])
    y3 = f2_sub(f2_mul(slope, f2_sub(t[0], x3)), t[1])
    return _line(slope, t, xp, yp), (x3, y3)


def miller_loop(pairs):
    """Multi Miller loop over ``[(P_affine, Q_affine), ...]`` of the optimal ate pairing."""
    f = F12_ONE
    ts = [q for _, q in pairs]
    for bit in bin(ATE_LOOP_COUNT)[3:]:
        f = f12_sqr(f)
        for k, ((xp, yp), q) in enumerate(pairs):
            line, ts[k] = _double_step(ts[k], xp, yp)
            f = f12_mul(line, f)
        if bit == "1":
            for k, ((xp, yp), q) in enumerate(pairs):
                line, ts[k] = _add_step(ts[k], q, xp, yp)
                f = f12_mul(line, f)
    for k, ((xp, yp), q) in enumerate(pairs):
        q1 = _twist_frobenius(q)
        x2, y2 = _twist_frobenius(q1)
        q2 = (x2, f2_neg(y2))
        line, ts[k] = _add_step(ts[k], q1, xp, yp)
        f = f12_mul(line, f)
        line, _ = _add_step(ts[k], q2, xp, yp)
        if line is not None:
            f = f12_mul(line, f)
    return f


def _exp_by_neg_x(f):
    return f12_conj(f12_pow(f, BN_X))


def final_exponentiation(f):
    r = f12_mul(f12_conj(f), f12_inv(f))
    r = f12_mul(f12_frob(r, 2), r)
    y0 = _exp_by_neg_x(r)
    y1 = f12_sqr(y0)
    y2 = f12_sqr(y1)
    y3 = f12_mul(y2, y1)
    y4 = _exp_by_neg_x(y3)
    y5 = f12_sqr(y4)
    y6 = _exp_by_neg_x(y5)
    y3 = f12_conj(y3)
    y6 = f12_conj(y6)
    y7 = f12_mul(y6, y4)
    y8 = f12_mul(y7, y3)
    y9 = f12_mul(y8, y1)
    y10 = f12_mul(y8, y4)
    y11 = f12_mul(y10, r)
    y13 = f12_mul(f12_frob(y9, 1), y11)
    y14 = f12_mul(f12_frob(y8, 2), y13)
    y15 = f12_frob(f12_mul(f12_conj(r), y9), 3)
    return f12_mul(y15, y14)


def multi_pairing(a, b):
    if len(a) != len(b):
        raise ValueError("length mismatch")
    pairs = [(x.affine(), y.affine()) for x, y in zip(a, b) if x.p is not None and y.p is not None]
    if not pairs:
        return Gt.one()
    return Gt(final_exponentiation(miller_loop(pairs)))


def pairing(a, b):
    return multi_pairing([a], [b])
