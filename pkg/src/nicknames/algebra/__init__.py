"""Type-3 bilinear group over BN254.

Group elements use multiplicative notation throughout: ``a * b`` is the
group operation and ``a ** k`` exponentiation by a scalar. Scalars are
plain ints reduced modulo :data:`ORDER`, the common prime order of G1, G2
and GT.

The arithmetic kernels come from the compiled ``nicknames._bn254``
extension when it is importable and from :mod:`._pybn254` otherwise. Set
``NICKNAMES_BACKEND=python`` (or ``native``) before import to force one.
Both backends produce identical encodings.

Encodings:

* Scalar: 32 bytes big-endian, value < ORDER.
* G1: 32 bytes, big-endian x; top bit set when y is the larger root,
  second bit marks the identity.
* G2: 64 bytes, x.c1 then x.c0, same flags (y compared on c1 first).
* GT: 384 bytes, twelve Fq coefficients in tower order
  (c0.c0.c0, c0.c0.c1, c0.c1.c0, ..., c1.c2.c1).

Hashing: ``hash_to_g1`` is RFC 9380 hash_to_curve with SHA-256
expand_message_xmd and the SVDW map (Z = 1); ``hash_to_scalar`` is
expand_message_xmd to 48 bytes reduced modulo ORDER.
"""

from __future__ import annotations

import contextlib
import contextvars
import os
import secrets
from dataclasses import dataclass, fields
from typing import Iterable, Iterator

from . import _pybn254
from ._h2c import expand_message_xmd, hash_to_field, map_to_curve_svdw

__all__ = [
    "BACKEND",
    "CURVE_ID",
    "ORDER",
    "BilinearContext",
    "DecodeError",
    "G1Point",
    "G2Point",
    "GtElement",
    "OpCounters",
    "CONTEXT",
    "count_ops",
    "expand_message_xmd",
    "hash_to_g1",
    "hash_to_scalar",
    "pairing",
    "pairing_product",
    "random_scalar",
    "scalar_from_bytes",
    "scalar_to_bytes",
    "uncounted",
]


def _load_backend():
    choice = os.environ.get("NICKNAMES_BACKEND", "auto").lower()
    if choice not in ("auto", "native", "python"):
        raise ImportError(f"unknown NICKNAMES_BACKEND {choice!r}")
    if choice != "python":
        try:
            from .. import _bn254 as native
        except ImportError:
            if choice == "native":
                raise
        else:
            return "native", native
    return "python", _pybn254


BACKEND, _core = _load_backend()

CURVE_ID = "bn254"
ORDER = _pybn254.R
SCALAR_BYTES = 32
H_DST = b"NGS-H-v1"
FS_DST = b"NGS-FS-v1"


class DecodeError(ValueError):
    """Raised when bytes do not encode a valid element."""


# ---------------------------------------------------------------- op counting


@dataclass
class OpCounters:
    g1_exp: int = 0
    g2_exp: int = 0
    gt_exp: int = 0
    pairings: int = 0
    hash_to_g1: int = 0

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


_active: contextvars.ContextVar[tuple[OpCounters, ...]] = contextvars.ContextVar(
    "nicknames_op_counters", default=()
)


def _bump(name: str, n: int = 1) -> None:
    for c in _active.get():
        setattr(c, name, getattr(c, name) + n)


@contextlib.contextmanager
def count_ops() -> Iterator[OpCounters]:
    """Count group operations performed inside the ``with`` block.

    Scopes nest: an operation is recorded in every enclosing scope.
    """
    counters = OpCounters()
    token = _active.set(_active.get() + (counters,))
    try:
        yield counters
    finally:
        _active.reset(token)


@contextlib.contextmanager
def uncounted() -> Iterator[None]:
    """Suspend all counting scopes (used for defensive validation work)."""
    token = _active.set(())
    try:
        yield
    finally:
        _active.reset(token)


# ---------------------------------------------------------------- scalars


def scalar_to_bytes(k: int) -> bytes:
    return (k % ORDER).to_bytes(SCALAR_BYTES, "big")


def scalar_from_bytes(data: bytes) -> int:
    if len(data) != SCALAR_BYTES:
        raise DecodeError("scalar must be 32 bytes")
    k = int.from_bytes(data, "big")
    if k >= ORDER:
        raise DecodeError("non-canonical scalar")
    return k


def random_scalar(rng=None, nonzero: bool = False) -> int:
    """Uniform scalar; ``rng`` is any object with ``randrange`` (default: OS entropy)."""
    rng = rng or secrets.SystemRandom()
    return rng.randrange(1 if nonzero else 0, ORDER)


# ---------------------------------------------------------------- elements


class _Element:
    __slots__ = ("_e",)
    _impl = None
    _counter = ""
    _size = 0
    _label = ""

    def __init__(self, raw):
        self._e = raw

    @classmethod
    def from_bytes(cls, data: bytes):
        data = bytes(data)
        if len(data) != cls._size:
            raise DecodeError(f"{cls._label} encoding must be {cls._size} bytes")
        try:
            return cls(cls._impl.from_bytes(data))
        except ValueError as exc:
            raise DecodeError(f"invalid {cls._label} encoding: {exc}") from None

    @classmethod
    def from_hex(cls, text: str):
        try:
            data = bytes.fromhex(text)
        except ValueError:
            raise DecodeError(f"invalid hex for {cls._label}") from None
        return cls.from_bytes(data)

    def __bytes__(self) -> bytes:
        return bytes(self._e.to_bytes())

    def hex(self) -> str:
        return bytes(self).hex()

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self._e.equals(other._e)

    def __hash__(self) -> int:
        return hash((self._label, bytes(self)))

    # elements are immutable: copies share the handle, pickles go through the encoding
    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    def __reduce__(self):
        return (type(self).from_bytes, (bytes(self),))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.hex()[:16]}...)"


class _CurvePoint(_Element):
    __slots__ = ()

    @classmethod
    def generator(cls):
        return cls(cls._impl.generator())

    @classmethod
    def identity(cls):
        return cls(cls._impl.identity())

    def is_identity(self) -> bool:
        return self._e.is_identity()

    def __mul__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return type(self)(self._e.add(other._e))

    def inverse(self):
        return type(self)(self._e.neg())

    def __truediv__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return type(self)(self._e.add(other._e.neg()))

    def __pow__(self, k: int):
        _bump(self._counter)
        return type(self)(self._e.mul(scalar_to_bytes(k)))

    def pow2(self, x: int, other, y: int):
        """``self**x * other**y`` as one double exponentiation (counted as two)."""
        _bump(self._counter, 2)
        return type(self)(self._e.mul2(scalar_to_bytes(x), other._e, scalar_to_bytes(y)))


class G1Point(_CurvePoint):
    __slots__ = ()
    _impl = _core.G1
    _counter = "g1_exp"
    _size = 32
    _label = "G1"

    @classmethod
    def from_affine(cls, x: int, y: int) -> "G1Point":
        return cls(cls._impl.from_affine(x.to_bytes(32, "big"), y.to_bytes(32, "big")))


class G2Point(_CurvePoint):
    __slots__ = ()
    _impl = _core.G2
    _counter = "g2_exp"
    _size = 64
    _label = "G2"


class GtElement(_Element):
    __slots__ = ()
    _impl = _core.Gt
    _counter = "gt_exp"
    _size = 384
    _label = "GT"

    @classmethod
    def identity(cls) -> "GtElement":
        return cls(cls._impl.one())

    def is_identity(self) -> bool:
        return self._e.is_one()

    def __mul__(self, other):
        if type(other) is not GtElement:
            return NotImplemented
        return GtElement(self._e.mul(other._e))

    def inverse(self) -> "GtElement":
        return GtElement(self._e.inv())

    def __truediv__(self, other):
        if type(other) is not GtElement:
            return NotImplemented
        return GtElement(self._e.mul(other._e.inv()))

    def __pow__(self, k: int) -> "GtElement":
        _bump("gt_exp")
        return GtElement(self._e.pow(scalar_to_bytes(k)))


# ---------------------------------------------------------------- pairing & hashing


def pairing(a: G1Point, b: G2Point) -> GtElement:
    _bump("pairings")
    return GtElement(_core.pairing(a._e, b._e))


def pairing_product(pairs: Iterable[tuple[G1Point, G2Point]]) -> GtElement:
    """Product of pairings with a shared final exponentiation; counts one pairing per term."""
    pairs = list(pairs)
    _bump("pairings", len(pairs))
    return GtElement(_core.multi_pairing([a._e for a, _ in pairs], [b._e for _, b in pairs]))


def hash_to_g1(data: bytes, domain_tag: bytes = H_DST) -> G1Point:
    _bump("hash_to_g1")
    u0, u1 = hash_to_field(bytes(data), domain_tag, 2)
    q0 = G1Point.from_affine(*map_to_curve_svdw(u0))
    q1 = G1Point.from_affine(*map_to_curve_svdw(u1))
    # G1 has cofactor 1, so no clearing step
    out = q0 * q1
    if out.is_identity():
        raise ArithmeticError("hash_to_g1 produced the identity")
    return out


def hash_to_scalar(transcript: bytes, domain_tag: bytes = FS_DST) -> int:
    return int.from_bytes(expand_message_xmd(bytes(transcript), domain_tag, 48), "big") % ORDER


@dataclass(frozen=True)
class BilinearContext:
    g: G1Point
    g_hat: G2Point
    order: int
    curve_id: str


CONTEXT = BilinearContext(G1Point.generator(), G2Point.generator(), ORDER, CURVE_ID)
