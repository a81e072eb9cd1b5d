"""Digital signatures binding a user's long-term identity to a registration value.

The default scheme is Schnorr over G1: ``upk = g**usk`` and a signature is a
Fiat-Shamir proof of knowledge of ``usk`` bound to the message under the
domain tag ``NGS-DS-v1``. Schemes are looked up by ``scheme_id`` through
:data:`SCHEMES`, so an alternate can be registered without touching callers.

Wire format: ``scheme_id`` byte followed by the length-prefixed challenge
and response scalars.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import CONTEXT, DecodeError, G1Point, random_scalar, scalar_from_bytes, scalar_to_bytes
from .sigma import LinearRelation, SpkProof, fs_prove_scalars, fs_verify_scalars, lp, read_lp

DS_TAG = b"NGS-DS-v1"
SCHNORR_G1 = 1


@dataclass(frozen=True)
class DsKeyPair:
    usk: int
    upk: G1Point

    def __post_init__(self):
        if self.usk == 0:
            raise ValueError("usk must be nonzero")


@dataclass(frozen=True)
class DsSignature:
    scheme_id: int
    challenge: int
    response: int

    def to_bytes(self) -> bytes:
        return bytes([self.scheme_id]) + lp(scalar_to_bytes(self.challenge)) + lp(scalar_to_bytes(self.response))

    @classmethod
    def from_bytes(cls, data: bytes) -> "DsSignature":
        data = bytes(data)
        if not data:
            raise DecodeError("empty signature")
        c, pos = read_lp(data, 1)
        s, pos = read_lp(data, pos)
        if pos != len(data):
            raise DecodeError("trailing bytes after signature")
        return cls(data[0], scalar_from_bytes(c), scalar_from_bytes(s))

    def hex(self) -> str:
        return self.to_bytes().hex()

    @classmethod
    def from_hex(cls, text: str) -> "DsSignature":
        try:
            return cls.from_bytes(bytes.fromhex(text))
        except ValueError as exc:
            raise DecodeError(str(exc)) from None


class SchnorrG1:
    scheme_id = SCHNORR_G1

    @staticmethod
    def _statement(upk):
        return [LinearRelation(upk, (CONTEXT.g,), (0,))]

    def keygen(self, rng=None) -> DsKeyPair:
        usk = random_scalar(rng, nonzero=True)
        return DsKeyPair(usk, CONTEXT.g**usk)

    def sign(self, usk: int, message: bytes, rng=None) -> DsSignature:
        proof = fs_prove_scalars(self._statement(CONTEXT.g**usk), [usk], bytes(message), DS_TAG, rng)
        return DsSignature(self.scheme_id, proof.challenge, proof.responses[0])

    def verify(self, upk: G1Point, message: bytes, sig: DsSignature) -> bool:
        if not isinstance(upk, G1Point) or upk.is_identity():
            return False
        proof = SpkProof(sig.challenge, (sig.response,), DS_TAG)
        return fs_verify_scalars(self._statement(upk), proof, bytes(message))


SCHEMES = {SCHNORR_G1: SchnorrG1()}
DEFAULT_SCHEME = SCHNORR_G1


def register_scheme(scheme) -> None:
    if scheme.scheme_id in SCHEMES:
        raise ValueError(f"scheme id {scheme.scheme_id} already registered")
    SCHEMES[scheme.scheme_id] = scheme


def ds_keygen(user_id=None, rng=None, scheme_id: int = DEFAULT_SCHEME) -> DsKeyPair:
    """Fresh key pair; ``user_id`` only labels the caller's table slot."""
    return SCHEMES[scheme_id].keygen(rng)


def ds_sign(usk: int, message: bytes, rng=None, scheme_id: int = DEFAULT_SCHEME) -> DsSignature:
    return SCHEMES[scheme_id].sign(usk, message, rng)


def ds_verify(upk: G1Point, message: bytes, sig: DsSignature) -> bool:
    scheme = SCHEMES.get(getattr(sig, "scheme_id", None))
    if scheme is None:
        return False
    return scheme.verify(upk, message, sig)
