"""Sigma protocols for linear relations and their Fiat-Shamir transform.

A statement is a list of :class:`LinearRelation`, each asserting
``target == prod(bases[j] ** witness[witness_indices[j]])`` in one group.
The prover commits with fresh nonces, responds with ``nonce - challenge *
witness`` and the verifier checks ``target**challenge * prod(bases**response)``
against the commitment.

Fiat-Shamir transcripts are hashed as::

    lp(tag) || lp(statement) || lp(commitments) || lp(message)

where ``lp`` prefixes a 4-byte big-endian length. The statement block is
the concatenation, per relation, of ``lp(group) lp(target) lp(n)`` followed
by ``lp(base) lp(index)`` per base; the commitment block is ``lp(c)`` per
commitment. Points use their canonical compressed encodings.

Besides the generic engine this module hosts the three proof families used
by the scheme: the join proof, the opening proof (whose witness is a G2
element) and the signature proof.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .algebra import (
    CONTEXT,
    ORDER,
    DecodeError,
    G1Point,
    G2Point,
    GtElement,
    hash_to_scalar,
    pairing,
    random_scalar,
    scalar_from_bytes,
    scalar_to_bytes,
    uncounted,
)

TAG_PKJ = b"NGS-PKJ-v1"
TAG_PKO = b"NGS-PKO-v1"
TAG_SPKS = b"NGS-SPKS-v1"

_TAG_IDS = {TAG_PKJ: 1, TAG_PKO: 2, TAG_SPKS: 3}
_ID_TAGS = {v: k for k, v in _TAG_IDS.items()}

Element = Union[G1Point, G2Point, GtElement]


class ProofError(ValueError):
    """Bad arguments to a prover (arity mismatch, unsatisfied statement)."""


def lp(data: bytes) -> bytes:
    return len(data).to_bytes(4, "big") + data


def read_lp(buf: bytes, pos: int) -> tuple[bytes, int]:
    if pos + 4 > len(buf):
        raise DecodeError("truncated length prefix")
    n = int.from_bytes(buf[pos : pos + 4], "big")
    end = pos + 4 + n
    if end > len(buf):
        raise DecodeError("truncated field")
    return buf[pos + 4 : end], end


@dataclass(frozen=True)
class LinearRelation:
    target: Element
    bases: tuple
    witness_indices: tuple

    def __post_init__(self):
        object.__setattr__(self, "bases", tuple(self.bases))
        object.__setattr__(self, "witness_indices", tuple(self.witness_indices))
        if len(self.bases) != len(self.witness_indices):
            raise ProofError("bases and witness indices differ in length")
        if not self.bases:
            raise ProofError("relation needs at least one base")
        kind = type(self.target)
        if any(type(b) is not kind for b in self.bases):
            raise ProofError("all bases must live in the target's group")

    def evaluate(self, exponents: Sequence[int]) -> Element:
        return _multi_exp([(b, exponents[k]) for b, k in zip(self.bases, self.witness_indices)])


def _multi_exp(terms):
    out = None
    i = 0
    while i < len(terms):
        b, e = terms[i]
        if i + 1 < len(terms) and hasattr(b, "pow2"):
            b2, e2 = terms[i + 1]
            part = b.pow2(e, b2, e2)
            i += 2
        else:
            part = b**e
            i += 1
        out = part if out is None else out * part
    return out


def _arity(statement: Sequence[LinearRelation]) -> int:
    return 1 + max(k for rel in statement for k in rel.witness_indices)


def statement_bytes(statement: Sequence[LinearRelation]) -> bytes:
    out = bytearray()
    for rel in statement:
        out += lp(type(rel.target)._label.encode()) + lp(bytes(rel.target))
        out += lp(len(rel.bases).to_bytes(4, "big"))
        for base, k in zip(rel.bases, rel.witness_indices):
            out += lp(bytes(base)) + lp(k.to_bytes(4, "big"))
    return bytes(out)


def transcript(tag: bytes, statement_block: bytes, commitments: Sequence[Element], message: bytes) -> bytes:
    block = b"".join(lp(bytes(c)) for c in commitments)
    return lp(tag) + lp(statement_block) + lp(block) + lp(message)


@dataclass(frozen=True)
class SpkProof:
    """Fiat-Shamir transcript ``(challenge, responses)`` under a domain tag.

    ``responses`` is a tuple of scalars, or a single :class:`G2Point` for the
    opening proof.
    """

    challenge: int
    responses: Union[tuple, G2Point]
    domain_tag: bytes

    def to_bytes(self) -> bytes:
        if self.domain_tag not in _TAG_IDS:
            raise ValueError(f"no wire encoding for tag {self.domain_tag!r}")
        out = bytes([_TAG_IDS[self.domain_tag]]) + lp(scalar_to_bytes(self.challenge))
        if isinstance(self.responses, G2Point):
            return out + (1).to_bytes(4, "big") + lp(bytes(self.responses))
        out += len(self.responses).to_bytes(4, "big")
        return out + b"".join(lp(scalar_to_bytes(s)) for s in self.responses)

    @classmethod
    def from_bytes(cls, data: bytes) -> "SpkProof":
        data = bytes(data)
        if not data or data[0] not in _ID_TAGS:
            raise DecodeError("unknown proof tag")
        tag = _ID_TAGS[data[0]]
        raw, pos = read_lp(data, 1)
        challenge = scalar_from_bytes(raw)
        if pos + 4 > len(data):
            raise DecodeError("truncated response count")
        count = int.from_bytes(data[pos : pos + 4], "big")
        pos += 4
        items = []
        for _ in range(count):
            raw, pos = read_lp(data, pos)
            items.append(raw)
        if pos != len(data):
            raise DecodeError("trailing bytes after proof")
        if tag == TAG_PKO:
            if count != 1:
                raise DecodeError("opening proof carries exactly one G2 response")
            point = G2Point.from_bytes(items[0])
            if point.is_identity():
                raise DecodeError("identity response")
            return cls(challenge, point, tag)
        return cls(challenge, tuple(scalar_from_bytes(s) for s in items), tag)

    def hex(self) -> str:
        return self.to_bytes().hex()

    @classmethod
    def from_hex(cls, text: str) -> "SpkProof":
        try:
            return cls.from_bytes(bytes.fromhex(text))
        except ValueError as exc:
            raise DecodeError(str(exc)) from None


# ---------------------------------------------------------------- interactive protocol


def commit(statement: Sequence[LinearRelation], rng=None) -> tuple[list[int], list[Element]]:
    nonces = [random_scalar(rng) for _ in range(_arity(statement))]
    return nonces, [rel.evaluate(nonces) for rel in statement]


def respond(nonces: Sequence[int], witness: Sequence[int], challenge: int) -> tuple[int, ...]:
    if len(nonces) != len(witness):
        raise ProofError("witness arity mismatch")
    return tuple((r - challenge * x) % ORDER for r, x in zip(nonces, witness))


def recompute_commitments(statement, challenge: int, responses: Sequence[int]) -> list[Element]:
    out = []
    for rel in statement:
        terms = [(rel.target, challenge)]
        terms += [(b, responses[k]) for b, k in zip(rel.bases, rel.witness_indices)]
        out.append(_multi_exp(terms))
    return out


def check(statement, commitments, challenge: int, responses: Sequence[int]) -> bool:
    """Interactive verifier: accept iff each recomputed commitment matches."""
    if len(responses) != _arity(statement) or len(commitments) != len(statement):
        return False
    return list(commitments) == recompute_commitments(statement, challenge, responses)


def satisfies(statement: Sequence[LinearRelation], witness: Sequence[int]) -> bool:
    return all(rel.target == rel.evaluate(witness) for rel in statement)


def extract_witness(statement, transcript_a, transcript_b) -> list[int]:
    """Special-soundness extractor from two accepting transcripts sharing commitments.

    Each transcript is ``(commitments, challenge, responses)``.
    """
    comm_a, cha_a, rsp_a = transcript_a
    comm_b, cha_b, rsp_b = transcript_b
    if [bytes(c) for c in comm_a] != [bytes(c) for c in comm_b]:
        raise ProofError("transcripts do not share commitments")
    if (cha_a - cha_b) % ORDER == 0:
        raise ZeroDivisionError("extraction needs two distinct challenges")
    if not (check(statement, comm_a, cha_a, rsp_a) and check(statement, comm_b, cha_b, rsp_b)):
        raise ProofError("both transcripts must verify")
    inv = pow((cha_b - cha_a) % ORDER, -1, ORDER)
    return [(ra - rb) * inv % ORDER for ra, rb in zip(rsp_a, rsp_b)]


# ---------------------------------------------------------------- Fiat-Shamir


def fs_prove_scalars(statement, witness, message: bytes, tag: bytes, rng=None) -> SpkProof:
    statement = list(statement)
    witness = list(witness)
    if len(witness) != _arity(statement):
        raise ProofError("witness arity does not match the statement")
    with uncounted():
        if not satisfies(statement, witness):
            raise ProofError("witness does not satisfy the statement")
    nonces, commitments = commit(statement, rng)
    challenge = hash_to_scalar(transcript(tag, statement_bytes(statement), commitments, message))
    return SpkProof(challenge, respond(nonces, witness, challenge), tag)


def fs_verify_scalars(statement, proof: SpkProof, message: bytes) -> bool:
    statement = list(statement)
    if isinstance(proof.responses, G2Point):
        return False
    if len(proof.responses) != _arity(statement):
        return False
    commitments = recompute_commitments(statement, proof.challenge, proof.responses)
    expected = hash_to_scalar(transcript(proof.domain_tag, statement_bytes(statement), commitments, message))
    return expected == proof.challenge


def _pko_statement(u, w, g, rho) -> bytes:
    return b"".join(lp(bytes(x)) for x in (u, w, g, CONTEXT.g_hat, rho))


def fs_prove_g2(u: G1Point, w: G1Point, g: G1Point, rho: GtElement, tau: G2Point, rng=None, message: bytes = b"") -> SpkProof:
    """Prove knowledge of ``tau`` with ``e(w, g_hat) = e(u, tau)`` and ``rho = e(g, tau)``."""
    if tau.is_identity():
        raise ProofError("trapdoor must not be the identity")
    with uncounted():
        if pairing(u, tau) != pairing(w, CONTEXT.g_hat) or pairing(g, tau) != rho:
            raise ProofError("trapdoor does not satisfy the opening statement")
    return _prove_g2(u, w, g, rho, tau, rng, message)


def _prove_g2(u, w, g, rho, tau, rng, message):
    r_hat = CONTEXT.g_hat ** random_scalar(rng, nonzero=True)
    commitments = [pairing(u, r_hat), pairing(g, r_hat)]
    challenge = hash_to_scalar(transcript(TAG_PKO, _pko_statement(u, w, g, rho), commitments, message))
    return SpkProof(challenge, r_hat / tau**challenge, TAG_PKO)


def fs_verify_g2(u: G1Point, w: G1Point, g: G1Point, rho: GtElement, proof: SpkProof, message: bytes = b"") -> bool:
    rsp = proof.responses
    if not isinstance(rsp, G2Point) or proof.domain_tag != TAG_PKO:
        return False
    c = proof.challenge
    commitments = [pairing(u, rsp) * pairing(w, CONTEXT.g_hat) ** c, pairing(g, rsp) * rho**c]
    expected = hash_to_scalar(transcript(TAG_PKO, _pko_statement(u, w, g, rho), commitments, message))
    return expected == c
