"""Nickname group signatures.

Members hold a secret ``alpha`` and a trapdoor ``tau = g_hat**alpha``. The
issuer certifies ``(u, w) = (H(f), H(f)**alpha)`` with ``v = u**x * w**y``;
the triple ``(u, v, w)`` is the member's master public key and any
componentwise power of it is a nickname of the same member. Holders of
``tau`` (the member, and the opener after decrypting the registered
trapdoor) can recognise all nicknames of that member.

``uvf`` checks only the signature proof. Callers that need group
membership must also call ``gvf`` on the nickname.

Every value type has ``to_dict``/``from_dict`` with hex-encoded canonical
bytes; :func:`dump_group`/:func:`load_group` handle the versioned group
state file.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Optional

from .algebra import (
    CONTEXT,
    CURVE_ID,
    DecodeError,
    G1Point,
    G2Point,
    GtElement,
    hash_to_g1,
    pairing,
    pairing_product,
    random_scalar,
    uncounted,
)
from .ds import DsKeyPair, DsSignature, ds_keygen, ds_sign, ds_verify
from .sigma import (
    TAG_PKJ,
    TAG_SPKS,
    LinearRelation,
    SpkProof,
    fs_prove_g2,
    fs_prove_scalars,
    fs_verify_g2,
    fs_verify_scalars,
    lp,
)

FORMAT_VERSION = 1


class IssueRejected(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class IntegrityError(Exception):
    """Group state is inconsistent in a way honest issuance cannot produce."""


def _g1(text):
    return G1Point.from_hex(text)


def _g2(text):
    return G2Point.from_hex(text)


# ---------------------------------------------------------------- key types


@dataclass(frozen=True)
class IssuerPublicKey:
    X_hat: G2Point
    Y_hat: G2Point

    def to_dict(self):
        return {"X_hat": self.X_hat.hex(), "Y_hat": self.Y_hat.hex()}

    @classmethod
    def from_dict(cls, d):
        return cls(_g2(d["X_hat"]), _g2(d["Y_hat"]))


@dataclass(frozen=True)
class IssuerKeys:
    x: int
    y: int
    ipk: IssuerPublicKey

    @property
    def isk(self) -> tuple[int, int]:
        return self.x, self.y

    def to_dict(self):
        return {"x": hex(self.x), "y": hex(self.y), "ipk": self.ipk.to_dict()}

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["x"], 16), int(d["y"], 16), IssuerPublicKey.from_dict(d["ipk"]))


@dataclass(frozen=True)
class OpenerKeys:
    z: int
    Z_hat: G2Point

    @property
    def osk(self) -> int:
        return self.z

    @property
    def opk(self) -> G2Point:
        return self.Z_hat

    def to_dict(self):
        return {"z": hex(self.z), "Z_hat": self.Z_hat.hex()}

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["z"], 16), _g2(d["Z_hat"]))


@dataclass(frozen=True)
class MemberSecret:
    alpha: int
    tau: G2Point

    def __post_init__(self):
        if self.alpha == 0:
            raise ValueError("alpha must be nonzero")

    def to_dict(self):
        return {"alpha": hex(self.alpha), "tau": self.tau.hex()}

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["alpha"], 16), _g2(d["tau"]))


def user_keys_to_dict(keys: DsKeyPair) -> dict:
    return {"usk": hex(keys.usk), "upk": keys.upk.hex()}


def user_keys_from_dict(d) -> DsKeyPair:
    return DsKeyPair(int(d["usk"], 16), _g1(d["upk"]))


# ---------------------------------------------------------------- protocol messages


@dataclass(frozen=True)
class Nickname:
    u: G1Point
    v: G1Point
    w: G1Point

    def __post_init__(self):
        for name in ("u", "v", "w"):
            part = getattr(self, name)
            if not isinstance(part, G1Point):
                raise TypeError(f"{name} must be a G1Point")
            if part.is_identity():
                raise ValueError(f"nickname component {name} is the identity")

    def __bytes__(self) -> bytes:
        return bytes(self.u) + bytes(self.v) + bytes(self.w)

    def hex(self) -> str:
        return bytes(self).hex()

    @classmethod
    def from_bytes(cls, data: bytes) -> "Nickname":
        data = bytes(data)
        if len(data) != 96:
            raise DecodeError("nickname encoding must be 96 bytes")
        try:
            return cls(*(G1Point.from_bytes(data[k : k + 32]) for k in (0, 32, 64)))
        except ValueError as exc:
            raise DecodeError(str(exc)) from None

    @classmethod
    def from_hex(cls, text: str) -> "Nickname":
        try:
            data = bytes.fromhex(text)
        except ValueError:
            raise DecodeError("invalid hex for nickname") from None
        return cls.from_bytes(data)

    def to_dict(self):
        return {"u": self.u.hex(), "v": self.v.hex(), "w": self.w.hex()}

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(_g1(d["u"]), _g1(d["v"]), _g1(d["w"]))
        except ValueError as exc:
            raise DecodeError(str(exc)) from None


@dataclass(frozen=True)
class EncryptedTrapdoor:
    S_hat: G2Point
    f_prime: G2Point

    def decrypt(self, z: int) -> G2Point:
        return self.f_prime / self.S_hat**z

    def to_dict(self):
        return {"S_hat": self.S_hat.hex(), "f_prime": self.f_prime.hex()}

    @classmethod
    def from_dict(cls, d):
        return cls(_g2(d["S_hat"]), _g2(d["f_prime"]))


@dataclass(frozen=True)
class JoinRequest:
    f: G1Point
    w: G1Point
    enc_trapdoor: EncryptedTrapdoor
    pi_j: SpkProof
    sigma_ds: DsSignature

    def to_dict(self):
        return {
            "f": self.f.hex(),
            "w": self.w.hex(),
            "enc_trapdoor": self.enc_trapdoor.to_dict(),
            "pi_j": self.pi_j.hex(),
            "sigma_ds": self.sigma_ds.hex(),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            _g1(d["f"]),
            _g1(d["w"]),
            EncryptedTrapdoor.from_dict(d["enc_trapdoor"]),
            SpkProof.from_hex(d["pi_j"]),
            DsSignature.from_hex(d["sigma_ds"]),
        )


@dataclass(frozen=True)
class RegistrationEntry:
    f: G1Point
    enc_trapdoor: EncryptedTrapdoor
    rho: GtElement
    sigma_ds: DsSignature

    def to_dict(self):
        return {
            "f": self.f.hex(),
            "enc_trapdoor": self.enc_trapdoor.to_dict(),
            "rho": self.rho.hex(),
            "sigma_ds": self.sigma_ds.hex(),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            _g1(d["f"]),
            EncryptedTrapdoor.from_dict(d["enc_trapdoor"]),
            GtElement.from_hex(d["rho"]),
            DsSignature.from_hex(d["sigma_ds"]),
        )


@dataclass(frozen=True)
class OpeningProof:
    rho: GtElement
    sigma_ds: DsSignature
    pi_o: SpkProof

    def to_dict(self):
        return {"rho": self.rho.hex(), "sigma_ds": self.sigma_ds.hex(), "pi_o": self.pi_o.hex()}

    @classmethod
    def from_dict(cls, d):
        return cls(GtElement.from_hex(d["rho"]), DsSignature.from_hex(d["sigma_ds"]), SpkProof.from_hex(d["pi_o"]))


@dataclass
class GroupState:
    """Public tables of one group. ``iss`` is the only writer of ``reg``/``mpk``/``seen_f``."""

    reg: dict = field(default_factory=dict)
    mpk: dict = field(default_factory=dict)
    upk: dict = field(default_factory=dict)
    seen_f: set = field(default_factory=set)

    def copy(self) -> "GroupState":
        return GroupState(dict(self.reg), dict(self.mpk), dict(self.upk), set(self.seen_f))


def dump_group(state: GroupState, ipk: IssuerPublicKey, opk: G2Point) -> dict:
    entries = []
    for i in sorted(set(state.upk) | set(state.reg)):
        entry = {"index": i}
        if i in state.upk:
            entry["upk"] = state.upk[i].hex()
        if i in state.mpk:
            entry["mpk"] = state.mpk[i].to_dict()
        if i in state.reg:
            entry["reg"] = state.reg[i].to_dict()
        entries.append(entry)
    return {
        "header": {"format_version": FORMAT_VERSION, "curve_id": CURVE_ID, "ipk": ipk.to_dict(), "opk": opk.hex()},
        "entries": entries,
    }


def load_group(doc: dict) -> tuple[GroupState, IssuerPublicKey, G2Point]:
    header = doc["header"]
    if header.get("format_version") != FORMAT_VERSION:
        raise DecodeError(f"unsupported group format {header.get('format_version')!r}")
    if header.get("curve_id") != CURVE_ID:
        raise DecodeError(f"group file is for curve {header.get('curve_id')!r}")
    state = GroupState()
    for entry in doc["entries"]:
        i = int(entry["index"])
        if "upk" in entry:
            state.upk[i] = _g1(entry["upk"])
        if ("mpk" in entry) != ("reg" in entry):
            raise IntegrityError(f"entry {i} has mpk without reg or reg without mpk")
        if "reg" in entry:
            reg = RegistrationEntry.from_dict(entry["reg"])
            if bytes(reg.f) in state.seen_f:
                raise IntegrityError(f"duplicate f at entry {i}")
            state.reg[i] = reg
            state.mpk[i] = Nickname.from_dict(entry["mpk"])
            state.seen_f.add(bytes(reg.f))
    return state, IssuerPublicKey.from_dict(header["ipk"]), _g2(header["opk"])


def save_group_file(path, state, ipk, opk) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump(dump_group(state, ipk, opk), fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)


def load_group_file(path):
    with open(path) as fh:
        return load_group(json.load(fh))


# ---------------------------------------------------------------- algorithms


def ikg(rng=None) -> IssuerKeys:
    x = random_scalar(rng, nonzero=True)
    y = random_scalar(rng, nonzero=True)
    g_hat = CONTEXT.g_hat
    return IssuerKeys(x, y, IssuerPublicKey(g_hat**x, g_hat**y))


def okg(rng=None) -> OpenerKeys:
    z = random_scalar(rng, nonzero=True)
    return OpenerKeys(z, CONTEXT.g_hat**z)


def ukg(i: int, state: Optional[GroupState] = None, rng=None) -> DsKeyPair:
    """User key pair; published in ``state.upk[i]`` when a state is given."""
    keys = ds_keygen(i, rng)
    if state is not None:
        state.upk[i] = keys.upk
    return keys


def _pkj_statement(f, w, u, enc: EncryptedTrapdoor, opk: G2Point):
    g, g_hat = CONTEXT.g, CONTEXT.g_hat
    return [
        LinearRelation(f, (g,), (0,)),
        LinearRelation(w, (u,), (0,)),
        LinearRelation(enc.S_hat, (g_hat,), (1,)),
        LinearRelation(enc.f_prime, (g_hat, opk), (0, 1)),
    ]


def join(usk: int, opk: G2Point, rng=None) -> tuple[MemberSecret, JoinRequest]:
    g, g_hat = CONTEXT.g, CONTEXT.g_hat
    alpha = random_scalar(rng, nonzero=True)
    s = random_scalar(rng, nonzero=True)
    f = g**alpha
    u = hash_to_g1(bytes(f))
    w = u**alpha
    tau = g_hat**alpha
    enc = EncryptedTrapdoor(g_hat**s, tau * opk**s)
    pi_j = fs_prove_scalars(_pkj_statement(f, w, u, enc, opk), [alpha, s], b"", TAG_PKJ, rng)
    sigma = ds_sign(usk, bytes(pairing(f, g_hat)), rng)
    return MemberSecret(alpha, tau), JoinRequest(f, w, enc, pi_j, sigma)


def iss(i: int, issuer: IssuerKeys, req: JoinRequest, opk: G2Point, state: GroupState) -> Nickname:
    """Admit user ``i``; on success writes ``reg[i]``, ``mpk[i]`` and returns ``mpk[i]``.

    Raises :class:`IssueRejected` with ``reason`` one of ``"unknown user"``,
    ``"fresh-f violation"``, ``"already issued"``, ``"join proof"`` or
    ``"identity binding"``. A rejected request leaves ``state`` untouched.
    """
    if i not in state.upk:
        raise IssueRejected("unknown user")
    if bytes(req.f) in state.seen_f:
        raise IssueRejected("fresh-f violation")
    if i in state.reg:
        raise IssueRejected("already issued")
    if req.f.is_identity() or req.w.is_identity() or req.pi_j.domain_tag != TAG_PKJ:
        raise IssueRejected("join proof")
    u = hash_to_g1(bytes(req.f))
    if not fs_verify_scalars(_pkj_statement(req.f, req.w, u, req.enc_trapdoor, opk), req.pi_j, b""):
        raise IssueRejected("join proof")
    rho = pairing(req.f, CONTEXT.g_hat)
    if not ds_verify(state.upk[i], bytes(rho), req.sigma_ds):
        raise IssueRejected("identity binding")
    mpk = Nickname(u, u.pow2(issuer.x, req.w, issuer.y), req.w)
    state.reg[i] = RegistrationEntry(req.f, req.enc_trapdoor, rho, req.sigma_ds)
    state.mpk[i] = mpk
    state.seen_f.add(bytes(req.f))
    return mpk


def nick(mpk: Nickname, r: int) -> Nickname:
    if r % CONTEXT.order == 0:
        raise ValueError("nickname exponent must be nonzero")
    return Nickname(mpk.u**r, mpk.v**r, mpk.w**r)


def random_nick(mpk: Nickname, rng=None) -> Nickname:
    return nick(mpk, random_scalar(rng, nonzero=True))


def gvf(ipk: IssuerPublicKey, nk: Nickname) -> bool:
    return pairing_product([(nk.v, CONTEXT.g_hat), (nk.u.inverse(), ipk.X_hat), (nk.w.inverse(), ipk.Y_hat)]).is_identity()


def _in_class(tau: G2Point, nk: Nickname) -> bool:
    return pairing_product([(nk.u, tau), (nk.w.inverse(), CONTEXT.g_hat)]).is_identity()


def trace(ipk: IssuerPublicKey, tau: G2Point, nk: Nickname) -> bool:
    return _in_class(tau, nk) and gvf(ipk, nk)


def open_nickname(opener: OpenerKeys, nk: Nickname, state: GroupState, rng=None, ipk=None):
    """Identify the member behind ``nk``; returns ``(i, OpeningProof)`` or ``None``.

    Entries are scanned in ascending index. Two matching entries raise
    :class:`IntegrityError`. When ``ipk`` is given a nickname failing
    ``gvf`` is reported as not found.
    """
    if ipk is not None and not gvf(ipk, nk):
        return None
    g = CONTEXT.g
    found = None
    for i in sorted(state.reg):
        entry = state.reg[i]
        tau = entry.enc_trapdoor.decrypt(opener.z)
        if not _in_class(tau, nk):
            continue
        if pairing(g, tau) != entry.rho:
            raise IntegrityError(f"registration entry {i} does not match its trapdoor")
        if found is not None:
            raise IntegrityError(f"nickname matches entries {found[0]} and {i}")
        found = (i, tau, entry)
    if found is None:
        return None
    i, tau, entry = found
    pi_o = fs_prove_g2(nk.u, nk.w, g, entry.rho, tau, rng)
    return i, OpeningProof(entry.rho, entry.sigma_ds, pi_o)


def judge(nk: Nickname, i: int, ipk: IssuerPublicKey, proof: OpeningProof, upk_table) -> bool:
    upk = upk_table.get(i)
    if upk is None:
        return False
    if not ds_verify(upk, bytes(proof.rho), proof.sigma_ds):
        return False
    if not gvf(ipk, nk):
        return False
    return fs_verify_g2(nk.u, nk.w, CONTEXT.g, proof.rho, proof.pi_o)


def _spks(nk: Nickname, message: bytes):
    statement = [LinearRelation(nk.w, (nk.u,), (0,))]
    return statement, lp(bytes(nk.v)) + lp(bytes(message))


def sign(nk: Nickname, alpha: int, message: bytes, rng=None) -> SpkProof:
    statement, bound = _spks(nk, message)
    return fs_prove_scalars(statement, [alpha], bound, TAG_SPKS, rng)


def uvf(nk: Nickname, message: bytes, sigma: SpkProof) -> bool:
    if sigma.domain_tag != TAG_SPKS:
        return False
    statement, bound = _spks(nk, message)
    return fs_verify_scalars(statement, sigma, bound)


def owns(secret: MemberSecret, nk: Nickname) -> bool:
    """Cheap local check that ``nk`` belongs to ``secret`` (one G1 exponentiation, uncounted)."""
    with uncounted():
        return nk.u**secret.alpha == nk.w
