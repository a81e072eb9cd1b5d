"""NickHat: an in-process ledger where token holders are nicknames.

The ledger simulates four contracts at fixed addresses. The escrow holds
deposited ERC20-style tokens and keeps per-nickname balances. The key
registry stores master public keys. The forwarder verifies nickname
signatures before dispatching a request. The HTLC contract holds
hash-time-locked amounts.

Accounting model, per token::

    sum(user address balances) + sum(nickname balances) + sum(open locks)

is constant under every operation except ``mint``. The escrow account
balance always equals the nickname balances, and the HTLC account balance
always equals the open lock amounts.

Every mutating call validates completely before touching state, so a
rejected call (:class:`LedgerRejection`) leaves the ledger unchanged.
Block height advances by one per accepted operation.

Replay protection: a signed request carries ``nonce`` which must equal the
source nickname's last nonce plus one.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass, field
from typing import Optional

from . import ngs
from .ngs import IssuerPublicKey, Nickname
from .sigma import SpkProof

REQUEST_DOMAIN = b"NICKHAT-REQ-v1\x00"
HTLC_SPENDER = "htlc"


class LedgerRejection(Exception):
    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason
        self.detail = detail


class AuditError(Exception):
    """Audit precondition failed or the opener could not produce a judged proof."""


@dataclass(frozen=True, order=True)
class Address:
    raw: bytes

    def __post_init__(self):
        if len(self.raw) != 20:
            raise ValueError("address must be 20 bytes")

    @classmethod
    def of(cls, label: str) -> "Address":
        return cls(hashlib.sha256(b"nickhat-address:" + label.encode()).digest()[:20])

    @classmethod
    def from_hex(cls, text: str) -> "Address":
        text = text[2:] if text.startswith("0x") else text
        return cls(bytes.fromhex(text))

    def hex(self) -> str:
        return "0x" + self.raw.hex()

    def __str__(self) -> str:
        return self.hex()


ESCROW = Address.of("contract:escrow")
REGISTRY = Address.of("contract:key-registry")
FORWARDER = Address.of("contract:forwarder")
HTLC = Address.of("contract:htlc")
CONTRACTS = frozenset({ESCROW, REGISTRY, FORWARDER, HTLC})


# ---------------------------------------------------------------- requests

_SCHEMA = {
    "transfer": {"target": "nick", "token": "str", "amount": "int"},
    "withdraw": {"to": "addr", "token": "str", "amount": "int"},
    "approve": {"spender": "str", "token": "str", "amount": "int"},
    "lock": {"recipient": "nick", "token": "str", "amount": "int", "hashlock": "bytes", "timelock": "int"},
    "claim": {"lock_id": "str", "preimage": "bytes"},
    "refund": {"lock_id": "str"},
}
KINDS = tuple(_SCHEMA)

_ENCODE = {
    "nick": lambda v: v.hex(),
    "addr": lambda v: v.hex(),
    "bytes": lambda v: v.hex(),
    "int": int,
    "str": str,
}
_DECODE = {
    "nick": Nickname.from_hex,
    "addr": Address.from_hex,
    "bytes": bytes.fromhex,
    "int": int,
    "str": str,
}
_TYPES = {"nick": Nickname, "addr": Address, "bytes": bytes, "int": int, "str": str}


@dataclass(frozen=True)
class TransferRequest:
    kind: str
    source: Nickname
    params: dict
    nonce: int

    def __post_init__(self):
        schema = _SCHEMA.get(self.kind)
        if schema is None:
            raise ValueError(f"unknown request kind {self.kind!r}")
        if set(self.params) != set(schema):
            raise ValueError(f"{self.kind} takes parameters {sorted(schema)}")
        for key, kind in schema.items():
            value = self.params[key]
            if not isinstance(value, _TYPES[kind]) or (kind == "int" and isinstance(value, bool)):
                raise ValueError(f"parameter {key} must be {kind}")
        if not isinstance(self.nonce, int) or self.nonce < 1:
            raise ValueError("nonce must be a positive integer")

    def to_dict(self) -> dict:
        schema = _SCHEMA[self.kind]
        return {
            "kind": self.kind,
            "source": self.source.hex(),
            "nonce": self.nonce,
            "params": {k: _ENCODE[schema[k]](v) for k, v in self.params.items()},
        }

    @classmethod
    def from_dict(cls, d) -> "TransferRequest":
        schema = _SCHEMA.get(d["kind"])
        if schema is None:
            raise ValueError(f"unknown request kind {d['kind']!r}")
        params = {k: _DECODE[schema[k]](v) for k, v in d["params"].items() if k in schema}
        return cls(d["kind"], Nickname.from_hex(d["source"]), params, int(d["nonce"]))

    def canonical(self) -> bytes:
        """The bytes the source nickname signs."""
        return REQUEST_DOMAIN + json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")).encode()


def sign_request(req: TransferRequest, alpha: int, rng=None) -> SpkProof:
    return ngs.sign(req.source, alpha, req.canonical(), rng)


@dataclass
class HtlcLock:
    lock_id: str
    sender: str
    recipient: str
    token: str
    amount: int
    hashlock: bytes
    timelock: int
    state: str = "open"

    def to_dict(self):
        return {
            "lock_id": self.lock_id,
            "sender": self.sender,
            "recipient": self.recipient,
            "token": self.token,
            "amount": self.amount,
            "hashlock": self.hashlock.hex(),
            "timelock": self.timelock,
            "state": self.state,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["lock_id"], d["sender"], d["recipient"], d["token"], int(d["amount"]),
                   bytes.fromhex(d["hashlock"]), int(d["timelock"]), d["state"])


# ---------------------------------------------------------------- ledger


@dataclass
class Ledger:
    ipk: IssuerPublicKey
    supervisor: dict = field(default_factory=dict)
    block_height: int = 0
    token_balances: dict = field(default_factory=dict)
    token_allowances: dict = field(default_factory=dict)
    nick_balances: dict = field(default_factory=dict)
    nick_nonces: dict = field(default_factory=dict)
    nick_allowances: dict = field(default_factory=dict)
    announcements: list = field(default_factory=list)
    key_registry: list = field(default_factory=list)
    htlc_locks: dict = field(default_factory=dict)
    supply: dict = field(default_factory=dict)
    relayer_log: list = field(default_factory=list)
    # nicknames already checked by GVf (registered or announced)
    _valid: set = field(default_factory=set, repr=False)

    # ------------------------------------------------------------ helpers

    def copy(self) -> "Ledger":
        return copy.deepcopy(self)

    def balance(self, who, token: str) -> int:
        if isinstance(who, Nickname):
            return self.nick_balances.get((who.hex(), token), 0)
        return self.token_balances.get((who.hex(), token), 0)

    def allowance(self, owner: Address, spender: Address, token: str) -> int:
        return self.token_allowances.get((owner.hex(), spender.hex(), token), 0)

    def nick_allowance(self, nk: Nickname, spender: str, token: str) -> int:
        return self.nick_allowances.get((nk.hex(), spender, token), 0)

    def nonce(self, nk: Nickname) -> int:
        return self.nick_nonces.get(nk.hex(), 0)

    def tokens(self) -> set:
        return {t for _, t in self.token_balances} | {t for _, t in self.nick_balances} | set(self.supply)

    def circulating(self, token: str) -> int:
        users = sum(v for (a, t), v in self.token_balances.items() if t == token and Address.from_hex(a) not in CONTRACTS)
        nicks = sum(v for (_, t), v in self.nick_balances.items() if t == token)
        locked = sum(lk.amount for lk in self.htlc_locks.values() if lk.token == token and lk.state == "open")
        return users + nicks + locked

    def check_invariants(self) -> None:
        for table in (self.token_balances, self.token_allowances, self.nick_balances, self.nick_allowances):
            for key, value in table.items():
                if value < 0:
                    raise AssertionError(f"negative entry {key}: {value}")
        for token in self.tokens():
            if self.circulating(token) != self.supply.get(token, 0):
                raise AssertionError(f"supply of {token} not conserved")
            nicks = sum(v for (_, t), v in self.nick_balances.items() if t == token)
            if self.balance(ESCROW, token) != nicks:
                raise AssertionError(f"escrow insolvent for {token}")
            locked = sum(lk.amount for lk in self.htlc_locks.values() if lk.token == token and lk.state == "open")
            if self.balance(HTLC, token) != locked:
                raise AssertionError(f"htlc contract insolvent for {token}")

    def _credit(self, table, key, amount):
        table[key] = table.get(key, 0) + amount

    def _move(self, src: Address, dst: Address, token: str, amount: int):
        self._credit(self.token_balances, (src.hex(), token), -amount)
        self._credit(self.token_balances, (dst.hex(), token), amount)

    def _announce(self, nk: Nickname):
        self.announcements.append((self.block_height, nk.hex()))
        self._valid.add(nk.hex())

    def _require_gvf(self, nk: Nickname):
        if nk.hex() not in self._valid and not ngs.gvf(self.ipk, nk):
            raise LedgerRejection("gvf", "nickname is not group-valid")

    def _mine(self):
        self.block_height += 1

    @staticmethod
    def _amount(value):
        if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
            raise LedgerRejection("bad request", "amount must be a positive integer")
        return value

    # ------------------------------------------------------------ token contract

    def mint(self, to: Address, token: str, amount: int) -> None:
        amount = self._amount(amount)
        self._credit(self.token_balances, (to.hex(), token), amount)
        self._credit(self.supply, token, amount)
        self._mine()

    def approve(self, owner: Address, spender: Address, token: str, amount: int) -> None:
        if not isinstance(amount, int) or amount < 0:
            raise LedgerRejection("bad request", "allowance must be a non-negative integer")
        self.token_allowances[(owner.hex(), spender.hex(), token)] = amount
        self._mine()

    def advance(self, blocks: int = 1) -> None:
        if blocks < 0:
            raise ValueError("cannot rewind the chain")
        self.block_height += blocks

    # ------------------------------------------------------------ registry and escrow

    def register_mpk(self, mpk: Nickname) -> None:
        if mpk.hex() in self.key_registry:
            raise LedgerRejection("duplicate", "master public key already registered")
        self._require_gvf(mpk)
        self.key_registry.append(mpk.hex())
        self._valid.add(mpk.hex())
        self._mine()

    def deposit(self, frm: Address, token: str, amount: int, nk: Nickname) -> None:
        amount = self._amount(amount)
        if self.allowance(frm, ESCROW, token) < amount:
            raise LedgerRejection("allowance", "escrow allowance too small")
        if self.balance(frm, token) < amount:
            raise LedgerRejection("balance", "token balance too small")
        self._require_gvf(nk)
        self._credit(self.token_allowances, (frm.hex(), ESCROW.hex(), token), -amount)
        self._move(frm, ESCROW, token, amount)
        self._credit(self.nick_balances, (nk.hex(), token), amount)
        self._announce(nk)
        self._mine()

    def scan(self, tau, from_height: int = 0) -> list:
        out = []
        for height, nk_hex in self.announcements:
            if height < from_height:
                continue
            nk = Nickname.from_hex(nk_hex)
            if ngs.trace(self.ipk, tau, nk):
                out.append((height, nk))
        return out

    # ------------------------------------------------------------ forwarder

    def execute(self, req: TransferRequest, sigma: SpkProof) -> Optional[str]:
        """Verify and dispatch a signed request; returns the lock id for ``lock``."""
        src = req.source
        if req.nonce != self.nonce(src) + 1:
            raise LedgerRejection("replay", f"expected nonce {self.nonce(src) + 1}")
        self._require_gvf(src)
        if not ngs.uvf(src, req.canonical(), sigma):
            raise LedgerRejection("forwarder", "signature does not verify")
        plan = getattr(self, f"_plan_{req.kind}")(req)
        plan()
        self.nick_nonces[src.hex()] = req.nonce
        self._mine()
        return getattr(plan, "result", None)

    def _plan_transfer(self, req):
        p, src = req.params, req.source
        amount = self._amount(p["amount"])
        if self.balance(src, p["token"]) < amount:
            raise LedgerRejection("funds", "nickname balance too small")
        target = p["target"]
        self._require_gvf(target)

        def apply():
            self._credit(self.nick_balances, (src.hex(), p["token"]), -amount)
            self._credit(self.nick_balances, (target.hex(), p["token"]), amount)
            self._announce(target)

        return apply

    def _plan_withdraw(self, req):
        p, src = req.params, req.source
        amount = self._amount(p["amount"])
        if self.balance(src, p["token"]) < amount:
            raise LedgerRejection("funds", "nickname balance too small")
        if p["to"] in CONTRACTS:
            raise LedgerRejection("bad request", "cannot withdraw to a contract account")

        def apply():
            self._credit(self.nick_balances, (src.hex(), p["token"]), -amount)
            self._move(ESCROW, p["to"], p["token"], amount)

        return apply

    def _plan_approve(self, req):
        p = req.params
        if p["spender"] != HTLC_SPENDER:
            raise LedgerRejection("bad request", "only the htlc contract can be approved")
        if p["amount"] < 0:
            raise LedgerRejection("bad request", "allowance must be non-negative")

        def apply():
            self.nick_allowances[(req.source.hex(), HTLC_SPENDER, p["token"])] = p["amount"]

        return apply

    def _plan_lock(self, req):
        p, src = req.params, req.source
        amount = self._amount(p["amount"])
        token = p["token"]
        if len(p["hashlock"]) != 32:
            raise LedgerRejection("bad request", "hashlock must be 32 bytes")
        if p["timelock"] <= self.block_height:
            raise LedgerRejection("bad request", "timelock must be in the future")
        if self.nick_allowance(src, HTLC_SPENDER, token) < amount:
            raise LedgerRejection("allowance", "htlc allowance too small")
        if self.balance(src, token) < amount:
            raise LedgerRejection("funds", "nickname balance too small")
        recipient = p["recipient"]
        self._require_gvf(recipient)
        lock_id = hashlib.sha256(req.canonical()).hexdigest()[:32]

        def apply():
            self._credit(self.nick_allowances, (src.hex(), HTLC_SPENDER, token), -amount)
            self._credit(self.nick_balances, (src.hex(), token), -amount)
            self._move(ESCROW, HTLC, token, amount)
            self.htlc_locks[lock_id] = HtlcLock(lock_id, src.hex(), recipient.hex(), token, amount, p["hashlock"], p["timelock"])
            self._valid.add(recipient.hex())

        apply.result = lock_id
        return apply

    def _open_lock(self, lock_id):
        lock = self.htlc_locks.get(lock_id)
        if lock is None:
            raise LedgerRejection("unknown lock", lock_id)
        if lock.state != "open":
            raise LedgerRejection("state", f"lock already {lock.state}")
        return lock

    def _release(self, lock, to_hex, state):
        def apply():
            self._move(HTLC, ESCROW, lock.token, lock.amount)
            self._credit(self.nick_balances, (to_hex, lock.token), lock.amount)
            lock.state = state

        return apply

    def _plan_claim(self, req):
        lock = self._open_lock(req.params["lock_id"])
        if req.source.hex() != lock.recipient:
            raise LedgerRejection("bad request", "only the recipient can claim")
        if hashlib.sha256(req.params["preimage"]).digest() != lock.hashlock:
            raise LedgerRejection("preimage", "preimage does not match the hashlock")
        return self._release(lock, lock.recipient, "claimed")

    def _plan_refund(self, req):
        lock = self._open_lock(req.params["lock_id"])
        if req.source.hex() != lock.sender:
            raise LedgerRejection("bad request", "only the sender can refund")
        if self.block_height <= lock.timelock:
            raise LedgerRejection("timelock", f"refund allowed after height {lock.timelock}")
        return self._release(lock, lock.sender, "refunded")

    def htlc_lock(self, req, sigma) -> str:
        self._expect_kind(req, "lock")
        return self.execute(req, sigma)

    def htlc_claim(self, req, sigma) -> None:
        self._expect_kind(req, "claim")
        self.execute(req, sigma)

    def htlc_refund(self, req, sigma) -> None:
        self._expect_kind(req, "refund")
        self.execute(req, sigma)

    @staticmethod
    def _expect_kind(req, kind):
        if req.kind != kind:
            raise LedgerRejection("bad request", f"expected a {kind} request")

    # ------------------------------------------------------------ snapshots

    def snapshot(self) -> dict:
        def rows(table):
            return [[*key, value] if isinstance(key, tuple) else [key, value] for key, value in sorted(table.items())]

        return {
            "block_height": self.block_height,
            "ipk": self.ipk.to_dict(),
            "supervisor": self.supervisor,
            "supply": rows(self.supply),
            "token_balances": rows(self.token_balances),
            "token_allowances": rows(self.token_allowances),
            "nick_balances": rows(self.nick_balances),
            "nick_nonces": rows(self.nick_nonces),
            "nick_allowances": rows(self.nick_allowances),
            "announcements": [list(a) for a in self.announcements],
            "key_registry": list(self.key_registry),
            "htlc_locks": [lk.to_dict() for _, lk in sorted(self.htlc_locks.items())],
            "relayer_log": [list(r) for r in self.relayer_log],
        }

    def snapshot_bytes(self) -> bytes:
        return json.dumps(self.snapshot(), sort_keys=True, separators=(",", ":")).encode()

    @classmethod
    def from_snapshot(cls, snap: dict) -> "Ledger":
        def table(rows, width):
            return {tuple(r[:width]) if width > 1 else r[0]: r[-1] for r in rows}

        ledger = cls(IssuerPublicKey.from_dict(snap["ipk"]), dict(snap.get("supervisor", {})))
        ledger.block_height = snap["block_height"]
        ledger.supply = table(snap["supply"], 1)
        ledger.token_balances = table(snap["token_balances"], 2)
        ledger.token_allowances = table(snap["token_allowances"], 3)
        ledger.nick_balances = table(snap["nick_balances"], 2)
        ledger.nick_nonces = table(snap["nick_nonces"], 1)
        ledger.nick_allowances = table(snap["nick_allowances"], 3)
        ledger.announcements = [tuple(a) for a in snap["announcements"]]
        ledger.key_registry = list(snap["key_registry"])
        ledger.htlc_locks = {d["lock_id"]: HtlcLock.from_dict(d) for d in snap["htlc_locks"]}
        ledger.relayer_log = [tuple(r) for r in snap.get("relayer_log", [])]
        # everything that reached a registry, announcement or lock passed GVf on the way in
        ledger._valid = {nk for _, nk in ledger.announcements} | set(ledger.key_registry)
        ledger._valid |= {lk.recipient for lk in ledger.htlc_locks.values()}
        return ledger


def deploy(ipk: IssuerPublicKey, supervisor: Optional[dict] = None) -> Ledger:
    return Ledger(ipk, dict(supervisor or {}))


class Relayer:
    """Wraps signed requests and submits them to the forwarder, keeping a record."""

    def __init__(self, ledger: Ledger, name: str = "relayer"):
        self.ledger = ledger
        self.name = name

    def submit(self, req: TransferRequest, sigma: SpkProof):
        # rejected submissions raise before anything is recorded
        result = self.ledger.execute(req, sigma)
        self.ledger.relayer_log.append((self.ledger.block_height, self.name, req.kind, req.source.hex()[:16]))
        return result


def make_request(ledger: Ledger, kind: str, source: Nickname, **params) -> TransferRequest:
    return TransferRequest(kind, source, params, ledger.nonce(source) + 1)


def audit(ledger: Ledger, osk, state: ngs.GroupState, nk: Nickname, rng=None):
    """Supervisor audit of an announced nickname: open it and check the proof with Judge.

    ``osk`` is either an :class:`~nicknames.ngs.OpenerKeys` or the bare opening scalar.
    """
    opener = osk if isinstance(osk, ngs.OpenerKeys) else ngs.OpenerKeys(osk, ngs.CONTEXT.g_hat ** osk)
    if nk.hex() not in {h for _, h in ledger.announcements}:
        raise AuditError("nickname was never announced on this ledger")
    opened = ngs.open_nickname(opener, nk, state, rng)
    if opened is None:
        raise AuditError("no registered member matches the nickname")
    i, proof = opened
    if not ngs.judge(nk, i, ledger.ipk, proof, state.upk):
        raise AuditError("opening proof did not pass Judge")
    return i, proof
