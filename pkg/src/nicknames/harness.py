"""Security-model oracles and experiment drivers used as integration fixtures.

:class:`OracleSession` keeps the oracle lists (``L_h``, ``L_c``, ``L_ch``,
``L_sk``, ``L_sigma``, ``L_tr``) and the shadow tables ``usk``/``msk``/
``reqU``. A guarded oracle that declines raises :class:`Refused`; scheme
rejections keep their own exception types so the two never mix.

Sets of nicknames and signatures are keyed by canonical bytes.

:func:`run_correctness` is the honest end-to-end pipeline.
:func:`run_experiment_sanity` runs scripted strategies (honest play,
replay, tamper, transplant, cross-user substitution) against one experiment
and reports whether any of them met the winning condition.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from . import ngs
from .algebra import CONTEXT, G1Point, random_scalar
from .ds import ds_keygen
from .sigma import SpkProof, _prove_g2

EXPERIMENTS = ("trace", "nf", "os", "oc", "anon")


class Refused(Exception):
    """An oracle guard declined the query (the bottom answer)."""


class OracleSession:
    def __init__(self, rng=None, issuer=None, opener=None):
        self.rng = rng or random.Random()
        self.issuer = issuer or ngs.ikg(self.rng)
        self.opener = opener or ngs.okg(self.rng)
        self.state = ngs.GroupState()
        self.L_h: dict[int, object] = {}
        self.L_c: dict[int, str] = {}
        self.L_ch: set = set()
        self.L_sk: set = set()
        self.L_sigma: set = set()
        self.L_tr: set = set()
        self.usk: dict = {}
        self.msk: dict = {}
        self.reqU: dict = {}

    @property
    def ipk(self):
        return self.issuer.ipk

    @property
    def opk(self):
        return self.opener.opk

    def _fresh_index(self, i):
        if i in self.L_h or i in self.L_c:
            raise Refused(f"identity {i} already exists")

    def _join(self, i):
        keys = ngs.ukg(i, self.state, self.rng)
        secret, req = ngs.join(keys.usk, self.opk, self.rng)
        self.usk[i], self.msk[i], self.reqU[i] = keys.usk, secret.alpha, req
        self.L_h[i] = secret.tau
        return keys, secret, req

    # ------------------------------------------------------------ oracles

    def add_u(self, i) -> G1Point:
        self._fresh_index(i)
        keys, _, req = self._join(i)
        ngs.iss(i, self.issuer, req, self.opk, self.state)
        return keys.upk

    def crpt_u(self, i, upk: G1Point) -> None:
        self._fresh_index(i)
        self.state.upk[i] = upk
        self.L_c[i] = "cont"

    def snd_to_i(self, i, req: ngs.JoinRequest) -> ngs.Nickname:
        if self.L_c.get(i) != "cont":
            raise Refused("SndToI needs a corrupted user still joining")
        self.L_c[i] = "accept"
        return ngs.iss(i, self.issuer, req, self.opk, self.state)

    def snd_to_u(self, i) -> ngs.JoinRequest:
        self._fresh_index(i)
        _, _, req = self._join(i)
        return req

    def usk_oracle(self, i):
        if any(entry[0] == i for entry in self.L_ch):
            raise Refused("USK on a challenged identity")
        if i not in self.msk:
            raise Refused("USK on an identity without honest keys")
        self.L_sk.add(i)
        return self.msk[i], self.usk[i]

    def rreg(self, i):
        return self.state.reg.get(i)

    def wreg(self, i, entry) -> None:
        self.state.reg[i] = entry

    def trace(self, i, nk: ngs.Nickname) -> bool:
        if i not in self.L_h:
            raise Refused("Trace for a non-honest identity")
        b = ngs.trace(self.ipk, self.L_h[i], nk)
        self.L_tr.add((i, bytes(nk), b))
        return b

    def sig(self, i, nk: ngs.Nickname, m: bytes) -> SpkProof:
        if (i, bytes(nk), True) not in self.L_tr:
            raise Refused("Sig without a successful Trace")
        sigma = ngs.sign(nk, self.msk[i], m, self.rng)
        self.L_sigma.add((i, bytes(m), bytes(nk), sigma.to_bytes()))
        return sigma

    def ch(self, b: int, i0, i1, m: bytes):
        if i0 not in self.L_h or i1 not in self.L_h:
            raise Refused("Ch on a non-honest identity")
        if any(t[0] in (i0, i1) for t in self.L_tr):
            raise Refused("Ch on an identity already traced")
        if i0 in self.L_sk or i1 in self.L_sk:
            raise Refused("Ch on an identity whose keys were exposed")
        ib = (i0, i1)[b]
        if ib not in self.state.mpk:
            raise Refused("Ch on an identity without a master public key")
        nk = ngs.random_nick(self.state.mpk[ib], self.rng)
        sigma = ngs.sign(nk, self.msk[ib], m, self.rng)
        for i in (i0, i1):
            self.L_ch.add((i, bytes(m), bytes(nk), sigma.to_bytes()))
        return nk, sigma

    # ------------------------------------------------------------ adversary helpers

    def issue(self, i) -> ngs.Nickname:
        """Run Iss on the stored request of ``i`` (for adversaries holding isk)."""
        return ngs.iss(i, self.issuer, self.reqU[i], self.opk, self.state)


# ---------------------------------------------------------------- correctness


def _honest_group(rng, indices):
    issuer, opener = ngs.ikg(rng), ngs.okg(rng)
    state = ngs.GroupState()
    secrets = {}
    for j in indices:
        keys = ngs.ukg(j, state, rng)
        secret, req = ngs.join(keys.usk, opener.opk, rng)
        ngs.iss(j, issuer, req, opener.opk, state)
        secrets[j] = secret
    return issuer, opener, state, secrets


def run_correctness(i: int, m: bytes, seed: int, members: int = 1, fault=None) -> bool:
    """Honest pipeline: setup, join ``members`` users, then nick/sign/open user ``i``.

    ``fault`` (optional) receives the group state just before opening and may
    corrupt it; an inconsistency it causes surfaces as ``IntegrityError`` or a
    false result.
    """
    rng = random.Random(seed)
    issuer, opener, state, secrets = _honest_group(rng, sorted(set(range(members)) | {i}))
    return _correctness_tail(i, m, issuer, opener, state, secrets[i], rng, fault)


def _correctness_tail(i, m, issuer, opener, state, secret, rng, fault=None) -> bool:
    nk = ngs.random_nick(state.mpk[i], rng)
    sigma = ngs.sign(nk, secret.alpha, m, rng)
    if fault is not None:
        fault(state)
    opened = ngs.open_nickname(opener, nk, state, rng)
    if opened is None:
        return False
    i_prime, proof = opened
    ipk = issuer.ipk
    return (
        i_prime == i
        and ngs.gvf(ipk, nk)
        and ngs.uvf(nk, m, sigma)
        and ngs.judge(nk, i, ipk, proof, state.upk)
        and ngs.trace(ipk, secret.tau, nk)
    )


def correctness_sweep(seed: int, members: int, messages) -> list[bool]:
    """One group of ``members`` users sharing a setup; the pipeline tail runs once per user."""
    rng = random.Random(seed)
    issuer, opener, state, secrets = _honest_group(rng, range(members))
    return [_correctness_tail(j, m, issuer, opener, state, secrets[j], rng) for j, m in zip(range(members), messages)]


# ---------------------------------------------------------------- sanity experiments


@dataclass
class StrategyOutcome:
    strategy: str
    attempts: int = 0
    wins: int = 0
    note: str = ""

    def to_dict(self):
        return {"strategy": self.strategy, "attempts": self.attempts, "wins": self.wins, "note": self.note}


@dataclass
class SanityReport:
    experiment: str
    seed: int
    outcomes: list = field(default_factory=list)
    metrics: dict = field(default_factory=dict)

    @property
    def won(self) -> bool:
        return any(o.wins for o in self.outcomes)

    def add(self, strategy, note="") -> StrategyOutcome:
        out = StrategyOutcome(strategy, note=note)
        self.outcomes.append(out)
        return out

    def text(self) -> str:
        lines = [f"experiment {self.experiment} seed {self.seed}"]
        for o in self.outcomes:
            verdict = "WIN" if o.wins else "held"
            extra = f" ({o.note})" if o.note else ""
            lines.append(f"  {o.strategy}: {o.attempts} attempts, {o.wins} wins, {verdict}{extra}")
        for key, value in self.metrics.items():
            lines.append(f"  {key}: {value}")
        lines.append(f"result: {'adversary won' if self.won else 'no winning strategy'}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(
            {
                "experiment": self.experiment,
                "seed": self.seed,
                "strategies": [o.strategy for o in self.outcomes],
                "outcomes": [o.to_dict() for o in self.outcomes],
                "metrics": self.metrics,
            },
            sort_keys=True,
        )


def _flip_bit(data: bytes, rng) -> bytes:
    pos = rng.randrange(len(data) * 8)
    out = bytearray(data)
    out[pos // 8] ^= 1 << (pos % 8)
    return bytes(out)


def _mutate_signed(nk, m, sigma, rng):
    """One random single-component change to a signed nickname triple."""
    kind = rng.choice(("message", "challenge", "response", "u", "v", "w", "rerandomize", "proof-bytes"))
    g = CONTEXT.g
    if kind == "message":
        m = _flip_bit(m, rng) if m else b"\x01"
    elif kind == "challenge":
        sigma = SpkProof((sigma.challenge + rng.randrange(1, CONTEXT.order)) % CONTEXT.order, sigma.responses, sigma.domain_tag)
    elif kind == "response":
        bumped = (sigma.responses[0] + rng.randrange(1, CONTEXT.order)) % CONTEXT.order
        sigma = SpkProof(sigma.challenge, (bumped,), sigma.domain_tag)
    elif kind in ("u", "v", "w"):
        parts = {"u": nk.u, "v": nk.v, "w": nk.w}
        parts[kind] = parts[kind] * g ** rng.randrange(1, CONTEXT.order)
        nk = ngs.Nickname(**parts)
    elif kind == "rerandomize":
        nk = ngs.random_nick(nk, rng)
    else:
        while True:
            try:
                sigma = SpkProof.from_bytes(_flip_bit(sigma.to_bytes(), rng))
                break
            except ValueError:
                continue
    return kind, nk, m, sigma


def _populate(session, honest):
    for i in range(honest):
        session.add_u(i)
    return list(range(honest))


def _sanity_trace(seed, trials, rng) -> SanityReport:
    s = OracleSession(rng)
    report = SanityReport("trace", seed)
    users = _populate(s, 4)

    def wins(nk, m, sigma):
        if not (ngs.gvf(s.ipk, nk) and ngs.uvf(nk, m, sigma)):
            return False
        opened = ngs.open_nickname(s.opener, nk, s.state, rng)
        return opened is None or not ngs.judge(nk, opened[0], s.ipk, opened[1], s.state.upk)

    honest = report.add("honest signing by exposed users")
    corpus = []
    for i in users:
        alpha, _ = s.usk_oracle(i)
        for _ in range(3):
            nk = ngs.random_nick(s.state.mpk[i], rng)
            m = rng.randbytes(16)
            sigma = ngs.sign(nk, alpha, m, rng)
            corpus.append((nk, m, sigma))
            honest.attempts += 1
            honest.wins += wins(nk, m, sigma)

    tamper = report.add("single-component tamper")
    for _ in range(trials):
        nk, m, sigma = rng.choice(corpus)
        _, nk2, m2, sigma2 = _mutate_signed(nk, m, sigma, rng)
        tamper.attempts += 1
        tamper.wins += wins(nk2, m2, sigma2)

    rogue = report.add("corrupt join with mauled request")
    for k in range(8):
        i = 100 + k
        keys = ds_keygen(i, rng)
        s.crpt_u(i, keys.upk)
        _, req = ngs.join(keys.usk, s.opk, rng)
        req = ngs.JoinRequest(req.f, req.w * CONTEXT.g, req.enc_trapdoor, req.pi_j, req.sigma_ds)
        rogue.attempts += 1
        try:
            s.snd_to_i(i, req)
            rogue.wins += 1
        except ngs.IssueRejected:
            pass

    uncert = report.add("uncertified class with own exponent")
    for _ in range(max(10, trials // 50)):
        a = random_scalar(rng, nonzero=True)
        u = CONTEXT.g ** random_scalar(rng, nonzero=True)
        nk = ngs.Nickname(u, CONTEXT.g ** random_scalar(rng, nonzero=True), u**a)
        m = rng.randbytes(8)
        sigma = ngs.sign(nk, a, m, rng)
        uncert.attempts += 1
        uncert.wins += wins(nk, m, sigma)
    return report


def _sanity_nf(seed, trials, rng) -> SanityReport:
    s = OracleSession(rng)
    report = SanityReport("nf", seed)
    target, helper = 0, 1
    for i in (target, helper):
        s.snd_to_u(i)
        s.issue(i)
    alpha_h, _ = s.usk_oracle(helper)
    tau_t = s.L_h[target]

    def wins(nk, m, sigma, i_star, proof):
        if not (ngs.gvf(s.ipk, nk) and ngs.uvf(nk, m, sigma)):
            return False
        if i_star != target or target in s.L_sk:
            return False
        if any(e[0] == target and e[1] == bytes(m) and e[2] == bytes(nk) for e in s.L_sigma):
            return False
        judged = proof is not None and ngs.judge(nk, i_star, s.ipk, proof, s.state.upk)
        return judged or ngs.trace(s.ipk, tau_t, nk)

    signed = []
    for _ in range(4):
        nk = ngs.random_nick(s.state.mpk[target], rng)
        assert s.trace(target, nk)
        m = rng.randbytes(12)
        signed.append((nk, m, s.sig(target, nk, m)))

    replay = report.add("replay of oracle signatures")
    for nk, m, sigma in signed:
        replay.attempts += 1
        replay.wins += wins(nk, m, sigma, target, None)

    tamper = report.add("tamper oracle signatures")
    for _ in range(trials):
        nk, m, sigma = rng.choice(signed)
        _, nk2, m2, sigma2 = _mutate_signed(nk, m, sigma, rng)
        tamper.attempts += 1
        tamper.wins += wins(nk2, m2, sigma2, target, None)

    crafted = report.add("isk-crafted nickname with transplanted registration")
    reg_t = s.state.reg[target]
    for _ in range(max(10, trials // 50)):
        a = random_scalar(rng, nonzero=True)
        u = CONTEXT.g ** random_scalar(rng, nonzero=True)
        w = u**a
        nk = ngs.Nickname(u, u.pow2(s.issuer.x, w, s.issuer.y), w)
        m = rng.randbytes(8)
        sigma = ngs.sign(nk, a, m, rng)
        pi = _prove_g2(nk.u, nk.w, CONTEXT.g, reg_t.rho, CONTEXT.g_hat**a, rng, b"")
        crafted.attempts += 1
        crafted.wins += wins(nk, m, sigma, target, ngs.OpeningProof(reg_t.rho, reg_t.sigma_ds, pi))

    cross = report.add("helper-signed nickname accused on target")
    for _ in range(max(10, trials // 50)):
        nk = ngs.random_nick(s.state.mpk[helper], rng)
        m = rng.randbytes(8)
        sigma = ngs.sign(nk, alpha_h, m, rng)
        _, proof = ngs.open_nickname(s.opener, nk, s.state, rng)
        cross.attempts += 1
        cross.wins += wins(nk, m, sigma, target, proof)
    return report


def _opened_corpus(s, users, per_user, rng):
    out = []
    for i in users:
        for _ in range(per_user):
            nk = ngs.random_nick(s.state.mpk[i], rng)
            j, proof = ngs.open_nickname(s.opener, nk, s.state, rng)
            out.append((i, nk, proof))
    return out


def _sanity_os(seed, trials, rng) -> SanityReport:
    s = OracleSession(rng)
    report = SanityReport("os", seed)
    users = _populate(s, 5)
    corpus = _opened_corpus(s, users, 2, rng)

    def wins(nk, i0, p0, i1, p1):
        return (
            i0 != i1
            and ngs.gvf(s.ipk, nk)
            and ngs.judge(nk, i0, s.ipk, p0, s.state.upk)
            and ngs.judge(nk, i1, s.ipk, p1, s.state.upk)
        )

    transplant = report.add("proof transplanted to other identities")
    for i, nk, proof in corpus:
        for j in users:
            if j != i:
                transplant.attempts += 1
                transplant.wins += wins(nk, i, proof, j, proof)

    rebuilt = report.add("proof rebuilt from another registration entry")
    for i, nk, proof in corpus:
        j = rng.choice([u for u in users if u != i])
        reg_j = s.rreg(j)
        tau_i = s.state.reg[i].enc_trapdoor.decrypt(s.opener.z)
        pi = _prove_g2(nk.u, nk.w, CONTEXT.g, reg_j.rho, tau_i, rng, b"")
        rebuilt.attempts += 1
        rebuilt.wins += wins(nk, i, proof, j, ngs.OpeningProof(reg_j.rho, reg_j.sigma_ds, pi))

    swapped = report.add("mixed components across two proofs")
    for _ in range(max(10, trials // 20)):
        (i, nk, p_i), (j, _, p_j) = rng.sample(corpus, 2)
        if i == j:
            continue
        forged = ngs.OpeningProof(p_j.rho, p_j.sigma_ds, p_i.pi_o)
        swapped.attempts += 1
        swapped.wins += wins(nk, i, p_i, j, forged)
    return report


def _sanity_oc(seed, trials, rng) -> SanityReport:
    s = OracleSession(rng)
    report = SanityReport("oc", seed)
    users = _populate(s, 5)
    corpus = _opened_corpus(s, users, 2, rng)

    def wins(nk, i_star, proof):
        if not ngs.gvf(s.ipk, nk) or not ngs.judge(nk, i_star, s.ipk, proof, s.state.upk):
            return False
        return any(i != i_star and ngs.trace(s.ipk, tau, nk) for i, tau in s.L_h.items())

    honest = report.add("honest openings")
    for i, nk, proof in corpus:
        honest.attempts += 1
        honest.wins += wins(nk, i, proof)

    accuse = report.add("accuse a different identity")
    for i, nk, proof in corpus:
        for j in users:
            if j != i:
                accuse.attempts += 1
                accuse.wins += wins(nk, j, proof)

    forged = report.add("opening proof built with the wrong trapdoor")
    for i, nk, _ in corpus:
        j = rng.choice([u for u in users if u != i])
        reg_j = s.rreg(j)
        tau_j = reg_j.enc_trapdoor.decrypt(s.opener.z)
        pi = _prove_g2(nk.u, nk.w, CONTEXT.g, reg_j.rho, tau_j, rng, b"")
        forged.attempts += 1
        forged.wins += wins(nk, j, ngs.OpeningProof(reg_j.rho, reg_j.sigma_ds, pi))
    return report


def _distinguishers(session, i0, i1):
    mpk0, mpk1 = session.state.mpk[i0], session.state.mpk[i1]

    def parity(nk, sigma):
        return bytes(nk.u)[-1] & 1

    def byte_compare(nk, sigma):
        return int(bytes(nk.u)[1] > bytes(mpk0.u)[1])

    def flag_match(nk, sigma):
        # compare the compressed-sign flags against the two master keys
        score0 = sum((bytes(a)[0] >> 7) == (bytes(b)[0] >> 7) for a, b in zip((nk.u, nk.v, nk.w), (mpk0.u, mpk0.v, mpk0.w)))
        score1 = sum((bytes(a)[0] >> 7) == (bytes(b)[0] >> 7) for a, b in zip((nk.u, nk.v, nk.w), (mpk1.u, mpk1.v, mpk1.w)))
        return int(score1 > score0) if score0 != score1 else bytes(nk.w)[-1] & 1

    def challenge_parity(nk, sigma):
        return sigma.challenge & 1

    return {"u-parity": parity, "byte-compare": byte_compare, "flag-match": flag_match, "challenge-parity": challenge_parity}


def _sanity_anon(seed, trials, rng) -> SanityReport:
    s = OracleSession(rng)
    report = SanityReport("anon", seed)
    i0, i1, spare = 0, 1, 2
    for i in (i0, i1, spare):
        s.snd_to_u(i)
        s.issue(i)

    guards = report.add("oracle guards around the challenge", note="wins count unguarded leaks")
    guards.attempts += 1
    s.usk_oracle(spare)
    try:
        s.ch(0, i0, spare, b"m")
        guards.wins += 1
    except Refused:
        pass
    probe = ngs.random_nick(s.state.mpk[i0], rng)

    distinguishers = _distinguishers(s, i0, i1)
    correct = {name: 0 for name in distinguishers}
    taus = (s.L_h[i0], s.L_h[i1])
    control = 0
    for _ in range(trials):
        b = rng.randrange(2)
        nk, sigma = s.ch(b, i0, i1, rng.randbytes(8))
        for name, guess in distinguishers.items():
            correct[name] += guess(nk, sigma) == b
        # control: a distinguisher that is handed the trapdoor
        control += int(ngs._in_class(taus[1], nk)) == b

    guards.attempts += 1
    try:
        s.usk_oracle(i0)
        guards.wins += 1
    except Refused:
        pass
    guards.attempts += 1
    s.trace(spare, probe)
    try:
        s.ch(0, spare, i1, b"m")
        guards.wins += 1
    except Refused:
        pass

    for name, hits in correct.items():
        score = hits / trials
        out = report.add(f"distinguisher {name}", note=f"score {score:.4f}")
        out.attempts = trials
        # outside the three-sigma band counts as an advantage
        out.wins = int(abs(score - 0.5) > 0.05)
        report.metrics[f"score[{name}]"] = round(score, 4)
    report.metrics["score[trapdoor control]"] = round(control / trials, 4)
    return report


_RUNNERS = {"trace": _sanity_trace, "nf": _sanity_nf, "os": _sanity_os, "oc": _sanity_oc, "anon": _sanity_anon}


def run_experiment_sanity(name: str, seed: int, trials: int = 1000) -> SanityReport:
    if name not in _RUNNERS:
        raise ValueError(f"unknown experiment {name!r}; expected one of {', '.join(EXPERIMENTS)}")
    return _RUNNERS[name](seed, trials, random.Random(seed))


__all__ = [
    "EXPERIMENTS",
    "OracleSession",
    "Refused",
    "SanityReport",
    "correctness_sweep",
    "run_correctness",
    "run_experiment_sanity",
]
