"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
Every threshold below is fixed by the acceptance criteria; none is tuned to the implementation.
"""

import contextlib
import hashlib
import io
import itertools
import random
import sys
import tempfile
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import build_group  # noqa: E402

from nicknames import harness, ngs, nickhat  # noqa: E402
from nicknames.algebra import CONTEXT, ORDER, DecodeError, count_ops, hash_to_g1, pairing  # noqa: E402
from nicknames.ds import DsSignature, ds_keygen, ds_sign, ds_verify  # noqa: E402
from nicknames.nickhat import ESCROW, Address, LedgerRejection, TransferRequest, make_request, sign_request  # noqa: E402
from nicknames.sigma import TAG_PKJ, TAG_PKO, TAG_SPKS, LinearRelation, SpkProof, commit, extract_witness, respond, satisfies  # noqa: E402

g, g_hat = CONTEXT.g, CONTEXT.g_hat


# ---------------------------------------------------------------- 1. correctness


def check_correctness():
    start = time.perf_counter()
    failures = 0
    for seed in range(100):
        rng = random.Random(seed)
        messages = [rng.randbytes(rng.randrange(0, 64)) for _ in range(5)]
        failures += sum(not ok for ok in harness.correctness_sweep(seed, 5, messages))
    elapsed = time.perf_counter() - start
    return failures == 0 and elapsed < 60, f"{500 - failures}/500 runs true in {elapsed:.1f}s (limit 60s)"


# ---------------------------------------------------------------- 2. operation counts


def check_op_counts():
    group = build_group(2, seed=7)
    rng = random.Random(8)
    ledger = nickhat.deploy(group.ipk)
    alice = Address.of("alice")
    ledger.mint(alice, "USD", 10)
    ledger.approve(alice, ESCROW, "USD", 10)
    source = ngs.random_nick(group.state.mpk[0], rng)
    ledger.deposit(alice, "USD", 10, source)

    mpk = group.state.mpk[0]
    with count_ops() as signer:
        nk = ngs.nick(mpk, ngs.random_scalar(rng, nonzero=True))
        sigma = ngs.sign(nk, group.secrets[0].alpha, b"transfer", rng)
    with count_ops() as verifier:
        ok = ngs.gvf(group.ipk, nk) and ngs.uvf(nk, b"transfer", sigma)

    # the same numbers through the forwarder: the source is already announced, the target is fresh
    target = ngs.random_nick(group.state.mpk[1], rng)
    req = make_request(ledger, "transfer", source, target=target, token="USD", amount=4)
    with count_ops() as request_sign:
        sigma = sign_request(req, group.secrets[0].alpha, rng)
    with count_ops() as forwarder:
        ledger.execute(req, sigma)

    expect_verify = {"g1_exp": 2, "g2_exp": 0, "gt_exp": 0, "pairings": 3, "hash_to_g1": 0}
    passed = (
        ok
        and signer.as_dict() == {"g1_exp": 4, "g2_exp": 0, "gt_exp": 0, "pairings": 0, "hash_to_g1": 0}
        and verifier.as_dict() == expect_verify
        and forwarder.as_dict() == expect_verify
        and request_sign.g1_exp == 1
    )
    detail = f"nick+sign {signer.as_dict()}; gvf+uvf {verifier.as_dict()}; execute {forwarder.as_dict()}"
    return passed, detail


# ---------------------------------------------------------------- 3. trace vs brute-force class membership


def check_trace_bruteforce():
    rng = random.Random(3)
    x, y = 11, 13
    ipk = ngs.IssuerPublicKey(g_hat**x, g_hat**y)
    alphas = [2, 3, 5, 7, 11]  # member secrets
    outsider_alphas = [4, 6]
    small_r = range(1, 11)

    def certified(u, w):
        return ngs.Nickname(u, u.pow2(x, w, y), w)

    mpks = [certified(g, g**a) for a in alphas]
    taus = [g_hat**a for a in alphas]
    classes = [{bytes(ngs.nick(mpk, r)) for r in small_r} for mpk in mpks]

    # nicknames built straight from small exponents, not through nick()
    pool = []
    for a in alphas + outsider_alphas:
        for c in small_r:
            u = g**c
            pool.append(certified(u, u**a))
    for a in alphas:
        u = g**rng.choice(small_r)
        good = certified(u, u**a)
        pool.append(ngs.Nickname(good.u, good.v * g, good.w))  # certificate broken

    mismatches = cases = 0
    while cases < 1000:
        nk = rng.choice(pool)
        i = rng.randrange(len(alphas))
        brute = bytes(nk) in classes[i]
        mismatches += ngs.trace(ipk, taus[i], nk) != brute
        cases += 1
    return mismatches == 0, f"{cases - mismatches}/{cases} cases agree"


# ---------------------------------------------------------------- 4. tamper suite


def _g1_tweak(p, rng):
    return p * g ** rng.randrange(1, 1000)


def _g2_tweak(p, rng):
    return p * g_hat ** rng.randrange(1, 1000)


def _scalar_tweak(v, rng):
    return (v + rng.randrange(1, ORDER)) % ORDER


def _flip(data, rng):
    data = bytearray(data)
    bit = rng.randrange(len(data) * 8)
    data[bit // 8] ^= 1 << (bit % 8)
    return bytes(data)


def _proof_tweak(proof, rng):
    choice = rng.randrange(4)
    if choice == 0:
        return SpkProof(_scalar_tweak(proof.challenge, rng), proof.responses, proof.domain_tag)
    if choice == 1:
        k = rng.randrange(len(proof.responses))
        rs = list(proof.responses)
        rs[k] = _scalar_tweak(rs[k], rng) if isinstance(rs[k], int) else _g2_tweak(rs[k], rng)
        return SpkProof(proof.challenge, tuple(rs), proof.domain_tag)
    if choice == 2:
        other = [t for t in (TAG_PKJ, TAG_PKO, TAG_SPKS) if t != proof.domain_tag]
        return SpkProof(proof.challenge, proof.responses, rng.choice(other))
    return SpkProof.from_bytes(_flip(proof.to_bytes(), rng))


def _ds_tweak(sig, rng):
    choice = rng.randrange(4)
    if choice == 0:
        return DsSignature(sig.scheme_id, _scalar_tweak(sig.challenge, rng), sig.response)
    if choice == 1:
        return DsSignature(sig.scheme_id, sig.challenge, _scalar_tweak(sig.response, rng))
    if choice == 2:
        return DsSignature(rng.choice([0, 2, 7, 255]), sig.challenge, sig.response)
    return DsSignature.from_bytes(_flip(sig.to_bytes(), rng))


def _tamper_join(group, rng):
    i = rng.randrange(len(group.requests))
    req = group.requests[i]
    enc = req.enc_trapdoor
    comp = rng.choice(["f", "w", "S_hat", "f_prime", "pi_j", "sigma_ds"])
    if comp == "f":
        bad = ngs.JoinRequest(_g1_tweak(req.f, rng), req.w, enc, req.pi_j, req.sigma_ds)
    elif comp == "w":
        bad = ngs.JoinRequest(req.f, _g1_tweak(req.w, rng), enc, req.pi_j, req.sigma_ds)
    elif comp == "S_hat":
        bad = ngs.JoinRequest(req.f, req.w, ngs.EncryptedTrapdoor(_g2_tweak(enc.S_hat, rng), enc.f_prime), req.pi_j, req.sigma_ds)
    elif comp == "f_prime":
        bad = ngs.JoinRequest(req.f, req.w, ngs.EncryptedTrapdoor(enc.S_hat, _g2_tweak(enc.f_prime, rng)), req.pi_j, req.sigma_ds)
    elif comp == "pi_j":
        bad = ngs.JoinRequest(req.f, req.w, enc, _proof_tweak(req.pi_j, rng), req.sigma_ds)
    else:
        bad = ngs.JoinRequest(req.f, req.w, enc, req.pi_j, _ds_tweak(req.sigma_ds, rng))
    state = ngs.GroupState()
    state.upk = dict(group.state.upk)
    try:
        ngs.iss(i, group.issuer, bad, group.opk, state)
    except ngs.IssueRejected:
        return "join", False
    return "join", True


def _tamper_nickname(group, rng):
    nk = ngs.random_nick(group.state.mpk[rng.randrange(len(group.state.mpk))], rng)
    parts = [nk.u, nk.v, nk.w]
    k = rng.randrange(3)
    if rng.random() < 0.5:
        parts[k] = _g1_tweak(parts[k], rng)
        bad = ngs.Nickname(*parts)
    else:
        raw = bytes(nk)
        bad = ngs.Nickname.from_bytes(raw[: 32 * k] + _flip(raw[32 * k: 32 * k + 32], rng) + raw[32 * k + 32:])
    return "nickname", ngs.gvf(group.ipk, bad)


def _tamper_spk(group, rng, corpus):
    nk, m, sigma = rng.choice(corpus)
    if rng.random() < 0.8:
        return "spk", ngs.uvf(nk, m, _proof_tweak(sigma, rng))
    # the signed context is a component too
    if rng.random() < 0.5:
        return "spk", ngs.uvf(nk, _flip(m, rng), sigma)
    return "spk", ngs.uvf(ngs.Nickname(nk.u, _g1_tweak(nk.v, rng), nk.w), m, sigma)


def _tamper_ds(keys, rng):
    m = rng.randbytes(24)
    sig = ds_sign(keys.usk, m, rng)
    return "ds", ds_verify(keys.upk, m, _ds_tweak(sig, rng))


def _tamper_opening(group, rng, corpus):
    nk, i, proof = rng.choice(corpus)
    comp = rng.choice(["rho", "sigma_ds", "pi_o", "pi_o"])
    if comp == "rho":
        bad = ngs.OpeningProof(proof.rho * pairing(g ** rng.randrange(1, 50), g_hat), proof.sigma_ds, proof.pi_o)
    elif comp == "sigma_ds":
        bad = ngs.OpeningProof(proof.rho, _ds_tweak(proof.sigma_ds, rng), proof.pi_o)
    else:
        bad = ngs.OpeningProof(proof.rho, proof.sigma_ds, _proof_tweak(proof.pi_o, rng))
    return "opening", ngs.judge(nk, i, group.ipk, bad, group.state.upk)


def _tamper_request(ledger, rng, signed, nicks):
    req, sigma = signed
    doc = req.to_dict()
    comp = rng.choice(["amount", "token", "target", "nonce", "kind", "source", "sigma"])
    if comp == "sigma":
        bad_req, bad_sigma = req, _proof_tweak(sigma, rng)
    else:
        params = dict(doc["params"])
        if comp == "amount":
            params["amount"] = params["amount"] + rng.randrange(1, 5)
        elif comp == "token":
            params["token"] = rng.choice(["EUR", "USDC", "usd"])
        elif comp == "target":
            params["target"] = rng.choice(nicks).hex()
        if comp == "nonce":
            doc = dict(doc, nonce=doc["nonce"] + rng.randrange(1, 3))
        elif comp == "kind":
            doc = dict(doc, kind="withdraw")
            params = {"to": Address.of("mallory").hex(), "token": params["token"], "amount": params["amount"]}
        elif comp == "source":
            doc = dict(doc, source=rng.choice(nicks).hex())
        bad_req, bad_sigma = TransferRequest.from_dict(dict(doc, params=params)), sigma
    if bad_req == req and bad_sigma == sigma:
        return "request", None
    before = ledger.snapshot_bytes()
    try:
        ledger.execute(bad_req, bad_sigma)
    except LedgerRejection:
        assert ledger.snapshot_bytes() == before
        return "request", False
    return "request", True


def check_tamper_suite():
    rng = random.Random(4)
    group = build_group(4, seed=40)
    ds_keys = ds_keygen(0, rng)
    spk_corpus = []
    for _ in range(10):
        i = rng.randrange(4)
        nk = ngs.random_nick(group.state.mpk[i], rng)
        m = rng.randbytes(16)
        spk_corpus.append((nk, m, ngs.sign(nk, group.secrets[i].alpha, m, rng)))
    open_corpus = []
    for _ in range(6):
        nk = ngs.random_nick(group.state.mpk[rng.randrange(4)], rng)
        i, proof = ngs.open_nickname(group.opener, nk, group.state, rng)
        open_corpus.append((nk, i, proof))

    ledger = nickhat.deploy(group.ipk)
    alice = Address.of("alice")
    ledger.mint(alice, "USD", 1000)
    ledger.approve(alice, ESCROW, "USD", 1000)
    source = ngs.random_nick(group.state.mpk[0], rng)
    ledger.deposit(alice, "USD", 1000, source)
    nicks = [ngs.random_nick(group.state.mpk[j], rng) for j in range(4) for _ in range(2)]
    req = make_request(ledger, "transfer", source, target=nicks[3], token="USD", amount=7)
    signed = (req, sign_request(req, group.secrets[0].alpha, rng))

    makers = {
        "JoinRequest/iss": lambda: _tamper_join(group, rng),
        "Nickname/gvf": lambda: _tamper_nickname(group, rng),
        "SpkProof/uvf": lambda: _tamper_spk(group, rng, spk_corpus),
        "DsSignature/ds_verify": lambda: _tamper_ds(ds_keys, rng),
        "OpeningProof/judge": lambda: _tamper_opening(group, rng, open_corpus),
        "TransferRequest/execute": lambda: _tamper_request(ledger, rng, signed, nicks),
    }
    names = list(makers)
    per_kind = {name: 0 for name in names}
    undecodable = 0
    false_accepts = 0
    total = 0
    while total < 1200:
        name = names[total % len(names)]
        try:
            _, accepted = makers[name]()
        except (DecodeError, ValueError, TypeError):
            accepted = False  # the mutation did not survive decoding, which is a rejection
            undecodable += 1
        if accepted is None:
            continue
        total += 1
        per_kind[name] += 1
        false_accepts += bool(accepted)
    # the untampered request still executes afterwards
    ledger.execute(*signed)
    summary = ", ".join(f"{k} {v}" for k, v in per_kind.items()) + f"; {undecodable} rejected at decoding"
    return false_accepts == 0 and total >= 1000, f"{total} mutations, {false_accepts} false accepts ({summary})"


# ---------------------------------------------------------------- 5. extractor


def _fork(statement, witness, rng):
    nonces, comms = commit(statement, rng)
    c1 = rng.randrange(ORDER)
    c2 = rng.randrange(ORDER)
    while c2 == c1:
        c2 = rng.randrange(ORDER)
    return extract_witness(statement, (comms, c1, respond(nonces, witness, c1)), (comms, c2, respond(nonces, witness, c2)))


def check_extractor():
    rng = random.Random(5)
    group = build_group(1, seed=50)
    opk = group.opk
    ok = {"dlog/ds": 0, "pkj": 0, "spks": 0}
    for _ in range(100):
        x = ngs.random_scalar(rng, nonzero=True)
        statement = [LinearRelation(g**x, (g,), (0,))]
        got = _fork(statement, [x], rng)
        ok["dlog/ds"] += got == [x] and satisfies(statement, got)

        alpha, s = ngs.random_scalar(rng, nonzero=True), ngs.random_scalar(rng, nonzero=True)
        f = g**alpha
        u = hash_to_g1(bytes(f))
        enc = ngs.EncryptedTrapdoor(g_hat**s, g_hat**alpha * opk**s)
        statement = ngs._pkj_statement(f, u**alpha, u, enc, opk)
        got = _fork(statement, [alpha, s], rng)
        ok["pkj"] += got == [alpha, s] and satisfies(statement, got)

        nk = ngs.random_nick(group.state.mpk[0], rng)
        statement, _ = ngs._spks(nk, rng.randbytes(8))
        alpha = group.secrets[0].alpha
        got = _fork(statement, [alpha], rng)
        ok["spks"] += got == [alpha] and satisfies(statement, got)
    return all(v == 100 for v in ok.values()), ", ".join(f"{k} {v}/100" for k, v in ok.items())


# ---------------------------------------------------------------- 6. open / judge


def check_open_judge():
    rng = random.Random(6)
    group = build_group(20, seed=60)
    opened_right = judged = transplant_rejected = transplants = 0
    for i in range(20):
        for _ in range(10):
            nk = ngs.random_nick(group.state.mpk[i], rng)
            found, proof = ngs.open_nickname(group.opener, nk, group.state, rng)
            opened_right += found == i
            judged += ngs.judge(nk, found, group.ipk, proof, group.state.upk)
            for j in range(20):
                if j != i:
                    transplants += 1
                    transplant_rejected += not ngs.judge(nk, j, group.ipk, proof, group.state.upk)
    passed = opened_right == 200 and judged == 200 and transplants == 3800 and transplant_rejected == 3800
    return passed, f"opened {opened_right}/200, judged {judged}/200, transplants rejected {transplant_rejected}/{transplants}"


# ---------------------------------------------------------------- 7. anonymity


def check_anonymity():
    report = harness.run_experiment_sanity("anon", seed=7, trials=2000)
    scores = {k: v for k, v in report.metrics.items() if k != "score[trapdoor control]"}
    inside = all(0.45 <= v <= 0.55 for v in scores.values())
    detail = ", ".join(f"{k[6:-1]} {v:.4f}" for k, v in scores.items())
    return inside and bool(scores), f"{detail}; trapdoor control {report.metrics['score[trapdoor control]']:.2f}"


# ---------------------------------------------------------------- 8. ledger conservation


class _LedgerFuzzer:
    TOKENS = ("USD", "EUR")

    def __init__(self, seed):
        self.rng = random.Random(seed)
        self.group = build_group(5, seed=seed)
        self.ledger = nickhat.deploy(self.group.ipk)
        self.addresses = [Address.of(f"user-{k}") for k in range(4)]
        self.owner = {}
        self.nicks = []
        for i in range(5):
            for _ in range(3):
                nk = ngs.random_nick(self.group.state.mpk[i], self.rng)
                self.owner[nk.hex()] = i
                self.nicks.append(nk)
        self.minted = {t: 0 for t in self.TOKENS}
        self.locks = []
        self.accepted = []
        self.stats = {"accepted": 0, "rejected": 0}

    def amount(self, cap):
        return self.rng.randrange(1, max(2, cap * 2 + 2))

    def signed(self, kind, source, **params):
        req = make_request(self.ledger, kind, source, **params)
        return req, sign_request(req, self.group.secrets[self.owner[source.hex()]].alpha, self.rng)

    def step(self):
        r, L = self.rng, self.ledger
        token = r.choice(self.TOKENS)
        addr = r.choice(self.addresses)
        funded = [n for n in self.nicks if L.balance(n, token) > 0]
        nk = r.choice(funded) if funded and r.random() < 0.7 else r.choice(self.nicks)
        op = r.choices(
            ["mint", "approve", "deposit", "transfer", "withdraw", "happrove", "lock", "claim", "refund", "advance", "forge", "replay"],
            [4, 8, 14, 22, 10, 6, 8, 7, 7, 3, 6, 5],
        )[0]
        if op == "mint":
            n = r.randrange(1, 500)
            return lambda: (L.mint(addr, token, n), self.minted.__setitem__(token, self.minted[token] + n))
        if op == "approve":
            return lambda: L.approve(addr, ESCROW, token, r.randrange(0, 400))
        if op == "deposit":
            return lambda: L.deposit(addr, token, self.amount(L.balance(addr, token) // 2), nk)
        if op == "advance":
            return lambda: L.advance(r.randrange(1, 4))
        if op in ("transfer", "withdraw", "happrove", "lock"):
            cap = L.balance(nk, token)
            if op == "transfer":
                call = self.signed("transfer", nk, target=r.choice(self.nicks), token=token, amount=self.amount(cap // 2))
            elif op == "withdraw":
                call = self.signed("withdraw", nk, to=addr, token=token, amount=self.amount(cap // 2))
            elif op == "happrove":
                call = self.signed("approve", nk, spender="htlc", token=token, amount=r.randrange(0, cap + 5))
            else:
                preimage = r.randbytes(8)
                recipient = r.choice(self.nicks)
                call = self.signed(
                    "lock", nk, recipient=recipient, token=token, amount=self.amount(cap // 2),
                    hashlock=hashlib.sha256(preimage).digest(), timelock=L.block_height + r.randrange(-1, 6),
                )

                def lock_call():
                    lock_id = L.execute(*call)
                    self.locks.append((lock_id, preimage, nk, recipient))
                    self.accepted.append(call)

                return lock_call
            return lambda: (L.execute(*call), self.accepted.append(call))
        if op in ("claim", "refund"):
            if not self.locks:
                return None
            lock_id, preimage, sender, recipient = r.choice(self.locks)
            if op == "claim":
                pre = preimage if r.random() < 0.7 else r.randbytes(8)
                call = self.signed("claim", recipient, lock_id=lock_id, preimage=pre)
            else:
                call = self.signed("refund", sender, lock_id=lock_id)
            return lambda: (L.execute(*call), self.accepted.append(call))
        if op == "forge":
            req = make_request(L, "withdraw", nk, to=addr, token=token, amount=1)
            other = next(o for o in self.nicks if self.owner[o.hex()] != self.owner[nk.hex()])
            forged = ngs.sign(other, self.group.secrets[self.owner[other.hex()]].alpha, req.canonical(), r)
            return lambda: L.execute(req, forged)
        if not self.accepted:
            return None
        call = r.choice(self.accepted)
        return lambda: L.execute(*call)

    def run(self, ops):
        done = 0
        while done < ops:
            action = self.step()
            if action is None:
                continue
            done += 1
            before = self.ledger.snapshot_bytes()
            try:
                action()
                self.stats["accepted"] += 1
            except LedgerRejection:
                self.stats["rejected"] += 1
                if self.ledger.snapshot_bytes() != before:
                    return False, "a rejected operation changed the ledger"
            try:
                self.ledger.check_invariants()
            except AssertionError as exc:
                return False, str(exc)
            for t in self.TOKENS:
                if self.ledger.circulating(t) != self.minted[t]:
                    return False, f"{t} supply drifted"
        return True, ""


def check_conservation():
    fuzz = _LedgerFuzzer(8)
    ok, why = fuzz.run(1000)
    st = fuzz.stats
    states = {}
    for lock in fuzz.ledger.htlc_locks.values():
        states[lock.state] = states.get(lock.state, 0) + 1
    detail = f"1000 ops, {st['accepted']} accepted, {st['rejected']} rejected, locks {states}"
    return ok, detail + (f"; {why}" if why else "")


# ---------------------------------------------------------------- 9. htlc small model


ACTIONS = ("claim-correct", "claim-wrong", "refund-early", "refund-late")


def _htlc_base():
    rng = random.Random(9)
    group = build_group(2, seed=90)
    ledger = nickhat.deploy(group.ipk)
    alice = Address.of("alice")
    ledger.mint(alice, "USD", 50)
    ledger.approve(alice, ESCROW, "USD", 50)
    sender = ngs.random_nick(group.state.mpk[0], rng)
    recipient = ngs.random_nick(group.state.mpk[1], rng)
    ledger.deposit(alice, "USD", 50, sender)
    req = make_request(ledger, "approve", sender, spender="htlc", token="USD", amount=30)
    ledger.execute(req, sign_request(req, group.secrets[0].alpha, rng))
    preimage = b"open sesame"
    req = make_request(
        ledger, "lock", sender, recipient=recipient, token="USD", amount=30,
        hashlock=hashlib.sha256(preimage).digest(), timelock=ledger.block_height + 2,
    )
    lock_id = ledger.htlc_lock(req, sign_request(req, group.secrets[0].alpha, rng))
    return group, ledger, sender, recipient, lock_id, preimage


def _model(seq, height, timelock):
    """Reference state machine written independently of the ledger."""
    state = "open"
    for action in seq:
        if action == "refund-late":
            height = max(height, timelock + 1)
        if state != "open":
            continue
        if action == "claim-correct":
            state, height = "claimed", height + 1
        elif action in ("refund-early", "refund-late") and height > timelock:
            state, height = "refunded", height + 1
    return state


def check_htlc():
    group, base, sender, recipient, lock_id, preimage = _htlc_base()
    rng = random.Random(91)
    alpha_s, alpha_r = group.secrets[0].alpha, group.secrets[1].alpha
    timelock = base.htlc_locks[lock_id].timelock
    sequences = [seq for n in range(1, 5) for seq in itertools.product(ACTIONS, repeat=n)]
    permutations = set(itertools.permutations(ACTIONS))
    bad = []
    full_perm_single_credit = 0
    for seq in sequences:
        ledger = base.copy()
        credits = 0
        for action in seq:
            if action == "refund-late" and ledger.block_height <= timelock:
                ledger.advance(timelock + 1 - ledger.block_height)
            if action.startswith("claim"):
                pre = preimage if action == "claim-correct" else preimage + b"?"
                req = make_request(ledger, "claim", recipient, lock_id=lock_id, preimage=pre)
                sigma = sign_request(req, alpha_r, rng)
            else:
                req = make_request(ledger, "refund", sender, lock_id=lock_id)
                sigma = sign_request(req, alpha_s, rng)
            before = ledger.snapshot_bytes()
            try:
                ledger.execute(req, sigma)
                credits += 1
            except LedgerRejection:
                if ledger.snapshot_bytes() != before:
                    bad.append((seq, "rejection mutated state"))
            ledger.check_invariants()
        state = ledger.htlc_locks[lock_id].state
        expected = _model(seq, base.block_height, timelock)
        terminal = expected != "open"
        payout = (ledger.balance(recipient, "USD"), ledger.balance(sender, "USD"))
        want_payout = {"open": (0, 20), "claimed": (30, 20), "refunded": (0, 50)}[expected]
        if state != expected or credits != int(terminal) or payout != want_payout:
            bad.append((seq, state, expected, credits, payout))
        if seq in permutations and credits == 1:
            full_perm_single_credit += 1
    detail = f"{len(sequences)} sequences, {full_perm_single_credit}/24 full interleavings credit exactly once"
    return not bad and full_perm_single_credit == 24, detail + (f"; first mismatch {bad[0]}" if bad else "")


# ---------------------------------------------------------------- 10. cli determinism


def check_cli_determinism():
    from test_cli import GOLDEN, run, tree

    trees = []
    for _ in range(2):
        with tempfile.TemporaryDirectory() as tmp, contextlib.redirect_stdout(io.StringIO()):
            tmp = Path(tmp)
            codes = [run(tmp, *argv) for argv in GOLDEN]
            if any(codes):
                return False, f"golden scenario exit codes {codes}"
            trees.append(tree(tmp))
    same = trees[0] == trees[1]
    return same, f"{len(trees[0])} files, {'byte-identical' if same else 'different'}"


# ---------------------------------------------------------------- runner


CRITERIA = {
    1: ("correctness experiment, 100 seeds x 5 users", check_correctness),
    2: ("operation counts on the transfer path", check_op_counts),
    3: ("trace equals brute-force class membership", check_trace_bruteforce),
    4: ("tamper suite, zero false accepts", check_tamper_suite),
    5: ("extractor on forked transcripts", check_extractor),
    6: ("open/judge round trip and transplants", check_open_judge),
    7: ("anonymity distinguishers within 0.5 +/- 0.05", check_anonymity),
    8: ("ledger conservation and transactionality", check_conservation),
    9: ("htlc small-model interleavings", check_htlc),
    10: ("cli determinism under --seed 42", check_cli_determinism),
}


def evaluate(number):
    title, fn = CRITERIA[number]
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure of the criterion, reported like any other
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    return ok, f"{'PASS' if ok else 'FAIL'} [{number}] {title}: {detail} [{elapsed:.1f}s]"


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    ok, line = evaluate(number)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(n) for n in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
