"""Command-line front end with file-based state.

Layout of ``<state-dir>/<group>/``::

    group.json              public group state (registration table, mpk, upk)
    public/ipk.json         issuer public key
    public/opk.json         opener public key
    secrets/issuer.json     issuer secret key            (mode 600)
    secrets/opener.json     opener secret key            (mode 600)
    secrets/user-<i>.json   user signing key pair        (mode 600)
    secrets/member-<i>.json member secret (alpha, tau)   (mode 600)
    requests/join-<i>.json  join request handed to the issuer
    ledger.json             NickHat ledger snapshot
    rng.json                invocation counter used with --seed

Exit codes: 0 success, 1 verification returned false or a ledger call was
rejected, 2 usage error, 3 integrity error in stored state.
"""

from __future__ import annotations

import argparse
import contextlib
import hashlib
import json
import os
import random
import shlex
import sys
from pathlib import Path

from . import harness, ngs, nickhat
from .algebra import DecodeError
from .nickhat import Address, LedgerRejection
from .sigma import ProofError, SpkProof

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_INTEGRITY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class VerifyFalse(Exception):
    pass


# ---------------------------------------------------------------- state directory


class Store:
    def __init__(self, state_dir, group: str, seed):
        self.root = Path(state_dir) / group
        self.seed = seed

    def path(self, *parts) -> Path:
        return self.root.joinpath(*parts)

    @contextlib.contextmanager
    def locked(self):
        self.root.mkdir(parents=True, exist_ok=True)
        lock = self.path(".lock")
        try:
            fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY, 0o600)
        except FileExistsError:
            raise UsageError(f"state directory {self.root} is in use (remove {lock} if stale)") from None
        os.close(fd)
        try:
            yield self
        finally:
            lock.unlink(missing_ok=True)

    def rng(self, command: str):
        """Fresh randomness, or a per-invocation stream derived from --seed."""
        if self.seed is None:
            return random.SystemRandom()
        counter_path = self.path("rng.json")
        counter = json.loads(counter_path.read_text())["counter"] if counter_path.exists() else 0
        write_json(counter_path, {"counter": counter + 1})
        material = f"{self.seed}:{command}:{counter}".encode()
        return random.Random(hashlib.sha256(material).digest())

    def read(self, *parts):
        path = self.path(*parts)
        if not path.exists():
            raise UsageError(f"missing {path}")
        return json.loads(path.read_text())

    def write(self, parts, doc, secret=False):
        write_json(self.path(*parts), doc, secret)

    # group state

    def ipk(self):
        return ngs.IssuerPublicKey.from_dict(self.read("public", "ipk.json"))

    def opk(self):
        return ngs._g2(self.read("public", "opk.json")["opk"])

    def group(self):
        if self.path("group.json").exists():
            return ngs.load_group_file(self.path("group.json"))
        return ngs.GroupState(), self.ipk(), self.opk()

    def save_group(self, state, ipk, opk):
        ngs.save_group_file(self.path("group.json"), state, ipk, opk)

    def ledger(self):
        return nickhat.Ledger.from_snapshot(self.read("ledger.json"))

    def save_ledger(self, ledger):
        self.write(("ledger.json",), ledger.snapshot())


def write_json(path: Path, doc, secret=False):
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    fd = os.open(tmp, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, 0o600 if secret else 0o644)
    with os.fdopen(fd, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if secret:
        os.chmod(tmp, 0o600)
    os.replace(tmp, path)


def read_artifact(path):
    path = Path(path)
    if not path.exists():
        raise UsageError(f"missing {path}")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DecodeError(f"{path}: not JSON ({exc})") from None


def load_nick(path) -> ngs.Nickname:
    doc = read_artifact(path)
    try:
        return ngs.Nickname.from_dict(doc["nickname"] if "nickname" in doc else doc)
    except (KeyError, TypeError) as exc:
        raise DecodeError(f"{path}: not a nickname file ({exc})") from None


def address(text: str) -> Address:
    return Address.from_hex(text) if text.startswith("0x") else Address.of(text)


def member(store, i):
    return ngs.MemberSecret.from_dict(store.read("secrets", f"member-{i}.json"))


def message_bytes(args) -> bytes:
    if args.message_hex is not None:
        return bytes.fromhex(args.message_hex)
    return (args.message or "").encode()


# ---------------------------------------------------------------- group commands


def cmd_ikg(store, args, out):
    keys = ngs.ikg(store.rng("ikg"))
    store.write(("secrets", "issuer.json"), keys.to_dict(), secret=True)
    store.write(("public", "ipk.json"), keys.ipk.to_dict())
    out.emit({"ipk": keys.ipk.to_dict()}, "issuer keys written")


def cmd_okg(store, args, out):
    keys = ngs.okg(store.rng("okg"))
    store.write(("secrets", "opener.json"), keys.to_dict(), secret=True)
    store.write(("public", "opk.json"), {"opk": keys.opk.hex()})
    out.emit({"opk": keys.opk.hex()}, "opener keys written")


def cmd_ukg(store, args, out):
    state, ipk, opk = store.group()
    if args.user in state.upk:
        raise UsageError(f"user {args.user} already has a public key")
    keys = ngs.ukg(args.user, state, store.rng("ukg"))
    store.write(("secrets", f"user-{args.user}.json"), ngs.user_keys_to_dict(keys), secret=True)
    store.save_group(state, ipk, opk)
    out.emit({"user": args.user, "upk": keys.upk.hex()}, f"user {args.user} keys written")


def cmd_join(store, args, out):
    keys = ngs.user_keys_from_dict(store.read("secrets", f"user-{args.user}.json"))
    secret, req = ngs.join(keys.usk, store.opk(), store.rng("join"))
    store.write(("secrets", f"member-{args.user}.json"), secret.to_dict(), secret=True)
    target = Path(args.out) if args.out else store.path("requests", f"join-{args.user}.json")
    write_json(target, {"user": args.user, "request": req.to_dict()})
    out.emit({"user": args.user, "request_file": str(target)}, f"join request written to {target}")


def cmd_iss(store, args, out):
    state, ipk, opk = store.group()
    issuer = ngs.IssuerKeys.from_dict(store.read("secrets", "issuer.json"))
    source = Path(args.request) if args.request else store.path("requests", f"join-{args.user}.json")
    doc = read_artifact(source)
    req = ngs.JoinRequest.from_dict(doc["request"] if "request" in doc else doc)
    try:
        mpk = ngs.iss(args.user, issuer, req, opk, state)
    except ngs.IssueRejected as exc:
        raise VerifyFalse(f"issue rejected: {exc.reason}") from None
    store.save_group(state, ipk, opk)
    out.emit({"user": args.user, "mpk": mpk.to_dict()}, f"user {args.user} admitted")


def cmd_nick(store, args, out):
    state, _, _ = store.group()
    if args.from_nick:
        base = load_nick(args.from_nick)
    elif args.user in state.mpk:
        base = state.mpk[args.user]
    else:
        raise UsageError(f"user {args.user} has no master public key")
    nk = ngs.random_nick(base, store.rng("nick"))
    doc = {"nickname": nk.to_dict()}
    if args.out:
        write_json(Path(args.out), doc)
    out.emit(doc, nk.hex())


def cmd_trace(store, args, out):
    ok = ngs.trace(store.ipk(), member(store, args.user).tau, load_nick(args.nick))
    out.verdict(ok, "trace")


def cmd_gvf(store, args, out):
    out.verdict(ngs.gvf(store.ipk(), load_nick(args.nick)), "gvf")


def cmd_sign(store, args, out):
    nk = load_nick(args.nick)
    try:
        sigma = ngs.sign(nk, member(store, args.user).alpha, message_bytes(args), store.rng("sign"))
    except ProofError:
        raise UsageError(f"user {args.user} does not own this nickname") from None
    doc = {"signature": sigma.hex()}
    if args.out:
        write_json(Path(args.out), doc)
    out.emit(doc, sigma.hex())


def cmd_uvf(store, args, out):
    doc = read_artifact(args.sig)
    sigma = SpkProof.from_hex(doc["signature"])
    out.verdict(ngs.uvf(load_nick(args.nick), message_bytes(args), sigma), "uvf")


def cmd_open(store, args, out):
    state, ipk, _ = store.group()
    opener = ngs.OpenerKeys.from_dict(store.read("secrets", "opener.json"))
    opened = ngs.open_nickname(opener, load_nick(args.nick), state, store.rng("open"), ipk=ipk)
    if opened is None:
        raise VerifyFalse("no member matches the nickname")
    i, proof = opened
    doc = {"user": i, "proof": proof.to_dict()}
    if args.out:
        write_json(Path(args.out), doc)
    out.emit(doc, f"opened to user {i}")


def cmd_judge(store, args, out):
    state, ipk, _ = store.group()
    doc = read_artifact(args.opening)
    i = args.user if args.user is not None else doc["user"]
    proof = ngs.OpeningProof.from_dict(doc["proof"])
    out.verdict(ngs.judge(load_nick(args.nick), i, ipk, proof, state.upk), "judge")


# ---------------------------------------------------------------- nickhat commands


def _signed(store, ledger, args, kind, **params):
    source = load_nick(args.nick)
    req = nickhat.make_request(ledger, kind, source, **params)
    try:
        sigma = nickhat.sign_request(req, member(store, args.user).alpha, store.rng(f"nickhat {kind}"))
    except ProofError:
        raise UsageError(f"user {args.user} does not own this nickname") from None
    return req, sigma


def _submit(store, ledger, req, sigma, out, text):
    result = nickhat.Relayer(ledger, "cli").submit(req, sigma)
    store.save_ledger(ledger)
    doc = {"kind": req.kind, "block_height": ledger.block_height}
    if result is not None:
        doc["lock_id"] = result
    out.emit(doc, text if result is None else f"{text} (lock {result})")


def cmd_nh_deploy(store, args, out):
    if store.path("ledger.json").exists() and not args.force:
        raise UsageError("ledger already deployed (use --force to replace it)")
    ledger = nickhat.deploy(store.ipk(), {"opk": store.opk().hex()})
    store.save_ledger(ledger)
    out.emit({"escrow": nickhat.ESCROW.hex(), "htlc": nickhat.HTLC.hex()}, "ledger deployed")


def cmd_nh_mint(store, args, out):
    ledger = store.ledger()
    ledger.mint(address(args.to), args.token, args.amount)
    store.save_ledger(ledger)
    out.emit({"balance": ledger.balance(address(args.to), args.token)}, "minted")


def cmd_nh_approve(store, args, out):
    ledger = store.ledger()
    spender = address(args.spender) if args.spender else nickhat.ESCROW
    ledger.approve(address(args.owner), spender, args.token, args.amount)
    store.save_ledger(ledger)
    out.emit({"allowance": args.amount}, "approved")


def cmd_nh_register(store, args, out):
    ledger = store.ledger()
    state, _, _ = store.group()
    if args.user not in state.mpk:
        raise UsageError(f"user {args.user} has no master public key")
    ledger.register_mpk(state.mpk[args.user])
    store.save_ledger(ledger)
    out.emit({"registered": state.mpk[args.user].hex()}, "registered")


def cmd_nh_deposit(store, args, out):
    ledger = store.ledger()
    nk = load_nick(args.nick)
    ledger.deposit(address(getattr(args, "from")), args.token, args.amount, nk)
    store.save_ledger(ledger)
    out.emit({"block_height": ledger.block_height, "balance": ledger.balance(nk, args.token)}, "deposited")


def cmd_nh_transfer(store, args, out):
    ledger = store.ledger()
    req, sigma = _signed(store, ledger, args, "transfer", target=load_nick(args.to_nick), token=args.token, amount=args.amount)
    _submit(store, ledger, req, sigma, out, "transferred")


def cmd_nh_withdraw(store, args, out):
    ledger = store.ledger()
    req, sigma = _signed(store, ledger, args, "withdraw", to=address(args.to), token=args.token, amount=args.amount)
    _submit(store, ledger, req, sigma, out, "withdrawn")


def cmd_nh_scan(store, args, out):
    ledger = store.ledger()
    found = ledger.scan(member(store, args.user).tau, args.from_height)
    rows = [{"height": h, "nickname": nk.hex(), "balances": {t: ledger.balance(nk, t) for t in sorted(ledger.tokens())}} for h, nk in found]
    out.emit({"found": rows}, "\n".join(f"{r['height']} {r['nickname']}" for r in rows) or "nothing found")


def cmd_nh_audit(store, args, out):
    ledger = store.ledger()
    state, _, _ = store.group()
    opener = ngs.OpenerKeys.from_dict(store.read("secrets", "opener.json"))
    try:
        i, proof = nickhat.audit(ledger, opener, state, load_nick(args.nick), store.rng("nickhat audit"))
    except nickhat.AuditError as exc:
        raise VerifyFalse(f"audit failed: {exc}") from None
    out.emit({"user": i, "proof": proof.to_dict()}, f"audited: user {i}")


def cmd_nh_htlc(store, args, out):
    ledger = store.ledger()
    if args.action == "approve":
        req, sigma = _signed(store, ledger, args, "approve", spender=nickhat.HTLC_SPENDER, token=args.token, amount=args.amount)
    elif args.action == "lock":
        hashlock = bytes.fromhex(args.hashlock) if args.hashlock else hashlib.sha256(bytes.fromhex(args.preimage or "")).digest()
        req, sigma = _signed(
            store, ledger, args, "lock", recipient=load_nick(args.recipient), token=args.token,
            amount=args.amount, hashlock=hashlock, timelock=args.timelock,
        )
    elif args.action == "claim":
        req, sigma = _signed(store, ledger, args, "claim", lock_id=args.lock_id, preimage=bytes.fromhex(args.preimage or ""))
    else:
        req, sigma = _signed(store, ledger, args, "refund", lock_id=args.lock_id)
    _submit(store, ledger, req, sigma, out, f"htlc {args.action}")


def cmd_nh_advance(store, args, out):
    ledger = store.ledger()
    ledger.advance(args.blocks)
    store.save_ledger(ledger)
    out.emit({"block_height": ledger.block_height}, f"height {ledger.block_height}")


def cmd_nh_snapshot(store, args, out):
    snap = store.ledger().snapshot()
    out.emit(snap, json.dumps(snap, indent=2, sort_keys=True))


def script_argv(entry: dict) -> list:
    """Turn one scenario line ``{op, params, actor, seed}`` into CLI arguments."""
    argv = []
    if entry.get("seed") is not None:
        argv += ["--seed", str(entry["seed"])]
    argv += shlex.split(entry["op"])
    actor = entry.get("actor")
    if actor is not None:
        argv += ["--user", str(actor).split(":")[-1]]
    for key, value in (entry.get("params") or {}).items():
        flag = "--" + key.replace("_", "-")
        if value is True:
            argv.append(flag)
        elif isinstance(value, list):
            argv += [str(v) for v in value]
        else:
            argv += [flag, str(value)]
    return argv


def cmd_nh_run(store, args, out):
    lines = Path(args.script).read_text().splitlines() if args.script != "-" else sys.stdin.read().splitlines()
    failures = 0
    for lineno, line in enumerate(lines, 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        entry = json.loads(line)
        argv = ["--state-dir", str(store.root.parent), "--group", store.root.name]
        if args.json:
            argv.append("--json")
        if store.seed is not None and entry.get("seed") is None:
            argv += ["--seed", str(store.seed)]
        code = dispatch(argv + script_argv(entry), locked=True)
        expect = entry.get("expect", 0)
        if code != expect:
            failures += 1
            print(f"line {lineno}: {entry['op']} exited {code}, expected {expect}", file=sys.stderr)
    if failures:
        raise VerifyFalse(f"{failures} script step(s) did not match their expected exit code")


# ---------------------------------------------------------------- experiments


def cmd_experiment(store, args, out):
    if args.name == "correctness":
        seed = 0 if store.seed is None else store.seed
        results = [
            all(harness.correctness_sweep(seed + k, args.users, [f"m{j}".encode() for j in range(args.users)]))
            for k in range(args.seeds)
        ]
        passed = sum(results)
        out.emit({"experiment": "correctness", "seeds": args.seeds, "users": args.users, "passed": passed},
                 f"correctness: {passed}/{args.seeds} seeds passed")
        if passed != args.seeds:
            raise VerifyFalse("correctness failed")
        return
    if args.experiment is None:
        raise UsageError("experiment sanity needs a name: " + ", ".join(harness.EXPERIMENTS))
    report = harness.run_experiment_sanity(args.experiment, 0 if store.seed is None else store.seed, args.trials)
    if out.json:
        print(report.to_json())
    else:
        print(report.text())
    if report.won:
        raise VerifyFalse(f"a strategy won the {args.experiment} experiment")


# ---------------------------------------------------------------- plumbing


class Output:
    def __init__(self, as_json: bool):
        self.json = as_json

    def emit(self, doc, text):
        print(json.dumps(doc, sort_keys=True) if self.json else text)

    def verdict(self, ok: bool, what: str):
        self.emit({what: bool(ok)}, f"{what}: {'true' if ok else 'false'}")
        if not ok:
            raise VerifyFalse(None)


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand; defaults are applied after parsing
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--state-dir", help="state directory (default $NICKNAMES_STATE or .nicknames)")
    common.add_argument("--seed", type=int, help="derive all randomness from this seed")
    common.add_argument("--group", help="group identifier, a subdirectory of the state dir (default: default)")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="nicknames", description="Group signatures with nicknames.", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, parent=sub):
        p = parent.add_parser(name, help=help_text, parents=[common], argument_default=argparse.SUPPRESS)
        p.set_defaults(func=func)
        return p

    add("ikg", cmd_ikg, "generate issuer keys")
    add("okg", cmd_okg, "generate opener keys")
    add("ukg", cmd_ukg, "generate a user signing key").add_argument("--user", type=int, required=True)
    p = add("join", cmd_join, "create a join request")
    p.add_argument("--user", type=int, required=True)
    p.add_argument("--out", default=None)
    p = add("iss", cmd_iss, "issue a master public key")
    p.add_argument("--user", type=int, required=True)
    p.add_argument("--request", default=None)
    p = add("nick", cmd_nick, "derive a fresh nickname")
    p.add_argument("--user", type=int, default=None)
    p.add_argument("--from-nick", default=None, help="re-randomize this nickname file instead")
    p.add_argument("--out", default=None)
    p = add("trace", cmd_trace, "check ownership with a trapdoor")
    p.add_argument("--user", type=int, required=True)
    p.add_argument("--nick", required=True)
    add("gvf", cmd_gvf, "check group validity of a nickname").add_argument("--nick", required=True)
    for name, func in (("sign", cmd_sign), ("uvf", cmd_uvf)):
        p = add(name, func, "sign a message" if name == "sign" else "verify a signature")
        p.add_argument("--nick", required=True)
        msg = p.add_mutually_exclusive_group()
        msg.add_argument("--message", default=None)
        msg.add_argument("--message-hex", default=None)
        if name == "sign":
            p.add_argument("--user", type=int, required=True)
            p.add_argument("--out", default=None)
        else:
            p.add_argument("--sig", required=True)
    p = add("open", cmd_open, "open a nickname")
    p.add_argument("--nick", required=True)
    p.add_argument("--out", default=None)
    p = add("judge", cmd_judge, "check an opening proof")
    p.add_argument("--nick", required=True)
    p.add_argument("--opening", required=True)
    p.add_argument("--user", type=int, default=None)

    hat = sub.add_parser("nickhat", help="NickHat ledger simulator", parents=[common], argument_default=argparse.SUPPRESS)
    hsub = hat.add_subparsers(dest="action_group", required=True)
    add("deploy", cmd_nh_deploy, "deploy an empty ledger", hsub).add_argument("--force", action="store_true", default=False)
    p = add("mint", cmd_nh_mint, "mint tokens to an address", hsub)
    p.add_argument("--to", required=True)
    p.add_argument("--token", default="USD")
    p.add_argument("--amount", type=int, required=True)
    p = add("approve", cmd_nh_approve, "approve a spender (escrow by default)", hsub)
    p.add_argument("--owner", required=True)
    p.add_argument("--spender", default=None)
    p.add_argument("--token", default="USD")
    p.add_argument("--amount", type=int, required=True)
    add("register", cmd_nh_register, "register a master public key", hsub).add_argument("--user", type=int, required=True)
    p = add("deposit", cmd_nh_deposit, "deposit tokens into a nickname", hsub)
    p.add_argument("--from", required=True)
    p.add_argument("--nick", required=True)
    p.add_argument("--token", default="USD")
    p.add_argument("--amount", type=int, required=True)
    for name, func in (("transfer", cmd_nh_transfer), ("withdraw", cmd_nh_withdraw)):
        p = add(name, func, f"{name} from a nickname", hsub)
        p.add_argument("--user", type=int, required=True)
        p.add_argument("--nick", required=True)
        p.add_argument("--token", default="USD")
        p.add_argument("--amount", type=int, required=True)
        if name == "transfer":
            p.add_argument("--to-nick", required=True)
        else:
            p.add_argument("--to", required=True)
    p = add("scan", cmd_nh_scan, "find announcements that belong to a member", hsub)
    p.add_argument("--user", type=int, required=True)
    p.add_argument("--from-height", type=int, default=0)
    add("audit", cmd_nh_audit, "supervisor audit of an announced nickname", hsub).add_argument("--nick", required=True)
    p = add("htlc", cmd_nh_htlc, "hashed time-lock operations", hsub)
    p.add_argument("action", choices=["approve", "lock", "claim", "refund"])
    p.add_argument("--user", type=int, required=True)
    p.add_argument("--nick", required=True)
    p.add_argument("--token", default="USD")
    p.add_argument("--amount", type=int, default=0)
    p.add_argument("--recipient", default=None)
    p.add_argument("--preimage", default=None, help="hex")
    p.add_argument("--hashlock", default=None, help="hex")
    p.add_argument("--timelock", type=int, default=0)
    p.add_argument("--lock-id", default=None)
    add("advance", cmd_nh_advance, "mine empty blocks", hsub).add_argument("--blocks", type=int, default=1)
    add("snapshot", cmd_nh_snapshot, "print the ledger snapshot", hsub)
    add("run", cmd_nh_run, "run a JSON-lines scenario script", hsub).add_argument("script")

    p = add("experiment", cmd_experiment, "run an experiment")
    p.add_argument("name", choices=["correctness", "sanity"])
    p.add_argument("experiment", nargs="?", default=None, choices=harness.EXPERIMENTS)
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--users", type=int, default=5)
    p.add_argument("--trials", type=int, default=1000)
    return parser


def _global_defaults():
    return {"state_dir": os.environ.get("NICKNAMES_STATE", ".nicknames"), "seed": None, "group": "default", "json": False}


def dispatch(argv, locked=False) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    for key, value in _global_defaults().items():
        if not hasattr(args, key):
            setattr(args, key, value)
    store = Store(args.state_dir, args.group, args.seed)
    out = Output(args.json)
    try:
        with contextlib.nullcontext(store) if locked else store.locked():
            args.func(store, args, out)
        return EXIT_OK
    except VerifyFalse as exc:
        if exc.args and exc.args[0]:
            print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_FALSE
    except LedgerRejection as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_FALSE
    except DecodeError as exc:
        print(f"invalid artifact: {exc}", file=sys.stderr)
        return EXIT_FALSE
    except ngs.IntegrityError as exc:
        print(f"integrity error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except (UsageError, ValueError, KeyError, OSError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> int:
    return dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
