"""Compare the compiled BN254 backend with the pure-Python fallback.

Each backend runs in its own interpreter because the backend is chosen once,
at import, from NICKNAMES_BACKEND.

    python3 benchmarks/bench_backends.py            # both backends, table
    python3 benchmarks/bench_backends.py --json     # machine-readable
    python3 benchmarks/bench_backends.py --worker python   # one backend, JSON on stdout
"""

import argparse
import json
import os
import random
import subprocess
import sys
import timeit


def measure(budget: float) -> dict:
    from nicknames import ngs
    from nicknames.algebra import BACKEND, CONTEXT, hash_to_g1, pairing

    rng = random.Random(1)
    g, g_hat = CONTEXT.g, CONTEXT.g_hat
    k = ngs.random_scalar(rng, nonzero=True)
    issuer, opener = ngs.ikg(rng), ngs.okg(rng)
    state = ngs.GroupState()
    keys = ngs.ukg(0, state, rng)
    secret, req = ngs.join(keys.usk, opener.opk, rng)
    mpk = ngs.iss(0, issuer, req, opener.opk, state)
    nk = ngs.random_nick(mpk, rng)
    sigma = ngs.sign(nk, secret.alpha, b"bench", rng)

    cases = {
        "g1 exp": lambda: g**k,
        "g2 exp": lambda: g_hat**k,
        "pairing": lambda: pairing(g, g_hat),
        "hash_to_g1": lambda: hash_to_g1(b"bench"),
        "nick + sign": lambda: ngs.sign(ngs.random_nick(mpk, rng), secret.alpha, b"bench", rng),
        "gvf + uvf": lambda: ngs.gvf(issuer.ipk, nk) and ngs.uvf(nk, b"bench", sigma),
        "join": lambda: ngs.join(keys.usk, opener.opk, rng),
        "open + judge": lambda: ngs.judge(nk, 0, issuer.ipk, ngs.open_nickname(opener, nk, state, rng)[1], state.upk),
    }
    results = {}
    for name, fn in cases.items():
        timer = timeit.Timer(fn)
        once = timer.timeit(1)
        reps = max(1, min(1000, int(budget / max(once, 1e-9))))
        best = min(timer.repeat(repeat=3, number=reps)) / reps
        results[name] = best * 1e3
    return {"backend": BACKEND, "ms": results}


def run_worker(backend: str, budget: float) -> dict:
    env = dict(os.environ, NICKNAMES_BACKEND=backend)
    cmd = [sys.executable, __file__, "--worker", backend, "--budget", str(budget)]
    out = subprocess.run(cmd, env=env, check=True, capture_output=True, text=True)
    return json.loads(out.stdout)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--worker", choices=["native", "python"], help=argparse.SUPPRESS)
    parser.add_argument("--budget", type=float, default=0.2, help="seconds per case and repeat")
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args(argv)

    if args.worker:
        print(json.dumps(measure(args.budget)))
        return 0

    runs = {}
    for backend in ("native", "python"):
        try:
            runs[backend] = run_worker(backend, args.budget)["ms"]
        except subprocess.CalledProcessError as exc:
            print(f"{backend} backend unavailable: {exc.stderr.strip().splitlines()[-1]}", file=sys.stderr)
    if args.json:
        print(json.dumps(runs, indent=2))
        return 0
    names = list(next(iter(runs.values())))
    print(f"{'operation':<14}" + "".join(f"{b + ' (ms)':>14}" for b in runs) + ("   speedup" if len(runs) == 2 else ""))
    for name in names:
        row = f"{name:<14}" + "".join(f"{runs[b][name]:>14.3f}" for b in runs)
        if len(runs) == 2:
            row += f"{runs['python'][name] / runs['native'][name]:>9.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    sys.exit(main())
