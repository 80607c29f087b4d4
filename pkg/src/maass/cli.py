"""Command-line entry point: coefficient tables, verification suites, expansion cache.

Exit codes: 0 all checks pass, 1 an identity check failed, 2 usage error,
3 internal error.  Every output line is a JSON object with sorted keys, and
rationals are written as "num/den".
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from filelock import FileLock

from . import arith, lfun, relations
from .arith import COSET_KINDS, is_prime
from .exactalg import PolyMatrix, is_weyl_invariant, weyl_action, weyl_generators
from .qexp import fourier_jacobi, jacobi_eisenstein, siegel2_expand
from .relations import VerificationReport, timed
from .satake import (build_Aprime, build_B, palindrome_image, phi_row, phi_row_via_chain,
                     phi_T, symbolic_p)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
DEFAULT_CACHE_DIR = "./.maass-cache"
SUITES = ("theorem1", "sum-eu", "gauss", "counts", "satake", "wtv", "lfun", "matrix-identities")


class UsageError(Exception):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# cache

def fnv1a_64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for byte in data:
        h ^= byte
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def siegel2_key(k: int, bound: int) -> str:
    return f"siegel2/k={k}/B={bound}"


def jacobi_key(k: int, m: int, n_max: int) -> str:
    return f"jacobi/k={k}/m={m}/N={n_max}"


class ExpansionCache:
    """One JSON file per key holding the payload text and its FNV-1a checksum.

    A missing, unreadable or checksum-mismatched entry is recomputed and
    rewritten; writers for the same key are serialized by a lock file.
    """

    def __init__(self, directory: str | os.PathLike | None):
        self.directory = Path(directory) if directory is not None else None

    def path(self, key: str) -> Path:
        return self.directory / (key.replace("/", "__").replace("=", "-") + ".json")

    def read(self, key: str) -> str | None:
        if self.directory is None:
            return None
        try:
            entry = json.loads(self.path(key).read_text())
        except (OSError, ValueError):
            return None
        payload = entry.get("payload")
        if (entry.get("key") != key or not isinstance(payload, str)
                or entry.get("checksum") != f"{fnv1a_64(payload.encode()):016x}"):
            return None
        return payload

    def write(self, key: str, payload: str) -> None:
        if self.directory is None:
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        entry = {"key": key, "checksum": f"{fnv1a_64(payload.encode()):016x}", "payload": payload}
        tmp = self.path(key).with_suffix(".tmp")
        tmp.write_text(dumps(entry))
        os.replace(tmp, self.path(key))

    def get_or_compute(self, key: str, compute) -> str:
        if self.directory is None:
            return compute()
        self.directory.mkdir(parents=True, exist_ok=True)
        with FileLock(str(self.path(key)) + ".lock"):
            payload = self.read(key)
            if payload is None:
                payload = compute()
                self.write(key, payload)
        return payload


def resolve_cache_dir(args) -> str | None:
    if getattr(args, "no_cache", False):
        return None
    if getattr(args, "cache_dir", None):
        return args.cache_dir
    return os.environ.get("MAASS_CACHE_DIR") or DEFAULT_CACHE_DIR


# argument helpers

def int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")


def require_weight(k: int) -> int:
    if k < 4 or k % 2:
        raise UsageError(f"weight must be an even integer >= 4, got {k}")
    return k


def require_prime_arg(p: int) -> int:
    if not is_prime(p):
        raise UsageError(f"{p} is not a prime")
    return p


def require_nonneg(name: str, v: int) -> int:
    if v < 0:
        raise UsageError(f"{name} must be non-negative, got {v}")
    return v


# compute targets

def compute_siegel2(args, cache: ExpansionCache) -> str:
    k, B = require_weight(args.weight), require_nonneg("--bound", args.bound)
    return cache.get_or_compute(siegel2_key(k, B), lambda: dumps(siegel2_expand(k, B).to_json()))


def compute_fourier_jacobi(args, cache: ExpansionCache) -> str:
    k, m, N = require_weight(args.weight), require_nonneg("--index", args.index), \
        require_nonneg("--nmax", args.nmax)
    return cache.get_or_compute(jacobi_key(k, m, N), lambda: fourier_jacobi(k, m, N).dumps())


def compute_jacobi_eis(args, cache: ExpansionCache) -> str:
    k, m, N = require_weight(args.weight), args.index, require_nonneg("--nmax", args.nmax)
    if m < 1:
        raise UsageError("--index must be positive")
    return jacobi_eisenstein(k, m, N).dumps()


def _prime_or_symbolic(args):
    if args.symbolic:
        return symbolic_p(), "q^2"
    if args.prime is None:
        raise UsageError("give --prime or --symbolic")
    return require_prime_arg(args.prime), args.prime


def compute_satake_poly(args, cache: ExpansionCache) -> str:
    p, label = _prime_or_symbolic(args)
    if args.n < 1 or not 0 <= args.l <= args.n:
        raise UsageError(f"need n >= 1 and 0 <= l <= n, got l={args.l}, n={args.n}")
    f = phi_T(args.l, args.n, p)
    return dumps({"l": args.l, "n": args.n, "prime": label,
                  "variables": list(f.variables), "terms": f.term_list()})


def compute_a_prime(args, cache: ExpansionCache) -> str:
    p, label = _prime_or_symbolic(args)
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    Ap = build_Aprime(args.n, p)
    rows = [[e.over(("q", "u")).term_list() for e in Ap.row(i)] for i in range(Ap.rows)]
    palin = all(palindrome_image(e, p) == e for e in Ap.entries)
    return dumps({"n": args.n, "prime": label, "variables": ["q", "u"],
                  "rows": rows, "palindromic": palin})


COMPUTE = {
    "siegel2": compute_siegel2,
    "fourier-jacobi": compute_fourier_jacobi,
    "jacobi-eis": compute_jacobi_eis,
    "satake-poly": compute_satake_poly,
    "a-prime": compute_a_prime,
}


# suite checks living outside relations/lfun

def check_gauss(p: int, n: int, j: int, nonzero: bool) -> VerificationReport:
    """Closed-form Gauss sum against enumeration; for j > n both must vanish or refuse."""
    m, lam = (1, [1] + [0] * (n - 1)) if nonzero else (p, [1] + [0] * (n - 1))
    report = VerificationReport("gauss", {"p": p, "n": n, "j": j, "m_lambda_unit": nonzero})
    with timed(report):
        brute = arith.gauss_sum_bruteforce(p, n, j, m, lam)
        if j > n:
            try:
                arith.gauss_sum(p, n, j, m, nonzero)
                report.fail("closed_form", "accepted j > n", "error")
            except ValueError:
                if brute != 0:
                    report.fail("bruteforce", brute, 0)
        else:
            closed = arith.gauss_sum(p, n, j, m, nonzero)
            if closed != brute:
                report.fail("value", closed, brute)
    return report


def check_coset(kind: str, p: int, n: int, i: int, j: int) -> VerificationReport:
    report = VerificationReport("coset_count", {"kind": kind, "p": p, "n": n, "i": i, "j": j})
    with timed(report):
        a, b = arith.coset_count(kind, p, n, i, j), arith.coset_count_bruteforce(kind, p, n, i, j)
        if a != b:
            report.fail("count", a, b)
    return report


def check_lattice(p: int, n: int, i: int, j: int, brute: bool) -> VerificationReport:
    report = VerificationReport("lattice_multiplicities",
                                {"p": p, "n": n, "i": i, "j": j, "bruteforce": brute})
    with timed(report):
        a = arith.lattice_multiplicities(p, n, i, j)
        if any(x < 0 or x.denominator != 1 for x in a):
            report.fail("nonnegative_integers", list(a), "non-negative integers")
        elif brute:
            b = arith.lattice_multiplicities_bruteforce(p, n, i, j)
            if tuple(a) != tuple(b):
                report.fail("multiplicities", list(a), list(b))
    return report


def _plabel(p):
    return p if isinstance(p, int) else "q^2"


def check_satake_rows(n: int, p) -> VerificationReport:
    """Degree recursion = seed row times the B-chain = previous row times B_{n,n+1}."""
    report = VerificationReport("satake_rows", {"n": n, "p": _plabel(p)})
    with timed(report):
        row = phi_row(n, p)
        chain = phi_row_via_chain(n, p)
        for l, (x, y) in enumerate(zip(row, chain)):
            if x != y:
                return report.fail({"l": l, "route": "chain"}, repr(x), repr(y))
        if n >= 2:
            step = (PolyMatrix(1, n, phi_row(n - 1, p)) @ build_B(n, p)).row(0)
            for l, (x, y) in enumerate(zip(row, step)):
                if x != y:
                    return report.fail({"l": l, "route": "row_identity"}, repr(x), repr(y))
    return report


def check_weyl(n: int, p, seed: int) -> VerificationReport:
    """Weyl invariance and X0-degree 2 of every phi(T_{l,n-l}), plus random Weyl words."""
    report = VerificationReport("satake_weyl", {"n": n, "p": _plabel(p), "seed": seed})
    with timed(report):
        rng = random.Random(seed * 1000 + n)
        gens = weyl_generators(n)
        words = [[rng.choice(gens) for _ in range(6)] for _ in range(4)]
        for l, f in enumerate(phi_row(n, p)):
            if not is_weyl_invariant(f, n):
                return report.fail({"l": l}, "not invariant", "invariant")
            if set(f.collect("X0")) != {2}:
                return report.fail({"l": l}, sorted(f.collect("X0")), [2])
            for w in words:
                if weyl_action(f, w) != f:
                    return report.fail({"l": l, "word": [list(g) for g in w]}, "moved", "fixed")
    return report


def forced_mismatch() -> VerificationReport:
    """Synthetic failing identity used to exercise the failure path."""
    return VerificationReport("forced_mismatch", {}).fail("synthetic", "0/1", "1/1")


# suites

@dataclass
class SuiteConfig:
    weights: list | None = None
    indices: list | None = None
    primes: list | None = None
    n_max: int | None = None
    seed: int = 0
    cache_dir: str | None = None
    include_n3: bool = False
    extra: dict = field(default_factory=dict)

    def validate(self) -> "SuiteConfig":
        for k in self.weights or []:
            require_weight(k)
        for p in self.primes or []:
            require_prime_arg(p)
        for m in self.indices or []:
            if m < 1:
                raise UsageError(f"indices must be positive, got {m}")
        if self.n_max is not None and self.n_max < 2:
            raise UsageError("--nmax must be at least 2")
        if not 0 <= self.seed < 2 ** 64:
            raise UsageError("--seed must be an unsigned 64-bit integer")
        return self

    def pick(self, name: str, default):
        value = getattr(self, name)
        return default if value is None else value


def suite_tasks(suite: str, cfg: SuiteConfig) -> list[tuple]:
    """Ordered (callable, args) pairs for one suite."""
    tasks: list[tuple] = []
    if suite == "theorem1":
        nmax = cfg.pick("n_max", 4)
        for k in cfg.pick("weights", [4, 6]):
            for m in cfg.pick("indices", [1, 2, 3, 4, 8, 9]):
                for p in cfg.pick("primes", [2, 3]):
                    tasks.append((relations.verify_theorem1_n1, (k, m, p, nmax)))
    elif suite == "sum-eu":
        for k in cfg.pick("weights", [4, 6, 8]):
            for p in cfg.pick("primes", [2, 3, 5]):
                for m in cfg.pick("indices", list(range(1, 73))):
                    tasks.append((relations.verify_sum_EU, (k, m, p)))
                    tasks.append((relations.verify_k_sum, (m, p, k)))
                    if m % p:
                        tasks.append((relations.verify_consistency_triangle, (k, m, p)))
    elif suite == "gauss":
        for p in cfg.pick("primes", [2, 3]):
            for n in (1, 2, 3):
                for j in range(4):
                    for nonzero in (False, True):
                        tasks.append((check_gauss, (p, n, j, nonzero)))
    elif suite == "counts":
        for p in cfg.pick("primes", [2, 3]):
            for n in (1, 2):
                for i in range(n + 1):
                    for j in range(i, n + 1):
                        for kind in COSET_KINDS:
                            tasks.append((check_coset, (kind, p, n, i, j)))
                        tasks.append((check_lattice, (p, n, i, j, True)))
            for i in range(4):
                for j in range(i, 4):
                    tasks.append((check_lattice, (p, 3, i, j, False)))
    elif suite == "satake":
        for p in cfg.pick("primes", [2, 3]) + [symbolic_p()]:
            for n in range(1, 5):
                tasks.append((check_satake_rows, (n, p)))
                tasks.append((check_weyl, (n, p, cfg.seed)))
    elif suite == "wtv":
        nmax = cfg.pick("n_max", 4)
        for k in cfg.pick("weights", [4, 6]):
            for m in cfg.pick("indices", [1, 2, 3]):
                for p in cfg.pick("primes", [2, 3]):
                    tasks.append((relations.verify_wtv, (k, m, p, nmax)))
            for p in cfg.pick("primes", [2, 3]):
                tasks.append((lfun.verify_eisenstein_eigenvalue, (k, p)))
        tasks.append((relations.verify_moebius_normalization,
                      (cfg.pick("weights", [4, 6])[0], [1, 2, 3, 4, 8, 9])))
    elif suite == "lfun":
        for n in (2, 3):
            for k in cfg.pick("weights", [10, 12]):
                tasks.append((lfun.verify_corollary4, (n, k)))
        for n in ((2, 3) if cfg.include_n3 else (2,)):
            for k in cfg.pick("weights", [4, 10]):
                tasks.append((lfun.verify_theorem3, (n, k, None, n > 2)))
                for p in cfg.pick("primes", [2, 3]):
                    tasks.append((lfun.verify_theorem3, (n, k, p, n > 2)))
    elif suite == "matrix-identities":
        ks, ps = cfg.pick("weights", [4, 6, 8, 10]), cfg.pick("primes", [2, 3])
        for n in (2, 3):
            tasks.append((lfun.verify_aprime_palindromy, (n, symbolic_p())))
            for p in ps:
                tasks.append((lfun.verify_aprime_palindromy, (n, p)))
                for k in ks:
                    tasks.append((lfun.verify_adash, (n, k, p)))
                    for delta in (0, 1):
                        tasks.append((lfun.verify_specialization, (n, k, p, delta)))
            for k in ks:
                tasks.append((lfun.verify_adash, (n, k, symbolic_p())))
    else:
        raise UsageError(f"unknown suite {suite!r}")
    return tasks


def _run_task(task) -> dict:
    fn, args = task
    return fn(*args)


def run_suites(suites, cfg: SuiteConfig, jobs: int = 1, timing: bool = False,
               force_mismatch: bool = False, out=sys.stdout) -> int:
    tasks = [t for s in suites for t in suite_tasks(s, cfg)]
    if force_mismatch:
        tasks.append((forced_mismatch, ()))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = pool.map(_run_task, tasks, chunksize=4)
            return _emit(reports, suites, timing, out)
    return _emit(map(_run_task, tasks), suites, timing, out)


def _emit(reports, suites, timing: bool, out) -> int:
    total = passed = 0
    first = None
    for report in reports:
        total += 1
        passed += report.passed
        line = report.to_json(timing)
        if first is None and not report.passed:
            first = line
        out.write(dumps(line) + "\n")
    summary = {"summary": True, "suites": list(suites), "checks": total, "passed": passed,
               "failed": total - passed, "status": "pass" if passed == total else "fail"}
    if first is not None:
        summary["first_failure"] = first
    out.write(dumps(summary) + "\n")
    out.flush()
    return EXIT_PASS if passed == total else EXIT_FAIL


# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", help="cache directory (default: $MAASS_CACHE_DIR or "
                                            f"{DEFAULT_CACHE_DIR})")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")

    parser = argparse.ArgumentParser(prog="maass", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="print a coefficient table or polynomial as JSON")
    targets = compute.add_subparsers(dest="target", required=True)
    t = targets.add_parser("siegel2", parents=[common], help="degree-2 Siegel-Eisenstein coefficients")
    t.add_argument("--weight", type=int, required=True)
    t.add_argument("--bound", type=int, required=True, help="include all T with max(n, m) <= bound")
    for name, text in (("fourier-jacobi", "Fourier-Jacobi coefficient e_{k,m}"),
                       ("jacobi-eis", "Moebius-inverted Jacobi-Eisenstein series")):
        t = targets.add_parser(name, parents=[common], help=text)
        t.add_argument("--weight", type=int, required=True)
        t.add_argument("--index", type=int, required=True)
        t.add_argument("--nmax", type=int, required=True)
    t = targets.add_parser("satake-poly", parents=[common], help="Satake image of T_{l,n-l}(p^2)")
    t.add_argument("--l", type=int, required=True)
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--prime", type=int)
    t.add_argument("--symbolic", action="store_true", help="use the formal prime q^2")
    t = targets.add_parser("a-prime", parents=[common], help="the matrix A'_{2,2n} in (q, u)")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--prime", type=int)
    t.add_argument("--symbolic", action="store_true", help="use the formal prime q^2")

    verify = sub.add_parser("verify", parents=[common], help="run identity checks")
    verify.add_argument("suite", choices=SUITES + ("all",))
    verify.add_argument("--weights", type=int_list)
    verify.add_argument("--indices", type=int_list)
    verify.add_argument("--primes", type=int_list)
    verify.add_argument("--nmax", type=int)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--jobs", type=int, default=1, help="worker processes (output order is fixed)")
    verify.add_argument("--timing", action="store_true", help="report wall-clock runtime_ms")
    verify.add_argument("--include-n3", action="store_true",
                        help="also check the degree-5 eigenvalue identity")
    verify.add_argument("--force-mismatch", action="store_true", help=argparse.SUPPRESS)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "compute":
            cache = ExpansionCache(resolve_cache_dir(args))
            out.write(COMPUTE[args.target](args, cache) + "\n")
            return EXIT_PASS
        cfg = SuiteConfig(args.weights, args.indices, args.primes, args.nmax, args.seed,
                          resolve_cache_dir(args), args.include_n3).validate()
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        suites = SUITES if args.suite == "all" else (args.suite,)
        return run_suites(suites, cfg, args.jobs, args.timing, args.force_mismatch, out)
    except UsageError as exc:
        print(f"maass: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - the exit-code contract needs a catch-all
        print(f"maass: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
