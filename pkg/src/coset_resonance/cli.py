"""Command-line entry point.

    coset-resonance verify   [--q-min A --q-max B] [--seed S]
    coset-resonance scan     --q Q | --q-min A --q-max B  [--index K] [--coset c]
    coset-resonance resonate --N N [--resonator MODE]
    coset-resonance lemma5   --q Q | --q-min A --q-max B  [--index 2,3] [--N N] [--delta D]
    coset-resonance bounds   --q Q | --q-min A --q-max B  [--index 1,2,3,5] [--scan-data FILE]

Every command writes one table (CSV or JSON) to ``--out`` or stdout. Exit
codes: 0 success, 1 runtime error or failed verification, 2 invalid input,
3 budget refusal.
"""
import argparse
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
import json
import math
import os
import sys
import warnings

from . import report_io
from .errors import BudgetError, CosetResonanceError, ConfigurationError, InvalidInputError
from .modarith import divisors, get_context, is_prime, primes_between
from .moments import (
    DEFAULT_BUDGET,
    ExperimentParams,
    L_scale,
    coset_scan,
    lemma5_check,
    scan_prime,
    theorem_bound,
)
from .resonator import (
    BRUTEFORCE_MAX_N,
    Resonator,
    ResonatorSpec,
    build_resonator,
    optimize_bruteforce,
    rayleigh_ratio,
)
from .verify import VERIFY_COLUMNS, run_suites

COMMANDS = ("verify", "scan", "resonate", "lemma5", "bounds")
EXIT_OK, EXIT_RUNTIME, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3

LEMMA5_COLUMNS = ("q", "K", "N", "delta", "n_max", "holds", "inequality",
                  "witness_h", "witness_n", "witness_n1", "witness_n2")
RESONATE_COLUMNS = ("N", "resonator", "L_param", "window_lo", "window_hi", "support_size",
                    "norm_sq", "rayleigh", "optimum", "degenerate")
BOUNDS_COLUMNS = ("q", "K", "profile", "calL", "theorem_exponent", "measured_log_max")


@dataclass
class RunConfig:
    command: str = "verify"
    q: int = None
    q_min: int = None
    q_max: int = None
    index: tuple = None
    coset: int = None
    N: int = None
    X: float = None
    delta: float = None
    format: str = "csv"
    out: str = None
    seed: int = 0
    workers: int = 1
    resonator: str = "standard"
    max_index: int = 10
    budget: float = DEFAULT_BUDGET
    scan_data: str = None

    def primes(self, default=None):
        """Primes selected by --q or --q-min/--q-max (validated)."""
        if self.q is not None:
            if not is_prime(self.q) or self.q < 3:
                get_context(self.q)  # raises ModulusError with the message
            return [int(self.q)]
        if self.q_min is None and self.q_max is None:
            if default is None:
                raise ConfigurationError("give --q or --q-min/--q-max")
            return default
        lo = 3 if self.q_min is None else int(self.q_min)
        hi = lo if self.q_max is None else int(self.q_max)
        return primes_between(max(lo, 3), hi)


def _int_list(text):
    if isinstance(text, (list, tuple)):
        return tuple(int(v) for v in text)
    if isinstance(text, int):
        return (text,)
    try:
        return tuple(int(v) for v in str(text).split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers separated by commas, got {text!r}")


def build_parser():
    p = argparse.ArgumentParser(prog="coset-resonance", description=__doc__.split("\n\n")[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    p.add_argument("--q", type=int)
    p.add_argument("--q-min", dest="q_min", type=int)
    p.add_argument("--q-max", dest="q_max", type=int)
    p.add_argument("--index", type=_int_list, help="subgroup index K (comma list for lemma5/bounds)")
    p.add_argument("--coset", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--X", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--resonator", choices=("standard", "optimal", "delta"))
    p.add_argument("--max-index", dest="max_index", type=int)
    p.add_argument("--budget", type=float)
    p.add_argument("--scan-data", dest="scan_data")
    return p


def load_config(argv):
    args = build_parser().parse_args(argv)
    merged = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {args.config}: {exc}")
        known = {f.name for f in fields(RunConfig)}
        for key, value in data.items():
            key = key.replace("-", "_")
            if key not in known:
                raise ConfigurationError(f"unknown config field {key!r}")
            merged[key] = value
    for key, value in vars(args).items():
        if key != "config" and value is not None:
            merged[key] = value
    if "index" in merged:
        merged["index"] = _int_list(merged["index"])
    cfg = RunConfig(**merged)
    if cfg.workers < 1:
        raise ConfigurationError("--workers must be >= 1")
    if cfg.format not in ("csv", "json"):
        raise ConfigurationError(f"unknown format {cfg.format!r}")
    return cfg


def _map(fn, items, workers):
    """Ordered map, fanned out over processes when workers > 1."""
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# commands


def cmd_verify(cfg):
    """Run the invariant suites; a failing suite is named on stderr."""
    lo, hi = 3, 300
    if cfg.q is not None:
        lo = hi = cfg.primes()[0]
    elif cfg.q_min is not None or cfg.q_max is not None:
        lo = cfg.q_min or 3
        hi = cfg.q_max or lo
    results = run_suites(lo, hi, seed=cfg.seed)
    for r in results:
        if not r.passed:
            print(f"FAILED {r.suite}: {r.detail}", file=sys.stderr)
    rows = [r.row() for r in results]
    return rows, VERIFY_COLUMNS, all(r.passed for r in results)


class _ScanJob:
    """Picklable per-prime scan worker."""

    def __init__(self, cfg):
        self.cfg = cfg

    def __call__(self, q):
        cfg = self.cfg
        overrides = any(v is not None for v in (cfg.N, cfg.X, cfg.delta, cfg.coset))
        divs = divisors(q - 1)
        if cfg.index:
            ks = sorted(set(cfg.index) & set(divs))
        else:
            ks = [K for K in divs if K <= cfg.max_index]
        if not overrides:
            reports = [r for r in scan_prime(q, max(ks, default=0), cfg.resonator, cfg.budget)
                       if r.K in ks]
            return [r.row() for r in reports]
        rows = []
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            for K in ks:
                cs = range(K) if cfg.coset is None else [cfg.coset % K]
                for c in cs:
                    params = ExperimentParams.defaults(q, K, c, cfg.N, cfg.X, cfg.delta)
                    rows.append(coset_scan(params, cfg.resonator, cfg.budget).row())
        return rows


def cmd_scan(cfg):
    primes = cfg.primes()
    for q in primes:
        if q > cfg.budget:
            # refuse before any work is fanned out
            scan_prime(q, 1, cfg.resonator, cfg.budget)
    chunks = _map(_ScanJob(cfg), primes, cfg.workers)
    return [row for chunk in chunks for row in chunk], report_io.SCAN_COLUMNS, True


def cmd_resonate(cfg):
    if cfg.N is None:
        raise ConfigurationError("resonate needs --N")
    N = int(cfg.N)
    if cfg.resonator == "optimal":
        value, r = optimize_bruteforce(N)
        spec = None
    elif cfg.resonator == "delta":
        r, spec = Resonator.delta(N), None
    else:
        spec = ResonatorSpec(N)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            r = build_resonator(spec)
    optimum = optimize_bruteforce(N)[0] if N <= BRUTEFORCE_MAX_N else None
    row = {
        "N": N, "resonator": r.label,
        "L_param": spec.L_param if spec else None,
        "window_lo": spec.prime_window[0] if spec else None,
        "window_hi": spec.prime_window[1] if spec else None,
        "support_size": int(r.support.size), "norm_sq": r.norm_sq,
        "rayleigh": rayleigh_ratio(r), "optimum": optimum,
        "degenerate": bool(r.degenerate),
    }
    return [row], RESONATE_COLUMNS, True


def cmd_lemma5(cfg):
    rows = []
    for q in cfg.primes():
        for K in (cfg.index or (2, 3)):
            if (q - 1) % K:
                continue
            delta = cfg.delta if cfg.delta is not None else 1.0 / (2 * (2 * K - 1))
            N = cfg.N if cfg.N is not None else int(math.floor(q ** (1.0 / (2 * (2 * K - 1))) * (1 + 1e-12)))
            res = lemma5_check(q, K, N, delta)
            w = res.witness or (None,) * 4
            rows.append({
                "q": q, "K": K, "N": N, "delta": float(delta), "n_max": res.n_max,
                "holds": res.holds, "inequality": res.inequality,
                "witness_h": w[0], "witness_n": w[1], "witness_n1": w[2], "witness_n2": w[3],
            })
    return rows, LEMMA5_COLUMNS, True


def _measured(path):
    """max measured_log_max per (q, K, profile) from a scan report."""
    fmt = "json" if path.endswith(".json") else "csv"
    with open(path) as fh:
        _, rows = report_io.parse(fh.read(), fmt)
    out = {}
    for row in rows:
        if row["c"] == 0:
            prof = "trivial"
        elif row["parity_profile"] == "mixed":
            prof = "mixed"
        else:
            prof = "single-parity"
        key = (row["q"], row["K"], prof)
        v = row["measured_log_max"]
        if v is not None:
            out[key] = max(out.get(key, -math.inf), v)
    return out


def cmd_bounds(cfg):
    measured = _measured(cfg.scan_data) if cfg.scan_data else {}
    rows = []
    for q in cfg.primes():
        for K in (cfg.index or (1, 2, 3, 5)):
            profiles = ["trivial"] if K == 1 else ["trivial", "mixed", "single-parity"]
            for prof in profiles:
                key = {"single-parity": "all-even"}.get(prof, prof)
                rows.append({
                    "q": q, "K": K, "profile": prof, "calL": L_scale(q),
                    "theorem_exponent": theorem_bound(q, K, key),
                    "measured_log_max": measured.get((q, K, prof)),
                })
    return rows, BOUNDS_COLUMNS, True


HANDLERS = {"verify": cmd_verify, "scan": cmd_scan, "resonate": cmd_resonate,
            "lemma5": cmd_lemma5, "bounds": cmd_bounds}


def run(cfg):
    """Execute a config; returns (text, ok)."""
    rows, columns, ok = HANDLERS[cfg.command](cfg)
    return report_io.emit(rows, columns, cfg.format), ok


def main(argv=None):
    try:
        cfg = load_config(argv)
        text, ok = run(cfg)
    except BudgetError as exc:
        print(f"budget refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvalidInputError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (CosetResonanceError, ArithmeticError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if cfg.out:
        tmp = cfg.out + ".tmp"
        with open(tmp, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, cfg.out)
    else:
        sys.stdout.write(text)
    if not ok:
        print("verification failed", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
