"""Invariant suites run by ``coset-resonance verify``.

Each suite returns a :class:`SuiteResult`; sampling is driven by one seeded
generator so a fixed seed reproduces the report byte for byte.
"""
from dataclasses import asdict, dataclass
import math

import numpy as np

from .chargroup import (
    Coset,
    Subgroup,
    coset_char_sum,
    coset_twisted_gauss_sum,
    coset_twisted_gauss_sum_proof_route,
    kernel,
    principal_orthogonality_closed_form,
)
from .lcentral import AfeParams, l_star_sweep
from .modarith import divisors, get_context, primes_between
from .moments import lemma5_check, m1
from .resonator import Resonator
from .special import v_kappa, v_kappa_quadrature

__all__ = ["SuiteResult", "SUITES", "VERIFY_COLUMNS", "run_suites"]

VERIFY_COLUMNS = ("suite", "checks", "failures", "max_residual", "tolerance", "passed", "detail")


@dataclass
class SuiteResult:
    suite: str
    checks: int = 0
    failures: int = 0
    max_residual: float = 0.0
    tolerance: float = 0.0
    detail: str = ""

    @property
    def passed(self):
        return self.failures == 0

    def record(self, residual, where, tol=None):
        """Count one check; ``tol`` overrides the suite tolerance for it."""
        self.checks += 1
        self.max_residual = max(self.max_residual, float(residual))
        if not residual <= (self.tolerance if tol is None else tol):
            self.failures += 1
            if not self.detail:
                self.detail = f"{where}: residual {residual:.3g}"

    def row(self):
        out = asdict(self)
        out["passed"] = self.passed
        return out


def _units(rng, q, n):
    return [int(a) for a in rng.integers(1, q, size=n)]


def orthogonality(primes, rng, per=5):
    res = SuiteResult("orthogonality", tolerance=1e-9)
    for q in primes:
        ctx = get_context(q)
        for d in divisors(ctx.phi):
            H = Subgroup(ctx, d)
            for c in sorted(set(int(x) for x in rng.integers(0, d, size=per))):
                C = Coset(H, c)
                for a in _units(rng, q, per):
                    direct = coset_char_sum(C, a)
                    closed = complex(principal_orthogonality_closed_form(C, a))
                    res.record(abs(direct - closed), f"q={q} d={d} c={c} a={a}")
    return res


def kernel_identity(primes, rng):
    res = SuiteResult("kernel_identity", tolerance=0.0)
    for q in primes:
        ctx = get_context(q)
        for d in divisors(ctx.phi):
            H = Subgroup(ctx, d)
            res.record(abs(kernel(H).size * H.order - ctx.phi), f"q={q} d={d}")
    return res


def gauss_modulus(primes, rng):
    res = SuiteResult("gauss_modulus", tolerance=1e-6)
    for q in primes:
        tau = get_context(q).gauss_sums
        rel = np.abs(np.abs(tau[1:]) ** 2 - q) / q
        res.record(float(rel.max()) if rel.size else 0.0, f"q={q}")
        res.record(abs(tau[0] + 1), f"q={q} principal", tol=1e-9)
    return res


def dual_orthogonality(primes, rng, samples=40):
    res = SuiteResult("dual_orthogonality", tolerance=1e-8)
    primes = list(primes)
    for _ in range(samples):
        q = int(primes[rng.integers(len(primes))])
        ctx = get_context(q)
        ds = divisors(ctx.phi)
        d = int(ds[rng.integers(len(ds))])
        C = Coset(Subgroup(ctx, d), int(rng.integers(d)))
        a = _units(rng, q, 1)[0]
        direct = coset_twisted_gauss_sum(C, a)
        proof = coset_twisted_gauss_sum_proof_route(C, a)
        res.record(abs(direct - proof) / max(1.0, abs(direct)), f"q={q} d={d} c={C.c} a={a}")
    return res


def v_kappa_routes(rng, points=200):
    res = SuiteResult("v_kappa_routes", tolerance=1e-12)
    ys = np.geomspace(1e-4, 8.0, points)
    for kappa in (0, 1):
        res.record(abs(v_kappa(kappa, 0.0) - 1.0), f"kappa={kappa} y=0")
        for y in ys:
            res.record(abs(v_kappa_quadrature(kappa, y) - v_kappa(kappa, y)), f"kappa={kappa} y={y:.6g}")
            if y > 1:
                excess = max(0.0, v_kappa(kappa, y) - math.exp(-y))
                res.record(excess, f"kappa={kappa} y={y:.6g} decay")
    return res


def afe_independence(qs, rng):
    res = SuiteResult("afe_independence", tolerance=1e-7)
    for q in qs:
        vals = [l_star_sweep(q, AfeParams(X)) for X in (0.5, 1.0, 2.0)]
        spread = max(float(np.max(np.abs(v[1:] - vals[1][1:]))) for v in vals)
        res.record(spread, f"q={q} X-independence")
        v = vals[1]
        conj_gap = float(np.max(np.abs(v[1:] - np.conj(v[1:][::-1]))))
        res.record(conj_gap, f"q={q} conjugation", tol=1e-9)
    return res


def m1_routes(primes, rng, samples=40):
    res = SuiteResult("m1_routes", tolerance=1e-8)
    primes = list(primes)
    for _ in range(samples):
        q = int(primes[rng.integers(len(primes))])
        ctx = get_context(q)
        ds = divisors(ctx.phi)
        d = int(ds[rng.integers(len(ds))])
        C = Coset(Subgroup(ctx, d), int(rng.integers(d)))
        N = int(rng.integers(1, min(q - 1, 40) + 1))
        r = Resonator.from_dense(rng.standard_normal(N) + 1j * rng.standard_normal(N))
        direct, kern = m1(C, r, "direct"), m1(C, r, "kernel")
        res.record(abs(direct - kern) / max(abs(direct), 1e-300), f"q={q} d={d} c={C.c} N={N}")
    return res


def lemma5_suite(primes, rng):
    res = SuiteResult("lemma5", tolerance=0.0)
    for q in primes:
        for K in (2, 3):
            if (q - 1) % K:
                continue
            e = 1.0 / (2 * (2 * K - 1))
            N = int(math.floor(q ** e * (1 + 1e-12)))
            out = lemma5_check(q, K, N, e)
            res.record(0.0 if out.holds else 1.0, f"q={q} K={K} witness={out.witness}")
    return res


SUITES = ("orthogonality", "kernel_identity", "gauss_modulus", "dual_orthogonality",
          "v_kappa_routes", "afe_independence", "m1_routes", "lemma5")


def run_suites(q_min=3, q_max=300, seed=0, afe_primes=(101,)):
    """Run every suite over primes in [q_min, q_max]."""
    primes = primes_between(max(3, q_min), q_max)
    rng = np.random.default_rng(seed)
    if not primes:
        primes = [101]
    return [
        orthogonality(primes, rng),
        kernel_identity(primes, rng),
        gauss_modulus(primes, rng),
        dual_orthogonality(primes, rng),
        v_kappa_routes(rng),
        afe_independence(afe_primes, rng),
        m1_routes(primes, rng),
        lemma5_suite(primes, rng),
    ]
