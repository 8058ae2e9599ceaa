"""Theorem-level verification suites and their JSON/text reports.

Every check takes already-built objects (fan, divisor, prime), refuses with
HypothesisError when the theorem's hypotheses are not met, and otherwise
returns a VerificationReport. A failing check means this implementation is
wrong somewhere: the statements being checked are theorems.
"""
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .cohomology import binomial_row, cohomology_table
from .divisors import (
    TQDivisor,
    canonical_divisor,
    cartier_data,
    divisor_to_json,
    frobenius_multiple,
    h0_lattice,
    is_ample,
    is_cartier,
    round_up,
    sample_ample_integral,
    sample_ample_q_divisor,
    sample_divisor,
)
from .errors import HypothesisError, InputError, NotQCartierError
from .fan import Fan, is_complete, is_simplicial, named_fan, NAMED_FANS
from .frobenius import compatibility_check, koszul_matrix
from .witt import WittElem, pr1

SUITES = ("bott", "kv", "injection", "hodge", "lift")
R_MAX = 3

THEOREMS = {
    "bott": "Bott vanishing",
    "kv": "Kawamata-Viehweg vanishing",
    "injection": "the Frobenius injection lemma",
    "hodge": "E1-degeneration of the Hodge to de Rham spectral sequence",
    "lift": "strong liftability",
}


@dataclass
class Check:
    id: str
    status: str
    witness: dict

    def to_json(self):
        return {"id": self.id, "status": self.status, "witness": self.witness}


@dataclass
class VerificationReport:
    suite: str
    fan_fingerprint: str
    params: dict
    checks: list = field(default_factory=list)
    timing: float = 0.0

    @property
    def status(self):
        return "pass" if all(c.status == "pass" for c in self.checks) else "fail"

    @property
    def ok(self):
        return self.status == "pass"

    def add(self, cid, ok, **witness):
        self.checks.append(Check(cid, "pass" if ok else "fail", witness))
        return ok

    def message(self):
        if self.ok:
            return f"{self.suite}: pass ({len(self.checks)} checks)"
        failed = [c.id for c in self.checks if c.status != "pass"]
        return f"{self.suite}: implementation violates {THEOREMS[self.suite]} (failed: {', '.join(failed)})"

    def to_json(self, timing=True):
        out = {
            "suite": self.suite,
            "fan_fingerprint": self.fan_fingerprint,
            "params": self.params,
            "checks": [c.to_json() for c in self.checks],
            "status": self.status,
        }
        if timing:
            out["timing"] = round(self.timing, 6)
        return out


def _report(suite, f, p, d=None, **extra):
    params = {"prime": p, **extra}
    if d is not None:
        params["divisor"] = divisor_to_json(d)["coeffs"]
    return VerificationReport(suite, f.fingerprint(), params)


def _require(cond, suite, reason):
    if not cond:
        raise HypothesisError(f"{THEOREMS[suite]} requires {reason}")


def _require_complete(f, suite):
    try:
        complete = is_complete(f)
    except InputError:
        complete = False
    _require(complete, suite, "a complete fan (projective toric variety)")


def _require_ample(d, suite, what):
    try:
        ample = is_ample(d)
    except NotQCartierError:
        ample = False
    _require(ample, suite, f"{what}; the given divisor is not ample")


def _first_support(table, j):
    runs = table.support(j)
    return list(runs[0].start) if runs else None


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.timing = time.perf_counter() - t0
        return rep

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# individual checks ---------------------------------------------------------

@_timed
def check_bott(f, L, p):
    """h^j(X, Omega~^i(log D) ⊗ L) = 0 for j > 0, D the full boundary.

    Along the full boundary the log forms are free on Lambda^i M, so the
    dims are C(n, i) * h^j(L) and it suffices to compute the table of L.
    """
    _require_complete(f, "bott")
    _require(L.is_integral(), "bott", "an invertible sheaf; the divisor is not integral")
    _require_ample(L, "bott", "an ample invertible sheaf")
    _require(is_cartier(L), "bott", "an invertible sheaf; the divisor is not Cartier")
    rep = _report("bott", f, p, L)
    table = cohomology_table(L, p)
    n = f.rank
    ranks = binomial_row(n)
    for j in range(1, n + 1):
        dims = [r * table[j] for r in ranks]
        rep.add(f"bott.h{j}", table[j] == 0, dims_by_i=dims, degree=_first_support(table, j))
    rep.add("bott.h0_sections", table[0] > 0, h0=table[0])
    return rep


@_timed
def check_kv(f, H, p):
    """h^i(K + ceil(H)) = 0 for i > 0, plus the Serre-dual route via -ceil(H)."""
    _require_complete(f, "kv")
    _require(is_simplicial(f), "kv", "a simplicial fan")
    _require_ample(H, "kv", "an ample Q-divisor")
    rep = _report("kv", f, p, H)
    up = round_up(H)
    main = cohomology_table(canonical_divisor(f) + up, p)
    dual = cohomology_table(-up, p)
    n = f.rank
    for i in range(1, n + 1):
        rep.add(f"kv.h{i}", main[i] == 0, dim=main[i], degree=_first_support(main, i))
    for j in range(n):
        rep.add(f"kv.dual_h{j}", dual[j] == 0, dim=dual[j], degree=_first_support(dual, j))
    rep.add(
        "kv.serre_route",
        all(main[i] == dual[n - i] for i in range(n + 1)),
        direct=list(main.dims),
        dual=list(dual.dims),
    )
    return rep


@_timed
def check_injection(f, H, p, r_max=R_MAX):
    """h^j(-ceil(H)) <= h^j(-ceil(p^r H)) for r = 1..r_max and every j."""
    _require_complete(f, "injection")
    _require_ample(H, "injection", "an ample Q-divisor")
    rep = _report("injection", f, p, H, r_max=r_max)
    n = f.rank
    chain = []
    for r in range(r_max + 1):
        chain.append(cohomology_table(-round_up(frobenius_multiple(H, p**r)), p).dims)
    for j in range(n + 1):
        dims = [t[j] for t in chain]
        for r in range(1, r_max + 1):
            rep.add(f"injection.h{j}.r{r}", dims[0] <= dims[r], j=j, r=r, chain=dims)
    return rep


@_timed
def check_hodge(f, p):
    """Row concentration of E1 for D the full boundary, plus d1 = 0.

    E1^{i,j} = H^j(Omega~^i(log D)) = Lambda^i M ⊗ H^j(O). d1 on row 0 is
    d on global log forms, which are the constant-coefficient forms: the
    degree-0 piece of the graded log complex, whose differential is checked
    to be the zero matrix.
    """
    _require_complete(f, "hodge")
    rep = _report("hodge", f, p)
    n = f.rank
    h_o = cohomology_table(TQDivisor(f, (Fraction(0),) * f.n_rays), p).dims
    ranks = binomial_row(n)
    e1 = [[ranks[i] * h_o[j] for j in range(n + 1)] for i in range(n + 1)]
    rep.add("hodge.h0_O", h_o[0] == 1, dims=list(h_o))
    rep.add("hodge.row_concentration", all(x == 0 for x in h_o[1:]), dims=list(h_o))
    zero = (0,) * n
    d1_zero = all(not any(any(row) for row in koszul_matrix(zero, i, p)) for i in range(n))
    rep.add("hodge.d1_zero", d1_zero, certificate="d(dlog x_I) = 0 on constant-coefficient forms")
    # with d1 = 0 and one nonzero row every later differential is zero too
    einf = [row[:] for row in e1] if d1_zero and all(x == 0 for x in h_o[1:]) else None
    totals_e1 = [sum(e1[i][m - i] for i in range(n + 1) if 0 <= m - i <= n) for m in range(2 * n + 1)]
    totals_einf = (
        [sum(einf[i][m - i] for i in range(n + 1) if 0 <= m - i <= n) for m in range(2 * n + 1)]
        if einf
        else None
    )
    rep.add("hodge.e1_einf_totals", totals_e1 == totals_einf, e1_dims=e1, einf_dims=einf, totals=totals_e1)
    return rep


@_timed
def check_strong_lift(f, D, p, rng=None):
    """H^0 over W_2 and over F_p are free on the same characters; reduction is onto.

    The W_2 basis comes from the lattice points of P_D, the F_p basis from the
    support of H^0 in the graded engine. When D is Cartier its local
    equations are also checked against the monomial Frobenius lifting.
    """
    _require_complete(f, "lift")
    _require(D.is_integral(), "lift", "an integral divisor")
    rng = rng or random.Random(0)
    rep = _report("lift", f, p, D)
    w2_basis = h0_lattice(D).monomials
    table = cohomology_table(D, p)
    k_basis = sorted(
        tuple(run.start[:-1]) + (run.start[-1] + t,) for run in table.support(0) for t in range(run.length)
    )
    rep.add("lift.basis_equal", w2_basis == k_basis, size_w2=len(w2_basis), size_k=len(k_basis))
    if w2_basis:
        # reduction pr1 on a random W_2 section, and a lift of a random k-section
        sec = {u: WittElem(rng.randrange(p), rng.randrange(p), p) for u in w2_basis}
        target = {u: rng.randrange(p) for u in w2_basis}
        lifted = {u: WittElem(c, rng.randrange(p), p) for u, c in target.items()}
        k_set = set(k_basis)
        reduced_ok = all(u in k_set for u, c in sec.items() if pr1(c))
        onto = {u: pr1(c) for u, c in lifted.items()} == target
        rep.add("lift.reduction_surjective", reduced_ok and onto, witness_degree=list(w2_basis[0]))
    else:
        rep.add("lift.reduction_surjective", True, vacuous=True)
    if is_cartier(D):
        data = cartier_data(D)
        for k in range(len(f.max_cones)):
            gen = tuple(-x for x in data.u[k])
            ok = compatibility_check(f.cone(k), [gen], p)
            rep.add(f"lift.compatible.cone{k}", ok, cone=k, generator=list(gen))
    return rep


# sampling ------------------------------------------------------------------

def sample_ample_cartier(f, rng, max_tries=20_000):
    for _ in range(max_tries):
        d = sample_ample_integral(f, rng)
        if is_cartier(d):
            return d
    raise InputError(f"no ample Cartier divisor found on {f.name or 'fan'}")


def _rng(seed, name, p, suite):
    return random.Random(f"{seed}:{name}:{p}:{suite}")


def _instances(suite, f, name, p, seed, samples):
    if suite == "hodge":
        return [None]
    if suite == "bott":
        rng = _rng(seed, name, p, "bott")
        return [sample_ample_cartier(f, rng) for _ in range(samples)]
    if suite in ("kv", "injection"):
        # both suites run over the same ample Q-divisors
        rng = _rng(seed, name, p, "kv")
        return [sample_ample_q_divisor(f, rng) for _ in range(samples)]
    rng = _rng(seed, name, p, "lift")
    return [sample_divisor(f, rng, 0, 3) for _ in range(samples)]


def _run_one(job):
    suite, fan_json, name, p, coeffs, seed, r_max = job
    f = Fan.from_json(fan_json, name=name)
    d = TQDivisor(f, tuple(Fraction(c) for c in coeffs)) if coeffs is not None else None
    if suite == "bott":
        return check_bott(f, d, p)
    if suite == "kv":
        return check_kv(f, d, p)
    if suite == "injection":
        return check_injection(f, d, p, r_max)
    if suite == "hodge":
        return check_hodge(f, p)
    return check_strong_lift(f, d, p, _rng(seed, name, p, "lift:" + ",".join(coeffs)))


@dataclass
class SuiteResult:
    config: dict
    reports: list

    @property
    def status(self):
        return "pass" if all(r.ok for r in self.reports) else "fail"

    def to_json(self, timing=True):
        return {
            "config": self.config,
            "status": self.status,
            "reports": [r.to_json(timing) for r in self.reports],
        }


def resolve_catalog(names):
    if names in (None, "all"):
        return list(NAMED_FANS)
    names = [s.strip() for s in names.split(",") if s.strip()]
    for n in names:
        named_fan(n)
    return names


def run_suite(config):
    """Run the selected suites over catalog fans x primes x sampled divisors.

    config keys: catalog (list of names), primes, seed, samples, suites,
    r_max, jobs. Reports come back in a fixed order regardless of jobs.
    """
    cfg = {
        "catalog": list(config.get("catalog") or NAMED_FANS),
        "primes": [int(p) for p in config.get("primes", (2, 3, 5))],
        "seed": int(config.get("seed", 0)),
        "samples": int(config.get("samples", 10)),
        "suites": list(config.get("suites") or SUITES),
        "r_max": int(config.get("r_max", R_MAX)),
    }
    for s in cfg["suites"]:
        if s not in SUITES:
            raise InputError(f"unknown suite {s!r}")
    jobs = []
    for name in cfg["catalog"]:
        f = named_fan(name)
        for p in cfg["primes"]:
            for suite in cfg["suites"]:
                if suite == "kv" and not is_simplicial(f):
                    continue
                for d in _instances(suite, f, name, p, cfg["seed"], cfg["samples"]):
                    coeffs = None if d is None else [str(c) for c in d.coeffs]
                    jobs.append((suite, f.to_json(), name, p, coeffs, cfg["seed"], cfg["r_max"]))
    workers = int(config.get("jobs", 1))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            reports = list(pool.map(_run_one, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        reports = [_run_one(j) for j in jobs]
    return SuiteResult(cfg, reports)


# output --------------------------------------------------------------------

def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def render_text(reports):
    lines = []
    for r in reports:
        div = r.params.get("divisor")
        tail = f" D=[{', '.join(div)}]" if div else ""
        lines.append(f"{r.status.upper():4}  {r.suite:9}  p={r.params['prime']}  fan={r.fan_fingerprint[:12]}{tail}")
        for c in r.checks:
            if c.status != "pass":
                lines.append(f"      FAIL {c.id}: {canonical_json(c.witness)}")
    passed = sum(r.ok for r in reports)
    lines.append(f"{passed}/{len(reports)} reports pass")
    return "\n".join(lines)
