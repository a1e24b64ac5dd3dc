"""Quantitative validation harness.

Three kinds of evidence, kept deliberately separate:

  * exact enumerators (Fractions, no floating point) over every
    projection vector or every generator seed, for instances small
    enough to enumerate; these are the ground truth;
  * Monte Carlo estimation with counter-split per-trial seeds for the
    regimes enumeration cannot reach, reproducible bit-for-bit from the
    master seed regardless of execution order;
  * instrumented operation counting for the generator's cost growth.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .code import CodeParams, make_code
from .errors import TooLargeToEnumerate
from .field import ExtensionField, field_from_order
from .hashing import (
    PrgSeed,
    draw_random_vector,
    make_prg_seed,
    minimal_extension_degree,
    prg_expand,
)
from .matrix import dot
from .storage import ErrorPlan, corrupt, make_system, sample_error_plan, true_error_set
from .verifier import collect_hashes, verify

ENUM_LIMIT = 10 ** 7

# spawn-key labels carving independent streams out of one master seed
_LABEL_DATA = 0
_LABEL_TRIAL = 1


@dataclass(frozen=True)
class TrialResult:
    detected: bool
    missed: frozenset[int]
    status: str
    provenance: str


@dataclass(frozen=True)
class RateEstimate:
    trials: int
    failures: int
    estimate: float
    sigma: float
    interval: tuple[float, float]
    bound: float


def run_trial(state, model: str, t: int, kind: str, rng, *,
              f: int | None = None, target=None) -> TrialResult:
    """One audit on a restored state: commit errors, then draw the
    randomness, hash, verify, and compare against ground truth."""
    params = state.params
    state.restore()
    if t:
        plan = sample_error_plan(model, t, rng, params, f=f, target=target)
        corrupt(state, plan)
    if kind == "true-random":
        r = draw_random_vector(params.N, params.field, rng)
    elif kind == "pseudorandom":
        r = prg_expand(make_prg_seed(params.field, params.N, rng), params.N)
    else:
        raise ValueError(f"unknown randomness kind {kind!r}")
    report = verify(collect_hashes(state, r), params, state.G)
    missed = true_error_set(state) - report.flagged
    return TrialResult(not missed, missed, report.status, report.randomness)


def theoretical_bound(params: CodeParams, kind: str) -> float:
    q = params.field.q
    if kind == "true-random":
        return params.t1 / q
    if kind == "pseudorandom":
        return 2 * (params.n - params.k) * params.t1 / q
    raise ValueError(f"unknown randomness kind {kind!r}")


def mc_failure_rate(params: CodeParams, model: str, t: int, kind: str,
                    trials: int, master_seed: int, *,
                    f: int | None = None, target=None) -> RateEstimate:
    """Monte Carlo miss-rate estimate over independent audits.

    The data matrix is drawn once per run; each trial gets its own rng
    split off the master seed by trial index, so results do not depend
    on execution order.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= t <= params.t1:
        raise ValueError(f"t={t} outside 0..t1={params.t1}")
    q = params.field.q
    data_rng = np.random.default_rng(
        np.random.SeedSequence(entropy=master_seed, spawn_key=(_LABEL_DATA,))
    )
    X = [[int(v) for v in row]
         for row in data_rng.integers(0, q, size=(params.k * params.alpha, params.N))]
    _, G = make_code(params.n, params.k, params.field, params.N)
    state = make_system(params, G, X)
    failures = 0
    for i in range(trials):
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=master_seed, spawn_key=(_LABEL_TRIAL, i))
        )
        out = run_trial(state, model, t, kind, rng, f=f, target=target)
        if not out.detected:
            failures += 1
    est = failures / trials
    sigma = math.sqrt(est * (1 - est) / trials)
    return RateEstimate(
        trials=trials,
        failures=failures,
        estimate=est,
        sigma=sigma,
        interval=(max(0.0, est - 3 * sigma), min(1.0, est + 3 * sigma)),
        bound=theoretical_bound(params, kind),
    )


def exact_failure_small(params: CodeParams, plan: ErrorPlan) -> Fraction:
    """Exact miss probability by enumerating every projection vector:
    the fraction of r for which some planned node's entire error matrix
    projects to zero."""
    fld = params.field
    q, N = fld.q, params.N
    if q ** N > ENUM_LIMIT:
        raise TooLargeToEnumerate(f"q^N = {q ** N} vectors")
    blocks = [[list(row) for row in rows] for _, rows in plan.entries]
    fails = 0
    for r in itertools.product(range(q), repeat=N):
        rv = list(r)
        for rows in blocks:
            if all(dot(fld, row, rv) == 0 for row in rows):
                fails += 1
                break
    return Fraction(fails, q ** N)


# -- generator enumeration -------------------------------------------------

_prg_tables: dict[tuple[int, int, int], tuple[tuple[int, ...], ...]] = {}


def _prg_table(q: int, m: int, N: int):
    """Production generator output for every seed (x, y), x-major."""
    key = (q, m, N)
    if key not in _prg_tables:
        if (q ** m) ** 2 * N > 8 * ENUM_LIMIT:
            raise TooLargeToEnumerate(f"{(q ** m) ** 2} seeds of length {N}")
        base = field_from_order(q)
        ext = ExtensionField(base, m)
        S = ext.q
        _prg_tables[key] = tuple(
            prg_expand(PrgSeed(x, y, ext), N).symbols
            for x in range(S)
            for y in range(S)
        )
    return _prg_tables[key]


def exact_bias(q: int, m: int, N: int, beta, c: int = 0) -> Fraction:
    """Exact bias of the linear test sum(beta_i r_i) + c over all seeds:
    (q-1) P[test = 0] - P[test != 0]."""
    if len(beta) != N or not any(beta):
        raise ValueError("beta must be a nonzero length-N sequence")
    fld = field_from_order(q)
    total = 0
    zeros = 0
    for r in _prg_table(q, m, N):
        acc = c
        for b, v in zip(beta, r):
            acc = fld.add(acc, fld.mul(b, v))
        total += 1
        zeros += acc == 0
    return Fraction((q - 1) * zeros - (total - zeros), total)


def exact_zero_prob(q: int, m: int, N: int, beta) -> Fraction:
    """Exact P[sum(beta_i r_i) = 0] over all seeds."""
    if len(beta) != N or not any(beta):
        raise ValueError("beta must be a nonzero length-N sequence")
    fld = field_from_order(q)
    total = 0
    zeros = 0
    for r in _prg_table(q, m, N):
        acc = 0
        for b, v in zip(beta, r):
            acc = fld.add(acc, fld.mul(b, v))
        total += 1
        zeros += acc == 0
    return Fraction(zeros, total)


def bias_sweep(q: int, N: int, m: int | None = None):
    """Worst case over every nonzero test and every constant: returns
    (m, max |bias|, max P[test = 0]) as exact Fractions.

    Vectorized over the full table of seeds, prime q only; spot-check
    against exact_bias when in doubt.
    """
    fld = field_from_order(q)
    if fld.s != 1:
        raise ValueError("the vectorized sweep needs a prime q")
    if m is None:
        m = minimal_extension_degree(q, N)
    table = np.array(_prg_table(q, m, N), dtype=np.int64)  # S x N
    S = table.shape[0]
    worst_num = 0
    worst_zero = 0
    betas = itertools.islice(itertools.product(range(q), repeat=N), 1, None)
    chunk = 2048
    while True:
        block = list(itertools.islice(betas, chunk))
        if not block:
            break
        B = np.array(block, dtype=np.int64)
        T = (B @ table.T) % q  # len(block) x S
        for v in range(q):
            z = (T == v).sum(axis=1)
            worst_num = max(worst_num, int(np.abs(q * z - S).max()))
            if v == 0:
                worst_zero = max(worst_zero, int(z.max()))
    return m, Fraction(worst_num, S), Fraction(worst_zero, S)


def lemma1_check(q: int, count: int):
    """Exact distribution of a sum of `count` independent uniform field
    elements: convolution stays uniform at every step."""
    if count < 1:
        raise ValueError("count must be >= 1")
    fld = field_from_order(q)
    u = Fraction(1, q)
    dist = [u] * q
    for _ in range(count - 1):
        new = [Fraction(0)] * q
        for a in range(q):
            pa = dist[a]
            for b in range(q):
                new[fld.add(a, b)] += pa * u
        dist = new
    assert all(p == u for p in dist), "convolution left the uniform law"
    return tuple(dist)


# -- instrumented cost -----------------------------------------------------

class CountingField:
    """Field wrapper that counts arithmetic calls; everything else is
    passed through."""

    def __init__(self, base):
        self.base = base
        self.count = 0

    @property
    def p(self):
        return self.base.p

    @property
    def s(self):
        return self.base.s

    @property
    def q(self):
        return self.base.q

    @property
    def modulus(self):
        return self.base.modulus

    @property
    def generator(self):
        return self.base.generator

    def check(self, a):
        return self.base.check(a)

    def coeffs(self, a):
        return self.base.coeffs(a)

    def elements(self):
        return self.base.elements()

    def add(self, a, b):
        self.count += 1
        return self.base.add(a, b)

    def sub(self, a, b):
        self.count += 1
        return self.base.sub(a, b)

    def neg(self, a):
        self.count += 1
        return self.base.neg(a)

    def mul(self, a, b):
        self.count += 1
        return self.base.mul(a, b)

    def inv(self, a):
        self.count += 1
        return self.base.inv(a)

    def div(self, a, b):
        self.count += 2
        return self.base.div(a, b)

    def pow(self, a, e):
        raise NotImplementedError("instrumented pow is not needed")


def cost_counter(q: int, N_sweep, m: int | None = None):
    """Measured base-field operation counts for expanding N symbols,
    one row (N, m, ops) per sweep point.

    m defaults to the minimal extension degree per N; pin it to isolate
    the linear-in-N factor.  Counts are deterministic: the
    multiplication routine has no value-dependent shortcuts, so any
    seed gives the same figure.
    """
    base = field_from_order(q)
    rows = []
    for N in N_sweep:
        counting = CountingField(base)
        deg = minimal_extension_degree(q, N) if m is None else m
        ext = ExtensionField(counting, deg)
        counting.count = 0  # drop modulus-search arithmetic
        prg_expand(PrgSeed(1, 1, ext), N)
        rows.append((N, deg, counting.count))
    return rows
