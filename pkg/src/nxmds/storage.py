"""Simulated distributed storage.

A SystemState holds what each node actually stores.  Honest nodes store
their slice of the clean encoding; corrupted nodes store clean + error.
The adversary is modeled by an ErrorPlan committed (logical-clock
stamped) before any verification randomness is drawn, matching the
threat model: full knowledge of the stored data, none of the randomness.

Error models:
    single-cell          one uniformly placed nonzero symbol per node
    random-dense         every row uniform, redrawn if all-zero
    rank-1               all rows scalar multiples of one nonzero row
    rank-f               row space of exact rank f (needs f)
    null-against-vector  every row orthogonal to a given target vector;
                         a negative control that forces a miss when the
                         challenge vector equals the target
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from . import clock
from .code import CodeParams, GeneratorMatrix, encode
from .errors import (
    BadModel,
    BadNodeId,
    DataTooLarge,
    NoGroundTruth,
    ShapeMismatch,
)
from .matrix import mat_mul, row_rank

MODELS = ("single-cell", "random-dense", "rank-1", "rank-f", "null-against-vector")


@dataclass(frozen=True)
class ErrorPlan:
    """Committed adversarial errors: (node id, alpha x N matrix) pairs."""

    entries: tuple[tuple[int, tuple[tuple[int, ...], ...]], ...]
    model: str
    declared_rank: int | None = None
    committed_at: int = dataclasses.field(default_factory=clock.tick)

    def __post_init__(self):
        if self.model not in MODELS:
            raise BadModel(f"unknown error model {self.model!r}")
        seen = set()
        for i, rows in self.entries:
            if i in seen:
                raise ValueError(f"node {i} appears twice in plan")
            seen.add(i)
            if not any(any(row) for row in rows):
                raise ValueError(f"node {i} has an all-zero error matrix")

    @property
    def nodes(self) -> frozenset[int]:
        return frozenset(i for i, _ in self.entries)

    def error_for(self, i: int):
        for j, rows in self.entries:
            if j == i:
                return rows
        return None


class SystemState:
    """Stored content of all n nodes, plus oracle-only extras.

    `nodes` is 0-indexed internally; public node ids are 1-based.
    Mutated only by corrupt() and restore(); share snapshots read-only.
    """

    def __init__(self, params: CodeParams, G: GeneratorMatrix, slices,
                 clean=None, truth=None, plans=None):
        self.params = params
        self.G = G
        self.nodes = slices
        self._clean = clean
        self.truth = truth
        self.plans = list(plans) if plans else []

    def content(self, i: int):
        if not 1 <= i <= self.params.n:
            raise BadNodeId(f"node id {i} outside 1..{self.params.n}")
        return self.nodes[i - 1]

    def restore(self):
        """Reset every node to its clean slice and forget applied plans."""
        if self._clean is None:
            raise NoGroundTruth("state was built without the clean encoding")
        self.nodes = [[list(row) for row in s] for s in self._clean]
        self.plans.clear()


def _slices(params: CodeParams, C):
    a = params.alpha
    return [
        [list(C[i * a + j]) for j in range(a)]
        for i in range(params.n)
    ]


def make_system(params: CodeParams, G: GeneratorMatrix, X,
                keep_truth: bool = True) -> SystemState:
    C = encode(params, G, X)
    clean = _slices(params, C)
    stored = [[list(row) for row in s] for s in clean]
    truth = [list(row) for row in X] if keep_truth else None
    return SystemState(params, G, stored, clean=clean, truth=truth)


def from_slices(params: CodeParams, G: GeneratorMatrix, slices) -> SystemState:
    """State reconstructed from node files alone: no ground truth, no
    clean encoding, so only hashing and verification are possible."""
    a, N = params.alpha, params.N
    if len(slices) != params.n:
        raise ShapeMismatch(f"need {params.n} node slices")
    for s in slices:
        if len(s) != a or any(len(row) != N for row in s):
            raise ShapeMismatch(f"node slices must be {a} x {N}")
    return SystemState(params, G, [[list(r) for r in s] for s in slices])


def corrupt(state: SystemState, plan: ErrorPlan) -> SystemState:
    """Apply the plan: each planned node stores clean slice + E_i."""
    params = state.params
    a, N = params.alpha, params.N
    f = params.field
    if state._clean is None:
        raise NoGroundTruth("corruption needs the clean encoding")
    for i, rows in plan.entries:
        if not 1 <= i <= params.n:
            raise BadNodeId(f"node id {i} outside 1..{params.n}")
        if len(rows) != a or any(len(row) != N for row in rows):
            raise ShapeMismatch(f"error matrix for node {i} must be {a} x {N}")
    for i, rows in plan.entries:
        clean = state._clean[i - 1]
        state.nodes[i - 1] = [
            [f.add(c, e) for c, e in zip(crow, erow)]
            for crow, erow in zip(clean, rows)
        ]
    state.plans.append(plan)
    return state


def true_error_set(state: SystemState) -> frozenset[int]:
    """Oracle: nodes whose stored slice differs from the clean encoding."""
    if state.truth is None or state._clean is None:
        raise NoGroundTruth("ground truth was not retained")
    return frozenset(
        i + 1
        for i in range(state.params.n)
        if state.nodes[i] != state._clean[i]
    )


# -- byte packing ----------------------------------------------------------

def symbol_capacity_bits(params: CodeParams) -> int:
    """Usable payload bits: floor(log2 q) per symbol."""
    b = params.field.q.bit_length() - 1
    return params.k * params.alpha * params.N * b


def ingest(data: bytes, params: CodeParams):
    """Pack a byte string into a data matrix, MSB first, row-major,
    floor(log2 q) bits per symbol; unused symbols stay zero."""
    b = params.field.q.bit_length() - 1
    cap = symbol_capacity_bits(params)
    if 8 * len(data) > cap:
        raise DataTooLarge(f"{len(data)} bytes exceed capacity {cap // 8} bytes")
    acc = int.from_bytes(data, "big") << (cap - 8 * len(data))
    mask = (1 << b) - 1
    a, k, N = params.alpha, params.k, params.N
    X = []
    slot = 0
    for _ in range(k * a):
        row = []
        for _ in range(N):
            slot += 1
            row.append((acc >> (cap - slot * b)) & mask)
        X.append(row)
    return X


def extract(params: CodeParams, X) -> bytes:
    """Inverse of ingest, truncated to whole bytes of capacity."""
    b = params.field.q.bit_length() - 1
    cap = symbol_capacity_bits(params)
    a, k, N = params.alpha, params.k, params.N
    if len(X) != k * a or any(len(row) != N for row in X):
        raise ShapeMismatch(f"data must be {k * a} x {N}")
    acc = 0
    for row in X:
        for v in row:
            acc = (acc << b) | v
    nbytes = cap // 8
    return (acc >> (cap - 8 * nbytes)).to_bytes(nbytes, "big")


# -- adversary samplers ----------------------------------------------------

def _nonzero_row(rng, q: int, N: int) -> list[int]:
    while True:
        row = [int(v) for v in rng.integers(0, q, size=N)]
        if any(row):
            return row


def _orthogonal_row(rng, field, target) -> list[int]:
    pivot = next(j for j, v in enumerate(target) if v != 0)
    inv = field.inv(target[pivot])
    while True:
        row = [int(v) for v in rng.integers(0, field.q, size=len(target))]
        s = 0
        for j, v in enumerate(row):
            if j != pivot:
                s = field.add(s, field.mul(v, target[j]))
        row[pivot] = field.mul(field.neg(s), inv)
        if any(row):
            return row


def sample_error_plan(model: str, t: int, rng, params: CodeParams, *,
                      f: int | None = None, target=None) -> ErrorPlan:
    """Draw a committed plan: W is a uniform t-subset of nodes, with
    per-node error matrices per the model.  rng is a numpy Generator."""
    if model not in MODELS:
        raise BadModel(f"unknown error model {model!r}")
    n, a, N = params.n, params.alpha, params.N
    q = params.field.q
    fld = params.field
    if not 0 <= t <= n:
        raise ValueError(f"t={t} outside 0..{n}")
    W = sorted(int(i) + 1 for i in rng.choice(n, size=t, replace=False))

    declared = None
    if model == "rank-f":
        if f is None or not 1 <= f <= min(a, N):
            raise BadModel(f"rank-f needs 1 <= f <= min(alpha, N) = {min(a, N)}")
        declared = f
    elif model == "rank-1":
        declared = 1
    elif model == "null-against-vector":
        if target is None or len(target) != N or not any(target):
            raise BadModel("null-against-vector needs a nonzero target of length N")
        if N == 1:
            raise BadModel("no nonzero row is orthogonal to a length-1 target")

    entries = []
    for i in W:
        if model == "single-cell":
            E = [[0] * N for _ in range(a)]
            r = int(rng.integers(a))
            c = int(rng.integers(N))
            E[r][c] = 1 + int(rng.integers(q - 1))
        elif model == "random-dense":
            E = [_nonzero_row(rng, q, N) for _ in range(a)]
        elif model == "rank-1":
            base = _nonzero_row(rng, q, N)
            while True:
                coeffs = [int(v) for v in rng.integers(0, q, size=a)]
                if any(coeffs):
                    break
            E = [[fld.mul(c, v) for v in base] for c in coeffs]
        elif model == "rank-f":
            while True:
                bases = [_nonzero_row(rng, q, N) for _ in range(f)]
                if row_rank(fld, bases) == f:
                    break
            while True:
                coeffs = [[int(v) for v in rng.integers(0, q, size=f)] for _ in range(a)]
                E = mat_mul(fld, coeffs, bases)
                if row_rank(fld, E) == f:
                    break
        else:
            E = [_orthogonal_row(rng, fld, list(target)) for _ in range(a)]
        entries.append((i, tuple(tuple(row) for row in E)))
        if declared is not None:
            assert row_rank(fld, entries[-1][1]) == declared

    return ErrorPlan(tuple(entries), model, declared_rank=declared)
