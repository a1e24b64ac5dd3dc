"""The (n,k) MDS code in the row-extended layout.

Data is a matrix X with k*alpha rows and N columns, alpha = n - k.  The
message rows are split into alpha groups of k; group g is encoded with a
systematic Reed-Solomon (n,k) code, and node i stores one symbol row per
group.  Concretely, coded row i*alpha + g (0-based) is symbol i of group
g's codeword.  Stacking any k node blocks therefore determines X, and
locating erroneous node blocks in a hash vector reduces to alpha
independent classical RS decodes.

Evaluation points are the first n elements of the canonical enumeration
0, 1, g, g^2, ... (g the field's generator), so the construction is
reproducible from the parameters alone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    BadNodeId,
    FieldTooSmall,
    ShapeMismatch,
    SingularSystem,
    TooFewNodes,
)
from .matrix import mat_mul


@dataclass(frozen=True)
class CodeParams:
    n: int
    k: int
    field: object
    N: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.n <= self.k:
            raise ValueError(f"need n > k, got n={self.n} k={self.k}")
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if self.n > self.field.q:
            raise FieldTooSmall(
                f"n={self.n} distinct evaluation points need q >= n, "
                f"got q={self.field.q}"
            )

    @property
    def alpha(self) -> int:
        return self.n - self.k

    @property
    def t1(self) -> int:
        return (self.n - self.k) // 2

    @property
    def eval_points(self) -> tuple[int, ...]:
        return _eval_points(self.field, self.n)

    def __repr__(self):
        return f"CodeParams(n={self.n}, k={self.k}, q={self.field.q}, N={self.N})"


@lru_cache(maxsize=None)
def _eval_points(field, n: int) -> tuple[int, ...]:
    # 0, 1 = g^0, g, g^2, ...  without enumerating the whole field
    pts = [0]
    x = 1
    g = field.generator
    while len(pts) < n:
        pts.append(x)
        x = field.mul(x, g)
    return tuple(pts)


@dataclass(frozen=True)
class GeneratorMatrix:
    """Full generator (n*alpha x k*alpha) plus the k x n systematic
    per-group generator it is assembled from."""

    params: CodeParams
    rows: tuple[tuple[int, ...], ...]
    rs: tuple[tuple[int, ...], ...]


@lru_cache(maxsize=None)
def _rs_rows(params: CodeParams) -> tuple[tuple[int, ...], ...]:
    """Systematic RS generator: row d, column i is L_d(pt_i), where L_d
    is the Lagrange basis polynomial through the first k points."""
    f = params.field
    pts = params.eval_points
    k = params.k
    out = []
    for d in range(k):
        denom = 1
        for dd in range(k):
            if dd != d:
                denom = f.mul(denom, f.sub(pts[d], pts[dd]))
        dinv = f.inv(denom)
        row = []
        for i in range(params.n):
            numer = 1
            for dd in range(k):
                if dd != d:
                    numer = f.mul(numer, f.sub(pts[i], pts[dd]))
            row.append(f.mul(numer, dinv))
        out.append(tuple(row))
    return tuple(out)


def make_code(n: int, k: int, field, N: int = 1) -> tuple[CodeParams, GeneratorMatrix]:
    params = CodeParams(n, k, field, N)
    rs = _rs_rows(params)
    alpha = params.alpha
    rows = [[0] * (k * alpha) for _ in range(n * alpha)]
    for i in range(n):
        for g in range(alpha):
            for d in range(k):
                rows[i * alpha + g][g * k + d] = rs[d][i]
    return params, GeneratorMatrix(params, tuple(map(tuple, rows)), rs)


def node_rows(params: CodeParams, i: int) -> range:
    """Row labels owned by node i, numbered from 1: (i-1)*alpha+1 .. i*alpha."""
    if not 1 <= i <= params.n:
        raise BadNodeId(f"node id {i} outside 1..{params.n}")
    a = params.alpha
    return range((i - 1) * a + 1, i * a + 1)


def encode(params: CodeParams, G: GeneratorMatrix, X) -> list[list[int]]:
    """Column-wise encoding: output row i*alpha+g is symbol i of group g's
    RS codeword.  Equals G.rows @ X, computed group-wise."""
    a, k, n, N = params.alpha, params.k, params.n, params.N
    if len(X) != k * a or any(len(row) != N for row in X):
        raise ShapeMismatch(f"data must be {k * a} x {N}")
    st = list(zip(*G.rs))  # n x k
    C = [None] * (n * a)
    for g in range(a):
        cw_rows = mat_mul(params.field, st, X[g * k:(g + 1) * k])
        for i in range(n):
            C[i * a + g] = cw_rows[i]
    return C


@lru_cache(maxsize=None)
def _subset_weights(params: CodeParams, positions: tuple[int, ...]):
    """n x k evaluation matrix: given codeword values at the k listed
    positions, left-multiplying recovers the whole codeword."""
    f = params.field
    pts = params.eval_points
    anchor = [pts[p] for p in positions]
    k = len(anchor)
    W = []
    for i in range(params.n):
        row = []
        for j in range(k):
            num, den = 1, 1
            for l in range(k):
                if l != j:
                    num = f.mul(num, f.sub(pts[i], anchor[l]))
                    den = f.mul(den, f.sub(anchor[j], anchor[l]))
            row.append(f.div(num, den))
        W.append(tuple(row))
    return tuple(W)


def erasure_decode(params: CodeParams, G: GeneratorMatrix, nodes) -> list[list[int]]:
    """Recover X from >= k node contents {node id: alpha x N matrix}.

    The first k nodes (by id) anchor the interpolation; any further
    nodes are cross-checked against the interpolated codeword, and a
    mismatch raises SingularSystem (corrupted input).
    """
    items = dict(nodes)
    a, k, N = params.alpha, params.k, params.N
    for i in items:
        if not 1 <= i <= params.n:
            raise BadNodeId(f"node id {i} outside 1..{params.n}")
    if len(items) < k:
        raise TooFewNodes(f"need {k} nodes, got {len(items)}")
    for i, content in items.items():
        if len(content) != a or any(len(row) != N for row in content):
            raise ShapeMismatch(f"node {i} content must be {a} x {N}")
    ids = sorted(items)
    anchors, extras = ids[:k], ids[k:]
    W = _subset_weights(params, tuple(i - 1 for i in anchors))
    X = [None] * (k * a)
    for g in range(a):
        cw = mat_mul(params.field, W, [items[i][g] for i in anchors])
        for i in extras:
            if cw[i - 1] != list(items[i][g]):
                raise SingularSystem(
                    f"node {i} disagrees with interpolation in group {g}"
                )
        for d in range(k):
            X[g * k + d] = cw[d]
    return X


@dataclass(frozen=True)
class DecodeOutcome:
    """Result of decoding one received word against the (n,k) code."""

    ok: bool
    codeword: tuple[int, ...] | None
    message: tuple[int, ...] | None
    errors: frozenset[int] | None  # 0-based symbol positions


_UNDECODABLE = DecodeOutcome(False, None, None, None)


def decode_codeword(params: CodeParams, word, max_errors: int | None = None) -> DecodeOutcome:
    """Locate up to t1 symbol errors by brute force over erasure subsets.

    For each candidate error set (smallest first) the word is
    re-interpolated from the first k surviving positions and checked
    against every survivor.  Any codeword within distance t1 is unique
    (2*t1 < n-k+1), so the first hit is the minimum-distance answer; if
    no subset works the word is undecodable.
    """
    n, k = params.n, params.k
    if len(word) != n:
        raise ShapeMismatch(f"received word must have {n} symbols")
    t = params.t1 if max_errors is None else min(max_errors, params.t1)
    word = tuple(word)
    for e in range(t + 1):
        for erased in itertools.combinations(range(n), e):
            keep = [p for p in range(n) if p not in erased]
            anchors = tuple(keep[:k])
            W = _subset_weights(params, anchors)
            vals = [word[p] for p in anchors]
            cand = [dot_row(params.field, row, vals) for row in W]
            if all(cand[p] == word[p] for p in keep):
                errs = frozenset(p for p in range(n) if cand[p] != word[p])
                return DecodeOutcome(True, tuple(cand), tuple(cand[:k]), errs)
    return _UNDECODABLE


def dot_row(field, row, vals) -> int:
    if field.s == 1:
        return sum(a * b for a, b in zip(row, vals)) % field.p
    acc = 0
    for a, b in zip(row, vals):
        acc = field.add(acc, field.mul(a, b))
    return acc


@dataclass(frozen=True)
class HashDecode:
    """Joint decode of all alpha group words of a hash vector."""

    ok: bool
    message_hash: tuple[int, ...] | None  # k*alpha symbols when ok
    error_nodes: frozenset[int] | None    # 1-based node ids when ok
    codeword: tuple[int, ...] | None      # corrected n*alpha hash vector


def hash_word_decode(params: CodeParams, H) -> HashDecode:
    """Decode each of the alpha group words of H independently; flag the
    union of error positions as node ids.  Any undecodable group makes
    the whole vector undecodable."""
    a, n, k = params.alpha, params.n, params.k
    if len(H) != n * a:
        raise ShapeMismatch(f"hash vector must have {n * a} symbols")
    mhash = [0] * (k * a)
    corrected = [0] * (n * a)
    flagged = set()
    for g in range(a):
        out = decode_codeword(params, [H[i * a + g] for i in range(n)])
        if not out.ok:
            return HashDecode(False, None, None, None)
        for d in range(k):
            mhash[g * k + d] = out.message[d]
        for i in range(n):
            corrected[i * a + g] = out.codeword[i]
        flagged.update(p + 1 for p in out.errors)
    return HashDecode(True, tuple(mhash), frozenset(flagged), tuple(corrected))
