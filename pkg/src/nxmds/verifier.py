"""The trusted verifier.

Collects the per-node hash blocks, decodes the resulting vector against
the code to flag erroneous nodes, rebuilds node content from honest
helpers, and accounts for the bits everything costs.  The verifier never
sees the original data; with at most t1 = (n-k)//2 corrupted nodes it
flags a subset of the truly erroneous ones, and exactly all of them
unless some node's every error row is orthogonal to the projection
vector (the protocol's documented failure event).
"""

from __future__ import annotations

from dataclasses import dataclass

from .code import CodeParams, GeneratorMatrix, encode, erasure_decode, hash_word_decode
from .errors import (
    BadNodeId,
    CommitmentViolation,
    CorruptHelper,
    DegenerateCode,
    ShapeMismatch,
    SingularSystem,
    TooFewHelpers,
)
from .field import FieldSpec, next_prime_power, symbol_bits
from .hashing import HashVector, node_hash, seed_bit_count
from .matrix import mat_vec
from .storage import SystemState

STATUS_CLEAN = "clean"
STATUS_LOCATED = "errors-located"
STATUS_UNDECODABLE = "undecodable"


@dataclass(frozen=True)
class VerificationReport:
    status: str
    flagged: frozenset[int]
    hash_bits: int
    seed_bits: int
    randomness: str


@dataclass(frozen=True)
class AuditBudget:
    data_bits: int  # M
    hash_bits: int
    naive_bits: int
    seed_bits: int
    seed_distribution_bits: int


def collect_hashes(state: SystemState, r, *, liars=None,
                   enforce_commitment: bool = True) -> HashVector:
    """Ask every node for its hash block.

    Corrupted nodes hash their corrupted content; `liars` can override
    single blocks with arbitrary symbols to model nodes that misreport
    outright.  Error plans must predate the projection vector: nodes do
    not know r when errors are committed, and a plan stamped after r was
    drawn is a protocol violation.
    """
    if enforce_commitment:
        for plan in state.plans:
            if plan.committed_at > r.drawn_at:
                raise CommitmentViolation(
                    "error plan was committed after the projection vector "
                    "was drawn"
                )
    params = state.params
    liars = dict(liars) if liars else {}
    for i, block in liars.items():
        if not 1 <= i <= params.n:
            raise BadNodeId(f"node id {i} outside 1..{params.n}")
        if len(block) != params.alpha:
            raise ShapeMismatch(f"liar block for node {i} must have alpha symbols")
    out = []
    for i in range(1, params.n + 1):
        if i in liars:
            out.extend(int(v) for v in liars[i])
        else:
            out.extend(node_hash(state.nodes[i - 1], r))
    return HashVector(tuple(out), r.provenance, r.seed_bits)


def verify(H: HashVector, params: CodeParams, G: GeneratorMatrix) -> VerificationReport:
    """Decode the hash vector and flag the error positions.

    The decoded message-hash is re-encoded through the full generator
    matrix and compared against the group-wise corrected codeword; the
    two routes must agree or the code construction is broken.
    """
    out = hash_word_decode(params, H.symbols)
    hash_bits = params.n * params.alpha * symbol_bits(params.field.q)
    if not out.ok:
        return VerificationReport(
            STATUS_UNDECODABLE, frozenset(), hash_bits, H.seed_bits, H.provenance
        )
    re_encoded = mat_vec(params.field, G.rows, list(out.message_hash))
    if re_encoded != list(out.codeword):
        raise SingularSystem("re-encoded message-hash disagrees with decoder")
    status = STATUS_LOCATED if out.error_nodes else STATUS_CLEAN
    return VerificationReport(
        status, out.error_nodes, hash_bits, H.seed_bits, H.provenance
    )


def repair_node(state: SystemState, target: int, helpers) -> list[list[int]]:
    """Rebuild a node's content from >= k helper nodes by decoding and
    re-encoding.

    Helper corruption is detectable only with more than k helpers (any k
    blocks are consistent with some data); when redundancy is present,
    both the interpolation cross-check and the re-encode comparison must
    pass or CorruptHelper is raised.
    """
    params, G = state.params, state.G
    if not 1 <= target <= params.n:
        raise BadNodeId(f"node id {target} outside 1..{params.n}")
    helpers = sorted(set(helpers))
    if target in helpers:
        raise ValueError(f"target node {target} cannot be its own helper")
    if len(helpers) < params.k:
        raise TooFewHelpers(f"need {params.k} helpers, got {len(helpers)}")
    contents = {h: state.content(h) for h in helpers}
    try:
        X = erasure_decode(params, G, contents)
    except SingularSystem as exc:
        raise CorruptHelper(str(exc)) from exc
    C = encode(params, G, X)
    a = params.alpha
    for h in helpers:
        if [C[(h - 1) * a + j] for j in range(a)] != [list(r) for r in contents[h]]:
            raise CorruptHelper(f"node {h} fails the re-encode check")
    return [C[(target - 1) * a + j] for j in range(a)]


def accounting(params: CodeParams, kind: str = "true-random") -> AuditBudget:
    """Bit costs of one audit versus shipping the data.

    Whole-bit symbol widths throughout: M = k*alpha*N*ceil(log2 q) bits
    of stored data, n*alpha*ceil(log2 q) hash bits (independent of N),
    ceil(n/k * M) bits for the naive fetch-everything baseline, and the
    shared-randomness cost per kind, broadcast to all n nodes.
    """
    b = symbol_bits(params.field.q)
    a = params.alpha
    M = params.k * a * params.N * b
    seed = seed_bit_count(kind, params)
    return AuditBudget(
        data_bits=M,
        hash_bits=params.n * a * b,
        naive_bits=-(-params.n * M // params.k),
        seed_bits=seed,
        seed_distribution_bits=params.n * seed,
    )


def choose_field(M_bits: int, n: int, k: int, mode: str) -> FieldSpec:
    """Field sizing that pushes the audit failure probability below
    1/M: mode "thm1" targets q >= t1*M for the true-random protocol,
    mode "thm2" targets q >= 2(n-k)*t1*M for the seeded one.  Rounding
    up to a prime power only shrinks the failure bound."""
    if M_bits < 1:
        raise ValueError("M must be >= 1")
    if k >= n:
        raise ValueError(f"need n > k, got n={n} k={k}")
    t1 = (n - k) // 2
    if t1 == 0:
        raise DegenerateCode(f"(n,k)=({n},{k}) has t1 = 0: no locatable errors")
    if mode == "thm1":
        target = t1 * M_bits
    elif mode == "thm2":
        target = 2 * (n - k) * t1 * M_bits
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return FieldSpec(*next_prime_power(max(target, 2)))
