import itertools

import numpy as np
import pytest

import oracles
from nxmds.code import (
    CodeParams,
    decode_codeword,
    encode,
    erasure_decode,
    hash_word_decode,
    make_code,
    node_rows,
)
from nxmds.errors import (
    BadNodeId,
    FieldTooSmall,
    ShapeMismatch,
    SingularSystem,
    TooFewNodes,
)
from nxmds.field import make_field
from nxmds.matrix import mat_mul, mat_vec, row_rank

F5 = make_field(5)
F7 = make_field(7)


def random_matrix(rng, rows, cols, q):
    return [[int(v) for v in row] for row in rng.integers(0, q, size=(rows, cols))]


def test_params_validation():
    CodeParams(4, 2, F5, 3)
    with pytest.raises(ValueError):
        CodeParams(2, 2, F5, 1)
    with pytest.raises(ValueError):
        CodeParams(4, 0, F5, 1)
    with pytest.raises(ValueError):
        CodeParams(4, 2, F5, 0)
    with pytest.raises(FieldTooSmall):
        CodeParams(6, 2, F5, 1)


def test_derived_parameters():
    p = CodeParams(6, 3, F7, 4)
    assert p.alpha == 3
    assert p.t1 == 1
    p2 = CodeParams(9, 5, make_field(11), 2)
    assert p2.alpha == 4
    assert p2.t1 == 2


def test_eval_points():
    # 0, 1, then powers of the generator (2 for GF(5): 1,2,4,3)
    assert CodeParams(4, 2, F5, 1).eval_points == (0, 1, 2, 4)
    pts = CodeParams(6, 3, F7, 1).eval_points
    assert pts[0] == 0 and pts[1] == 1
    assert len(set(pts)) == 6


def test_node_rows():
    p = CodeParams(4, 2, F5, 3)
    assert set(node_rows(p, 1)) == {1, 2}
    assert set(node_rows(p, 4)) == {7, 8}
    q = CodeParams(4, 3, F5, 1)
    assert set(node_rows(q, 3)) == {3}
    with pytest.raises(BadNodeId):
        node_rows(p, 0)
    with pytest.raises(BadNodeId):
        node_rows(p, 5)


# single-group codewords frozen by hand for (4,2) over GF(5), points
# (0,1,2,4): message (1,0) interpolates to P(x) = 1 - x, giving
# (1,0,4,2); message (1,1) is the constant polynomial, giving (1,1,1,1)
def test_systematic_codeword_examples():
    params, G = make_code(4, 2, F5, 1)
    for msg, expect in [((1, 0), (1, 0, 4, 2)), ((1, 1), (1, 1, 1, 1))]:
        cw = tuple(
            sum(G.rs[d][i] * msg[d] for d in range(2)) % 5 for i in range(4)
        )
        assert cw == expect


def test_rs_rows_match_lagrange_oracle():
    for n, k, f in [(4, 2, F5), (6, 3, F7), (5, 4, F7)]:
        params, G = make_code(n, k, f)
        pts = params.eval_points
        for d in range(k):
            unit = [(pts[j], 1 if j == d else 0) for j in range(k)]
            assert list(G.rs[d]) == oracles.lagrange_values(f, unit, pts)


def test_generator_block_structure():
    params, G = make_code(6, 3, F7, 2)
    a, k = params.alpha, params.k
    assert len(G.rows) == params.n * a
    assert all(len(r) == k * a for r in G.rows)
    for i in range(params.n):
        for g in range(a):
            row = G.rows[i * a + g]
            for c in range(k * a):
                if c // k != g:
                    assert row[c] == 0


@pytest.mark.parametrize("n,k,f", [(4, 2, F5), (6, 3, F7), (5, 2, F7), (8, 6, make_field(11))])
def test_node_level_mds(n, k, f):
    params, G = make_code(n, k, f)
    a = params.alpha
    for subset in itertools.combinations(range(1, n + 1), k):
        stacked = []
        for i in subset:
            stacked.extend(G.rows[(i - 1) * a:i * a])
        assert row_rank(f, stacked) == k * a


def test_encode_matches_full_matrix_product():
    rng = np.random.default_rng(7)
    params, G = make_code(6, 3, F7, 4)
    X = random_matrix(rng, params.k * params.alpha, params.N, 7)
    C = encode(params, G, X)
    cols = list(zip(*X))
    expect_cols = [mat_vec(F7, G.rows, list(c)) for c in cols]
    assert C == [list(r) for r in zip(*expect_cols)]


def test_encode_zero_and_linearity():
    rng = np.random.default_rng(3)
    params, G = make_code(4, 2, F5, 3)
    zero = [[0] * 3 for _ in range(4)]
    assert encode(params, G, zero) == [[0] * 3 for _ in range(8)]
    X1 = random_matrix(rng, 4, 3, 5)
    X2 = random_matrix(rng, 4, 3, 5)
    s = [[(a + b) % 5 for a, b in zip(r1, r2)] for r1, r2 in zip(X1, X2)]
    C1, C2 = encode(params, G, X1), encode(params, G, X2)
    assert encode(params, G, s) == [
        [(a + b) % 5 for a, b in zip(r1, r2)] for r1, r2 in zip(C1, C2)
    ]


def test_encode_shape_checks():
    params, G = make_code(4, 2, F5, 3)
    with pytest.raises(ShapeMismatch):
        encode(params, G, [[0] * 3 for _ in range(3)])
    with pytest.raises(ShapeMismatch):
        encode(params, G, [[0] * 2 for _ in range(4)])


def test_systematic_readoff():
    rng = np.random.default_rng(11)
    params, G = make_code(4, 2, F5, 3)
    a, k = params.alpha, params.k
    X = random_matrix(rng, k * a, 3, 5)
    C = encode(params, G, X)
    for i in range(k):
        for g in range(a):
            assert C[i * a + g] == X[g * k + i]


def node_slices(params, C):
    a = params.alpha
    return {
        i: [C[(i - 1) * a + j] for j in range(a)]
        for i in range(1, params.n + 1)
    }


@pytest.mark.parametrize("n,k,f", [(4, 2, F5), (6, 3, F7)])
def test_erasure_decode_every_subset(n, k, f):
    rng = np.random.default_rng(n * 100 + k)
    params, G = make_code(n, k, f, 3)
    X = random_matrix(rng, k * params.alpha, 3, f.q)
    slices = node_slices(params, encode(params, G, X))
    for subset in itertools.combinations(range(1, n + 1), k):
        got = erasure_decode(params, G, {i: slices[i] for i in subset})
        assert got == X


def test_erasure_decode_overdetermined_consistency():
    rng = np.random.default_rng(23)
    params, G = make_code(4, 2, F5, 3)
    X = random_matrix(rng, 4, 3, 5)
    slices = node_slices(params, encode(params, G, X))
    assert erasure_decode(params, G, slices) == X
    # corrupt a non-anchor node: the cross-check must trip
    bad = {i: [list(r) for r in s] for i, s in slices.items()}
    bad[4][0][1] = (bad[4][0][1] + 1) % 5
    with pytest.raises(SingularSystem):
        erasure_decode(params, G, bad)


def test_erasure_decode_errors():
    params, G = make_code(4, 2, F5, 3)
    content = [[0] * 3, [0] * 3]
    with pytest.raises(TooFewNodes):
        erasure_decode(params, G, {1: content})
    with pytest.raises(BadNodeId):
        erasure_decode(params, G, {0: content, 2: content})
    with pytest.raises(ShapeMismatch):
        erasure_decode(params, G, {1: content, 2: [[0] * 3]})


def test_replication_code():
    f2 = make_field(2)
    params, G = make_code(2, 1, f2, 1)
    assert G.rows == ((1,), (1,))
    assert encode(params, G, [[1]]) == [[1], [1]]


def test_decode_clean_words():
    params, _ = make_code(4, 2, F5)
    for cw in oracles.all_codewords(params):
        out = decode_codeword(params, cw)
        assert out.ok and out.codeword == cw and out.errors == frozenset()
        assert out.message == cw[:2]


def test_decode_single_errors_exhaustive():
    params, _ = make_code(4, 2, F5)
    for cw in oracles.all_codewords(params):
        for pos in range(4):
            for delta in range(1, 5):
                word = list(cw)
                word[pos] = (word[pos] + delta) % 5
                out = decode_codeword(params, word)
                assert out.ok
                assert out.codeword == cw
                assert out.errors == {pos}


def test_decode_agrees_with_min_distance_oracle():
    # includes garbage beyond the decoding radius
    params, _ = make_code(4, 2, F5)
    for word in itertools.product(range(5), repeat=4):
        out = decode_codeword(params, word)
        expect = oracles.min_distance_decode(params, word, params.t1)
        if expect is None:
            assert not out.ok
        else:
            assert out.ok and out.codeword == expect


def test_decode_two_error_radius():
    # (6,2): t1 = 2, distance-5 code; all weight-2 patterns on one codeword
    params, G = make_code(6, 2, F7)
    base = tuple(sum(G.rs[d][i] * (3, 5)[d] for d in range(2)) % 7 for i in range(6))
    for p1, p2 in itertools.combinations(range(6), 2):
        word = list(base)
        word[p1] = (word[p1] + 2) % 7
        word[p2] = (word[p2] + 4) % 7
        out = decode_codeword(params, word)
        assert out.ok and out.codeword == base and out.errors == {p1, p2}


def hash_codeword(params, G, mhash):
    """Encode a message-hash vector into the n*alpha hash layout."""
    return [r[0] for r in encode(params, G, [[v] for v in mhash])]


def test_hash_word_decode_clean():
    rng = np.random.default_rng(5)
    params, G = make_code(4, 2, F5, 1)
    mhash = [int(v) for v in rng.integers(0, 5, size=4)]
    H = hash_codeword(params, G, mhash)
    out = hash_word_decode(params, H)
    assert out.ok
    assert out.error_nodes == frozenset()
    assert list(out.message_hash) == mhash
    assert list(out.codeword) == H


def test_hash_word_decode_one_bad_block():
    rng = np.random.default_rng(6)
    params, G = make_code(4, 2, F5, 1)
    a = params.alpha
    mhash = [int(v) for v in rng.integers(0, 5, size=4)]
    H = hash_codeword(params, G, mhash)
    for node in range(1, 5):
        for rep in [(1, 1), (4, 0), (2, 3)]:
            bad = list(H)
            lo = (node - 1) * a
            if bad[lo:lo + a] == list(rep):
                continue
            bad[lo:lo + a] = rep
            out = hash_word_decode(params, bad)
            assert out.ok
            assert list(out.message_hash) == mhash
            changed = {node} if list(rep) != H[lo:lo + a] else set()
            assert out.error_nodes == changed


def test_hash_word_decode_beyond_radius_matches_oracle():
    params, G = make_code(4, 2, F5, 1)
    a = params.alpha
    rng = np.random.default_rng(8)
    for _ in range(200):
        mhash = [int(v) for v in rng.integers(0, 5, size=4)]
        H = hash_codeword(params, G, mhash)
        n1, n2 = rng.choice(4, size=2, replace=False) + 1
        for node in (n1, n2):
            lo = (node - 1) * a
            H[lo:lo + a] = [int(v) for v in rng.integers(0, 5, size=a)]
        out = hash_word_decode(params, H)
        # per-group oracle: decodable iff every group word has a unique
        # codeword within t1
        groups_ok = True
        for g in range(a):
            word = [H[i * a + g] for i in range(4)]
            if oracles.min_distance_decode(params, word, params.t1) is None:
                groups_ok = False
        assert out.ok == groups_ok


def test_hash_word_decode_shape():
    params, _ = make_code(4, 2, F5, 1)
    with pytest.raises(ShapeMismatch):
        hash_word_decode(params, [0] * 7)


def test_codeparams_cache_friendly():
    a = CodeParams(4, 2, F5, 3)
    b = CodeParams(4, 2, F5, 3)
    assert a == b and hash(a) == hash(b)
    ga = make_code(4, 2, F5, 3)[1]
    gb = make_code(4, 2, F5, 3)[1]
    assert ga.rs is gb.rs
