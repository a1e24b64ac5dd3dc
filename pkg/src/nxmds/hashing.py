"""The shared projection vector and per-node hash products.

Every node projects each stored row onto the same length-N vector r; the
n*alpha inner products, stacked in node order, form a codeword of the
(n,k) code offset by the projected errors.  r comes in two flavors:

  true-random    N uniform symbols, N*ceil(log2 q) shared bits
  pseudorandom   expanded from a seed of two elements of an extension
                 F_{q^m}, 2*m*ceil(log2 q) shared bits

The pseudorandom expansion is r_i = <coords(x^i), coords(y)> for
i = 0..N-1, with (x, y) the seed and coords the F_q-coordinate map of
the extension.  Any nonzero linear test sum(beta_i * r_i) then equals
<coords(P(x)), coords(y)> for the nonzero polynomial P of degree
<= N-1, which pins the test's bias at (q-1)(N-1)/q^m exactly; m is the
smallest degree that pushes this below 1.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from . import clock
from .errors import ExtensionTooSmall, ShapeMismatch
from .field import make_extension, symbol_bits
from .matrix import dot


@dataclass(frozen=True)
class RandomVector:
    symbols: tuple[int, ...]
    field: object
    provenance: str  # "true-random" | "pseudorandom"
    seed_bits: int
    drawn_at: int


@dataclass(frozen=True)
class PrgSeed:
    """Two extension-field elements; everything else is derivable."""

    x: int
    y: int
    ext: object
    drawn_at: int = dataclasses.field(default_factory=clock.tick)

    @property
    def m(self) -> int:
        return self.ext.m

    @property
    def bits(self) -> int:
        return 2 * self.ext.m * symbol_bits(self.ext.base.q)


@dataclass(frozen=True)
class HashVector:
    """n*alpha hash symbols in node-block order, plus how the projection
    vector was obtained (needed for honest accounting in reports)."""

    symbols: tuple[int, ...]
    provenance: str
    seed_bits: int


def minimal_extension_degree(q: int, N: int) -> int:
    """Smallest m >= 1 with q^m >= (q-1)(N-1)."""
    need = (q - 1) * (N - 1)
    m = 1
    while q ** m < need:
        m += 1
    return m


def draw_random_vector(N: int, field, rng) -> RandomVector:
    if N < 1:
        raise ValueError("N must be >= 1")
    symbols = tuple(int(v) for v in rng.integers(0, field.q, size=N))
    return RandomVector(
        symbols, field, "true-random", N * symbol_bits(field.q), clock.tick()
    )


def make_prg_seed(field, N: int, rng) -> PrgSeed:
    if N < 1:
        raise ValueError("N must be >= 1")
    m = minimal_extension_degree(field.q, N)
    ext = make_extension(field, m)
    x = int(rng.integers(0, ext.q))
    y = int(rng.integers(0, ext.q))
    return PrgSeed(x, y, ext)


def prg_expand(seed: PrgSeed, N: int) -> RandomVector:
    """r_i = <coords(x^i), coords(y)>, by iterated multiplication by x.

    Costs N-1 extension multiplications plus N coordinate inner
    products: O(N m^2) base-field operations.  The base-field loop is
    written out so an instrumented field sees every operation.
    """
    ext = seed.ext
    base = ext.base
    if ext.q < (base.q - 1) * (N - 1):
        raise ExtensionTooSmall(
            f"q^m = {ext.q} below (q-1)(N-1) = {(base.q - 1) * (N - 1)}"
        )
    ycoords = ext.coords(seed.y)
    out = []
    power = 1
    for i in range(N):
        acc = 0
        for a, b in zip(ext.coords(power), ycoords):
            acc = base.add(acc, base.mul(a, b))
        out.append(acc)
        if i + 1 < N:
            power = ext.mul(power, seed.x)
    return RandomVector(
        tuple(out), base, "pseudorandom", seed.bits, seed.drawn_at
    )


def node_hash(content, r: RandomVector):
    """One symbol per stored row: the row's inner product with r."""
    N = len(r.symbols)
    if any(len(row) != N for row in content):
        raise ShapeMismatch(f"rows must have length {N}")
    sym = list(r.symbols)
    return tuple(dot(r.field, list(row), sym) for row in content)


def seed_bit_count(kind: str, params) -> int:
    """Shared-randomness cost: Theta(N) bits for the true-random vector,
    Theta(log N) for the seed."""
    b = symbol_bits(params.field.q)
    if kind == "true-random":
        return params.N * b
    if kind == "pseudorandom":
        return 2 * minimal_extension_degree(params.field.q, params.N) * b
    raise ValueError(f"unknown randomness kind {kind!r}")
