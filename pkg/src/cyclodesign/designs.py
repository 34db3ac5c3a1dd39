"""Supports of fixed-weight codewords as 2-designs.

Blocks are stored as rows of ``np.packbits`` output (bit ``j`` of a row is
point ``j``, big-endian within each byte).  Pair coverage is counted either
for every pair (incidence Gram matrix through float32 BLAS, exact because
every partial sum stays below 2^24) or for uniformly sampled pairs (AND +
popcount on per-point bitsets over the blocks).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .code import (
    CodeSpec,
    Regime,
    _b_chunks,
    _trace_a,
    _zero_counts_a,
    analytic_distribution_table,
    default_budget,
    scalar_representatives,
)
from .errors import (
    BadLevel,
    BudgetExceeded,
    FormulaMismatch,
    MultiplicityViolation,
    NonIntegralLambda,
    NotADesign,
    UnsupportedRegime,
    WeightAbsent,
)
from .util import rng_for

FULL_PAIR_LIMIT = 10**8
_GRAM_ROWS = 8192


def theorem2_bound(min_weight: int, n: int, p: int) -> int:
    """Largest w with ``w - floor((w + p - 2) / (p - 1)) < min_weight``.

    The left side is nondecreasing in w, so the admissible w form an initial
    segment; weights up to ``min(n, bound)`` have supports shared only by
    scalar multiples.  The result is not capped at n, so callers can tell
    at a glance whether every weight up to the length qualifies.
    """
    if min_weight < 1:
        raise ValueError("minimum weight must be positive")

    def ok(w):
        return w - (w + p - 2) // (p - 1) < min_weight

    lo, hi = 1, 2
    while ok(hi):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class DesignParams:
    t: int
    v: int
    k: int
    lam: int
    b: int

    def double_counting_holds(self) -> bool:
        return self.lam * math.comb(self.v, 2) == self.b * math.comb(self.k, 2)

    def as_dict(self) -> dict:
        return {"t": self.t, "v": self.v, "k": self.k, "lambda": self.lam, "b": self.b}


@dataclass
class BlockSet:
    v: int
    k: int
    blocks: np.ndarray = field(repr=False)
    multiplicity_checked: bool = False

    @property
    def b(self) -> int:
        return len(self.blocks)

    def incidence(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        """Boolean block-by-point matrix for a range of blocks."""
        rows = self.blocks[start:stop]
        return np.unpackbits(rows, axis=1, count=self.v).astype(bool)

    def point_lists(self) -> list[list[int]]:
        """Blocks as ascending point lists, lexicographically sorted."""
        lists = [np.flatnonzero(row).tolist() for row in self.incidence()]
        lists.sort()
        return lists

    def replication(self) -> np.ndarray:
        """Number of blocks through each point."""
        out = np.zeros(self.v, dtype=np.int64)
        for s in range(0, self.b, _GRAM_ROWS):
            out += self.incidence(s, s + _GRAM_ROWS).sum(axis=0)
        return out

    def point_bitsets(self) -> np.ndarray:
        """Per-point bitsets over blocks, as uint64 words (transposed incidence)."""
        words = (self.b + 63) // 64
        out = np.zeros((self.v, words * 8), dtype=np.uint8)
        step = _GRAM_ROWS  # multiple of 8 keeps byte alignment
        for s in range(0, self.b, step):
            chunk = self.incidence(s, s + step).T
            packed = np.packbits(chunk, axis=1)
            out[:, s // 8: s // 8 + packed.shape[1]] = packed
        return out.view(np.uint64)

    def write(self, path) -> None:
        """Text block file: ``v k b`` then one sorted block per line."""
        with open(path, "w") as fh:
            fh.write(f"{self.v} {self.k} {self.b}\n")
            for block in self.point_lists():
                fh.write(" ".join(map(str, block)) + "\n")

    @classmethod
    def read(cls, path) -> BlockSet:
        with open(path) as fh:
            v, k, b = map(int, fh.readline().split())
            inc = np.zeros((b, v), dtype=bool)
            for i in range(b):
                inc[i, [int(x) for x in fh.readline().split()]] = True
        return cls.from_incidence(inc, k=k)

    @classmethod
    def from_incidence(cls, incidence, k: int | None = None) -> BlockSet:
        inc = np.asarray(incidence, dtype=bool)
        sizes = inc.sum(axis=1)
        k = int(sizes[0]) if k is None else k
        if np.any(sizes != k):
            raise ValueError("blocks do not all have the same size")
        return cls(v=inc.shape[1], k=k, blocks=np.packbits(inc, axis=1))

    @classmethod
    def from_point_lists(cls, v: int, blocks) -> BlockSet:
        blocks = list(blocks)
        inc = np.zeros((len(blocks), v), dtype=bool)
        for i, blk in enumerate(blocks):
            inc[i, list(blk)] = True
        return cls.from_incidence(inc)


# ---------------------------------------------------------------- extraction


def _digit_words(p: int) -> int:
    k = 1
    while p ** (k + 1) <= 2**63:
        k += 1
    return k


def _encode_rows(rows: np.ndarray, p: int) -> np.ndarray:
    """Pack rows of base-p digits into uint64 words (exact, for equality tests)."""
    k = _digit_words(p)
    n = rows.shape[1]
    pad = (-n) % k
    padded = np.pad(rows.astype(np.uint64), ((0, 0), (0, pad)))
    grouped = padded.reshape(rows.shape[0], -1, k)
    weights = np.array([p**i for i in range(k)], dtype=np.uint64)
    return (grouped * weights).sum(axis=2, dtype=np.uint64)


def _normalize(words: np.ndarray, p: int) -> np.ndarray:
    """Scale each codeword so its first nonzero entry is 1."""
    first = np.argmax(words != 0, axis=1)
    lead = words[np.arange(len(words)), first].astype(np.int64)
    inv = np.array([0] + [pow(c, p - 2, p) for c in range(1, p)], dtype=np.int64)
    return (words.astype(np.int64) * inv[lead][:, None]) % p


def _void_rows(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    return arr.view(np.dtype((np.void, arr.dtype.itemsize * arr.shape[1]))).ravel()


@dataclass
class SupportCollector:
    """Accumulates supports (and normalized codewords) for one weight."""

    weight: int
    supports: list = field(default_factory=list)
    normalized: list = field(default_factory=list)
    ids: list = field(default_factory=list)

    def add(self, words: np.ndarray, ids: np.ndarray, p: int) -> None:
        if len(words) == 0:
            return
        self.supports.append(np.packbits(words != 0, axis=1))
        self.normalized.append(_encode_rows(_normalize(words, p), p))
        self.ids.append(ids)

    @property
    def count(self) -> int:
        return sum(len(s) for s in self.supports)


def check_support_multiplicity(supports: np.ndarray, normalized: np.ndarray, p: int,
                               ids: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Deduplicate supports and require each to come from exactly p - 1
    codewords that are scalar multiples of each other.

    Returns the distinct supports (sorted) and their multiplicities.
    """
    keys = _void_rows(supports)
    uniq, first, inverse, counts = np.unique(keys, return_index=True, return_inverse=True,
                                             return_counts=True)
    bad = np.nonzero(counts != p - 1)[0]
    if bad.size:
        witness = None
        if ids is not None:
            witness = ids[inverse == bad[0]].tolist()
        raise MultiplicityViolation(
            f"{bad.size} supports arise from a number of codewords other than {p - 1}; "
            f"e.g. {counts[bad[0]]} codewords {witness}")
    # scalar multiples share one normalized form
    both = _void_rows(np.hstack([supports, normalized.view(np.uint8)]))
    if len(np.unique(both)) != len(uniq):
        raise MultiplicityViolation("codewords with a common support are not scalar multiples")
    return supports[first], counts


def _enumerate_by_weight(spec: CodeSpec, weights: set[int]) -> dict[int, SupportCollector]:
    p, q = spec.p, spec.q
    out = {w: SupportCollector(w) for w in weights}
    hs = np.arange(p)
    for a in spec.a_domain:
        a = int(a)
        ta = _trace_a(spec, a).astype(np.int8)
        for chunk, tb in _b_chunks(spec, np.arange(q, dtype=np.int64)):
            base = (tb + ta[None, :]) % p  # Tr(a u) + Tr(b x), one row per b
            zeros = np.stack([np.count_nonzero(base == (-h) % p, axis=1) for h in hs], axis=1)
            wts = q - zeros
            for w, col in out.items():
                bi, hi = np.nonzero(wts == w)
                if bi.size:
                    words = (base[bi] + hi[:, None]) % p
                    ids = np.stack([np.full(bi.size, a), chunk[bi], hi], axis=1)
                    col.add(words, ids, p)
    return out


def extract_all_blocks(spec: CodeSpec, weights=None, budget: int | None = None) -> dict[int, BlockSet]:
    """One enumeration pass collecting the supports of every requested weight.

    ``weights`` defaults to every weight of the closed-form table other than
    0 and p^m (or, for gcd(m, l) = 1, must be given).
    """
    budget = default_budget() if budget is None else budget
    if spec.pair_count > budget:
        raise BudgetExceeded(f"{spec.pair_count} (a, b) pairs exceed budget {budget}")
    if weights is None:
        if spec.regime is Regime.UNIT_GCD:
            raise UnsupportedRegime("pass explicit weights when gcd(m, l) = 1")
        weights = [w for w in analytic_distribution_table(spec).entries if 0 < w < spec.q]
    weights = sorted(set(int(w) for w in weights))
    collected = _enumerate_by_weight(spec, set(weights))
    out = {}
    for w in weights:
        col = collected[w]
        if col.count == 0:
            raise WeightAbsent(f"no codeword of weight {w}")
        supports = np.concatenate(col.supports)
        normalized = np.concatenate(col.normalized)
        ids = np.concatenate(col.ids)
        distinct, _ = check_support_multiplicity(supports, normalized, spec.p, ids)
        out[w] = BlockSet(v=spec.q, k=w, blocks=distinct, multiplicity_checked=True)
    return out


def extract_blocks(spec: CodeSpec, weight: int, budget: int | None = None) -> BlockSet:
    if not 0 < weight <= spec.q:
        raise WeightAbsent(f"weight {weight} outside (0, {spec.q}]")
    return extract_all_blocks(spec, [weight], budget=budget)[weight]


# ---------------------------------------------------------------- verification


@dataclass
class DesignCertificate:
    params: DesignParams
    mode: str
    pairs_checked: int
    replication: int

    def as_dict(self) -> dict:
        return {**self.params.as_dict(), "mode": self.mode, "pairs_checked": self.pairs_checked,
                "replication": self.replication}


def lambda_from_counts(v: int, k: int, b: int) -> int:
    """lambda = b k (k - 1) / (v (v - 1)), which must be an integer."""
    if not v > k >= 2:
        raise ValueError(f"need v > k >= 2, got v={v}, k={k}")
    lam = Fraction(b * k * (k - 1), v * (v - 1))
    if lam.denominator != 1:
        raise NonIntegralLambda(f"b k (k-1) / (v (v-1)) = {lam} is not an integer")
    return int(lam)


def reduce_design_level(t: int, v: int, k: int, lam, i: int) -> Fraction:
    """lambda_i = lambda C(v - i, t - i) / C(k - i, t - i)."""
    if not (0 <= i <= t <= k <= v):
        raise BadLevel(f"need 0 <= i <= t <= k <= v, got i={i}, t={t}, k={k}, v={v}")
    return Fraction(lam) * math.comb(v - i, t - i) / math.comb(k - i, t - i)


def pair_coverage(bs: BlockSet) -> np.ndarray:
    """v x v matrix whose (i, j) entry counts the blocks containing i and j."""
    gram = np.zeros((bs.v, bs.v), dtype=np.float64)
    for s in range(0, bs.b, _GRAM_ROWS):
        x = bs.incidence(s, s + _GRAM_ROWS).astype(np.float32)
        gram += x.T @ x
    return np.rint(gram).astype(np.int64)


def sampled_pairs(v: int, count: int, seed: int, name: str = "pair-coverage") -> np.ndarray:
    """``count`` uniformly random unordered pairs of distinct points."""
    rng = rng_for(seed, name)
    i = rng.integers(0, v, size=count)
    j = rng.integers(0, v - 1, size=count)
    j = np.where(j >= i, j + 1, j)
    return np.sort(np.stack([i, j], axis=1), axis=1)


def sampled_pair_coverage(bs: BlockSet, pairs: np.ndarray, batch: int = 256) -> np.ndarray:
    cols = bs.point_bitsets()
    out = np.empty(len(pairs), dtype=np.int64)
    for s in range(0, len(pairs), batch):
        pi = pairs[s:s + batch]
        both = cols[pi[:, 0]] & cols[pi[:, 1]]
        out[s:s + batch] = np.bitwise_count(both).sum(axis=1, dtype=np.int64)
    return out


def _witnesses(pairs, counts, limit=4):
    out = []
    seen = set()
    for (i, j), c in zip(pairs, counts):
        if int(c) not in seen:
            seen.add(int(c))
            out.append({"pair": [int(i), int(j)], "coverage": int(c)})
        if len(out) >= limit:
            break
    return out


def verify_2design(bs: BlockSet, mode: str = "auto", sample_count: int = 100_000,
                   seed: int = 0) -> DesignCertificate:
    """Certify that every pair of points lies in the same number of blocks.

    ``auto`` picks ``full`` when b * C(k, 2) <= 10^8 and ``sampled``
    otherwise.  The point replication is always checked for every point.
    """
    if bs.b == 0:
        raise ValueError("empty block set")
    if mode == "auto":
        mode = "full" if bs.b * math.comb(bs.k, 2) <= FULL_PAIR_LIMIT else "sampled"
    if mode == "full":
        gram = pair_coverage(bs)
        iu = np.triu_indices(bs.v, 1)
        counts = gram[iu]
        pairs = np.stack(iu, axis=1)
        replication = np.diag(gram)
    elif mode == "sampled":
        pairs = sampled_pairs(bs.v, sample_count, seed)
        counts = sampled_pair_coverage(bs, pairs)
        replication = bs.replication()
    else:
        raise ValueError(f"unknown verification mode {mode!r}")

    values = np.unique(counts)
    if len(values) != 1:
        raise NotADesign(f"pair coverage takes {len(values)} values: {values[:8].tolist()}",
                         witnesses=_witnesses(pairs, counts))
    lam = int(values[0])
    if lam * bs.v * (bs.v - 1) != bs.b * bs.k * (bs.k - 1):
        raise NotADesign(f"sampled coverage {lam} contradicts double counting "
                         f"b k (k-1) / (v (v-1)) = {Fraction(bs.b * bs.k * (bs.k - 1), bs.v * (bs.v - 1))}",
                         witnesses=_witnesses(pairs, counts))
    reps = np.unique(replication)
    r_expected = reduce_design_level(2, bs.v, bs.k, lam, 1)
    if len(reps) != 1 or reps[0] != r_expected:
        raise NotADesign(f"point replication {reps[:8].tolist()} != lambda_1 = {r_expected}")
    params = DesignParams(t=2, v=bs.v, k=bs.k, lam=lam, b=bs.b)
    return DesignCertificate(params=params, mode=mode, pairs_checked=len(pairs),
                             replication=int(reps[0]))


# ---------------------------------------------------------------- closed forms


def closed_form_lambdas(spec: CodeSpec) -> list[tuple[int, Fraction]]:
    """The (weight, lambda) pairs exactly as the closed formulas read, per regime."""
    p, m, d = spec.p, spec.m, spec.d

    def P(e):
        return Fraction(p) ** e

    half = Fraction(1, 2)
    top = P(m) - P(m - 1)
    w0 = P(m - 1) * (p - 1)
    if spec.regime is Regime.ODD_ODD:
        lo, hi = P((m - 1) // 2), P((m + 1) // 2)
        rows = [
            (top, (top - 1) * (P(m - 1) + 1)),
            (top + lo, half * lo * (hi - lo + 1) * (top + lo - 1)),
            (top - lo, half * lo * (hi - lo - 1) * (top - lo - 1)),
        ]
    elif spec.regime is Regime.EVEN_ODD:
        s, h2 = P(m // 2 - 1), P(m // 2)
        rows = [
            (top, top - 1),
            (w0 + s, half * s * (P(m // 2 + 1) - h2 + 1) * (top + s - 1)),
            (w0 - s, half * s * (P(m // 2 + 1) - h2 - 1) * (top - s - 1)),
            (w0 + s * (p - 1), half * s * (h2 + 1) * (top + h2 - s - 1)),
            (w0 - s * (p - 1), half * s * (h2 - 1) * (top - h2 + s - 1)),
        ]
    elif spec.regime is Regime.EVEN_QUOTIENT:
        e = spec.eps
        s, h2, den = P(m // 2 - 1), P(m // 2), P(d) + 1
        rows = [
            (top, (top - 1) * (P(m - d) - P(m - 2 * d) + 1)),
            (w0 + e * s, P(m // 2 + d - 1) * (P(m // 2 + 1) - h2 + e) * (top + e * s - 1) / den),
            (w0 - e * s * (p - 1),
             P(m // 2 + d - 1) * (h2 - e) * (top - e * h2 + e * s - 1) / den),
            (w0 + e * P(m // 2 + d - 1) * (p - 1),
             P(m // 2 - d - 1) * (P(m // 2 - d) + e)
             * (top + e * P(m // 2 + d) - e * P(m // 2 + d - 1) - 1) / den),
            (w0 - e * P(m // 2 + d - 1),
             P(m // 2 - d - 1) * (P(m // 2 - d + 1) - P(m // 2 - d) - e)
             * (top - e * P(m // 2 + d - 1) - 1) / den),
        ]
    elif spec.regime is Regime.HALF:
        s, h2 = P(m // 2 - 1), P(m // 2)
        rows = [
            (top, top - 1),
            (top - s, s * (P(m // 2 + 1) - h2 - 1) * (top - s - 1) / (h2 + 1)),
            (top + h2 - s, s * (top + h2 - s - 1)),
        ]
    else:
        raise UnsupportedRegime("no closed-form design parameters when gcd(m, l) = 1")
    return [(int(w), lam) for w, lam in rows]


@dataclass
class FormulaCheck:
    weight: int
    printed: Fraction
    from_counts: int
    b: int

    @property
    def agrees(self) -> bool:
        return self.printed == self.from_counts


def closed_form_checks(spec: CodeSpec) -> list[FormulaCheck]:
    table = analytic_distribution_table(spec).entries
    out = []
    for w, lam in closed_form_lambdas(spec):
        a_w = table.get(w, 0)
        if a_w % (spec.p - 1):
            raise NonIntegralLambda(f"A_{w} = {a_w} is not divisible by p - 1")
        b = a_w // (spec.p - 1)
        out.append(FormulaCheck(weight=w, printed=lam, from_counts=lambda_from_counts(spec.q, w, b), b=b))
    return out


def theorem5_parameters(spec: CodeSpec) -> list[tuple[int, int, int]]:
    """``(weight, lambda, b)`` per design weight, lambda cross-computed two ways.

    Raises :class:`FormulaMismatch` when a closed formula disagrees with
    the lambda implied by the weight multiplicities.
    """
    checks = closed_form_checks(spec)
    table_weights = {w for w in analytic_distribution_table(spec).entries if 0 < w < spec.q}
    findings = [
        {"weight": c.weight, "printed": str(c.printed), "from_counts": c.from_counts}
        for c in checks if not c.agrees
    ]
    missing = table_weights - {c.weight for c in checks}
    findings += [{"weight": w, "printed": None, "from_counts": None} for w in sorted(missing)]
    if findings:
        raise FormulaMismatch(f"{len(findings)} closed-form lambda values disagree", findings)
    return [(c.weight, c.from_counts, c.b) for c in checks]


# ---------------------------------------------------------------- on-demand coverage


@dataclass
class CoverageSample:
    weight: int
    points: np.ndarray = field(repr=False)
    coverage: np.ndarray = field(repr=False)  # S x S, in supports (codewords / (p - 1))

    @property
    def pair_values(self) -> np.ndarray:
        iu = np.triu_indices(len(self.points), 1)
        return self.coverage[iu]

    @property
    def replication_values(self) -> np.ndarray:
        return np.diag(self.coverage)

    @property
    def pairs_checked(self) -> int:
        s = len(self.points)
        return s * (s - 1) // 2


def _trace_columns(spec: CodeSpec, pts: np.ndarray) -> np.ndarray:
    """Tr(b x) for every b (rows) and the coordinates ``pts`` (columns)."""
    ctx = spec.ctx
    lb = ctx.log_table[np.arange(spec.q)][:, None]
    lx = ctx.log_table[spec.points[pts]][None, :]
    out = ctx.trace_table[ctx.exp_table[(lb + lx) % ctx.n]]
    out[(lb < 0) | (lx < 0)] = 0
    return out


def coverage_on_demand(spec: CodeSpec, weights=None, points: int = 448, seed: int = 0) -> dict[int, CoverageSample]:
    """Exact pair coverage among ``points`` random coordinates, without storing blocks.

    Every codeword is visited once: for each ``a`` the weights of all
    ``(b, h)`` come from the closed-form zero counts, and the codeword
    values at the sampled coordinates come from the trace tables.  Codewords
    ``(y a, y b, y h)`` for y in F_p^* share a support, so only one ``a``
    per F_p^* orbit is visited and its counts are scaled by p - 1.  The
    coverage is reported per support (codeword count / (p - 1)).
    """
    if spec.regime is Regime.UNIT_GCD:
        raise UnsupportedRegime("on-demand coverage classifies codewords by the closed forms")
    p, q = spec.p, spec.q
    if q * p >= 2**24:
        raise ValueError("q p rows per coefficient a would overflow exact float32 sums")
    if weights is None:
        weights = [w for w in analytic_distribution_table(spec).entries if 0 < w < q]
    weights = sorted(int(w) for w in weights)
    rng = rng_for(seed, "coverage-points")
    pts = np.sort(rng.choice(q, size=min(points, q), replace=False))
    tb = _trace_columns(spec, pts)
    s = len(pts)
    grams = {w: np.zeros((s, s), dtype=np.float64) for w in weights}
    all_b = np.arange(q, dtype=np.int64)

    def visit(a):
        # rows ordered h-major: row h * q + b is the codeword (a, b, h)
        ta = _trace_a(spec, a)[pts].astype(np.int8)
        base = (tb + ta[None, :]) % p
        nz = np.empty((p, q, s), dtype=bool)
        for h in range(p):
            np.not_equal(base, (-h) % p, out=nz[h])
        nz = nz.reshape(p * q, s)
        cls = (q - _zero_counts_a(spec, a, all_b)).T.ravel()
        for w in weights:
            rows = np.flatnonzero(cls == w)
            # float32 partial sums stay exact: rows.size <= q p < 2^24
            if rows.size:
                part = nz[rows].astype(np.float32)
                grams[w] += part.T @ part

    # a = 0 once, every other orbit representative counted p - 1 times
    visit(0)
    zero_part = {w: grams[w].copy() for w in weights}
    for w in weights:
        grams[w][:] = 0
    for a in scalar_representatives(spec):
        visit(int(a))
    out = {}
    for w in weights:
        total = np.rint(zero_part[w] + (p - 1) * grams[w]).astype(np.int64)
        if np.any(total % (p - 1)):
            raise MultiplicityViolation(f"weight {w}: coverage not divisible by p - 1")
        out[w] = CoverageSample(weight=w, points=pts, coverage=total // (p - 1))
    return out
