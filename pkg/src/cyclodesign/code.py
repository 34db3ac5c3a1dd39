"""The trace code {(Tr(a x^(p^l+1) + b x) + h)_x : a, b, h} and its weights.

Coordinates are indexed by field elements: position 0 is the element 0 and
position 1 + i is alpha^i.  A codeword is identified by ``(a, b, h)``; when
``l = m/2`` the coefficient ``a`` is restricted to the subfield
GF(p^(m/2)), otherwise it ranges over all of GF(p^m).

Weights are computed two ways: by counting zero coordinates directly
(``weight_bruteforce``) and by the exponential-sum case analysis
(``weight_analytic``).  ``weight_distribution`` runs either over every id.
"""

from __future__ import annotations

import math
import os
from collections.abc import Iterable, Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np

from . import field as F
from .char_sums import kernel_condition, linearized_reduction, linearized_rhs
from .errors import BadExponent, BudgetExceeded, DomainViolation, UnsupportedRegime
from .field import FieldCtx
from .linalg import rank_mod_p

DEFAULT_BUDGET = 3**18
_CHUNK_ELEMS = 1 << 22


def default_budget() -> int:
    """Enumeration budget in (a, b) pairs; ``CYCLODESIGN_BUDGET`` overrides."""
    env = os.environ.get("CYCLODESIGN_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def default_threads() -> int:
    return os.cpu_count() or 1


class Regime(str, Enum):
    ODD_ODD = "OddOdd"  # m odd (so m/d odd)
    EVEN_ODD = "EvenOdd"  # m even, m/d odd
    EVEN_QUOTIENT = "EvenQuotient"  # m/d >= 4 even
    HALF = "Half"  # m = 2d, i.e. l = m/2
    UNIT_GCD = "UnitGcd"  # d = 1; no closed forms here


@dataclass(frozen=True)
class CodewordId:
    a: int
    b: int
    h: int


@dataclass(frozen=True, eq=False)
class CodeSpec:
    ctx: FieldCtx
    l: int
    d: int
    regime: Regime
    a_domain: np.ndarray = field(repr=False)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def m(self) -> int:
        return self.ctx.m

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def length(self) -> int:
        return self.ctx.q

    @property
    def subfield_a(self) -> bool:
        return 2 * self.l == self.m

    @property
    def dimension(self) -> int:
        """Claimed dimension: 3m/2 + 1 for l = m/2, else 2m + 1."""
        return 3 * self.m // 2 + 1 if self.subfield_a else 2 * self.m + 1

    @property
    def pair_count(self) -> int:
        return len(self.a_domain) * self.q

    @property
    def id_count(self) -> int:
        return self.pair_count * self.p

    @property
    def eps(self) -> int:
        """(-1)^(m/2d); only meaningful when m/d is even."""
        return -1 if (self.m // (2 * self.d)) % 2 else 1

    @cached_property
    def points(self) -> np.ndarray:
        """Field element sitting at each coordinate position."""
        return np.concatenate([[0], self.ctx.exp_table]).astype(np.int64)

    @cached_property
    def u(self) -> np.ndarray:
        """x^(p^l + 1) at each coordinate position."""
        return F.pow_vec(self.ctx, self.points, self.p**self.l + 1)

    @cached_property
    def a_domain_set(self) -> frozenset:
        return frozenset(int(a) for a in self.a_domain)

    def describe(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "l": self.l,
            "d": self.d,
            "regime": self.regime.value,
            "modulus": list(self.ctx.modulus),
            "length": self.length,
            "a_domain_size": len(self.a_domain),
        }


def classify(m: int, d: int) -> Regime:
    if d == 1:
        return Regime.UNIT_GCD
    if m == 2 * d:
        return Regime.HALF
    if m % 2:
        return Regime.ODD_ODD
    if (m // d) % 2:
        return Regime.EVEN_ODD
    return Regime.EVEN_QUOTIENT


def make_spec(ctx: FieldCtx, l: int) -> CodeSpec:
    if not 1 <= l <= ctx.m - 1:
        raise BadExponent(f"need 1 <= l <= m-1, got l={l}, m={ctx.m}")
    d = math.gcd(ctx.m, l)
    regime = classify(ctx.m, d)
    if 2 * l == ctx.m:
        a_domain = F.subfield_elements(ctx, ctx.m // 2)
    else:
        a_domain = np.arange(ctx.q, dtype=np.int64)
    return CodeSpec(ctx=ctx, l=l, d=d, regime=regime, a_domain=a_domain)


def code_spec(p: int, l: int, m: int, modulus=None) -> CodeSpec:
    """Shorthand for ``make_spec(build_field(p, m), l)``."""
    return make_spec(F.build_field(p, m, modulus), l)


def _check_id(spec: CodeSpec, cid: CodewordId) -> None:
    if not (0 <= cid.b < spec.q and 0 <= cid.h < spec.p and 0 <= cid.a < spec.q):
        raise DomainViolation(f"{cid} out of range for q={spec.q}, p={spec.p}")
    if cid.a not in spec.a_domain_set:
        raise DomainViolation(f"a={cid.a} is not in GF({spec.p}^{spec.m // 2})")


def iter_ids(spec: CodeSpec) -> Iterator[CodewordId]:
    for a in spec.a_domain:
        for b in range(spec.q):
            for h in range(spec.p):
                yield CodewordId(int(a), b, h)


def codeword_vector(spec: CodeSpec, cid: CodewordId) -> np.ndarray:
    _check_id(spec, cid)
    ctx = spec.ctx
    vals = (F.trace_vec(ctx, F.mul_vec(ctx, cid.a, spec.u)).astype(np.int64)
            + F.trace_vec(ctx, F.mul_vec(ctx, cid.b, spec.points)) + cid.h)
    return (vals % spec.p).astype(np.int8)


# ---------------------------------------------------------------- brute force


def _trace_a(spec: CodeSpec, a: int) -> np.ndarray:
    """Tr(a u(x)) at every position."""
    return F.trace_vec(spec.ctx, F.mul_vec(spec.ctx, a, spec.u))


def _trace_b_rows(spec: CodeSpec, bs: np.ndarray) -> np.ndarray:
    """Matrix of Tr(b x) with one row per b in ``bs`` and one column per position."""
    ctx = spec.ctx
    lb = ctx.log_table[bs][:, None]
    lx = ctx.log_table[spec.points][None, :]
    prod = ctx.exp_table[(lb + lx) % ctx.n]
    out = ctx.trace_table[prod]
    out[(lb < 0) | (lx < 0)] = 0
    return out


def _trace_b_table(spec: CodeSpec) -> np.ndarray | None:
    if "trace_b" not in spec._cache:
        spec._cache["trace_b"] = (
            _trace_b_rows(spec, np.arange(spec.q, dtype=np.int64)) if spec.q <= 6561 else None
        )
    return spec._cache["trace_b"]


def _value_counts(ta: np.ndarray, tb: np.ndarray, p: int) -> np.ndarray:
    """``counts[r, c] = #{x : ta[x] + tb[r, x] == c (mod p)}``."""
    counts = np.empty((tb.shape[0], p), dtype=np.int64)
    for c in range(p):
        target = ((c - ta.astype(np.int64)) % p).astype(tb.dtype)
        counts[:, c] = np.count_nonzero(tb == target[None, :], axis=1)
    return counts


def _b_chunks(spec: CodeSpec, bs: np.ndarray) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield ``(b_chunk, Tr(b x) rows)`` in memory-bounded pieces."""
    table = _trace_b_table(spec)
    step = max(1, _CHUNK_ELEMS // spec.q)
    for s in range(0, len(bs), step):
        chunk = bs[s:s + step]
        yield chunk, (table[chunk] if table is not None else _trace_b_rows(spec, chunk))


def weight_bruteforce(spec: CodeSpec, cid: CodewordId) -> int:
    """p^m minus the number of zero coordinates, evaluated coordinate by coordinate."""
    _check_id(spec, cid)
    ctx = spec.ctx
    vals = (F.trace_vec(ctx, F.mul_vec(ctx, cid.a, spec.u)).astype(np.int64)
            + F.trace_vec(ctx, F.mul_vec(ctx, cid.b, spec.points))) % spec.p
    zeros = int(np.count_nonzero(vals == (-cid.h) % spec.p))
    return spec.q - zeros


def trace_form(ctx: FieldCtx) -> np.ndarray:
    """Gram matrix of (x, y) -> Tr(x y) on the coordinate basis."""
    basis = ctx.powers_of_p
    return ctx.trace_table[F.mul_vec(ctx, basis[:, None], basis[None, :])].astype(np.int64)


def weights_bruteforce_batch(spec: CodeSpec, ids: np.ndarray) -> np.ndarray:
    """Brute-force weights for an ``(k, 3)`` array of ``(a, b, h)`` rows.

    Each codeword is evaluated at every coordinate through the trace form:
    Tr(a y) = digits(a) G digits(y)^T, so one float32 product evaluates a
    whole batch of codewords (entries stay far below 2^24, so it is exact).
    """
    ids = np.asarray(ids, dtype=np.int64).reshape(-1, 3)
    ctx, p, q = spec.ctx, spec.p, spec.q
    gram = trace_form(ctx)
    coeffs = np.hstack([
        (ctx.digits[ids[:, 0]] @ gram) % p,
        (ctx.digits[ids[:, 1]] @ gram) % p,
        ids[:, 2:3] % p,
    ]).astype(np.float32)
    cols = np.vstack([
        ctx.digits[spec.u].T,
        ctx.digits[spec.points].T,
        np.ones((1, q), dtype=np.int64),
    ]).astype(np.float32)
    out = np.empty(len(ids), dtype=np.int64)
    step = max(1, _CHUNK_ELEMS // q)
    for s in range(0, len(ids), step):
        vals = (coeffs[s:s + step] @ cols).astype(np.int32) % p
        out[s:s + step] = q - np.count_nonzero(vals == 0, axis=1)
    return out


def a_basis(spec: CodeSpec) -> list[int]:
    """An F_p-basis of the coefficient domain of ``a``."""
    ctx = spec.ctx
    if not spec.subfield_a:
        return [int(e) for e in ctx.powers_of_p]
    chosen: list[int] = []
    for a in spec.a_domain[1:]:
        trial = chosen + [int(a)]
        if rank_mod_p(ctx.digits[trial], ctx.p) == len(trial):
            chosen = trial
        if len(chosen) == spec.m // 2:
            break
    return chosen


def generator_matrix(spec: CodeSpec) -> np.ndarray:
    """Rows Tr(beta_i x^(p^l+1)), Tr(x^j x), and the all-ones row.

    The row order matches :func:`decode_coefficients`.
    """
    ctx = spec.ctx
    rows = [F.trace_vec(ctx, F.mul_vec(ctx, beta, spec.u)) for beta in a_basis(spec)]
    rows += [F.trace_vec(ctx, F.mul_vec(ctx, int(e), spec.points)) for e in ctx.powers_of_p]
    rows.append(np.ones(spec.q, dtype=np.int8))
    return np.array(rows, dtype=np.int64)


def decode_coefficients(spec: CodeSpec, coeffs) -> CodewordId:
    """Turn generator-matrix coefficients back into ``(a, b, h)``."""
    ctx = spec.ctx
    basis = a_basis(spec)
    k = len(basis)
    a = 0
    for c, beta in zip(coeffs[:k], basis):
        for _ in range(int(c) % spec.p):
            a = F.add(ctx, a, beta)
    b = ctx.encode(coeffs[k:k + spec.m])
    return CodewordId(a, b, int(coeffs[-1]) % spec.p)


def scalar_representatives(spec: CodeSpec) -> np.ndarray:
    """One nonzero a from each F_p^* orbit {y a} inside the a-domain."""
    ctx = spec.ctx
    nz = spec.a_domain[spec.a_domain != 0]
    return nz[ctx.log_table[nz] < ctx.n // (ctx.p - 1)]


def _bruteforce_a(spec: CodeSpec, a: int) -> np.ndarray:
    """Weights of all codewords with this a, shape (q, p) indexed by (b, h)."""
    p, q = spec.p, spec.q
    ta = _trace_a(spec, a)
    out = np.empty((q, p), dtype=np.int64)
    hs = (-np.arange(p)) % p
    for chunk, tb in _b_chunks(spec, np.arange(q, dtype=np.int64)):
        counts = _value_counts(ta, tb, p)
        out[chunk] = q - counts[:, hs]
    return out


# ---------------------------------------------------------------- analytic


def _require_analytic(spec: CodeSpec) -> None:
    if spec.regime is Regime.UNIT_GCD:
        raise UnsupportedRegime("closed forms are only available when gcd(m, l) > 1")


def _zero_counts_a(spec: CodeSpec, a: int, bs: np.ndarray) -> np.ndarray:
    """T(a, b, h) for every b in ``bs`` and every h, shape (len(bs), p).

    T counts the zero coordinates, so the weight is q - T.
    """
    p, m, q, d = spec.p, spec.m, spec.q, spec.d
    ctx = spec.ctx
    bs = np.asarray(bs, dtype=np.int64)
    hs = np.arange(p)
    base = p ** (m - 1)
    if a == 0:
        out = np.full((len(bs), p), base, dtype=np.int64)
        zero = bs == 0
        out[zero, 0] = q
        out[zero, 1:] = 0
        return out

    red = spec._cache.get(("red", a))
    if red is None:
        red = spec._cache[("red", a)] = linearized_reduction(ctx, spec.l, a)
    solvable, xs = red.solve(linearized_rhs(ctx, spec.l, bs))
    x0 = xs @ ctx.powers_of_p
    # t = Tr(a x0^(p^l + 1)), compared against h
    t = F.trace_vec(ctx, F.mul_vec(ctx, a, F.pow_vec(ctx, x0, p**spec.l + 1))).astype(np.int64)
    match = hs[None, :] == t[:, None]
    eta = F.quadratic_character(ctx, a)

    if spec.regime is Regime.ODD_ODD:
        sign = (-1) ** (((p - 1) * (m + 1) // 4) % 2)
        diff = (hs[None, :] - t[:, None]) % p
        leg = np.array([F.legendre(int(c), p) for c in range(p)])[diff]
        return base + eta * sign * p ** ((m - 1) // 2) * leg
    if spec.regime is Regime.EVEN_ODD:
        sigma = (-1) ** (((p - 1) * m // 4) % 2)
        step = sigma * eta * p ** (m // 2 - 1)
        return np.where(match, base - step * (p - 1), base + step)
    if spec.regime is Regime.HALF:
        step = p ** (m // 2 - 1)
        return np.where(match, base - step * (p - 1), base + step)
    # EvenQuotient
    eps = spec.eps
    if kernel_condition(ctx, spec.l, a):
        step = eps * p ** (m // 2 + d - 1)
        hit = np.where(match, base - step * (p - 1), base + step)
        return np.where(solvable[:, None], hit, base)
    step = eps * p ** (m // 2 - 1)
    return np.where(match, base + step * (p - 1), base - step)


def weight_analytic(spec: CodeSpec, cid: CodewordId) -> int:
    """Weight from the closed-form zero count; no coordinate is evaluated."""
    _require_analytic(spec)
    _check_id(spec, cid)
    return spec.q - int(_zero_counts_a(spec, cid.a, np.array([cid.b]))[0, cid.h])


def weights_analytic_batch(spec: CodeSpec, ids: np.ndarray) -> np.ndarray:
    _require_analytic(spec)
    ids = np.asarray(ids, dtype=np.int64).reshape(-1, 3)
    out = np.empty(len(ids), dtype=np.int64)
    for a in np.unique(ids[:, 0]):
        sel = np.nonzero(ids[:, 0] == a)[0]
        zc = _zero_counts_a(spec, int(a), ids[sel, 1])
        out[sel] = spec.q - zc[np.arange(len(sel)), ids[sel, 2]]
    return out


def _analytic_a(spec: CodeSpec, a: int) -> np.ndarray:
    return spec.q - _zero_counts_a(spec, a, np.arange(spec.q, dtype=np.int64))


def sample_ids(spec: CodeSpec, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly sampled ids as a ``(count, 3)`` array."""
    a = spec.a_domain[rng.integers(0, len(spec.a_domain), size=count)]
    b = rng.integers(0, spec.q, size=count)
    h = rng.integers(0, spec.p, size=count)
    return np.stack([a, b, h], axis=1).astype(np.int64)


# ---------------------------------------------------------------- distributions


@dataclass
class WeightDistribution:
    entries: dict[int, int]
    length: int
    dimension: int

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    @property
    def first_moment(self) -> int:
        return sum(w * c for w, c in self.entries.items())

    @property
    def min_weight(self) -> int:
        return min(w for w, c in self.entries.items() if w > 0 and c > 0)

    def as_list(self) -> list[dict]:
        return [{"weight": w, "multiplicity": c} for w, c in sorted(self.entries.items())]

    def enumerator(self) -> str:
        terms = []
        for w, c in sorted(self.entries.items()):
            terms.append(str(c) if w == 0 else f"{c}z^{w}")
        return " + ".join(terms)

    def __eq__(self, other):
        if not isinstance(other, WeightDistribution):
            return NotImplemented
        return (self.entries == other.entries and self.length == other.length
                and self.dimension == other.dimension)


def _log_p(p: int, total: int) -> int:
    k = 0
    while total % p == 0 and total > 1:
        total //= p
        k += 1
    if total != 1:
        raise ValueError("id count is not a power of p")
    return k


def _from_counts(spec: CodeSpec, counts: np.ndarray, dimension: int) -> WeightDistribution:
    entries = {int(w): int(c) for w, c in enumerate(counts) if c}
    return WeightDistribution(entries=entries, length=spec.length, dimension=dimension)


def _chunked(seq: np.ndarray, parts: int) -> list[np.ndarray]:
    parts = max(1, min(parts, len(seq)))
    return [c for c in np.array_split(seq, parts) if len(c)]


def _accumulate(spec: CodeSpec, per_a, a_values: Iterable[int]) -> np.ndarray:
    counts = np.zeros(spec.q + 1, dtype=np.int64)
    for a in a_values:
        counts += np.bincount(per_a(spec, int(a)).ravel(), minlength=spec.q + 1)
    return counts


def weight_distribution(spec: CodeSpec, method: str = "brute", budget: int | None = None,
                        threads: int | None = None) -> WeightDistribution:
    """Exact weight distribution over all ``|a_domain| * q * p`` ids.

    Work is split over disjoint ranges of ``a``; per-worker histograms are
    summed, so the result does not depend on ``threads``.
    """
    if method == "brute":
        budget = default_budget() if budget is None else budget
        if spec.pair_count > budget:
            raise BudgetExceeded(f"{spec.pair_count} (a, b) pairs exceed budget {budget}")
        per_a = _bruteforce_a
    elif method == "analytic":
        _require_analytic(spec)
        per_a = _analytic_a
    else:
        raise ValueError(f"unknown method {method!r}")
    threads = default_threads() if threads is None else threads
    chunks = _chunked(spec.a_domain, threads * 4)
    if method == "brute":
        _trace_b_table(spec)  # build the shared table once, before fan-out
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda c: _accumulate(spec, per_a, c), chunks))
        counts = np.sum(parts, axis=0)
    else:
        counts = _accumulate(spec, per_a, spec.a_domain)
    return _from_counts(spec, counts, _log_p(spec.p, int(counts.sum())))


def analytic_distribution_table(spec: CodeSpec) -> WeightDistribution:
    """The closed-form weight table for the spec's regime (no enumeration)."""
    _require_analytic(spec)
    p, m, d = spec.p, spec.m, spec.d
    q = p**m
    w0 = p ** (m - 1) * (p - 1)
    rows: list[tuple[int, int]] = [(0, 1)]
    if spec.regime is Regime.ODD_ODD:
        s = p ** ((m - 1) // 2)
        half = p**m * (p - 1) * (q - 1) // 2
        rows += [(w0, p * (p ** (m - 1) + 1) * (q - 1)), (w0 + s, half), (w0 - s, half)]
    elif spec.regime is Regime.EVEN_ODD:
        s = p ** (m // 2 - 1)
        rows += [
            (w0, p * (q - 1)),
            (w0 + s, p**m * (p - 1) * (q - 1) // 2),
            (w0 - s, p**m * (p - 1) * (q - 1) // 2),
            (w0 + s * (p - 1), p**m * (q - 1) // 2),
            (w0 - s * (p - 1), p**m * (q - 1) // 2),
        ]
    elif spec.regime is Regime.EVEN_QUOTIENT:
        e = spec.eps
        s = p ** (m // 2 - 1)
        big = p ** (m // 2 + d - 1)
        den = p**d + 1
        rows += [
            (w0, p * (p ** (m - d) - p ** (m - 2 * d) + 1) * (q - 1)),
            (w0 - e * s * (p - 1), p ** (m + d) * (q - 1) // den),
            (w0 + e * s, p ** (m + d) * (p - 1) * (q - 1) // den),
            (w0 + e * big * (p - 1), p ** (m - 2 * d) * (q - 1) // den),
            (w0 - e * big, p ** (m - 2 * d) * (p - 1) * (q - 1) // den),
        ]
    elif spec.regime is Regime.HALF:
        s = p ** (m // 2 - 1)
        rows += [
            (w0, p * (q - 1)),
            (w0 - s, p**m * (p ** (m // 2) - 1) * (p - 1)),
            (w0 + s * (p - 1), p**m * (p ** (m // 2) - 1)),
        ]
    rows.append((q, p - 1))
    entries: dict[int, int] = {}
    for w, c in rows:
        entries[w] = entries.get(w, 0) + c
    return WeightDistribution(entries=entries, length=q, dimension=spec.dimension)
