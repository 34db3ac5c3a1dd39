"""Cyclotomic cosets, defining sets and affine invariance.

Two independent checks live here.  :func:`check_affine_invariant` applies
the p-adic downset criterion to a defining set (every p-adic
descendant of a member is a member).  :func:`verify_affine_action` ignores
defining sets altogether: it permutes actual codewords by x -> ax + b and
tests membership of the result by linear algebra against the generator
matrix.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import field as F
from .code import CodeSpec, CodewordId, codeword_vector, decode_coefficients, generator_matrix, sample_ids
from .errors import BadModulus, SampleBudgetZero
from .linalg import row_reduce
from .util import rng_for


@dataclass(frozen=True)
class DefiningSet:
    n: int
    residues: tuple[int, ...]
    includes_zero: bool = True

    def members(self) -> frozenset:
        return frozenset(self.residues) | ({0} if self.includes_zero else set())


def cyclotomic_coset(n: int, p: int, j: int) -> frozenset:
    if n < 1 or math.gcd(p, n) != 1:
        raise BadModulus(f"need gcd(p, n) = 1, got p={p}, n={n}")
    if not 0 <= j < n:
        raise BadModulus(f"j={j} outside [0, {n})")
    out = {j}
    k = (j * p) % n
    while k != j:
        out.add(k)
        k = (k * p) % n
    return frozenset(out)


def p_digits(s: int, p: int, m: int) -> list[int]:
    return [(s // p**i) % p for i in range(m)]


def p_adic_leq(r: int, s: int, p: int, m: int) -> bool:
    """r is below s digit by digit in base p."""
    return all(ri <= si for ri, si in zip(p_digits(r, p, m), p_digits(s, p, m)))


def digit_weight(s: int, p: int, m: int) -> int:
    """Sum of base-p digits."""
    return sum(p_digits(s, p, m))


def downset(s: int, p: int, m: int) -> list[int]:
    """All r with r below s in the p-adic order."""
    digits = p_digits(s, p, m)
    out = []
    for combo in itertools.product(*(range(d + 1) for d in digits)):
        out.append(sum(c * p**i for i, c in enumerate(combo)))
    return out


def build_defining_set(spec: CodeSpec) -> DefiningSet:
    """{0} plus C_1 and C_(p^l + 1) modulo n."""
    n, p = spec.ctx.n, spec.p
    res = cyclotomic_coset(n, p, 1) | cyclotomic_coset(n, p, (p**spec.l + 1) % n) | {0}
    return DefiningSet(n=n, residues=tuple(sorted(res)), includes_zero=True)


def affine_invariance_witness(ds: DefiningSet, p: int, m: int) -> tuple[int, int] | None:
    """First ``(s, r)`` with r below s, s in the set and r not; None if closed."""
    if ds.n != p**m - 1:
        raise BadModulus(f"defining set modulus {ds.n} != p^m - 1 = {p**m - 1}")
    members = ds.members()
    for s in sorted(members):
        for r in downset(s, p, m):
            if r not in members:
                return s, r
    return None


def check_affine_invariant(ds: DefiningSet, p: int, m: int) -> bool:
    return affine_invariance_witness(ds, p, m) is None


def weight_argument_holds(ds: DefiningSet, p: int, m: int) -> bool:
    """Digit-weight shortcut: nonzero members have digit weight 1 or 2 and every
    p^i is a member.  Then anything below a member is 0, some p^i, or the
    member itself, so the set is closed.
    """
    members = ds.members()
    if not {p**i for i in range(m)} <= members:
        return False
    return all(digit_weight(s, p, m) in (1, 2) for s in members if s)


# ---------------------------------------------------------------- group action


@dataclass
class MembershipOracle:
    """Decides membership in the row space of the generator matrix."""

    spec: CodeSpec
    gen: np.ndarray = field(init=False, repr=False)
    info: tuple[int, ...] = field(init=False)
    inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        p = self.spec.p
        self.gen = generator_matrix(self.spec)
        red = row_reduce(self.gen, p)
        if red.rank != self.gen.shape[0]:
            raise AssertionError("generator matrix rows are dependent")
        self.info = red.pivots
        sub = row_reduce(self.gen[:, list(self.info)].T, p)
        self.inverse = sub.transform

    def coefficients(self, vectors: np.ndarray) -> np.ndarray:
        """Candidate coefficients read off the information set."""
        vectors = np.atleast_2d(vectors).astype(np.int64)
        return (vectors[:, list(self.info)] @ self.inverse.T) % self.spec.p

    def contains(self, vectors: np.ndarray) -> np.ndarray:
        vectors = np.atleast_2d(vectors).astype(np.int64)
        coeffs = self.coefficients(vectors)
        return np.all((coeffs @ self.gen) % self.spec.p == vectors % self.spec.p, axis=1)

    def solve(self, vector) -> CodewordId | None:
        vector = np.asarray(vector)
        if not self.contains(vector)[0]:
            return None
        return decode_coefficients(self.spec, self.coefficients(vector)[0])


def position_of(spec: CodeSpec) -> np.ndarray:
    """Inverse of ``spec.points``: field element -> coordinate position."""
    pos = spec.ctx.log_table + 1
    pos = pos.copy()
    pos[0] = 0
    return pos


def affine_permutation(spec: CodeSpec, a: int, b: int) -> np.ndarray:
    """``perm[i]`` is the position of a * x_i + b."""
    ctx = spec.ctx
    images = F.add_vec(ctx, F.mul_vec(ctx, a, spec.points), np.full(spec.q, b, dtype=np.int64))
    return position_of(spec)[images]


@dataclass
class ActionReport:
    trials: int
    passed: int
    failed: int
    permutations: int
    codewords: int
    witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "passed": self.passed,
            "failed": self.failed,
            "permutations": self.permutations,
            "codewords": self.codewords,
            "witnesses": self.witnesses,
        }


def verify_affine_action(spec: CodeSpec, sample_count: int = 100, seed: int = 0,
                         codewords: int | None = None) -> ActionReport:
    """Apply ``sample_count`` random maps x -> ax + b to ``codewords`` random
    codewords each and check every image is again a codeword.

    The permuted word is ``w[i] = c[perm[i]]``, i.e. w(x) = c(ax + b).
    """
    if sample_count < 1 or (codewords is not None and codewords < 1):
        raise SampleBudgetZero("need at least one permutation and one codeword")
    codewords = sample_count if codewords is None else codewords
    if spec.q > 3**6:
        raise ValueError("group-action verification is limited to q <= 3^6")
    oracle = MembershipOracle(spec)
    rng_perm = rng_for(seed, "affine-permutations")
    rng_word = rng_for(seed, "affine-codewords")
    ids = sample_ids(spec, codewords, rng_word)
    words = np.array([codeword_vector(spec, CodewordId(*map(int, r))) for r in ids], dtype=np.int64)
    passed = failed = 0
    witnesses = []
    for _ in range(sample_count):
        a = int(rng_perm.integers(1, spec.q))
        b = int(rng_perm.integers(0, spec.q))
        perm = affine_permutation(spec, a, b)
        ok = oracle.contains(words[:, perm])
        passed += int(ok.sum())
        failed += int((~ok).sum())
        for k in np.nonzero(~ok)[0][: max(0, 5 - len(witnesses))]:
            witnesses.append({"sigma": [a, b], "codeword": [int(v) for v in ids[k]]})
    return ActionReport(trials=passed + failed, passed=passed, failed=failed,
                        permutations=sample_count, codewords=codewords, witnesses=witnesses)
