"""Gauss sums and the Weil sums S(a, b) = sum_x zeta^Tr(a x^(p^l+1) + b x).

Everything is exact in Z[zeta_p]; see :mod:`cyclodesign.cyclotomic`.
The closed forms go through the linearized polynomial
``f(x) = a^(p^l) x^(p^(2l)) + a x``, an F_p-linear map of F_q which is
handled as an m x m matrix over F_p.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from . import field as F
from .cyclotomic import CycInt
from .errors import OddQuotient, ZeroCoefficient
from .field import FieldCtx
from .linalg import Reduction, row_reduce


@dataclass(frozen=True)
class SolveResult:
    solvable: bool
    representative: int | None
    solution_count: int


def gauss_sum(p: int) -> CycInt:
    """sum_{v in F_p^*} eta'(v) zeta^v."""
    return CycInt.from_exponents(p, {v: F.legendre(v, p) for v in range(1, p)})


def p_star(p: int) -> int:
    return (-1) ** ((p - 1) // 2) * p


def quadratic_gauss_sum_power(p: int, m: int) -> CycInt:
    """gauss_sum(p)^m without generic multiplication: (p*)^(m//2), times G if m is odd."""
    half = CycInt.integer(p, p_star(p) ** (m // 2))
    return half * gauss_sum(p) if m % 2 else half


def weil_sum_bruteforce(ctx: FieldCtx, l: int, a: int, b: int) -> CycInt:
    """Direct evaluation: histogram the trace values over all x in F_q."""
    xs = np.arange(ctx.q, dtype=np.int64)
    u = F.pow_vec(ctx, xs, ctx.p**l + 1)
    vals = (F.trace_vec(ctx, F.mul_vec(ctx, a, u)).astype(np.int64)
            + F.trace_vec(ctx, F.mul_vec(ctx, b, xs))) % ctx.p
    hist = np.bincount(vals, minlength=ctx.p)
    return CycInt.from_histogram(ctx.p, hist)


def _check_l(ctx: FieldCtx, l: int) -> None:
    if not 1 <= l <= ctx.m - 1:
        raise ValueError(f"need 1 <= l <= m-1, got l={l}, m={ctx.m}")


def kernel_condition(ctx: FieldCtx, l: int, a: int) -> bool:
    """Whether a^((q-1)/(p^d+1)) == (-1)^(m/2d), i.e. f has a nonzero kernel."""
    if a == 0:
        raise ZeroCoefficient("kernel condition needs a != 0")
    d = gcd(ctx.m, l)
    if (ctx.m // d) % 2:
        raise OddQuotient(f"m/d = {ctx.m // d} is odd; f is always a permutation")
    target = 1 if (ctx.m // (2 * d)) % 2 == 0 else ctx.p - 1
    return F.pow_(ctx, a, ctx.n // (ctx.p**d + 1)) == target


def linearized_matrix(ctx: FieldCtx, l: int, a: int) -> np.ndarray:
    """Matrix of x -> a^(p^l) x^(p^(2l)) + a x on the coordinate basis."""
    ap = F.pow_(ctx, a, ctx.p**l)
    basis = ctx.p ** np.arange(ctx.m, dtype=np.int64)
    images = F.add_vec(ctx, F.mul_vec(ctx, ap, F.pow_vec(ctx, basis, ctx.p ** (2 * l))),
                       F.mul_vec(ctx, a, basis))
    return ctx.digits[images].T.copy()


def linearized_reduction(ctx: FieldCtx, l: int, a: int) -> Reduction:
    if a == 0:
        raise ZeroCoefficient("f degenerates for a = 0")
    return row_reduce(linearized_matrix(ctx, l, a), ctx.p)


def linearized_rhs(ctx: FieldCtx, l: int, b) -> np.ndarray:
    """Coordinates of -b^(p^l), the right-hand side paired with f."""
    return (-ctx.digits[F.frobenius_vec(ctx, b, l % ctx.m)]) % ctx.p


def solve_linearized(ctx: FieldCtx, l: int, a: int, b: int) -> SolveResult:
    """Solve a^(p^l) x^(p^(2l)) + a x = -b^(p^l) over F_q."""
    red = linearized_reduction(ctx, l, a)
    ok, x = red.solve(linearized_rhs(ctx, l, np.array([b])))
    if not ok[0]:
        return SolveResult(False, None, 0)
    rep = int(x[0] @ ctx.powers_of_p)
    return SolveResult(True, rep, ctx.p ** (ctx.m - red.rank))


def _completion_trace(ctx: FieldCtx, l: int, a: int, x0: int) -> int:
    """Tr(a x0^(p^l+1))."""
    return F.trace(ctx, F.mul(ctx, a, F.pow_(ctx, x0, ctx.p**l + 1)))


def weil_sum_closed(ctx: FieldCtx, l: int, a: int, b: int) -> CycInt:
    """Closed-form S(a, b) for a != 0, by the three linearized-map cases.

    m/d odd: eta(a) G_q zeta^(-t), where G_q = (-1)^(m-1) g^m is the
    quadratic Gauss sum of F_q and g the one of F_p.
    m/d even, trivial kernel: (-1)^(m/2d) p^(m/2) zeta^(-t).
    m/d even, nontrivial kernel: 0 if f(x) = -b^(p^l) is unsolvable, else
    -(-1)^(m/2d) p^(m/2+d) zeta^(-t).
    Here t = Tr(a x0^(p^l+1)) for any solution x0.
    """
    if a == 0:
        raise ZeroCoefficient("closed form needs a != 0")
    _check_l(ctx, l)
    p, m = ctx.p, ctx.m
    d = gcd(m, l)
    sol = solve_linearized(ctx, l, a, b)
    if not sol.solvable:
        return CycInt.integer(p, 0)
    phase = CycInt.zeta(p, -_completion_trace(ctx, l, a, sol.representative))
    if (m // d) % 2:
        g_q = quadratic_gauss_sum_power(p, m) * (-1) ** (m - 1)
        return g_q * F.quadratic_character(ctx, a) * phase
    eps = (-1) ** ((m // (2 * d)) % 2)
    if kernel_condition(ctx, l, a):
        return phase * (-eps * p ** (m // 2 + d))
    return phase * (eps * p ** (m // 2))


def weil_sum_zero_b(ctx: FieldCtx, l: int, a: int) -> CycInt:
    """S(a, 0) from the three-way display (no solving needed)."""
    if a == 0:
        raise ZeroCoefficient("needs a != 0")
    p, m = ctx.p, ctx.m
    d = gcd(m, l)
    if (m // d) % 2:
        return quadratic_gauss_sum_power(p, m) * ((-1) ** (m - 1) * F.quadratic_character(ctx, a))
    eps = (-1) ** ((m // (2 * d)) % 2)
    if kernel_condition(ctx, l, a):
        return CycInt.integer(p, -eps * p ** (m // 2 + d))
    return CycInt.integer(p, eps * p ** (m // 2))


# ---------------------------------------------------------------- batched forms
#
# A batch of sums is an integer array of shape (len(bs), p - 1): row i holds
# the CycInt coordinates of S(a, bs[i]).


def _hist_to_coords(hist: np.ndarray, p: int) -> np.ndarray:
    return hist[:, : p - 1] - hist[:, p - 1:]


def weil_sums_bruteforce_batch(ctx: FieldCtx, l: int, a: int, bs) -> np.ndarray:
    """Brute-force S(a, b) for every b in ``bs``, one trace histogram per b."""
    p, q = ctx.p, ctx.q
    bs = np.asarray(bs, dtype=np.int64)
    xs = np.arange(q, dtype=np.int64)
    ta = F.trace_vec(ctx, F.mul_vec(ctx, a, F.pow_vec(ctx, xs, p**l + 1))).astype(np.int64)
    out = np.empty((len(bs), p - 1), dtype=np.int64)
    step = max(1, (1 << 22) // q)
    for s in range(0, len(bs), step):
        chunk = bs[s:s + step]
        lb = ctx.log_table[chunk][:, None]
        lx = ctx.log_table[xs][None, :]
        tb = ctx.trace_table[ctx.exp_table[(lb + lx) % ctx.n]].astype(np.int64)
        tb[(lb < 0) | (lx < 0)] = 0
        vals = (tb + ta[None, :]) % p
        hist = np.stack([np.count_nonzero(vals == k, axis=1) for k in range(p)], axis=1)
        out[s:s + step] = _hist_to_coords(hist, p)
    return out


def weil_sums_closed_batch(ctx: FieldCtx, l: int, a: int, bs) -> np.ndarray:
    """Closed-form S(a, b) for every b in ``bs`` (a = 0 included: q or 0)."""
    p, q, m = ctx.p, ctx.q, ctx.m
    bs = np.asarray(bs, dtype=np.int64)
    out = np.zeros((len(bs), p - 1), dtype=np.int64)
    if a == 0:
        out[bs == 0, 0] = q
        return out
    _check_l(ctx, l)
    d = gcd(m, l)
    if (m // d) % 2:
        factor = quadratic_gauss_sum_power(p, m) * ((-1) ** (m - 1) * F.quadratic_character(ctx, a))
    else:
        eps = (-1) ** ((m // (2 * d)) % 2)
        if kernel_condition(ctx, l, a):
            factor = CycInt.integer(p, -eps * p ** (m // 2 + d))
        else:
            factor = CycInt.integer(p, eps * p ** (m // 2))
    red = linearized_reduction(ctx, l, a)
    ok, xsol = red.solve(linearized_rhs(ctx, l, bs))
    x0 = xsol @ ctx.powers_of_p
    t = F.trace_vec(ctx, F.mul_vec(ctx, a, F.pow_vec(ctx, x0, p**l + 1))).astype(np.int64)
    # factor * zeta^(-t): rotate the length-p histogram form, then reduce
    full = np.array(factor.coeffs + (0,), dtype=np.int64)
    idx = (np.arange(p)[None, :] + t[:, None]) % p  # position k takes full[k + t]
    rotated = full[idx]
    out[:] = _hist_to_coords(rotated, p)
    out[~ok] = 0
    return out
