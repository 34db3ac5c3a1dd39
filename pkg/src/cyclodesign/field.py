"""Arithmetic in GF(p^m) for odd p via exp/log tables.

Elements are plain ints in ``[0, q)``: the base-p digits of an element are
the coefficients of its polynomial representative, lowest degree first, so
``rep = c_0 + c_1 p + ... + c_{m-1} p^{m-1}``.  The distinguished primitive
element alpha is the class of ``x`` (rep ``p`` when m > 1).

Scalar helpers take and return ints; the ``*_vec`` helpers operate on numpy
integer arrays of element reps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import EvenCharacteristic, FieldTooLarge, NotPrime, NotPrimitivePolynomial

MAX_FIELD_SIZE = 1 << 26


def is_prime(k: int) -> bool:
    if k < 2:
        return False
    if k % 2 == 0:
        return k == 2
    f = 3
    while f * f <= k:
        if k % f == 0:
            return False
        f += 2
    return True


def prime_factors(k: int) -> list[int]:
    out = []
    f = 2
    while f * f <= k:
        if k % f == 0:
            out.append(f)
            while k % f == 0:
                k //= f
        f += 1
    if k > 1:
        out.append(k)
    return out


def _polymulmod(u, v, modulus, p):
    """Multiply coefficient lists u*v modulo a monic ``modulus`` over F_p."""
    m = len(modulus) - 1
    prod = [0] * (len(u) + len(v) - 1)
    for i, ui in enumerate(u):
        if ui:
            for j, vj in enumerate(v):
                prod[i + j] = (prod[i + j] + ui * vj) % p
    for k in range(len(prod) - 1, m - 1, -1):
        c = prod[k]
        if c:
            for j in range(m + 1):
                prod[k - m + j] = (prod[k - m + j] - c * modulus[j]) % p
    prod = prod[:m] + [0] * max(0, m - len(prod))
    return prod


def _x_power(e, modulus, p):
    m = len(modulus) - 1
    result = [1] + [0] * (m - 1)
    base = _polymulmod([0, 1], [1], modulus, p)
    while e:
        if e & 1:
            result = _polymulmod(result, base, modulus, p)
        base = _polymulmod(base, base, modulus, p)
        e >>= 1
    return result


def is_primitive_polynomial(modulus, p: int) -> bool:
    """True iff the monic ``modulus`` (low degree first) is primitive over F_p.

    The class of x having multiplicative order exactly p^m - 1 forces the
    quotient ring to be a field, so irreducibility comes for free.
    """
    m = len(modulus) - 1
    if m < 1 or modulus[-1] % p != 1 or modulus[0] % p == 0:
        return False
    n = p**m - 1
    one = [1] + [0] * (m - 1)
    if _x_power(n, modulus, p) != one:
        return False
    return all(_x_power(n // r, modulus, p) != one for r in prime_factors(n))


def _polymulmod_batch(u, v, moduli, p):
    """Row-wise u*v modulo each monic row of ``moduli`` (shape (B, m + 1))."""
    b, m = u.shape
    prod = np.zeros((b, 2 * m - 1), dtype=np.int64)
    for i in range(m):
        prod[:, i:i + m] += u[:, i:i + 1] * v
    prod %= p
    for k in range(2 * m - 2, m - 1, -1):
        c = prod[:, k:k + 1]
        prod[:, k - m:k + 1] = (prod[:, k - m:k + 1] - c * moduli) % p
    return prod[:, :m]


def _x_power_batch(e, moduli, p):
    b, m = moduli.shape[0], moduli.shape[1] - 1
    result = np.zeros((b, m), dtype=np.int64)
    result[:, 0] = 1
    base = np.zeros((b, m), dtype=np.int64)
    if m == 1:
        base[:, 0] = (-moduli[:, 0]) % p
    else:
        base[:, 1] = 1
    while e:
        if e & 1:
            result = _polymulmod_batch(result, base, moduli, p)
        base = _polymulmod_batch(base, base, moduli, p)
        e >>= 1
    return result


def find_primitive_polynomial(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic primitive polynomial of degree m.

    Coefficient tuples ``(c_0, ..., c_{m-1})`` are compared low degree first.
    Candidates are screened in lexicographic blocks with a vectorized order
    test; the first survivor is confirmed by the scalar check.
    """
    n = p**m - 1
    block = 1 << 14
    place = p ** np.arange(m - 1, -1, -1, dtype=np.int64)
    for start in range(p ** (m - 1), p**m, block):
        idx = np.arange(start, min(start + block, p**m), dtype=np.int64)
        low = (idx[:, None] // place[None, :]) % p
        moduli = np.hstack([low, np.ones((len(idx), 1), dtype=np.int64)])
        one = np.zeros(m, dtype=np.int64)
        one[0] = 1
        ok = np.all(_x_power_batch(n, moduli, p) == one, axis=1)
        for r in prime_factors(n):
            if ok.any():
                ok[ok] = ~np.all(_x_power_batch(n // r, moduli[ok], p) == one, axis=1)
        if ok.any():
            cand = tuple(int(c) for c in moduli[np.argmax(ok)])
            if is_primitive_polynomial(list(cand), p):
                return cand
    raise NotPrimitivePolynomial(f"no primitive polynomial of degree {m} over F_{p}")  # unreachable


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """Immutable description of GF(p^m) with exp/log tables."""

    p: int
    m: int
    modulus: tuple[int, ...]
    exp_table: np.ndarray = field(repr=False)
    log_table: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.m

    @property
    def n(self) -> int:
        return self.p**self.m - 1

    @property
    def alpha(self) -> int:
        return int(self.exp_table[1 % self.n]) if self.n > 1 else int(self.exp_table[0])

    @cached_property
    def digits(self) -> np.ndarray:
        """``digits[e, i]`` is the coefficient of x^i in element e."""
        reps = np.arange(self.q, dtype=np.int64)
        return np.stack([(reps // self.p**i) % self.p for i in range(self.m)], axis=1)

    @cached_property
    def powers_of_p(self) -> np.ndarray:
        return self.p ** np.arange(self.m, dtype=np.int64)

    @cached_property
    def trace_table(self) -> np.ndarray:
        """``trace_table[e] = Tr(e)`` computed as the sum of the m conjugates."""
        reps = np.arange(self.q, dtype=np.int64)
        acc = np.zeros((self.q, self.m), dtype=np.int64)
        for i in range(self.m):
            acc += self.digits[frobenius_vec(self, reps, i)]
        acc %= self.p
        if np.any(acc[:, 1:]):
            raise AssertionError("trace landed outside the prime subfield")
        return acc[:, 0].astype(np.int8)

    def encode(self, coeffs) -> int:
        return int(sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs)))

    def decode(self, e: int) -> list[int]:
        return [int(c) for c in self.digits[e]]

    def __repr__(self):
        return f"FieldCtx(p={self.p}, m={self.m}, modulus={self.modulus})"


def build_field(p: int, m: int, modulus=None) -> FieldCtx:
    """Construct GF(p^m).

    ``modulus`` is a coefficient sequence of length m + 1, lowest degree
    first.  When omitted the lexicographically smallest primitive polynomial
    is used, which makes element numbering reproducible.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p == 2:
        raise EvenCharacteristic("characteristic 2 is not supported")
    if m < 1:
        raise ValueError(f"extension degree must be >= 1, got {m}")
    if p**m > MAX_FIELD_SIZE:
        raise FieldTooLarge(f"q = {p}^{m} exceeds the table cap {MAX_FIELD_SIZE}")
    if modulus is None:
        modulus = find_primitive_polynomial(p, m)
    else:
        modulus = [int(c) % p for c in modulus]
        if len(modulus) != m + 1 or modulus[-1] == 0:
            raise NotPrimitivePolynomial(f"modulus {modulus} does not have degree {m}")
        inv_lead = pow(modulus[-1], p - 2, p)
        modulus = tuple((c * inv_lead) % p for c in modulus)
        if not is_primitive_polynomial(list(modulus), p):
            raise NotPrimitivePolynomial(f"modulus {modulus} is not primitive over F_{p}")
    q = p**m
    n = q - 1
    exp_table = np.empty(n, dtype=np.int64)
    log_table = np.full(q, -1, dtype=np.int64)
    coeffs = [1] + [0] * (m - 1)
    weights = [p**i for i in range(m)]
    for i in range(n):
        rep = sum(c * w for c, w in zip(coeffs, weights))
        if log_table[rep] != -1:
            raise NotPrimitivePolynomial(f"modulus {modulus} is not primitive over F_{p}")
        exp_table[i] = rep
        log_table[rep] = i
        # multiply by x and reduce
        top = coeffs[-1]
        coeffs = [0] + coeffs[:-1]
        if top:
            coeffs = [(c - top * modulus[j]) % p for j, c in enumerate(coeffs)]
    if coeffs != [1] + [0] * (m - 1):
        raise NotPrimitivePolynomial(f"modulus {modulus} is not primitive over F_{p}")
    exp_table.flags.writeable = False
    log_table.flags.writeable = False
    return FieldCtx(p=p, m=m, modulus=tuple(modulus), exp_table=exp_table, log_table=log_table)


# ---------------------------------------------------------------- scalars


def add(ctx: FieldCtx, a: int, b: int) -> int:
    p = ctx.p
    out, w = 0, 1
    while a or b:
        out += ((a % p + b % p) % p) * w
        a //= p
        b //= p
        w *= p
    return out


def neg(ctx: FieldCtx, a: int) -> int:
    p = ctx.p
    out, w = 0, 1
    while a:
        out += ((-(a % p)) % p) * w
        a //= p
        w *= p
    return out


def sub(ctx: FieldCtx, a: int, b: int) -> int:
    return add(ctx, a, neg(ctx, b))


def mul(ctx: FieldCtx, a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return int(ctx.exp_table[(ctx.log_table[a] + ctx.log_table[b]) % ctx.n])


def inv(ctx: FieldCtx, a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("0 has no inverse")
    return int(ctx.exp_table[(-ctx.log_table[a]) % ctx.n])


def pow_(ctx: FieldCtx, a: int, k: int) -> int:
    if k < 0:
        raise ValueError("negative exponent")
    if k == 0:
        return 1
    if a == 0:
        return 0
    return int(ctx.exp_table[(int(ctx.log_table[a]) * k) % ctx.n])


def frobenius(ctx: FieldCtx, x: int, l: int) -> int:
    """x^(p^l)."""
    if not 0 <= l < ctx.m:
        raise ValueError(f"frobenius exponent must lie in [0, {ctx.m})")
    return pow_(ctx, x, ctx.p**l)


def trace(ctx: FieldCtx, x: int) -> int:
    """Absolute trace Tr(x) = sum of x^(p^i), returned as an int in [0, p)."""
    acc = 0
    for i in range(ctx.m):
        acc = add(ctx, acc, frobenius(ctx, x, i))
    if acc >= ctx.p:
        raise AssertionError("trace landed outside the prime subfield")
    return acc


def quadratic_character(ctx: FieldCtx, x: int) -> int:
    if x == 0:
        return 0
    return 1 if ctx.log_table[x] % 2 == 0 else -1


def legendre(c: int, p: int) -> int:
    """The quadratic character of F_p (eta prime)."""
    c %= p
    if c == 0:
        return 0
    return 1 if pow(c, (p - 1) // 2, p) == 1 else -1


# ---------------------------------------------------------------- vectors


def add_vec(ctx: FieldCtx, a, b) -> np.ndarray:
    d = (ctx.digits[a] + ctx.digits[b]) % ctx.p
    return d @ ctx.powers_of_p


def neg_vec(ctx: FieldCtx, a) -> np.ndarray:
    d = (-ctx.digits[a]) % ctx.p
    return d @ ctx.powers_of_p


def mul_vec(ctx: FieldCtx, a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    la = ctx.log_table[a]
    lb = ctx.log_table[b]
    out = ctx.exp_table[(la + lb) % ctx.n]
    return np.where((la < 0) | (lb < 0), 0, out)


def pow_vec(ctx: FieldCtx, a, k: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    if k == 0:
        return np.ones_like(a)
    la = ctx.log_table[a]
    out = ctx.exp_table[(la * (k % ctx.n)) % ctx.n]
    return np.where(la < 0, 0, out)


def frobenius_vec(ctx: FieldCtx, a, l: int) -> np.ndarray:
    return pow_vec(ctx, a, ctx.p**l)


def trace_vec(ctx: FieldCtx, a) -> np.ndarray:
    return ctx.trace_table[np.asarray(a, dtype=np.int64)]


def quadratic_character_vec(ctx: FieldCtx, a) -> np.ndarray:
    la = ctx.log_table[np.asarray(a, dtype=np.int64)]
    return np.where(la < 0, 0, np.where(la % 2 == 0, 1, -1))


def prime_subfield(ctx: FieldCtx) -> np.ndarray:
    """F_p^* inside F_q as the powers alpha^(k n/(p-1)), k = 0..p-2.

    Each such element is a constant polynomial, so its rep is the integer
    residue it stands for.
    """
    step = ctx.n // (ctx.p - 1)
    out = ctx.exp_table[np.arange(ctx.p - 1) * step]
    if np.any(out >= ctx.p):
        raise AssertionError("alpha^(n/(p-1)) is not in the prime subfield")
    return out.copy()


def subfield_elements(ctx: FieldCtx, k: int) -> np.ndarray:
    """Elements of the subfield GF(p^k), k | m, in exponent order with 0 first."""
    if ctx.m % k:
        raise ValueError(f"{k} does not divide {ctx.m}")
    step = ctx.n // (ctx.p**k - 1)
    nz = ctx.exp_table[np.arange(0, ctx.n, step)]
    return np.concatenate([[0], nz]).astype(np.int64)
