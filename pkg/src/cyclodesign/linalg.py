"""Dense linear algebra over F_p for small matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class Reduction:
    """``transform @ matrix == rref (mod p)`` with ``pivots`` the pivot columns."""

    rref: np.ndarray
    transform: np.ndarray
    pivots: tuple[int, ...]
    p: int

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def kernel(self) -> np.ndarray:
        """Basis of the right null space, one vector per row."""
        rows, cols = self.rref.shape
        free = [c for c in range(cols) if c not in self.pivots]
        basis = np.zeros((len(free), cols), dtype=np.int64)
        for k, f in enumerate(free):
            basis[k, f] = 1
            for r, pc in enumerate(self.pivots):
                basis[k, pc] = (-self.rref[r, f]) % self.p
        return basis

    def solve(self, rhs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Solve ``matrix @ x = b`` for each row b of ``rhs``.

        Returns ``(solvable, x)``; rows of ``x`` are particular solutions
        (free variables set to 0) and are meaningless where not solvable.
        """
        rhs = np.atleast_2d(np.asarray(rhs, dtype=np.int64))
        y = (rhs @ self.transform.T) % self.p
        r = self.rank
        solvable = ~np.any(y[:, r:], axis=1)
        x = np.zeros((rhs.shape[0], self.rref.shape[1]), dtype=np.int64)
        for row, pc in enumerate(self.pivots):
            x[:, pc] = y[:, row]
        return solvable, x


def row_reduce(matrix, p: int) -> Reduction:
    a = np.array(matrix, dtype=np.int64) % p
    rows, cols = a.shape
    e = np.eye(rows, dtype=np.int64)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
            e[[r, k]] = e[[k, r]]
        s = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * s) % p
        e[r] = (e[r] * s) % p
        for i in range(rows):
            if i != r and a[i, c]:
                f = int(a[i, c])
                a[i] = (a[i] - f * a[r]) % p
                e[i] = (e[i] - f * e[r]) % p
        pivots.append(c)
        r += 1
    return Reduction(rref=a, transform=e, pivots=tuple(pivots), p=p)


def rank_mod_p(matrix, p: int) -> int:
    return row_reduce(matrix, p).rank
