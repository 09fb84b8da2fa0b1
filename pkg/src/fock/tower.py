"""Raw tensor powers H⁽ⁿ⁾ = H ⊗_M ⋯ ⊗_M H and the maps splitting them.

Level 0 is L²(M), level 1 is H and level n is (level n−1) ⊗_M H with quotient map Q_n.
split(a, b) is the unitary-up-to-kernel map Π_{a,b} from product coordinates of
level a ⊗ level b onto level a+b. Everything is built lazily and cached.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg
from loguru import logger

from src.errors import TruncationError
from src.finvn import Bimodule, TracialAlgebra, connes_tensor, default_gram_tol, gns


def times_kron_identity(X: np.ndarray, A: np.ndarray, d: int) -> np.ndarray:
    """X @ kron(A, I_d) without forming the Kronecker product."""
    rows: int = X.shape[0]
    return np.einsum("ipc,pq->iqc", X.reshape(rows, A.shape[0], d), A).reshape(rows, A.shape[1] * d)


def times_identity_kron(X: np.ndarray, B: np.ndarray, r: int) -> np.ndarray:
    """X @ kron(I_r, B) without forming the Kronecker product."""
    rows: int = X.shape[0]
    return (X.reshape(rows * r, B.shape[0]) @ B).reshape(rows, r * B.shape[1])


class RawTower:

    def __init__(self, H: Bimodule, gram_tol: float | None = None) -> None:
        self.H: Bimodule = H
        self.algebra: TracialAlgebra = H.algebra
        self.gram_tol: float = default_gram_tol() if gram_tol is None else gram_tol
        self._levels: list[Bimodule] = [gns(H.algebra), H]
        self._quotients: dict[int, np.ndarray] = {}
        self._lifts: dict[int, np.ndarray] = {}
        self._splits: dict[tuple[int, int], np.ndarray] = {}
        self._split_inverses: dict[tuple[int, int], np.ndarray] = {}

    def level(self, n: int) -> Bimodule:
        if n < 0:
            raise TruncationError(f"level {n} does not exist")
        while len(self._levels) <= n:
            k: int = len(self._levels)
            product = connes_tensor(self._levels[-1], self.H, self.gram_tol)
            self._levels.append(product.space)
            self._quotients[k] = product.quotient
            self._lifts[k] = product.lift
            logger.debug(f"raw level {k}: dimension {product.space.dim}")
        return self._levels[n]

    def dim(self, n: int) -> int:
        return self.level(n).dim

    def identity(self, n: int) -> np.ndarray:
        return np.eye(self.dim(n), dtype=complex)

    def quotient(self, n: int) -> np.ndarray:
        """Q_n: product coordinates of level n−1 ⊗ H → level n (n ≥ 2)."""
        self.level(n)
        return self._quotients[n]

    def lift(self, n: int) -> np.ndarray:
        self.level(n)
        return self._lifts[n]

    def split(self, a: int, b: int) -> np.ndarray:
        """Π_{a,b}: level a ⊗ level b (product coordinates) → level a+b."""
        key = (a, b)
        if key in self._splits:
            return self._splits[key]

        M: TracialAlgebra = self.algebra
        if a == 0:
            target: Bimodule = self.level(b)
            # ê_t/√w_t ⊗ η ↦ λ(e_t)η/√w_t
            P = np.concatenate([target.left[t] / M.sqrt_weights[t] for t in range(M.size)], axis=1)
        elif b == 0:
            source: Bimodule = self.level(a)
            r0: int = M.size
            P = np.zeros((source.dim, source.dim * r0), dtype=complex)
            for t in range(M.size):
                P[:, t::r0] = source.right[t] / M.sqrt_weights[t]
        elif b == 1:
            P = self.quotient(a + 1)
        else:
            inner: np.ndarray = times_kron_identity(self.quotient(a + b), self.split(a, b - 1), self.H.dim)
            P = times_identity_kron(inner, self.lift(b), self.dim(a))

        logger.debug(f"split ({a}, {b}): {P.shape}")
        self._splits[key] = P
        return P

    def split_inverse(self, a: int, b: int) -> np.ndarray:
        key = (a, b)
        if key not in self._split_inverses:
            P: np.ndarray = self.split(a, b)
            if P.size == 0:
                self._split_inverses[key] = np.zeros((P.shape[1], P.shape[0]), dtype=complex)
            else:
                self._split_inverses[key] = scipy.linalg.pinv(P, rtol=self.gram_tol)
        return self._split_inverses[key]

    def tensor(self, A: np.ndarray, B: np.ndarray, source: tuple[int, int], target: tuple[int, int]) -> np.ndarray:
        """A ⊗ B as a map level a+b → level a₂+b₂.

        A must commute with the right action and B with the left action, otherwise the
        result depends on the chosen preimages.
        """
        a, b = source
        a2, b2 = target
        P: np.ndarray = self.split(a2, b2)
        rows: int = P.shape[0]
        product: np.ndarray = np.einsum(
            "iuv,up,vq->ipq", P.reshape(rows, self.dim(a2), self.dim(b2)), A, B, optimize=True
        ).reshape(rows, self.dim(a) * self.dim(b))
        return product @ self.split_inverse(a, b)

    def left_action(self, n: int, x: np.ndarray) -> np.ndarray:
        return self.level(n).lam(x)

    def right_action(self, n: int, x: np.ndarray) -> np.ndarray:
        return self.level(n).rho(x)
