"""Deformations F of H ⊗_M H and the operators F_σ, D⁽ⁿ⁾ and E_{n,m} built from them.

F_t on level n for the generator t_i is −1_{i−1} ⊗ F ⊗ 1_{n−i−1}; F_σ is the product along a
reduced word of σ, and D⁽ⁿ⁾ = Σ_{σ∈S_n} F_σ.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from loguru import logger

from src.configuration import ConfigValue
from src.coxeter import Permutation, enumerate_V, reduced_word, symmetric_group
from src.errors import DeformationError
from src.finvn import modularity_defect

from .tower import RawTower


@dataclass(frozen=True)
class DeformationFlags:
    is_self_adjoint: bool
    is_contraction: bool
    is_projection: bool
    bimodular: bool
    braid_ok: bool
    commuting_ok: bool

    def to_dict(self) -> dict[str, bool]:
        return dict(self.__dict__)


@dataclass(frozen=True)
class DReport:
    level: int
    matrix: np.ndarray
    min_eigenvalue: float
    idempotency_defect: float


class Deformation:
    """A self-adjoint bimodular contraction F on raw level 2 satisfying the braid relation."""

    def __init__(self, tower: RawTower, F: np.ndarray, tol: float | None = None, check: bool = True) -> None:
        self.tower: RawTower = tower
        self.F: np.ndarray = np.asarray(F, dtype=complex)
        self.tol: float = ConfigValue("options:fock:tol", default=1e-10, after=float).resolve() if tol is None else tol
        r2: int = tower.dim(2)
        if self.F.shape != (r2, r2):
            raise DeformationError(f"F must act on level 2 of dimension {r2}, got shape {self.F.shape}", flag="shape")
        self._legs: dict[tuple[int, int], np.ndarray] = {}
        self._d: dict[int, np.ndarray] = {}
        self.flags: DeformationFlags = self._compute_flags()
        if check:
            self.validate()

    @staticmethod
    def from_product(tower: RawTower, F_product: np.ndarray, **kwargs) -> Deformation:
        """F given on product coordinates of H ⊗ H."""
        F_raw: np.ndarray = tower.split(1, 1) @ np.asarray(F_product, dtype=complex) @ tower.split_inverse(1, 1)
        return Deformation(tower, F_raw, **kwargs)

    @staticmethod
    def zero(tower: RawTower) -> Deformation:
        r2: int = tower.dim(2)
        return Deformation(tower, np.zeros((r2, r2), dtype=complex))

    def _scaled(self, value: float) -> bool:
        return value <= self.tol * max(1.0, float(np.linalg.norm(self.F, 2)) if self.F.size else 1.0)

    def _compute_flags(self) -> DeformationFlags:
        F: np.ndarray = self.F
        level2 = self.tower.level(2)
        self_adjoint: bool = self._scaled(float(np.linalg.norm(F - F.conj().T)))
        contraction: bool = (float(np.linalg.norm(F, 2)) if F.size else 0.0) <= 1.0 + self.tol
        projection: bool = self_adjoint and self._scaled(float(np.linalg.norm(F @ F - F)))
        bimodular: bool = self._scaled(modularity_defect(F, level2, level2, "right")) and self._scaled(
            modularity_defect(F, level2, level2, "left")
        )
        braid, commuting = False, False
        if bimodular:
            F1, F2 = self.leg(3, 1), self.leg(3, 2)
            braid = self._scaled(float(np.linalg.norm(F1 @ F2 @ F1 - F2 @ F1 @ F2)))
            commuting = self._scaled(float(np.linalg.norm(F1 @ F2 - F2 @ F1)))
        flags = DeformationFlags(
            is_self_adjoint=self_adjoint,
            is_contraction=contraction,
            is_projection=projection,
            bimodular=bimodular,
            braid_ok=braid,
            commuting_ok=commuting,
        )
        logger.debug(f"deformation flags: {flags.to_dict()}")
        return flags

    def validate(self) -> None:
        for flag in ("is_self_adjoint", "is_contraction", "bimodular", "braid_ok"):
            if not getattr(self.flags, flag):
                raise DeformationError(f"deformation fails the '{flag}' check", flag=flag)

    def require(self, *flags: str) -> None:
        for flag in flags:
            if not getattr(self.flags, flag):
                raise DeformationError(f"this construction needs '{flag}', which the deformation does not satisfy", flag=flag)

    def leg(self, n: int, i: int) -> np.ndarray:
        """F_{t_i} on level n."""
        if not 1 <= i < n:
            raise ValueError(f"t_{i} is not a generator on level {n}")
        key = (n, i)
        if key not in self._legs:
            tower: RawTower = self.tower
            tail: int = n - i - 1
            op: np.ndarray = -self.F
            if tail > 0:
                op = tower.tensor(op, tower.identity(tail), source=(2, tail), target=(2, tail))
            if i > 1:
                op = tower.tensor(tower.identity(i - 1), op, source=(i - 1, tail + 2), target=(i - 1, tail + 2))
            self._legs[key] = op
        return self._legs[key]

    def f_word(self, n: int, word: list[int]) -> np.ndarray:
        result: np.ndarray = self.tower.identity(n)
        for i in word:
            result = result @ self.leg(n, i)
        return result

    def f_sigma(self, sigma: Permutation) -> np.ndarray:
        """F_σ along the canonical reduced word; independent of the word by the braid relation."""
        return self.f_word(sigma.n, reduced_word(sigma))

    def d_operator(self, n: int) -> np.ndarray:
        """D⁽ⁿ⁾ = E_{n−1,1}(D⁽ⁿ⁻¹⁾ ⊗ 1), with E_{n−1,1} = 1 + F_{n−1} + F_{n−2}F_{n−1} + … + F_1⋯F_{n−1}."""
        if n not in self._d:
            if n <= 1:
                self._d[n] = self.tower.identity(n)
            else:
                tower: RawTower = self.tower
                shuffles: np.ndarray = tower.identity(n)
                term: np.ndarray = tower.identity(n)
                for j in range(n - 1, 0, -1):
                    term = self.leg(n, j) @ term
                    shuffles = shuffles + term
                previous = tower.tensor(self.d_operator(n - 1), tower.identity(1), source=(n - 1, 1), target=(n - 1, 1))
                D: np.ndarray = shuffles @ previous
                self._d[n] = (D + D.conj().T) / 2
        return self._d[n]

    def d_report(self, n: int) -> DReport:
        D: np.ndarray = self.d_operator(n)
        eigenvalues: np.ndarray = np.linalg.eigvalsh(D) if D.size else np.zeros(1)
        return DReport(level=n, matrix=D, min_eigenvalue=float(eigenvalues[0]), idempotency_defect=float(np.linalg.norm(D @ D - D)))

    def d_brute(self, n: int) -> np.ndarray:
        """Σ over all of S_n; exponential, for cross-checks."""
        if n <= 1:
            return self.tower.identity(n)
        return sum((self.f_sigma(sigma) for sigma in symmetric_group(n)), np.zeros((self.tower.dim(n),) * 2, dtype=complex))

    def shuffle_sum(self, n: int, m: int) -> np.ndarray:
        """E_{n,m} = Σ_{σ∈V_{n,m}} F_σ."""
        if n == 0 or m == 0:
            return self.tower.identity(n + m)
        return sum((self.f_sigma(sigma) for sigma in enumerate_V((n, m))), np.zeros((self.tower.dim(n + m),) * 2, dtype=complex))

    def factorization_defect(self, n: int, m: int) -> float:
        """‖D⁽ⁿ⁺ᵐ⁾ − E_{n,m}(D⁽ⁿ⁾ ⊗ D⁽ᵐ⁾)‖"""
        product = self.tower.tensor(self.d_operator(n), self.d_operator(m), source=(n, m), target=(n, m))
        return float(np.linalg.norm(self.d_operator(n + m) - self.shuffle_sum(n, m) @ product))
