"""The involution J, Wick words W(ξ) and the vacuum state on the deformed Fock space.

Anti-linear maps are stored as matrices A with Jv = A·conj(v).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from loguru import logger

from src.configuration import ConfigValue
from src.coxeter import Permutation, reversal, symmetric_group
from src.errors import InvalidBimoduleError, TruncationError
from src.finvn import Bimodule, TracialAlgebra
from src.fock import Deformation, FockOperator, RawTower, TruncatedFock


def star_permutation(M: TracialAlgebra) -> np.ndarray:
    """J⁽⁰⁾x̂ = (x*)^ in orthonormal coordinates of L²(M)."""
    P: np.ndarray = np.zeros((M.size, M.size), dtype=complex)
    for t in range(M.size):
        P[M.unit_adjoint(t), t] = 1.0
    return P


def swap_matrix(p: int, q: int) -> np.ndarray:
    """Product coordinates of ℂᵖ ⊗ ℂ^q → ℂ^q ⊗ ℂᵖ."""
    S: np.ndarray = np.zeros((p * q, p * q))
    for i in range(p):
        for j in range(q):
            S[j * p + i, i * q + j] = 1.0
    return S


@dataclass(frozen=True)
class InvolutionFlags:
    involutive: bool
    anti_unitary: bool
    intertwining: bool


class Involution:
    """An anti-unitary J on H with J² = 1 and J(xξy) = y*J(ξ)x*."""

    def __init__(self, tower: RawTower, A: np.ndarray, tol: float | None = None, check: bool = True) -> None:
        self.tower: RawTower = tower
        self.A: np.ndarray = np.asarray(A, dtype=complex)
        self.tol: float = ConfigValue("options:fock:tol", default=1e-10, after=float).resolve() if tol is None else tol
        self._raw: dict[int, np.ndarray] = {0: star_permutation(tower.algebra), 1: self.A}
        self.flags: InvolutionFlags = self._compute_flags()
        if check:
            for flag, ok in self.flags.__dict__.items():
                if not ok:
                    raise InvalidBimoduleError(f"involution fails the '{flag}' check")

    @staticmethod
    def conjugation(tower: RawTower) -> Involution:
        """Coordinatewise conjugation."""
        return Involution(tower, np.eye(tower.H.dim))

    def _compute_flags(self) -> InvolutionFlags:
        A, H, M = self.A, self.tower.H, self.tower.algebra
        eye: np.ndarray = np.eye(H.dim)
        tol: float = self.tol * 1e2
        intertwining: bool = all(
            np.allclose(A @ H.left[t].conj(), H.right[M.unit_adjoint(t)] @ A, atol=tol)
            and np.allclose(A @ H.right[t].conj(), H.left[M.unit_adjoint(t)] @ A, atol=tol)
            for t in range(M.size)
        )
        return InvolutionFlags(
            involutive=bool(np.allclose(A @ A.conj(), eye, atol=tol)),
            anti_unitary=bool(np.allclose(A.conj().T @ A, eye, atol=tol)),
            intertwining=intertwining,
        )

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.A @ np.conj(v)

    def raw_lift(self, n: int) -> np.ndarray:
        """J⁽ⁿ⁾(ξ₁⊗⋯⊗ξₙ) = Jξₙ⊗⋯⊗Jξ₁ on raw level n."""
        if n not in self._raw:
            tower: RawTower = self.tower
            previous: np.ndarray = self.raw_lift(n - 1)
            reversed_product = swap_matrix(tower.dim(n - 1), tower.H.dim) @ np.kron(previous, self.A)
            self._raw[n] = tower.split(1, n - 1) @ reversed_product @ tower.lift(n).conj()
        return self._raw[n]


@dataclass(frozen=True)
class CompatReport:
    triples: float
    level_two: float
    permutations: float

    @property
    def defect(self) -> float:
        return max(self.triples, self.level_two, self.permutations)


def check_compat(deformation: Deformation, J: Involution, max_level: int = 4) -> CompatReport:
    """Defects of (l(ζ)*⊗id)F(Jη⊗ξ) = J(l(ξ)*⊗1)F(η⊗ζ), of J⁽²⁾F = FJ⁽²⁾ and of J⁽ⁿ⁾F_σJ⁽ⁿ⁾ = F_{γσγ}."""
    tower: RawTower = deformation.tower
    H: Bimodule = tower.H
    F: np.ndarray = deformation.F
    Q: np.ndarray = tower.split(1, 1)
    basis: np.ndarray = np.eye(H.dim, dtype=complex)

    def contract(zeta: np.ndarray, v: np.ndarray) -> np.ndarray:
        return tower.tensor(H.l_operator(zeta).conj().T, tower.identity(1), source=(1, 1), target=(0, 1)) @ v

    triples: float = 0.0
    for eta in basis:
        for xi in basis:
            for zeta in basis:
                lhs = contract(zeta, F @ Q @ np.kron(J.apply(eta), xi))
                rhs = J.apply(contract(xi, F @ Q @ np.kron(eta, zeta)))
                triples = max(triples, float(np.linalg.norm(lhs - rhs)))

    A2: np.ndarray = J.raw_lift(2)
    level_two: float = float(np.linalg.norm(A2 @ F.conj() - F @ A2))

    permutations: float = 0.0
    for n in range(2, max_level + 1):
        An: np.ndarray = J.raw_lift(n)
        gamma: Permutation = reversal(n)
        for sigma in symmetric_group(n):
            lhs = An @ deformation.f_sigma(sigma).conj() @ An.conj()
            permutations = max(permutations, float(np.linalg.norm(lhs - deformation.f_sigma(gamma * sigma * gamma))))

    report = CompatReport(triples=triples, level_two=level_two, permutations=permutations)
    logger.debug(f"compatibility of J and F: {report}")
    return report


@dataclass(frozen=True, eq=False)
class WickWord:
    vector: np.ndarray
    level: int
    operator: FockOperator


class Wick:
    """Wick calculus on a truncated Fock space with a compatible involution."""

    def __init__(self, fock: TruncatedFock, J: Involution, check: bool = False) -> None:
        self.fock: TruncatedFock = fock
        self.J: Involution = J
        self._lifts: dict[int, np.ndarray] = {}
        self._mirror: np.ndarray | None = None
        if check:
            report: CompatReport = check_compat(fock.deformation, J, max(2, min(fock.N, 3)))
            if report.defect > J.tol:
                raise InvalidBimoduleError(f"involution is not compatible with the deformation (defect {report.defect:.3e})")

    def lift(self, n: int) -> np.ndarray:
        """B_n with J⁽ⁿ⁾v = B_n·conj(v) on the deformed level n."""
        if n not in self._lifts:
            fock = self.fock
            self._lifts[n] = fock.K(n) @ self.J.raw_lift(n) @ fock.K_plus(n).conj()
        return self._lifts[n]

    def apply_J(self, v: np.ndarray, n: int) -> np.ndarray:
        return self.lift(n) @ np.conj(v)

    def s_operator(self, xi: np.ndarray, n: int, m: int) -> np.ndarray:
        """S_{n,m}(ξ): level n → level m for ξ at level n+m, from ⟨η, S ζ⟩ = ⟨I_{m,n}(η ⊗ J⁽ⁿ⁾ζ), ξ⟩."""
        fock = self.fock
        raw_pairs: np.ndarray = np.kron(fock.K_plus(m), fock.K_plus(n) @ self.lift(n))
        Z: np.ndarray = fock.K(m + n) @ fock.tower.split(m, n) @ raw_pairs
        return (Z.conj().T @ xi).reshape(fock.dims[m], fock.dims[n])

    def wick_word(self, xi: np.ndarray, n: int) -> WickWord:
        """W(ξ) = Σ_k L(S_{k,n−k}(ξ))

        Assumes J is compatible with F; construct with `check=True` to verify it once.
        """
        fock = self.fock
        matrix: np.ndarray = np.zeros((fock.dim, fock.dim), dtype=complex)
        for k in range(n + 1):
            matrix += fock.creation(self.s_operator(xi, k, n - k), k, n - k, check=False).matrix
        return WickWord(vector=np.asarray(xi), level=n, operator=FockOperator(fock, matrix, None))

    def boxtimes(self, xi: np.ndarray, eta: np.ndarray, n: int, m: int, k: int) -> np.ndarray:
        """ξ ⊠_k η = I_{n,m}(S_{k,n}(ξ) ⊗ id_m)I*_{k,m}η for ξ at level n+k and η at level k+m."""
        fock = self.fock
        S: np.ndarray = self.s_operator(xi, k, n)
        return fock.include(n, m) @ fock.tensor_identity(S, k, n, m) @ fock.include(k, m).conj().T @ eta

    def product_expansion(self, xi: np.ndarray, a: int, eta: np.ndarray, b: int) -> FockOperator:
        """Σ_k W(ξ ⊠_k η) for ξ at level a and η at level b; equals W(ξ)W(η) on levels ≤ N − a − b."""
        fock = self.fock
        if a + b > fock.N:
            raise TruncationError(f"the product of words of levels {a} and {b} needs truncation {a + b}, got {fock.N}")
        matrix: np.ndarray = np.zeros((fock.dim, fock.dim), dtype=complex)
        for k in range(min(a, b) + 1):
            vector: np.ndarray = self.boxtimes(xi, eta, a - k, b - k, k)
            matrix += self.wick_word(vector, a + b - 2 * k).operator.matrix
        return FockOperator(fock, matrix, None)

    def vacuum_state(self, A: FockOperator) -> complex:
        """φ(A) = ⟨Ω, AΩ⟩"""
        omega: np.ndarray = self.fock.vacuum
        return complex(np.vdot(omega, A.matrix @ omega))

    def cond_expectation(self, A: FockOperator) -> np.ndarray:
        """E(A): the algebra element x with PAP* = λ(x)."""
        M: TracialAlgebra = self.fock.algebra
        return M.from_gns(A.block(0, 0) @ M.to_gns(M.one()))

    @property
    def mirror(self) -> np.ndarray:
        """J̃ on the whole truncated space, as B with J̃v = B·conj(v)."""
        if self._mirror is None:
            fock = self.fock
            B: np.ndarray = np.zeros((fock.dim, fock.dim), dtype=complex)
            for n in range(fock.N + 1):
                s = fock.level_slice(n)
                B[s, s] = self.lift(n)
            self._mirror = B
        return self._mirror

    def mirrored(self, A: FockOperator) -> FockOperator:
        """J̃AJ̃"""
        B: np.ndarray = self.mirror
        return FockOperator(self.fock, B @ A.matrix.conj() @ B.conj(), A.degree)
