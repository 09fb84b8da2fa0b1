"""Radial multipliers on the deformed Fock space.

M_x multiplies level n by x(n). ρ(A) = Σ_i R(ξ_i)·A·R(ξ_i)* for a module frame (ξ_i) of H, and
Φ_{x,y}(A) = Σ_{j≥0} M_{(S*)ʲx}·A·M*_{(S*)ʲy} + Σ_{j≥1} M_{Sʲx}·ρʲ(A)·M*_{Sʲy}.
On L(T) of degree (n, m) the map Φ_{x,y} acts as multiplication by Σ_k x(k+m)·conj(y(k+n)).

Both sums are driven by a kernel G[i, j] = Σ_k x_k(i)·conj(y_k(j)): the first sum uses the
diagonal tail sums of G, the j-th term of the second uses G shifted by j. A single pair gives
Φ_{x,y}; the rank one decomposition of H_ψ gives the radial part of Φ_ψ.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from loguru import logger

from src.configuration import ConfigValue
from src.errors import NotInClassError
from src.finvn import Bimodule, FrameVector, module_frame, right_modular_projection
from src.fock import FockOperator, TruncatedFock
from src.model import RadialFunction
from src.radial_kernel import ClassNorm, RankOneDecomposition, class_norm, rank_one_decompose

Coefficients = Sequence[complex] | np.ndarray


def as_sequence(x: Coefficients | Callable[[int], complex], length: int) -> np.ndarray:
    """x(0), …, x(length − 1); finite sequences are padded with zeros."""
    if callable(x):
        return np.array([x(n) for n in range(length)], dtype=complex)
    values: np.ndarray = np.zeros(length, dtype=complex)
    given: np.ndarray = np.asarray(x, dtype=complex)[:length]
    values[: len(given)] = given
    return values


def shift(x: np.ndarray, j: int) -> np.ndarray:
    """(Sʲx)(n) = x(n − j), and (S*)ʲ for negative j."""
    x = np.asarray(x, dtype=complex)
    result: np.ndarray = np.zeros_like(x)
    if abs(j) >= len(x):
        return result
    if j >= 0:
        result[j:] = x[: len(x) - j]
    else:
        result[: len(x) + j] = x[-j:]
    return result


def alternating_sign(length: int) -> np.ndarray:
    """z(n) = (−1)ⁿ"""
    return (-1.0) ** np.arange(length)


def indicator_from(k: int, length: int) -> np.ndarray:
    """r_k(n) = 1 for n ≥ k"""
    return (np.arange(length) >= k).astype(float)


def level_index(fock: TruncatedFock) -> np.ndarray:
    return np.repeat(np.arange(fock.N + 1), fock.dims)


def radial_mult(fock: TruncatedFock, x: Coefficients | Callable[[int], complex]) -> FockOperator:
    values: np.ndarray = as_sequence(x, fock.N + 1)
    return FockOperator(fock, np.diag(values[level_index(fock)]).astype(complex), None)


def sandwich(fock: TruncatedFock, x: np.ndarray, A: np.ndarray, y: np.ndarray) -> np.ndarray:
    """M_x·A·M_y* for sequences covering the levels 0..N."""
    levels: np.ndarray = level_index(fock)
    return as_sequence(x, fock.N + 1)[levels][:, None] * A * as_sequence(y, fock.N + 1)[levels].conj()[None, :]


def fock_bimodule(fock: TruncatedFock) -> Bimodule:
    """The truncated Fock space with its left and right actions."""
    M = fock.algebra
    left = np.stack([fock.left_action(M.unit(*u)).matrix for u in M.units])
    right = np.stack([fock.right_action(M.unit(*u)).matrix for u in M.units])
    return Bimodule(algebra=M, left=left, right=right)


class PhiResult(NamedTuple):
    operator: FockOperator
    remainder: float
    """bound on the discarded tail of the first sum"""


class PsiMap(NamedTuple):
    apply: Callable[[FockOperator], FockOperator]
    norm: ClassNorm
    decomposition: RankOneDecomposition


@dataclass(frozen=True, eq=False)
class MultiplierResult:
    operator: FockOperator
    bound: float
    remainder: float
    norm: ClassNorm
    decomposition: RankOneDecomposition


@dataclass
class RadialMultipliers:
    """ρ, Φ_{x,y} and Φ_ψ on a truncated Fock space whose deformation is a commuting projection."""

    fock: TruncatedFock
    frame: list[FrameVector] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.fock.deformation.require("is_projection", "commuting_ok")
        if not self.frame:
            self.frame = module_frame(self.fock.tower.H)
        self._creators: list[np.ndarray] = [self.right_creation(f.vector) for f in self.frame]

    def right_creation(self, xi: np.ndarray) -> np.ndarray:
        """R(ξ): η ↦ I_{n,1}(η ⊗ ξ), level n → n+1, as a matrix on the truncated space."""
        fock: TruncatedFock = self.fock
        R: np.ndarray = np.zeros((fock.dim, fock.dim), dtype=complex)
        for n in range(1, fock.N + 1):
            block = fock.K(n) @ fock.tower.split(n - 1, 1) @ np.kron(fock.K_plus(n - 1), np.asarray(xi, dtype=complex)[:, None])
            R[fock.level_slice(n), fock.level_slice(n - 1)] = block
        return R

    def rho(self, A: FockOperator) -> FockOperator:
        """ρ(A) = Σ_i R(ξ_i)·A·R(ξ_i)*"""
        matrix: np.ndarray = sum((R @ A.matrix @ R.conj().T for R in self._creators), np.zeros_like(A.matrix))
        return FockOperator(self.fock, matrix, A.degree)

    def rho_power(self, A: FockOperator, l: int) -> FockOperator:
        result: FockOperator = A
        for _ in range(l):
            result = self.rho(result)
        return result

    def _apply_kernel(self, A: FockOperator, G: np.ndarray) -> np.ndarray:
        fock: TruncatedFock = self.fock
        N: int = fock.N
        size: int = G.shape[0]
        if size < N + 1:
            G = np.pad(G, ((0, N + 1 - size), (0, N + 1 - size)))
        levels: np.ndarray = level_index(fock)

        tails: np.ndarray = np.array([[np.trace(G[i:, j:]) for j in range(N + 1)] for i in range(N + 1)])
        result: np.ndarray = tails[levels[:, None], levels[None, :]] * A.matrix

        power: np.ndarray = A.matrix
        for j in range(1, N + 1):
            power = sum((R @ power @ R.conj().T for R in self._creators), np.zeros_like(power))
            shifted: np.ndarray = np.zeros((N + 1, N + 1), dtype=complex)
            shifted[j:, j:] = G[: N + 1 - j, : N + 1 - j]
            result = result + shifted[levels[:, None], levels[None, :]] * power
        return result

    def phi_xy(self, A: FockOperator, x: Coefficients, y: Coefficients, tol: float | None = None) -> PhiResult:
        tol = ConfigValue("options:radial:tol", default=1e-9, after=float).resolve() if tol is None else tol
        x, y = np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)
        length: int = max(len(x), len(y), self.fock.N + 1)
        x, y = as_sequence(x, length), as_sequence(y, length)

        tail_x: np.ndarray = np.sqrt(np.cumsum(np.abs(x[::-1]) ** 2)[::-1])
        tail_y: np.ndarray = np.sqrt(np.cumsum(np.abs(y[::-1]) ** 2)[::-1])
        cut: int = length
        for j in range(self.fock.N + 1, length):
            if tail_x[j] * tail_y[j] < tol:
                cut = j
                break
        remainder: float = float(tail_x[cut] * tail_y[cut]) * A.norm() if cut < length else 0.0

        G: np.ndarray = np.outer(x[:cut], y[:cut].conj())
        return PhiResult(FockOperator(self.fock, self._apply_kernel(A, G), A.degree), remainder)

    def psi_map(self, psi: RadialFunction, N_dec: int | None = None, tol: float | None = None) -> PsiMap:
        """Certifies ψ in class 𝒞 once and returns Φ_ψ as a reusable map."""
        norm: ClassNorm = class_norm(psi, "C", N_dec, tol)
        if not norm.converged:
            raise NotInClassError(f"{psi.kind} is not certified in class C at N={norm.truncation} (estimate {norm.norm:.6g})")
        decomposition: RankOneDecomposition = rank_one_decompose(psi, norm.truncation, norm.tol)
        c_plus, c_minus = norm.asymptotics.c_plus, norm.asymptotics.c_minus
        u: np.ndarray = alternating_sign(self.fock.N + 1)
        kernel: np.ndarray | None = decomposition.matrix() if decomposition.pairs else None

        def apply(A: FockOperator) -> FockOperator:
            matrix: np.ndarray = c_plus * A.matrix + c_minus * sandwich(self.fock, u, A.matrix, u)
            if kernel is not None:
                matrix = matrix + self._apply_kernel(A, kernel)
            return FockOperator(self.fock, matrix, A.degree)

        logger.debug(f"Φ_ψ for {psi.kind}: {len(decomposition.pairs)} rank one terms, bound {norm.norm:.6g}")
        return PsiMap(apply, norm, decomposition)

    def phi_psi(self, A: FockOperator, psi: RadialFunction, N_dec: int | None = None, tol: float | None = None) -> MultiplierResult:
        """Φ_ψ = c₊ + c₋·Ad_u + Σ_k Φ_{x_k,y_k}, with bound ‖ψ‖_𝒞."""
        phi: PsiMap = self.psi_map(psi, N_dec, tol)
        return MultiplierResult(
            operator=phi.apply(A),
            bound=phi.norm.norm,
            remainder=0.0,
            norm=phi.norm,
            decomposition=phi.decomposition,
        )


def cb_upper_bound(x: Coefficients, y: Coefficients) -> float:
    """‖x‖₂·‖y‖₂ bounds ‖Φ_{x,y}‖_cb."""
    return float(np.linalg.norm(np.asarray(x)) * np.linalg.norm(np.asarray(y)))


def cb_lower_bound(
    phi: Callable[[FockOperator], FockOperator],
    fock: TruncatedFock,
    amplification: int | None = None,
    trials: int | None = None,
    seed: int | None = None,
) -> float:
    """max ‖(Φ ⊗ id_k)(A)‖/‖A‖ over random right-modular k×k block operators A."""
    k: int = ConfigValue("options:multiplier:amplification", default=3, after=int).resolve() if amplification is None else amplification
    trials = ConfigValue("options:multiplier:trials", default=200, after=int).resolve() if trials is None else trials
    seed = seed if seed is not None else ConfigValue("options:verify:seed", default=42, after=int).resolve()
    if k < 1:
        raise ValueError(f"amplification must be positive, got {k}")

    rng: np.random.Generator = np.random.default_rng(seed)
    space: Bimodule = fock_bimodule(fock)
    d: int = fock.dim
    best: float = 0.0
    for _ in range(trials):
        blocks = [
            [right_modular_projection(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)), space, space) for _ in range(k)]
            for _ in range(k)
        ]
        A: np.ndarray = np.block(blocks)
        image: np.ndarray = np.block([[phi(FockOperator(fock, b, None)).matrix for b in row] for row in blocks])
        size: float = float(np.linalg.norm(A, 2))
        if size > 0:
            best = max(best, float(np.linalg.norm(image, 2)) / size)
    logger.debug(f"cb lower bound over {trials} trials (k={k}): {best:.6g}")
    return best
