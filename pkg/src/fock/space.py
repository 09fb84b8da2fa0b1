"""The truncated deformed Fock space ⊕_{n≤N} H⁽ⁿ⁾_F and operators on it.

Level n of the deformed space is raw level n with inner product ⟨ξ, D⁽ⁿ⁾η⟩, separated.
For a composition c = (c₁, …, c_s) of n the inner product of H⁽ᶜ¹⁾_F ⊗_M ⋯ ⊗_M H⁽ᶜˢ⁾_F lives on
raw level n as well, given by D_c = D⁽ᶜ¹⁾ ⊗ ⋯ ⊗ D⁽ᶜˢ⁾. K_c maps raw coordinates to orthonormal
coordinates of that space, K_c⁺ picks representatives.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg
from loguru import logger

from src.configuration import ConfigValue
from src.coxeter import Permutation, cross, shuffle_sigma
from src.errors import InvalidBimoduleError, PositivityError, TruncationError
from src.finvn import Bimodule, TracialAlgebra

from .deformation import Deformation
from .tower import RawTower


class LevelCoordinates(NamedTuple):
    K: np.ndarray
    K_plus: np.ndarray
    min_eigenvalue: float


@dataclass(frozen=True)
class Window:
    """Input levels on which an identity is asserted."""

    levels: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"levels": list(self.levels)}


class TruncatedFock:
    """⊕_{n=0}^{N} H⁽ⁿ⁾_F with vacuum Ω = 1̂ at level 0.

    Components of operators that would land above level N are dropped, so identities
    are asserted only on inputs whose images stay inside the truncation.
    """

    def __init__(
        self,
        deformation: Deformation,
        N: int | None = None,
        positivity_tol: float | None = None,
        gram_tol: float | None = None,
    ) -> None:
        self.deformation: Deformation = deformation
        self.tower: RawTower = deformation.tower
        self.algebra: TracialAlgebra = self.tower.algebra
        self.N: int = N if N is not None else ConfigValue("options:fock:truncation", default=4, after=int).resolve()
        if positivity_tol is None:
            positivity_tol = ConfigValue("options:fock:positivity_tol", default=1e-10, after=float).resolve()
        self.positivity_tol: float = positivity_tol
        self.gram_tol: float = self.tower.gram_tol if gram_tol is None else gram_tol
        self.tol: float = deformation.tol
        if self.N < 0:
            raise TruncationError(f"truncation must be non-negative, got {self.N}")

        self._coordinates: dict[tuple[int, ...], LevelCoordinates] = {}
        self.dims: list[int] = [self.coordinates((n,)).K.shape[0] for n in range(self.N + 1)]
        self.offsets: list[int] = [0]
        for d in self.dims:
            self.offsets.append(self.offsets[-1] + d)
        logger.debug(f"deformed levels: {self.dims}")

    @property
    def dim(self) -> int:
        return self.offsets[-1]

    def level_slice(self, n: int) -> slice:
        self._check_level(n)
        return slice(self.offsets[n], self.offsets[n + 1])

    def _check_level(self, n: int) -> None:
        if not 0 <= n <= self.N:
            raise TruncationError(f"level {n} outside the truncation 0..{self.N}")

    def composition_operator(self, parts: Sequence[int]) -> np.ndarray:
        """D_c on raw level Σc."""
        parts = [k for k in parts if k > 0]
        if len(parts) <= 1:
            return self.deformation.d_operator(parts[0] if parts else 0)
        rest: int = sum(parts[1:])
        return self.tower.tensor(
            self.deformation.d_operator(parts[0]), self.composition_operator(parts[1:]), source=(parts[0], rest), target=(parts[0], rest)
        )

    def coordinates(self, parts: Sequence[int]) -> LevelCoordinates:
        key: tuple[int, ...] = tuple(k for k in parts if k > 0)
        if key not in self._coordinates:
            n: int = sum(key)
            if len(key) <= 1 and n <= 1:
                eye: np.ndarray = self.tower.identity(n)
                self._coordinates[key] = LevelCoordinates(eye, eye, 1.0)
            else:
                D: np.ndarray = self.composition_operator(key)
                values, vectors = scipy.linalg.eigh((D + D.conj().T) / 2)
                lowest: float = float(values[0]) if len(values) else 0.0
                if lowest < -self.positivity_tol:
                    raise PositivityError(n, lowest, self.positivity_tol)
                top: float = float(values[-1]) if len(values) else 0.0
                keep: np.ndarray = values > self.gram_tol * max(top, 1.0)
                root: np.ndarray = np.sqrt(values[keep])
                K = (vectors[:, keep] * root).conj().T
                K_plus = vectors[:, keep] / root
                self._coordinates[key] = LevelCoordinates(K, K_plus, lowest)
                logger.debug(f"composition {key}: raw {D.shape[0]} -> deformed {K.shape[0]} (min eigenvalue {lowest:.3e})")
        return self._coordinates[key]

    def K(self, *parts: int) -> np.ndarray:
        return self.coordinates(parts).K

    def K_plus(self, *parts: int) -> np.ndarray:
        return self.coordinates(parts).K_plus

    def identity_map(self, source: Sequence[int], target: Sequence[int]) -> np.ndarray:
        """The map between composition coordinates induced by the identity of raw level n."""
        return self.coordinates(target).K @ self.coordinates(source).K_plus

    def include(self, n: int, m: int) -> np.ndarray:
        """I_{n,m}: H⁽ⁿ⁾_F ⊗_M H⁽ᵐ⁾_F → H⁽ⁿ⁺ᵐ⁾_F"""
        return self.identity_map((n, m), (n + m,))

    def flip(self, n: int, m: int) -> np.ndarray:
        """F_{n,m}: H⁽ⁿ⁾_F ⊗_M H⁽ᵐ⁾_F → H⁽ᵐ⁾_F ⊗_M H⁽ⁿ⁾_F induced by F_{σ_{n,m}}."""
        raw: np.ndarray = self.tower.identity(n + m) if n == 0 or m == 0 else self.deformation.f_sigma(shuffle_sigma(n, m))
        return self.K(m, n) @ raw @ self.K_plus(n, m)

    def raw_map(self, T: np.ndarray, n: int, m: int) -> np.ndarray:
        """K_m⁺·T·K_n: a deformed map level n → m seen on raw levels."""
        return self.K_plus(m) @ T @ self.K(n)

    def tensor_identity(self, T: np.ndarray, n: int, m: int, k: int, raw: bool = False) -> np.ndarray:
        """T ⊗ id_k from (n, k) to (m, k) coordinates."""
        T_raw: np.ndarray = T if raw else self.raw_map(T, n, m)
        lifted = self.tower.tensor(T_raw, self.tower.identity(k), source=(n, k), target=(m, k))
        return self.K(m, k) @ lifted @ self.K_plus(n, k)

    def tensor(self, a: np.ndarray, b: np.ndarray, m: int, n: int) -> np.ndarray:
        """I_{m,n}(a ⊗ b) for deformed vectors a at level m and b at level n."""
        raw: np.ndarray = self.tower.split(m, n) @ np.kron(self.K_plus(m) @ a, self.K_plus(n) @ b)
        return self.K(m + n) @ raw

    def embed(self, vector: np.ndarray, n: int) -> np.ndarray:
        """A level-n vector as a vector of the whole truncated space."""
        result: np.ndarray = np.zeros(self.dim, dtype=complex)
        result[self.level_slice(n)] = vector
        return result

    def component(self, vector: np.ndarray, n: int) -> np.ndarray:
        return np.asarray(vector)[self.level_slice(n)]

    def raw_to_deformed(self, vector: np.ndarray, n: int) -> np.ndarray:
        return self.K(n) @ vector

    @property
    def vacuum(self) -> np.ndarray:
        """Ω = 1̂"""
        return self.embed(self.algebra.to_gns(self.algebra.one()), 0)

    def level_projector(self, n: int) -> FockOperator:
        P: np.ndarray = np.zeros((self.dim, self.dim), dtype=complex)
        s: slice = self.level_slice(n)
        P[s, s] = np.eye(self.dims[n])
        return FockOperator(self, P, None)

    def deformed_level(self, n: int) -> Bimodule:
        """H⁽ⁿ⁾_F with its induced actions."""
        raw: Bimodule = self.tower.level(n)
        K, K_plus = self.K(n), self.K_plus(n)
        return Bimodule(
            algebra=self.algebra,
            left=np.einsum("ai,tij,jb->tab", K, raw.left, K_plus),
            right=np.einsum("ai,tij,jb->tab", K, raw.right, K_plus),
        )

    def _action(self, x: np.ndarray, side: str) -> FockOperator:
        A: np.ndarray = np.zeros((self.dim, self.dim), dtype=complex)
        for n in range(self.N + 1):
            raw: Bimodule = self.tower.level(n)
            op: np.ndarray = raw.lam(x) if side == "left" else raw.rho(x)
            s: slice = self.level_slice(n)
            A[s, s] = self.K(n) @ op @ self.K_plus(n)
        return FockOperator(self, A, (0, 0))

    def left_action(self, x: np.ndarray) -> FockOperator:
        return self._action(x, "left")

    def right_action(self, x: np.ndarray) -> FockOperator:
        return self._action(x, "right")

    def modularity_defect(self, T: np.ndarray, n: int, m: int) -> float:
        source, target = self.deformed_level(n), self.deformed_level(m)
        return max((float(np.linalg.norm(target.right[t] @ T - T @ source.right[t])) for t in range(self.algebra.size)), default=0.0)

    def creation(self, T: np.ndarray, n: int, m: int, check: bool = True) -> FockOperator:
        """L(T) for a right-modular T: H⁽ⁿ⁾_F → H⁽ᵐ⁾_F, acting as I_{m,k}(T ⊗ id_k)I*_{n,k} on level n+k."""
        self._check_level(n)
        self._check_level(m)
        T = np.asarray(T, dtype=complex)
        if T.shape != (self.dims[m], self.dims[n]):
            raise ValueError(f"map {n} -> {m} must have shape {(self.dims[m], self.dims[n])}, got {T.shape}")
        if check:
            defect: float = self.modularity_defect(T, n, m)
            if defect > 1e2 * self.tol * max(1.0, float(np.linalg.norm(T))):
                raise InvalidBimoduleError(f"map {n} -> {m} is not right modular (defect {defect:.3e})")

        L: np.ndarray = np.zeros((self.dim, self.dim), dtype=complex)
        T_raw: np.ndarray = self.raw_map(T, n, m)
        for k in range(0, self.N - max(n, m) + 1):
            block: np.ndarray = self.include(m, k) @ self.tensor_identity(T_raw, n, m, k, raw=True) @ self.include(n, k).conj().T
            L[self.level_slice(m + k), self.level_slice(n + k)] = block
        return FockOperator(self, L, (n, m))

    def creation_vector(self, xi: np.ndarray) -> FockOperator:
        """L(ξ) = L(l(ξ)) for ξ in H."""
        return self.creation(self.K(1) @ self.tower.H.l_operator(self.K_plus(1) @ xi), 0, 1)


@dataclass(frozen=True, eq=False)
class FockOperator:
    """A matrix on the truncated Fock space.

    `degree` is (n, m) for an operator of the form L(T) with T: H⁽ⁿ⁾ → H⁽ᵐ⁾, and None once
    the operator is a sum of several degrees.
    """

    fock: TruncatedFock
    matrix: np.ndarray
    degree: tuple[int, int] | None

    def __matmul__(self, other: FockOperator) -> FockOperator:
        return FockOperator(self.fock, self.matrix @ other.matrix, _product_degree(self.degree, other.degree))

    def __add__(self, other: FockOperator) -> FockOperator:
        return FockOperator(self.fock, self.matrix + other.matrix, self.degree if self.degree == other.degree else None)

    def __sub__(self, other: FockOperator) -> FockOperator:
        return FockOperator(self.fock, self.matrix - other.matrix, self.degree if self.degree == other.degree else None)

    def scale(self, c: complex) -> FockOperator:
        return FockOperator(self.fock, c * self.matrix, self.degree)

    @property
    def adjoint(self) -> FockOperator:
        return FockOperator(self.fock, self.matrix.conj().T, None if self.degree is None else (self.degree[1], self.degree[0]))

    def apply(self, vector: np.ndarray) -> np.ndarray:
        return self.matrix @ vector

    def block(self, target: int, source: int) -> np.ndarray:
        return self.matrix[self.fock.level_slice(target), self.fock.level_slice(source)]

    def restricted_norm(self, levels: Sequence[int]) -> float:
        """Operator norm on the span of the given input levels."""
        columns = np.concatenate([np.arange(self.fock.offsets[n], self.fock.offsets[n + 1]) for n in levels]) if levels else np.zeros(0, dtype=int)
        if columns.size == 0:
            return 0.0
        return float(np.linalg.norm(self.matrix[:, columns], 2))

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2)) if self.matrix.size else 0.0


def _product_degree(left: tuple[int, int] | None, right: tuple[int, int] | None) -> tuple[int, int] | None:
    """Degree of L(S)L(T); degree (0, 0) operators act as module maps and keep the other degree."""
    if left == (0, 0):
        return right
    if right == (0, 0):
        return left
    return None


def identity_operator(fock: TruncatedFock) -> FockOperator:
    return FockOperator(fock, np.eye(fock.dim, dtype=complex), (0, 0))


def composition_window(fock: TruncatedFock, *degrees: tuple[int, int]) -> Window:
    """Input levels ℓ for which every intermediate level of the product stays ≤ N."""
    levels: list[int] = []
    for start in range(fock.N + 1):
        level, ok = start, True
        for n, m in reversed(degrees):
            if level < n:
                break
            level += m - n
            if level > fock.N:
                ok = False
                break
        if ok:
            levels.append(start)
    return Window(tuple(levels))


class ComposeCheck(NamedTuple):
    defect: float
    window: Window
    terms: int


def assembled_term(fock: TruncatedFock, S: np.ndarray, T: np.ndarray, n1: int, m1: int, n2: int, m2: int, k: int) -> np.ndarray:
    """The k-th summand of L(S)L(T), a map level n₂+a → m₁+b with a = n₁−k, b = m₂−k."""
    a, b = n1 - k, m2 - k
    if b > 0 and a > 0:
        sigma: Permutation = cross(Permutation.identity(k), shuffle_sigma(b, a))
        flip_raw: np.ndarray = fock.deformation.f_sigma(sigma)
    else:
        flip_raw = fock.tower.identity(k + a + b)

    chain: np.ndarray = fock.include(n2, a).conj().T
    chain = fock.tensor_identity(T, n2, m2, a) @ chain
    chain = fock.identity_map((k, b, a), (m2, a)).conj().T @ chain
    chain = fock.K(k, a, b) @ flip_raw @ fock.K_plus(k, b, a) @ chain
    chain = fock.identity_map((k, a, b), (n1, b)) @ chain
    chain = fock.tensor_identity(S, n1, m1, b) @ chain
    return fock.include(m1, b) @ chain


def compose_check(fock: TruncatedFock, S: np.ndarray, n1: int, m1: int, T: np.ndarray, n2: int, m2: int) -> ComposeCheck:
    """Defect of the composition rule L(S)L(T) = Σ_k L(assembled_k) on the admissible window."""
    lhs: FockOperator = fock.creation(S, n1, m1) @ fock.creation(T, n2, m2)
    rhs: np.ndarray = np.zeros_like(lhs.matrix)
    terms: int = 0
    for k in range(0, min(n1, m2) + 1):
        a, b = n1 - k, m2 - k
        if n2 + a > fock.N or m1 + b > fock.N:
            continue
        rhs += fock.creation(assembled_term(fock, S, T, n1, m1, n2, m2, k), n2 + a, m1 + b, check=False).matrix
        terms += 1
    window: Window = composition_window(fock, (n1, m1), (n2, m2))
    defect: float = FockOperator(fock, lhs.matrix - rhs, lhs.degree).restricted_norm(window.levels)
    logger.debug(f"composition rule ({n1}->{m1})({n2}->{m2}): defect {defect:.3e} over levels {window.levels}")
    return ComposeCheck(defect=defect, window=window, terms=terms)
