"""Finite-dimensional tracial algebras M = ⊕_b M_{d_b}(ℂ), their bimodules and Connes tensor products.

Elements of M are coefficient vectors over the matrix units e_t = e^b_ij (block-major, row-major).
Bimodules are stored in orthonormal coordinates together with the matrices λ(e_t) and ρ(e_t).
On L²(M) the orthonormal basis is ê_t/√w_b, since ‖ê^b_ij‖² = τ(e^b_ji e^b_ij) = w_b.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg
from loguru import logger

from src.configuration import ConfigValue
from src.errors import InvalidAlgebraError, InvalidBimoduleError


def default_gram_tol() -> float:
    return ConfigValue("options:fock:gram_tol", default=1e-10, after=float).resolve()


class Unit(NamedTuple):
    block: int
    row: int
    col: int


@dataclass(frozen=True)
class TracialAlgebra:
    """M = ⊕_b M_{d_b}(ℂ) with τ(x) = Σ_b w_b·Tr(x_b), normalized so that Σ_b w_b·d_b = 1."""

    dims: tuple[int, ...]
    weights: tuple[float, ...]

    @staticmethod
    def create(blocks: Sequence[tuple[int, float]], tol: float = 1e-9) -> TracialAlgebra:
        if not blocks:
            raise InvalidAlgebraError("an algebra needs at least one block")
        dims = tuple(int(d) for d, _ in blocks)
        weights = tuple(float(w) for _, w in blocks)
        if any(d < 1 for d in dims):
            raise InvalidAlgebraError(f"block dimensions must be positive, got {dims}")
        if any(w <= 0 for w in weights):
            raise InvalidAlgebraError(f"trace weights must be positive, got {weights}")
        total: float = sum(d * w for d, w in zip(dims, weights))
        if abs(total - 1.0) > tol:
            raise InvalidAlgebraError(f"trace is not normalized: sum of weight*dim = {total}")
        return TracialAlgebra(dims=dims, weights=weights)

    @staticmethod
    def scalars() -> TracialAlgebra:
        return TracialAlgebra(dims=(1,), weights=(1.0,))

    @property
    def size(self) -> int:
        return sum(d * d for d in self.dims)

    @functools.cached_property
    def offsets(self) -> tuple[int, ...]:
        offsets: list[int] = [0]
        for d in self.dims:
            offsets.append(offsets[-1] + d * d)
        return tuple(offsets)

    @functools.cached_property
    def units(self) -> tuple[Unit, ...]:
        return tuple(Unit(b, i, j) for b, d in enumerate(self.dims) for i in range(d) for j in range(d))

    @functools.cached_property
    def unit_weights(self) -> np.ndarray:
        """w_b of the block holding each matrix unit."""
        return np.array([self.weights[u.block] for u in self.units])

    @functools.cached_property
    def sqrt_weights(self) -> np.ndarray:
        return np.sqrt(self.unit_weights)

    def index(self, block: int, row: int, col: int) -> int:
        return self.offsets[block] + row * self.dims[block] + col

    def unit(self, block: int, row: int, col: int) -> np.ndarray:
        x: np.ndarray = np.zeros(self.size, dtype=complex)
        x[self.index(block, row, col)] = 1.0
        return x

    def one(self) -> np.ndarray:
        x: np.ndarray = np.zeros(self.size, dtype=complex)
        for b, d in enumerate(self.dims):
            for i in range(d):
                x[self.index(b, i, i)] = 1.0
        return x

    def central_projection(self, block: int) -> np.ndarray:
        x: np.ndarray = np.zeros(self.size, dtype=complex)
        for i in range(self.dims[block]):
            x[self.index(block, i, i)] = 1.0
        return x

    def to_blocks(self, x: np.ndarray) -> list[np.ndarray]:
        return [np.asarray(x[self.offsets[b] : self.offsets[b + 1]]).reshape(d, d) for b, d in enumerate(self.dims)]

    def from_blocks(self, blocks: Sequence[np.ndarray]) -> np.ndarray:
        return np.concatenate([np.asarray(m, dtype=complex).reshape(-1) for m in blocks])

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.from_blocks([a @ b for a, b in zip(self.to_blocks(x), self.to_blocks(y))])

    def adjoint(self, x: np.ndarray) -> np.ndarray:
        return self.from_blocks([a.conj().T for a in self.to_blocks(x)])

    def trace(self, x: np.ndarray) -> complex:
        return complex(sum(w * np.trace(a) for w, a in zip(self.weights, self.to_blocks(x))))

    def is_projection(self, p: np.ndarray, tol: float = 1e-9) -> bool:
        return bool(np.allclose(self.multiply(p, p), p, atol=tol) and np.allclose(self.adjoint(p), p, atol=tol))

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        return rng.standard_normal(self.size) + 1j * rng.standard_normal(self.size)

    def to_gns(self, x: np.ndarray) -> np.ndarray:
        """x ↦ x̂ in orthonormal coordinates of L²(M)."""
        return np.asarray(x, dtype=complex) * self.sqrt_weights

    def from_gns(self, v: np.ndarray) -> np.ndarray:
        """Element recovery: the x with x̂ = v."""
        return np.asarray(v, dtype=complex) / self.sqrt_weights

    def unit_product(self, s: int, t: int) -> int | None:
        """Index of e_s·e_t, None when the product vanishes."""
        a, b = self.units[s], self.units[t]
        if a.block != b.block or a.col != b.row:
            return None
        return self.index(a.block, a.row, b.col)

    def unit_adjoint(self, t: int) -> int:
        u: Unit = self.units[t]
        return self.index(u.block, u.col, u.row)


@dataclass(frozen=True, eq=False)
class Bimodule:
    """M-M-bimodule in orthonormal coordinates: left[t] = λ(e_t), right[t] = ρ(e_t)."""

    algebra: TracialAlgebra
    left: np.ndarray
    right: np.ndarray

    @staticmethod
    def create(algebra: TracialAlgebra, left: np.ndarray, right: np.ndarray, check: bool = True, tol: float = 1e-8) -> Bimodule:
        left, right = np.asarray(left, dtype=complex), np.asarray(right, dtype=complex)
        if left.shape != right.shape or left.ndim != 3 or left.shape[0] != algebra.size or left.shape[1] != left.shape[2]:
            raise InvalidBimoduleError(f"actions have shapes {left.shape} and {right.shape} for an algebra of size {algebra.size}")
        module = Bimodule(algebra=algebra, left=left, right=right)
        if check:
            module.validate(tol)
        return module

    @property
    def dim(self) -> int:
        return self.left.shape[1]

    def lam(self, x: np.ndarray) -> np.ndarray:
        """λ(x)"""
        return np.tensordot(np.asarray(x, dtype=complex), self.left, axes=1)

    def rho(self, x: np.ndarray) -> np.ndarray:
        """ρ(x)"""
        return np.tensordot(np.asarray(x, dtype=complex), self.right, axes=1)

    def validate(self, tol: float = 1e-8) -> None:
        """Unital, *-preserving, (anti-)multiplicative and mutually commuting actions."""
        M: TracialAlgebra = self.algebra
        eye: np.ndarray = np.eye(self.dim)
        if not np.allclose(self.lam(M.one()), eye, atol=tol) or not np.allclose(self.rho(M.one()), eye, atol=tol):
            raise InvalidBimoduleError("actions are not unital")
        for s in range(M.size):
            if not np.allclose(self.left[s].conj().T, self.left[M.unit_adjoint(s)], atol=tol):
                raise InvalidBimoduleError(f"left action is not *-preserving on unit {M.units[s]}")
            if not np.allclose(self.right[s].conj().T, self.right[M.unit_adjoint(s)], atol=tol):
                raise InvalidBimoduleError(f"right action is not *-preserving on unit {M.units[s]}")
            for t in range(M.size):
                st: int | None = M.unit_product(s, t)
                expected: np.ndarray = self.left[st] if st is not None else np.zeros_like(eye)
                if not np.allclose(self.left[s] @ self.left[t], expected, atol=tol):
                    raise InvalidBimoduleError(f"left action is not multiplicative on {M.units[s]}, {M.units[t]}")
                expected = self.right[st] if st is not None else np.zeros_like(eye)
                if not np.allclose(self.right[t] @ self.right[s], expected, atol=tol):
                    raise InvalidBimoduleError(f"right action is not anti-multiplicative on {M.units[s]}, {M.units[t]}")
                if not np.allclose(self.left[s] @ self.right[t], self.right[t] @ self.left[s], atol=tol):
                    raise InvalidBimoduleError(f"left and right actions do not commute on {M.units[s]}, {M.units[t]}")

    def l_operator(self, xi: np.ndarray) -> np.ndarray:
        """l(ξ): L²(M) → H, ŷ ↦ ξy."""
        return np.einsum("tij,j->it", self.right, xi) / self.algebra.sqrt_weights

    def r_operator(self, xi: np.ndarray) -> np.ndarray:
        """r(ξ): L²(M) → H, ŷ ↦ yξ."""
        return np.einsum("tij,j->it", self.left, xi) / self.algebra.sqrt_weights

    def right_inner(self, xi: np.ndarray, eta: np.ndarray) -> np.ndarray:
        """⟨ξ, η⟩_M, the x with λ(x) = l(ξ)*l(η); conjugate linear in ξ."""
        return self.algebra.from_gns(self.l_operator(xi).conj().T @ eta)

    def left_inner(self, xi: np.ndarray, eta: np.ndarray) -> np.ndarray:
        """⟨ξ, η⟩'_M, the x with ρ(x) = r(η)*r(ξ); linear in ξ."""
        return self.algebra.from_gns(self.r_operator(eta).conj().T @ xi)

    def restrict(self, basis: np.ndarray) -> Bimodule:
        """Sub-bimodule on the span of the orthonormal columns of `basis` (assumed invariant)."""
        V: np.ndarray = np.asarray(basis, dtype=complex)
        return Bimodule(
            algebra=self.algebra,
            left=np.einsum("ia,tij,jb->tab", V.conj(), self.left, V),
            right=np.einsum("ia,tij,jb->tab", V.conj(), self.right, V),
        )


def gns(M: TracialAlgebra) -> Bimodule:
    """L²(M, τ) with λ(x)ŷ = (xy)^ and ρ(x)ŷ = (yx)^."""
    n: int = M.size
    left: np.ndarray = np.zeros((n, n, n), dtype=complex)
    right: np.ndarray = np.zeros((n, n, n), dtype=complex)
    for t, u in enumerate(M.units):
        d: int = M.dims[u.block]
        e: np.ndarray = np.zeros((d, d))
        e[u.row, u.col] = 1.0
        lo, hi = M.offsets[u.block], M.offsets[u.block + 1]
        left[t, lo:hi, lo:hi] = np.kron(e, np.eye(d))
        right[t, lo:hi, lo:hi] = np.kron(np.eye(d), e.T)
    return Bimodule(algebra=M, left=left, right=right)


def direct_sum(*modules: Bimodule) -> Bimodule:
    if not modules:
        raise InvalidBimoduleError("direct sum of nothing")
    _check_same_algebra(*modules)
    size: int = modules[0].algebra.size
    return Bimodule(
        algebra=modules[0].algebra,
        left=np.stack([scipy.linalg.block_diag(*(m.left[t] for m in modules)) for t in range(size)]),
        right=np.stack([scipy.linalg.block_diag(*(m.right[t] for m in modules)) for t in range(size)]),
    )


def _check_same_algebra(*modules: Bimodule) -> None:
    first: TracialAlgebra = modules[0].algebra
    for other in modules[1:]:
        if other.algebra != first:
            raise InvalidAlgebraError(f"bimodules live over different algebras: {first} and {other.algebra}")


class ConnesTensor(NamedTuple):
    space: Bimodule
    quotient: np.ndarray
    """Q: product coordinates of H⊗K → orthonormal coordinates of H⊗_M K"""
    lift: np.ndarray
    """Q⁺ with Q·Q⁺ = 1"""


def connes_gram(H: Bimodule, K: Bimodule) -> np.ndarray:
    """⟨ξ⊗η, ζ⊗θ⟩ = ⟨η, ⟨ξ, ζ⟩_M θ⟩ on the product basis."""
    M: TracialAlgebra = H.algebra
    G: np.ndarray = np.zeros((H.dim * K.dim, H.dim * K.dim), dtype=complex)
    for t in range(M.size):
        G += np.kron(H.right[t].conj().T, K.left[t]) / M.unit_weights[t]
    return (G + G.conj().T) / 2


def connes_tensor(H: Bimodule, K: Bimodule, tol: float | None = None) -> ConnesTensor:
    """H ⊗_M K: separation of the algebraic tensor product by the relative Gram matrix.

    Directions with eigenvalue below tol·λ_max are quotiented out.
    """
    _check_same_algebra(H, K)
    tol = default_gram_tol() if tol is None else tol
    G: np.ndarray = connes_gram(H, K)
    M: TracialAlgebra = H.algebra

    if G.size == 0:
        rank, Q, Q_plus = 0, np.zeros((0, 0), dtype=complex), np.zeros((0, 0), dtype=complex)
    else:
        values, vectors = scipy.linalg.eigh(G)
        if values[0] < -tol * max(1.0, values[-1]):
            raise InvalidBimoduleError(f"relative Gram matrix is not positive (min eigenvalue {values[0]:.3e})")
        keep: np.ndarray = values > tol * max(values[-1], 0.0) if values[-1] > 0 else np.zeros(len(values), dtype=bool)
        rank = int(keep.sum())
        root: np.ndarray = np.sqrt(values[keep])
        Q = (vectors[:, keep] * root).conj().T
        Q_plus = vectors[:, keep] / root

    eye_h, eye_k = np.eye(H.dim), np.eye(K.dim)
    left: np.ndarray = np.stack([Q @ np.kron(H.left[t], eye_k) @ Q_plus for t in range(M.size)]).reshape(M.size, rank, rank)
    right: np.ndarray = np.stack([Q @ np.kron(eye_h, K.right[t]) @ Q_plus for t in range(M.size)]).reshape(M.size, rank, rank)
    logger.debug(f"connes tensor {H.dim} x {K.dim} -> {rank}")
    return ConnesTensor(space=Bimodule(algebra=M, left=left, right=right), quotient=Q, lift=Q_plus)


class FrameVector(NamedTuple):
    vector: np.ndarray
    projection: np.ndarray


def module_frame(H: Bimodule, tol: float | None = None) -> list[FrameVector]:
    """Vectors ξ_i with ⟨ξ_i, ξ_j⟩'_M = δ_ij·p_i whose left orbits span H.

    Per block an orthonormal basis of λ(e_11)H, scaled by √w_b, gives vectors with p = e_11.
    Groups of d_b of them are spread over e_11, …, e_dd by λ(e_j1), and the k-th vectors of all
    blocks are merged.
    """
    tol = default_gram_tol() if tol is None else tol
    M: TracialAlgebra = H.algebra
    per_block: list[list[FrameVector]] = []
    for b, d in enumerate(M.dims):
        corner: np.ndarray = H.left[M.index(b, 0, 0)]
        basis: np.ndarray = scipy.linalg.orth(corner, rcond=tol) if H.dim else np.zeros((0, 0))
        vectors: list[np.ndarray] = [np.sqrt(M.weights[b]) * basis[:, k] for k in range(basis.shape[1])]
        chunks: list[FrameVector] = []
        for start in range(0, len(vectors), d):
            group = vectors[start : start + d]
            xi: np.ndarray = sum((H.left[M.index(b, j, 0)] @ v for j, v in enumerate(group)), np.zeros(H.dim, dtype=complex))
            p: np.ndarray = sum((M.unit(b, j, j) for j in range(len(group))), np.zeros(M.size, dtype=complex))
            chunks.append(FrameVector(xi, p))
        per_block.append(chunks)

    frame: list[FrameVector] = []
    for k in range(max((len(c) for c in per_block), default=0)):
        parts = [c[k] for c in per_block if k < len(c)]
        frame.append(FrameVector(sum(p.vector for p in parts), sum(p.projection for p in parts)))
    return frame


def frame_reconstruct(H: Bimodule, frame: Sequence[FrameVector], eta: np.ndarray) -> np.ndarray:
    """Σ_i ⟨η, ξ_i⟩'_M·ξ_i"""
    result: np.ndarray = np.zeros(H.dim, dtype=complex)
    for f in frame:
        result += H.lam(H.left_inner(eta, f.vector)) @ f.vector
    return result


def right_modular_projection(T: np.ndarray, source: Bimodule, target: Bimodule) -> np.ndarray:
    """Σ_b (1/d_b) Σ_ij ρ(e^b_ij)·T·ρ(e^b_ji); fixes exactly the maps commuting with the right action."""
    M: TracialAlgebra = source.algebra
    result: np.ndarray = np.zeros((target.dim, source.dim), dtype=complex)
    for b, d in enumerate(M.dims):
        for i in range(d):
            for j in range(d):
                result += target.right[M.index(b, i, j)] @ T @ source.right[M.index(b, j, i)] / d
    return result


def left_modular_projection(T: np.ndarray, source: Bimodule, target: Bimodule) -> np.ndarray:
    M: TracialAlgebra = source.algebra
    result: np.ndarray = np.zeros((target.dim, source.dim), dtype=complex)
    for b, d in enumerate(M.dims):
        for i in range(d):
            for j in range(d):
                result += target.left[M.index(b, i, j)] @ T @ source.left[M.index(b, j, i)] / d
    return result


def modularity_defect(T: np.ndarray, source: Bimodule, target: Bimodule, side: str = "right") -> float:
    actions = (source.right, target.right) if side == "right" else (source.left, target.left)
    return max((float(np.linalg.norm(b @ T - T @ a)) for a, b in zip(*actions)), default=0.0)
