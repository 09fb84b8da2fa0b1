"""Amalgamated free products M = *_P M_i realised inside a deformed Fock space.

Over P̃ = P ⊕ ⊕_i M_i (trace divided by Z = 1 + #factors) the module H is ⊕_i (α_i ⊕ β_i), where
α_i is L²(M_i) as an M_i–P bimodule and β_i is L²(M_i) as a P–M_i bimodule. J swaps α_i and β_i
by x̂ ↦ (x*)^. F projects onto the sub-bimodule spanned by
  - the P-part of β_i ⊗ α_i ≅ L²(M_i), and
  - all of α_i ⊗ β_i.
The p-corner of level 2n, p the central projection onto P, is then ⊕ over alternating words of
length n of (M_{i₁} ⊖ P) ⊗_P ⋯ ⊗_P (M_{iₙ} ⊖ P), and a reduced word x₁⋯xₙ is the Wick word of
β(x₁)⊗α(1)⊗⋯⊗β(xₙ)⊗α(1) compressed to the corner.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, NamedTuple, Sequence

import numpy as np
import scipy.linalg
from loguru import logger

from src.configuration import ConfigValue
from src.errors import InvalidAlgebraError, NotInClassError, ReducedWordError, SpecificationError
from src.finvn import Bimodule, TracialAlgebra, connes_tensor, gns
from src.fock import Deformation, FockOperator, RawTower, TruncatedFock
from src.model import AmalgamSpecModel, EmbeddingSpec, FactorSpec, RadialFunction
from src.multiplier import MultiplierResult, RadialMultipliers
from src.radial_kernel import ClassNorm, class_norm, even_lift
from src.wick import Involution, Wick


def default_word_length() -> int:
    return ConfigValue("options:amalgam:word_length", default=3, after=int).resolve()


def resolve_multiplicities(P: TracialAlgebra, M: TracialAlgebra, embedding: str | EmbeddingSpec) -> list[list[int]]:
    """mult[b][c]: copies of the P-block c on the diagonal of the M-block b."""
    if isinstance(embedding, EmbeddingSpec):
        mult = [list(row) for row in embedding.multiplicities]
        if len(mult) != len(M.dims) or any(len(row) != len(P.dims) for row in mult):
            raise InvalidAlgebraError(f"multiplicities must be a {len(M.dims)}x{len(P.dims)} matrix")
        return mult
    if len(P.dims) != 1:
        raise InvalidAlgebraError("unital_diagonal embeddings need P to be a single matrix block; give multiplicities")
    p: int = P.dims[0]
    if any(d % p for d in M.dims):
        raise InvalidAlgebraError(f"M_{p}(ℂ) does not embed diagonally into blocks of sizes {M.dims}")
    return [[d // p] for d in M.dims]


def embedding_matrix(P: TracialAlgebra, M: TracialAlgebra, mult: list[list[int]], tol: float = 1e-9) -> np.ndarray:
    """ι: P → M as a matrix on unit coefficients, checked for unitality and trace compatibility."""
    E: np.ndarray = np.zeros((M.size, P.size), dtype=complex)
    for b, d in enumerate(M.dims):
        used: int = sum(mult[b][c] * P.dims[c] for c in range(len(P.dims)))
        if used != d:
            raise InvalidAlgebraError(f"embedding is not unital: block {b} of size {d} receives {used}")
        position: int = 0
        for c, p in enumerate(P.dims):
            for _ in range(mult[b][c]):
                for i in range(p):
                    for j in range(p):
                        E[M.index(b, position + i, position + j), P.index(c, i, j)] = 1.0
                position += p
    for c, weight in enumerate(P.weights):
        induced: float = sum(mult[b][c] * M.weights[b] for b in range(len(M.dims)))
        if abs(induced - weight) > tol:
            raise InvalidAlgebraError(f"embedding does not preserve the trace on P-block {c}: {induced} != {weight}")
    return E


def gns_isometry(P: TracialAlgebra, M: TracialAlgebra, E: np.ndarray) -> np.ndarray:
    """L²(P) → L²(M) induced by the trace preserving embedding."""
    return (M.sqrt_weights[:, None] * E) / P.sqrt_weights[None, :]


def restricted_bimodule(P: TracialAlgebra, M: TracialAlgebra, E: np.ndarray) -> Bimodule:
    """L²(M) as a P–P bimodule."""
    L2: Bimodule = gns(M)
    return Bimodule(
        algebra=P,
        left=np.stack([L2.lam(E[:, t]) for t in range(P.size)]),
        right=np.stack([L2.rho(E[:, t]) for t in range(P.size)]),
    )


@dataclass(eq=False)
class Amalgam:
    """The star-graph data (P̃, H, F, J) of an amalgamated free product."""

    spec: AmalgamSpecModel
    P: TracialAlgebra
    factors: list[TracialAlgebra]
    embeddings: list[np.ndarray]
    algebra: TracialAlgebra
    H: Bimodule
    tower: RawTower
    deformation: Deformation
    involution: Involution
    alpha: list[slice] = field(default_factory=list)
    beta: list[slice] = field(default_factory=list)

    @property
    def normalization(self) -> float:
        """Z = 1 + number of factors."""
        return 1.0 + len(self.factors)

    def unit_offset(self, i: int) -> int:
        """Index of the first matrix unit of M_i inside P̃."""
        return self.P.size + sum(M.size for M in self.factors[:i])

    def isometry(self, i: int) -> np.ndarray:
        return gns_isometry(self.P, self.factors[i], self.embeddings[i])

    def conditional_expectation(self, i: int, x: np.ndarray) -> np.ndarray:
        """E_i: M_i → P"""
        return self.P.from_gns(self.isometry(i).conj().T @ self.factors[i].to_gns(x))

    def mean_zero_basis(self, i: int) -> np.ndarray:
        """Orthonormal basis of L²(M_i) ⊖ L²(P)."""
        return scipy.linalg.null_space(self.isometry(i).conj().T)

    def slot(self, part: slice, vector: np.ndarray) -> np.ndarray:
        result: np.ndarray = np.zeros(self.H.dim, dtype=complex)
        result[part] = vector
        return result

    def letter_map(self, i: int) -> np.ndarray:
        """ŷ ↦ β_i(ŷ) ⊗ α_i(1̂) on raw level 2."""
        M: TracialAlgebra = self.factors[i]
        one: np.ndarray = self.slot(self.alpha[i], M.to_gns(M.one()))
        columns = [np.kron(self.slot(self.beta[i], np.eye(M.size)[:, s]), one) for s in range(M.size)]
        return self.tower.split(1, 1) @ np.stack(columns, axis=1)

    def fock(self, N: int | None = None) -> TruncatedFock:
        return TruncatedFock(self.deformation, 2 * (default_word_length() if N is None else N))

    def corner_projection(self) -> np.ndarray:
        """p: the sum of the central projections of the P blocks of P̃."""
        return sum(self.algebra.central_projection(c) for c in range(len(self.P.dims)))


def _parse_spec(spec: AmalgamSpecModel | dict[str, Any]) -> AmalgamSpecModel:
    if isinstance(spec, AmalgamSpecModel):
        return spec
    try:
        return AmalgamSpecModel.model_validate(spec)
    except ValueError as ex:
        raise SpecificationError(f"invalid amalgam specification: {ex}") from ex


def _assemble_base(spec: AmalgamSpecModel) -> tuple[TracialAlgebra, list[TracialAlgebra], list[np.ndarray], TracialAlgebra]:
    P: TracialAlgebra = spec.p.build()
    factors: list[TracialAlgebra] = []
    embeddings: list[np.ndarray] = []
    for factor in spec.factors:
        M: TracialAlgebra = factor.algebra.build()
        embeddings.append(embedding_matrix(P, M, resolve_multiplicities(P, M, factor.embedding)))
        factors.append(M)
    Z: float = 1.0 + len(factors)
    blocks = [(d, w / Z) for d, w in zip(P.dims, P.weights)]
    for M in factors:
        blocks.extend((d, w / Z) for d, w in zip(M.dims, M.weights))
    return P, factors, embeddings, TracialAlgebra.create(blocks)


def _star_module(P: TracialAlgebra, factors: list[TracialAlgebra], embeddings: list[np.ndarray], algebra: TracialAlgebra):
    dim: int = 2 * sum(M.size for M in factors)
    left: np.ndarray = np.zeros((algebra.size, dim, dim), dtype=complex)
    right: np.ndarray = np.zeros((algebra.size, dim, dim), dtype=complex)
    alpha, beta = [], []
    position, offset = 0, P.size
    for M, E in zip(factors, embeddings):
        L2: Bimodule = gns(M)
        a, b = slice(position, position + M.size), slice(position + M.size, position + 2 * M.size)
        for t in range(P.size):
            right[t, a, a] = L2.rho(E[:, t])
            left[t, b, b] = L2.lam(E[:, t])
        for s in range(M.size):
            left[offset + s, a, a] = L2.left[s]
            right[offset + s, b, b] = L2.right[s]
        alpha.append(a)
        beta.append(b)
        position += 2 * M.size
        offset += M.size
    return Bimodule.create(algebra, left, right), alpha, beta


def _projector(columns: list[np.ndarray], size: int, tol: float) -> np.ndarray:
    if not columns:
        return np.zeros((size, size), dtype=complex)
    V: np.ndarray = scipy.linalg.orth(np.stack(columns, axis=1), rcond=tol)
    return V @ V.conj().T


def build_amalgam(spec: AmalgamSpecModel | dict[str, Any], gram_tol: float | None = None) -> Amalgam:
    spec = _parse_spec(spec)
    P, factors, embeddings, algebra = _assemble_base(spec)
    H, alpha, beta = _star_module(P, factors, embeddings, algebra)
    tower = RawTower(H, gram_tol)
    Q: np.ndarray = tower.split(1, 1)

    def slot(part: slice, vector: np.ndarray) -> np.ndarray:
        result = np.zeros(H.dim, dtype=complex)
        result[part] = vector
        return result

    columns: list[np.ndarray] = []
    A: np.ndarray = np.zeros((H.dim, H.dim), dtype=complex)
    for i, (M, E) in enumerate(zip(factors, embeddings)):
        one: np.ndarray = slot(alpha[i], M.to_gns(M.one()))
        for t in range(P.size):
            columns.append(Q @ np.kron(slot(beta[i], M.to_gns(E[:, t])), one))
        basis: np.ndarray = np.eye(M.size)
        for s in range(M.size):
            for u in range(M.size):
                columns.append(Q @ np.kron(slot(alpha[i], basis[:, s]), slot(beta[i], basis[:, u])))
            A[beta[i].start + M.unit_adjoint(s), alpha[i].start + s] = 1.0
            A[alpha[i].start + M.unit_adjoint(s), beta[i].start + s] = 1.0

    F: np.ndarray = _projector(columns, tower.dim(2), tower.gram_tol)
    deformation = Deformation(tower, F)
    involution = Involution(tower, A)
    logger.info(f"amalgam over P of size {P.size} with {len(factors)} factors: dim H = {H.dim}, rank F = {round(np.trace(F).real)}")
    return Amalgam(spec, P, factors, embeddings, algebra, H, tower, deformation, involution, alpha, beta)


class BipartiteAmalgam(NamedTuple):
    algebra: TracialAlgebra
    H: Bimodule
    tower: RawTower
    deformation: Deformation
    involution: Involution


def _swap_stars(first: TracialAlgebra, second: TracialAlgebra) -> np.ndarray:
    """Product coordinates (s, t) of L²(first) ⊗ L²(second) ↦ (t*, s*) of L²(second) ⊗ L²(first)."""
    S: np.ndarray = np.zeros((first.size * second.size, first.size * second.size))
    for s in range(first.size):
        for t in range(second.size):
            S[second.unit_adjoint(t) * first.size + first.unit_adjoint(s), s * second.size + t] = 1.0
    return S


def build_bipartite_amalgam(spec: AmalgamSpecModel | dict[str, Any], gram_tol: float | None = None) -> BipartiteAmalgam:
    """The two-factor variant over M = M₁ ⊕ M₂ with H = L²(M₁)⊗_P L²(M₂) ⊕ L²(M₂)⊗_P L²(M₁)."""
    spec = _parse_spec(spec)
    if len(spec.factors) != 2:
        raise SpecificationError(f"the bipartite construction needs exactly two factors, got {len(spec.factors)}")
    P, factors, embeddings, algebra = _assemble_base(spec)
    star, alpha, beta = _star_module(P, factors, embeddings, algebra)
    M1, M2 = factors

    def part(s: slice) -> Bimodule:
        return star.restrict(np.eye(star.dim)[:, s])

    h12 = connes_tensor(part(alpha[0]), part(beta[1]), gram_tol)
    h21 = connes_tensor(part(alpha[1]), part(beta[0]), gram_tol)

    M: TracialAlgebra = TracialAlgebra.create([(d, w / 2) for d, w in zip(M1.dims, M1.weights)] + [(d, w / 2) for d, w in zip(M2.dims, M2.weights)])
    units = range(P.size, P.size + M.size)
    left = np.stack([scipy.linalg.block_diag(h12.space.left[t], h21.space.left[t]) for t in units])
    right = np.stack([scipy.linalg.block_diag(h12.space.right[t], h21.space.right[t]) for t in units])
    H: Bimodule = Bimodule.create(M, left, right)
    tower = RawTower(H, gram_tol)
    Q: np.ndarray = tower.split(1, 1)
    d12, d21 = h12.space.dim, h21.space.dim

    def first(v: np.ndarray) -> np.ndarray:
        return np.concatenate([v, np.zeros(d21, dtype=complex)])

    def second(v: np.ndarray) -> np.ndarray:
        return np.concatenate([np.zeros(d12, dtype=complex), v])

    one1, one2 = M1.to_gns(M1.one()), M2.to_gns(M2.one())
    columns: list[np.ndarray] = []
    for s, t in itertools.product(range(M1.size), repeat=2):
        x, y = np.eye(M1.size)[:, s], np.eye(M1.size)[:, t]
        v12 = h12.quotient @ np.kron(x, one2)
        v21 = h21.quotient @ np.kron(one2, y)
        columns.append(Q @ np.kron(first(v12), second(v21)))
    for s, t in itertools.product(range(M2.size), repeat=2):
        x, y = np.eye(M2.size)[:, s], np.eye(M2.size)[:, t]
        v21 = h21.quotient @ np.kron(x, one1)
        v12 = h12.quotient @ np.kron(one1, y)
        columns.append(Q @ np.kron(second(v21), first(v12)))
    F: np.ndarray = _projector(columns, tower.dim(2), tower.gram_tol)

    A: np.ndarray = np.zeros((H.dim, H.dim), dtype=complex)
    A[d12:, :d12] = h21.quotient @ _swap_stars(M1, M2) @ h12.lift.conj()
    A[:d12, d12:] = h12.quotient @ _swap_stars(M2, M1) @ h21.lift.conj()

    logger.info(f"bipartite amalgam: dim H = {d12} + {d21}, rank F = {round(np.trace(F).real)}")
    return BipartiteAmalgam(M, H, tower, Deformation(tower, F), Involution(tower, A))


Word = tuple[int, ...]


def alternating_words(factors: int, length: int) -> list[Word]:
    return [w for w in itertools.product(range(factors), repeat=length) if all(a != b for a, b in zip(w, w[1:]))]


@dataclass(eq=False)
class CornerIso:
    """U: ⊕_{|w| ≤ N} (M_{w₁}⊖P) ⊗_P ⋯ ⊗_P (M_{wₙ}⊖P) → p·(even levels ≤ 2N)·p."""

    U: np.ndarray
    words: list[Word]
    slices: dict[Word, slice]
    lifts: dict[Word, np.ndarray]
    quotients: dict[Word, np.ndarray]
    isometry_defect: float
    projection_defect: float

    @property
    def dim(self) -> int:
        return self.U.shape[1]

    def compress(self, A: FockOperator | np.ndarray) -> np.ndarray:
        matrix: np.ndarray = A.matrix if isinstance(A, FockOperator) else A
        return self.U.conj().T @ matrix @ self.U

    def columns(self, max_length: int) -> np.ndarray:
        """Reference coordinates of the words of length ≤ max_length."""
        return np.concatenate([np.arange(self.slices[w].start, self.slices[w].stop) for w in self.words if len(w) <= max_length])


def _word_tensors(amalgam: Amalgam, word: Word) -> tuple[np.ndarray, np.ndarray]:
    """Quotient and lift of the iterated P-tensor product over the mean-zero parts of the letters."""
    pieces: list[Bimodule] = [
        restricted_bimodule(amalgam.P, amalgam.factors[i], amalgam.embeddings[i]).restrict(amalgam.mean_zero_basis(i)) for i in word
    ]
    current: Bimodule = pieces[0]
    Q: np.ndarray = np.eye(current.dim, dtype=complex)
    lift: np.ndarray = np.eye(current.dim, dtype=complex)
    for piece in pieces[1:]:
        product = connes_tensor(current, piece, amalgam.tower.gram_tol)
        Q = product.quotient @ np.kron(Q, np.eye(piece.dim))
        lift = np.kron(lift, np.eye(piece.dim)) @ product.lift
        current = product.space
    return Q, lift


def word_embedding(amalgam: Amalgam, fock: TruncatedFock, word: Word) -> np.ndarray:
    """Product coordinates of the letters' mean-zero parts → deformed level 2n, scaled by Z^{−(2n−1)/2}."""
    n: int = len(word)
    raw: np.ndarray | None = None
    level: int = 0
    for i in reversed(word):
        letter: np.ndarray = amalgam.letter_map(i) @ amalgam.mean_zero_basis(i)
        raw = letter if raw is None else amalgam.tower.split(2, level) @ np.kron(letter, raw)
        level += 2
    return amalgam.normalization ** (-(2 * n - 1) / 2) * fock.K(2 * n) @ raw


def corner_iso(amalgam: Amalgam, fock: TruncatedFock, N: int | None = None) -> CornerIso:
    N = fock.N // 2 if N is None else N
    if 2 * N > fock.N:
        raise ValueError(f"words of length {N} need Fock truncation {2 * N}, got {fock.N}")

    words: list[Word] = [()]
    for n in range(1, N + 1):
        words.extend(w for w in alternating_words(len(amalgam.factors), n) if all(amalgam.mean_zero_basis(i).shape[1] for i in w))

    blocks: list[np.ndarray] = []
    slices: dict[Word, slice] = {}
    lifts: dict[Word, np.ndarray] = {}
    quotients: dict[Word, np.ndarray] = {}
    position: int = 0
    for word in words:
        if not word:
            column = np.zeros((fock.dim, amalgam.P.size), dtype=complex)
            column[fock.level_slice(0).start : fock.level_slice(0).start + amalgam.P.size, :] = np.eye(amalgam.P.size)
            Q = lift = np.eye(amalgam.P.size, dtype=complex)
        else:
            Q, lift = _word_tensors(amalgam, word)
            column = np.zeros((fock.dim, Q.shape[0]), dtype=complex)
            column[fock.level_slice(2 * len(word)), :] = word_embedding(amalgam, fock, word) @ lift
        blocks.append(column)
        slices[word] = slice(position, position + column.shape[1])
        lifts[word], quotients[word] = lift, Q
        position += column.shape[1]

    U: np.ndarray = np.concatenate(blocks, axis=1)
    p: np.ndarray = amalgam.corner_projection()
    corner: np.ndarray = fock.left_action(p).matrix @ fock.right_action(p).matrix
    even: np.ndarray = np.zeros(fock.dim)
    for n in range(0, 2 * N + 1, 2):
        even[fock.level_slice(n)] = 1.0
    corner = corner * even[:, None] * even[None, :]

    iso = CornerIso(
        U=U,
        words=words,
        slices=slices,
        lifts=lifts,
        quotients=quotients,
        isometry_defect=float(np.linalg.norm(U.conj().T @ U - np.eye(U.shape[1]))),
        projection_defect=float(np.linalg.norm(U @ U.conj().T - corner)),
    )
    logger.debug(f"corner of dimension {iso.dim}: isometry defect {iso.isometry_defect:.2e}, projection defect {iso.projection_defect:.2e}")
    return iso


class Letter(NamedTuple):
    factor: int
    element: np.ndarray


def validate_word(amalgam: Amalgam, letters: Sequence[Letter], tol: float = 1e-9) -> None:
    for k, letter in enumerate(letters):
        if not 0 <= letter.factor < len(amalgam.factors):
            raise ReducedWordError(f"letter {k} refers to factor {letter.factor}, there are {len(amalgam.factors)}")
        if k and letters[k - 1].factor == letter.factor:
            raise ReducedWordError(f"letters {k - 1} and {k} both come from factor {letter.factor}")
        if np.linalg.norm(amalgam.conditional_expectation(letter.factor, letter.element)) > tol:
            raise ReducedWordError(f"letter {k} is not mean-zero under E_{letter.factor}")


def word_vector(amalgam: Amalgam, fock: TruncatedFock, letters: Sequence[Letter]) -> np.ndarray:
    """The deformed level 2n vector of x₁⋯xₙ."""
    if not letters:
        return amalgam.algebra.to_gns(amalgam.corner_projection())
    raw: np.ndarray | None = None
    level: int = 0
    for letter in reversed(letters):
        M: TracialAlgebra = amalgam.factors[letter.factor]
        vector: np.ndarray = amalgam.letter_map(letter.factor) @ M.to_gns(letter.element)
        raw = vector if raw is None else amalgam.tower.split(2, level) @ np.kron(vector, raw)
        level += 2
    n: int = len(letters)
    return amalgam.normalization ** (-n) * fock.K(2 * n) @ raw


def word_operator(amalgam: Amalgam, fock: TruncatedFock, letters: Sequence[Letter], wick: Wick | None = None) -> FockOperator:
    """W(x̂₁⊗⋯⊗x̂ₙ) for a reduced word; its corner compression acts as x₁⋯xₙ."""
    validate_word(amalgam, letters)
    wick = wick or Wick(fock, amalgam.involution)
    return wick.wick_word(word_vector(amalgam, fock, letters), 2 * len(letters)).operator


def free_left_action(amalgam: Amalgam, iso: CornerIso, factor: int, y: np.ndarray, N: int) -> np.ndarray:
    """Left multiplication by y ∈ M_i on the reduced words of length ≤ N, in the coordinates of `iso` (P = ℂ)."""
    if amalgam.P.size != 1:
        raise SpecificationError("the reference free action is implemented for P = ℂ only")
    M: TracialAlgebra = amalgam.factors[factor]
    V: np.ndarray = amalgam.isometry(factor)
    B: np.ndarray = amalgam.mean_zero_basis(factor)
    Y: np.ndarray = gns(M).lam(y)
    y_hat: np.ndarray = M.to_gns(y)
    expectation: complex = complex((V.conj().T @ y_hat)[0])

    words: list[Word] = [w for w in iso.words if len(w) <= N]
    X: np.ndarray = np.zeros((iso.dim, iso.dim), dtype=complex)

    def size(word: Word) -> int:
        return int(np.prod([amalgam.mean_zero_basis(i).shape[1] for i in word])) if word else 1

    def put(target: Word, source: Word, block: np.ndarray) -> None:
        if len(target) > N or target not in iso.slices:
            return
        converted: np.ndarray = iso.quotients[target] @ block @ iso.lifts[source]
        X[iso.slices[target], iso.slices[source]] += converted

    for word in words:
        rest: np.ndarray = np.eye(size(word[1:]) if word else 1)
        if not word or word[0] != factor:
            put(word, word, expectation * np.eye(size(word)))
            put((factor,) + word, word, np.kron((B.conj().T @ y_hat)[:, None], np.eye(size(word))))
        else:
            put(word, word, np.kron(B.conj().T @ Y @ B, rest))
            put(word[1:], word, np.kron(V.conj().T @ Y @ B, rest))
    return X


def psi_multiplier(
    amalgam: Amalgam,
    multipliers: RadialMultipliers,
    psi: RadialFunction,
    letters: Sequence[Letter],
    N_dec: int | None = None,
    tol: float | None = None,
    wick: Wick | None = None,
) -> tuple[FockOperator, float]:
    """Φ_ψ̃ applied to the word operator; on a word of length n it multiplies by ψ(n). Bound ‖ψ‖_𝒞′."""
    norm: ClassNorm = class_norm(psi, "Cprime", N_dec, tol)
    if not norm.converged:
        raise NotInClassError(f"{psi.kind} is not certified in class C′ at N={norm.truncation}")
    W: FockOperator = word_operator(amalgam, multipliers.fock, letters, wick)
    result: MultiplierResult = multipliers.phi_psi(W, even_lift(psi), 2 * norm.truncation, norm.tol)
    return result.operator, norm.norm


def factor_spec(blocks: list[tuple[int, float]], embedding: str | list[list[int]] = "unital_diagonal") -> FactorSpec:
    """Shorthand for building specifications in code."""
    return FactorSpec.model_validate(
        {
            "algebra": {"blocks": [{"dim": d, "weight": w} for d, w in blocks]},
            "embedding": embedding if isinstance(embedding, str) else {"multiplicities": embedding},
        }
    )
