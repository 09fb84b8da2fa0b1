"""Radial functions ℕ → ℂ, their Hankel matrices and the trace-norm classes 𝒞 and 𝒞′.

φ is in class 𝒞 when H_φ = (φ(n+m) − φ(n+m+2)) is trace class; then
φ(n) = φ₀(n) + c₊ + (−1)ⁿc₋ and ‖φ‖_𝒞 = ‖H_φ‖₁ + |c₊| + |c₋|.
φ is in class 𝒞′ when K_φ = (φ(n+m) − φ(n+m+1)) and K̃_φ = (φ(n+m+1) − φ(n+m+2)) are trace
class and c = lim φ(n) exists; ‖φ‖_𝒞′ = ‖K_φ‖₁ + ‖K̃_φ‖₁ + |c|.

Everything is computed on N×N truncations and certified by comparing N/2 with N.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal, NamedTuple

import numpy as np
import scipy.linalg
from loguru import logger

from src.configuration import ConfigValue
from src.model import RadialFunction
from src.utility import Registry

HankelKind = Literal["H", "K", "Ktilde"]
NormClass = Literal["C", "Cprime"]


class RadialKindRegistry(Registry):
    items: dict[str, Callable[[RadialFunction, int], complex]] = {}
    kind: str = "radial function kind"


RadialKinds: RadialKindRegistry = RadialKindRegistry()


def default_truncation() -> int:
    return ConfigValue("options:radial:truncation", default=200, after=int).resolve()


def default_tol() -> float:
    return ConfigValue("options:radial:tol", default=1e-9, after=float).resolve()


@RadialKinds.register(key="table")
def _eval_table(phi: RadialFunction, n: int) -> complex:
    values: list[complex] = phi.table
    if n < len(values):
        return values[n]
    if phi.tail == "constant":
        return values[-1]
    if phi.tail == "alternating_constant":
        return values[len(values) - 2 + (n - len(values)) % 2]
    return 0j


@RadialKinds.register(key="geometric")
def _eval_geometric(phi: RadialFunction, n: int) -> complex:
    return phi.ratio**n


@RadialKinds.register(key="constant")
def _eval_constant(phi: RadialFunction, n: int) -> complex:  # pylint: disable=unused-argument
    return phi.scalar


@RadialKinds.register(key="alternating")
def _eval_alternating(phi: RadialFunction, n: int) -> complex:
    return phi.scalar * (-1) ** n


@RadialKinds.register(key="even_lift")
def _eval_even_lift(phi: RadialFunction, n: int) -> complex:
    return eval_radial(phi.of, n // 2) if n % 2 == 0 else 0j


@RadialKinds.register(key="sum")
def _eval_sum(phi: RadialFunction, n: int) -> complex:
    return sum((eval_radial(term, n) for term in phi.terms), 0j)


def eval_radial(phi: RadialFunction, n: int) -> complex:
    if n < 0:
        raise ValueError(f"radial functions live on ℕ, got n={n}")
    return complex(RadialKinds.get(phi.kind)(phi, n))


def samples(phi: RadialFunction, count: int) -> np.ndarray:
    """φ(0), …, φ(count − 1)"""
    return np.array([eval_radial(phi, n) for n in range(count)], dtype=complex)


def geometric(r: complex) -> RadialFunction:
    return RadialFunction(kind="geometric", r=r)


def constant(value: complex = 1.0) -> RadialFunction:
    return RadialFunction(kind="constant", value=value)


def alternating(value: complex = 1.0) -> RadialFunction:
    return RadialFunction(kind="alternating", value=value)


def table(values: list[complex], tail: str = "zero") -> RadialFunction:
    return RadialFunction(kind="table", values=list(values), tail=tail)


def delta(n: int = 0) -> RadialFunction:
    """Point mass at n."""
    return table([0.0] * n + [1.0])


def radial_sum(*terms: RadialFunction) -> RadialFunction:
    return RadialFunction(kind="sum", terms=list(terms))


def even_lift(psi: RadialFunction) -> RadialFunction:
    """ψ̃(2n) = ψ(n), ψ̃(2n+1) = 0."""
    return RadialFunction(kind="even_lift", of=psi)


def hankel(phi: RadialFunction, kind: HankelKind, N: int) -> np.ndarray:
    if N < 1:
        raise ValueError(f"truncation must be positive, got {N}")
    values: np.ndarray = samples(phi, 2 * N + 1)
    index: np.ndarray = np.add.outer(np.arange(N), np.arange(N))
    match kind:
        case "H":
            return values[index] - values[index + 2]
        case "K":
            return values[index] - values[index + 1]
        case "Ktilde":
            return values[index + 1] - values[index + 2]
    raise ValueError(f"unknown Hankel kind '{kind}'")


class TraceNorm(NamedTuple):
    norm: float
    singulars: np.ndarray


def trace_norm(A: np.ndarray) -> TraceNorm:
    """Sum of singular values; singulars returned in descending order."""
    A = np.atleast_2d(np.asarray(A))
    if A.size == 0:
        return TraceNorm(0.0, np.zeros(0))
    singulars: np.ndarray = scipy.linalg.svdvals(A)
    return TraceNorm(float(singulars.sum()), singulars)


@dataclass(frozen=True)
class Asymptotics:
    c_plus: complex
    c_minus: complex
    c_limit: complex | None
    converged: bool


def asymptotics(phi: RadialFunction, N: int | None = None, tol: float | None = None) -> Asymptotics:
    """c± from the paired averages (φ(2n) ± φ(2n+1))/2 at n = N and n = N/2."""
    N = default_truncation() if N is None else N
    tol = default_tol() if tol is None else tol
    if N < 4:
        raise ValueError(f"asymptotics needs N >= 4, got {N}")

    def paired(n: int) -> tuple[complex, complex]:
        even, odd = eval_radial(phi, 2 * n), eval_radial(phi, 2 * n + 1)
        return (even + odd) / 2, (even - odd) / 2

    c_plus, c_minus = paired(N)
    half_plus, half_minus = paired(N // 2)
    scale: float = max(1.0, abs(c_plus), abs(c_minus))
    converged: bool = abs(c_plus - half_plus) < tol * scale and abs(c_minus - half_minus) < tol * scale
    c_limit: complex | None = c_plus if abs(c_minus) < tol else None
    return Asymptotics(c_plus=c_plus, c_minus=c_minus, c_limit=c_limit, converged=converged)


@dataclass(frozen=True)
class HankelReport:
    kind: HankelKind
    truncation: int
    trace_norm: float
    singulars: tuple[float, ...]
    converged: bool
    c_plus: complex
    c_minus: complex
    c_limit: complex | None

    def to_dict(self, top: int = 5) -> dict:
        return {
            "kind": self.kind,
            "truncation": self.truncation,
            "trace_norm": self.trace_norm,
            "singulars": list(self.singulars[:top]),
            "converged": self.converged,
        }


@dataclass(frozen=True)
class ClassNorm:
    cls: NormClass
    norm: float
    converged: bool
    truncation: int
    tol: float
    asymptotics: Asymptotics
    reports: list[HankelReport] = field(default_factory=list)


def _hankel_report(phi: RadialFunction, kind: HankelKind, N: int, tol: float, asym: Asymptotics) -> HankelReport:
    full: TraceNorm = trace_norm(hankel(phi, kind, N))
    half: TraceNorm = trace_norm(hankel(phi, kind, N // 2))
    stable: bool = abs(full.norm - half.norm) <= tol * max(1.0, full.norm)
    return HankelReport(
        kind=kind,
        truncation=N,
        trace_norm=full.norm,
        singulars=tuple(float(s) for s in full.singulars),
        converged=stable and asym.converged,
        c_plus=asym.c_plus,
        c_minus=asym.c_minus,
        c_limit=asym.c_limit,
    )


def class_norm(phi: RadialFunction, cls: NormClass = "C", N: int | None = None, tol: float | None = None) -> ClassNorm:
    """‖φ‖_𝒞 or ‖φ‖_𝒞′ at truncation N.

    Convergence is a numerical heuristic: trace norms and c± must agree between the N/2 and
    N truncations. A non-converged value is still returned as a lower estimate.
    """
    N = default_truncation() if N is None else N
    tol = default_tol() if tol is None else tol
    if N < 4:
        raise ValueError(f"class_norm needs N >= 4, got {N}")

    asym: Asymptotics = asymptotics(phi, N, tol)
    if cls == "C":
        reports = [_hankel_report(phi, "H", N, tol, asym)]
        norm: float = reports[0].trace_norm + abs(asym.c_plus) + abs(asym.c_minus)
        converged: bool = reports[0].converged
    elif cls == "Cprime":
        reports = [_hankel_report(phi, "K", N, tol, asym), _hankel_report(phi, "Ktilde", N, tol, asym)]
        limit: complex = asym.c_limit if asym.c_limit is not None else asym.c_plus
        norm = sum(r.trace_norm for r in reports) + abs(limit)
        converged = all(r.converged for r in reports) and asym.c_limit is not None
    else:
        raise ValueError(f"unknown class '{cls}'")

    if not converged:
        logger.warning(f"class norm {cls} of {phi.kind} did not converge at N={N} (estimate {norm:.6g})")
    logger.debug(f"class norm {cls} of {phi.kind}: {norm:.12g} (N={N})")
    return ClassNorm(cls=cls, norm=float(norm), converged=converged, truncation=N, tol=tol, asymptotics=asym, reports=reports)


def class_membership(phi: RadialFunction, N: int | None = None, tol: float | None = None) -> dict[NormClass, ClassNorm]:
    return {cls: class_norm(phi, cls, N, tol) for cls in ("C", "Cprime")}


@dataclass(frozen=True)
class RankOneDecomposition:
    """H_φ ≈ Σ_k x_k y_k* at truncation `truncation`."""

    pairs: tuple[tuple[np.ndarray, np.ndarray], ...]
    truncation: int

    @property
    def nuclear_sum(self) -> float:
        return float(sum(np.linalg.norm(x) * np.linalg.norm(y) for x, y in self.pairs))

    def matrix(self) -> np.ndarray:
        result: np.ndarray = np.zeros((self.truncation, self.truncation), dtype=complex)
        for x, y in self.pairs:
            result += np.outer(x, y.conj())
        return result

    def table(self) -> list[dict]:
        """One record per pair, for export."""
        return [
            {"k": k, "norm_x": float(np.linalg.norm(x)), "norm_y": float(np.linalg.norm(y)), "x": x.tolist(), "y": y.tolist()}
            for k, (x, y) in enumerate(self.pairs)
        ]


def rank_one_decompose(phi: RadialFunction, N: int | None = None, tol: float | None = None) -> RankOneDecomposition:
    N = default_truncation() if N is None else N
    tol = default_tol() if tol is None else tol
    U, s, Vh = scipy.linalg.svd(hankel(phi, "H", N))
    pairs = tuple((np.sqrt(s[k]) * U[:, k], np.sqrt(s[k]) * Vh[k, :].conj()) for k in range(len(s)) if s[k] >= tol)
    logger.debug(f"rank one decomposition of {phi.kind}: {len(pairs)} pairs at N={N}")
    return RankOneDecomposition(pairs=pairs, truncation=N)


def reconstruct_psi(dec: RankOneDecomposition, c_plus: complex, c_minus: complex, k: int, l: int) -> complex:
    """c₊ + (−1)^{k+l}c₋ + Σ_n Σ_m x_n(k+m)·conj(y_n(l+m))"""
    if max(k, l) >= dec.truncation:
        raise ValueError(f"({k}, {l}) outside the decomposition range {dec.truncation}")
    span: int = dec.truncation - max(k, l)
    value: complex = c_plus + (-1) ** (k + l) * c_minus
    for x, y in dec.pairs:
        value += complex(np.vdot(y[l : l + span], x[k : k + span]))
    return value
