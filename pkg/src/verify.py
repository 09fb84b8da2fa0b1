"""Invariant suites run by `verify`.

Each suite returns CheckResult records; a check passes when its defect is at most its threshold.
Thresholds are absolute unless stated otherwise in the check's detail.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
from loguru import logger

from src.amalgam import Amalgam, Letter, alternating_words, build_amalgam, build_bipartite_amalgam, corner_iso, free_left_action, psi_multiplier, word_operator
from src.configuration import ConfigValue
from src.corpus import STANDARD_CORPUS, DeformationBundle, build_deformation
from src.coxeter import coset_decompose, enumerate_V, lemma_decompose, length, symmetric_group
from src.errors import DeformationError
from src.finvn import Bimodule, TracialAlgebra, connes_tensor, frame_reconstruct, gns, modularity_defect, module_frame, right_modular_projection
from src.fock import FockOperator, TruncatedFock, compose_check
from src.model import DIHEDRAL, AmalgamSpecModel, RadialFunction
from src.multiplier import RadialMultipliers, cb_lower_bound
from src.radial_kernel import alternating, class_norm, constant, delta, eval_radial, even_lift, geometric, radial_sum, table
from src.utility import Registry
from src.wick import Wick, check_compat


@dataclass
class CheckResult:
    name: str
    defect: float
    threshold: float
    window: list[int] | None = None
    detail: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.defect)) and self.defect <= self.threshold

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "defect": float(self.defect),
            "threshold": float(self.threshold),
            "passed": self.passed,
            "window": self.window,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class SuiteOptions:
    seed: int = 42
    samples: int = 20
    truncation: int = 4
    trials: int = 200
    amplification: int = 3

    @staticmethod
    def from_config(**overrides: Any) -> SuiteOptions:
        values: dict[str, Any] = {
            "seed": ConfigValue("options:verify:seed", default=42, after=int).resolve(),
            "samples": ConfigValue("options:verify:samples", default=20, after=int).resolve(),
            "truncation": ConfigValue("options:fock:truncation", default=4, after=int).resolve(),
            "trials": ConfigValue("options:multiplier:trials", default=200, after=int).resolve(),
            "amplification": ConfigValue("options:multiplier:amplification", default=3, after=int).resolve(),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return SuiteOptions(**values)


@dataclass
class SuiteReport:
    suite: str
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict[str, Any]:
        return {"suite": self.suite, "passed": self.passed, "checks": [c.to_dict() for c in sorted(self.checks, key=lambda c: c.name)]}


class SuiteRegistry(Registry):
    items: dict[str, Callable[[SuiteOptions], list[CheckResult]]] = {}
    kind: str = "verification suite"


Suites: SuiteRegistry = SuiteRegistry()

PSI_CORPUS: dict[str, RadialFunction] = {
    "geometric_0.2": geometric(0.2),
    "geometric_0.5": geometric(0.5),
    "geometric_0.8": geometric(0.8),
    "geometric_-0.5": geometric(-0.5),
    "constant_1": constant(1.0),
    "delta_0": delta(0),
    "delta_3": delta(3),
    "table_halving": table([1.0, 0.5, 0.25]),
    "geometric_plus_constant": radial_sum(geometric(0.5), constant(0.5)),
    "table_periodic": table([0.0, 1.0, 0.0, 1.0]),
}
"""Functions of class 𝒞′ with closed-form tails."""

MULTIPLIER_CORPUS: dict[str, RadialFunction] = {
    "geometric_0.5": geometric(0.5),
    "geometric_-0.5": geometric(-0.5),
    "constant_1": constant(1.0),
    "alternating_1": alternating(1.0),
    "delta_2": delta(2),
    "table_halving": table([1.0, 0.5, 0.25, 0.125]),
}
"""Functions of class 𝒞, one with a non-vanishing alternating tail."""


def _random_matrix(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_modular_map(fock: TruncatedFock, n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """A random right-modular map H⁽ⁿ⁾_F → H⁽ᵐ⁾_F."""
    source, target = fock.deformed_level(n), fock.deformed_level(m)
    return right_modular_projection(_random_matrix(rng, target.dim, source.dim), source, target)


def run_suite(name: str, options: SuiteOptions | None = None) -> list[SuiteReport]:
    """Runs one suite, or every registered suite in name order for `all`."""
    options = options or SuiteOptions.from_config()
    names: list[str] = Suites.keys() if name == "all" else [name]
    reports: list[SuiteReport] = []
    for key in names:
        logger.info(f"running suite '{key}'")
        checks: list[CheckResult] = Suites.get(key)(options)
        report = SuiteReport(key, checks)
        for check in checks:
            if not check.passed:
                logger.error(f"{key}: {check.name} failed (defect {check.defect:.3e} > {check.threshold:.1e})")
        logger.info(f"suite '{key}': {sum(c.passed for c in checks)}/{len(checks)} checks passed")
        reports.append(report)
    return reports


@Suites.register(key="radial")
def radial_suite(options: SuiteOptions) -> list[CheckResult]:  # pylint: disable=unused-argument
    checks: list[CheckResult] = []
    for r in [k / 10 for k in range(1, 10)]:
        for cls in ("C", "Cprime"):
            result = class_norm(geometric(r), cls, 200)
            checks.append(CheckResult(f"geometric_{r:.1f}_{cls}_norm", abs(result.norm - 1.0), 1e-8, detail={"norm": result.norm}))

    for name, psi in PSI_CORPUS.items():
        lifted = class_norm(even_lift(psi), "C")
        prime = class_norm(psi, "Cprime")
        checks.append(
            CheckResult(
                f"even_lift_{name}",
                abs(lifted.norm - prime.norm),
                1e-7,
                detail={"lifted": lifted.norm, "prime": prime.norm, "converged": lifted.converged and prime.converged},
            )
        )
        plain = class_norm(psi, "C")
        checks.append(CheckResult(f"c_below_cprime_{name}", max(0.0, plain.norm - prime.norm), 1e-9))
    return checks


@Suites.register(key="coxeter")
def coxeter_suite(options: SuiteOptions) -> list[CheckResult]:  # pylint: disable=unused-argument
    checks: list[CheckResult] = []
    cover_failures: int = 0
    cases: int = 0
    for n in range(0, 8):
        for m in range(1, 9 - n):
            for k in range(-min(n, m), 9 - n - m):
                cases += 1
                assembled = [t.assembled for t in lemma_decompose(n, k, m)]
                expected = set(enumerate_V((n + k, m)))
                if len(assembled) != len(set(assembled)) or set(assembled) != expected:
                    cover_failures += 1
    checks.append(CheckResult("shuffle_lemma_exact_cover", float(cover_failures), 0.0, detail={"cases": cases}))

    additivity_failures: int = 0
    for n in range(2, 8):
        for sigma in symmetric_group(n):
            for k in range(1, n):
                sigma_c, sigma_0 = coset_decompose(sigma, (k, n - k))
                if sigma_c * sigma_0 != sigma or length(sigma) != length(sigma_c) + length(sigma_0):
                    additivity_failures += 1
    checks.append(CheckResult("coset_length_additivity", float(additivity_failures), 0.0))

    inversions: int = sum(
        length(sigma) != sum(1 for i, j in itertools.combinations(range(1, 6), 2) if sigma(i) > sigma(j)) for sigma in symmetric_group(5)
    )
    checks.append(CheckResult("length_is_inversion_count", float(inversions), 0.0))
    return checks


@Suites.register(key="finvn")
def finvn_suite(options: SuiteOptions) -> list[CheckResult]:
    rng: np.random.Generator = np.random.default_rng(options.seed)
    M: TracialAlgebra = TracialAlgebra.create([(1, 0.2), (2, 0.4)])
    L2: Bimodule = gns(M)
    checks: list[CheckResult] = []

    product = connes_tensor(L2, L2)
    checks.append(CheckResult("l2_tensor_l2_dimension", float(abs(product.space.dim - L2.dim)), 0.0))

    x, y = M.random_element(rng), M.random_element(rng)
    checks.append(
        CheckResult("gns_left_action_is_multiplication", float(np.linalg.norm(L2.lam(x) @ M.to_gns(y) - M.to_gns(M.multiply(x, y)))), 1e-12)
    )

    frame = module_frame(product.space)
    worst: float = 0.0
    for _ in range(options.samples):
        eta: np.ndarray = rng.standard_normal(product.space.dim) + 1j * rng.standard_normal(product.space.dim)
        worst = max(worst, float(np.linalg.norm(frame_reconstruct(product.space, frame, eta) - eta)))
    checks.append(CheckResult("frame_reconstruction", worst, 1e-9))

    T: np.ndarray = right_modular_projection(_random_matrix(rng, L2.dim, L2.dim), L2, L2)
    checks.append(CheckResult("right_modular_projection", modularity_defect(T, L2, L2, "right"), 1e-10))
    checks.append(CheckResult("right_modular_projection_idempotent", float(np.linalg.norm(right_modular_projection(T, L2, L2) - T)), 1e-10))
    return checks


POSITIVITY_DEPTH: int = 5
COMPOSITION_PAIRS: int = 50
TRACE_PAIRS: int = 100


def _corpus(options: SuiteOptions) -> dict[str, tuple[DeformationBundle, TruncatedFock]]:
    result: dict[str, tuple[DeformationBundle, TruncatedFock]] = {}
    for name, spec in STANDARD_CORPUS.items():
        bundle: DeformationBundle = build_deformation(spec)
        result[name] = (bundle, TruncatedFock(bundle.deformation, options.truncation))
    return result


def _legs_product(bundle: DeformationBundle, n: int) -> np.ndarray:
    deformation = bundle.deformation
    result: np.ndarray = deformation.tower.identity(n)
    for i in range(1, n):
        result = result @ (deformation.tower.identity(n) + deformation.leg(n, i))
    return result


@Suites.register(key="fock")
def fock_suite(options: SuiteOptions) -> list[CheckResult]:
    rng: np.random.Generator = np.random.default_rng(options.seed)
    checks: list[CheckResult] = []
    for name, (bundle, fock) in _corpus(options).items():
        deformation = bundle.deformation
        for n in range(2, max(fock.N, POSITIVITY_DEPTH) + 1):
            report = deformation.d_report(n)
            checks.append(CheckResult(f"{name}_positivity_{n}", max(0.0, -report.min_eigenvalue), fock.positivity_tol))
        for n, m in [(1, 1), (1, 2), (2, 1)]:
            if n + m <= fock.N:
                checks.append(CheckResult(f"{name}_factorization_{n}_{m}", deformation.factorization_defect(n, m), 1e-9))

        if deformation.flags.is_projection and deformation.flags.commuting_ok:
            for n in range(2, fock.N + 1):
                defect = float(np.linalg.norm(deformation.d_operator(n) - _legs_product(bundle, n)))
                checks.append(CheckResult(f"{name}_commuting_product_{n}", defect, 1e-10))
            for n, m in [(1, 1), (1, 2), (2, 1), (2, 2)]:
                if n + m <= fock.N:
                    I: np.ndarray = fock.include(n, m)
                    checks.append(CheckResult(f"{name}_coisometry_{n}_{m}", float(np.linalg.norm(I @ I.conj().T - np.eye(fock.dims[n + m]))), 1e-10))

        degrees = [(a, b) for a in range(0, 3) for b in range(0, 3)]
        worst, window = 0.0, None
        for _ in range(max(options.samples, COMPOSITION_PAIRS)):
            (n1, m1), (n2, m2) = degrees[rng.integers(len(degrees))], degrees[rng.integers(len(degrees))]
            S, T = random_modular_map(fock, n1, m1, rng), random_modular_map(fock, n2, m2, rng)
            result = compose_check(fock, S, n1, m1, T, n2, m2)
            scale: float = max(1.0, float(np.linalg.norm(S)) * float(np.linalg.norm(T)))
            if result.defect / scale >= worst:
                worst, window = result.defect / scale, list(result.window.levels)
        checks.append(CheckResult(f"{name}_composition_rule", worst, 1e-9, window=window, detail={"relative": True}))
    return checks


@Suites.register(key="wick")
def wick_suite(options: SuiteOptions) -> list[CheckResult]:
    rng: np.random.Generator = np.random.default_rng(options.seed)
    checks: list[CheckResult] = []

    free = build_deformation({"kind": "zero", "copies": 1})
    fock = TruncatedFock(free.deformation, 10)
    wick = Wick(fock, free.involution)
    W: FockOperator = wick.wick_word(np.ones(1, dtype=complex), 1).operator
    moments = [wick.vacuum_state(_power(W, 2 * k)).real for k in range(5)]
    checks.append(CheckResult("semicircle_moments", float(np.max(np.abs(np.array(moments) - [1, 1, 2, 5, 14]))), 1e-9, detail={"moments": moments}))

    for q in (0.3, -0.7):
        bundle = build_deformation({"kind": "q_flip", "q": q})
        q_fock = TruncatedFock(bundle.deformation, 6)
        q_wick = Wick(q_fock, bundle.involution)
        Wq: FockOperator = q_wick.wick_word(np.ones(1, dtype=complex), 1).operator
        expected = [1.0, 1.0, 2.0 + q, 5.0 + 6.0 * q + 3.0 * q**2 + q**3]
        got = [q_wick.vacuum_state(_power(Wq, 2 * k)).real for k in range(4)]
        checks.append(CheckResult(f"q_gaussian_moments_{q:+.1f}", float(np.max(np.abs(np.array(got) - expected))), 1e-9, detail={"moments": got}))

    for name, (bundle, fock) in _corpus(options).items():
        wick = Wick(fock, bundle.involution)
        checks.append(CheckResult(f"{name}_involution_compatibility", check_compat(bundle.deformation, bundle.involution, 3).defect, 1e-9))
        vacuum_defect, adjoint_defect = 0.0, 0.0
        for n in range(1, fock.N + 1):
            xi: np.ndarray = rng.standard_normal(fock.dims[n]) + 1j * rng.standard_normal(fock.dims[n])
            word = wick.wick_word(xi, n).operator
            vacuum_defect = max(vacuum_defect, float(np.linalg.norm(word.apply(fock.vacuum) - fock.embed(xi, n))))
            starred = wick.wick_word(wick.apply_J(xi, n), n).operator
            adjoint_defect = max(adjoint_defect, (word.adjoint - starred).restricted_norm(range(0, fock.N - n + 1)))
        checks.append(CheckResult(f"{name}_word_creates_its_vector", vacuum_defect, 1e-9))
        checks.append(CheckResult(f"{name}_word_adjoint", adjoint_defect, 1e-9))

        product, symmetry, commutant = 0.0, 0.0, 0.0
        for a, b in [(1, 1), (1, 2), (2, 1), (2, 2)]:
            if a + b > fock.N:
                continue
            xi, eta = _random_vector(rng, fock.dims[a]), _random_vector(rng, fock.dims[b])
            low: range = range(0, fock.N - a - b + 1)
            A, B = wick.wick_word(xi, a).operator, wick.wick_word(eta, b).operator
            product = max(product, (A @ B - wick.product_expansion(xi, a, eta, b)).restricted_norm(low))
            mirrored: FockOperator = wick.mirrored(B)
            commutant = max(commutant, (A @ mirrored - mirrored @ A).restricted_norm(low))
            for k in range(min(a, b) + 1):
                lhs = wick.apply_J(wick.boxtimes(xi, eta, a - k, b - k, k), a + b - 2 * k)
                rhs = wick.boxtimes(wick.apply_J(eta, b), wick.apply_J(xi, a), b - k, a - k, k)
                symmetry = max(symmetry, float(np.linalg.norm(lhs - rhs)))
        checks.append(CheckResult(f"{name}_product_formula", product, 1e-9))
        checks.append(CheckResult(f"{name}_boxtimes_J_symmetry", symmetry, 1e-9))
        checks.append(CheckResult(f"{name}_mirror_commutes", commutant, 1e-9))

        trace_defect: float = 0.0
        for _ in range(options.samples):
            a, b = int(rng.integers(1, 3)), int(rng.integers(1, 3))
            if a + b > fock.N:
                continue
            A = wick.wick_word(_random_vector(rng, fock.dims[a]), a).operator
            B = wick.wick_word(_random_vector(rng, fock.dims[b]), b).operator
            trace_defect = max(trace_defect, abs(wick.vacuum_state(A @ B) - wick.vacuum_state(B @ A)))
        checks.append(CheckResult(f"{name}_vacuum_state_tracial", trace_defect, 1e-9))

        M: TracialAlgebra = fock.algebra
        x, y = M.random_element(rng), M.random_element(rng)
        A = wick.wick_word(_random_vector(rng, fock.dims[2]), 2).operator if fock.N >= 2 else fock.left_action(M.one())
        lhs = wick.cond_expectation(fock.left_action(x) @ A @ fock.left_action(y))
        rhs = M.multiply(M.multiply(x, wick.cond_expectation(A)), y)
        checks.append(CheckResult(f"{name}_expectation_bimodular", float(np.linalg.norm(lhs - rhs)), 1e-9))
        checks.append(CheckResult(f"{name}_expectation_unital", float(np.linalg.norm(wick.cond_expectation(fock.left_action(M.one())) - M.one())), 1e-12))
    return checks


def _random_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    return rng.standard_normal(dim) + 1j * rng.standard_normal(dim)


def _power(A: FockOperator, k: int) -> FockOperator:
    result: FockOperator = FockOperator(A.fock, np.eye(A.fock.dim, dtype=complex), (0, 0))
    for _ in range(k):
        result = A @ result
    return result


@Suites.register(key="multiplier")
def multiplier_suite(options: SuiteOptions) -> list[CheckResult]:
    rng: np.random.Generator = np.random.default_rng(options.seed)
    checks: list[CheckResult] = []
    for name, (bundle, fock) in _corpus(options).items():
        flags = bundle.deformation.flags
        if not (flags.is_projection and flags.commuting_ok):
            try:
                RadialMultipliers(fock)
                rejected = False
            except DeformationError as ex:
                rejected = ex.flag in ("is_projection", "commuting_ok")
            checks.append(CheckResult(f"{name}_rejects_non_projection", 0.0 if rejected else 1.0, 0.0))
            continue

        mult = RadialMultipliers(fock)
        degrees = [(n, m) for n in range(fock.N + 1) for m in range(fock.N + 1) if n + m <= fock.N]
        rho_defect, phi_defect = 0.0, 0.0
        for n, m in degrees:
            L: FockOperator = fock.creation(random_modular_map(fock, n, m, rng), n, m)
            for l in range(1, 4):
                q = np.diag((np.repeat(np.arange(fock.N + 1), fock.dims) >= n + l).astype(float))
                rho_defect = max(rho_defect, float(np.linalg.norm(mult.rho_power(L, l).matrix - L.matrix @ q)))
            x, y = _random_vector(rng, fock.N + 3), _random_vector(rng, fock.N + 3)
            scalar: complex = sum(x[k + m] * np.conj(y[k + n]) for k in range(fock.N + 3 - max(n, m)))
            phi = mult.phi_xy(L, x, y).operator
            phi_defect = max(phi_defect, float(np.linalg.norm(phi.matrix - scalar * L.matrix)) / max(1.0, L.norm()))
        checks.append(CheckResult(f"{name}_rho_power", rho_defect, 1e-10))
        checks.append(CheckResult(f"{name}_phi_xy_scalar", phi_defect, 1e-9, detail={"relative": True}))

        for psi_name, psi in MULTIPLIER_CORPUS.items():
            psi_map = mult.psi_map(psi)
            action: float = 0.0
            for n, m in degrees:
                L = fock.creation(random_modular_map(fock, n, m, rng), n, m)
                expected = eval_radial(psi, n + m)
                action = max(action, float(np.linalg.norm(psi_map.apply(L).matrix - expected * L.matrix)) / max(1.0, L.norm()))
            checks.append(CheckResult(f"{name}_phi_psi_action_{psi_name}", action, 1e-8, detail={"relative": True}))
            lower = cb_lower_bound(psi_map.apply, fock, options.amplification, options.trials, options.seed)
            checks.append(
                CheckResult(f"{name}_cb_bound_{psi_name}", max(0.0, lower - psi_map.norm.norm), 1e-6, detail={"lower": lower, "bound": psi_map.norm.norm})
            )
    return checks


def dihedral_letter(factor: int) -> Letter:
    """u_i − E(u_i) for the generating reflection u_i = (1, −1) of ℂ ⊕ ℂ."""
    return Letter(factor, np.array([1.0, -1.0], dtype=complex))


@Suites.register(key="amalgam")
def amalgam_suite(options: SuiteOptions) -> list[CheckResult]:
    checks: list[CheckResult] = []
    amalgam: Amalgam = build_amalgam(AmalgamSpecModel.model_validate(DIHEDRAL))
    flags = amalgam.deformation.flags
    failing = [k for k, v in flags.to_dict().items() if not v]
    checks.append(CheckResult("dihedral_flags", float(len(failing)), 0.0, detail={"failing": failing}))
    checks.append(CheckResult("dihedral_dim_H", float(abs(amalgam.H.dim - 8)), 0.0))

    N: int = ConfigValue("options:amalgam:word_length", default=3, after=int).resolve()
    fock: TruncatedFock = amalgam.fock(N)
    iso = corner_iso(amalgam, fock, N)
    checks.append(CheckResult("corner_isometry", iso.isometry_defect, 1e-10))
    checks.append(CheckResult("corner_projection", iso.projection_defect, 1e-10))

    wick = Wick(fock, amalgam.involution)
    empty = iso.slices[()]
    omega: np.ndarray = np.zeros(iso.dim, dtype=complex)
    omega[empty] = 1.0
    moment, reference = 0.0, 0.0
    operators: dict[tuple[int, ...], np.ndarray] = {}
    for n in range(1, N + 1):
        for word in alternating_words(2, n):
            letters = [dihedral_letter(i) for i in word]
            compressed = iso.compress(word_operator(amalgam, fock, letters, wick))
            operators[word] = compressed
            moment = max(moment, abs(np.vdot(omega, compressed @ omega)))
    for i in range(2):
        columns = iso.columns(N - 1)
        expected = free_left_action(amalgam, iso, i, dihedral_letter(i).element, N)
        reference = max(reference, float(np.linalg.norm((operators[(i,)] - expected)[:, columns])))
    checks.append(CheckResult("reduced_words_are_centered", moment, 1e-9))
    checks.append(CheckResult("letters_act_by_left_multiplication", reference, 1e-9))
    if N >= 2:
        columns = iso.columns(N - 2)
        product_defect = max(float(np.linalg.norm((operators[(i,)] @ operators[(j,)] - operators[(i, j)])[:, columns])) for i, j in [(0, 1), (1, 0)])
        checks.append(CheckResult("two_letter_product", product_defect, 1e-9))

    rng: np.random.Generator = np.random.default_rng(options.seed)
    cut: np.ndarray = fock.left_action(amalgam.corner_projection()).matrix @ fock.right_action(amalgam.corner_projection()).matrix
    pool: list[tuple[int, FockOperator]] = []
    for level in (2, 4):
        for _ in range(3):
            vector = fock.component(cut @ fock.embed(_random_vector(rng, fock.dims[level]), level), level)
            pool.append((level, wick.wick_word(vector, level).operator))

    def corner_product() -> tuple[int, FockOperator]:
        picks = [pool[i] for i in rng.integers(len(pool), size=int(rng.integers(1, 4)))]
        total, result = picks[0]
        for level, word in picks[1:]:
            total, result = total + level, result @ word
        return total, result

    trace_defect, pairs = 0.0, 0
    while pairs < TRACE_PAIRS:
        (a, A), (b, B) = corner_product(), corner_product()
        if a + b > fock.N:
            continue
        pairs += 1
        trace_defect = max(trace_defect, abs(wick.vacuum_state(A @ B) - wick.vacuum_state(B @ A)))
    checks.append(CheckResult("corner_vacuum_state_tracial", trace_defect, 1e-9, detail={"pairs": pairs}))

    multipliers = RadialMultipliers(fock)
    for name, psi in {"geometric_0.5": geometric(0.5), "delta_0": delta(0), "constant_1": constant(1.0)}.items():
        worst, bound = 0.0, 0.0
        for word in operators:
            letters = [dihedral_letter(i) for i in word]
            image, bound = psi_multiplier(amalgam, multipliers, psi, letters, wick=wick)
            expected = eval_radial(psi, len(word)) * operators[word]
            worst = max(worst, float(np.linalg.norm(iso.compress(image) - expected)))
        checks.append(CheckResult(f"psi_multiplier_{name}", worst, 1e-8, detail={"bound": bound}))

    bipartite = build_bipartite_amalgam(AmalgamSpecModel.model_validate(DIHEDRAL))
    bflags = bipartite.deformation.flags
    checks.append(CheckResult("bipartite_flags", float(not (bflags.is_projection and bflags.commuting_ok and bflags.braid_ok)), 0.0))
    bfock = TruncatedFock(bipartite.deformation, 4)
    positivity = max(max(0.0, -bipartite.deformation.d_report(n).min_eigenvalue) for n in range(2, bfock.N + 1))
    checks.append(CheckResult("bipartite_positivity", positivity, bfock.positivity_tol))
    checks.append(CheckResult("bipartite_involution_compatibility", check_compat(bipartite.deformation, bipartite.involution, 3).defect, 1e-9))
    return checks


__all__ = [
    "CheckResult",
    "MULTIPLIER_CORPUS",
    "PSI_CORPUS",
    "SuiteOptions",
    "SuiteReport",
    "Suites",
    "random_modular_map",
    "run_suite",
]
