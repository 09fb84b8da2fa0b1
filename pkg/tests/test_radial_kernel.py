import numpy as np
import pytest
from pydantic import ValidationError

from src.model import RadialFunction
from src.radial_kernel import (
    RadialKinds,
    alternating,
    asymptotics,
    class_membership,
    class_norm,
    constant,
    delta,
    eval_radial,
    even_lift,
    geometric,
    hankel,
    radial_sum,
    rank_one_decompose,
    reconstruct_psi,
    samples,
    table,
    trace_norm,
)

class TestRadialFunctions:
    """Evaluation of the supported radial kinds"""

    def test_registered_kinds(self):
        """Every model kind has an evaluator"""
        assert RadialKinds.keys() == sorted(["table", "geometric", "constant", "alternating", "even_lift", "sum"])

    def test_geometric_and_constant(self):
        """r^n and constant values"""
        assert eval_radial(geometric(0.5), 3) == pytest.approx(0.125)
        assert eval_radial(constant(2.0), 17) == 2.0
        assert eval_radial(alternating(1.0), 3) == -1.0

    def test_table_tails(self):
        """Stored values are followed by the selected tail"""
        assert eval_radial(table([1.0, 0.5]), 5) == 0
        assert eval_radial(table([1.0, 0.5], tail="constant"), 5) == 0.5
        periodic = table([1.0, 0.5, 3.0, -1.0], tail="alternating_constant")
        assert [eval_radial(periodic, n).real for n in range(4, 8)] == [3.0, -1.0, 3.0, -1.0]

    def test_delta(self):
        """delta(n) is a point mass"""
        np.testing.assert_allclose(samples(delta(2), 5), [0, 0, 1, 0, 0])

    def test_even_lift_and_sum(self):
        """ψ̃(2n) = ψ(n), odd values vanish; sums add pointwise"""
        lifted = even_lift(geometric(0.5))
        assert eval_radial(lifted, 4) == pytest.approx(0.25)
        assert eval_radial(lifted, 3) == 0
        assert eval_radial(radial_sum(constant(1.0), delta(0)), 0) == 2.0

    def test_complex_values_on_the_wire(self):
        """[re, im] pairs are complex numbers"""
        phi = RadialFunction.model_validate({"kind": "geometric", "r": [0.0, 0.5]})
        assert eval_radial(phi, 2) == pytest.approx(-0.25)

    def test_negative_argument_rejected(self):
        """Radial functions live on the naturals"""
        with pytest.raises(ValueError):
            eval_radial(constant(), -1)

    @pytest.mark.parametrize(
        "data",
        [
            {"kind": "geometric", "r": 1.5},
            {"kind": "geometric"},
            {"kind": "table", "values": []},
            {"kind": "table", "values": [1.0], "tail": "alternating_constant"},
            {"kind": "unknown"},
        ],
    )
    def test_invalid_models(self, data):
        """Missing or inconsistent parameters are rejected"""
        with pytest.raises(ValidationError):
            RadialFunction.model_validate(data)


class TestHankel:
    """Hankel matrices and trace norms"""

    def test_hankel_kinds(self):
        """H, K and K̃ differ by the shift"""
        phi = table([4.0, 3.0, 2.0, 1.0])
        assert hankel(phi, "H", 2).tolist() == [[2.0, 2.0], [2.0, 2.0]]
        assert hankel(phi, "K", 2).tolist() == [[1.0, 1.0], [1.0, 1.0]]
        assert hankel(phi, "Ktilde", 2).tolist() == [[1.0, 1.0], [1.0, 1.0]]

    def test_hankel_is_k_plus_ktilde(self):
        """H_φ = K_φ + K̃_φ"""
        phi = radial_sum(geometric(0.3), table([1.0, -2.0, 0.5]))
        np.testing.assert_allclose(hankel(phi, "H", 10), hankel(phi, "K", 10) + hankel(phi, "Ktilde", 10))

    def test_bad_truncation(self):
        """The truncation must be positive"""
        with pytest.raises(ValueError):
            hankel(constant(), "H", 0)

    def test_trace_norm(self):
        """Sum of singular values, empty matrices have norm zero"""
        result = trace_norm(np.diag([3.0, -1.0]))
        assert result.norm == pytest.approx(4.0)
        assert result.singulars.tolist() == pytest.approx([3.0, 1.0])
        assert trace_norm(np.zeros((0, 0))).norm == 0.0


class TestClassNorm:
    """‖φ‖_𝒞 and ‖φ‖_𝒞′"""

    @pytest.mark.parametrize("r", [0.1, 0.5, 0.7, -0.5])
    def test_geometric_has_norm_one(self, r):
        """H_φ is rank one with trace norm one for r^n"""
        result = class_norm(geometric(r), "C", 60)
        assert result.converged
        assert result.norm == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("r", [0.1, 0.5, 0.7])
    def test_geometric_cprime(self, r):
        """‖K‖₁ + ‖K̃‖₁ = 1/(1+r) + r/(1+r)"""
        result = class_norm(geometric(r), "Cprime", 60)
        assert result.converged
        assert result.norm == pytest.approx(1.0, abs=1e-8)
        assert [report.kind for report in result.reports] == ["K", "Ktilde"]

    def test_constant_and_alternating_tails(self):
        """c₊ and c₋ carry the tails"""
        const = class_norm(constant(2.0), "C", 16)
        assert const.norm == pytest.approx(2.0)
        assert const.asymptotics.c_plus == pytest.approx(2.0)
        alt = class_norm(alternating(1.0), "C", 16)
        assert alt.norm == pytest.approx(1.0)
        assert alt.asymptotics.c_minus == pytest.approx(1.0)

    def test_alternating_is_not_cprime(self):
        """Without a limit the 𝒞′ norm does not converge"""
        result = class_norm(alternating(1.0), "Cprime", 16)
        assert not result.converged
        assert result.asymptotics.c_limit is None

    def test_delta_zero(self):
        """A point mass at zero has both norms equal to one"""
        membership = class_membership(delta(0), 16)
        assert membership["C"].norm == pytest.approx(1.0)
        assert membership["Cprime"].norm == pytest.approx(1.0)

    @pytest.mark.parametrize("phi", [geometric(0.5), delta(3), table([1.0, 0.5, 0.25]), radial_sum(geometric(0.5), constant(0.5))])
    def test_c_below_cprime(self, phi):
        """‖φ‖_𝒞 ≤ ‖φ‖_𝒞′"""
        membership = class_membership(phi, 40)
        assert membership["C"].norm <= membership["Cprime"].norm + 1e-9

    def test_even_lift_matches_cprime(self):
        """‖ψ̃‖_𝒞 = ‖ψ‖_𝒞′"""
        psi = table([1.0, 0.5, 0.25])
        assert class_norm(even_lift(psi), "C", 40).norm == pytest.approx(class_norm(psi, "Cprime", 40).norm, abs=1e-8)

    def test_library_default_truncation(self):
        """Without N the configured truncation is used"""
        assert class_norm(geometric(0.5)).truncation == 200

    def test_small_truncation_rejected(self):
        """Convergence needs room for N/2"""
        with pytest.raises(ValueError):
            class_norm(constant(), "C", 2)
        with pytest.raises(ValueError):
            asymptotics(constant(), 3)
        with pytest.raises(ValueError):
            class_norm(constant(), "D", 16)  # type: ignore

    def test_zero_truncation_is_rejected(self):
        """N = 0 is an explicit value, not a request for the default"""
        with pytest.raises(ValueError, match="N >= 4"):
            class_norm(constant(), "C", 0)


class TestRankOneDecomposition:
    """H_φ = Σ x_k y_k*"""

    def test_geometric_is_rank_one(self):
        """One pair carrying the whole trace norm"""
        dec = rank_one_decompose(geometric(0.5), 40)
        assert len(dec.pairs) == 1
        assert dec.nuclear_sum == pytest.approx(1.0)
        np.testing.assert_allclose(dec.matrix(), hankel(geometric(0.5), "H", 40), atol=1e-12)
        assert dec.table()[0]["k"] == 0

    def test_zero_tolerance_keeps_every_pair(self):
        dec = rank_one_decompose(geometric(0.5), 12, tol=0.0)
        assert len(dec.pairs) == 12
        assert dec.nuclear_sum == pytest.approx(1.0)

    def test_nuclear_sum_is_trace_norm(self):
        """The SVD pairs realise the trace norm"""
        phi = table([1.0, -0.5, 0.25, 2.0])
        dec = rank_one_decompose(phi, 12)
        assert dec.nuclear_sum == pytest.approx(trace_norm(hankel(phi, "H", 12)).norm)

    @pytest.mark.parametrize("k, l", [(0, 0), (1, 2), (3, 1)])
    def test_reconstruct_psi(self, k, l):
        """Summing along the diagonal telescopes back to φ(k+l)"""
        phi = geometric(0.5)
        dec = rank_one_decompose(phi, 40)
        assert reconstruct_psi(dec, 0, 0, k, l) == pytest.approx(eval_radial(phi, k + l), abs=1e-10)

    def test_reconstruct_with_tails(self):
        """c₊ + (−1)^{k+l}c₋ is added to the kernel part"""
        phi = alternating(1.0)
        dec = rank_one_decompose(phi, 16)
        assert not dec.pairs
        assert reconstruct_psi(dec, 0, 1.0, 1, 2) == pytest.approx(-1.0)

    def test_reconstruct_out_of_range(self):
        """Indices beyond the truncation are rejected"""
        with pytest.raises(ValueError):
            reconstruct_psi(rank_one_decompose(geometric(0.5), 8), 0, 0, 8, 0)
