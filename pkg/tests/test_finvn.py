import numpy as np
import pytest

from src.errors import InvalidAlgebraError, InvalidBimoduleError
from src.finvn import (
    Bimodule,
    TracialAlgebra,
    connes_tensor,
    direct_sum,
    frame_reconstruct,
    gns,
    left_modular_projection,
    modularity_defect,
    module_frame,
    right_modular_projection,
)

# pylint: disable=redefined-outer-name


@pytest.fixture(scope="module")
def algebra() -> TracialAlgebra:
    """ℂ ⊕ M₂(ℂ) with weights 0.2 and 0.4"""
    return TracialAlgebra.create([(1, 0.2), (2, 0.4)])


@pytest.fixture(scope="module")
def l2(algebra: TracialAlgebra) -> Bimodule:
    return gns(algebra)


class TestTracialAlgebra:
    """Matrix units, products and the trace"""

    @pytest.mark.parametrize(
        "blocks",
        [[], [(1, 0.5)], [(0, 1.0)], [(1, -1.0), (1, 2.0)]],
    )
    def test_invalid_algebras(self, blocks):
        """Empty, unnormalized and non-positive data is rejected"""
        with pytest.raises(InvalidAlgebraError):
            TracialAlgebra.create(blocks)

    def test_errors_are_value_errors(self):
        with pytest.raises(ValueError):
            TracialAlgebra.create([(2, 1.0)])

    def test_layout(self, algebra: TracialAlgebra):
        assert algebra.size == 5
        assert algebra.offsets == (0, 1, 5)
        assert algebra.index(1, 1, 0) == 3
        assert algebra.units[3] == (1, 1, 0)

    def test_trace_is_normalized(self, algebra: TracialAlgebra):
        assert algebra.trace(algebra.one()) == pytest.approx(1.0)
        assert algebra.trace(algebra.central_projection(1)) == pytest.approx(0.8)

    def test_unit_products(self, algebra: TracialAlgebra):
        """e_ij·e_jk = e_ik and products across blocks vanish"""
        assert algebra.unit_product(algebra.index(1, 0, 1), algebra.index(1, 1, 0)) == algebra.index(1, 0, 0)
        assert algebra.unit_product(algebra.index(1, 0, 1), algebra.index(1, 0, 1)) is None
        assert algebra.unit_product(0, algebra.index(1, 0, 0)) is None
        assert algebra.unit_adjoint(algebra.index(1, 0, 1)) == algebra.index(1, 1, 0)

    def test_multiply_and_adjoint(self, algebra: TracialAlgebra, rng):
        x, y = algebra.random_element(rng), algebra.random_element(rng)
        np.testing.assert_allclose(algebra.adjoint(algebra.multiply(x, y)), algebra.multiply(algebra.adjoint(y), algebra.adjoint(x)))
        np.testing.assert_allclose(algebra.multiply(algebra.one(), x), x)

    def test_projections(self, algebra: TracialAlgebra):
        assert algebra.is_projection(algebra.central_projection(0))
        assert not algebra.is_projection(2 * algebra.one())

    def test_gns_coordinates(self, algebra: TracialAlgebra, rng):
        """‖x̂‖² = τ(x*x) and from_gns inverts to_gns"""
        x = algebra.random_element(rng)
        assert np.vdot(algebra.to_gns(x), algebra.to_gns(x)) == pytest.approx(algebra.trace(algebra.multiply(algebra.adjoint(x), x)))
        np.testing.assert_allclose(algebra.from_gns(algebra.to_gns(x)), x)


class TestBimodule:
    """L²(M), inner products and sub-bimodules"""

    def test_gns_is_a_bimodule(self, l2: Bimodule):
        Bimodule.create(l2.algebra, l2.left, l2.right)

    def test_gns_actions(self, algebra: TracialAlgebra, l2: Bimodule, rng):
        """λ(x)ŷ = (xy)^ and ρ(x)ŷ = (yx)^"""
        x, y = algebra.random_element(rng), algebra.random_element(rng)
        np.testing.assert_allclose(l2.lam(x) @ algebra.to_gns(y), algebra.to_gns(algebra.multiply(x, y)), atol=1e-12)
        np.testing.assert_allclose(l2.rho(x) @ algebra.to_gns(y), algebra.to_gns(algebra.multiply(y, x)), atol=1e-12)

    def test_inner_products(self, algebra: TracialAlgebra, l2: Bimodule, rng):
        """⟨x̂, ŷ⟩_M = x*y and ⟨x̂, ŷ⟩'_M = xy*"""
        x, y = algebra.random_element(rng), algebra.random_element(rng)
        xh, yh = algebra.to_gns(x), algebra.to_gns(y)
        np.testing.assert_allclose(l2.right_inner(xh, yh), algebra.multiply(algebra.adjoint(x), y), atol=1e-10)
        np.testing.assert_allclose(l2.left_inner(xh, yh), algebra.multiply(x, algebra.adjoint(y)), atol=1e-10)

    def test_bad_shapes(self, algebra: TracialAlgebra):
        with pytest.raises(InvalidBimoduleError):
            Bimodule.create(algebra, np.zeros((5, 2, 2)), np.zeros((5, 3, 3)))

    def test_non_unital_actions(self, algebra: TracialAlgebra):
        with pytest.raises(InvalidBimoduleError, match="unital"):
            Bimodule.create(algebra, np.zeros((5, 2, 2)), np.zeros((5, 2, 2)))

    def test_direct_sum_and_restrict(self, l2: Bimodule):
        """Restricting a direct sum to one summand gives the summand back"""
        doubled = direct_sum(l2, l2)
        assert doubled.dim == 2 * l2.dim
        doubled.validate()
        first = doubled.restrict(np.eye(doubled.dim)[:, : l2.dim])
        np.testing.assert_allclose(first.left, l2.left)
        np.testing.assert_allclose(first.right, l2.right)

    def test_direct_sum_needs_modules(self):
        with pytest.raises(InvalidBimoduleError):
            direct_sum()

    def test_mixed_algebras(self, l2: Bimodule):
        with pytest.raises(InvalidAlgebraError):
            direct_sum(l2, gns(TracialAlgebra.scalars()))


class TestConnesTensor:
    """Relative tensor products"""

    def test_l2_is_the_unit(self, l2: Bimodule):
        """L²(M) ⊗_M L²(M) ≅ L²(M)"""
        product = connes_tensor(l2, l2)
        assert product.space.dim == l2.dim
        product.space.validate()
        np.testing.assert_allclose(product.quotient @ product.lift, np.eye(l2.dim), atol=1e-10)

    def test_over_scalars_dimensions_multiply(self):
        C2 = direct_sum(gns(TracialAlgebra.scalars()), gns(TracialAlgebra.scalars()))
        assert connes_tensor(C2, C2).space.dim == 4

    def test_tensor_of_sum(self, l2: Bimodule):
        assert connes_tensor(direct_sum(l2, l2), l2).space.dim == 2 * l2.dim

    def test_different_algebras(self, l2: Bimodule):
        with pytest.raises(InvalidAlgebraError):
            connes_tensor(l2, gns(TracialAlgebra.scalars()))


class TestFrameAndModularity:
    """Module frames and averaging onto modular maps"""

    def test_frame_reconstruction(self, l2: Bimodule, rng):
        space = connes_tensor(direct_sum(l2, l2), l2).space
        frame = module_frame(space)
        for _ in range(3):
            eta = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
            np.testing.assert_allclose(frame_reconstruct(space, frame, eta), eta, atol=1e-9)

    def test_frame_projections(self, algebra: TracialAlgebra, l2: Bimodule):
        """⟨ξ_i, ξ_i⟩'_M is the projection recorded with ξ_i"""
        for f in module_frame(l2):
            np.testing.assert_allclose(l2.left_inner(f.vector, f.vector), f.projection, atol=1e-10)
            assert algebra.is_projection(f.projection)

    def test_right_modular_projection(self, l2: Bimodule, rng):
        T = rng.standard_normal((l2.dim, l2.dim))
        P = right_modular_projection(T, l2, l2)
        assert modularity_defect(P, l2, l2, "right") < 1e-10
        np.testing.assert_allclose(right_modular_projection(P, l2, l2), P, atol=1e-10)

    def test_left_modular_projection(self, l2: Bimodule, rng):
        T = rng.standard_normal((l2.dim, l2.dim))
        P = left_modular_projection(T, l2, l2)
        assert modularity_defect(P, l2, l2, "left") < 1e-10

    def test_left_action_is_right_modular(self, algebra: TracialAlgebra, l2: Bimodule, rng):
        """λ(x) commutes with the right action and is fixed by the projection"""
        X = l2.lam(algebra.random_element(rng))
        assert modularity_defect(X, l2, l2, "right") < 1e-10
        np.testing.assert_allclose(right_modular_projection(X, l2, l2), X, atol=1e-10)
