import numpy as np
import pytest

from src.corpus import STANDARD_CORPUS, DeformationKinds, build_deformation, parse_deformation, scalar_module
from src.errors import SpecificationError
from src.model import QFlipDeformationSpec


class TestDeformationKinds:
    """JSON specifications to (M, H, F, J)"""

    def test_registered_kinds(self):
        assert DeformationKinds.keys() == ["amalgam", "bipartite_amalgam", "matrix", "q_flip", "zero"]

    def test_parse(self):
        spec = parse_deformation({"kind": "q_flip", "q": 0.5})
        assert isinstance(spec, QFlipDeformationSpec)
        assert spec.dim == 1
        assert parse_deformation(spec) is spec

    @pytest.mark.parametrize(
        "data",
        [{"kind": "unknown"}, {"kind": "q_flip", "q": 1.5}, {"kind": "matrix", "dim": 2, "entries": [[0.0]]}, {"kind": "zero", "copies": 0}],
    )
    def test_invalid(self, data):
        with pytest.raises(SpecificationError):
            build_deformation(data)

    def test_scalar_module(self):
        module = scalar_module(3)
        assert module.dim == 3
        module.validate()

    def test_zero_over_matrix_algebra(self):
        bundle = build_deformation({"kind": "zero", "copies": 2, "algebra": {"blocks": [{"dim": 2, "weight": 0.5}]}})
        assert bundle.H.dim == 8
        assert bundle.algebra.dims == (2,)
        assert not np.any(bundle.deformation.F)

    def test_dim_alias(self):
        assert build_deformation({"kind": "zero", "dim": 3}).H.dim == 3

    def test_matrix_matches_q_flip(self):
        """A 1×1 matrix −q is the q-flip on ℂ"""
        matrix = build_deformation({"kind": "matrix", "dim": 1, "entries": [[-0.4]]})
        flip = build_deformation({"kind": "q_flip", "q": 0.4})
        np.testing.assert_allclose(matrix.deformation.F, flip.deformation.F)

    def test_complex_entries(self):
        """[re, im] pairs are accepted"""
        bundle = build_deformation({"kind": "matrix", "dim": 1, "entries": [[[-0.4, 0.0]]]})
        np.testing.assert_allclose(bundle.deformation.F, build_deformation({"kind": "q_flip", "q": 0.4}).deformation.F)

    def test_amalgam_bundle(self, dihedral):
        bundle = build_deformation({"kind": "amalgam"})
        assert bundle.amalgam is not None
        assert bundle.H.dim == dihedral.H.dim
        assert bundle.tower is bundle.deformation.tower

    def test_bipartite_bundle(self):
        bundle = build_deformation({"kind": "bipartite_amalgam"})
        assert bundle.amalgam is None
        assert bundle.deformation.flags.is_projection

    @pytest.mark.parametrize("name", sorted(STANDARD_CORPUS))
    def test_standard_corpus_builds(self, name):
        bundle = build_deformation(STANDARD_CORPUS[name])
        assert bundle.deformation.flags.braid_ok
        assert bundle.involution.flags.intertwining
