import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nevpick.datasets import aggregate_from_simple
from nevpick.errors import WindingError
from nevpick.fixtures import d1, d2, d3, d4, random_indefinite_simple
from nevpick.lft import FreeParameter, make_interpolant
from nevpick.realization import blaschke_factor
from nevpick.winding import (
    MatrixFunction,
    WindingConfig,
    kappa_certificate,
    pole_count,
    winding_det,
    winding_detail,
)

seeds = st.integers(0, 2**32 - 1)


def scalar(f, inf):
    return MatrixFunction(lambda l: f(l)[:, None, None], [[inf]])


class TestWinding:
    def test_constant(self):
        assert winding_det(scalar(lambda l: np.full(l.shape, 2 + 0j), 2)) == 0

    def test_blaschke(self):
        B = blaschke_factor(1.5 + 0.5j, [[1]])
        assert winding_det(B) == 1

    def test_squared(self):
        B = blaschke_factor(1 + 2j, np.eye(2))
        assert winding_det(B) == 2

    def test_pole_in_right_half_plane(self):
        # (l + 1)/(l - 1): one pole, no zero on the right
        assert winding_det(scalar(lambda l: (l + 1) / (l - 1), 1)) == -1

    def test_left_plane_factors_do_not_count(self):
        assert winding_det(scalar(lambda l: (l + 2) / (l + 3 - 1j), 1)) == 0

    def test_product(self):
        B = blaschke_factor(1, [[1]])
        f = MatrixFunction(B.eval_many, B.value_at_infinity())
        assert winding_det(f @ f @ f) == 3

    def test_zero_on_axis(self):
        with pytest.raises(WindingError):
            winding_det(scalar(lambda l: l - 1j, 1))

    def test_unsettled_at_infinity(self):
        # value at infinity reported wrongly
        with pytest.raises(WindingError):
            winding_det(scalar(lambda l: np.ones(l.shape, dtype=complex), -1))

    def test_refinement_needed(self):
        # zero/pole pair straddling the axis at 5i; the phase turns within ~0.02
        f = scalar(lambda l: (l - 0.02 - 5j) / (l + 0.02 - 5j), 1)
        r = winding_detail(f)
        assert r.wno == 1 and r.samples > WindingConfig().initial_samples

    def test_refinement_limit(self):
        cfg = WindingConfig(refinement_limit=4096)
        with pytest.raises(WindingError):
            winding_det(scalar(lambda l: (l - 0.02 - 5j) / (l + 0.02 - 5j), 1), cfg)


class TestCertificates:
    @pytest.mark.parametrize("fx,expected", [
        (d1, (0, 0, 0)),
        (d2, (-1, 1, 0)),
        (d3, (1, 0, 1)),
        (lambda: d4(0.0), (-1, 1, 0)),
        (lambda: d4(1.0), (0, 1, 1)),
    ])
    def test_fixture_certificates(self, fx, expected):
        c = kappa_certificate(fx())
        assert (c.wno_theta22, c.wno_psi, c.kappa_pick) == expected
        assert c.certified and c.pole_count_S == c.kappa_pick

    def test_side_condition_failure(self):
        c = kappa_certificate(d3(), FreeParameter.constant([[0.5]]))
        assert c.wno_identity_ok and not c.side_condition_ok and not c.certified
        # the only zero of the denominator sits on the node itself
        S = make_interpolant(d3(), FreeParameter.constant([[0.5]]))
        assert c.pole_count_S == 1 and S.candidate_poles().size == 0

    @settings(max_examples=10)
    @given(seeds, st.integers(1, 2))
    def test_random_indefinite(self, seed, nm):
        s = random_indefinite_simple(np.random.default_rng(seed), nm, 2, 1, 1, 1)
        c = kappa_certificate(aggregate_from_simple(s))
        assert c.certified and c.pole_count_S == nm

    def test_pole_count_matches_candidates(self):
        S = make_interpolant(d3())
        assert pole_count(S) == S.candidate_poles().size == 1
