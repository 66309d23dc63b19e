import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nevpick import jsonio
from nevpick.datasets import aggregate_from_simple
from nevpick.errors import DataError, ParseError, SingularDenominatorError, SingularMatrixError
from nevpick.fixtures import d1, d2, d3, d4, random_contraction, random_definite_simple
from nevpick.lft import (
    FreeParameter,
    lft_apply,
    lft_equation_residual,
    make_interpolant,
    parse_parameter,
)
from nevpick.realization import Realization, build_theta

seeds = st.integers(0, 2**32 - 1)


class TestFreeParameter:
    def test_zero(self):
        G = FreeParameter.zero(2, 1)
        assert G.shape == (2, 1) and G.sampled_sup_norm == 0

    def test_non_contractive_constant(self):
        with pytest.raises(DataError):
            FreeParameter.constant([[1.5]])

    def test_unstable_realization(self):
        with pytest.raises(DataError, match="poles"):
            FreeParameter.from_realization(Realization([[1]], [[1]], [[1]], [[0]]))

    def test_non_contractive_realization(self):
        # 2/(l+1) has norm 2 at 0
        with pytest.raises(DataError, match="contractive"):
            FreeParameter.from_realization(Realization([[-1]], [[1]], [[2]], [[0]]))

    def test_realization_ok(self):
        # 1/(l+1)
        G = FreeParameter.from_realization(Realization([[-1]], [[1]], [[1]], [[0]]))
        assert G.sampled_sup_norm == pytest.approx(1, abs=1e-4)
        assert G.eval(1)[0, 0] == pytest.approx(0.5)


class TestHandValues:
    def test_d1_zero_parameter(self):
        S = make_interpolant(d1())
        for lam in (2, 0.5 + 3j):
            assert abs(S(lam)[0, 0]) < 1e-14

    def test_d1_half(self):
        S = make_interpolant(d1(), FreeParameter.constant([[0.5]]))
        assert S(3)[0, 0] == pytest.approx(0.25)

    def test_d2_half(self):
        S = make_interpolant(d2(), FreeParameter.constant([[0.5]]))
        assert S(3)[0, 0] == pytest.approx(0.25)
        assert S.side.values[0] == pytest.approx(1.0, abs=1e-6)

    def test_d3_closed_form(self):
        # S = -4 / (3 lambda - 5)
        S = make_interpolant(d3())
        for lam in (1, 2, 0.3 + 1j, -2j):
            assert S(lam)[0, 0] == pytest.approx(-4 / (3 * lam - 5))
        assert S.kappa_expected == 1
        assert S.side.values[0] == pytest.approx(-1 / 3, abs=1e-6)
        assert S.candidate_poles() == pytest.approx([5 / 3])

    def test_d3_side_condition_fails_for_half(self):
        S = make_interpolant(d3(), FreeParameter.constant([[0.5]]))
        assert not S.side_condition_ok

    def test_degenerate(self):
        with pytest.raises(SingularMatrixError):
            make_interpolant(d4(0.375))

    def test_shape_mismatch(self):
        with pytest.raises(DataError):
            make_interpolant(d1(), FreeParameter.zero(2, 1))

    def test_singular_denominator(self):
        # S has a pole at 5/3 for D3
        with pytest.raises(SingularDenominatorError):
            lft_apply(build_theta(d3()), FreeParameter.zero(1, 1), 5 / 3)


class TestProperties:
    @given(seeds, st.integers(1, 3), st.integers(0, 3), st.integers(1, 3), st.integers(1, 3))
    def test_equation_residual(self, seed, nl, nr, p, m):
        rng = np.random.default_rng(seed)
        d = aggregate_from_simple(random_definite_simple(rng, nl, nr, p, m))
        G = FreeParameter.constant(random_contraction(rng, p, m))
        S = make_interpolant(d, G)
        lams = np.array([0.4 + 1j, 2.0, 1j, 5 - 3j])
        assert lft_equation_residual(S, lams) <= 1e-9

    @given(seeds, st.integers(1, 3), st.integers(1, 2))
    def test_definite_has_no_candidate_poles(self, seed, n, p):
        rng = np.random.default_rng(seed)
        d = aggregate_from_simple(random_definite_simple(rng, n, n, p, p))
        S = make_interpolant(d, FreeParameter.constant(random_contraction(rng, p, p, 0.99)))
        assert S.side_condition_ok
        assert S.candidate_poles().size == 0


class TestParse:
    def test_constant(self):
        text = jsonio.dumps({"kind": "constant", "value": jsonio.encode_matrix([[0.5]])})
        G = parse_parameter(text, 1, 1)
        assert G.value[0, 0] == 0.5

    def test_realization(self):
        R = {"kind": "realization", **{k: jsonio.encode_matrix([[v]]) for k, v in
                                       (("A", -1.0), ("B", 1.0), ("C", 0.5), ("D", 0.0))}}
        G = parse_parameter(jsonio.dumps(R), 1, 1)
        assert G.variant == "realization" and G.eval(1)[0, 0] == pytest.approx(0.25)

    def test_wrong_shape(self):
        with pytest.raises(ParseError):
            parse_parameter(jsonio.dumps({"kind": "constant", "value": jsonio.encode_matrix(np.zeros((2, 2)))}), 1, 1)

    def test_missing_field(self):
        with pytest.raises(ParseError) as e:
            parse_parameter(json.dumps({"kind": "realization", "A": []}), 1, 1)
        assert e.value.path == "B"

    def test_bad_kind(self):
        with pytest.raises(ParseError):
            parse_parameter('{"kind": 3}', 1, 1)
