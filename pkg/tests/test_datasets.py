import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nevpick import jsonio
from nevpick.datasets import (
    BTOAData,
    LeftNode,
    RightNode,
    SimpleData,
    aggregate_from_simple,
    parse_dataset,
    serialize_dataset,
    validate_admissible,
)
from nevpick.errors import DataError, ParseError
from nevpick.fixtures import d1, d1_simple, d4, d4_simple, random_btoa_data, random_definite_simple, random_simple_data
from nevpick.pick import pick_matrix

seeds = st.integers(0, 2**32 - 1)


class TestAggregate:
    def test_one_left_one_right(self):
        s = SimpleData(1, 1, [LeftNode(1, [1], [0])], [RightNode(2, [1], [1])])
        d = aggregate_from_simple(s)
        assert d.Gamma[0, 0] == pytest.approx(1)

    def test_coinciding_passes_rho(self):
        d = d4(0.0)
        assert d.Gamma[0, 0] == 0
        assert d.Z[0, 0] == 1 and d.W[0, 0] == 1

    def test_left_only(self):
        d = aggregate_from_simple(d1_simple())
        assert d.n_W == 0 and d.Gamma.shape == (1, 0)

    def test_incompatible_coinciding(self):
        s = SimpleData(1, 1, [LeftNode(1, [1], [0.5])], [RightNode(1, [1], [0.7])], {(0, 0): 0})
        with pytest.raises(DataError, match="compatib"):
            aggregate_from_simple(s)

    def test_zero_direction(self):
        s = SimpleData(1, 1, [LeftNode(1, [0], [1])], [])
        with pytest.raises(DataError):
            aggregate_from_simple(s)

    def test_missing_rho(self):
        s = SimpleData(1, 1, [LeftNode(1, [1], [0.5])], [RightNode(1, [1], [0.5])], {})
        with pytest.raises(DataError, match="rho"):
            s.validate()

    @given(seeds, st.integers(0, 4), st.integers(0, 4), st.integers(1, 3), st.integers(1, 3))
    def test_always_admissible(self, seed, n, n2, p, m):
        rng = np.random.default_rng(seed)
        d = aggregate_from_simple(random_simple_data(rng, n, n2, p, m))
        assert validate_admissible(d).verdict

    def test_rho_only_moves_gamma(self):
        a, b = pick_matrix(d4(0.0)), pick_matrix(d4(0.3 + 0.1j))
        assert np.array_equal(a.gamma_L, b.gamma_L)
        assert np.array_equal(a.gamma_R, b.gamma_R)
        assert not np.array_equal(a.gamma_D, b.gamma_D)


class TestValidate:
    def test_d1(self):
        assert validate_admissible(d1()).verdict

    def test_left_half_plane(self):
        d = d1().replace(Z=[[-1]])
        rep = validate_admissible(d)
        assert not rep.spectra_ok and not rep.verdict
        assert rep.compatible == [False, True, True, True]

    @given(seeds, st.integers(0, 3), st.integers(0, 3))
    def test_verdict_is_conjunction(self, seed, n, n2):
        rng = np.random.default_rng(seed)
        d = random_btoa_data(rng, n, n2, 1, 1)
        if n and rng.uniform() < 0.5:
            d = d.replace(Gamma=d.Gamma + 1)
        rep = validate_admissible(d)
        assert rep.verdict == all(rep.compatible)
        assert rep.to_dict()["compatible"] == rep.compatible

    def test_wrong_gamma_at_coinciding_node_not_detected(self):
        # the Sylvester equation is vacuous at a coinciding node
        rep = validate_admissible(d4(0.0).replace(Gamma=[[1]]))
        assert rep.sylvester_residual == 0 and rep.verdict

    def test_sylvester_violation(self):
        s = SimpleData(1, 1, [LeftNode(1, [1], [0])], [RightNode(2, [1], [1])])
        d = aggregate_from_simple(s).replace(Gamma=[[2]])
        rep = validate_admissible(d)
        assert not rep.sylvester_ok and rep.sylvester_residual == pytest.approx(1)

    def test_dimension_mismatch(self):
        with pytest.raises(DataError):
            BTOAData([[1]], [[1, 2]], [[0]], np.zeros((0, 0)), np.zeros((1, 0)), np.zeros((1, 0)),
                     np.zeros((1, 0)), 1, 1)


class TestParse:
    def test_btoa_example(self):
        text = '{"kind":"btoa","Z":[[[1,0]]],"X":[[[1,0]]],"Y":[[[0,0]]],"W":[],"U":[],"V":[],"Gamma":[]}'
        assert parse_dataset(text.encode()) == d1()

    def test_simple_example(self):
        text = '{"kind":"simple","p":1,"m":1,"left":[{"z":[1,0],"x":[[1,0]],"y":[[0,0]]}],"right":[]}'
        assert parse_dataset(text) == d1_simple()

    def test_real_scalar_rejected_with_path(self):
        text = '{"kind":"btoa","Z":[[1]],"X":[[[1,0]]],"Y":[[[0,0]]],"W":[],"U":[],"V":[],"Gamma":[]}'
        with pytest.raises(ParseError) as e:
            parse_dataset(text)
        assert e.value.path == "Z[0][0]"

    def test_syntax_error(self):
        with pytest.raises(ParseError):
            parse_dataset(b"{not json")

    def test_bad_kind(self):
        with pytest.raises(ParseError) as e:
            parse_dataset('{"kind":"other"}')
        assert e.value.path == "kind"

    def test_non_finite(self):
        text = '{"kind":"simple","p":1,"m":1,"left":[{"z":[1e999,0],"x":[[1,0]],"y":[[0,0]]}],"right":[]}'
        with pytest.raises(ParseError, match="finite"):
            parse_dataset(text)

    def test_node_outside_half_plane(self):
        text = '{"kind":"simple","p":1,"m":1,"left":[{"z":[-1,0],"x":[[1,0]],"y":[[0,0]]}],"right":[]}'
        with pytest.raises(ParseError) as e:
            parse_dataset(text)
        assert e.value.path == "left[0].z"

    def test_ragged(self):
        text = '{"kind":"btoa","Z":[[[1,0],[0,0]],[[1,0]]],"X":[],"Y":[],"W":[],"U":[],"V":[],"Gamma":[]}'
        with pytest.raises(ParseError):
            parse_dataset(text)

    def test_empty_sides_need_p_m(self):
        text = '{"kind":"btoa","Z":[],"X":[],"Y":[],"W":[],"U":[],"V":[],"Gamma":[]}'
        with pytest.raises(ParseError):
            parse_dataset(text)


class TestRoundtrip:
    def test_fixtures(self):
        for d in (d1(), d4(0.25 - 0.5j), d1_simple(), d4_simple(1 / 3)):
            assert parse_dataset(serialize_dataset(d)) == d

    @given(seeds, st.integers(0, 3), st.integers(0, 3), st.integers(1, 3), st.integers(1, 3))
    def test_simple_bit_identical(self, seed, n, n2, p, m):
        s = random_simple_data(np.random.default_rng(seed), n, n2, p, m)
        assert parse_dataset(serialize_dataset(s)) == s

    @given(seeds, st.integers(0, 3), st.integers(0, 3), st.integers(1, 2), st.integers(1, 2))
    def test_btoa_bit_identical(self, seed, n, n2, p, m):
        d = random_btoa_data(np.random.default_rng(seed), n, n2, p, m)
        assert parse_dataset(serialize_dataset(d)) == d

    def test_coinciding_roundtrip(self):
        s = random_definite_simple(np.random.default_rng(3), 2, 2, 2, 1, n_coincide=1)
        assert parse_dataset(serialize_dataset(s)) == s

    @given(st.floats(allow_nan=False, allow_infinity=False), st.floats(allow_nan=False, allow_infinity=False))
    def test_scalar_encoding(self, a, b):
        text = jsonio.dumps({"v": complex(a, b)})
        back = jsonio.decode_complex(json.loads(text)["v"], "v")
        assert back == complex(a, b)
