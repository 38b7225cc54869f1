import numpy as np
import pytest

from cylroman.errors import CapacityError
from cylroman.oracle import (
    CylinderGraph,
    RomanFunction,
    border_loss_dp,
    border_loss_exhaustive,
    brute_force_gamma_R,
    diagonal_pattern,
    validate_rdf,
)
from cylroman.solver import border_loss, roman_number, roman_numbers


def test_graph_shape():
    g = CylinderGraph(3, 5)
    assert len(g.vertices()) == 15
    assert g.degree(0, 0) == 3 and g.degree(2, 4) == 3 and g.degree(1, 2) == 4
    assert sorted(g.neighbors(0, 0)) == [(0, 1), (0, 4), (1, 0)]
    with pytest.raises(ValueError):
        CylinderGraph(3, 2)


@pytest.mark.parametrize("fill,ok", [(2, True), (0, False), (1, True)])
def test_validate_constant_functions(fill, ok):
    g = CylinderGraph(3, 4)
    assert validate_rdf(g, RomanFunction(np.full((3, 4), fill))) is ok


def test_validate_shape_mismatch_and_values():
    with pytest.raises(ValueError):
        validate_rdf(CylinderGraph(3, 4), RomanFunction(np.ones((3, 5))))
    with pytest.raises(ValueError):
        RomanFunction(np.full((2, 3), 3))


def test_roman_function_text_roundtrip():
    f = RomanFunction(np.array([[2, 0, 1], [0, 0, 2]]))
    assert f.weight == 5 and f.level(2) == {(0, 0), (1, 2)}
    assert RomanFunction.from_text(f.to_text()).values.tolist() == f.values.tolist()


@pytest.mark.parametrize("m,n,value", [(2, 3, 4), (2, 4, 4), (3, 4, 6)])
def test_exhaustive_values(m, n, value):
    assert brute_force_gamma_R(m, n, "exhaustive") == value


def test_p2_c4_witness():
    # two 2s on opposite corners dominate all eight vertices
    f = RomanFunction(np.array([[2, 0, 0, 0], [0, 0, 2, 0]]))
    assert validate_rdf(CylinderGraph(2, 4), f) and f.weight == 4


def test_dp_matches_exhaustive():
    for m in (1, 2, 3, 4):
        for n in range(3, 17 // m + 1):
            if m * n <= 16:
                assert brute_force_gamma_R(m, n, "dp") == brute_force_gamma_R(m, n, "exhaustive"), (m, n)


def test_dp_matches_transfer_matrix_on_longer_cycles():
    for m in (2, 3, 4):
        direct = roman_numbers(m, range(3, 26))
        for n, v in direct.items():
            assert brute_force_gamma_R(m, n, "dp") == v, (m, n)


def test_capacity_limits():
    with pytest.raises(CapacityError):
        brute_force_gamma_R(4, 5, "exhaustive")
    with pytest.raises(CapacityError):
        brute_force_gamma_R(5, 5, "dp")
    with pytest.raises(ValueError):
        brute_force_gamma_R(3, 4, "magic")
    with pytest.raises(CapacityError):
        border_loss_exhaustive(5)


def test_monotone_in_m():
    for n in range(3, 8):
        values = [brute_force_gamma_R(m, n) for m in (1, 2, 3, 4)]
        assert values == sorted(values)


@pytest.mark.parametrize("n", [3, 4])
def test_border_loss_enumeration(n):
    assert border_loss_exhaustive(n) == border_loss_dp(n) == border_loss(n)


def test_border_loss_dp_matches_matrix():
    for n in range(5, 31):
        assert border_loss_dp(n) == border_loss(n), n


@pytest.mark.parametrize("m,n,weight", [(10, 10, 44), (4, 5, 10), (12, 15, 78)])
def test_diagonal_pattern_examples(m, n, weight):
    f = diagonal_pattern(m, n)
    assert f.weight == weight and validate_rdf(CylinderGraph(m, n), f)


def test_diagonal_pattern_is_optimal_for_m4_n5():
    assert diagonal_pattern(4, 5).weight == roman_number(4, 5)


def test_diagonal_pattern_offsets_and_errors():
    for offset in range(5):
        f = diagonal_pattern(6, 10, offset)
        assert f.weight == 28 and validate_rdf(CylinderGraph(6, 10), f)
    with pytest.raises(ValueError):
        diagonal_pattern(5, 12)
    with pytest.raises(ValueError):
        diagonal_pattern(3, 10)


def test_row_dp_matches_exhaustive_and_column_dp():
    for m in range(1, 9):
        for n in range(3, 8):
            if m * n <= 16:
                assert brute_force_gamma_R(m, n, "rows") == brute_force_gamma_R(m, n, "exhaustive"), (m, n)
            if m <= 4:
                assert brute_force_gamma_R(m, n, "rows") == brute_force_gamma_R(m, n, "dp"), (m, n)


def test_row_dp_matches_transfer_matrix():
    for m in (5, 6, 7):
        direct = roman_numbers(m, range(3, 8))
        for n, v in direct.items():
            assert brute_force_gamma_R(m, n, "rows") == v, (m, n)
    assert brute_force_gamma_R(8, 3) == roman_number(8, 3) == 13


def test_row_dp_limits():
    with pytest.raises(CapacityError):
        brute_force_gamma_R(6, 8, "rows")
    assert brute_force_gamma_R(9, 5) == 20


P7_C6_WEIGHT_20 = """\
000202
020000
000020
202000
000020
020000
000202
"""


def test_p7_c6_has_a_weight_20_function():
    # a direct certificate that gamma_R(P_7 x C_6) <= 20
    f = RomanFunction.from_text(P7_C6_WEIGHT_20)
    assert f.weight == 20 and validate_rdf(CylinderGraph(7, 6), f)
    assert roman_number(7, 6) == brute_force_gamma_R(7, 6) == 20
