from fractions import Fraction
import math

import pytest

import recdel


def test_tree_index_round_trip():
    assert recdel.canonical_index([1, 1]) == (2, 1)
    assert recdel.canonical_index([1, 2]) == (2, 2)
    assert recdel.tree_from_index(2, 2) == [1, 2]
    assert len(recdel.enumerate_stratum(4)) == 24
    assert recdel.leaf_count([]) == 1
    assert recdel.root_degree([1, 1]) == 2


def test_exact_values_are_fractions():
    assert recdel.stratum_distribution(2, Fraction(1, 2)) == [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)]
    m = recdel.moments(2, "1/2")
    assert m["mean_stratum"] == Fraction(3, 4)
    assert m["variance"] == Fraction(11, 16)


def test_float_mode():
    d = recdel.stratum_distribution(2, 0.3)
    assert d == pytest.approx([0.7, 0.21, 0.09])
    assert recdel.series("P0", 0.3, 3) == pytest.approx([1.0, 0.7, 0.7, 0.637])


def test_series_matches_moments():
    mu = recdel.series("mu", "3/10", 20)
    assert mu[20] == recdel.moments(20, "3/10")["mean_stratum"]


def test_asym_and_bivariate():
    e = recdel.asym("harmonic", 0.3, 1000)
    assert e["regime"] == "subcritical"
    assert e["value"] == pytest.approx(math.log(1.75))
    assert recdel.bivariate_check(0.5, 0.3, 0.5, 200) < 1e-10


def test_simulate_is_deterministic():
    a = recdel.simulate(0.7, 100, 500, seed=42, functionals=["stratum"], threads=1)
    b = recdel.simulate(0.7, 100, 500, seed=42, functionals=["stratum"], threads=3)
    assert a == b
    assert a[0]["functional"] == "stratum"
    one = recdel.simulate(0.7, 10, 1, seed=1)
    assert one[0]["std_error"] is None


def test_verify():
    assert recdel.verify("lifo", "1/2", 4, 5)["uniform"]
    report = recdel.verify("collapse", "1/2", 4, 5)
    assert not report["uniform"]
    assert not report["column_sum_condition"]


def test_errors():
    with pytest.raises(recdel.ResourceError):
        recdel.enumerate_stratum(9)
    with pytest.raises(ValueError):
        recdel.series("P7", "1/2", 3)
