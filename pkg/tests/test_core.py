import math
import random

import pytest
from hypothesis import given, strategies as st

from calibration_lab import BucketStats, bucket_update, discrepancy, fold_discrepancies, parse_prefix, render_prefix
from calibration_lab.errors import PrefixFormatError

probs = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


@pytest.mark.parametrize("bit,p,expected", [(1, 0.75, 0.25), (0, 0.5, -0.5), (1, 0.0, 1.0)])
def test_discrepancy_examples(bit, p, expected):
    assert discrepancy(bit, p) == expected


@given(st.sampled_from([0, 1]), probs)
def test_discrepancy_is_bounded(bit, p):
    d = discrepancy(bit, p)
    assert d == bit - p
    assert -1.0 <= d <= 1.0


def test_bucket_update_examples():
    s = bucket_update(BucketStats(), 0.5)
    assert (s.count, s.sum) == (1, 0.5)
    s = bucket_update(s, -0.5)
    assert (s.count, s.sum, s.mean) == (2, 0.0, 0.0)


def test_bucket_update_against_direct_sum():
    # three earlier days summing to -1.2, then 0.3
    ds = [-0.5, -0.4, -0.3, 0.3]
    direct = sum(ds)
    s = bucket_update(fold_discrepancies(ds[:3]), ds[3])
    assert s.count == 4
    assert s.sum == pytest.approx(direct, abs=1e-15)
    assert s.sum == pytest.approx(-0.9)
    assert s.mean == pytest.approx(-0.225)


def test_empty_bucket_has_no_mean():
    assert BucketStats().mean is None


@given(st.lists(st.floats(min_value=-1, max_value=1, allow_nan=False), max_size=200))
def test_fold_matches_exact_sum(ds):
    s = fold_discrepancies(ds)
    assert s.count == len(ds)
    assert abs(s.sum - math.fsum(ds)) <= 1e-13
    assert abs(s.sum) <= s.count


def test_fold_order_does_not_matter_beyond_rounding():
    rnd = random.Random(0)
    ds = [rnd.uniform(-1, 1) * 0.7 - 0.3 for _ in range(20_000)]
    forward = fold_discrepancies(ds).sum
    backward = fold_discrepancies(ds[::-1]).sum
    evens, odds = fold_discrepancies(ds[::2]).sum, fold_discrepancies(ds[1::2]).sum
    assert abs(forward - backward) <= 1e-12
    assert abs(evens + odds - forward) <= 1e-12


def test_parse_prefix_examples():
    assert parse_prefix("") == ()
    assert parse_prefix("101") == (1, 0, 1)
    with pytest.raises(PrefixFormatError) as exc:
        parse_prefix("10x")
    assert exc.value.position == 2
    assert "index 2" in str(exc.value)


@given(st.lists(st.sampled_from([0, 1]), max_size=20))
def test_prefix_round_trip(bits):
    assert parse_prefix(render_prefix(bits)) == tuple(bits)


def test_day_index_is_length_plus_one():
    prefix = parse_prefix("0110")
    assert len(prefix) + 1 == 5
