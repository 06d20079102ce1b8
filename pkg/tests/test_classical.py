import pytest
from hypothesis import given
from hypothesis import strategies as st

from flagorient.classical import (
    FlagDims,
    cross_validate,
    dims_to_theta,
    enumerate_flag_dims,
    mod2_condition,
    orientable_closed_form,
    parse_flag_dims,
    published_closed_form,
    theta_to_dims,
)
from flagorient.orientability import flag_orientable_full
from flagorient.rootsys import ParabolicSubset, RootSystemError, build_root_system


def test_dims_to_theta_examples():
    assert dims_to_theta(FlagDims("A", 4, (2,))) == ParabolicSubset.of({1, 3, 4})
    assert dims_to_theta(FlagDims("D", 5, (), frozenset({"l+"}))) == ParabolicSubset.of({1, 2, 3, 4})
    assert dims_to_theta(FlagDims("D", 5, (), frozenset({"l-"}))) == ParabolicSubset.of({1, 2, 3, 5})
    assert dims_to_theta(FlagDims("B", 3, (1, 2, 3))) == ParabolicSubset.of(())


def test_mod2_condition_examples():
    assert mod2_condition((0, 2, 4, 6))
    assert not mod2_condition((0, 1, 2, 4))
    assert mod2_condition((0, 1, 4, 5))
    with pytest.raises(ValueError):
        mod2_condition((1, 2))
    with pytest.raises(ValueError):
        mod2_condition((0, 2, 2))


@given(st.lists(st.integers(1, 5), min_size=1, max_size=6), st.integers(0, 4))
def test_mod2_condition_depends_only_on_gap_parities(gaps, shift):
    seq = [0]
    for g in gaps:
        seq.append(seq[-1] + g)
    shifted = [0] + [seq[1] + 2 * shift] + [x + 2 * shift for x in seq[2:]]
    assert mod2_condition(seq) == mod2_condition(shifted)


@pytest.mark.parametrize("token,expected", [
    ("A3:2", True), ("A2:1", False), ("A4:2", False),
    ("B3:3", True), ("B3:1", False), ("B4:2", True),
    ("D5:3", True),
])
def test_closed_form_examples(token, expected):
    assert orientable_closed_form(parse_flag_dims(token)) is expected


def test_parse_flag_dims():
    fd = parse_flag_dims("D5:2,l+,l-")
    assert fd.dims == (2,) and fd.half_spin == frozenset({"l+", "l-"}) and str(fd) == "D5:2,l+,l-"
    assert str(parse_flag_dims("B3:1,3")) == "B3:1,3"
    for bad in ("B3:3,1", "B3:4", "A3:l+", "D5:4", "D5:2,l*", "E6:1", "B3:", "B3"):
        with pytest.raises(RootSystemError):
            parse_flag_dims(bad)


@pytest.mark.parametrize("family,l", [("A", 5), ("B", 5), ("C", 5), ("D", 6)])
def test_dims_to_theta_is_a_bijection_onto_proper_subsets(family, l):
    flags = enumerate_flag_dims(family, l)
    thetas = [dims_to_theta(fd) for fd in flags]
    assert len(set(thetas)) == len(thetas) == 2**l - 1
    for fd, th in zip(flags, thetas):
        assert theta_to_dims(family, l, th) == fd


@pytest.mark.parametrize("family", ["A", "B", "C", "D"])
def test_cross_validate_rank_6(family):
    assert cross_validate(family, 6) == []


def test_b_reading_through_last_dimension():
    # For d_k = l the parity condition must include the last gap: B3 with dims (1, 3)
    # has gaps 1, 2 and is non-orientable, while the truncated sequence (0, 1) would pass.
    fd = FlagDims("B", 3, (1, 3))
    general = flag_orientable_full(build_root_system("B3"), dims_to_theta(fd)).orientable
    assert general is False
    assert mod2_condition((0, 1)) is True
    assert orientable_closed_form(fd) is False


def test_isotropic_grassmannians_b_and_c():
    for l in range(2, 8):
        for k in range(1, l + 1):
            fd = FlagDims("B", l, (k,))
            assert orientable_closed_form(fd) == (k == l or k % 2 == 0)
    for l in range(3, 8):
        for k in range(1, l + 1):
            assert orientable_closed_form(FlagDims("C", l, (k,))) == (k % 2 == 1)


def test_published_rule_discrepancies_are_reported():
    assert cross_validate("A", 6, rule="published") == []
    bad = cross_validate("B", 4, rule="published")
    assert any(str(d.flag) == "B2:1" and d.closed_form and not d.general for d in bad)
    assert published_closed_form(parse_flag_dims("A4:2")) is False
