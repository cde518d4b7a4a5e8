from fractions import Fraction as F

import numpy as np
import pytest

from cattaneo.atlas import DomainError, VerdictKind, decay_order
from cattaneo.catalog import PRESET_NAMES, UnknownPreset, mu_sequence, preset
from cattaneo.config import (UsageError, csv_text, fmt_real, parse_modes, parse_range, read_config_text,
                             thread_cap)


@pytest.mark.parametrize("name,order", [
    ("example1", F(1, 6)), ("example1-m0", F(1, 2)), ("example2", F(1, 2)),
    ("example2-m0", F(1, 2)), ("example3", F(3, 2)), ("example3-m0", F(1)),
])
def test_preset_verdicts(name, order):
    p = preset(name)
    assert p.expected_verdict == decay_order(p.point)
    assert p.expected_verdict.kind == VerdictKind.Polynomial
    assert p.expected_verdict.order == order
    assert p.point.sigma == 2 and p.point.tau == 1


def test_preset_names_and_unknown():
    assert len(PRESET_NAMES) == 6
    with pytest.raises(UnknownPreset):
        preset("example4")


def test_power_sequences():
    np.testing.assert_array_equal(mu_sequence("power", c=1, p=4, count=3).values(), [1, 16, 81])
    np.testing.assert_array_equal(mu_sequence("power", c=1, p=2, count=5).values(), [1, 4, 9, 16, 25])


def test_explicit_list_sorted_copy():
    vals = [9.0, 1.0, 4.0]
    seq = mu_sequence("list", values=vals)
    np.testing.assert_array_equal(seq.values(), [1, 4, 9])
    assert vals == [9.0, 1.0, 4.0]


def test_sequence_errors():
    with pytest.raises(DomainError):
        mu_sequence("power", count=0)
    with pytest.raises(DomainError):
        mu_sequence("list", values=[0.0, 1.0])


def test_parse_range():
    r = parse_range("1e2:1e8:log:13")
    assert len(r) == 13
    np.testing.assert_allclose(r[[0, 6, 12]], [1e2, 1e5, 1e8])
    np.testing.assert_allclose(parse_range("0:1:lin:3"), [0, 0.5, 1])
    for bad in ("1:2:log", "0:1:log:3", "2:1:lin:3", "1:2:cubic:3", "a:b:log:3"):
        with pytest.raises(UsageError):
            parse_range(bad)


def test_parse_modes():
    assert list(parse_modes("n4:3").values()) == [1, 16, 81]
    assert list(parse_modes("2*n^2:3").values()) == [2, 8, 18]
    assert list(parse_modes("list:4,1").values()) == [1, 4]
    with pytest.raises(UsageError):
        parse_modes("n4")


def test_config_text():
    cfg = read_config_text("# comment\nmu-range = 1e2:1e4:log:3  # trailing\n\nalpha=0\n")
    assert cfg == {"mu_range": "1e2:1e4:log:3", "alpha": "0"}
    with pytest.raises(UsageError):
        read_config_text("alpha 0\n")


def test_thread_cap(monkeypatch):
    monkeypatch.delenv("CATTANEO_THREADS", raising=False)
    assert thread_cap() == 1
    monkeypatch.setenv("CATTANEO_THREADS", "4")
    assert thread_cap() == 4
    monkeypatch.setenv("CATTANEO_THREADS", "many")
    with pytest.raises(UsageError):
        thread_cap()


def test_output_formatting():
    assert fmt_real(0.1) == "0.10000000000000001"
    assert fmt_real(3) == "3"
    assert fmt_real(None) == ""
    assert csv_text(("a", "b"), [(1, 0.5)]) == "a,b\n1,0.5\n"
