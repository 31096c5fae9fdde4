from fractions import Fraction

import pytest

from bigraded.rings import ZZ, QQ, GF, BadParameter, RingSpec, ring_from_name


def test_basic_arithmetic():
    assert ZZ.add(2, 3) == 5
    assert QQ.mul(Fraction(1, 2), Fraction(2, 3)) == Fraction(1, 3)
    F5 = GF(5)
    assert F5.add(3, 4) == 2
    assert F5.mul(2, 3) == 1
    assert F5.inv(2) == 3
    assert F5.neg(1) == 4


def test_field_flags():
    assert not ZZ.is_field
    assert QQ.is_field
    assert GF(7).is_field
    assert ZZ.char == 0 and QQ.char == 0 and GF(7).char == 7


def test_nonprime_modulus_rejected():
    with pytest.raises(BadParameter):
        GF(4)
    with pytest.raises(BadParameter):
        GF(1)
    with pytest.raises(BadParameter):
        RingSpec("X")


def test_ring_from_name():
    assert ring_from_name("Z") == ZZ
    assert ring_from_name("Q") == QQ
    assert ring_from_name("F3") == GF(3)
    assert ring_from_name("GF(11)") == GF(11)
    with pytest.raises(BadParameter):
        ring_from_name("R")


def test_scalar_text_round_trip():
    assert QQ.parse_scalar(QQ.format_scalar(Fraction(-7, 3))) == Fraction(-7, 3)
    assert ZZ.parse_scalar("-12") == -12
    assert GF(3).parse_scalar("5") == 2
    with pytest.raises(BadParameter):
        ZZ.parse_scalar("1/2")


def test_normalize():
    assert GF(3).normalize(-1) == 2
    assert QQ.normalize(2) == Fraction(2)
    assert ZZ.from_int(-4) == -4
