import itertools

import pytest

from privcomp import PrimeField, UsageError
from privcomp.fields import add, is_prime, mul, power

SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17]


def test_modular_add_examples():
    f3 = PrimeField(3)
    assert (f3.element(2) + f3.element(2)).value == 1
    for x in range(3):
        assert (f3.element(x) + f3.zero()).value == x
    f5 = PrimeField(5)
    assert add(f5.element(4), f5.element(3)).value == 2


def test_modular_mul_examples():
    f3 = PrimeField(3)
    assert (f3.element(2) * f3.element(2)).value == 1
    for x in range(3):
        assert (f3.element(x) * f3.one()).value == x
    f7 = PrimeField(7)
    assert mul(f7.element(3), f7.element(5)).value == 1


def test_pow_examples():
    f3 = PrimeField(3)
    assert (f3.element(2) ** 2).value == 1
    # 0^0 = 1: exponent zero means the variable is absent from a monomial
    assert (f3.zero() ** 0).value == 1
    for a in range(3):
        assert power(f3.element(a), 3).value == a


def test_fermat_identity():
    for q in SMALL_PRIMES:
        fq = PrimeField(q)
        for a in range(q):
            assert (fq.element(a) ** q).value == a


@pytest.mark.parametrize("q", SMALL_PRIMES)
def test_field_axioms_exhaustive(q):
    fq = PrimeField(q)
    elems = fq.elements()
    for a, b, c in itertools.product(elems, repeat=3):
        assert ((a + b) + c).value == (a + (b + c)).value
        assert ((a * b) * c).value == (a * (b * c)).value
        assert (a * (b + c)).value == (a * b + a * c).value
    for a in elems:
        assert (a + (-a)).value == 0
        if a.value != 0:
            assert (a * a.inverse()).value == 1


def test_mismatched_fields_rejected():
    a = PrimeField(3).element(1)
    b = PrimeField(5).element(1)
    with pytest.raises(UsageError):
        a + b
    with pytest.raises(UsageError):
        a * b


def test_nonprime_modulus_rejected():
    for q in (0, 1, 4, 6, 9, 100):
        with pytest.raises(UsageError):
            PrimeField(q)
    assert is_prime(257)
    assert not is_prime(255)


def test_negative_exponent_rejected():
    with pytest.raises(UsageError):
        PrimeField(3).element(2) ** -1
