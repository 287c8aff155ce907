import itertools

import pytest

from corrlock.field import GaloisField, field_for, gf_trace, is_prime, least_prime_power, prime_power

FIELD_ORDERS = [q for q in range(2, 82) if prime_power(q) is not None and prime_power(q)[1] <= 4]
EXTENSIONS = [q for q in FIELD_ORDERS if prime_power(q)[1] > 1]


@pytest.mark.parametrize("n, expected", [(2, True), (9, False), (17, True), (1, False), (91, False)])
def test_is_prime(n, expected):
    assert is_prime(n) is expected


@pytest.mark.parametrize("q, expected", [(2, (2, 1)), (8, (2, 3)), (81, (3, 4)), (6, None), (1, None), (12, None)])
def test_prime_power(q, expected):
    assert prime_power(q) == expected


@pytest.mark.parametrize("d, expected", [(5, 5), (6, 7), (10, 11), (12, 13), (15, 16), (2, 2)])
def test_least_prime_power(d, expected):
    assert least_prime_power(d) == expected


def test_trace_examples():
    assert gf_trace(field_for(5), 3) == 3
    gf4 = field_for(4)
    assert gf_trace(gf4, 1) == 0
    omega = gf4.from_vector((0, 1))
    assert gf_trace(gf4, omega) == 1
    assert gf_trace(gf4, (0, 1)) == 1


@pytest.mark.parametrize("q", FIELD_ORDERS)
def test_trace_is_linear_and_onto(q):
    f = field_for(q)
    tr = [f.trace(x) for x in range(q)]
    for x, y in itertools.product(range(q), repeat=2):
        assert tr[f.add(x, y)] == (tr[x] + tr[y]) % f.p
    for c in range(f.p):
        for x in range(q):
            assert tr[f.mul(c, x)] == (c * tr[x]) % f.p
    # a nonzero linear functional takes each value equally often
    assert sorted(tr) == sorted(list(range(f.p)) * (q // f.p))


@pytest.mark.parametrize("q", EXTENSIONS)
def test_extension_field_axioms(q):
    f = field_for(q)
    elems = range(q)
    for x in elems:
        assert f.add(x, f.neg(x)) == 0
        assert f.mul(x, 1) == x
        if x:
            assert any(f.mul(x, y) == 1 for y in elems)
    for x, y, z in itertools.islice(itertools.product(elems, repeat=3), 0, None, max(1, q**3 // 4000)):
        assert f.mul(x, f.add(y, z)) == f.add(f.mul(x, y), f.mul(x, z))
        assert f.mul(f.mul(x, y), z) == f.mul(x, f.mul(y, z))
    # conway moduli are primitive: x generates the multiplicative group
    assert f.multiplicative_order(f.from_vector((0, 1) + (0,) * (f.n - 2))) == q - 1


def test_rejects_unsupported_fields():
    with pytest.raises(ValueError):
        GaloisField(2, 5)
    with pytest.raises(ValueError):
        GaloisField(4, 1)
    with pytest.raises(ValueError):
        GaloisField(2, 2, modulus=(1, 0, 1))  # x^2 + 1 = (x + 1)^2
    with pytest.raises(ValueError):
        field_for(6)


def test_custom_irreducible_modulus():
    f = GaloisField(3, 2, modulus=(1, 0, 1))  # x^2 + 1 is irreducible over GF(3)
    i = f.from_vector((0, 1))
    assert f.mul(i, i) == f.from_vector((2, 0))


def test_degree_above_four_is_rejected():
    with pytest.raises(ValueError):
        field_for(32)
