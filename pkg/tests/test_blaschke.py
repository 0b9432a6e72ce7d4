import cmath

import numpy as np
import pytest

from toeplitz_lab.blaschke import BlaschkeProduct
from toeplitz_lab.blaschke import compose_power_series
from toeplitz_lab.blaschke import divides
from toeplitz_lab.blaschke import evaluate
from toeplitz_lab.blaschke import taylor
from toeplitz_lab.errors import LabError


@pytest.mark.unit
def test_monomial():
    B = BlaschkeProduct.monomial(2)

    assert B.degree == 2
    assert B.vanishes_at_origin
    assert B.origin_only
    np.testing.assert_array_equal(taylor(B, 4), [0, 0, 1, 0, 0])
    assert evaluate(B, 0.5) == pytest.approx(0.25)


@pytest.mark.unit
def test_canonical_order():
    B1 = BlaschkeProduct.from_zeros([0.5j, 0, 0.3])
    B2 = BlaschkeProduct.from_zeros([0.3, 0.5j, 0])

    assert B1 == B2
    assert B1.zeros[0] == 0
    assert B1.max_modulus == pytest.approx(0.5)
    assert not B1.origin_only


@pytest.mark.unit
@pytest.mark.parametrize("zero", [1, 1j, 1.5, -0.8 - 0.8j])
def test_zero_outside_disk(zero):
    with pytest.raises(LabError):
        BlaschkeProduct.from_zeros([zero])


@pytest.mark.unit
def test_unimodular_on_circle():
    B = BlaschkeProduct.from_zeros([0, 0.6, -0.3 + 0.4j])
    points = np.exp(1j * np.linspace(0, 2 * np.pi, 17))

    np.testing.assert_allclose(np.abs(B(points)), 1.0, atol=1e-14)
    for w in B.zeros:
        assert abs(evaluate(B, w)) < 1e-15


@pytest.mark.unit
@pytest.mark.parametrize("z", [0.3, -0.5j, 0.4 + 0.2j])
def test_taylor_matches_evaluation(z):
    B = BlaschkeProduct.from_zeros([0, 0.7, -0.5 + 0.1j])
    coeffs = B.taylor(200)
    series = np.sum(coeffs * z ** np.arange(coeffs.size))

    assert series == pytest.approx(B(z), abs=1e-12)


@pytest.mark.unit
def test_taylor_single_factor():
    B = BlaschkeProduct.from_zeros([0.5])

    np.testing.assert_allclose(
        B.taylor(3), [-0.5, 0.75, 0.375, 0.1875], atol=1e-15
    )
    with pytest.raises(LabError):
        B.taylor(-1)


@pytest.mark.unit
def test_taylor_is_unit_norm():
    B = BlaschkeProduct.from_zeros([0, 0.7j, 0.6])

    assert np.linalg.norm(B.taylor(200)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.unit
def test_divides():
    B = BlaschkeProduct.from_zeros([0])
    Bp = BlaschkeProduct.from_zeros([0, 0.5])

    assert divides(B, Bp)
    assert not divides(Bp, B)
    assert divides(B, B)
    assert not divides(BlaschkeProduct.from_zeros([0, 0]), Bp)


@pytest.mark.unit
def test_product():
    B = BlaschkeProduct.from_zeros([0])
    extra = BlaschkeProduct.from_zeros([0.25])
    product = B * extra

    assert product.degree == 2
    assert B.divides(product)
    assert product(0.5) == pytest.approx(B(0.5) * extra(0.5))


@pytest.mark.unit
def test_json():
    B = BlaschkeProduct.from_zeros([0, 0.1 + 0.2j])

    assert B.to_json() == [[0.0, 0.0], [0.1, 0.2]]
    assert BlaschkeProduct.from_json(B.to_json()) == B


@pytest.mark.unit
def test_compose_with_shift():
    blocks = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
    result = compose_power_series(blocks, BlaschkeProduct.monomial(1), 4)

    np.testing.assert_allclose(result[0], [1, 3, 5, 0, 0])
    np.testing.assert_allclose(result[1], [2, 4, 6, 0, 0])


@pytest.mark.unit
def test_compose_matches_evaluation():
    B = BlaschkeProduct.from_zeros([0, 0.4])
    blocks = [0.5, -1.0 + 1j, 2.0]
    result = compose_power_series(blocks, B, 150)[0]
    z = 0.3 * cmath.exp(0.7j)
    expected = sum(a * B(z) ** n for n, a in enumerate(blocks))

    assert np.sum(result * z ** np.arange(151)) == pytest.approx(expected)
