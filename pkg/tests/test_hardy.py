import numpy as np
import pytest

from toeplitz_lab.blaschke import BlaschkeProduct
from toeplitz_lab.errors import FrameMismatchError
from toeplitz_lab.errors import LabError
from toeplitz_lab.errors import StandingAssumptionError
from toeplitz_lab.hardy import H2Element
from toeplitz_lab.hardy import WoldFrame
from toeplitz_lab.hardy import WoldVector
from toeplitz_lab.hardy import concat_frames
from toeplitz_lab.hardy import frame_build
from toeplitz_lab.hardy import from_wold
from toeplitz_lab.hardy import inner
from toeplitz_lab.hardy import join_fibers
from toeplitz_lab.hardy import norm
from toeplitz_lab.hardy import split_fibers
from toeplitz_lab.hardy import tm_basis
from toeplitz_lab.hardy import to_wold


@pytest.mark.unit
def test_standing_assumption():
    B = BlaschkeProduct.from_zeros([0.5])

    with pytest.raises(StandingAssumptionError):
        frame_build(B, 1, 3, 40)

    frame = frame_build(B, 1, 3, 40, operator_domain=False)
    assert frame.dim == 3


@pytest.mark.unit
@pytest.mark.parametrize(("m", "N", "D"), [(1, 0, 40), (-1, 2, 40), (1, 2, 1)])
def test_invalid_sizes(m, N, D):
    with pytest.raises(LabError):
        frame_build(BlaschkeProduct.from_zeros([0, 0.3]), m, N, D)


@pytest.mark.unit
def test_zero_fiber_frame(make_frame):
    frame = make_frame(m=0)

    assert frame.dim == 0
    assert WoldVector.zeros(frame).norm() == 0.0


@pytest.mark.unit
def test_index(make_frame):
    frame = make_frame(zeros=(0, 0.3), m=2, N=3)

    assert frame.shape == (3, 2, 2)
    assert frame.block_dim == 4
    assert frame.index(0, 0, 0) == 0
    assert frame.index(1, 1, 0) == 6
    assert frame.index(2, 1, 1) == frame.dim - 1
    with pytest.raises(LabError):
        frame.index(3, 0, 0)


@pytest.mark.unit
@pytest.mark.parametrize(
    "zeros", [(0,), (0, 0.5), (0, 0.7, -0.6j), (0, 0, 0.4 + 0.4j)]
)
def test_tm_basis_orthonormal(zeros):
    basis = tm_basis(BlaschkeProduct.from_zeros(zeros), 200)

    np.testing.assert_allclose(
        basis.gram(), np.eye(len(zeros)), atol=max(basis.tolerance, 1e-13)
    )


@pytest.mark.unit
def test_tm_basis_rejects_constant():
    with pytest.raises(LabError):
        tm_basis(BlaschkeProduct(()), 10)


@pytest.mark.unit
def test_frame_is_orthonormal(make_frame):
    frame = make_frame(zeros=(0, 0.6), N=4, D=200)

    np.testing.assert_allclose(frame.gram(), np.eye(8), atol=1e-10)


@pytest.mark.unit
def test_unit_vectors_in_shift_frame(unit):
    element = from_wold(unit(2))

    expected = np.zeros(61)
    expected[2] = 1.0
    np.testing.assert_allclose(element.coeffs[0], expected, atol=1e-15)


@pytest.mark.unit
def test_constant_to_wold(shift_frame):
    vector, residual = to_wold(H2Element.constant(0, 1, 60), shift_frame)

    np.testing.assert_allclose(vector.coords, [1, 0, 0, 0])
    assert residual == 0.0


@pytest.mark.unit
def test_to_wold_reports_leftover(shift_frame):
    coeffs = np.zeros(61)
    coeffs[5] = 1.0
    vector, residual = to_wold(H2Element.from_scalar(coeffs), shift_frame)

    assert vector.norm() == 0.0
    assert residual == pytest.approx(1.0)


@pytest.mark.unit
def test_to_wold_frame_mismatch(shift_frame):
    with pytest.raises(FrameMismatchError):
        to_wold(H2Element.constant(0, 2, 60), shift_frame)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(200))
def test_taylor_round_trip(seed, make_frame):
    rng = np.random.Generator(np.random.PCG64(seed))
    l, m = 1 + seed % 3, 1 + seed // 3 % 3
    radii = 0.7 * np.sqrt(rng.uniform(size=l - 1))
    angles = np.exp(2j * np.pi * rng.uniform(size=l - 1))
    frame = make_frame(zeros=[0j, *(radii * angles)], m=m, N=4, D=200)
    coords = rng.uniform(-1, 1, frame.dim) + 1j * rng.uniform(
        -1, 1, frame.dim
    )
    vector = WoldVector(frame, coords)

    element = from_wold(vector)
    back, residual = to_wold(element, frame)

    assert residual <= 1e-8 * vector.norm()
    assert np.linalg.norm(back.coords - coords) <= 1e-8 * vector.norm()
    assert element.norm() == pytest.approx(vector.norm(), rel=1e-8)


@pytest.mark.unit
def test_vector_inner_product(random_vector, shift_frame):
    x, y = random_vector(shift_frame), random_vector(shift_frame)

    assert (2j * x).inner(y) == pytest.approx(2j * x.inner(y))
    assert x.inner(2j * y) == pytest.approx(-2j * x.inner(y))
    assert x.inner(x) == pytest.approx(x.norm() ** 2)
    assert (x + y - y).coords == pytest.approx(x.coords)


@pytest.mark.unit
def test_vector_frame_checks(make_frame, shift_frame):
    other = make_frame(N=5)

    with pytest.raises(FrameMismatchError):
        WoldVector(shift_frame, np.zeros(3))
    with pytest.raises(FrameMismatchError):
        WoldVector.zeros(shift_frame).inner(WoldVector.zeros(other))


@pytest.mark.unit
def test_element_algebra():
    F = H2Element.constant(0, 2, 5)
    G = H2Element.constant(1, 2, 5)

    assert inner(F, G) == 0
    assert norm(F + G) == pytest.approx(np.sqrt(2))
    assert (3 * F - F).norm() == pytest.approx(2.0)
    assert H2Element.from_json(F.to_json()).coeffs.shape == (2, 6)
    with pytest.raises(FrameMismatchError):
        F.inner(H2Element.constant(0, 1, 5))


@pytest.mark.unit
def test_shifts(shift_frame):
    coords = np.array([1.0, 2.0, 3.0, 4.0], dtype=complex)

    np.testing.assert_array_equal(shift_frame.shift_back(coords), [2, 3, 4, 0])
    np.testing.assert_array_equal(
        shift_frame.shift_forward(coords), [0, 1, 2, 3]
    )
    np.testing.assert_array_equal(
        shift_frame.shift_forward(coords, 4), [0, 0, 0, 0]
    )
    np.testing.assert_array_equal(shift_frame.head_block(coords), [1, 0, 0, 0])


@pytest.mark.unit
def test_embed_and_truncate(unit, shift_frame):
    larger = shift_frame.with_blocks(6)
    embedded = unit(3).embed(larger)

    assert embedded.frame == larger
    assert embedded.coords[3] == 1.0

    back, lost = embedded.truncate(shift_frame.with_blocks(3))
    assert lost == pytest.approx(1.0)
    assert back.norm() == 0.0

    with pytest.raises(FrameMismatchError):
        unit(0).embed(shift_frame.with_fiber(2))


@pytest.mark.unit
def test_fiber_join_and_split(make_frame, rng):
    frame = make_frame(zeros=(0, 0.2), m=1, N=3)
    wide = frame.with_fiber(2)
    parts = [rng.uniform(size=frame.dim) + 0j, rng.uniform(size=wide.dim) + 0j]

    joined = join_fibers([frame, wide], parts)
    total = concat_frames(frame, wide)

    assert total.fiber == 3
    assert joined.shape == (total.dim,)
    split = split_fibers(total, joined, [1, 2])
    np.testing.assert_array_equal(split[0], parts[0])
    np.testing.assert_array_equal(split[1], parts[1])

    with pytest.raises(FrameMismatchError):
        concat_frames(frame, wide.with_blocks(4))


@pytest.mark.unit
def test_model_support(make_frame):
    frame = make_frame(zeros=(0, 0.5), m=1, N=3)

    assert WoldVector.unit(frame, 2, 0, 0).is_model_supported(1e-12)
    assert not WoldVector.unit(frame, 0, 1, 0).is_model_supported(1e-12)


@pytest.mark.unit
def test_descriptor(make_frame):
    frame = make_frame(zeros=(0, 0.5j), m=2, N=3, D=90)

    assert WoldFrame.from_descriptor(frame.descriptor()) == frame
    vector = WoldVector.unit(frame, 1, 1, 1)
    restored = WoldVector.from_json(vector.to_json())
    assert restored.frame == frame
    np.testing.assert_array_equal(restored.coords, vector.coords)
