import numpy as np
import pytest

from toeplitz_lab.blaschke import BlaschkeProduct
from toeplitz_lab.errors import FrameMismatchError
from toeplitz_lab.errors import StandingAssumptionError
from toeplitz_lab.errors import SymbolDegreeError
from toeplitz_lab.hardy import WoldVector
from toeplitz_lab.hardy import frame_build
from toeplitz_lab.linspace import Subspace
from toeplitz_lab.linspace import orthonormalize
from toeplitz_lab.toeplitz import OperatorMatrix
from toeplitz_lab.toeplitz import c0_decay
from toeplitz_lab.toeplitz import column_multiplier
from toeplitz_lab.toeplitz import multiplier_matrix
from toeplitz_lab.toeplitz import perturbed_backward
from toeplitz_lab.toeplitz import perturbed_forward
from toeplitz_lab.toeplitz import range_in_frame
from toeplitz_lab.toeplitz import rank_one
from toeplitz_lab.toeplitz import settling_step
from toeplitz_lab.toeplitz import toeplitz_adjoint
from toeplitz_lab.toeplitz import toeplitz_forward


@pytest.mark.unit
def test_shift_pair(make_frame):
    frame = make_frame(zeros=(0, 0.4), m=2, N=4)
    T = toeplitz_forward(frame)
    Ts = toeplitz_adjoint(frame)

    np.testing.assert_array_equal(Ts.mat, T.mat.conj().T)
    assert T.exactness == "truncation-leaky"
    assert Ts.exactness == "exact"

    below_top = frame.block_dim * (frame.blocks - 1)
    np.testing.assert_array_equal(
        (Ts @ T).mat[:below_top, :below_top], np.eye(below_top)
    )
    head = np.eye(frame.dim) - (T @ Ts).mat
    np.testing.assert_array_equal(head, frame.head_block(np.eye(frame.dim)))


@pytest.mark.unit
def test_adjoint_needs_zero_at_origin():
    frame = frame_build(
        BlaschkeProduct.from_zeros([0.5]), 1, 3, 40, operator_domain=False
    )

    with pytest.raises(StandingAssumptionError):
        toeplitz_adjoint(frame)


@pytest.mark.unit
def test_multiplier_by_frame_symbol(make_frame):
    frame = make_frame(zeros=(0, 0.5), N=4, D=200)
    op = multiplier_matrix(frame.blaschke, frame)

    cols = frame.block_dim * (frame.blocks - 1)
    np.testing.assert_allclose(
        op.mat[:, :cols], toeplitz_forward(frame).mat[:, :cols], atol=1e-10
    )
    np.testing.assert_allclose(op.column_residuals[:cols], 0, atol=1e-10)
    np.testing.assert_allclose(op.column_residuals[cols:], 1, atol=1e-10)


@pytest.mark.unit
def test_multiplier_degree_checks(shift_frame):
    with pytest.raises(SymbolDegreeError):
        multiplier_matrix(np.ones(70), shift_frame)
    with pytest.raises(SymbolDegreeError):
        multiplier_matrix(BlaschkeProduct.monomial(58), shift_frame)


@pytest.mark.unit
def test_multiplier_by_series(shift_frame):
    op = multiplier_matrix(np.array([2.0, 1.0]), shift_frame)

    expected = 2 * np.eye(4) + toeplitz_forward(shift_frame).mat
    np.testing.assert_allclose(op.mat, expected, atol=1e-14)


@pytest.mark.unit
def test_column_multiplier_by_constant(unit):
    op = column_multiplier(unit(0))

    np.testing.assert_allclose(op.mat, np.eye(4), atol=1e-14)
    np.testing.assert_allclose(op.column_residuals, 0, atol=1e-14)


@pytest.mark.unit
def test_column_multiplier_by_shift(unit, shift_frame):
    op = column_multiplier(unit(1))

    np.testing.assert_allclose(
        op.mat, toeplitz_forward(shift_frame).mat, atol=1e-14
    )
    assert op.column_residuals[-1] == pytest.approx(1.0)


@pytest.mark.unit
def test_range_in_frame(shift_frame, unit):
    R = range_in_frame(BlaschkeProduct.monomial(1), shift_frame)

    assert R.dim == 3
    assert R.contains(unit(1), 1e-12)
    assert not R.contains(unit(0), 1e-12)
    assert range_in_frame(BlaschkeProduct(()), shift_frame).dim == 4


@pytest.mark.unit
def test_range_in_frame_degree_check(shift_frame):
    with pytest.raises(SymbolDegreeError):
        range_in_frame(BlaschkeProduct.monomial(61), shift_frame)

    with pytest.raises(SymbolDegreeError):
        range_in_frame(BlaschkeProduct.from_zeros([0.99]), shift_frame)


@pytest.mark.unit
def test_rank_one(random_vector, shift_frame):
    V, U, x = (random_vector(shift_frame) for _ in range(3))

    image = rank_one(V, U).apply(x)
    np.testing.assert_allclose(image.coords, x.inner(U) * V.coords)

    with pytest.raises(FrameMismatchError):
        rank_one(V, WoldVector.zeros(shift_frame.with_blocks(5)))


@pytest.mark.unit
def test_perturbed_shifts(shift_frame, unit):
    Ts = perturbed_backward(shift_frame, [(unit(0), unit(0))])
    T = perturbed_forward(shift_frame, [(unit(1), unit(0))])

    np.testing.assert_allclose(Ts.apply(unit(0)).coords, -unit(0).coords)
    np.testing.assert_allclose(Ts.apply(unit(1)).coords, unit(0).coords)
    assert T.apply(unit(0)).norm() == 0
    assert T.exactness == "truncation-leaky"


@pytest.mark.unit
def test_operator_algebra(shift_frame, make_frame):
    T = toeplitz_forward(shift_frame)
    Ts = T.adjoint()

    assert Ts.exactness == T.exactness
    assert (T + Ts - T).mat == pytest.approx(Ts.mat)
    assert (Ts @ T).exactness == "truncation-leaky"

    other = toeplitz_forward(make_frame(N=5))
    with pytest.raises(FrameMismatchError):
        T @ other
    with pytest.raises(FrameMismatchError):
        T + other
    with pytest.raises(FrameMismatchError):
        OperatorMatrix(shift_frame, shift_frame, np.eye(3))


@pytest.mark.unit
def test_operator_json(make_frame):
    op = multiplier_matrix(np.array([0.5, 1j]), make_frame(m=2))
    restored = OperatorMatrix.from_json(op.to_json())

    assert restored.frame_in == op.frame_in
    assert restored.exactness == "truncation-leaky"
    np.testing.assert_array_equal(restored.mat, op.mat)


@pytest.mark.unit
def test_c0_decay_settles(shift_frame, unit):
    T = toeplitz_forward(shift_frame)
    norms = c0_decay(T, Subspace.full(shift_frame), unit(3), 4)

    assert norms == pytest.approx([1.0, 1.0, 1.0, 0.0])
    assert settling_step(norms, 1e-10) == 4
    assert settling_step(norms[:3], 1e-10) is None


@pytest.mark.unit
def test_c0_decay_checks(shift_frame, unit):
    T = toeplitz_forward(shift_frame)
    M = orthonormalize([unit(0)])

    with pytest.raises(ValueError, match="positive"):
        c0_decay(T, M, unit(0), 0)
    with pytest.raises(FrameMismatchError):
        c0_decay(T, M.embed(shift_frame.with_blocks(5)), unit(0), 2)
