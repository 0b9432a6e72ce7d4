import numpy as np
import pytest

from toeplitz_lab.errors import FrameMismatchError
from toeplitz_lab.linspace import Subspace
from toeplitz_lab.linspace import complement
from toeplitz_lab.linspace import intersect
from toeplitz_lab.linspace import invariance_residual
from toeplitz_lab.linspace import krylov_closure
from toeplitz_lab.linspace import ominus
from toeplitz_lab.linspace import orthonormalize
from toeplitz_lab.linspace import principal_angles
from toeplitz_lab.linspace import project
from toeplitz_lab.toeplitz import toeplitz_adjoint
from toeplitz_lab.toeplitz import toeplitz_forward


@pytest.fixture
def span(unit):
    def build(*indices):
        return orthonormalize([unit(n) for n in indices])

    return build


@pytest.mark.unit
def test_orthonormalize_drops_dependent(unit):
    S = orthonormalize([unit(0), 2 * unit(0), unit(0) + unit(1)])

    assert S.dim == 2
    np.testing.assert_allclose(S.onb.conj().T @ S.onb, np.eye(2), atol=1e-15)


@pytest.mark.unit
def test_orthonormalize_empty(shift_frame):
    assert orthonormalize([], frame=shift_frame).dim == 0

    with pytest.raises(ValueError, match="explicit frame"):
        orthonormalize([])


@pytest.mark.unit
def test_orthonormalize_frame_mismatch(unit, shift_frame):
    other = shift_frame.with_blocks(5)

    with pytest.raises(FrameMismatchError):
        orthonormalize([unit(0), unit(0, other)])


@pytest.mark.unit
def test_complement(span, shift_frame):
    S = span(0, 2)
    C = complement(S)

    assert C.dim == 2
    assert complement(C).dim == 2
    assert C.onb.shape == (4, 2)
    assert Subspace.full(shift_frame).dim == 4
    assert Subspace.zero(shift_frame).dim == 0


@pytest.mark.unit
def test_project_and_contains(span, unit):
    S = span(1)
    v = unit(0) + unit(1)

    np.testing.assert_allclose(project(S, v).coords, unit(1).coords)
    np.testing.assert_allclose(
        project(complement(S), v).coords, unit(0).coords
    )
    assert S.contains(unit(1), 1e-12)
    assert not S.contains(v, 1e-12)
    assert complement(S).contains(unit(3), 1e-12)


@pytest.mark.unit
def test_intersect(span):
    shared = intersect(span(0, 1), span(1, 2))

    assert shared.dim == 1
    assert shared.contains(span(1).vectors()[0], 1e-12)
    assert intersect(span(0), span(2)).dim == 0


@pytest.mark.unit
def test_intersect_with_complement(span):
    shared = intersect(span(0, 1, 2), complement(span(0)))

    assert shared.dim == 2
    assert not shared.complemented
    assert intersect(complement(span(0)), complement(span(1))).dim == 2


@pytest.mark.unit
def test_ominus(span, unit):
    rest = ominus(span(0, 1, 2), span(1))

    assert rest.dim == 2
    assert rest.contains(unit(0), 1e-12)
    assert rest.contains(unit(2), 1e-12)


@pytest.mark.unit
def test_principal_angles(shift_frame, unit):
    theta = 0.3
    tilted = orthonormalize([np.cos(theta) * unit(0) + np.sin(theta) * unit(1)])
    S = orthonormalize([unit(0)])

    np.testing.assert_allclose(principal_angles(S, tilted), [theta])
    assert principal_angles(S, Subspace.zero(shift_frame)).size == 0

    with pytest.raises(FrameMismatchError):
        principal_angles(S, Subspace.zero(shift_frame.with_blocks(5)))


@pytest.mark.unit
def test_krylov_closure(shift_frame, unit):
    closure = krylov_closure([toeplitz_adjoint(shift_frame)], [unit(2)])

    assert closure.dim == 3
    adjoint = toeplitz_adjoint(shift_frame).mat
    assert invariance_residual(adjoint, closure) == pytest.approx(0, abs=1e-15)
    assert not closure.contains(unit(3), 1e-12)


@pytest.mark.unit
def test_krylov_closure_without_operators(unit):
    assert krylov_closure([], [unit(1), unit(2)]).dim == 2


@pytest.mark.unit
def test_krylov_closure_frame_mismatch(shift_frame, unit):
    with pytest.raises(FrameMismatchError):
        krylov_closure([toeplitz_forward(shift_frame.with_blocks(5))], [unit(0)])


@pytest.mark.unit
def test_invariance_residual(shift_frame, span):
    adjoint = toeplitz_adjoint(shift_frame).mat

    assert invariance_residual(adjoint, span(0)) == 0
    assert invariance_residual(adjoint, span(1)) == pytest.approx(1.0)
    assert invariance_residual(adjoint, Subspace.zero(shift_frame)) == 0


@pytest.mark.unit
def test_subspace_json(span):
    S = span(0, 3)
    restored = Subspace.from_json(S.to_json())

    assert restored.dim == 2
    assert restored.frame == S.frame
    np.testing.assert_allclose(restored.projector(), S.projector(), atol=1e-15)


@pytest.mark.unit
def test_embed(span, shift_frame):
    larger = shift_frame.with_blocks(6)
    S = span(1, 3).embed(larger)

    assert S.frame == larger
    assert S.dim == 2
