import numpy as np
import pytest

from toeplitz_lab.blaschke import BlaschkeProduct
from toeplitz_lab.errors import FrameMismatchError
from toeplitz_lab.errors import HypothesisError
from toeplitz_lab.errors import LabError
from toeplitz_lab.linspace import Subspace
from toeplitz_lab.structure import nearly_check
from toeplitz_lab.structure import nearly_decompose_thm313
from toeplitz_lab.structure import nearly_defect
from toeplitz_lab.structure import nearly_defect_converse
from toeplitz_lab.structure import nearly_defect_decompose
from toeplitz_lab.structure import rebuild_from_model
from toeplitz_lab.structure import wandering_bound_lemma39


@pytest.fixture
def z(shift_frame):
    return shift_frame.blaschke


@pytest.mark.unit
def test_nearly_check(span, z):
    holds, residual = nearly_check(span(0, 1), z, z)
    assert holds
    assert residual == pytest.approx(0, abs=1e-14)

    holds, residual = nearly_check(span(1), z, z)
    assert not holds
    assert residual == pytest.approx(1.0)


@pytest.mark.unit
def test_nearly_check_frame(span, z):
    with pytest.raises(FrameMismatchError):
        nearly_check(span(0), z * z, z * z)


@pytest.mark.unit
def test_decompose(span, unit, z, shift_frame):
    M = span(0, 1)
    result = nearly_decompose_thm313(M, z, z)

    assert result.p == 1
    assert abs(result.G[0].inner(unit(0))) == pytest.approx(1.0)
    assert result.checks["h_part"] == pytest.approx(0, abs=1e-14)
    assert result.checks["nsub_invariance"] <= 1e-12
    assert result.unitary_residual <= 1e-12

    rebuilt = rebuild_from_model(result.G, result.Nsub, shift_frame)
    assert rebuilt.dim == 2
    assert rebuilt.contains(unit(1), 1e-12)


@pytest.mark.unit
def test_decompose_not_nearly_invariant(span, z):
    with pytest.raises(HypothesisError) as info:
        nearly_decompose_thm313(span(1), z, z)

    assert info.value.hypothesis == "nearly invariance"


@pytest.mark.unit
def test_decompose_divisibility(span, z):
    with pytest.raises(HypothesisError, match="divisibility"):
        nearly_decompose_thm313(span(0), z, BlaschkeProduct.from_zeros([0.5]))


@pytest.mark.unit
def test_decompose_larger_quotient(span, z):
    Bp = BlaschkeProduct.monomial(2)
    result = nearly_decompose_thm313(span(0, 1, 2), z, Bp)

    assert result.p == 2
    assert result.checks["h_part"] == pytest.approx(0, abs=1e-14)


@pytest.mark.unit
@pytest.mark.parametrize(("degree", "dim"), [(1, 1), (2, 2), (3, 3)])
def test_wandering_bound(shift_frame, degree, dim):
    bound = wandering_bound_lemma39(
        Subspace.full(shift_frame), BlaschkeProduct.monomial(degree)
    )

    assert bound.dim == dim
    assert bound.bound == degree
    assert bound.holds


@pytest.mark.unit
def test_wandering_bound_vector_valued(make_frame):
    frame = make_frame(zeros=(0, 0.3), m=2, N=3, D=200)
    Bp = BlaschkeProduct.from_zeros([0, 0.3, -0.5])

    bound = wandering_bound_lemma39(Subspace.full(frame), Bp)

    assert bound.bound == 6
    assert bound.dim == 6
    assert bound.holds


@pytest.mark.unit
def test_defect(span, unit, z):
    report = nearly_defect(span(0, 2), z, z)

    assert report.defect == 1
    assert abs(report.basis[0].inner(unit(1))) == pytest.approx(1.0)
    assert nearly_defect(span(0, 1), z, z).defect == 0


@pytest.mark.unit
def test_defect_case_two(span, z):
    M = span(1)
    result = nearly_defect_decompose(M, z, z)

    assert result.case == "ii"
    assert (result.p, result.n) == (0, 1)
    assert result.checks["reconstruction"] <= 1e-12
    assert result.checks["norm_identity"] <= 1e-12
    assert result.checks["divisibility"] <= 1e-12

    report = nearly_defect_converse(
        result.G, result.K, result.Js, z, z, frame=M.frame
    )
    assert report.passed, report.failures
    assert report.details["case"] == "ii"


@pytest.mark.unit
def test_defect_case_one(span, z):
    M = span(0, 2)
    result = nearly_defect_decompose(M, z, z)

    assert result.case == "i"
    assert (result.p, result.n) == (1, 1)
    assert max(result.checks.values()) <= 1e-12

    report = nearly_defect_converse(result.G, result.K, result.Js, z, z)
    assert report.passed, report.failures
    assert report.details["defect"] == 1


@pytest.mark.unit
def test_defect_of_nearly_invariant(span, z):
    result = nearly_defect_decompose(span(0, 1), z, z)

    assert result.n == 0
    assert result.p == 1
    assert result.checks["reconstruction"] <= 1e-12


@pytest.mark.unit
def test_defect_converse_needs_frame(z, shift_frame):
    with pytest.raises(LabError, match="frame is required"):
        nearly_defect_converse([], Subspace.zero(shift_frame), [], z, z)


@pytest.mark.unit
def test_defect_converse_rejects_overlap(span, unit, z):
    result = nearly_defect_decompose(span(0, 2), z, z)

    with pytest.raises(HypothesisError) as info:
        nearly_defect_converse(result.G, result.K, [unit(0)], z, z)

    assert info.value.hypothesis == "orthonormality"



@pytest.mark.slow
@pytest.mark.parametrize("seed", range(10))
def test_random_wandering_bound(seed, make_frame):
    rng = np.random.Generator(np.random.PCG64(seed))
    frame = make_frame(m=2, N=5)
    Bp = BlaschkeProduct.from_zeros([0, 0.5 * np.exp(2j * np.pi * rng.uniform())])
    width = int(rng.integers(1, frame.dim))
    columns = rng.uniform(-1, 1, (frame.dim, width)) + 1j * rng.uniform(
        -1, 1, (frame.dim, width)
    )

    bound = wandering_bound_lemma39(
        Subspace.from_columns(frame, columns, 1e-10), Bp
    )

    assert bound.holds
    assert bound.dim == min(width, 4)
