"""POVM coloring: sqrt2-sign trueness, suitability, witnessed falseness,
and perturbation of float targets into exactly suitable decompositions."""

import random
from fractions import Fraction

import pytest

from kscolor.coloring import TruthValue
from kscolor.errors import (
    DegenerateInputError,
    InvalidInputError,
    NotApplicableError,
)
from kscolor.fields import QuadComplex, QuadRational
from kscolor.linalg import QuadHermitian, frob_dist2, psd_check
from kscolor.povm import (
    PovmDecomposition,
    PovmElement,
    classify_element,
    classify_with_witness,
    is_suitable,
    make_suitable_near,
    sqrt2_balance,
    truth_sum,
)

HALF = Fraction(1, 2)


def qc(rat=0, s2=0):
    return QuadComplex(QuadRational(Fraction(rat), Fraction(s2)))


def herm(entries):
    return QuadHermitian([[e if isinstance(e, QuadComplex) else qc(e) for e in row] for row in entries])


def diag(*vals):
    n = len(vals)
    rows = [[qc(0)] * n for _ in range(n)]
    for i, v in enumerate(vals):
        rows[i][i] = v if isinstance(v, QuadComplex) else qc(v)
    return QuadHermitian(rows)


# {I - (1/2)sqrt2 E11, (1/2)sqrt2 E11}: the second element carries the
# positive sqrt2 weight at (1,1) and is the unique TRUE member
SLICE = QuadHermitian(
    [
        [qc(0, HALF), qc(0), qc(0)],
        [qc(0), qc(0), qc(0)],
        [qc(0), qc(0), qc(0)],
    ]
)
REST = QuadHermitian(
    [
        [QuadComplex(QuadRational(1, -HALF)), qc(0), qc(0)],
        [qc(0), qc(1), qc(0)],
        [qc(0), qc(0), qc(1)],
    ]
)


class TestClassifyElement:
    def test_identity_is_not_true(self):
        assert classify_element(diag(1, 1, 1)) is TruthValue.FALSE

    def test_positive_sqrt2_component_is_true(self):
        a11 = QuadComplex(QuadRational(HALF, Fraction(1, 7)))
        assert classify_element(diag(a11, HALF, HALF)) is TruthValue.TRUE

    def test_negative_sqrt2_component_is_not_true(self):
        a11 = QuadComplex(QuadRational(HALF, Fraction(-1, 7)))
        assert classify_element(diag(a11, HALF, HALF)) is TruthValue.FALSE

    def test_psd_enforced_on_element_construction(self):
        with pytest.raises(InvalidInputError):
            PovmElement(diag(1, -1))


class TestDecomposition:
    def test_sum_must_be_exact_identity(self):
        with pytest.raises(InvalidInputError):
            PovmDecomposition([PovmElement(diag(HALF, HALF)), PovmElement(diag(HALF, Fraction(1, 3)))])

    def test_slice_example_is_suitable(self):
        d = PovmDecomposition([PovmElement(REST), PovmElement(SLICE)])
        assert is_suitable(d)
        assert classify_element(d[1]) is TruthValue.TRUE
        assert classify_element(d[0]) is TruthValue.FALSE
        assert truth_sum(d) == 1

    def test_identity_alone_is_not_suitable(self):
        d = PovmDecomposition([PovmElement(diag(1, 1, 1))])
        assert not is_suitable(d)
        with pytest.raises(NotApplicableError):
            truth_sum(d)

    def test_sqrt2_balance_of_any_decomposition_is_zero(self):
        d = PovmDecomposition([PovmElement(REST), PovmElement(SLICE)])
        assert sqrt2_balance(d) == Fraction(0)


class TestClassifyWithWitness:
    def test_true_element_needs_no_witness(self):
        a11 = QuadComplex(QuadRational(HALF, Fraction(1, 7)))
        value, witness = classify_with_witness(diag(a11, HALF, HALF))
        assert value is TruthValue.TRUE
        assert witness is None

    def test_identity_has_no_witness(self):
        value, witness = classify_with_witness(diag(1, 1, 1))
        assert value is TruthValue.UNDETERMINED_NO_WITNESS
        assert witness is None

    def test_complement_of_e11_is_false_with_witness(self):
        value, witness = classify_with_witness(diag(0, 1, 1))
        assert value is TruthValue.FALSE
        assert witness is not None
        assert is_suitable(witness)
        assert any(e.matrix == diag(0, 1, 1) for e in witness)

    def test_saturated_diagonal_edge_case(self):
        value, witness = classify_with_witness(diag(1, HALF, HALF))
        assert value is TruthValue.UNDETERMINED_NO_WITNESS
        assert witness is None

    def test_partial_diagonal_is_false(self):
        value, witness = classify_with_witness(diag(HALF, 1, 1))
        assert value is TruthValue.FALSE
        assert is_suitable(witness)

    def test_rank1_complement_uses_scaled_split(self):
        # A = I - P for the projector P onto (1,1,0): complement is rank 1
        a = herm(
            [
                [HALF, -HALF, 0],
                [-HALF, HALF, 0],
                [0, 0, 1],
            ]
        )
        value, witness = classify_with_witness(a)
        assert value is TruthValue.FALSE
        assert witness is not None
        assert is_suitable(witness)
        total = QuadHermitian.zeros(3)
        for e in witness:
            total = total + e.matrix
        assert total == QuadHermitian.identity(3)

    def test_witness_membership(self):
        value, witness = classify_with_witness(diag(HALF, 1, 1))
        assert any(e.matrix == diag(HALF, 1, 1) for e in witness)

    def test_psd_forces_vanishing_row_when_corner_is_zero(self):
        # mechanical core of the no-witness case: if a PSD matrix has zero
        # (1,1) entry, its first row and column vanish
        m = herm(
            [
                [0, Fraction(1, 5), 0],
                [Fraction(1, 5), 1, 0],
                [0, 0, 1],
            ]
        )
        assert not psd_check(m)
        ok = herm(
            [
                [0, 0, 0],
                [0, 1, 0],
                [0, 0, 1],
            ]
        )
        assert psd_check(ok)


def float_identity(n):
    return [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]


def random_float_povm(rng, n, m):
    """Random m-element POVM from a random orthonormal basis grouped into
    m bins and blended toward I/m."""
    basis = []
    while len(basis) < n:
        raw = [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(n)]
        for u in basis:
            ip = sum(a.conjugate() * b for a, b in zip(u, raw))
            raw = [b - ip * a for a, b in zip(u, raw)]
        nrm = sum(abs(x) ** 2 for x in raw) ** 0.5
        if nrm > 1e-6:
            basis.append([x / nrm for x in raw])
    groups = [[] for _ in range(m)]
    order = list(range(n))
    rng.shuffle(order)
    for pos, k in enumerate(order):
        groups[pos % m].append(k)
    blend = 0.1 + 0.8 * rng.random()
    mats = []
    for grp in groups:
        mat = [[0j] * n for _ in range(n)]
        for k in grp:
            v = basis[k]
            for i in range(n):
                for j in range(n):
                    mat[i][j] += v[i] * v[j].conjugate()
        for i in range(n):
            for j in range(n):
                mat[i][j] *= 1.0 - blend
            mat[i][i] += blend / m
        mats.append(mat)
    return mats


class TestMakeSuitableNear:
    def test_two_half_identities(self):
        half_i = [[0.5, 0, 0], [0, 0.5, 0], [0, 0, 0.5]]
        dec = make_suitable_near([half_i, half_i], Fraction(1, 10**4))
        assert is_suitable(dec)
        assert truth_sum(dec) == 1
        total = QuadHermitian.zeros(3)
        for e in dec:
            assert psd_check(e.matrix)
            total = total + e.matrix
        assert total == QuadHermitian.identity(3)

    def test_identity_needs_split(self):
        with pytest.raises(DegenerateInputError):
            make_suitable_near([float_identity(3)], Fraction(1, 10**4))
        dec = make_suitable_near([float_identity(3)], Fraction(1, 10**4), allow_split=True)
        assert is_suitable(dec)
        assert len(dec) == 2

    def test_exactly_suitable_input_passes_through(self):
        d = PovmDecomposition([PovmElement(REST), PovmElement(SLICE)])
        assert make_suitable_near(d, Fraction(1, 10**6)) is d

    def test_exact_but_unsuitable_input_is_perturbed(self):
        d = PovmDecomposition(
            [PovmElement(diag(HALF, HALF, HALF)), PovmElement(diag(HALF, HALF, HALF))]
        )
        out = make_suitable_near(d, Fraction(1, 100))
        assert is_suitable(out)

    def test_distance_bound_exact(self):
        rng = random.Random(11)
        eps = Fraction(1, 100)
        targets = random_float_povm(rng, 3, 3)
        dec = make_suitable_near(targets, eps)
        assert is_suitable(dec)
        for e, t in zip(dec, targets):
            # rationalized-target comparison: rebuild the target exactly
            rows = []
            for i in range(3):
                row = []
                for j in range(3):
                    row.append(
                        QuadComplex(
                            QuadRational(Fraction(t[i][j].real)),
                            QuadRational(Fraction(t[i][j].imag)),
                        )
                    )
                rows.append(row)
            texact = QuadHermitian(rows)
            assert frob_dist2(e.matrix, texact) <= eps * eps

    def test_random_povms_all_dimensions(self):
        rng = random.Random(2)
        for n in (2, 3, 4):
            for m in (2, 3, 5):
                targets = random_float_povm(rng, n, m)
                dec = make_suitable_near(targets, Fraction(1, 100))
                assert is_suitable(dec)
                assert len(dec) == m
                total = QuadHermitian.zeros(n)
                for e in dec:
                    assert psd_check(e.matrix)
                    total = total + e.matrix
                assert total == QuadHermitian.identity(n)

    def test_rejects_bad_sum(self):
        bad = [[[0.5, 0, 0], [0, 0.5, 0], [0, 0, 0.5]]]
        with pytest.raises(InvalidInputError):
            make_suitable_near(bad, Fraction(1, 100))
