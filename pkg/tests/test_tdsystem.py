from fractions import Fraction

import pytest

from tdlab import forge
from tdlab.linalg import Matrix, Subspace
from tdlab.tdsystem import (
    NotDiagonalizableError,
    NotTDSystemError,
    ParameterError,
    QRacahParams,
    build_eigendata,
    find_standard_orderings,
    qracah_eigenvalues,
    second_inversion,
    verify_td_axioms,
    _tridiagonal_ok,
)

F = Fraction


def params(d, q=2, a=3, b=5):
    return QRacahParams(d, F(q), F(a), F(b))


class TestParams:
    def test_rejects_zero(self):
        with pytest.raises(ParameterError):
            QRacahParams(1, F(0), F(3), F(5))

    def test_rejects_fourth_root_of_unity(self):
        with pytest.raises(ParameterError):
            QRacahParams(1, F(-1), F(3), F(5))

    def test_rejects_colliding_a(self):
        # a = q makes a^2 = q^2 land in the forbidden set at d = 2
        with pytest.raises(ParameterError):
            QRacahParams(2, F(2), F(2), F(5))

    def test_valid(self):
        params(3)


class TestEigenvalues:
    def test_d1_primary(self):
        theta, _ = qracah_eigenvalues(params(1))
        assert theta == (F(37, 6), F(13, 6))

    def test_d1_dual(self):
        _, theta_star = qracah_eigenvalues(params(1))
        assert theta_star == (F(101, 10), F(29, 10))

    def test_d2(self):
        theta, _ = qracah_eigenvalues(params(2))
        assert theta == (F(145, 12), F(10, 3), F(25, 12))


class TestEigendata:
    def test_diagonal(self):
        data = build_eigendata(Matrix.diagonal([2, 3]), [2, 3])
        assert data.idempotents[0] == Matrix.diagonal([1, 0])
        assert data.idempotents[1] == Matrix.diagonal([0, 1])

    def test_w1_eigenline(self):
        w1 = forge.fixture(1)
        data = build_eigendata(w1.A, [F(37, 6), F(13, 6)])
        assert data.eigenspaces[0] == Subspace.from_vectors(2, [(4, 1)])

    def test_nilpotent_rejected(self):
        with pytest.raises(NotDiagonalizableError):
            build_eigendata(Matrix([[0, 1], [0, 0]]), [0, 1])

    def test_invariants(self):
        w1 = forge.fixture(1)
        for m, data in ((w1.A, w1.eig), (w1.Astar, w1.eigstar)):
            total = Matrix.zeros(2, 2)
            recon = Matrix.zeros(2, 2)
            for i, e in enumerate(data.idempotents):
                for j, e2 in enumerate(data.idempotents):
                    assert e * e2 == (e if i == j else Matrix.zeros(2, 2))
                total = total + e
                recon = recon + data.eigenvalues[i] * e
            assert total == Matrix.identity(2)
            assert recon == m


class TestAxioms:
    def test_w1_passes(self):
        w1 = forge.fixture(1)
        report = verify_td_axioms(w1.A, w1.Astar, w1.eig, w1.eigstar)
        assert report.all_passed

    def test_commuting_diagonal_pair_fails_irreducibility(self):
        a = Matrix.diagonal([2, 3])
        astar = Matrix.diagonal([5, 7])
        eig = build_eigendata(a, [2, 3])
        eigstar = build_eigendata(astar, [5, 7])
        report = verify_td_axioms(a, astar, eig, eigstar)
        failed = {e.check_id for e in report.failures}
        assert failed == {"axiom.iv"}

    def test_order_sensitivity(self):
        # permuting a standard ordering by a non-reversal breaks tridiagonality
        sys2 = forge.fixture(2)
        idems = sys2.eig.idempotents
        swapped = (idems[1], idems[0], idems[2])
        assert _tridiagonal_ok(sys2.Astar, idems)[0]
        assert not _tridiagonal_ok(sys2.Astar, swapped)[0]


class TestOrderings:
    def test_w1(self):
        w1 = forge.fixture(1)
        theta, theta_star = find_standard_orderings(w1.A, w1.Astar, w1.params)
        assert theta == (F(37, 6), F(13, 6))
        assert theta_star == (F(101, 10), F(29, 10))

    def test_inverted_a_reverses(self):
        w1 = forge.fixture(1)
        theta, _ = find_standard_orderings(
            w1.A, w1.Astar, w1.params.inverted_a()
        )
        assert theta == (F(13, 6), F(37, 6))

    def test_diagonal_pair_rejected(self):
        with pytest.raises((NotTDSystemError, NotDiagonalizableError)):
            find_standard_orderings(
                Matrix.diagonal([2, 3]), Matrix.diagonal([5, 7]), params(1)
            )


class TestSecondInversion:
    def test_involution(self):
        w1 = forge.fixture(1)
        assert second_inversion(second_inversion(w1)) == w1

    def test_reverses_eigenvalues(self):
        w1 = forge.fixture(1)
        assert second_inversion(w1).eig.eigenvalues == (F(13, 6), F(37, 6))

    def test_inverts_a(self):
        w1 = forge.fixture(1)
        assert second_inversion(w1).params.a == F(1, 3)


def test_eigenvalue_ratio_independence_d3():
    sys3 = forge.fixture(3)
    theta = sys3.eig.eigenvalues
    theta_star = sys3.eigstar.eigenvalues
    ratios = set()
    for seq in (theta, theta_star):
        for i in range(2, sys3.d):
            ratios.add((seq[i - 2] - seq[i + 1]) / (seq[i - 1] - seq[i]))
    assert len(ratios) == 1
