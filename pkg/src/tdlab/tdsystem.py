"""Tridiagonal systems of q-Racah type as exact rational matrices.

A validated instance carries the pair (A, A*), the q-Racah parameter
quadruple (d, q, a, b), and the eigendata (eigenvalues, eigenspaces,
primitive idempotents) of both matrices in their standard orderings.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

from .linalg import Matrix, Rational, Subspace, rat
from .report import CheckResult, VerificationReport


class ParameterError(ValueError):
    """A q-Racah parameter constraint is violated."""


class NotDiagonalizableError(ValueError):
    pass


class NotTDSystemError(ValueError):
    pass


@dataclass(frozen=True)
class QRacahParams:
    d: int
    q: Rational
    a: Rational
    b: Rational

    def __post_init__(self):
        if self.d < 1:
            raise ParameterError("diameter d must be a positive integer")
        q, a, b = self.q, self.a, self.b
        if q == 0 or a == 0 or b == 0:
            raise ParameterError("q, a, b must be nonzero")
        if q**4 == 1:
            raise ParameterError("q^4 = 1 is degenerate")
        for i in range(1, self.d + 1):
            if q ** (2 * i) == 1:
                raise ParameterError(f"q^{2 * i} = 1 is degenerate for d = {self.d}")
        forbidden = {q ** (2 * self.d - 2 - 2 * k) for k in range(2 * self.d - 1)}
        if a * a in forbidden:
            raise ParameterError(
                "a^2 lies in {q^(2d-2), q^(2d-4), ..., q^(2-2d)}: "
                "eigenvalues would collide"
            )
        if b * b in forbidden:
            raise ParameterError(
                "b^2 lies in {q^(2d-2), q^(2d-4), ..., q^(2-2d)}: "
                "dual eigenvalues would collide"
            )

    def inverted_a(self) -> "QRacahParams":
        return QRacahParams(self.d, self.q, 1 / self.a, self.b)


def qracah_eigenvalues(params: QRacahParams) -> tuple:
    """Eigenvalue sequences theta_i = a q^(d-2i) + a^-1 q^(2i-d), dually with b."""
    d, q = params.d, params.q
    theta = tuple(
        params.a * q ** (d - 2 * i) + q ** (2 * i - d) / params.a
        for i in range(d + 1)
    )
    theta_star = tuple(
        params.b * q ** (d - 2 * i) + q ** (2 * i - d) / params.b
        for i in range(d + 1)
    )
    for seq, name in ((theta, "eigenvalue"), (theta_star, "dual eigenvalue")):
        if len(set(seq)) != d + 1:
            raise ParameterError(f"{name} sequence is not mutually distinct")
    return theta, theta_star


@dataclass(frozen=True)
class EigenData:
    eigenvalues: tuple
    eigenspaces: tuple
    idempotents: tuple

    @property
    def d(self) -> int:
        return len(self.eigenvalues) - 1

    def reversed(self) -> "EigenData":
        return EigenData(
            tuple(reversed(self.eigenvalues)),
            tuple(reversed(self.eigenspaces)),
            tuple(reversed(self.idempotents)),
        )


def build_eigendata(m: Matrix, eigenvalues: Sequence) -> EigenData:
    """Eigenspaces and primitive idempotents of m for the given spectrum.

    Eigenspaces come from exact kernels of (m - theta I); idempotents from
    the Lagrange product formula.  Raises when the eigenspace dimensions
    do not sum to the ambient dimension.
    """
    if not m.is_square():
        raise ValueError("matrix must be square")
    evs = tuple(rat(t) for t in eigenvalues)
    if len(set(evs)) != len(evs):
        raise ValueError("eigenvalues must be mutually distinct")
    n = m.rows
    eye = Matrix.identity(n)

    spaces = []
    for t in evs:
        ker = (m - t * eye).kernel()
        spaces.append(Subspace.from_columns(n, ker))
    if sum(s.dim for s in spaces) != n:
        raise NotDiagonalizableError("not diagonalizable with the given spectrum")

    idempotents = []
    for i, ti in enumerate(evs):
        e = eye
        for j, tj in enumerate(evs):
            if j != i:
                e = e * (m - tj * eye) * (1 / (ti - tj))
        idempotents.append(e)

    data = EigenData(evs, tuple(spaces), tuple(idempotents))
    _verify_eigendata(m, data)
    return data


def _verify_eigendata(m: Matrix, data: EigenData):
    n = m.rows
    eye = Matrix.identity(n)
    total = Matrix.zeros(n, n)
    recon = Matrix.zeros(n, n)
    for i, (t, e) in enumerate(zip(data.eigenvalues, data.idempotents)):
        for j, e2 in enumerate(data.idempotents):
            prod = e * e2
            expect = e if i == j else Matrix.zeros(n, n)
            if prod != expect:
                raise NotDiagonalizableError("idempotent orthogonality failed")
        if m * e != t * e:
            raise NotDiagonalizableError("A E_i != theta_i E_i")
        if data.eigenspaces[i] != Subspace.from_columns(n, e):
            raise NotDiagonalizableError("idempotent image differs from eigenspace")
        total = total + e
        recon = recon + t * e
    if total != eye:
        raise NotDiagonalizableError("idempotents do not sum to the identity")
    if recon != m:
        raise NotDiagonalizableError("spectral reconstruction failed")


@dataclass(frozen=True)
class TDSystemInstance:
    params: QRacahParams
    A: Matrix
    Astar: Matrix
    eig: EigenData
    eigstar: EigenData

    @property
    def dim(self) -> int:
        return self.A.rows

    @property
    def d(self) -> int:
        return self.params.d


def _tridiagonal_ok(op: Matrix, idempotents: Sequence[Matrix]) -> tuple:
    """Check E_j op E_i = 0 for |i - j| > 1; returns (ok, witness pair)."""
    n = len(idempotents)
    for i in range(n):
        for j in range(n):
            if abs(i - j) > 1 and not (idempotents[j] * op * idempotents[i]).is_zero():
                return False, (i, j)
    return True, None


def _word_closure_dim(a: Matrix, astar: Matrix) -> int:
    """Dimension of the algebra generated by a and astar inside End(V).

    Grown by repeated left multiplication starting from the identity; at
    dimension n^2 the pair is absolutely irreducible.
    """
    n = a.rows

    def vec(m: Matrix) -> list:
        return m.entries()

    span_rows: list = []
    basis_mats: list = []

    def try_add(m: Matrix) -> bool:
        candidate = Matrix(span_rows + [vec(m)])
        if candidate.rank() > len(span_rows):
            span_rows.append(vec(m))
            basis_mats.append(m)
            return True
        return False

    try_add(Matrix.identity(n))
    frontier = list(basis_mats)
    while frontier and len(span_rows) < n * n:
        new_frontier = []
        for w in frontier:
            for g in (a, astar):
                m = g * w
                if try_add(m):
                    new_frontier.append(m)
        frontier = new_frontier
    return len(span_rows)


def verify_td_axioms(
    a: Matrix, astar: Matrix, eig: EigenData, eigstar: EigenData
) -> VerificationReport:
    """Check the four tridiagonal-pair axioms for the given orderings.

    Failures are report entries carrying a witness, not exceptions.
    """
    report = VerificationReport()
    n = a.rows
    ok_diag = sum(s.dim for s in eig.eigenspaces) == n
    ok_diag_star = sum(s.dim for s in eigstar.eigenspaces) == n
    report.record("axiom.i.A", "diagonalizability of A", ok_diag)
    report.record("axiom.i.Astar", "diagonalizability of A*", ok_diag_star)

    ok, pair = _tridiagonal_ok(astar, eig.idempotents)
    report.record(
        "axiom.ii",
        "A* acts block-tridiagonally on the A-eigenspace ordering",
        ok,
        None
        if ok
        else eig.idempotents[pair[1]] * astar * eig.idempotents[pair[0]],
    )
    ok, pair = _tridiagonal_ok(a, eigstar.idempotents)
    report.record(
        "axiom.iii",
        "A acts block-tridiagonally on the A*-eigenspace ordering",
        ok,
        None
        if ok
        else eigstar.idempotents[pair[1]] * a * eigstar.idempotents[pair[0]],
    )

    closure = _word_closure_dim(a, astar)
    report.record(
        "axiom.iv",
        "no common invariant subspace (word closure reaches dim n^2)",
        closure == n * n,
    )
    return report


def find_standard_orderings(
    a: Matrix, astar: Matrix, params: QRacahParams
) -> tuple:
    """Standard eigenvalue orderings matching the q-Racah formulas.

    Returns the pair of ordered eigenvalue sequences.  Also confirms that
    among all orderings of each spectrum, exactly the returned one and
    its reversal satisfy the tridiagonality condition.
    """
    theta, theta_star = qracah_eigenvalues(params)
    try:
        eig = build_eigendata(a, theta)
        eigstar = build_eigendata(astar, theta_star)
    except (NotDiagonalizableError, ValueError) as exc:
        raise NotTDSystemError(
            f"not a TD system for these parameters: {exc}"
        ) from exc

    ok_a, _ = _tridiagonal_ok(astar, eig.idempotents)
    ok_astar, _ = _tridiagonal_ok(a, eigstar.idempotents)
    if not (ok_a and ok_astar):
        raise NotTDSystemError(
            "not a TD system for these parameters: tridiagonality fails "
            "in the q-Racah ordering"
        )

    for op, data, seq in ((astar, eig, theta), (a, eigstar, theta_star)):
        standard = []
        for perm in permutations(range(len(seq))):
            perm_idem = [data.idempotents[p] for p in perm]
            if _tridiagonal_ok(op, perm_idem)[0]:
                standard.append(perm)
        expected = {tuple(range(len(seq))), tuple(reversed(range(len(seq))))}
        if set(standard) != expected:
            raise NotTDSystemError(
                "orderings other than the standard one and its reversal "
                "satisfy tridiagonality"
            )
    return theta, theta_star


def make_instance(a: Matrix, astar: Matrix, params: QRacahParams) -> TDSystemInstance:
    """Validate (a, astar) as a TD system of q-Racah type."""
    theta, theta_star = qracah_eigenvalues(params)
    eig = build_eigendata(a, theta)
    eigstar = build_eigendata(astar, theta_star)
    report = verify_td_axioms(a, astar, eig, eigstar)
    if not report.all_passed:
        failed = ", ".join(e.check_id for e in report.failures)
        raise NotTDSystemError(f"TD axioms failed: {failed}")
    return TDSystemInstance(params, a, astar, eig, eigstar)


def second_inversion(sys: TDSystemInstance) -> TDSystemInstance:
    """Reverse the A-eigenspace ordering; a becomes a^-1 in the formulas."""
    return TDSystemInstance(
        sys.params.inverted_a(),
        sys.A,
        sys.Astar,
        sys.eig.reversed(),
        sys.eigstar,
    )
