"""The raising maps R, R↓, the double lowering map psi, the Casimir
action, and the exact identity suite relating them to K and B.

psi is constructed twice: once from its action on the refined cells
(canonical) and once as the unique solution of a linear system (oracle).
Disagreement between the two is a hard error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import (
    Matrix,
    Subspace,
    solve_commutant_constraint,
    subspace_sum,
)
from .report import VerificationReport
from .split import SplitApparatus
from .tdsystem import TDSystemInstance


class OperatorError(ValueError):
    """An operator construction contradicts an exact invariant."""


@dataclass(frozen=True)
class OperatorSet:
    R: Matrix
    Rdd: Matrix
    psi: Matrix
    Lambda: Matrix


def _check_raising(op: Matrix, spaces, eigenvalues, a_mat: Matrix, label: str):
    """op must act on spaces[i] as (A - eigenvalue_i I) into spaces[i+1]."""
    d = len(spaces) - 1
    n = a_mat.rows
    eye = Matrix.identity(n)
    for i, s in enumerate(spaces):
        as_shift = (op - (a_mat - eigenvalues[i] * eye)) * s.basis
        if not as_shift.is_zero():
            raise OperatorError(f"{label} does not act as A - theta_i I on level {i}")
        image = Subspace.from_columns(n, op * s.basis)
        target = spaces[i + 1] if i < d else Subspace.zero(n)
        if not target.contains(image):
            raise OperatorError(f"{label} does not raise level {i}")
    if not (op ** (d + 1)).is_zero():
        raise OperatorError(f"{label}^(d+1) != 0")


def build_R(sys: TDSystemInstance, apparatus: SplitApparatus) -> Matrix:
    """R = A - aK - a^-1 K^-1, the raising map of the first split."""
    a = sys.params.a
    r = sys.A - a * apparatus.Kop - (1 / a) * apparatus.Kop.inverse()
    _check_raising(r, apparatus.U, sys.eig.eigenvalues, sys.A, "R")
    return r


def build_Rdd(sys: TDSystemInstance, apparatus: SplitApparatus) -> Matrix:
    """R↓ = A - a^-1 B - a B^-1, the raising map of the second split."""
    a = sys.params.a
    r = sys.A - (1 / a) * apparatus.Bop - a * apparatus.Bop.inverse()
    reversed_evs = tuple(reversed(sys.eig.eigenvalues))
    _check_raising(r, apparatus.Udd, reversed_evs, sys.A, "Rdd")
    return r


def cell_coefficient(q: Fraction, d: int, i: int, j: int) -> Fraction:
    """The scalar by which the lowering map sends cell (i, j) to (i, j-1)."""
    return (q ** (j - i) - q ** (i - j)) * (
        q ** (d - i - j + 1) - q ** (i + j - d - 1)
    )


def build_psi_from_formula(sys: TDSystemInstance, apparatus: SplitApparatus) -> Matrix:
    """Assemble psi from its defining action on the refined cell basis."""
    d, n, q = sys.d, sys.dim, sys.params.q
    domain_cols = []
    image_cols = []
    for (i, j), cell in sorted(apparatus.cells.items()):
        for c in range(cell.image.cols):
            domain_cols.append(cell.image.col(c))
            if j == i:
                image_cols.append((Fraction(0),) * n)
            else:
                coeff = cell_coefficient(q, d, i, j)
                lower = apparatus.cells[(i, j - 1)].image.col(c)
                image_cols.append(tuple(coeff * x for x in lower))
    p = Matrix.from_columns(domain_cols)
    target = Matrix.from_columns(image_cols)
    psi = target * p.inverse()
    for k in apparatus.Kspaces:
        if not (psi * k.basis).is_zero():
            raise OperatorError("psi does not annihilate a K_i space")
    if not (psi ** (d + 1)).is_zero():
        raise OperatorError("psi^(d+1) != 0")
    return psi


def build_psi_from_solver(sys: TDSystemInstance, apparatus: SplitApparatus) -> Matrix:
    """psi as the unique X with XR - RX = (q - q^-1)(K - K^-1), X K_i = 0."""
    q = sys.params.q
    r = build_R(sys, apparatus)
    k = apparatus.Kop
    c = (q - 1 / q) * (k - k.inverse())
    solutions = solve_commutant_constraint(r, c, apparatus.Kspaces)
    if solutions.is_empty:
        raise OperatorError("lowering-map system is inconsistent")
    if not solutions.is_unique:
        raise OperatorError(
            f"lowering-map system has {solutions.freedom} degrees of freedom"
        )
    return solutions.solution


def casimir_action(
    e: Matrix, f: Matrix, k: Matrix, kinv: Matrix, q: Fraction
) -> Matrix:
    """Normalized Casimir action (q - q^-1)^2 ef + q^-1 k + q k^-1.

    Raises unless this equals the partner form with fe, which holds
    exactly when (e, f, k) is a genuine quantum-sl2 action.
    """
    if k * kinv != Matrix.identity(k.rows):
        raise OperatorError("k kinv != I")
    coeff = (q - 1 / q) ** 2
    first = coeff * (e * f) + (1 / q) * k + q * kinv
    second = coeff * (f * e) + q * k + (1 / q) * kinv
    if first != second:
        raise OperatorError("not a U_q(sl2) action: the Casimir forms differ")
    return first


def build_operator_set(sys: TDSystemInstance, apparatus: SplitApparatus) -> OperatorSet:
    """Build R, R↓, psi (formula, cross-checked by the solver), and Lambda."""
    q = sys.params.q
    r = build_R(sys, apparatus)
    rdd = build_Rdd(sys, apparatus)
    psi = build_psi_from_formula(sys, apparatus)
    solved = build_psi_from_solver(sys, apparatus)
    if psi != solved:
        raise OperatorError("formula and solver constructions of psi disagree")
    scale = 1 / (q - 1 / q)
    lam = casimir_action(
        scale * psi, scale * r, apparatus.Kop, apparatus.Kop.inverse(), q
    )
    return OperatorSet(r, rdd, psi, lam)


def _geometric(psi: Matrix, coeff: Fraction, d: int) -> Matrix:
    """sum_{i=0}^{d} coeff^i psi^i."""
    total = Matrix.identity(psi.rows)
    term = Matrix.identity(psi.rows)
    for _ in range(d):
        term = coeff * (term * psi)
        total = total + term
    return total


def run_identity_suite(
    sys: TDSystemInstance, apparatus: SplitApparatus, ops: OperatorSet
) -> VerificationReport:
    """Every exact operator identity in scope, one report entry each."""
    rep = VerificationReport()
    d, n = sys.d, sys.dim
    q, a = sys.params.q, sys.params.a
    eye = Matrix.identity(n)
    K, B = apparatus.Kop, apparatus.Bop
    Ki, Bi = K.inverse(), B.inverse()
    R, Rdd, psi, lam = ops.R, ops.Rdd, ops.psi, ops.Lambda
    A = sys.A
    qi = 1 / q
    ai = 1 / a

    def contained(op, sources, targets, check_id, anchor):
        """op maps each sources[i] into targets[i]; records one entry."""
        for i, s in enumerate(sources):
            image = Subspace.from_columns(n, op(i) * s.basis)
            if not targets[i].contains(image):
                rep.record(check_id, anchor, False, op(i) * s.basis)
                return
        rep.record(check_id, anchor, True)

    prefix_u = [Subspace.zero(n)]
    prefix_udd = [Subspace.zero(n)]
    for i in range(d + 1):
        prefix_u.append(subspace_sum(prefix_u[-1], apparatus.U[i]))
        prefix_udd.append(subspace_sum(prefix_udd[-1], apparatus.Udd[i]))

    # Raising maps on the split decompositions.
    theta = sys.eig.eigenvalues
    contained(
        lambda i: R,
        apparatus.U,
        list(apparatus.U[1:]) + [Subspace.zero(n)],
        "lem.RU.first",
        "R U_i <= U_{i+1}, R U_d = 0",
    )
    contained(
        lambda i: Rdd,
        apparatus.Udd,
        list(apparatus.Udd[1:]) + [Subspace.zero(n)],
        "lem.RU.second",
        "Rdd U_i↓ <= U_{i+1}↓, Rdd U_d↓ = 0",
    )
    for cid, op, spaces, evs, anchor in (
        ("lem.RonU.first", R, apparatus.U, theta, "R acts on U_i as A - theta_i I"),
        (
            "lem.RonU.second",
            Rdd,
            apparatus.Udd,
            tuple(reversed(theta)),
            "Rdd acts on U_i↓ as A - theta_{d-i} I",
        ),
    ):
        residual = Matrix.zeros(n, 0)
        ok = True
        for i, s in enumerate(spaces):
            r = (op - (A - evs[i] * eye)) * s.basis
            if not r.is_zero():
                ok, residual = False, r
                break
        rep.record(cid, anchor, ok, residual if not ok else None)
    rep.check("lem.RU.nilpotent.first", "R^(d+1) = 0", R ** (d + 1))
    rep.check("lem.RU.nilpotent.second", "Rdd^(d+1) = 0", Rdd ** (d + 1))

    # How K and B straddle the other split decomposition.
    contained(
        lambda i: B - (q ** (d - 2 * i)) * eye,
        apparatus.U,
        prefix_u[:-1],
        "lem.KUdd.1",
        "(B - q^(d-2i) I) U_i <= U_0 + ... + U_{i-1}",
    )
    contained(
        lambda i: K - (q ** (d - 2 * i)) * eye,
        apparatus.Udd,
        prefix_udd[:-1],
        "lem.KUdd.2",
        "(K - q^(d-2i) I) U_i↓ <= U_0↓ + ... + U_{i-1}↓",
    )

    # Weyl-type commutation.
    rep.check("lem.KRKinv.1", "K R K^-1 = q^-2 R", K * R * Ki - (qi * qi) * R)
    rep.check("lem.KRKinv.2", "B Rdd B^-1 = q^-2 Rdd", B * Rdd * Bi - (qi * qi) * Rdd)
    rep.check("lem.KpsiKinv.1", "K psi K^-1 = q^2 psi", K * psi * Ki - (q * q) * psi)
    rep.check("lem.KpsiKinv.2", "B psi B^-1 = q^2 psi", B * psi * Bi - (q * q) * psi)
    w = 1 / (q - qi)
    rep.check(
        "lem.AKqWeyl.1",
        "(q KA - q^-1 AK) / (q - q^-1) = a K^2 + a^-1 I",
        w * (q * (K * A) - qi * (A * K)) - (a * (K * K) + ai * eye),
    )
    rep.check(
        "lem.AKqWeyl.2",
        "(q BA - q^-1 AB) / (q - q^-1) = a^-1 B^2 + a I",
        w * (q * (B * A) - qi * (A * B)) - (ai * (B * B) + a * eye),
    )

    # The defining commutators of psi.
    rep.check(
        "eq.psiR",
        "psi R - R psi = (q - q^-1)(K - K^-1)",
        psi * R - R * psi - (q - qi) * (K - Ki),
    )
    rep.check(
        "eq.psiRdd",
        "psi Rdd - Rdd psi = (q - q^-1)(B - B^-1)",
        psi * Rdd - Rdd * psi - (q - qi) * (B - Bi),
    )
    rep.check(
        "eq.Rdiff",
        "Rdd - R = aK + a^-1 K^-1 - a^-1 B - a B^-1",
        (Rdd - R) - (a * K + ai * Ki - ai * B - a * Bi),
    )

    # psi lowers both splits and vanishes exactly on the K_i seeds.
    contained(
        lambda i: psi,
        apparatus.U,
        [Subspace.zero(n)] + list(apparatus.U[:-1]),
        "lem.psiU.first",
        "psi U_i <= U_{i-1}, psi U_0 = 0",
    )
    contained(
        lambda i: psi,
        apparatus.Udd,
        [Subspace.zero(n)] + list(apparatus.Udd[:-1]),
        "lem.psiU.second",
        "psi U_i↓ <= U_{i-1}↓, psi U_0↓ = 0",
    )
    rep.check("lem.psiU.nilpotent", "psi^(d+1) = 0", psi ** (d + 1))
    kernel_ok = True
    witness = None
    for i, kspace in enumerate(apparatus.Kspaces):
        ub = apparatus.U[i].basis
        restricted = psi * ub
        ker = restricted.kernel()
        kernel_space = (
            Subspace.from_columns(n, ub * ker)
            if ker.cols
            else Subspace.zero(n)
        )
        if kernel_space != kspace:
            kernel_ok, witness = False, restricted
            break
    rep.record(
        "lem.psiUkernel", "kernel of psi on U_i equals K_i", kernel_ok, witness
    )

    # Scalar action on each refined cell.
    for cid, lhs, shift, anchor in (
        (
            "cell.Rpsi",
            R * psi,
            0,
            "R psi is scalar on each cell (i, j)",
        ),
        (
            "cell.psiR",
            psi * R,
            1,
            "psi R is scalar on each cell (i, j)",
        ),
    ):
        ok, witness = True, None
        for (i, j), cell in sorted(apparatus.cells.items()):
            coeff = (q ** (j - i + shift) - q ** (i - j - shift)) * (
                q ** (d - i - j + 1 - shift) - q ** (i + j - d - 1 + shift)
            )
            r = (lhs - coeff * eye) * cell.image
            if not r.is_zero():
                ok, witness = False, r
                break
        rep.record(cid, anchor, ok, witness)

    # Casimir action, both structures.
    rep.check(
        "lem.casimir.act1.1",
        "Lambda = psi R + q^-1 K + q K^-1",
        lam - (psi * R + qi * K + q * Ki),
    )
    rep.check(
        "lem.casimir.act1.2",
        "Lambda = R psi + q K + q^-1 K^-1",
        lam - (R * psi + q * K + qi * Ki),
    )
    rep.check(
        "lem.casimir.act2.1",
        "Lambda = psi Rdd + q^-1 B + q B^-1",
        lam - (psi * Rdd + qi * B + q * Bi),
    )
    rep.check(
        "lem.casimir.act2.2",
        "Lambda = Rdd psi + q B + q^-1 B^-1",
        lam - (Rdd * psi + q * B + qi * Bi),
    )
    rep.check(
        "lem.4exp",
        "the Casimir actions of the two module structures coincide",
        (psi * R + qi * K + q * Ki) - (psi * Rdd + qi * B + q * Bi),
    )
    for cid, other in (
        ("lem.cas.comm.psi", psi),
        ("lem.cas.comm.R", R),
        ("lem.cas.comm.K", K),
        ("lem.cas.comm.A", A),
        ("lem.cas.comm.Rdd", Rdd),
        ("lem.cas.comm.B", B),
    ):
        rep.check(cid, "Lambda commutes", lam * other - other * lam)

    # Cubic q-Serre-like relations.
    w2 = q * q + qi * qi
    c2 = (q - qi) ** 2
    rep.check(
        "lem.R2psi.1",
        "R^2 psi - (q^2 + q^-2) R psi R + psi R^2 = -(q - q^-1)^2 Lambda R",
        R * R * psi - w2 * (R * psi * R) + psi * R * R + c2 * (lam * R),
    )
    rep.check(
        "lem.R2psi.2",
        "psi^2 R - (q^2 + q^-2) psi R psi + R psi^2 = -(q - q^-1)^2 Lambda psi",
        psi * psi * R - w2 * (psi * R * psi) + R * psi * psi + c2 * (lam * psi),
    )
    rep.check(
        "lem.R2psidd.1",
        "Rdd^2 psi - (q^2 + q^-2) Rdd psi Rdd + psi Rdd^2 = -(q - q^-1)^2 Lambda Rdd",
        Rdd * Rdd * psi - w2 * (Rdd * psi * Rdd) + psi * Rdd * Rdd + c2 * (lam * Rdd),
    )
    rep.check(
        "lem.R2psidd.2",
        "psi^2 Rdd - (q^2 + q^-2) psi Rdd psi + Rdd psi^2 = -(q - q^-1)^2 Lambda psi",
        psi * psi * Rdd - w2 * (psi * Rdd * psi) + Rdd * psi * psi + c2 * (lam * psi),
    )

    # Lambda is scalar on each homogeneous component.
    ok, witness = True, None
    for i, kspace in enumerate(apparatus.Kspaces):
        if kspace.is_zero():
            continue
        mk = apparatus.mk_space(i)
        scalar = q ** (d - 2 * i + 1) + q ** (2 * i - d - 1)
        r = (lam - scalar * eye) * mk.basis
        if not r.is_zero():
            ok, witness = False, r
            break
    rep.record(
        "lem.Ucasaction",
        "Lambda acts on MK_i as q^(d-2i+1) + q^(2i-d-1)",
        ok,
        witness,
    )

    # The two structures tied together through psi.
    quad_a = [
        (eye - (a * q) * psi) * K,
        (eye - (ai * q) * psi) * B,
        K * (eye - (a * qi) * psi),
        B * (eye - (ai * qi) * psi),
    ]
    quad_b = [
        (eye - (ai * qi) * psi) * Ki,
        (eye - (a * qi) * psi) * Bi,
        Ki * (eye - (ai * q) * psi),
        Bi * (eye - (a * q) * psi),
    ]
    for cid, quad in (("prop.coincide.a", quad_a), ("prop.coincide.b", quad_b)):
        ok, witness = True, None
        for m in quad[1:]:
            if m != quad[0]:
                ok, witness = False, m - quad[0]
                break
        rep.record(cid, "four expressions coincide", ok, witness)

    inv_pairs = (
        ("lem.invertible2.1", a * q),
        ("lem.invertible2.2", ai * q),
        ("lem.invertible2.3", a * qi),
        ("lem.invertible2.4", ai * qi),
    )
    for cid, coeff in inv_pairs:
        series = _geometric(psi, coeff, d)
        rep.check(
            cid,
            "(I - c psi)^-1 is the degree-d geometric series in psi",
            (eye - coeff * psi) * series - eye,
        )

    bk = B * Ki
    kb = K * Bi
    kib = Ki * B
    bik = Bi * K
    rep.check("thm.BK.1", "B K^-1 (I - a^-1 q psi) = I - a q psi",
              bk * (eye - (ai * q) * psi) - (eye - (a * q) * psi))
    rep.check("thm.BK.2", "K B^-1 (I - a q psi) = I - a^-1 q psi",
              kb * (eye - (a * q) * psi) - (eye - (ai * q) * psi))
    rep.check("thm.BK.3", "K^-1 B (I - a^-1 q^-1 psi) = I - a q^-1 psi",
              kib * (eye - (ai * qi) * psi) - (eye - (a * qi) * psi))
    rep.check("thm.BK.4", "B^-1 K (I - a q^-1 psi) = I - a^-1 q^-1 psi",
              bik * (eye - (a * qi) * psi) - (eye - (ai * qi) * psi))

    family = (("psi", psi), ("BK^-1", bk), ("KB^-1", kb), ("K^-1B", kib), ("B^-1K", bik))
    ok, witness = True, None
    for idx, (_, m1) in enumerate(family):
        for _, m2 in family[idx + 1 :]:
            if m1 * m2 != m2 * m1:
                ok, witness = False, m1 * m2 - m2 * m1
                break
        if not ok:
            break
    rep.record(
        "lem.KBcomm",
        "psi, BK^-1, KB^-1, K^-1B, B^-1K mutually commute",
        ok,
        witness,
    )

    lowering_family = (eye - bk, eye - kb, eye - kib, eye - bik)
    ok, witness = True, None
    for m in lowering_family:
        for i in range(d + 1):
            image = Subspace.from_columns(n, m * apparatus.U[i].basis)
            if not prefix_u[i].contains(image):
                ok, witness = False, m * apparatus.U[i].basis
                break
        if not ok:
            break
    rep.record(
        "lem.IKB.maps",
        "I - BK^-1 (and companions) map U_i into U_0 + ... + U_{i-1}",
        ok,
        witness,
    )
    ok, witness = True, None
    for m in lowering_family:
        if not (m ** (d + 1)).is_zero():
            ok, witness = False, m ** (d + 1)
            break
    rep.record(
        "lem.IKB.nilpotent",
        "I - BK^-1 (and companions) are nilpotent with index <= d + 1",
        ok,
        witness,
    )

    ok = all(
        m.rank() == n
        for m in (
            a * eye - ai * bk,
            ai * eye - a * kb,
            a * eye - ai * kib,
            ai * eye - a * bik,
        )
    )
    rep.record(
        "lem.invertible1", "aI - a^-1 BK^-1 (and companions) are invertible", ok
    )

    rep.check("thm.psiequations.1", "psi q (aI - a^-1 BK^-1) = I - BK^-1",
              q * (psi * (a * eye - ai * bk)) - (eye - bk))
    rep.check("thm.psiequations.2", "psi q (a^-1 I - a KB^-1) = I - KB^-1",
              q * (psi * (ai * eye - a * kb)) - (eye - kb))
    rep.check("thm.psiequations.3", "psi (aI - a^-1 K^-1 B) = q (I - K^-1 B)",
              psi * (a * eye - ai * kib) - q * (eye - kib))
    rep.check("thm.psiequations.4", "psi (a^-1 I - a B^-1 K) = q (I - B^-1 K)",
              psi * (ai * eye - a * bik) - q * (eye - bik))

    c1 = (ai * q - a * qi) / (q - qi)
    c2q = (a * q - ai * qi) / (q - qi)
    rep.check(
        "thm.KBquad",
        "a K^2 - c1 KB - c2 BK + a^-1 B^2 = 0",
        a * (K * K) - c1 * (K * B) - c2q * (B * K) + ai * (B * B),
    )
    rep.check(
        "thm.KBinvquad",
        "a B^-2 - c1 K^-1 B^-1 - c2 B^-1 K^-1 + a^-1 K^-2 = 0",
        a * (Bi * Bi) - c1 * (Ki * Bi) - c2q * (Bi * Ki) + ai * (Ki * Ki),
    )

    rep.check(
        "lem.KBfactor.1",
        "q (K - B)(aK - a^-1 B) = q^-1 (aK - a^-1 B)(K - B)",
        q * ((K - B) * (a * K - ai * B)) - qi * ((a * K - ai * B) * (K - B)),
    )
    rep.check(
        "lem.KBfactor.2",
        "q (a^-1 K^-1 - a B^-1)(K^-1 - B^-1) = q^-1 (K^-1 - B^-1)(a^-1 K^-1 - a B^-1)",
        q * ((ai * Ki - a * Bi) * (Ki - Bi)) - qi * ((Ki - Bi) * (ai * Ki - a * Bi)),
    )
    rep.check(
        "lem.KBfactor.3",
        "q (I - K^-1 B)(aI - a^-1 BK^-1) = q^-1 (aI - a^-1 K^-1 B)(I - BK^-1)",
        q * ((eye - kib) * (a * eye - ai * bk))
        - qi * ((a * eye - ai * kib) * (eye - bk)),
    )
    rep.check(
        "lem.KBfactor.4",
        "q (a^-1 I - a KB^-1)(I - B^-1 K) = q^-1 (I - KB^-1)(a^-1 I - a B^-1 K)",
        q * ((ai * eye - a * kb) * (eye - bik))
        - qi * ((eye - kb) * (ai * eye - a * bik)),
    )

    rep.check(
        "lem.KKBB1.1",
        "B = a^2 K + (1 - a^2) K sum a^-i q^-i psi^i",
        B - (a * a) * K - (1 - a * a) * (K * _geometric(psi, ai * qi, d)),
    )
    rep.check(
        "lem.KKBB1.2",
        "B^-1 = a^-2 K^-1 + (1 - a^-2) K^-1 sum a^i q^i psi^i",
        Bi - (ai * ai) * Ki - (1 - ai * ai) * (Ki * _geometric(psi, a * q, d)),
    )
    series_rdd = Matrix.zeros(n, n)
    term = Matrix.identity(n)
    for i in range(d + 1):
        series_rdd = series_rdd + ((ai**i) * (qi**i)) * (K * term) - (
            (a**i) * (q**i)
        ) * (Ki * term)
        term = term * psi
    rep.check(
        "lem.KKBB1.3",
        "Rdd = R + (a - a^-1) sum (a^-i q^-i K - a^i q^i K^-1) psi^i",
        Rdd - R - (a - ai) * series_rdd,
    )
    rep.check(
        "lem.KKBB2.1",
        "K = a^-2 B + (1 - a^-2) B sum a^i q^-i psi^i",
        K - (ai * ai) * B - (1 - ai * ai) * (B * _geometric(psi, a * qi, d)),
    )
    rep.check(
        "lem.KKBB2.2",
        "K^-1 = a^2 B^-1 + (1 - a^2) B^-1 sum a^-i q^i psi^i",
        Ki - (a * a) * Bi - (1 - a * a) * (Bi * _geometric(psi, ai * q, d)),
    )
    series_r = Matrix.zeros(n, n)
    term = Matrix.identity(n)
    for i in range(d + 1):
        series_r = series_r + ((ai**i) * (q**i)) * (Bi * term) - (
            (a**i) * (qi**i)
        ) * (B * term)
        term = term * psi
    rep.check(
        "lem.KKBB2.3",
        "R = Rdd + (a - a^-1) sum (a^-i q^i B^-1 - a^i q^-i B) psi^i",
        R - Rdd - (a - ai) * series_r,
    )

    rep.check(
        "eq.A2psi",
        "A^2 psi - (q^2 + q^-2) A psi A + psi A^2 + (q^2 - q^-2)^2 psi "
        "= -(q - q^-1)^2 Lambda A + (a + a^-1)(q - q^-1)^2 (q + q^-1) I",
        A * A * psi
        - w2 * (A * psi * A)
        + psi * A * A
        + ((q * q - qi * qi) ** 2) * psi
        + c2 * (lam * A)
        - ((a + ai) * c2 * (q + qi)) * eye,
    )
    rep.check(
        "eq.psi2A",
        "psi^2 A - (q^2 + q^-2) psi A psi + A psi^2 = -(q - q^-1)^2 Lambda psi",
        psi * psi * A - w2 * (psi * A * psi) + A * psi * psi + c2 * (lam * psi),
    )

    return rep.sorted()
