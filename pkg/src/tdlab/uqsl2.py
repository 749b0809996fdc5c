"""Quantum sl2 machinery: relation checking, the irreducible reference
models L(n, eps), weight theory, and decomposition of the two module
structures carried by a validated instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import Matrix, Subspace, eval_factored_poly, is_direct_sum
from .report import VerificationReport
from .split import SplitApparatus
from .tdsystem import TDSystemInstance


class ModuleError(ValueError):
    pass


def q_int(n: int, q: Fraction) -> Fraction:
    """[n]_q = (q^n - q^-n) / (q - q^-1)."""
    return (q**n - q**-n) / (q - 1 / q)


def q_factorial(n: int, q: Fraction) -> Fraction:
    total = Fraction(1)
    for i in range(1, n + 1):
        total *= q_int(i, q)
    return total


@dataclass(frozen=True)
class UqAction:
    """Matrices for the Chevalley generators e, f, k, k^-1."""

    e: Matrix
    f: Matrix
    k: Matrix
    kinv: Matrix
    q: Fraction

    @property
    def dim(self) -> int:
        return self.k.rows


def casimir_of(action: UqAction) -> Matrix:
    q = action.q
    return (
        ((q - 1 / q) ** 2) * (action.e * action.f)
        + (1 / q) * action.k
        + q * action.kinv
    )


def verify_uq_relations(action: UqAction) -> VerificationReport:
    """Exact check of the defining relations plus their cubic consequences."""
    rep = VerificationReport()
    e, f, k, kinv, q = action.e, action.f, action.k, action.kinv, action.q
    n = action.dim
    eye = Matrix.identity(n)
    qi = 1 / q
    rep.check("uq.kkinv", "k k^-1 = k^-1 k = I", (k * kinv - eye) + (kinv * k - eye))
    rep.check("uq.kek", "k e k^-1 = q^2 e", k * e * kinv - (q * q) * e)
    rep.check("uq.kfk", "k f k^-1 = q^-2 f", k * f * kinv - (qi * qi) * f)
    rep.check(
        "uq.ef",
        "ef - fe = (k - k^-1) / (q - q^-1)",
        e * f - f * e - (1 / (q - qi)) * (k - kinv),
    )
    lam = casimir_of(action)
    w = q * q + qi * qi
    rep.check(
        "uq.f2e",
        "f^2 e - (q^2 + q^-2) fef + ef^2 = -Lambda f",
        f * f * e - w * (f * e * f) + e * f * f + lam * f,
    )
    rep.check(
        "uq.e2f",
        "e^2 f - (q^2 + q^-2) efe + fe^2 = -Lambda e",
        e * e * f - w * (e * f * e) + f * e * e + lam * e,
    )
    return rep


@dataclass(frozen=True)
class IrreducibleModel:
    """The (n+1)-dimensional irreducible module L(n, eps) in its v-basis."""

    n: int
    epsilon: int
    action: UqAction


def build_L_model(n: int, epsilon: int, q: Fraction) -> IrreducibleModel:
    """Explicit matrices for L(n, eps) in the basis v_0 .. v_n."""
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    for i in range(1, n + 1):
        if q ** (2 * i) == 1:
            raise ValueError(f"q^{2 * i} = 1: L({n}, {epsilon}) would be reducible")
    dim = n + 1
    e_rows = [[Fraction(0)] * dim for _ in range(dim)]
    f_rows = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(1, n + 1):
        e_rows[i - 1][i] = epsilon * q_int(n + 1 - i, q)
    for i in range(n):
        f_rows[i + 1][i] = q_int(i + 1, q)
    e, f = Matrix(e_rows), Matrix(f_rows)
    k = Matrix.diagonal([epsilon * q ** (n - 2 * i) for i in range(dim)])
    action = UqAction(e, f, k, k.inverse(), q)
    rep = verify_uq_relations(action)
    if not rep.all_passed:
        raise ModuleError("reference model violates the defining relations")
    expected = epsilon * (q ** (n + 1) + q ** (-n - 1))
    if casimir_of(action) != expected * Matrix.identity(dim):
        raise ModuleError("reference model has the wrong Casimir scalar")
    return IrreducibleModel(n, epsilon, action)


def weight_decomposition(action: UqAction, weights) -> tuple:
    """Weight spaces (eigenspaces of k) and highest weight spaces within them.

    `weights` supplies the known spectrum of k; no eigenvalue discovery
    is attempted.  Returns (weights map, highest weight spaces map).
    """
    n = action.dim
    eye = Matrix.identity(n)
    weight_spaces: dict = {}
    highest: dict = {}
    total = 0
    for lam in weights:
        if lam in weight_spaces:
            continue
        ker = (action.k - lam * eye).kernel()
        space = Subspace.from_columns(n, ker)
        weight_spaces[lam] = space
        total += space.dim
        if space.dim == 0:
            highest[lam] = space
            continue
        inner = (action.e * space.basis).kernel()
        highest[lam] = (
            Subspace.from_columns(n, space.basis * inner)
            if inner.cols
            else Subspace.zero(n)
        )
    if total != n:
        raise ModuleError("supplied weights do not exhaust the space")
    return weight_spaces, highest


@dataclass(frozen=True)
class Component:
    """One homogeneous component MK_i with explicit per-seed bases."""

    i: int
    label: int  # the n of L(n, 1)
    multiplicity: int
    space: Subspace
    bases: tuple  # one Matrix of basis columns v_0 .. v_n per seed vector
    casimir_scalar: Fraction


@dataclass(frozen=True)
class ModuleDecomposition:
    weights: dict
    highest_weight_spaces: dict
    components: tuple


def decompose_into_components(
    action: UqAction, sys: TDSystemInstance, apparatus: SplitApparatus
) -> ModuleDecomposition:
    """Decompose one of the two module structures into irreducibles.

    For each seed vector v in K_i, the basis v_j = gamma_j^-1 tau(A) v
    (gamma_j = (q - q^-1)^j [j]_q!) must satisfy the three L(d-2i, 1)
    action formulas exactly; the components MK_i must direct-sum to V.
    """
    d, n, q = sys.d, sys.dim, sys.params.q
    theta = sys.eig.eigenvalues
    weights = [q ** (d - 2 * i) for i in range(d + 1)]
    weight_spaces, highest = weight_decomposition(action, weights)

    components = []
    for i, kspace in enumerate(apparatus.Kspaces):
        if kspace.is_zero():
            continue
        label = d - 2 * i
        seed_bases = []
        for col in range(kspace.dim):
            v = kspace.basis.col(col)
            vs = []
            for j in range(label + 1):
                gamma = ((q - 1 / q) ** j) * q_factorial(j, q)
                tau = eval_factored_poly(sys.A, theta[i : i + j])
                vs.append(tuple(x / gamma for x in tau.apply(v)))
            basis = Matrix.from_columns(vs)
            _check_irreducible_action(action, basis, label, q)
            seed_bases.append(basis)
        components.append(
            Component(
                i,
                label,
                kspace.dim,
                apparatus.mk_space(i),
                tuple(seed_bases),
                q ** (label + 1) + q ** (-label - 1),
            )
        )

    if not is_direct_sum([c.space for c in components], n):
        raise ModuleError("components do not direct-sum to the whole space")
    return ModuleDecomposition(weight_spaces, highest, tuple(components))


def _check_irreducible_action(action: UqAction, basis: Matrix, n: int, q: Fraction):
    """Verify the L(n, 1) formulas for e, f, k on the given basis columns."""
    dim = basis.rows
    zero = (Fraction(0),) * dim
    cols = basis.columns()
    for j in range(n + 1):
        ev = action.e.apply(cols[j])
        expected = zero if j == 0 else tuple(q_int(n + 1 - j, q) * x for x in cols[j - 1])
        if ev != expected:
            raise ModuleError(f"e action fails on basis vector {j}")
        fv = action.f.apply(cols[j])
        expected = zero if j == n else tuple(q_int(j + 1, q) * x for x in cols[j + 1])
        if fv != expected:
            raise ModuleError(f"f action fails on basis vector {j}")
        kv = action.k.apply(cols[j])
        if kv != tuple(q ** (n - 2 * j) * x for x in cols[j]):
            raise ModuleError(f"k action fails on basis vector {j}")


def first_structure(
    sys: TDSystemInstance, apparatus: SplitApparatus, r: Matrix, psi: Matrix
) -> UqAction:
    """e = (q - q^-1)^-1 psi, f = (q - q^-1)^-1 R, k = K."""
    q = sys.params.q
    scale = 1 / (q - 1 / q)
    return UqAction(scale * psi, scale * r, apparatus.Kop, apparatus.Kop.inverse(), q)


def second_structure(
    sys: TDSystemInstance, apparatus: SplitApparatus, rdd: Matrix, psi: Matrix
) -> UqAction:
    """e = (q - q^-1)^-1 psi, f = (q - q^-1)^-1 R↓, k = B."""
    q = sys.params.q
    scale = 1 / (q - 1 / q)
    return UqAction(scale * psi, scale * rdd, apparatus.Bop, apparatus.Bop.inverse(), q)
