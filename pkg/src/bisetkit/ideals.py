"""Left ideals of kB(G, G) attached to sections (P, Q) of G.

The quotient K̄_(P,Q) is identified with the Γ-fixed points of k̄B(G, P/Q),
where Γ is the image of N_G(P, Q) in Out(P/Q) acting on the right.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .bisets import basis_keys, out_of
from .chartab import character_table
from .cyclotomic import Cyclotomic
from .functor import gram_matrix, right_out_action, simple_dim, std_basis
from .linalg import mat_rank, matmul, right_kernel, transpose


def section_group(G, i):
    """The quotient P/Q of section class i, as the group used for k̄B(G, P/Q)."""
    return G.section_quotient(i).group


def _to_model(H, phi):
    """Transport an automorphism of H (image tuple) to the model H/1 used by Out(H)."""
    Qd = H.section_quotient(H.full_section_index())
    return tuple(Qd.proj[phi[Qd.lift[q]]] for q in range(H.order))


def gamma_group(G, i):
    """Γ_G(P, Q) as a sorted tuple of Out(P/Q) element indices."""
    H = section_group(G, i)
    out = out_of(H)
    return tuple(sorted({out.out_class(_to_model(H, phi)) for phi in G.section_gamma(i)}))


def _averaging(G, i):
    H = section_group(G, i)
    B = std_basis(G, H)
    gam = gamma_group(G, i)
    n = len(B)
    E = [[Fraction(0)] * n for _ in range(n)]
    for w in gam:
        R = right_out_action(B, w)
        for r in range(n):
            for c in range(n):
                if R[r][c]:
                    E[r][c] += Fraction(R[r][c], len(gam))
    return B, E


def _column_basis(E):
    """Independent columns of E, as vectors."""
    from .radical import Echelon
    n = len(E)
    ech = Echelon(n)
    out = []
    for c in range(len(E[0]) if E else 0):
        col = [E[r][c] for r in range(n)]
        if ech.add(col):
            out.append(col)
    return out


def fixed_basis(G, i):
    """Basis of k̄B(G, P/Q)^Γ (image of the averaging idempotent)."""
    _, E = _averaging(G, i)
    return _column_basis(E)


def kbar_cofixed_dim(G, i):
    _, E = _averaging(G, i)
    return mat_rank(E) if E else 0


def _as_fraction(x):
    if isinstance(x, Cyclotomic):
        return x.to_fraction()
    return Fraction(x)


def restricted_form(G, i):
    """Gram matrix of the coefficient-of-1 form on the Γ-fixed subspace, in ``fixed_basis`` coordinates."""
    H = section_group(G, i)
    F = fixed_basis(G, i)
    if not F:
        return []
    gram = [[_as_fraction(x) for x in row] for row in gram_matrix(G, H, "coeff1").matrix.rows]
    Ft = F
    Fc = transpose(F)
    return matmul(matmul(Ft, gram), Fc)


def permutation_module_multiplicities(H, gamma):
    """m_j = multiplicity of each irreducible of Out(H) in k[Out(H)/Γ]."""
    out = out_of(H)
    O = out.group
    table = character_table(O)
    gam = frozenset(gamma)
    # permutation character: number of cosets xΓ fixed by w
    cosets = []
    seen = set()
    for x in range(O.order):
        if x in seen:
            continue
        c = frozenset(O.mul[x][g] for g in gam)
        seen |= c
        cosets.append(c)
    perm = []
    for rep in table.classes.reps:
        perm.append(sum(1 for c in cosets if O.mul[rep][next(iter(c))] in c))
    mult = []
    for chi in table:
        ip = table.inner_product(perm, chi.values)
        mult.append(int(ip.to_fraction()))
    return table, mult


@dataclass
class SectionIdealReport:
    section: int
    quotient_order: int
    gamma: tuple
    dim_kbar: int
    dim_fixed: int
    restricted_rank: int
    full_rank: int
    components: list = field(default_factory=list)   # (label, m_j, dim S_{P/Q, W_j}(G))
    predicted: int = 0
    orthogonal: bool = True

    @property
    def holds(self):
        return self.restricted_rank == self.predicted and self.orthogonal

    def as_dict(self):
        return {"section": self.section, "quotient_order": self.quotient_order,
                "gamma": list(self.gamma), "dim_kbar": self.dim_kbar, "dim_fixed": self.dim_fixed,
                "restricted_rank": self.restricted_rank, "full_rank": self.full_rank,
                "components": [list(c) for c in self.components], "predicted": self.predicted,
                "orthogonal": self.orthogonal, "holds": self.holds}


def section_ideal_report(G, i) -> SectionIdealReport:
    """Compare rank of the restricted form with Σ_j m_j dim S_{P/Q, W_j}(G)."""
    H = section_group(G, i)
    gam = gamma_group(G, i)
    B, E = _averaging(G, i)
    n = len(B)
    F = _column_basis(E)
    form = restricted_form(G, i)
    r = mat_rank(form) if form else 0
    full = gram_matrix(G, H, "coeff1").rank() if n else 0
    table, mult = permutation_module_multiplicities(H, gam)
    comps = []
    total = 0
    for chi, m in zip(table, mult):
        if m:
            d = simple_dim(H, chi, G)
            comps.append((chi.label, m, d))
            total += m * d
    # the Γ-fixed part is orthogonal to the kernel of averaging
    orth = True
    if n:
        gram = [[_as_fraction(x) for x in row] for row in gram_matrix(G, H, "coeff1").matrix.rows]
        U = [[Fraction(int(r_ == c)) - E[r_][c] for c in range(n)] for r_ in range(n)]
        if F:
            P = matmul(matmul(F, gram), U)
            orth = all(x == 0 for row in P for x in row)
    return SectionIdealReport(i, H.order, gam, n, len(F), r, full, comps, total, orth)


def filtration_total(G):
    """(Σ over section classes of dim K̄_(P,Q), dim kB(G, G))."""
    total = sum(kbar_cofixed_dim(G, i) for i in range(len(G.section_classes())))
    return total, len(basis_keys(G, G))


def restricted_kernel_dim(G, i):
    form = restricted_form(G, i)
    return len(form) - (mat_rank(form) if form else 0)
