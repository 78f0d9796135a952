"""Structure of one endomorphism: Krylov spans, minimal polynomial,
primary components, maximal vectors and the rational (companion-block)
normal form.

Everything here is deterministic: vector searches run over kernel bases in
construction order, never over random probes, and each construction asserts
the identity it claims to satisfy.
"""

from __future__ import annotations

from .errors import InternalInvariantError
from .linalg import Mat, block_diag, hstack, poly_at, vstack
from .poly import factorize, pdeg, plcm, pmod, pnormal, ppow


def companion(tower, f):
    """Companion matrix: sends basis vector i to i+1, the last to -coefficients."""
    d = pdeg(f)
    assert d >= 1 and f[-1] == tower.one, "companion needs a monic of positive degree"
    z = tower.zero
    rows = []
    for i in range(d):
        row = [z] * d
        if i > 0:
            row[i - 1] = tower.one
        row[d - 1] = -f[i]
        rows.append(tuple(row))
    return Mat(tower, tuple(rows))


def restrict(g, basis):
    """The matrix of g on the invariant subspace spanned by basis columns."""
    X = basis.solve_right(g @ basis)
    if X is None:
        raise InternalInvariantError(
            "claimed invariant subspace is not invariant",
            {"basis": basis.serialize()},
        )
    return X


def krylov_span(g, v):
    """(basis, annihilator): basis columns v, gv, ..., and the monic least
    annihilator of v under g."""
    F = g.tower
    assert not v.is_zero(), "Krylov span of the zero vector"
    cols = [v]
    w = g @ v
    while True:
        B = hstack(cols)
        x = B.solve_right(w)
        if x is not None:
            ann = tuple(-c for c in x.col_entries(0)) + (F.one,)
            return B, ann
        cols.append(w)
        w = g @ w


def annihilator_of(g, v):
    return krylov_span(g, v)[1]


def minimal_polynomial(g):
    """Least monic polynomial annihilating g (lcm of basis-vector annihilators)."""
    F = g.tower
    n = g.nrows
    mp = (F.one,)
    for j in range(n):
        if pdeg(mp) == n:
            break
        _, ann = krylov_span(g, Mat.identity(F, n).col(j))
        mp = plcm(mp, ann, F)
    if not poly_at(mp, g).is_zero():
        raise InternalInvariantError("minimal polynomial does not annihilate", {})
    return mp


def primary_components(g, factors):
    """[(p, e, basis)] for the factored minimal polynomial; bases span the
    kernels of p(g)^e and their dimensions add to n."""
    out = []
    total = 0
    for p_, e in factors:
        ker = poly_at(ppow(p_, e, g.tower), g).right_kernel_basis()
        basis = hstack(ker)
        out.append((p_, e, basis))
        total += basis.ncols
    if total != g.nrows:
        raise InternalInvariantError(
            "primary component dimensions do not fill the space", {"total": total}
        )
    return out


def maximal_vector(g, mp=None):
    """A vector whose annihilator is the full minimal polynomial."""
    F = g.tower
    if mp is None:
        mp = minimal_polynomial(g)
    v = None
    for p_, e, basis in primary_components(g, factorize(mp, F)):
        # some basis column of the component survives p(g)^(e-1), or the
        # exponent in the minimal polynomial would drop
        probe = poly_at(ppow(p_, e - 1, F), g)
        w = next(
            (basis.col(j) for j in range(basis.ncols) if not (probe @ basis.col(j)).is_zero()),
            None,
        )
        if w is None:
            raise InternalInvariantError(
                "no component vector of full height", {"p": [c.serialize() for c in p_]}
            )
        v = w if v is None else v + w
    if annihilator_of(g, v) != mp:
        raise InternalInvariantError("maximal vector has a smaller annihilator", {})
    return v


def frobenius_form(g):
    """(B, factors): B^(-1) g B is the block diagonal of companion matrices of
    the invariant factors, each dividing the previous."""
    F = g.tower
    n = g.nrows
    blocks = []

    def peel(h, lift):
        v = maximal_vector(h)
        K, ann = krylov_span(h, v)
        blocks.append((lift @ K, ann))
        d, m = pdeg(ann), h.nrows
        if d == m:
            return
        # a functional vanishing on v, hv, ... except the top power
        z, o = F.zero, F.one
        rhs = Mat.column(F, [z] * (d - 1) + [o])
        phi_t = K.T.solve_right(rhs)
        if phi_t is None:
            raise InternalInvariantError("dual functional system is inconsistent", {})
        rows = [phi_t.T]
        for _ in range(d - 1):
            rows.append(rows[-1] @ h)
        comp = vstack(rows).right_kernel_basis()
        if len(comp) != m - d:
            raise InternalInvariantError(
                "invariant complement has wrong dimension", {"got": len(comp)}
            )
        C = hstack(comp)
        peel(restrict(h, C), lift @ C)

    peel(g, Mat.identity(F, n))
    B = hstack([b for b, _ in blocks])
    factors = [f for _, f in blocks]
    for i in range(len(factors) - 1):
        if pmod(factors[i], factors[i + 1], F):
            raise InternalInvariantError("invariant factors do not form a chain", {})
    want = block_diag(F, [companion(F, f) for f in factors])
    if B.inv() @ g @ B != want:
        raise InternalInvariantError("normal form basis does not conjugate", {})
    return B, factors
