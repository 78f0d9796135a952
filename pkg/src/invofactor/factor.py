"""Factor similitudes of finite classical groups as h1 * h2, where h1 is a
twist-1 involution of ratio 1 and h2 is a twist-1 map squaring to the
similitude ratio beta.

The space splits into mutually orthogonal invariant blocks of three shapes,
driven by how each irreducible factor p of the minimal polynomial sits
under the ratio-twisted reciprocal p -> p~ (roots move to beta/conj(root)):

- paired:       p~ != p.  The p- and p~-primary components pair off; in a
                dual-normalized basis the involution is
                [[0, X], [conj(X)^(-1), 0]] for any symmetric X intertwining
                the one-sided action a with its transpose (a X = X a^T).
- cyclic:       p~ = p and a full-height vector v spans a nondegenerate
                invariant subspace Z; g^i v -> beta^i g^(-i) v defines the
                involution on Z.
- cyclic pair:  p~ = p but the cyclic spaces met are degenerate; two of them
                pair through a unit gamma with gamma * gamma~ = 1 and the
                involution is the v-side cyclic map plus a gamma-corrected
                cyclic map on the partner side.

Each block asserts the identities it is built to satisfy; the assembled
certificate re-verifies all defining identities in the ambient space before
it is returned.  All searches are deterministic, so factoring the same
element twice yields byte-identical certificates.
"""

from __future__ import annotations

import itertools
import random

from .decomp import companion, frobenius_form, krylov_span, minimal_polynomial, restrict
from .errors import (
    DetRefinementError,
    InputError,
    InternalInvariantError,
    NotInGroupError,
    SingularMatrixError,
)
from .forms import form_from_descriptor
from .linalg import Mat, block_diag, hstack, mat_from_serialized, poly_at, vstack
from .poly import (
    factorize,
    padd,
    pdeg,
    pinvmod,
    pmod,
    pmul,
    pmulc,
    pnormal,
    ppow,
    pserialize,
    pvar,
    twisted_reciprocal,
)

CERT_FORMAT = "invofactor-cert-v1"


class _Block:
    __slots__ = ("lift", "t", "data")

    def __init__(self, lift, t, data):
        self.lift = lift
        self.t = t
        self.data = data


def _val(G, u, v):
    return (u.T @ G @ v.conj())[0, 0]


def _assert_block(form, beta, ahat, ghat, t, label):
    F = form.tower
    eye = Mat.identity(F, t.nrows)
    if t @ t.conj() != eye:
        raise InternalInvariantError(f"{label} block: t * conj(t) != 1", {"t": t.serialize()})
    if t.T @ ghat @ t.conj() != ghat.conj() * form.eps_elem:
        raise InternalInvariantError(
            f"{label} block: t is not a ratio-1 twist-1 map of the block Gram",
            {"t": t.serialize(), "gram": ghat.serialize()},
        )
    # mat(t g t) = T conj(C) conj(T); the first check pins conj(T) = T^(-1)
    if t @ ahat.conj() @ t.conj() != ahat.inv() * beta:
        raise InternalInvariantError(
            f"{label} block: t g t != beta * g^(-1)", {"t": t.serialize()}
        )


def _kernel_matrix(f, a):
    cols = poly_at(f, a).right_kernel_basis()
    if not cols:
        raise InternalInvariantError("expected a nonzero kernel", {"poly": pserialize(f)})
    return hstack(cols)


def _paired_block(form, beta, a, G, p_, e, ps, fac):
    F = form.tower
    es = next((e2 for p2, e2 in fac if p2 == ps), None)
    if es is None or es != e:
        raise InternalInvariantError(
            "reciprocal factor missing or with mismatched multiplicity",
            {"factor": pserialize(p_), "reciprocal": pserialize(ps)},
        )
    U = _kernel_matrix(ppow(p_, e, F), a)
    Us = _kernel_matrix(ppow(ps, es, F), a)
    r = U.ncols
    if Us.ncols != r:
        raise InternalInvariantError("paired components differ in dimension", {})
    aU = restrict(a, U)
    M = U.T @ G @ Us.conj()  # M[i, k] = <u_i, u'_k>
    try:
        coeffs = M.conj().inv() * form.eps_elem
    except SingularMatrixError:
        raise InternalInvariantError("pairing between dual components is degenerate", {})
    B1 = hstack([U, Us @ coeffs])
    eye = Mat.identity(F, r)
    z = Mat.zeros(F, r, r)
    jhat = vstack([hstack([z, eye * form.eps_elem]), hstack([eye, z])])
    if B1.T @ G @ B1.conj() != jhat:
        raise InternalInvariantError("dual-normalized basis has wrong Gram", {})
    ahat = restrict(a, B1)
    if ahat != block_diag(F, [aU, aU.conj().T.inv() * beta]):
        raise InternalInvariantError("dual-side action has unexpected matrix", {})
    X = symmetric_conjugator(aU)
    t = vstack([hstack([z, X]), hstack([X.conj().inv(), z])])
    _assert_block(form, beta, ahat, jhat, t, "paired")
    data = {
        "case": "paired",
        "dim": 2 * r,
        "factor": pserialize(p_),
        "reciprocal": pserialize(ps),
        "multiplicity": e,
        "intertwiner": X.serialize(),
    }
    return B1, t, data


def _cyclic_t(F, beta, C):
    cinv = C.inv()
    col = Mat.column(F, [F.one] + [F.zero] * (C.nrows - 1))
    cols = [col]
    for _ in range(C.nrows - 1):
        col = (cinv @ col) * beta
        cols.append(col)
    return hstack(cols)


def _cyclic_block(form, beta, a, G, K, ann, p_, e):
    F = form.tower
    C = companion(F, ann)
    ahat = restrict(a, K)
    if ahat != C:
        raise InternalInvariantError("Krylov basis does not give the companion matrix", {})
    ghat = K.T @ G @ K.conj()
    t = _cyclic_t(F, beta, C)
    _assert_block(form, beta, ahat, ghat, t, "cyclic")
    data = {"case": "cyclic", "dim": K.ncols, "annihilator": pserialize(ann)}
    return K, t, data


def _poly_star(r_, beta_times_tinv, pe, F):
    # coefficientwise conj composed with T -> beta * T^(-1), inside E[T]/(p^e)
    acc = ()
    pw = (F.one,)
    for ck in r_:
        if ck:
            acc = padd(acc, pmulc(pw, ck.conj()), F)
        pw = pmod(pmul(pw, beta_times_tinv, F), pe, F)
    return pmod(acc, pe, F)


def _cyclic_pair_block(form, beta, a, G, Kx, Ky, p_, e):
    F = form.tower
    pe = ppow(p_, e, F)
    D = pdeg(pe)
    C = companion(F, pe)
    x, y = Kx.col(0), Ky.col(0)
    # powers g^m y for m in [-(D-1), 2D-2]
    ymats = {0: y}
    ainv = a.inv()
    for m in range(1, 2 * D - 1):
        ymats[m] = a @ ymats[m - 1]
    for m in range(1, D):
        ymats[-m] = ainv @ ymats[-(m - 1)]
    # gamma = sum_k c_k T^k must satisfy, for every shift i,
    #   sum_k conj(c_k) <x, g^(i+k) y> = beta^i <g^(-i) y, x>
    # (the cross-pairing conditions of the corrected involution)
    xg = {m: _val(G, x, ymats[m]) for m in range(-(D - 1), 2 * D - 1)}
    rows = []
    rhs = []
    for i in range(-(D - 1), D):
        rows.append([xg[i + k] for k in range(D)])
        rhs.append((beta**i) * _val(G, ymats[-i], x))
    sol = Mat.from_rows(F, rows).solve_right(Mat.column(F, rhs))
    if sol is None:
        raise InternalInvariantError("pairing correction system is unsolvable", {})
    gamma = pmod(pnormal(c.conj() for c in sol.col_entries(0)), pe, F)
    if not pmod(gamma, p_, F):
        raise InternalInvariantError(
            "pairing correction is not a unit", {"gamma": pserialize(gamma)}
        )
    tinv = pinvmod(pvar(F), pe, F)
    if tinv is None:
        raise InternalInvariantError("shift is not invertible mod the annihilator", {})
    btinv = pmod(pmulc(tinv, beta), pe, F)
    gstar = _poly_star(gamma, btinv, pe, F)
    if pmod(pmul(gamma, gstar, F), pe, F) != (F.one,):
        raise InternalInvariantError(
            "gamma times its star is not 1", {"gamma": pserialize(gamma)}
        )
    Gam = poly_at(gamma, C)
    Tx = _cyclic_t(F, beta, C)
    t = block_diag(F, [Tx, Gam @ Tx])
    B1 = hstack([Kx, Ky])
    ghat = B1.T @ G @ B1.conj()
    if not ghat.det():
        raise InternalInvariantError("paired cyclic Gram is degenerate", {})
    ahat = restrict(a, B1)
    if ahat != block_diag(F, [C, C]):
        raise InternalInvariantError("paired cyclic action is not two companions", {})
    _assert_block(form, beta, ahat, ghat, t, "cyclic pair")
    data = {
        "case": "cyclic_pair",
        "dim": 2 * D,
        "annihilator": pserialize(pe),
        "gamma": pserialize(gamma),
    }
    return B1, t, data


def _candidate_vectors(F, U, limit=512):
    # deterministic scan: basis columns, then scaled pairwise sums; by
    # polarization this reaches a non-isotropic vector whenever the restricted
    # form has one on a plain-column span (odd characteristic)
    cols = [U.col(j) for j in range(U.ncols)]
    yield from cols
    count = 0
    scalars = [c for c in F.elements() if c]
    for i in range(len(cols)):
        for j in range(i + 1, len(cols)):
            for c in scalars:
                yield cols[i] + cols[j] * c
                count += 1
                if count >= limit:
                    return


def _self_paired_block(form, beta, a, G, p_, e):
    F = form.tower
    pe = ppow(p_, e, F)
    U = _kernel_matrix(pe, a)
    probe = poly_at(ppow(p_, e - 1, F), a)
    # prefer a full-height vector spanning a nondegenerate cyclic space
    x = None
    for v in _candidate_vectors(F, U):
        if (probe @ v).is_zero():
            continue
        if x is None:
            x = v
        K, ann = krylov_span(a, v)
        if ann != pe:
            raise InternalInvariantError("full-height vector has a smaller annihilator", {})
        if (K.T @ G @ K.conj()).det():
            return _cyclic_block(form, beta, a, G, K, ann, p_, e)
    if x is None:
        raise InternalInvariantError("component has no full-height vector", {})
    Kx, annx = krylov_span(a, x)
    w = probe @ x
    y = next((U.col(j) for j in range(U.ncols) if _val(G, w, U.col(j))), None)
    if y is None:
        raise InternalInvariantError(
            "no partner pairs with the degenerate cyclic space", {}
        )
    Ky, anny = krylov_span(a, y)
    if anny != pe:
        raise InternalInvariantError("pairing partner is not full height", {})
    if (Ky.T @ G @ Ky.conj()).det():
        return _cyclic_block(form, beta, a, G, Ky, anny, p_, e)
    return _cyclic_pair_block(form, beta, a, G, Kx, Ky, p_, e)


def _orthocomplement(G, basis):
    ker = (basis.T @ G).right_kernel_basis()
    if not ker:
        return None
    return hstack([k.conj() for k in ker])


def _split(form, beta, a, G, lift, blocks):
    F = form.tower
    mp = minimal_polynomial(a)
    fac = factorize(mp, F)
    hit = next(((p_, e) for p_, e in fac if twisted_reciprocal(p_, beta) != p_), None)
    if hit is not None:
        p_, e = hit
        basis, t, data = _paired_block(form, beta, a, G, p_, e, twisted_reciprocal(p_, beta), fac)
    else:
        p_, e = fac[0]
        basis, t, data = _self_paired_block(form, beta, a, G, p_, e)
    data["basis"] = (lift @ basis).serialize()
    data["local_involution"] = t.serialize()
    blocks.append(_Block(lift @ basis, t, data))
    comp = _orthocomplement(G, basis)
    if comp is None:
        if basis.ncols != a.nrows:
            raise InternalInvariantError("block does not close the space", {})
        return
    Gc = comp.T @ G @ comp.conj()
    if not Gc.det():
        raise InternalInvariantError("orthogonal complement is degenerate", {})
    _split(form, beta, restrict(a, comp), Gc, lift @ comp, blocks)


def _refine_dets(form, blocks):
    F = form.tower
    n = form.n
    if form.kind != "orthogonal":
        raise InputError("determinant refinement applies to orthogonal spaces")
    if n % 2:
        raise InputError("determinant refinement is defined for even dimension")
    target = F.one if (n // 2) % 2 == 0 else -F.one
    for b in blocks:
        b.data["t_det"] = b.t.det().serialize()
    total = blocks[0].t.det()
    for b in blocks[1:]:
        total = total * b.t.det()
    if total == target:
        return
    flip = next((b for b in blocks if b.t.nrows % 2 == 1), None)
    if flip is None:
        raise DetRefinementError(
            "no reachable first factor has the required determinant: all blocks have "
            "even dimension, so per-block determinants are fixed under sign flips",
            {
                "target": target.serialize(),
                "achieved": total.serialize(),
                "blocks": [dict(b.data) for b in blocks],
            },
        )
    flip.t = -flip.t
    flip.data["sign_flipped"] = True
    flip.data["t_det"] = flip.t.det().serialize()
    flip.data["local_involution"] = flip.t.serialize()


class FactorCert:
    """A factorization g = h1 * h2 with its per-block construction transcript."""

    __slots__ = ("form", "g", "beta", "h1", "h2", "det_refined", "blocks")

    def __init__(self, form, g, beta, h1, h2, det_refined, blocks):
        self.form = form
        self.g = g
        self.beta = beta
        self.h1 = h1
        self.h2 = h2
        self.det_refined = det_refined
        self.blocks = blocks

    def checks(self):
        from .verify import core_checks

        return core_checks(self.form, self.g, self.beta, self.h1, self.h2, self.det_refined)

    def serialize(self):
        return {
            "format": CERT_FORMAT,
            "form": self.form.descriptor(),
            "g": self.g.serialize(),
            "beta": self.beta.serialize(),
            "h1": self.h1.serialize(),
            "h2": self.h2.serialize(),
            "det_refined": self.det_refined,
            "blocks": self.blocks,
        }


def cert_from_serialized(d):
    if not isinstance(d, dict) or d.get("format") != CERT_FORMAT:
        raise InputError(f"not a certificate (expected format {CERT_FORMAT!r})")
    try:
        form = form_from_descriptor(d["form"])
        tower = form.tower
        g = mat_from_serialized(tower, d["g"])
        h1 = mat_from_serialized(tower, d["h1"])
        h2 = mat_from_serialized(tower, d["h2"])
        beta = tower.elem(d["beta"])
        det_refined = bool(d.get("det_refined", False))
        blocks = list(d.get("blocks", []))
    except KeyError as e:
        raise InputError(f"certificate missing field: {e}") from e
    return FactorCert(form, g, beta, h1, h2, det_refined, blocks)


def factor(form, g, det_refined=False):
    """Factor a similitude g as h1 * h2 (h1 a twist-1 ratio-1 involution,
    h2 a twist-1 map with h2 * conj(h2) = beta).  Returns a FactorCert.

    With det_refined=True (orthogonal spaces of even dimension n), also
    arrange det(h1) = (-1)^(n/2), raising DetRefinementError when no
    admissible involution has that determinant."""
    if not isinstance(g, Mat) or g.tower is not form.tower:
        raise InputError("g must be a matrix over the form's field tower")
    beta = form.similitude_ratio(g)
    blocks = []
    _split(form, beta, g, form.J, Mat.identity(form.tower, form.n), blocks)
    if det_refined:
        _refine_dets(form, blocks)
    B = hstack([b.lift for b in blocks])
    M = block_diag(form.tower, [b.t for b in blocks])
    h1 = B @ M @ B.inv().conj()
    h2 = h1 @ g.conj()
    cert = FactorCert(form, g, beta, h1, h2, det_refined, [b.data for b in blocks])
    bad = [name for name, ok in cert.checks() if not ok]
    if bad:
        raise InternalInvariantError(
            "assembled factorization fails its defining identities",
            {"failed": bad, "cert": cert.serialize()},
        )
    return cert


def factor_det_refined(form, g):
    """factor(form, g) with the extra guarantee det(h1) = (-1)^(n/2).

    Only orthogonal spaces of even dimension n qualify.  When every
    admissible involution for g has the wrong determinant sign (which
    happens exactly when each invariant block has even dimension and the
    locked per-block signs multiply to the wrong total), this raises
    DetRefinementError carrying the block transcript."""
    return factor(form, g, det_refined=True)


# ---------------------------------------------------------------------------
# symmetric conjugators (a X = X a^T with X symmetric invertible)


def _hankel_candidate(F, f):
    # Hankel matrix H[i][j] = h_{i+j} of the impulse-seeded linear recurrence
    # of f: h_k is the top coefficient of T^k reduced mod f, so H is the Gram
    # matrix of the pairing (x, y) -> top-coeff(x * y mod f) in the monomial
    # basis.  It is symmetric, anti-triangular with unit anti-diagonal (hence
    # always invertible), and compatibility of that pairing with
    # multiplication by T gives C^T H = H C, i.e. H^(-1) conjugates the
    # companion matrix onto its transpose.  Callers must still check before
    # trusting the algebra.
    m = pdeg(f)
    c = [-f[j] for j in range(m)]
    h = [F.zero] * (2 * m - 1)
    h[m - 1] = F.one
    for k in range(m, 2 * m - 1):
        acc = F.zero
        for j in range(m):
            acc = acc + c[j] * h[k - m + j]
        h[k] = acc
    return Mat.from_rows(F, [[h[i + j] for j in range(m)] for i in range(m)])


def _conjugator_by_solving(C):
    # full linear system {C X = X C^T, X = X^T}; some solution is invertible
    F = C.tower
    m = C.nrows
    z = F.zero
    rows = []
    for i in range(m):
        for j in range(m):
            row = [z] * (m * m)
            for k in range(m):
                row[k * m + j] = row[k * m + j] + C[i, k]
                row[i * m + k] = row[i * m + k] - C[j, k]
            rows.append(row)
    for i in range(m):
        for j in range(i + 1, m):
            row = [z] * (m * m)
            row[i * m + j] = F.one
            row[j * m + i] = -F.one
            rows.append(row)
    ker = Mat.from_rows(F, rows).right_kernel_basis()
    mats = [
        Mat.from_rows(F, [[v[r * m + c, 0] for c in range(m)] for r in range(m)])
        for v in ker
    ]
    for take in (1, 2, 3):
        for combo in itertools.combinations(mats, take):
            X = combo[0]
            for other in combo[1:]:
                X = X + other
            if X.det():
                return X
    rng = random.Random(0)
    for _ in range(500):
        X = Mat.zeros(F, m, m)
        for base in mats:
            X = X + base * F.from_int(rng.randrange(F.order))
        if X.det():
            return X
    raise InternalInvariantError("no invertible symmetric intertwiner found", {})


def symmetric_conjugator(a):
    """Symmetric invertible X with a @ X = X @ a.T, over any field."""
    F = a.tower
    P, factors = frobenius_form(a)
    parts = []
    for f in factors:
        C = companion(F, f)
        try:
            X = _hankel_candidate(F, f).inv()
        except SingularMatrixError:  # unreachable by the anti-diagonal claim
            X = None
        if X is None or X.T != X or C @ X != X @ C.T:
            X = _conjugator_by_solving(C)
        parts.append(X)
    X = P @ block_diag(F, parts) @ P.T
    if X.T != X or a @ X != X @ a.T or not X.det():
        raise InternalInvariantError("symmetric conjugator construction failed", {})
    return X


def symmetric_factor(a):
    """Split an invertible a as d1 @ d2 with both factors symmetric.

    d1 is symmetric_conjugator(a) and d2 = d1^(-1) @ a; d2 is symmetric
    because transposing it gives a^T d1^(-1), which the intertwining
    relation a d1 = d1 a^T turns back into d1^(-1) a."""
    d1 = symmetric_conjugator(a)
    d2 = d1.inv() @ a
    if d1.T != d1 or d2.T != d2 or d1 @ d2 != a:
        raise InternalInvariantError("symmetric two-factor split failed", {})
    return d1, d2


def symmetric_unitary_conjugator(form, g):
    """For an isometry of the identity-Gram hermitian space: a symmetric
    unitary s with s @ g @ s^(-1) = g.T."""
    F = form.tower
    if form.kind != "hermitian" or form.J != Mat.identity(F, form.n):
        raise InputError("needs the identity-Gram hermitian space")
    if form.similitude_ratio(g) != F.one:
        raise NotInGroupError("needs an isometry (similitude ratio 1)")
    s = factor(form, g).h1.inv()
    if s.T != s:
        raise InternalInvariantError("conjugator is not symmetric", {"s": s.serialize()})
    if s.T @ s.conj() != Mat.identity(F, form.n):
        raise InternalInvariantError("conjugator is not unitary", {"s": s.serialize()})
    if s @ g @ s.inv() != g.T:
        raise InternalInvariantError("conjugator misses the transpose", {"s": s.serialize()})
    return s


def standard_reverser(form):
    """A canonical twist-1 ratio-1 similitude for the standard spaces."""
    F = form.tower
    n = form.n
    if form.kind == "symplectic" and form.standard == "symplectic":
        m = n // 2
        H = Mat.diag(F, [F.one] * m + [-F.one] * m)
    else:
        H = Mat.identity(F, n)
    if form.anti_ratio(H) != F.one:
        raise InputError("no canonical ratio-1 twist-1 map for this Gram; pass one explicitly")
    return H


def dualizing_conjugator(form, g, h_mat=None):
    """(u, iota_g): u conjugates the twisted dual of g back to g^(-1).

    Here iota_g = ratio(g)^(-1) * conj(H^(-1) @ g @ H) for a fixed twist-1
    similitude H (the canonical one when h_mat is None), and u = h1 @ conj(H)
    for the factorization's involution h1.  u is a linear similitude whose
    ratio equals H's, and u @ iota_g @ u^(-1) = g^(-1)."""
    F = form.tower
    H = standard_reverser(form) if h_mat is None else h_mat
    lam = form.anti_ratio(H)
    if lam is None:
        raise InputError("h must be a twist-1 similitude of the form")
    beta = form.similitude_ratio(g)
    iota = (H.inv() @ g @ H).conj() * beta.inv()
    u = factor(form, g).h1 @ H.conj()
    if form.similitude_ratio(u) != lam:
        raise InternalInvariantError("dualizing conjugator has unexpected ratio", {})
    if u @ iota @ u.inv() != g.inv():
        raise InternalInvariantError("dualizing conjugation failed", {"u": u.serialize()})
    return u, iota
