"""Sesquilinear forms, similitude ratios, group sampling and enumeration.

A SesquiForm is <x, y> = x^T J conj(y) with J nonsingular and
J^T = eps * conj(J), eps in {+1, -1}: symplectic (eps -1, alternating,
trivial tower), orthogonal (eps +1, symmetric, trivial tower, odd
characteristic) or hermitian (eps +1, quadratic tower).

Linear similitudes:  g^T J conj(g) = beta * J.
Twist-1 similitudes: A^T J conj(A) = beta * eps * conj(J), which is the
matrix form of "phi(x) = A conj(x) reverses arguments":
<phi(x), phi(y)> = beta * <y, x>.  Involutions h with h^2 = mu satisfy
A * conj(A) = mu * I.

Sampling walks are seeded and deterministic; enumeration visits matrices
in a fixed canonical order (columns ascending by integer key, kernel
coefficients ascending), so runs reproduce exactly.
"""

from __future__ import annotations

import random

from .errors import (
    BudgetExceededError,
    DegenerateFormError,
    InputError,
    InternalInvariantError,
    NotInGroupError,
)
from .fields import FieldElem, field_from_descriptor
from .linalg import Mat, block_diag, hstack, mat_from_serialized, vstack

_KINDS = ("symplectic", "orthogonal", "hermitian")


class SesquiForm:
    """A nondegenerate eps-sesquilinear space over a field tower."""

    __slots__ = ("tower", "kind", "J", "eps", "standard")

    def __init__(self, tower, kind, J, standard=None):
        if kind not in _KINDS:
            raise InputError(f"unknown form kind {kind!r}")
        if not isinstance(J, Mat) or J.tower is not tower or J.nrows != J.ncols:
            raise InputError("form matrix must be square over the form's tower")
        self.tower = tower
        self.kind = kind
        self.J = J
        self.eps = -1 if kind == "symplectic" else 1
        self.standard = standard
        if not J.det():
            raise DegenerateFormError("form matrix is singular")
        if kind == "hermitian":
            if not tower.has_conj:
                raise InputError("hermitian forms need a quadratic tower")
            if J.T != J.conj():
                raise InputError("hermitian form matrix must equal its conj-transpose")
        else:
            if tower.has_conj:
                raise InputError(f"{kind} forms use a trivial tower")
            if kind == "symplectic":
                if J.T != -J or any(J[i, i] for i in range(J.nrows)):
                    raise InputError("symplectic form matrix must be alternating")
            else:
                if tower.p == 2:
                    raise InputError("orthogonal forms in characteristic 2 are unsupported")
                if J.T != J:
                    raise InputError("orthogonal form matrix must be symmetric")

    @property
    def n(self):
        return self.J.nrows

    @property
    def eps_elem(self):
        return self.tower.scalar(self.eps)

    def value(self, x, y):
        return (x.T @ self.J @ y.conj())[0, 0]

    def gram(self, basis):
        """Gram matrix of the columns of `basis`."""
        return basis.T @ self.J @ basis.conj()

    def _match_ratio(self, S, P):
        anchor = next(
            ((i, j) for i in range(self.n) for j in range(self.n) if P[i, j]), None
        )
        assert anchor is not None
        beta = S[anchor] / P[anchor]
        if not beta:
            return None
        return beta if S == P * beta else None

    def similitude_ratio(self, g):
        """The beta with g^T J conj(g) = beta J, else NotInGroupError."""
        if g.shape != (self.n, self.n) or g.tower is not self.tower:
            raise NotInGroupError("matrix shape or field does not match the form")
        beta = self._match_ratio(g.T @ self.J @ g.conj(), self.J)
        if beta is None:
            raise NotInGroupError("matrix is not a similitude of the form")
        if beta.conj() != beta:
            raise InternalInvariantError(
                "similitude ratio not fixed by conj", {"beta": beta.serialize()}
            )
        return beta

    def is_similitude(self, g, beta=None):
        try:
            got = self.similitude_ratio(g)
        except NotInGroupError:
            return False
        return beta is None or got == self._as_elem(beta)

    def anti_ratio(self, A):
        """beta with A^T J conj(A) = beta * eps * conj(J), or None."""
        if A.shape != (self.n, self.n) or A.tower is not self.tower:
            return None
        P = self.J.conj() * self.eps_elem
        return self._match_ratio(A.T @ self.J @ A.conj(), P)

    def _as_elem(self, beta):
        if isinstance(beta, int):
            beta = self.tower.scalar(beta)
        if not isinstance(beta, FieldElem) or beta.tower is not self.tower:
            raise InputError("ratio must be an element of the form's working field")
        if not beta:
            raise InputError("similitude ratio must be nonzero")
        if beta.conj() != beta:
            raise InputError("similitude ratio must lie in the conj-fixed field")
        return beta

    def descriptor(self):
        return {
            "kind": self.kind,
            "tower": self.tower.descriptor(),
            "gram": self.J.serialize(),
        }

    def __repr__(self):
        return f"SesquiForm({self.kind}, n={self.n}, {self.tower!r})"


def form_from_descriptor(d):
    try:
        tower = field_from_descriptor(d["tower"])
        J = mat_from_serialized(tower, d["gram"])
        return SesquiForm(tower, d["kind"], J)
    except KeyError as e:
        raise InputError(f"form descriptor missing field: {e}") from e


# ---------------------------------------------------------------------------
# standard spaces


def symplectic_form(tower, n):
    """Alternating form [[0, -I], [I, 0]] on n = 2m coordinates."""
    if tower.has_conj:
        raise InputError("symplectic forms use a trivial tower")
    if n < 2 or n % 2:
        raise InputError("symplectic spaces have positive even dimension")
    m = n // 2
    z = Mat.zeros(tower, m, m)
    i = Mat.identity(tower, m)
    J = vstack([_hcat(z, -i), _hcat(i, z)])
    return SesquiForm(tower, "symplectic", J, standard="symplectic")


def orthogonal_plus_form(tower, n):
    """Split symmetric form [[0, I], [I, 0]] (odd characteristic)."""
    if n < 2 or n % 2:
        raise InputError("plus-type spaces here have positive even dimension")
    m = n // 2
    z = Mat.zeros(tower, m, m)
    i = Mat.identity(tower, m)
    J = vstack([_hcat(z, i), _hcat(i, z)])
    return SesquiForm(tower, "orthogonal", J, standard="orthogonal_plus")


def orthogonal_minus_form(tower, n):
    """Split part plus an anisotropic plane diag(1, -delta), delta the least non-square."""
    if n < 2 or n % 2:
        raise InputError("minus-type spaces here have positive even dimension")
    if tower.p == 2:
        raise InputError("orthogonal forms in characteristic 2 are unsupported")
    delta = least_nonsquare(tower)
    aniso = Mat.diag(tower, [tower.one, -delta])
    if n == 2:
        J = aniso
    else:
        J = block_diag(tower, [orthogonal_plus_form(tower, n - 2).J, aniso])
    return SesquiForm(tower, "orthogonal", J, standard="orthogonal_minus")


def hermitian_form(tower, n):
    """The identity Gram matrix over a quadratic tower."""
    if n < 1:
        raise InputError("dimension must be positive")
    return SesquiForm(tower, "hermitian", Mat.identity(tower, n), standard="hermitian")


def orthogonal_form(tower, J):
    """A user-supplied symmetric nonsingular Gram matrix (odd characteristic)."""
    return SesquiForm(tower, "orthogonal", J)


def _hcat(a, b):
    return hstack([a, b])


def least_nonsquare(tower):
    for e in tower.elements():
        if e and not tower.is_square(e):
            return e
    raise InputError(f"every element of {tower!r} is a square")


def norm_one_nontrivial(tower):
    """Some z != 1 with z * conj(z) = 1 (quadratic towers)."""
    for e in tower.elements():
        if e != tower.one and e * e.conj() == tower.one:
            return e
    raise InternalInvariantError("no nontrivial norm-one element", {})


# ---------------------------------------------------------------------------
# seeded sampling


def _rand_elem(tower, rng):
    return tower.from_int(rng.randrange(tower.order))


def _rand_vector(tower, n, rng, nonzero=True):
    while True:
        v = Mat.column(tower, [_rand_elem(tower, rng) for _ in range(n)])
        if not nonzero or not v.is_zero():
            return v


def _rank_one_update(form, v, coeff):
    # I + coeff * v * (J conj(v))^T, the shared shape of transvections,
    # reflections and pseudo-reflections
    w = (form.J @ v.conj()).T
    n = form.n
    upd = v @ w
    return Mat.identity(form.tower, n) + upd * coeff


def _gen_isometry(form, rng):
    F = form.tower
    if form.kind == "symplectic":
        v = _rand_vector(F, form.n, rng)
        lam = _rand_elem(F, rng)
        return _rank_one_update(form, v, lam)
    if form.kind == "orthogonal":
        while True:
            v = _rand_vector(F, form.n, rng)
            norm = form.value(v, v)
            if norm:
                return _rank_one_update(form, v, -2 / norm)
    # hermitian pseudo-reflection with a norm-one multiplier
    while True:
        v = _rand_vector(F, form.n, rng)
        norm = form.value(v, v)
        if not norm:
            continue
        u = _rand_elem(F, rng)
        if not u or u.conj() == u:
            continue
        zeta = u.conj() / u
        return _rank_one_update(form, v, (zeta - F.one) / norm)


def _dilation(form, beta):
    """One similitude of ratio beta on a standard space."""
    F = form.tower
    n = form.n
    if beta == F.one:
        return Mat.identity(F, n)
    if form.standard == "hermitian":
        w = next((e for e in F.elements() if e * e.conj() == beta), None)
        if w is None:
            raise InternalInvariantError("norm is not surjective", {"beta": beta.serialize()})
        return Mat.diag(F, [w] * n)
    if form.standard in ("symplectic", "orthogonal_plus"):
        m = n // 2
        return Mat.diag(F, [beta] * m + [F.one] * m)
    if form.standard == "orthogonal_minus":
        delta = least_nonsquare(F)
        W = None
        for x in F.elements():
            y2 = (x * x - beta) / delta
            y = F.sqrt(y2)
            if y is not None:
                W = Mat.from_rows(F, [[x, delta * y], [y, x]])
                break
        if W is None:
            raise InternalInvariantError(
                "anisotropic norm form is not surjective", {"beta": beta.serialize()}
            )
        if n == 2:
            return W
        m = (n - 2) // 2
        split = Mat.diag(F, [beta] * m + [F.one] * m)
        return block_diag(F, [split, W])
    raise InputError(
        "sampling with ratio != 1 needs one of the standard space constructors"
    )


def group_sample(form, beta=None, seed=0, count=1):
    """`count` similitudes of ratio beta (default 1) by a seeded generator walk."""
    F = form.tower
    beta = F.one if beta is None else form._as_elem(beta)
    rng = random.Random(seed)
    base = _dilation(form, beta)
    out = []
    for _ in range(count):
        g = base
        for _ in range(8 + rng.randrange(8)):
            g = g @ _gen_isometry(form, rng)
        if form.similitude_ratio(g) != beta:
            raise InternalInvariantError("sampled element has wrong ratio", {})
        out.append(g)
    return out


# ---------------------------------------------------------------------------
# exhaustive enumeration by column DFS against a target Gram matrix


def _vectors(tower, n):
    for key in range(tower.order**n):
        k = key
        entries = []
        for _ in range(n):
            entries.append(tower.from_int(k % tower.order))
            k //= tower.order
        yield Mat.column(tower, entries)


def _gram_column_solver(form, target, budget):
    """All matrices M with pairwise column products <m_i, m_j> = target[i][j],
    in canonical order.  Such M are automatically invertible when target is."""
    F = form.tower
    n = form.n
    J = form.J
    spent = [0]

    def charge(k=1):
        spent[0] += k
        if spent[0] > budget:
            raise BudgetExceededError(f"enumeration exceeded budget {budget}")

    def extend(cols, rows):
        i = len(cols)
        if i == n:
            yield Mat(F, tuple(zip(*(c.col_entries(0) for c in cols))))
            return
        diag_want = target[i, i]
        if i == 0:
            for v in _vectors(F, n):
                charge()
                if v.is_zero():
                    continue
                if form.value(v, v) == diag_want:
                    w = (J @ v.conj()).T
                    yield from extend([v], [w])
            return
        A = vstack(rows)
        b = Mat.column(F, [target[i, j] for j in range(i)])
        x0 = A.solve_right(b)
        if x0 is None:
            return
        kerb = A.right_kernel_basis()
        if not kerb:
            charge()
            if not x0.is_zero() and form.value(x0, x0) == diag_want:
                w = (J @ x0.conj()).T
                yield from extend(cols + [x0], rows + [w])
            return
        for coeffs in _vectors(F, len(kerb)):
            charge()
            x = x0
            for t, kv in zip(coeffs.col_entries(0), kerb):
                if t:
                    x = x + kv * t
            if x.is_zero() or form.value(x, x) != diag_want:
                continue
            w = (J @ x.conj()).T
            yield from extend(cols + [x], rows + [w])

    yield from extend([], [])


def group_enumerate(form, beta=None, budget=10**7):
    """Every similitude of the given ratio, canonically ordered."""
    beta = form.tower.one if beta is None else form._as_elem(beta)
    target = form.J * beta
    for M in _gram_column_solver(form, target, budget):
        yield M


def anti_unitary_enumerate(form, beta=None, budget=10**7):
    """Every matrix A with A^T J conj(A) = beta * eps * conj(J), canonically ordered.

    These are the twist-1 similitudes of ratio beta.
    """
    beta = form.tower.one if beta is None else form._as_elem(beta)
    target = form.J.conj() * (form.eps_elem * beta)
    for M in _gram_column_solver(form, target, budget):
        yield M
