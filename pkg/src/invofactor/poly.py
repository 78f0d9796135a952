"""Dense univariate polynomials over a field tower's working field.

Polynomials are little-endian tuples of FieldElem with no trailing zeros;
() is zero.  Functions take the tower F explicitly when they need constants.
Factorization (squarefree / distinct-degree / equal-degree) is seeded and
deterministic for a fixed seed; every emitted factor is re-checked
irreducible before it is returned, and the product is re-checked against
the input.
"""

from __future__ import annotations

import random

from .errors import InternalInvariantError

# ---------------------------------------------------------------------------
# ring operations


def pnormal(cs):
    cs = list(cs)
    while cs and not cs[-1]:
        cs.pop()
    return tuple(cs)


def pdeg(f):
    return len(f) - 1


def pvar(F):
    return (F.zero, F.one)


def pconst(F, c):
    c = c if not isinstance(c, int) else F.scalar(c)
    return (c,) if c else ()


def padd(f, g, F):
    n = max(len(f), len(g))
    z = F.zero
    fs = f + (z,) * (n - len(f))
    gs = g + (z,) * (n - len(g))
    return pnormal(a + b for a, b in zip(fs, gs))


def psub(f, g, F):
    n = max(len(f), len(g))
    z = F.zero
    fs = f + (z,) * (n - len(f))
    gs = g + (z,) * (n - len(g))
    return pnormal(a - b for a, b in zip(fs, gs))


def pneg(f):
    return tuple(-a for a in f)


def pmul(f, g, F):
    if not f or not g:
        return ()
    z = F.zero
    out = [z] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = out[i + j] + a * b
    return pnormal(out)


def pmulc(f, c):
    if not c:
        return ()
    return tuple(a * c for a in f)


def pdivmod(f, g, F):
    assert g, "division by zero polynomial"
    ginv = g[-1].inv()
    r = list(f)
    q = [F.zero] * max(0, len(r) - len(g) + 1)
    while len(r) >= len(g):
        c = r[-1] * ginv
        d = len(r) - len(g)
        q[d] = c
        for i, b in enumerate(g):
            r[i + d] = r[i + d] - c * b
        del r[-1]
        while r and not r[-1]:
            del r[-1]
    return pnormal(q), pnormal(r)


def pmod(f, g, F):
    return pdivmod(f, g, F)[1]


def pmonic(f, F):
    if not f:
        return f
    if f[-1] == F.one:
        return f
    return pmulc(f, f[-1].inv())


def pgcd(f, g, F):
    while g:
        f, g = g, pmod(f, g, F)
    return pmonic(f, F)


def ppowmod(f, e, m, F):
    out = pmod((F.one,), m, F)
    base = pmod(f, m, F)
    while e:
        if e & 1:
            out = pmod(pmul(out, base, F), m, F)
        base = pmod(pmul(base, base, F), m, F)
        e >>= 1
    return out


def pinvmod(f, m, F):
    """Inverse of f mod m, or None when gcd(f, m) != 1."""
    r0, r1 = m, pmod(f, m, F)
    s0, s1 = (), (F.one,)
    while r1:
        q, r = pdivmod(r0, r1, F)
        r0, r1 = r1, r
        s0, s1 = s1, psub(s0, pmul(q, s1, F), F)
    if pdeg(r0) != 0:
        return None
    return pmod(pmulc(s0, r0[0].inv()), m, F)


def plcm(f, g, F):
    if not f or not g:
        return ()
    d = pgcd(f, g, F)
    return pmonic(pmul(pdivmod(f, d, F)[0], g, F), F)


def peval(f, x):
    acc = x.tower.zero
    for c in reversed(f):
        acc = acc * x + c
    return acc


def pderiv(f, F):
    return pnormal(F.scalar(i) * f[i] for i in range(1, len(f)))


def pconj(f):
    return tuple(c.conj() for c in f)


def ppow(f, e, F):
    out = (F.one,)
    base = f
    while e:
        if e & 1:
            out = pmul(out, base, F)
        base = pmul(base, base, F)
        e >>= 1
    return out


def pserialize(f):
    return [c.serialize() for c in f]


def sort_key(f):
    return (pdeg(f), tuple(c.int_key for c in f))


# ---------------------------------------------------------------------------
# the ratio-twisted reciprocal involution


def twisted_reciprocal(f, beta):
    """For monic f with f(0) != 0, the monic polynomial whose roots are
    beta / conj(lambda) over the roots lambda of f (conj extended to any
    splitting field).  An involution: applying it twice returns f."""
    F = beta.tower
    d = pdeg(f)
    assert d >= 0 and f[-1] == F.one and f[0], "need monic with nonzero constant term"
    pw = [F.one]
    for _ in range(d):
        pw.append(pw[-1] * beta)
    raw = tuple(f[d - j].conj() * pw[d - j] for j in range(d + 1))
    return pmonic(raw, F)


# ---------------------------------------------------------------------------
# factorization (seeded, deterministic, self-checking)


def _pth_root(f, F):
    # f has nonzero coefficients only in degrees divisible by p
    p = F.p
    e = F.order // p
    out = []
    for i in range(0, len(f), p):
        out.append(f[i] ** e)
        assert all(not c for c in f[i + 1 : i + p]), "not a p-th power"
    return pnormal(out)


def squarefree_parts(f, F):
    """[(g, m)] with monic squarefree g, distinct m, and f = lc * prod g^m."""
    out = []
    f = pmonic(f, F)
    if pdeg(f) < 1:
        return out
    d = pderiv(f, F)
    if not d:
        for g, m in squarefree_parts(_pth_root(f, F), F):
            out.append((g, m * F.p))
        return out
    g = pgcd(f, d, F)
    w = pdivmod(f, g, F)[0]
    i = 1
    while pdeg(w) > 0:
        y = pgcd(w, g, F)
        z = pdivmod(w, y, F)[0]
        if pdeg(z) > 0:
            out.append((z, i))
        i += 1
        w = y
        g = pdivmod(g, y, F)[0]
    if pdeg(g) > 0:
        for h, m in squarefree_parts(_pth_root(g, F), F):
            out.append((h, m * F.p))
    out.sort(key=lambda gm: gm[1])
    return out


def distinct_degree_parts(f, F):
    """For monic squarefree f: [(product of its degree-d irreducible factors, d)]."""
    out = []
    Q = F.order
    g = f
    h = pmod(pvar(F), g, F)
    d = 0
    while pdeg(g) >= 2 * (d + 1):
        d += 1
        h = ppowmod(h, Q, g, F)
        gd = pgcd(psub(h, pvar(F), F), g, F)
        if pdeg(gd) > 0:
            out.append((gd, d))
            g = pdivmod(g, gd, F)[0]
            h = pmod(h, g, F)
    if pdeg(g) > 0:
        out.append((g, pdeg(g)))
    return out


def _edf(f, d, F, rng):
    # split monic squarefree f, all of whose irreducible factors have degree d
    n = pdeg(f)
    if n == d:
        return [f]
    Q = F.order
    while True:
        r = pnormal(F.from_int(rng.randrange(Q)) for _ in range(n))
        if pdeg(r) < 1:
            continue
        if F.p == 2:
            # absolute trace map of r in the quotient ring splits f
            m = Q.bit_length() - 1  # Q = 2^m
            s = acc = pmod(r, f, F)
            for _ in range(m * d - 1):
                acc = ppowmod(acc, 2, f, F)
                s = padd(s, acc, F)
            g = pgcd(s, f, F)
        else:
            s = ppowmod(r, (Q**d - 1) // 2, f, F)
            g = pgcd(psub(s, (F.one,), F), f, F)
        if 0 < pdeg(g) < n:
            rest = pdivmod(f, g, F)[0]
            return _edf(g, d, F, rng) + _edf(rest, d, F, rng)


def is_irreducible_poly(f, F):
    """Rabin's criterion over the working field."""
    d = pdeg(f)
    if d < 1 or f[-1] != F.one:
        return False
    Q = F.order
    t = pvar(F)
    t_red = pmod(t, f, F)
    if ppowmod(t, Q**d, f, F) != t_red:
        return False
    r = 2
    dd = d
    primes = []
    while r * r <= dd:
        if dd % r == 0:
            primes.append(r)
            while dd % r == 0:
                dd //= r
        r += 1
    if dd > 1:
        primes.append(dd)
    for r in primes:
        h = ppowmod(t, Q ** (d // r), f, F)
        if pdeg(pgcd(psub(h, t_red, F), f, F)) != 0:
            return False
    return True


def factorize(f, F, seed=0):
    """Monic irreducible factorization [(g, mult)], canonically sorted.

    Deterministic for fixed seed; asserts irreducibility of every factor and
    that the factors multiply back to the input.
    """
    assert f, "cannot factor the zero polynomial"
    rng = random.Random(seed)
    out = []
    for sqf, m in squarefree_parts(f, F):
        for prod_d, d in distinct_degree_parts(sqf, F):
            for irr in _edf(prod_d, d, F, rng):
                if not is_irreducible_poly(irr, F):
                    raise InternalInvariantError(
                        "claimed factor is not irreducible",
                        {"factor": pserialize(irr)},
                    )
                out.append((irr, m))
    out.sort(key=lambda fm: sort_key(fm[0]))
    check = pconst(F, f[-1])
    for g, m in out:
        check = pmul(check, ppow(g, m, F), F)
    if check != f:
        raise InternalInvariantError(
            "factor product differs from input", {"input": pserialize(f)}
        )
    return out
