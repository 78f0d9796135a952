"""Exact arithmetic in GF(p^k) and an optional quadratic extension.

A FieldTower fixes one working field.  With ext="trivial" the working field
is F = GF(p^k) and conj() is the identity; with ext="quadratic" the working
field is E = GF(p^(2k)) and conj() is the involutory automorphism of E/F,
x -> x^(p^k).  Elements are flat tuples of GF(p) coordinates in the power
bases of the tower GF(p) -> F -> E.

Every modulus is the least one in integer-key order (the key of a monic
T^d + c_{d-1} T^{d-1} + ... + c_0 is sum(c_i * p^i), and extension moduli
W^2 + g1*W + g0 are ordered by (key(g0), key(g1))), so a field built twice
is the same field and serialized certificates reproduce byte for byte.
The same integer key orders elements; enumeration, canonical square roots
and "least non-square" searches all use it.
"""

from __future__ import annotations

from .errors import FieldConstructionError, InputError

# ---------------------------------------------------------------------------
# dense little-endian polynomials over GF(p), plain int coefficients


def _pnorm(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _psub(f, g, p):
    out = [0] * max(len(f), len(g))
    for i, c in enumerate(f):
        out[i] = c
    for i, c in enumerate(g):
        out[i] = (out[i] - c) % p
    return _pnorm(out)


def _pmul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _pnorm(out)


def _pdivmod(f, g, p):
    g = _pnorm(list(g))
    assert g, "division by zero polynomial"
    ginv = pow(g[-1], p - 2, p)
    r = _pnorm(list(f))
    q = [0] * max(0, len(r) - len(g) + 1)
    while len(r) >= len(g):
        c = (r[-1] * ginv) % p
        d = len(r) - len(g)
        q[d] = c
        for i, b in enumerate(g):
            r[i + d] = (r[i + d] - c * b) % p
        _pnorm(r)
    return _pnorm(q), r


def _pgcd(f, g, p):
    f, g = _pnorm(list(f)), _pnorm(list(g))
    while g:
        f, g = g, _pdivmod(f, g, p)[1]
    if f:
        c = pow(f[-1], p - 2, p)
        f = [(a * c) % p for a in f]
    return f


def _ppowmod(f, e, m, p):
    out = [1]
    base = _pdivmod(f, m, p)[1]
    while e:
        if e & 1:
            out = _pdivmod(_pmul(out, base, p), m, p)[1]
        base = _pdivmod(_pmul(base, base, p), m, p)[1]
        e >>= 1
    return out


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_prime(n):
    if not isinstance(n, int) or n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:  # deterministic for n < 3.3e24
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _p_is_irreducible(f, p):
    # Rabin: monic f of degree d is irreducible over GF(p) iff T^(p^d) == T
    # mod f and T^(p^(d//r)) - T is a unit mod f for every prime r | d.
    d = len(f) - 1
    if d < 1 or f[-1] != 1:
        return False
    t = [0, 1]
    t_red = _pdivmod(t, f, p)[1]
    if _ppowmod(t, p**d, f, p) != t_red:
        return False
    for r in _prime_factors(d):
        x = _ppowmod(t, p ** (d // r), f, p)
        if len(_pgcd(_psub(x, t_red, p), f, p)) != 1:
            return False
    return True


def _int_coords(n, p, d):
    out = []
    for _ in range(d):
        out.append(n % p)
        n //= p
    return out


def _least_irreducible(p, d):
    for n in range(p**d):
        f = _int_coords(n, p, d) + [1]
        if _p_is_irreducible(f, p):
            return f
    raise FieldConstructionError(f"no irreducible of degree {d} over GF({p})")


def _identity(c):
    return c


# ---------------------------------------------------------------------------


class FieldElem:
    """One element of a FieldTower's working field.

    Immutable; arithmetic dispatches to the tower's kernels.  Plain ints
    coerce (reduced mod p), so `2 * a - 1` means what it reads as.
    """

    __slots__ = ("tower", "coords")

    def __init__(self, tower, coords):
        self.tower = tower
        self.coords = coords

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.tower is not self.tower:
                raise InputError("cannot mix elements of different field towers")
            return other
        if isinstance(other, int):
            return self.tower.scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.tower, self.tower._add(self.coords, o.coords))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.tower, self.tower._sub(self.coords, o.coords))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.tower, self.tower._sub(o.coords, self.coords))

    def __neg__(self):
        return FieldElem(self.tower, self.tower._neg(self.coords))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.tower, self.tower._mul(self.coords, o.coords))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.tower, self.tower._mul(self.coords, self.tower._inv(o.coords)))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.tower, self.tower._mul(o.coords, self.tower._inv(self.coords)))

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        return FieldElem(self.tower, self.tower._cpow(self.coords, n))

    def inv(self):
        return FieldElem(self.tower, self.tower._inv(self.coords))

    def conj(self):
        return FieldElem(self.tower, self.tower._conj(self.coords))

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coords == o.coords

    def __hash__(self):
        return hash(self.coords)

    def __bool__(self):
        return any(self.coords)

    @property
    def int_key(self):
        key, p = 0, self.tower.p
        for c in reversed(self.coords):
            key = key * p + c
        return key

    def serialize(self):
        return list(self.coords)

    def __repr__(self):
        return f"<{','.join(map(str, self.coords))}:GF{self.tower.order}>"


class FieldTower:
    """GF(p^k), optionally inside GF(p^(2k)), with canonical moduli.

    Use field_make() instead of constructing directly; towers are cached so
    elements of "the same" field always share one tower object.
    """

    def __init__(self, p, k=1, ext="trivial"):
        if not _is_prime(p):
            raise FieldConstructionError(f"p must be prime, got {p!r}")
        if not isinstance(k, int) or isinstance(k, bool) or k < 1:
            raise FieldConstructionError(f"k must be a positive integer, got {k!r}")
        if ext not in ("trivial", "quadratic"):
            raise FieldConstructionError(f"ext must be 'trivial' or 'quadratic', got {ext!r}")
        self.p = p
        self.k = k
        self.ext = ext
        self.q = p**k  # order of the conj-fixed field
        self.deg = k if ext == "trivial" else 2 * k
        self.order = p**self.deg  # order of the working field
        self.base_modulus = _least_irreducible(p, k)
        self._one_coords = (1,) + (0,) * (self.deg - 1)
        self._inv_table = {}

        if ext == "trivial":
            self._conj = _identity
            self._add = self._vec_add
            self._sub = self._vec_sub
            self._neg = self._vec_neg
            if k == 1:
                self._mul = lambda a, b: ((a[0] * b[0]) % p,)
                self._inv_raw = lambda a: (pow(a[0], p - 2, p),)
            else:
                self._mul = self._poly_mul
                self._inv_raw = self._poly_inv
            self._install_small_tables()
            return

        base = field_make(p, k, "trivial")
        self._base = base
        g0, g1 = self._least_quadratic_modulus(base)
        self._qg0, self._qg1 = g0.coords, g1.coords
        self._add = self._vec_add
        self._sub = self._vec_sub
        self._neg = self._vec_neg
        if k == 1:
            G0, G1 = self._qg0[0], self._qg1[0]

            def qmul(a, b, p=p, G0=G0, G1=G1):
                a0, a1 = a
                b0, b1 = b
                t = a1 * b1
                return ((a0 * b0 - G0 * t) % p, (a0 * b1 + a1 * b0 - G1 * t) % p)

            self._mul = qmul
        else:
            self._mul = self._pair_mul

        # conj is determined by W -> W^q; W^q is computable with mul alone
        w_coords = (0,) * k + (1,) + (0,) * (k - 1)
        wq = self._cpow(w_coords, self.q)
        self._wq0, self._wq1 = wq[:k], wq[k:]
        if k == 1:
            w0, w1 = self._wq0[0], self._wq1[0]
            self._conj = lambda a: ((a[0] + a[1] * w0) % p, (a[1] * w1) % p)

            def qinv(a, p=p, G0=G0, G1=G1, w0=w0, w1=w1):
                t0 = (a[0] + a[1] * w0) % p
                t1 = (a[1] * w1) % p
                n = (a[0] * t0 - G0 * a[1] * t1) % p
                assert (a[0] * t1 + a[1] * t0 - G1 * a[1] * t1) % p == 0
                c = pow(n, p - 2, p)
                return ((t0 * c) % p, (t1 * c) % p)

            self._inv_raw = qinv
        else:
            self._conj = self._pair_conj
            self._inv_raw = self._pair_inv
        assert self._conj(w_coords) != w_coords, "conj fixes the extension generator"
        assert self._conj(self._conj(w_coords)) == w_coords, "conj is not an involution"
        self._install_small_tables()

    # -- GF(p)-linear kernels (length-agnostic) -----------------------------

    def _vec_add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def _vec_sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def _vec_neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    # -- GF(p^k) kernels, k > 1 ---------------------------------------------

    def _poly_mul(self, a, b):
        rem = _pdivmod(_pmul(list(a), list(b), self.p), self.base_modulus, self.p)[1]
        return tuple(rem + [0] * (self.k - len(rem)))

    def _poly_inv(self, a):
        # extended Euclid against the (irreducible) modulus
        p = self.p
        r0, r1 = list(self.base_modulus), _pnorm(list(a))
        s0, s1 = [], [1]
        while r1:
            q, r = _pdivmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        c = pow(r0[0], p - 2, p)
        inv = _pdivmod([(c * x) % p for x in s0], self.base_modulus, p)[1]
        return tuple(inv + [0] * (self.k - len(inv)))

    # -- GF(p^2k) kernels on (lo, hi) halves, k > 1 ---------------------------

    def _pair_mul(self, a, b):
        k, B = self.k, self._base
        a0, a1, b0, b1 = a[:k], a[k:], b[:k], b[k:]
        t = B._mul(a1, b1)
        lo = B._sub(B._mul(a0, b0), B._mul(self._qg0, t))
        hi = B._sub(B._add(B._mul(a0, b1), B._mul(a1, b0)), B._mul(self._qg1, t))
        return lo + hi

    def _pair_conj(self, a):
        k, B = self.k, self._base
        a0, a1 = a[:k], a[k:]
        return B._add(a0, B._mul(a1, self._wq0)) + B._mul(a1, self._wq1)

    def _pair_inv(self, a):
        k, B = self.k, self._base
        t = self._pair_conj(a)
        n = self._pair_mul(a, t)
        assert not any(n[k:]), "norm to the fixed field has a W component"
        c = B._inv(n[:k])
        return B._mul(t[:k], c) + B._mul(t[k:], c)

    @staticmethod
    def _least_quadratic_modulus(base):
        # least (key(g0), key(g1)) with W^2 + g1*W + g0 irreducible over F:
        # odd p: the discriminant g1^2 - 4*g0 is a non-square;
        # p = 2: g1 != 0 and the absolute trace of g0 / g1^2 is 1.
        for n0 in range(base.order):
            g0 = base.from_int(n0)
            for n1 in range(base.order):
                g1 = base.from_int(n1)
                if base.p == 2:
                    if not g1:
                        continue
                    acc, y = base.zero, g0 / (g1 * g1)
                    for _ in range(base.k):
                        acc = acc + y
                        y = y * y
                    ok = acc == base.one
                else:
                    ok = not base.is_square(g1 * g1 - 4 * g0)
                if ok:
                    return g0, g1
        raise FieldConstructionError("no quadratic extension modulus found")

    # -- shared machinery ----------------------------------------------------

    def _install_small_tables(self):
        # tabulated kernels for small working fields: dense linear algebra
        # spends nearly all its time in elementwise ops, and the generic
        # kernels cost microseconds per product
        if self.order > 64:
            return
        elems = [tuple(_int_coords(n, self.p, self.deg)) for n in range(self.order)]
        mul, add, sub, neg = self._mul, self._add, self._sub, self._neg
        mt = {(a, b): mul(a, b) for a in elems for b in elems}
        at = {(a, b): add(a, b) for a in elems for b in elems}
        st = {(a, b): sub(a, b) for a in elems for b in elems}
        nt = {a: neg(a) for a in elems}
        self._mul = lambda a, b: mt[a, b]
        self._add = lambda a, b: at[a, b]
        self._sub = lambda a, b: st[a, b]
        self._neg = lambda a: nt[a]

    def _inv(self, c):
        if not any(c):
            raise ZeroDivisionError("division by zero field element")
        hit = self._inv_table.get(c)
        if hit is None:
            hit = self._inv_raw(c)
            if len(self._inv_table) < 4096:
                self._inv_table[c] = hit
        return hit

    def _cpow(self, c, n):
        if n < 0:
            c, n = self._inv(c), -n
        out, base = self._one_coords, c
        while n:
            if n & 1:
                out = self._mul(out, base)
            base = self._mul(base, base)
            n >>= 1
        return out

    # -- public API -----------------------------------------------------------

    @property
    def zero(self):
        return FieldElem(self, (0,) * self.deg)

    @property
    def one(self):
        return FieldElem(self, self._one_coords)

    @property
    def has_conj(self):
        return self.ext == "quadratic"

    def elem(self, coords):
        coords = tuple(int(c) % self.p for c in coords)
        if len(coords) != self.deg:
            raise InputError(f"expected {self.deg} coordinates, got {len(coords)}")
        return FieldElem(self, coords)

    def scalar(self, c):
        return FieldElem(self, (c % self.p,) + (0,) * (self.deg - 1))

    def from_int(self, n):
        if not 0 <= n < self.order:
            raise InputError(f"element key out of range: {n}")
        return FieldElem(self, tuple(_int_coords(n, self.p, self.deg)))

    def elements(self):
        for n in range(self.order):
            yield self.from_int(n)

    def is_square(self, a):
        """Squareness in the working field (everything is a square in char 2)."""
        if self.p == 2:
            return True
        return (not a) or a ** ((self.order - 1) // 2) == self.one

    def sqrt(self, a):
        """Canonical square root (least integer key), or None for non-squares."""
        if self.p == 2:
            return a ** (self.order // 2)
        if not a:
            return self.zero
        Q = self.order
        if a ** ((Q - 1) // 2) != self.one:
            return None
        if Q % 4 == 3:
            r = a ** ((Q + 1) // 4)
        else:
            # Tonelli-Shanks, seeded with the least non-square
            m, s = Q - 1, 0
            while m % 2 == 0:
                m //= 2
                s += 1
            z = next(e for e in self.elements() if e and not self.is_square(e))
            c = z**m
            r = a ** ((m + 1) // 2)
            t = a**m
            M = s
            while t != self.one:
                t2, i = t, 0
                while t2 != self.one:
                    t2 = t2 * t2
                    i += 1
                b = c ** (1 << (M - i - 1))
                M = i
                c = b * b
                t = t * c
                r = r * b
        assert r * r == a
        alt = -r
        return r if r.int_key <= alt.int_key else alt

    def descriptor(self):
        d = {"p": self.p, "k": self.k, "ext": self.ext,
             "base_modulus": list(self.base_modulus)}
        if self.ext == "quadratic":
            d["ext_modulus"] = [list(self._qg0), list(self._qg1)]
        return d

    def __repr__(self):
        if self.ext == "trivial":
            return f"GF({self.order})"
        return f"GF({self.order})/GF({self.q})"


_TOWER_CACHE: dict = {}


def field_make(p, k=1, ext="trivial"):
    """Return the canonical GF(p^k) tower (cached: equal parameters, same object)."""
    key = (p, k, ext)
    t = _TOWER_CACHE.get(key)
    if t is None:
        t = FieldTower(p, k, ext)
        _TOWER_CACHE[key] = t
    return t


def field_from_descriptor(d):
    """Rebuild a tower from its descriptor, insisting on the canonical moduli."""
    try:
        tower = field_make(int(d["p"]), int(d["k"]), d.get("ext", "trivial"))
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad field descriptor: {e}") from e
    if list(tower.base_modulus) != [int(c) for c in d["base_modulus"]]:
        raise InputError("field descriptor base modulus is not canonical")
    if tower.ext == "quadratic":
        want = [[int(c) for c in row] for row in d.get("ext_modulus", [])]
        if [list(tower._qg0), list(tower._qg1)] != want:
            raise InputError("field descriptor extension modulus is not canonical")
    return tower
