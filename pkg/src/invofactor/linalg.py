"""Exact dense linear algebra over a field tower's working field.

Mat is immutable (tuple-of-tuples of FieldElem); construction coerces plain
ints through the tower.  SemiLinear bundles a matrix with a twist in {0, 1}
counting applications of the field conj; composition is
(A, s) o (B, t) = (A * conj^s(B), s + t mod 2), matching map composition
x -> A * conj^s(B * conj^t(x)).
"""

from __future__ import annotations

from .errors import InputError, SingularMatrixError
from .fields import FieldElem


class Mat:
    __slots__ = ("tower", "rows")

    def __init__(self, tower, rows):
        self.tower = tower
        self.rows = rows

    # -- construction --------------------------------------------------------

    @staticmethod
    def from_rows(tower, rows):
        out = []
        width = None
        for r in rows:
            rr = []
            for x in r:
                if isinstance(x, FieldElem):
                    if x.tower is not tower:
                        raise InputError("matrix entry from a different field tower")
                    rr.append(x)
                elif isinstance(x, int):
                    rr.append(tower.scalar(x))
                else:
                    raise InputError(f"bad matrix entry {x!r}")
            if width is None:
                width = len(rr)
            elif len(rr) != width:
                raise InputError("ragged matrix rows")
            out.append(tuple(rr))
        if not out or width == 0:
            raise InputError("empty matrix")
        return Mat(tower, tuple(out))

    @staticmethod
    def identity(tower, n):
        z, o = tower.zero, tower.one
        return Mat(tower, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @staticmethod
    def zeros(tower, m, n):
        z = tower.zero
        return Mat(tower, tuple((z,) * n for _ in range(m)))

    @staticmethod
    def diag(tower, entries):
        es = [e if isinstance(e, FieldElem) else tower.scalar(e) for e in entries]
        z = tower.zero
        n = len(es)
        return Mat(tower, tuple(tuple(es[i] if i == j else z for j in range(n)) for i in range(n)))

    @staticmethod
    def column(tower, entries):
        return Mat.from_rows(tower, [[e] for e in entries])

    # -- shape / access --------------------------------------------------------

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j):
        return Mat(self.tower, tuple((r[j],) for r in self.rows))

    def take_cols(self, idxs):
        return Mat(self.tower, tuple(tuple(r[j] for j in idxs) for r in self.rows))

    def col_entries(self, j):
        return tuple(r[j] for r in self.rows)

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other):
        self._compat(other)
        return Mat(
            self.tower,
            tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)),
        )

    def __sub__(self, other):
        self._compat(other)
        return Mat(
            self.tower,
            tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)),
        )

    def __neg__(self):
        return Mat(self.tower, tuple(tuple(-a for a in r) for r in self.rows))

    def __mul__(self, c):
        if isinstance(c, int):
            c = self.tower.scalar(c)
        if not isinstance(c, FieldElem):
            return NotImplemented
        return Mat(self.tower, tuple(tuple(a * c for a in r) for r in self.rows))

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        if self.tower is not other.tower or self.ncols != other.nrows:
            raise InputError("matmul shape or tower mismatch")
        bt = tuple(zip(*other.rows))  # columns of other
        z = self.tower.zero
        out = []
        for r in self.rows:
            row = []
            for c in bt:
                acc = z
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(tuple(row))
        return Mat(self.tower, tuple(out))

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if self.nrows != self.ncols:
            raise InputError("matrix power needs a square matrix")
        if n < 0:
            return self.inv() ** (-n)
        acc = Mat.identity(self.tower, self.nrows)
        base = self
        while n:
            if n & 1:
                acc = acc @ base
            base = base @ base
            n >>= 1
        return acc

    def _compat(self, other):
        if not isinstance(other, Mat) or other.tower is not self.tower or other.shape != self.shape:
            raise InputError("matrix shape or tower mismatch")

    # -- structure ----------------------------------------------------------------

    @property
    def T(self):
        return Mat(self.tower, tuple(zip(*self.rows)))

    def conj(self):
        if not self.tower.has_conj:
            return self
        return Mat(self.tower, tuple(tuple(a.conj() for a in r) for r in self.rows))

    def twisted(self, t):
        return self.conj() if t % 2 else self

    def trace(self):
        acc = self.tower.zero
        for i in range(min(self.shape)):
            acc = acc + self.rows[i][i]
        return acc

    def is_zero(self):
        return not any(any(r) for r in self.rows)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.tower is other.tower and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        if self.tower.deg == 1:
            body = ",".join("[" + ",".join(str(a.coords[0]) for a in r) + "]" for r in self.rows)
        else:
            body = ",".join(
                "[" + ",".join("".join(map(str, a.coords)) for a in r) + "]" for r in self.rows
            )
        return f"Mat[{body}]"

    # -- elimination ------------------------------------------------------------------

    def rref(self):
        """Reduced row echelon form: (R, pivot column list)."""
        rows = [list(r) for r in self.rows]
        m, n = self.nrows, self.ncols
        piv = []
        r = 0
        for c in range(n):
            pr = next((i for i in range(r, m) if rows[i][c]), None)
            if pr is None:
                continue
            rows[r], rows[pr] = rows[pr], rows[r]
            inv = rows[r][c].inv()
            rows[r] = [x * inv for x in rows[r]]
            for i in range(m):
                if i != r and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
            piv.append(c)
            r += 1
            if r == m:
                break
        return Mat(self.tower, tuple(tuple(row) for row in rows)), piv

    def rank(self):
        return len(self.rref()[1])

    def det(self):
        if self.nrows != self.ncols:
            raise InputError("determinant needs a square matrix")
        rows = [list(r) for r in self.rows]
        n = self.nrows
        d = self.tower.one
        for c in range(n):
            pr = next((i for i in range(c, n) if rows[i][c]), None)
            if pr is None:
                return self.tower.zero
            if pr != c:
                rows[c], rows[pr] = rows[pr], rows[c]
                d = -d
            pivot = rows[c][c]
            d = d * pivot
            inv = pivot.inv()
            for i in range(c + 1, n):
                if rows[i][c]:
                    f = rows[i][c] * inv
                    for j in range(c, n):
                        rows[i][j] = rows[i][j] - f * rows[c][j]
        return d

    def inv(self):
        if self.nrows != self.ncols:
            raise InputError("inverse needs a square matrix")
        n = self.nrows
        aug = hstack([self, Mat.identity(self.tower, n)])
        R, piv = aug.rref()
        if piv != list(range(n)):
            raise SingularMatrixError("matrix is singular")
        return Mat(self.tower, tuple(r[n:] for r in R.rows))

    def solve_right(self, b):
        """One X with self @ X = b (free variables zero), or None."""
        if b.nrows != self.nrows or b.tower is not self.tower:
            raise InputError("solve shape or tower mismatch")
        n, k = self.ncols, b.ncols
        R, piv = hstack([self, b]).rref()
        for r in range(len(piv)):
            if piv[r] >= n:
                return None  # a pivot landed in the right-hand block
        z = self.tower.zero
        out = [[z] * k for _ in range(n)]
        for r, pc in enumerate(piv):
            for j in range(k):
                out[pc][j] = R.rows[r][n + j]
        return Mat(self.tower, tuple(tuple(r) for r in out))

    def right_kernel_basis(self):
        """Columns spanning the right kernel, as a list of n x 1 Mats."""
        R, piv = self.rref()
        n = self.ncols
        free = [c for c in range(n) if c not in piv]
        z, o = self.tower.zero, self.tower.one
        out = []
        for fc in free:
            v = [z] * n
            v[fc] = o
            for r, pc in enumerate(piv):
                v[pc] = -R.rows[r][fc]
            out.append(Mat.column(self.tower, v))
        return out

    def serialize(self):
        return [[a.serialize() for a in r] for r in self.rows]


def mat_from_serialized(tower, data):
    try:
        return Mat.from_rows(tower, [[tower.elem(e) for e in row] for row in data])
    except (TypeError, InputError) as e:
        raise InputError(f"bad matrix data: {e}") from e


def hstack(mats):
    t = mats[0].tower
    m = mats[0].nrows
    if any(x.nrows != m or x.tower is not t for x in mats):
        raise InputError("hstack mismatch")
    return Mat(t, tuple(sum((x.rows[i] for x in mats), ()) for i in range(m)))


def vstack(mats):
    t = mats[0].tower
    n = mats[0].ncols
    if any(x.ncols != n or x.tower is not t for x in mats):
        raise InputError("vstack mismatch")
    return Mat(t, sum((x.rows for x in mats), ()))


def block_diag(tower, mats):
    n = sum(x.ncols for x in mats)
    m = sum(x.nrows for x in mats)
    z = tower.zero
    rows = [[z] * n for _ in range(m)]
    i0 = j0 = 0
    for x in mats:
        for i, r in enumerate(x.rows):
            for j, a in enumerate(r):
                rows[i0 + i][j0 + j] = a
        i0 += x.nrows
        j0 += x.ncols
    return Mat(tower, tuple(tuple(r) for r in rows))


def poly_at(f, A):
    """Evaluate a poly.py polynomial at a square matrix (Horner)."""
    n = A.nrows
    acc = Mat.zeros(A.tower, n, n)
    for c in reversed(f):
        acc = acc @ A + Mat.diag(A.tower, [c] * n)
    return acc


class SemiLinear:
    """A semilinear map x -> M * conj^twist(x)."""

    __slots__ = ("mat", "twist")

    def __init__(self, mat, twist):
        self.mat = mat
        self.twist = twist % 2

    def apply(self, v):
        return self.mat @ v.twisted(self.twist)

    def __matmul__(self, other):
        if not isinstance(other, SemiLinear):
            return NotImplemented
        return SemiLinear(self.mat @ other.mat.twisted(self.twist), self.twist + other.twist)

    def square(self):
        return self @ self

    def inverse(self):
        return SemiLinear(self.mat.inv().twisted(self.twist), self.twist)

    def __eq__(self, other):
        if not isinstance(other, SemiLinear):
            return NotImplemented
        return self.twist == other.twist and self.mat == other.mat

    def __hash__(self):
        return hash((self.twist, self.mat))

    def __repr__(self):
        return f"SemiLinear(twist={self.twist}, {self.mat!r})"
