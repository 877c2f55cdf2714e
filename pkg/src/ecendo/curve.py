"""Weierstrass curves over F_q and their groups of points over F_{q^m}.

A curve is y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6.  The group of
points over F_{q^m} is a :class:`WeierstrassGroup`; its points store integer
codes of the extension field and use the affine chord-tangent law.
"""

from math import isqrt

import numpy as np

from .errors import DomainMismatch, ScaleLimit, SingularCurve, Supersingular
from .field import FieldElement, subfield_embedding
from .ntheory import factor, fundamental_decomposition

__all__ = [
    "Curve",
    "WeierstrassGroup",
    "Point",
    "batch_counts",
    "batch_discriminant",
    "x_counts",
    "frobenius_traces",
    "COUNT_BUDGET",
]

COUNT_BUDGET = 10**7
_CHUNK = 1 << 18


def _code(field, value):
    if isinstance(value, FieldElement):
        return field(value).code
    if isinstance(value, (int, np.integer)):
        return field.from_int(int(value))
    return field.from_digits(value)


def frobenius_traces(t, q, m):
    """s_m = alpha^m + conj(alpha)^m for the roots of X^2 - tX + q."""
    s_prev, s = 2, t
    if m == 0:
        return 2
    for _ in range(m - 1):
        s_prev, s = s, t * s - q * s_prev
    return s


# -- vectorised kernels ---------------------------------------------------------


def _b_invariants(F, a1, a2, a3, a4, a6):
    """b2, b4, b6, b8 for (arrays of) coefficient codes in F."""
    mul, add, sub = F.vmul, F.vadd, F.vsub
    c = lambda n: F.from_int(n)  # noqa: E731
    b2 = add(mul(a1, a1), mul(c(4), a2))
    b4 = add(mul(c(2), a4), mul(a1, a3))
    b6 = add(mul(a3, a3), mul(c(4), a6))
    b8 = sub(
        add(add(mul(mul(a1, a1), a6), mul(c(4), mul(a2, a6))), mul(a2, mul(a3, a3))),
        add(mul(a1, mul(a3, a4)), mul(a4, a4)),
    )
    return b2, b4, b6, b8


def batch_discriminant(F, coeffs):
    """Discriminants of the curves given as rows (a1, a2, a3, a4, a6) of codes."""
    A = np.asarray(coeffs, dtype=np.int64).reshape(-1, 5)
    b2, b4, b6, b8 = _b_invariants(F, *(A[:, i] for i in range(5)))
    mul, add, sub = F.vmul, F.vadd, F.vsub
    c = lambda n: np.full(len(A), F.from_int(n), dtype=np.int64)  # noqa: E731
    t1 = add(mul(mul(b2, b2), b8), mul(c(8), mul(b4, mul(b4, b4))))
    t2 = sub(mul(c(9), mul(b2, mul(b4, b6))), mul(c(27), mul(b6, b6)))
    return sub(t2, t1)


def x_counts(F, coeffs, X):
    """Number of y with (x, y) on the curve, for each curve row and each x in X.

    ``coeffs`` has shape (n, 5); the result has shape (n, len(X)).
    """
    A = np.asarray(coeffs, dtype=np.int64).reshape(-1, 5)
    a1, a2, a3, a4, a6 = (A[:, i : i + 1] for i in range(5))
    X = np.asarray(X, dtype=np.int64).reshape(1, -1)
    shape = (A.shape[0], X.shape[1])
    Xb = np.broadcast_to(X, shape)
    mul, add = F.vmul, F.vadd
    h = add(mul(np.broadcast_to(a1, shape), Xb), np.broadcast_to(a3, shape))
    r = add(Xb, np.broadcast_to(a2, shape))
    r = add(mul(r, Xb), np.broadcast_to(a4, shape))
    r = add(mul(r, Xb), np.broadcast_to(a6, shape))
    if F.p != 2:
        disc = add(mul(h, h), mul(np.full(shape, F.from_int(4), dtype=np.int64), r))
        return 1 + F.vchi(disc)
    # y = h z turns the equation into z^2 + z = r / h^2
    inv_h = F.vinv(h)
    w = mul(r, mul(inv_h, inv_h))
    solvable = F.vtrace(w) == 0
    return np.where(h == 0, 1, np.where(solvable, 2, 0))


def batch_counts(F, coeffs):
    """#E(F) for each coefficient row, by exhaustive enumeration of x."""
    A = np.asarray(coeffs, dtype=np.int64).reshape(-1, 5)
    q = F.q
    out = np.zeros(len(A), dtype=np.int64)
    rows = max(1, (1 << 22) // q)
    for start in range(0, len(A), rows):
        block = A[start : start + rows]
        total = np.zeros(len(block), dtype=np.int64)
        for x0 in range(0, q, _CHUNK):
            X = np.arange(x0, min(q, x0 + _CHUNK), dtype=np.int64)
            total += x_counts(F, block, X).sum(axis=1)
        out[start : start + rows] = total + 1
    return out


# -- curves ----------------------------------------------------------------------


class Curve:
    """An ordinary elliptic curve over F_q with cached Frobenius data."""

    def __init__(self, field, a1=0, a2=0, a3=0, a4=0, a6=0, *, allow_supersingular=False):
        self.field = field
        self.coeffs = tuple(_code(field, a) for a in (a1, a2, a3, a4, a6))
        disc = int(batch_discriminant(field, [self.coeffs])[0])
        if disc == 0:
            raise SingularCurve(f"curve {self!r} is singular")
        self.discriminant = FieldElement(field, disc)
        self.q = field.q
        self.p = field.p
        self.n_points = self.count_points(1)
        self.t = self.q + 1 - self.n_points
        self.ordinary = self.t % self.p != 0
        if not self.ordinary and not allow_supersingular:
            raise Supersingular(f"supersingular: p | t = {self.t}; out of scope")
        self.frobenius_discriminant = self.t * self.t - 4 * self.q
        if self.frobenius_discriminant < 0:
            self.D_K, self.v = fundamental_decomposition(self.frobenius_discriminant)
        else:
            self.D_K, self.v = None, None
        self._groups = {}

    # coefficients as field elements
    a1 = property(lambda self: FieldElement(self.field, self.coeffs[0]))
    a2 = property(lambda self: FieldElement(self.field, self.coeffs[1]))
    a3 = property(lambda self: FieldElement(self.field, self.coeffs[2]))
    a4 = property(lambda self: FieldElement(self.field, self.coeffs[3]))
    a6 = property(lambda self: FieldElement(self.field, self.coeffs[4]))

    def __eq__(self, other):
        return isinstance(other, Curve) and (self.field, self.coeffs) == (other.field, other.coeffs)

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        names = ("a1", "a2", "a3", "a4", "a6")
        body = ", ".join(
            f"{n}={FieldElement(self.field, c)!r}" for n, c in zip(names, self.coeffs) if c
        )
        return f"Curve({self.field!r}, {body})"

    def order(self, m=1):
        """#E(F_{q^m}) from the Frobenius trace (no enumeration)."""
        return self.q**m + 1 - frobenius_traces(self.t, self.q, m)

    def count_points(self, m=1):
        """#E(F_{q^m}) by enumerating every x of F_{q^m}."""
        Q = self.field.q**m
        if Q > COUNT_BUDGET:
            raise ScaleLimit(f"q^m = {Q} exceeds the enumeration budget {COUNT_BUDGET}")
        emb = self.field.extension(m)
        F = emb.target
        coeffs = [emb(c) for c in self.coeffs]
        return int(batch_counts(F, [coeffs])[0])

    def group(self, m=1):
        if m not in self._groups:
            self._groups[m] = WeierstrassGroup(self, m)
        return self._groups[m]

    def point(self, x, y, m=1):
        return self.group(m).point(x, y)

    @property
    def infinity(self):
        return self.group(1).infinity

    def points(self, m=1):
        return self.group(m).points()

    def rational_torsion(self, a, m=1):
        """Structure (d1, d2), d1 | d2, of E[a] inside E(F_{q^m})."""
        return self.group(m).torsion_structure(a)

    def frobenius_period(self, n):
        """Least M with pi^M = 1 in Z[pi]/(n); then E[n] lies in E(F_{q^M})."""
        if n == 1:
            return 1
        t, q = self.t % n, self.q % n
        # track pi^M = x + y pi modulo n
        x, y = 0, 1
        for M in range(1, n * n + 1):
            if x % n == 1 and y % n == 0:
                return M
            x, y = (-q * y) % n, (x + t * y) % n
        raise AssertionError("pi is not invertible modulo n")


class WeierstrassGroup:
    """E(F_{q^m}) with points stored as codes of F_{q^m}."""

    def __init__(self, curve, m):
        self.curve = curve
        self.m = m
        self.embedding = curve.field.extension(m)
        self.field = self.embedding.target
        F = self.field
        a = [self.embedding(c) for c in curve.coeffs]
        self.a1, self.a2, self.a3, self.a4, self.a6 = a
        self.order = curve.order(m)
        self.q = curve.q
        b = _b_invariants(F, *(np.array([c], dtype=np.int64) for c in a))
        self.b2, self.b4, self.b6, self.b8 = (int(v[0]) for v in b)
        self.infinity = Point(self, None, None)
        self._order_factors = None

    def __repr__(self):
        return f"E(F_{self.q}^{self.m}) of {self.curve!r}"

    def _check(self, P):
        if P.group is not self:
            if P.group.curve != self.curve or P.group.m != self.m:
                raise DomainMismatch("points lie on different curves or extensions")

    # -- construction ------------------------------------------------------------
    def contains(self, x, y):
        F = self.field
        lhs = F.add(F.mul(y, y), F.mul(y, F.add(F.mul(self.a1, x), self.a3)))
        return lhs == self.rhs(x)

    def rhs(self, x):
        F = self.field
        r = F.add(x, self.a2)
        r = F.add(F.mul(r, x), self.a4)
        return F.add(F.mul(r, x), self.a6)

    def point(self, x, y):
        F = self.field
        xc, yc = _code(F, x), _code(F, y)
        if not self.contains(xc, yc):
            raise ValueError(f"({x}, {y}) is not on {self!r}")
        return Point(self, xc, yc)

    def lift_x(self, x):
        """All points with x-coordinate code ``x`` (zero, one or two)."""
        F = self.field
        h = F.add(F.mul(self.a1, x), self.a3)
        r = self.rhs(x)
        if F.p != 2:
            disc = F.add(F.mul(h, h), F.mul(F.from_int(4), r))
            s = F.sqrt(disc)
            if s is None:
                return []
            half = F.inv(F.from_int(2))
            y1 = F.mul(F.sub(s, h), half)
            y2 = F.mul(F.sub(F.neg(s), h), half)
            ys = [y1] if y1 == y2 else sorted((y1, y2))
        elif h == 0:
            ys = [F.sqrt(r)]
        else:
            hinv = F.inv(h)
            z = F.artin_schreier_root(F.mul(r, F.mul(hinv, hinv)))
            if z is None:
                return []
            y1 = F.mul(h, z)
            ys = sorted((y1, F.add(y1, h)))
        return [Point(self, x, y) for y in ys]

    def points(self):
        """All points: infinity first, then affine points by increasing x code."""
        yield self.infinity
        F = self.field
        coeffs = [[self.a1, self.a2, self.a3, self.a4, self.a6]]
        for x0 in range(0, F.q, _CHUNK):
            X = np.arange(x0, min(F.q, x0 + _CHUNK), dtype=np.int64)
            n = x_counts(F, coeffs, X)[0]
            for x in X[n > 0].tolist():
                yield from self.lift_x(x)

    def random_point(self, rng):
        """A uniformly random x with a point above it (``rng`` is a numpy Generator)."""
        while True:
            x = int(rng.integers(self.field.q))
            pts = self.lift_x(x)
            if pts:
                return pts[int(rng.integers(len(pts)))]

    # -- group law ----------------------------------------------------------------
    def neg(self, P):
        if P.x is None:
            return P
        F = self.field
        return Point(self, P.x, F.sub(F.neg(P.y), F.add(F.mul(self.a1, P.x), self.a3)))

    def add(self, P, Q):
        if P.x is None:
            return Q
        if Q.x is None:
            return P
        F = self.field
        x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
        if x1 == x2:
            if F.add(F.add(y1, y2), F.add(F.mul(self.a1, x2), self.a3)) == 0:
                return self.infinity
            num = F.add(
                F.add(F.mul(F.from_int(3), F.mul(x1, x1)), F.mul(F.from_int(2), F.mul(self.a2, x1))),
                F.sub(self.a4, F.mul(self.a1, y1)),
            )
            den = F.add(F.add(F.mul(F.from_int(2), y1), F.mul(self.a1, x1)), self.a3)
        else:
            num = F.sub(y2, y1)
            den = F.sub(x2, x1)
        lam = F.mul(num, F.inv(den))
        nu = F.sub(y1, F.mul(lam, x1))
        x3 = F.sub(F.sub(F.add(F.mul(lam, lam), F.mul(self.a1, lam)), self.a2), F.add(x1, x2))
        y3 = F.sub(F.neg(F.mul(F.add(lam, self.a1), x3)), F.add(nu, self.a3))
        return Point(self, x3, y3)

    def mul(self, n, P):
        n = int(n)
        if n < 0:
            return self.mul(-n, self.neg(P))
        result = self.infinity
        addend = P
        while n:
            if n & 1:
                result = self.add(result, addend)
            n >>= 1
            if n:
                addend = self.add(addend, addend)
        return result

    def frobenius(self, P, power=1):
        """(x^(q^power), y^(q^power))."""
        if P.x is None:
            return P
        F = self.field
        e = self.q**power
        return Point(self, F.pow(P.x, e), F.pow(P.y, e))

    # -- orders and torsion --------------------------------------------------------
    @property
    def order_factors(self):
        if self._order_factors is None:
            self._order_factors = factor(self.order)
        return self._order_factors

    def point_order(self, P):
        """Least l >= 1 with lP = infinity, by peeling prime factors of #E(F_{q^m})."""
        self._check(P)
        if P.x is None:
            return 1
        o = self.order
        for r, e in self.order_factors:
            for _ in range(e):
                if self.mul(o // r, P).x is None:
                    o //= r
                else:
                    break
        return o

    def division_values(self, n, X):
        """Values at X of f_n, where psi_n = f_n for odd n and psi_n = psi_2 f_n for even n.

        Also returns F(X) = psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6.
        """
        F = self.field
        X = np.asarray(X, dtype=np.int64)
        mul, add, sub = F.vmul, F.vadd, F.vsub

        def const(c):
            return np.full(X.shape, F.from_int(c) if isinstance(c, int) else c, dtype=np.int64)

        def poly(cs):
            # cs are codes, highest degree first
            acc = np.full(X.shape, cs[0], dtype=np.int64)
            for c in cs[1:]:
                acc = add(mul(acc, X), np.full(X.shape, c, dtype=np.int64))
            return acc

        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        Fm = lambda a, b: F.mul(a, b)  # noqa: E731
        i = F.from_int
        psi2sq = poly([i(4), b2, Fm(i(2), b4), b6])
        memo = {
            0: const(0),
            1: const(1),
            2: const(1),
            3: poly([i(3), b2, Fm(i(3), b4), Fm(i(3), b6), b8]),
            4: poly(
                [
                    i(2),
                    b2,
                    Fm(i(5), b4),
                    Fm(i(10), b6),
                    Fm(i(10), b8),
                    F.sub(Fm(b2, b8), Fm(b4, b6)),
                    F.sub(Fm(b4, b8), Fm(b6, b6)),
                ]
            ),
        }
        ff = mul(psi2sq, psi2sq)

        def f(k):
            if k in memo:
                return memo[k]
            j = k // 2
            if k % 2:
                a = mul(f(j + 2), mul(f(j), mul(f(j), f(j))))
                b = mul(f(j - 1), mul(f(j + 1), mul(f(j + 1), f(j + 1))))
                if j % 2 == 0:
                    a = mul(ff, a)
                else:
                    b = mul(ff, b)
                val = sub(a, b)
            else:
                left = mul(mul(f(j - 1), f(j - 1)), f(j + 2))
                right = mul(f(j - 2), mul(f(j + 1), f(j + 1)))
                val = mul(f(j), sub(left, right))
            memo[k] = val
            return val

        return f(n), psi2sq

    def torsion_points(self, a):
        """Every point P of E(F_{q^m}) with aP = infinity, sorted by (x, y)."""
        a = int(a)
        if a < 1:
            raise ValueError("torsion index must be positive")
        F = self.field
        if F.q > COUNT_BUDGET:
            raise ScaleLimit(f"field of order {F.q} exceeds the enumeration budget")
        out = [self.infinity]
        if a == 1:
            return out
        for x0 in range(0, F.q, _CHUNK):
            X = np.arange(x0, min(F.q, x0 + _CHUNK), dtype=np.int64)
            fa, psi2sq = self.division_values(a, X)
            zero = fa == 0
            if a % 2 == 0:
                zero |= psi2sq == 0
            for x in X[zero].tolist():
                out.extend(P for P in self.lift_x(x) if self.mul(a, P).x is None)
        return out

    def torsion_structure(self, a):
        pts = self.torsion_points(a)
        exponent = 1
        for P in pts:
            o = self.point_order(P)
            exponent = exponent * o // _gcd(exponent, o)
        return len(pts) // exponent, exponent

    def division_points(self, P, w):
        """All R in E(F_{q^m}) with wR = P."""
        self._check(P)
        w = int(w)
        F = self.field
        if w == 1:
            return [P]
        if P.x is None:
            return self.torsion_points(w)
        out = []
        for x0 in range(0, F.q, _CHUNK):
            X = np.arange(x0, min(F.q, x0 + _CHUNK), dtype=np.int64)
            fw, psi2sq = self.division_values(w, X)
            fp, _ = self.division_values(w + 1, X)
            fm, _ = self.division_values(w - 1, X)
            mul, sub = F.vmul, F.vsub
            if w % 2:
                psiw_sq = mul(fw, fw)
                cross = mul(psi2sq, mul(fp, fm))
            else:
                psiw_sq = mul(psi2sq, mul(fw, fw))
                cross = mul(fp, fm)
            val = sub(mul(sub(X, np.full(X.shape, P.x, dtype=np.int64)), psiw_sq), cross)
            hit = (val == 0) & (psiw_sq != 0)
            for x in X[hit].tolist():
                out.extend(R for R in self.lift_x(x) if self.mul(w, R) == P)
        return out

    # -- embeddings between extensions ---------------------------------------------
    def embed_into(self, bigger):
        """Map E(F_{q^m}) -> E(F_{q^M}) for M a multiple of m, compatible with F_q."""
        if bigger.curve != self.curve or bigger.m % self.m:
            raise DomainMismatch("target group is not an extension of this one")
        if bigger.m == self.m:
            return GroupEmbedding(self, bigger, None)
        base = self.curve.field
        anchor = None
        if base.k > 1:
            gen = base.p  # code of X in F_q
            anchor = (self.embedding(gen), bigger.embedding(gen))
        return GroupEmbedding(self, bigger, subfield_embedding(self.field, bigger.field, anchor))


class GroupEmbedding:
    """Inclusion E(F_{q^m}) -> E(F_{q^M}) induced by a field embedding."""

    def __init__(self, source, target, field_map):
        self.source = source
        self.target = target
        self.field_map = field_map

    def __call__(self, P):
        if P.x is None:
            return self.target.infinity
        if self.field_map is None:
            return Point(self.target, P.x, P.y)
        return Point(self.target, self.field_map(P.x), self.field_map(P.y))

    def preimage(self, P):
        """The point of the source group mapping to P, or None."""
        if P.x is None:
            return self.source.infinity
        if self.field_map is None:
            return Point(self.source, P.x, P.y)
        x, y = self.field_map.preimage(P.x), self.field_map.preimage(P.y)
        if x is None or y is None:
            return None
        return Point(self.source, x, y)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


class Point:
    """Infinity (x = y = None) or an affine point, stored as field codes."""

    __slots__ = ("group", "x", "y")

    def __init__(self, group, x, y):
        self.group = group
        self.x = x
        self.y = y

    @property
    def is_infinity(self):
        return self.x is None

    @property
    def xe(self):
        return None if self.x is None else FieldElement(self.group.field, self.x)

    @property
    def ye(self):
        return None if self.y is None else FieldElement(self.group.field, self.y)

    def __add__(self, other):
        self.group._check(other)
        return self.group.add(self, other)

    def __neg__(self):
        return self.group.neg(self)

    def __sub__(self, other):
        self.group._check(other)
        return self.group.add(self, self.group.neg(other))

    def __rmul__(self, n):
        if not isinstance(n, (int, np.integer)):
            return NotImplemented
        return self.group.mul(n, self)

    def frobenius(self, power=1):
        return self.group.frobenius(self, power)

    def order(self):
        return self.group.point_order(self)

    def key(self):
        return (self.x, self.y)

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        same = other.group is self.group or (
            other.group.curve == self.group.curve and other.group.m == self.group.m
        )
        return same and self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        if self.x is None:
            return "O"
        return f"({self.xe!r}, {self.ye!r})"


def hasse_interval(q):
    """Integer range [lo, hi] allowed for #E(F_q)."""
    r = isqrt(4 * q)
    return q + 1 - r, q + 1 + r

