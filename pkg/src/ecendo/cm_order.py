"""Orders in imaginary quadratic fields, their elements and ideals.

The order of discriminant D = u^2 D_K has Z-basis (1, w) with w = (D + sqrt(D))/2,
so w^2 = D w - (D^2 - D)/4.  Elements are integer pairs (x, y) meaning x + y w.
Ideals are lattices s Z + (b + c w) Z in Hermite normal form.
"""

import math

import numpy as np
from sympy.ntheory import sqrt_mod

from .errors import ConductorCollision, NotInvertible
from .ntheory import euler_phi, factor, prime_factors

__all__ = ["CMOrder", "OrderElement", "IdealHNF", "sieve_coprime_count", "lemma6_ratio"]


def _xgcd(a, b):
    """(g, x, y) with g = gcd(a, b) = a x + b y and g >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        k, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def _hnf(vectors):
    """HNF (s, b, c) of the full-rank lattice spanned by integer pairs (x, y)."""
    px, py = 0, 0
    s = 0
    for x, y in vectors:
        if y == 0:
            s = math.gcd(s, x)
            continue
        if py == 0:
            # the pivot row is empty or purely horizontal
            if px:
                s = math.gcd(s, px)
            px, py = x, y
            continue
        g, alpha, beta = _xgcd(py, y)
        nx, ny = alpha * px + beta * x, g
        # the combination with vanishing second coordinate
        s = math.gcd(s, (y // g) * px - (py // g) * x)
        px, py = nx, ny
    if py == 0:
        s = math.gcd(s, px)
    if py < 0:
        px, py = -px, -py
    if s == 0 or py == 0:
        raise ValueError("vectors do not span a full-rank lattice")
    return s, px % s, py


class CMOrder:
    """The order of discriminant D = u^2 D_K."""

    def __init__(self, D_K, u=1):
        D_K, u = int(D_K), int(u)
        if D_K >= 0 or D_K % 4 not in (0, 1):
            raise ValueError(f"{D_K} is not a negative discriminant")
        if u < 1:
            raise ValueError("conductor must be positive")
        core = D_K if D_K % 4 == 1 else D_K // 4
        if any(e > 1 for _, e in factor(-core)) or (D_K % 4 == 0 and core % 4 == 1):
            raise ValueError(f"{D_K} is not a fundamental discriminant")
        self.D_K = D_K
        self.u = u
        self.D = u * u * D_K
        self.N0 = (self.D * self.D - self.D) // 4
        self.unit_count = {-3: 6, -4: 4}.get(self.D, 2)

    def __eq__(self, other):
        return isinstance(other, CMOrder) and (self.D_K, self.u) == (other.D_K, other.u)

    def __hash__(self):
        return hash((self.D_K, self.u))

    def __repr__(self):
        return f"CMOrder(D={self.D}, D_K={self.D_K}, u={self.u})"

    # -- elements -------------------------------------------------------------------
    def element(self, x, y=0):
        return OrderElement(self, int(x), int(y))

    @property
    def one(self):
        return OrderElement(self, 1, 0)

    @property
    def omega(self):
        return OrderElement(self, 0, 1)

    def norm_form(self, x, y):
        return x * x + self.D * x * y + self.N0 * y * y

    def _mul(self, x1, y1, x2, y2):
        return x1 * x2 - self.N0 * y1 * y2, x1 * y2 + x2 * y1 + self.D * y1 * y2

    def complex_embedding(self, alpha):
        x, y = _pair(alpha)
        return complex(x + y * self.D / 2, y * math.sqrt(-self.D) / 2)

    # -- ideals ---------------------------------------------------------------------
    def ideal(self, *gens):
        """The ideal generated by the given elements (pairs or OrderElements)."""
        vecs = []
        for g in gens:
            x, y = _pair(g)
            vecs.append((x, y))
            vecs.append(self._mul(x, y, 0, 1))
        return IdealHNF(self, *_hnf(vecs))

    def hnf(self, s, b, c):
        return IdealHNF(self, s, b, c)

    @property
    def unit_ideal(self):
        return IdealHNF(self, 1, 0, 1)

    def is_ideal_triple(self, s, b, c):
        if s < 1 or c < 1 or not 0 <= b < s or s % c:
            return False
        return _lattice_contains(s, b, c, *self._mul(s, 0, 0, 1)) and _lattice_contains(
            s, b, c, *self._mul(b, c, 0, 1)
        )

    def ideals_up_to(self, bound):
        """Every ideal of norm at most ``bound``, by scanning HNF triples."""
        out = []
        for s in range(1, bound + 1):
            for c in range(1, bound // s + 1):
                if s % c:
                    continue
                for b in range(0, s, c):
                    if self.is_ideal_triple(s, b, c):
                        out.append(IdealHNF(self, s, b, c))
        return sorted(out, key=lambda a: (a.norm, a.s, a.b, a.c))

    def prime_ideals_above(self, r):
        """Prime ideals containing the rational prime r (r prime to the conductor)."""
        if self.u % r == 0:
            raise ConductorCollision(f"{r} divides the conductor {self.u}")
        if r == 2:
            roots = [a for a in range(2) if (a * a - self.D * a + self.N0) % 2 == 0]
        else:
            sq = sqrt_mod(self.D % r, r, all_roots=True) or []
            half = pow(2, -1, r)
            roots = sorted({((self.D + z) * half) % r for z in sq})
        if not roots:
            return [IdealHNF(self, r, 0, r)]
        return [IdealHNF(self, r, (-a) % r, 1) for a in roots]

    def splitting(self, r):
        """'split', 'inert' or 'ramified' for a prime r prime to the conductor."""
        primes = self.prime_ideals_above(r)
        if len(primes) == 2:
            return "split"
        return "inert" if primes[0].norm == r * r else "ramified"

    def factor_ideal(self, a):
        """Prime-ideal factorisation [(P, e), ...] of an ideal prime to the conductor."""
        self._require_coprime(a)
        out = []
        for r in prime_factors(a.norm) if a.norm > 1 else []:
            for P in self.prime_ideals_above(r):
                e, power = 0, P
                while power.contains_ideal(a):
                    e += 1
                    power = power * P
                if e:
                    out.append((P, e))
        return out

    def _require_coprime(self, a):
        if math.gcd(a.norm, self.u) != 1:
            raise ConductorCollision(f"{a!r} is not prime to the conductor {self.u}")

    def mobius(self, a):
        f = self.factor_ideal(a)
        if any(e > 1 for _, e in f):
            return 0
        return (-1) ** len(f)

    def totient(self, a):
        """phi_K(a) = #(O/a)^*."""
        result = a.norm
        for P, _ in self.factor_ideal(a):
            result = result // P.norm * (P.norm - 1)
        return result

    def omega_count(self, a):
        """Number of distinct prime ideals dividing a."""
        return len(self.factor_ideal(a))

    def divisors(self, a, bound=None):
        """Ideals containing a (equivalently dividing it, for a prime to u), by HNF scan."""
        out = []
        for s in _divisors(a.s):
            for c in _divisors(s):
                if bound is not None and s * c > bound:
                    continue
                for b in range(0, s, c):
                    if self.is_ideal_triple(s, b, c):
                        d = IdealHNF(self, s, b, c)
                        if d.contains_ideal(a):
                            out.append(d)
        return sorted(out, key=lambda d: (d.norm, d.s, d.b, d.c))

    # -- lattice-point counts ----------------------------------------------------
    def ball(self, a, J):
        """Non-zero elements (x, y) of the ideal a with norm at most J."""
        J = math.floor(J)
        if J < 1:
            return
        s, b, c = a.s, a.b, a.c
        absD = -self.D
        jmax = math.isqrt(4 * J // absD) // c + 1
        for j in range(-jmax, jmax + 1):
            y = j * c
            R = 4 * J - absD * y * y
            if R < 0:
                continue
            r = math.isqrt(R)
            A = 2 * j * b + self.D * y
            # |2 s i + A| <= r
            lo = -((r + A) // (2 * s))
            hi = (r - A) // (2 * s)
            for i in range(lo, hi + 1):
                x = i * s + j * b
                if x or y:
                    yield x, y

    def count_norm_ball(self, a, J):
        """#{alpha in a : 0 < n(alpha) <= J}."""
        J = math.floor(J)
        if J < 1:
            return 0
        s, b, c = a.s, a.b, a.c
        absD = -self.D
        jmax = math.isqrt(4 * J // absD) // c + 1
        total = 0
        for j in range(-jmax, jmax + 1):
            y = j * c
            R = 4 * J - absD * y * y
            if R < 0:
                continue
            r = math.isqrt(R)
            A = 2 * j * b + self.D * y
            total += max(0, (r - A) // (2 * s) + (r + A) // (2 * s) + 1)
        return total - 1

    def is_coprime(self, alpha, a):
        """(alpha) + a = O."""
        x, y = _pair(alpha)
        if x == 0 and y == 0:
            return a.s == 1
        return self.ideal((x, y), (a.s, 0), (a.b, a.c)).s == 1

    def count_coprime_norm_ball(self, a, J):
        """#{alpha in O : 0 < n(alpha) <= J, (alpha) + a = O}, by enumeration."""
        self._require_coprime(a)
        if a.s == 1:
            return self.count_norm_ball(a, J)
        primes = [P for P, _ in self.factor_ideal(a)]
        return sum(
            1 for x, y in self.ball(self.unit_ideal, J) if not any(P.contains(x, y) for P in primes)
        )

    def count_coprime_inclusion_exclusion(self, a, J):
        """The same count as a Mobius sum over the divisors of a."""
        self._require_coprime(a)
        total = 0
        for d in self.divisors(a):
            mu = self.mobius(d)
            if mu:
                total += mu * self.count_norm_ball(d, J)
        return total

    def lemma7_main_term(self, a, J):
        """2 pi J / (units * sqrt|D| * n(a)), the principal-ideal count in the ball."""
        return 2 * math.pi * J / (self.unit_count * math.sqrt(-self.D) * a.norm)

    def longest_diagonal(self, a):
        v1 = self.complex_embedding((a.s, 0))
        v2 = self.complex_embedding((a.b, a.c))
        return max(abs(v1 + v2), abs(v1 - v2))

    def lemma7_error_scale(self, a, J):
        d = self.longest_diagonal(a)
        return (math.sqrt(J) * d + d * d) / (math.sqrt(-self.D) * a.norm)

    # -- residues and multiplicative orders ----------------------------------------
    def residue_order(self, tau, a):
        """Least T >= 1 with tau^T = 1 mod a."""
        if not self.is_coprime(tau, a):
            raise NotInvertible(f"{tau!r} is not invertible modulo {a!r}")
        x, y = _pair(tau)
        one = a.reduce(1, 0)
        cur = a.reduce(x, y)
        T = 1
        while cur != one:
            cur = a.reduce(*self._mul(cur[0], cur[1], x, y))
            T += 1
            if T > a.norm:
                raise AssertionError("residue order exceeds the group size")
        return T

    def unit_residues(self, a):
        """Residues (x, y) of O/a that are invertible, in canonical order."""
        return [r for r in a.residues() if self.is_coprime(r, a)]

    def representation_counts(self, tau, a, J, T=None):
        """M_rho(J) for every invertible residue rho, keyed by the residue of rho."""
        powers = self._power_table(tau, a, T)
        counts = {r: 0 for r in self.unit_residues(a)}
        coprime = [g for g in self.ball(self.unit_ideal, J) if self.is_coprime(g, a)]
        inverses = _inverse_table(self, a, counts)
        for n_res in powers:
            for g in coprime:
                rho = a.reduce(*self._mul(*n_res, *inverses[a.reduce(*g)]))
                counts[rho] += 1
        return counts

    def count_representations(self, tau, rho, a, T, J):
        """#{(n, gamma) : 1 <= n <= T, 0 < n(gamma) <= J, tau^n = rho gamma mod a}."""
        if not self.is_coprime(rho, a):
            raise NotInvertible(f"{rho!r} is not invertible modulo {a!r}")
        powers = set(self._power_table(tau, a, T))
        rx, ry = _pair(rho)
        total = 0
        for g in self.ball(self.unit_ideal, J):
            if a.reduce(*self._mul(rx, ry, *g)) in powers:
                total += 1
        return total

    def _power_table(self, tau, a, T):
        if not self.is_coprime(tau, a):
            raise NotInvertible(f"{tau!r} is not invertible modulo {a!r}")
        if T is None:
            T = self.residue_order(tau, a)
        x, y = _pair(tau)
        out = []
        cur = a.reduce(x, y)
        for _ in range(T):
            out.append(cur)
            cur = a.reduce(*self._mul(cur[0], cur[1], x, y))
        return out


def _inverse_table(order, a, units):
    out = {}
    residues = list(units)
    for r in residues:
        if r in out:
            continue
        for s in residues:
            if a.reduce(*order._mul(*r, *s)) == a.reduce(1, 0):
                out[r] = s
                out[s] = r
                break
    return out


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def _pair(alpha):
    if isinstance(alpha, OrderElement):
        return alpha.x, alpha.y
    if isinstance(alpha, int):
        return alpha, 0
    x, y = alpha
    return int(x), int(y)


def _lattice_contains(s, b, c, x, y):
    if y % c:
        return False
    return (x - b * (y // c)) % s == 0


class OrderElement:
    """x + y w in an order; immutable."""

    __slots__ = ("order", "x", "y")

    def __init__(self, order, x, y):
        self.order = order
        self.x = x
        self.y = y

    def _other(self, other):
        if isinstance(other, OrderElement):
            if other.order != self.order:
                raise ValueError("elements of different orders")
            return other.x, other.y
        if isinstance(other, int):
            return other, 0
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return OrderElement(self.order, self.x + o[0], self.y + o[1])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return OrderElement(self.order, self.x - o[0], self.y - o[1])

    def __rsub__(self, other):
        return -(self - other)

    def __neg__(self):
        return OrderElement(self.order, -self.x, -self.y)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return OrderElement(self.order, *self.order._mul(self.x, self.y, *o))

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative powers are not integral")
        result = self.order.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self):
        return OrderElement(self.order, self.x + self.y * self.order.D, -self.y)

    def norm(self):
        return self.order.norm_form(self.x, self.y)

    def trace(self):
        return 2 * self.x + self.y * self.order.D

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return (self.x, self.y) == o

    def __hash__(self):
        return hash((self.x, self.y))

    def __iter__(self):
        return iter((self.x, self.y))

    def __repr__(self):
        return f"{self.x}+{self.y}w"


class IdealHNF:
    """The lattice s Z + (b + c w) Z with 0 <= b < s and c | s."""

    __slots__ = ("order", "s", "b", "c")

    def __init__(self, order, s, b, c):
        if not order.is_ideal_triple(s, b, c):
            raise ValueError(f"({s}, {b}, {c}) is not an ideal of {order!r}")
        self.order = order
        self.s = s
        self.b = b
        self.c = c

    @property
    def norm(self):
        return self.s * self.c

    @property
    def generators(self):
        return OrderElement(self.order, self.s, 0), OrderElement(self.order, self.b, self.c)

    @property
    def least_integer(self):
        return self.s

    def contains(self, x, y=None):
        if y is None:
            x, y = _pair(x)
        return _lattice_contains(self.s, self.b, self.c, x, y)

    __contains__ = contains

    def contains_ideal(self, other):
        return self.contains(other.s, 0) and self.contains(other.b, other.c)

    def reduce(self, x, y):
        """Canonical representative (x', y') with 0 <= x' < s, 0 <= y' < c."""
        k, y2 = divmod(y, self.c)
        return (x - k * self.b) % self.s, y2

    def residues(self):
        return [(x, y) for y in range(self.c) for x in range(self.s)]

    def __mul__(self, other):
        gens = [
            self.order._mul(*g, *h)
            for g in ((self.s, 0), (self.b, self.c))
            for h in ((other.s, 0), (other.b, other.c))
        ]
        return self.order.ideal(*gens)

    def __add__(self, other):
        return self.order.ideal((self.s, 0), (self.b, self.c), (other.s, 0), (other.b, other.c))

    def scale(self, alpha):
        """The ideal alpha * self."""
        x, y = _pair(alpha)
        return self.order.ideal(self.order._mul(x, y, self.s, 0), self.order._mul(x, y, self.b, self.c))

    def is_coprime_to_conductor(self):
        return math.gcd(self.norm, self.order.u) == 1

    def __eq__(self, other):
        return isinstance(other, IdealHNF) and (self.order, self.s, self.b, self.c) == (
            other.order,
            other.s,
            other.b,
            other.c,
        )

    def __hash__(self):
        return hash((self.s, self.b, self.c))

    def __repr__(self):
        return f"Ideal({self.s}, {self.b}+{self.c}w)"


def sieve_coprime_count(J, ell):
    """#{0 < a <= J : gcd(a, ell) = 1} by an Eratosthenes-style sieve."""
    J = int(J)
    if J < 1:
        return 0
    keep = np.ones(J + 1, dtype=bool)
    keep[0] = False
    for r in prime_factors(ell) if ell > 1 else []:
        keep[r::r] = False
    return int(keep.sum())


def lemma6_ratio(J, ell):
    """Sieve count divided by J phi(ell) / ell."""
    return sieve_coprime_count(J, ell) / (J * euler_phi(ell) / ell)

