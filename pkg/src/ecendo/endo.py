"""Endomorphisms of an ordinary curve acting on points.

End(E) is the order O of discriminant u^2 D_K with basis (1, w).  Frobenius is
pi = c0 + w_pi w with w_pi = v/u and c0 = (t - w_pi D)/2, so w = (pi - c0)/w_pi.
When w_pi is invertible modulo the order of a point P, w(P) is computed from
pi(P) directly; otherwise w(P) = pi(R) - c0 R for any R with w_pi R = P, found
over an extension field.
"""

from fractions import Fraction
from math import gcd, lcm

from .cm_order import CMOrder, OrderElement, _pair
from .curve import COUNT_BUDGET
from .errors import (
    DenominatorCollision,
    EcendoError,
    NotInvertible,
    ScaleLimit,
    Supersingular,
    UncertifiedRing,
)
from .ntheory import divisors, factor, mult_order

__all__ = [
    "EndRing",
    "Endomorphism",
    "AnnihilatorIdeal",
    "TorsionModule",
    "determine_end_ring",
    "InconsistentOrder",
]


class InconsistentOrder(EcendoError):
    """Residue iteration and point iteration disagree on a period."""


def _scalar_candidates(t, q, m):
    """Residues a mod m that can act as pi on E[m]: 2a = t and a^2 = q mod m."""
    return [a for a in range(m) if (2 * a - t) % m == 0 and (a * a - q) % m == 0]


def _scalar_on_torsion(curve, m, a, budget):
    """Whether pi acts as multiplication by a on all of E[m]."""
    if gcd(a, m) != 1:
        return False
    M = mult_order(a, m)
    if curve.q**M > budget:
        raise ScaleLimit(f"E[{m}] needs F_{curve.q}^{M}, beyond the budget")
    G = curve.group(M)
    pts = G.torsion_points(m)
    if len(pts) != m * m:
        return False
    return all(P.frobenius() == G.mul(a, P) for P in pts)


def determine_end_ring(curve, budget=COUNT_BUDGET):
    """Conductor of End(E) by testing scalar Frobenius action on E[s^e] for s | v."""
    if not curve.ordinary:
        raise Supersingular("supersingular: out of scope")
    v = curve.v
    certified_part = 1
    undecided = 1
    for s, e_max in factor(v) if v > 1 else []:
        for e in range(1, e_max + 1):
            m = s**e
            found = False
            hit_budget = False
            for a in _scalar_candidates(curve.t, curve.q, m):
                try:
                    if _scalar_on_torsion(curve, m, a, budget):
                        found = True
                        break
                except ScaleLimit:
                    hit_budget = True
            if found:
                certified_part = certified_part * s
                continue
            if hit_budget:
                undecided *= s ** (e_max - e + 1)
            break
    u = v // certified_part
    return EndRing(
        curve, u, certified=undecided == 1, u_range=(u // undecided, u), budget=budget
    )


class EndRing:
    """End(E) as an order, with the Frobenius element and the point action."""

    def __init__(self, curve, u, certified=True, u_range=None, budget=COUNT_BUDGET):
        if curve.v % u:
            raise ValueError(f"conductor {u} does not divide v = {curve.v}")
        self.curve = curve
        self.u = u
        self.certified = certified
        self.u_range = u_range or (u, u)
        self.budget = budget
        self.order = CMOrder(curve.D_K, u)
        self.w = curve.v // u
        self.c0 = (curve.t - self.w * self.order.D) // 2
        self.frobenius = OrderElement(self.order, self.c0, self.w)
        if self.frobenius.norm() != curve.q or self.frobenius.trace() != curve.t:
            raise AssertionError("Frobenius element inconsistent with (t, q)")
        # the prime of inseparable endomorphisms, (p, pi)
        self.frobenius_prime = self.order.ideal((curve.p, 0), (self.c0, self.w))
        self._omega_cache = {}

    def __repr__(self):
        flag = "" if self.certified else f", uncertified u in {self.u_range}"
        return f"EndRing({self.order!r}{flag})"

    def require_certified(self):
        if not self.certified:
            raise UncertifiedRing(
                f"End(E) only known to lie between conductors {self.u_range}; out of scope"
            )

    # -- elements --------------------------------------------------------------------
    def endomorphism(self, x, y=0):
        """x + y pi for rationals x, y (must lie in End(E))."""
        return Endomorphism(self, Fraction(x), Fraction(y))

    def from_element(self, alpha):
        X, Y = _pair(alpha)
        y = Fraction(Y, self.w)
        return Endomorphism(self, X - y * self.c0, y)

    def to_element(self, x, y):
        """Coordinates in the basis (1, w) of x + y pi, or None if not integral."""
        X = x + y * self.c0
        Y = y * self.w
        if X.denominator != 1 or Y.denominator != 1:
            return None
        return OrderElement(self.order, int(X), int(Y))

    # -- action on points ------------------------------------------------------------
    def omega_image(self, P):
        """w(P) for the order generator w."""
        G = P.group
        if P.x is None:
            return P
        key = (G.m, P.x, P.y)
        if key in self._omega_cache:
            return self._omega_cache[key]
        ell = G.point_order(P)
        pi_P = P.frobenius()
        if gcd(self.w, ell) == 1:
            inv = pow(self.w, -1, ell)
            W = G.mul(inv, pi_P - G.mul(self.c0, P))
        else:
            W = self._omega_by_division(P)
        self._omega_cache[key] = W
        return W

    def _omega_by_division(self, P):
        G = P.group
        curve = self.curve
        j = 1
        while curve.q ** (G.m * j) <= self.budget:
            big = curve.group(G.m * j)
            emb = G.embed_into(big)
            roots = big.division_points(emb(P), self.w)
            if roots:
                R = roots[0]
                W = emb.preimage(R.frobenius() - big.mul(self.c0, R))
                if W is None:
                    raise AssertionError("w(P) left the field of definition of P")
                return W
            j += 1
        raise ScaleLimit(f"no {self.w}-division point of {P!r} within the budget")

    def apply_element(self, alpha, P, W=None):
        """(X + Y w)(P) for an integral element X + Y w."""
        X, Y = _pair(alpha)
        G = P.group
        if Y == 0:
            return G.mul(X, P)
        if W is None:
            W = self.omega_image(P)
        return G.add(G.mul(X, P), G.mul(Y, W))

    def apply(self, tau, P, strict=False):
        """tau(P) for an endomorphism tau = x + y pi.

        Denominators invertible modulo ord(P) are cleared by modular inversion.
        Otherwise ``strict`` raises DenominatorCollision; the default evaluates
        tau in the basis (1, w) instead.
        """
        if isinstance(tau, OrderElement):
            tau = self.from_element(tau)
        G = P.group
        if P.x is None:
            return P
        d = tau.denominator
        if d == 1:
            return G.add(G.mul(int(tau.x), P), G.mul(int(tau.y), P.frobenius()))
        ell = G.point_order(P)
        if gcd(d, ell) == 1:
            dinv = pow(d, -1, ell)
            x = (tau.x.numerator * (d // tau.x.denominator) * dinv) % ell
            y = (tau.y.numerator * (d // tau.y.denominator) * dinv) % ell
            return G.add(G.mul(x, P), G.mul(y, P.frobenius()))
        if strict:
            raise DenominatorCollision(f"denominator {d} shares a factor with ord(P) = {ell}")
        return self.apply_element(tau.element, P)

    # -- annihilators and orders -----------------------------------------------------
    def annihilator(self, P, W=None):
        """ann(P) = {alpha in End(E) : alpha P = infinity} as an HNF ideal."""
        self.require_certified()
        G = P.group
        if P.x is None:
            raise ValueError("the annihilator of infinity is the unit ideal")
        ell = G.point_order(P)
        if W is None:
            W = self.omega_image(P)
        logs = {}
        Q = G.infinity
        for i in range(ell):
            logs[Q.key()] = i
            Q = G.add(Q, P)
        for c in divisors(ell):
            k = logs.get(G.mul(c, W).key())
            if k is not None:
                ideal = self.order.hnf(ell, (-k) % ell, c)
                return AnnihilatorIdeal(ideal, P, ell, W)
        raise AssertionError("ell * W must lie in <P>")

    def multiplicative_order(self, tau, ann):
        """Period T of tau modulo ann(P), by residues and by iterating points."""
        if isinstance(tau, Endomorphism):
            tau = tau.element
        if tau is None:
            raise ValueError("endomorphism is not integral")
        if not self.order.is_coprime(tau, ann.ideal):
            raise NotInvertible("tau is not prime to ann(P); the orbit is only ultimately periodic")
        T = self.order.residue_order(tau, ann.ideal)
        T_points = self.point_period(tau, ann.point, bound=ann.ideal.norm, W=ann.W)
        if T != T_points:
            raise InconsistentOrder(f"residue order {T} but point period {T_points}")
        return T

    def point_period(self, tau, P, bound, W=None):
        """Least T with tau^T P = P, applying tau to points one step at a time.

        The pair (Q, w Q) is carried along, using w^2 = D w - N0.
        """
        X, Y = _pair(tau)
        G = P.group
        O = self.order
        Q = P
        W = self.omega_image(P) if W is None else W
        for T in range(1, bound + 1):
            wW = G.add(G.mul(O.D, W), G.mul(-O.N0, Q))
            Q, W = G.add(G.mul(X, Q), G.mul(Y, W)), G.add(G.mul(X, W), G.mul(Y, wW))
            if Q == P:
                return T
        raise NotInvertible("orbit of P does not return within the bound")

    # -- torsion of ideals -----------------------------------------------------------
    def frobenius_order_mod(self, ideal):
        return self.order.residue_order(self.frobenius, ideal)

    def torsion_module(self, s, m):
        return TorsionModule(self, s, m)

    def ideal_torsion(self, ideal):
        """E[a] as (module, list of coordinate pairs) over the field pi^M = 1 mod a."""
        self.require_certified()
        if not self.order.is_coprime(self.frobenius, ideal):
            raise NotInvertible("ideal is not prime to (p, pi)")
        M = self.frobenius_order_mod(ideal)
        if self.curve.q**M > self.budget:
            raise ScaleLimit(f"E[a] needs F_{self.curve.q}^{M}, beyond the budget")
        module = self.torsion_module(ideal.s, M)
        return module, module.kernel(ideal)


class Endomorphism:
    """x + y pi with rational x, y, bound to an EndRing."""

    __slots__ = ("ring", "x", "y", "element")

    def __init__(self, ring, x, y):
        self.ring = ring
        self.x = Fraction(x)
        self.y = Fraction(y)
        self.element = ring.to_element(self.x, self.y)
        if self.element is None:
            raise ValueError(f"{self.x} + {self.y} pi is not in End(E)")

    @property
    def denominator(self):
        return self.x.denominator * self.y.denominator // gcd(self.x.denominator, self.y.denominator)

    def norm(self):
        t, q = self.ring.curve.t, self.ring.curve.q
        return self.x * self.x + t * self.x * self.y + q * self.y * self.y

    def __mul__(self, other):
        return self.ring.from_element(self.element * other.element)

    def __pow__(self, e):
        return self.ring.from_element(self.element**e)

    def __eq__(self, other):
        return isinstance(other, Endomorphism) and (self.x, self.y) == (other.x, other.y)

    def __hash__(self):
        return hash((self.x, self.y))

    def __call__(self, P):
        return self.ring.apply(self, P)

    def __repr__(self):
        return f"{self.x} + {self.y}*pi"


class AnnihilatorIdeal:
    """ann(P) together with P, its order and w(P)."""

    __slots__ = ("ideal", "point", "ell", "W")

    def __init__(self, ideal, point, ell, W):
        self.ideal = ideal
        self.point = point
        self.ell = ell
        self.W = W

    @property
    def norm(self):
        return self.ideal.norm

    def __repr__(self):
        return f"ann({self.point!r}) = {self.ideal!r}, l = {self.ell}"


class TorsionModule:
    """E[s](F_{q^m}) as Z_d1 x Z_d2 with the matrix of w in a fixed basis."""

    def __init__(self, ring, s, m):
        self.ring = ring
        self.s = s
        G = ring.curve.group(m)
        self.group = G
        pts = G.torsion_points(s)
        orders = {P.key(): G.point_order(P) for P in pts}
        exponent = max(orders.values())
        P1 = next(P for P in pts if orders[P.key()] == exponent)
        span1 = _multiples(G, P1, exponent)
        d1 = len(pts) // exponent
        P2 = G.infinity
        if d1 > 1:
            for Q in pts:
                if orders[Q.key()] != d1:
                    continue
                if all(G.mul(j, Q).key() not in span1 for j in range(1, d1)):
                    P2 = Q
                    break
            else:
                raise AssertionError("no complement found for the torsion basis")
        self.d1, self.d2 = d1, exponent
        self.basis = (P2, P1)
        self.points = {}
        for i in range(d1):
            base = G.mul(i, P2)
            for j in range(exponent):
                self.points[(i, j)] = base
                base = G.add(base, P1)
        self.logs = {P.key(): c for c, P in self.points.items()}
        if len(self.logs) != len(pts):
            raise AssertionError("basis does not generate the torsion subgroup")
        self.omega_matrix = (self.log(ring.omega_image(P2)), self.log(ring.omega_image(P1)))

    def log(self, P):
        return self.logs[P.key()]

    def point(self, coords):
        return self.points[(coords[0] % self.d1, coords[1] % self.d2)]

    def omega(self, coords):
        i, j = coords
        (a, b), (c, d) = self.omega_matrix
        return ((i * a + j * c) % self.d1, (i * b + j * d) % self.d2)

    def act(self, alpha, coords):
        X, Y = _pair(alpha)
        w = self.omega(coords)
        return ((X * coords[0] + Y * w[0]) % self.d1, (X * coords[1] + Y * w[1]) % self.d2)

    def kernel(self, ideal):
        """Coordinates of every point killed by the ideal."""
        gens = [(ideal.s, 0), (ideal.b, ideal.c)]
        return [c for c in self.points if all(self.act(g, c) == (0, 0) for g in gens)]

    def annihilator(self, coords):
        """ann of the point with these coordinates, computed on coordinates."""
        i, j = coords[0] % self.d1, coords[1] % self.d2
        if (i, j) == (0, 0):
            raise ValueError("the annihilator of infinity is the unit ideal")
        ell = lcm(self.d1 // gcd(i, self.d1), self.d2 // gcd(j, self.d2))
        logs = {((k * i) % self.d1, (k * j) % self.d2): k for k in range(ell)}
        wi, wj = self.omega((i, j))
        for c in divisors(ell):
            k = logs.get(((c * wi) % self.d1, (c * wj) % self.d2))
            if k is not None:
                ideal = self.ring.order.hnf(ell, (-k) % ell, c)
                return AnnihilatorIdeal(ideal, self.point((i, j)), ell, self.point((wi, wj)))
        raise AssertionError("ell * w(P) must lie in <P>")


def _multiples(G, P, n):
    out = set()
    Q = G.infinity
    for _ in range(n):
        out.add(Q.key())
        Q = G.add(Q, P)
    return out
