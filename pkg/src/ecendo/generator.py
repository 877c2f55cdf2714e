"""The endomorphism generator P_n = tau^n(P) and its observables."""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfiguration, NotInvertible

__all__ = ["Observable", "X", "Y", "Monomial", "POLE", "PoleMark", "GeneratorState"]


class PoleMark:
    """Sentinel emitted when the observable has a pole at P_n."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"


POLE = PoleMark()


@dataclass(frozen=True)
class Observable:
    """f = x^i y^j with j in {0, 1}; its only pole is at infinity, of order 2i + 3j."""

    i: int
    j: int = 0

    def __post_init__(self):
        if self.i < 0 or self.j not in (0, 1) or self.pole_degree < 2:
            raise InvalidConfiguration(f"x^{self.i} y^{self.j} is not an admissible observable")

    @property
    def pole_degree(self):
        return 2 * self.i + 3 * self.j

    @property
    def name(self):
        if (self.i, self.j) == (1, 0):
            return "x"
        if (self.i, self.j) == (0, 1):
            return "y"
        return f"x^{self.i}*y^{self.j}"

    def admissible(self, p):
        """True when f cannot be z^p - z for a function z.

        Such f would have pole order p * deg z with deg z >= 2 at infinity.
        """
        d = self.pole_degree
        return d % p != 0 or d < 2 * p

    def check(self, p):
        if not self.admissible(p):
            raise InvalidConfiguration(
                f"{self.name} has pole degree {self.pole_degree}; admissibility in characteristic "
                f"{p} is not established"
            )

    def code(self, F, P):
        """Value at P as a field code, or None at the pole."""
        if P.x is None:
            return None
        v = F.pow(P.x, self.i)
        if self.j:
            v = F.mul(v, P.y)
        return v

    def __call__(self, P):
        c = self.code(P.group.field, P)
        return POLE if c is None else P.group.field.element(c)

    @classmethod
    def parse(cls, text):
        text = text.strip().lower().replace(" ", "")
        if text == "x":
            return cls(1, 0)
        if text == "y":
            return cls(0, 1)
        if text.startswith("monomial(") and text.endswith(")"):
            i, j = text[len("monomial(") : -1].split(",")
            return cls(int(i), int(j))
        raise InvalidConfiguration(f"unknown observable {text!r}")


X = Observable(1, 0)
Y = Observable(0, 1)


def Monomial(i, j):
    return Observable(i, j)


class GeneratorState:
    """Iterator over P_n = tau^n P (n = 1, 2, ...) for an integral tau in End(E).

    The state carries the pair (P_n, w(P_n)); one step uses
    tau(Q) = X Q + Y w(Q) and w(tau Q) = X w(Q) + Y (D w(Q) - N0 Q).
    """

    def __init__(self, ring, P, tau, allow_tail=False):
        ring.require_certified()
        if P.x is None:
            raise InvalidConfiguration("the starting point must not be infinity")
        self.ring = ring
        self.curve = ring.curve
        self.P = P
        self.tau = ring.from_element(tau) if not hasattr(tau, "element") else tau
        self.alpha = self.tau.element
        self.ann = ring.annihilator(P)
        self.ell = self.ann.ell
        self.coprime = ring.order.is_coprime(self.alpha, self.ann.ideal)
        if not self.coprime and not allow_tail:
            raise NotInvertible("sequence not purely periodic: tau is not prime to ann(P)")
        self.T = ring.multiplicative_order(self.alpha, self.ann) if self.coprime else None
        self.n = 0
        self.current = P
        self._omega = self.ann.W

    @property
    def period(self):
        return self.T

    def clone(self):
        other = object.__new__(GeneratorState)
        other.__dict__.update(self.__dict__)
        return other

    def next(self):
        G = self.P.group
        O = self.ring.order
        x, y = self.alpha.x, self.alpha.y
        Q, W = self.current, self._omega
        newQ = G.add(G.mul(x, Q), G.mul(y, W))
        omega_W = G.add(G.mul(O.D, W), G.mul(-O.N0, Q))
        newW = G.add(G.mul(x, W), G.mul(y, omega_W))
        self.current, self._omega = newQ, newW
        self.n += 1
        return newQ

    def __iter__(self):
        return self

    def __next__(self):
        return self.next()

    def advance(self, k):
        for _ in range(k):
            self.next()
        return self

    def point_at(self, n):
        """P_n from the residue of tau^n modulo ann(P) (random access)."""
        a = self.ann.ideal
        res = a.reduce(*(self.alpha**n))
        return self.ring.apply_element(res, self.P, W=self.ann.W)

    def emit(self, f, length):
        """f(P_n) for the next ``length`` steps, with POLE where P_n = infinity."""
        out = []
        for _ in range(length):
            Q = self.next()
            out.append(f(Q))
        return out

    def emit_codes(self, f, length):
        """Like :meth:`emit` but as a numpy array of codes, -1 marking poles."""
        F = self.P.group.field
        out = np.empty(length, dtype=np.int64)
        for k in range(length):
            c = f.code(F, self.next())
            out[k] = -1 if c is None else c
        return out

    def orbit(self, length):
        return [self.next() for _ in range(length)]

    def tail_and_period(self, limit=None):
        """(tail length, period) of the orbit P_0, P_1, ... by direct iteration."""
        state = self.clone()
        state.n, state.current, state._omega = 0, self.P, self.ann.W
        seen = {self.P.key(): 0}
        limit = limit or self.ann.ideal.norm + 1
        for n in range(1, limit + 1):
            Q = state.next()
            k = Q.key()
            if k in seen:
                return seen[k], n - seen[k]
            seen[k] = n
        raise AssertionError("orbit longer than the residue ring")

