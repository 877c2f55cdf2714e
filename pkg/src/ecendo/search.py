"""Deterministic scans for curves, points and tau in the regimes the bounds need."""

import itertools
from dataclasses import dataclass

import numpy as np
from sympy import primerange

from .curve import Curve, batch_counts, batch_discriminant
from .endo import determine_end_ring
from .errors import ConductorCollision, InvalidConfiguration, NotInvertible, ScaleLimit
from .field import standard_field
from .formats import tau_to_list

__all__ = ["WANTS", "Candidate", "prime_powers", "curve_family", "search", "best_tau"]

WANTS = ("inert", "split", "full-torsion", "max-period")
SEARCH_Q_LIMIT = 500
# extension fields searched for division points while scanning
SEARCH_BUDGET = 3 * 10**5


@dataclass
class Candidate:
    curve: Curve
    ring: object
    P: object
    tau: object
    T: int
    ann: object

    def to_dict(self):
        E = self.curve
        F = E.field
        ring = self.ring
        return {
            "p": F.p,
            "k": F.k,
            "q": E.q,
            "coeffs": [F.digits(c) for c in E.coeffs],
            "n_points": E.n_points,
            "t": E.t,
            "D_K": E.D_K,
            "v": E.v,
            "u": ring.u,
            "P": [F.digits(self.P.x), F.digits(self.P.y)],
            "tau": tau_to_list(ring.from_element(self.tau)),
            "tau_element": [self.tau[0], self.tau[1]],
            "T": self.T,
            "ann": [self.ann.ideal.s, self.ann.ideal.b, self.ann.ideal.c],
            "ell": self.ann.ell,
        }


def prime_powers(q_min, q_max):
    out = []
    for p in primerange(2, q_max + 1):
        q, k = p, 1
        while q <= q_max:
            if q >= q_min:
                out.append((q, p, k))
            q *= p
            k += 1
    return sorted(out)


def curve_family(F):
    """Coefficient rows of a normal-form family, in lexicographic order.

    Every ordinary curve over F is isomorphic to a member: short Weierstrass for
    p >= 5, y^2 = x^3 + a2 x^2 + a6 for p = 3 and y^2 + xy = x^3 + a2 x^2 + a6 for p = 2.
    """
    q = F.q
    grid = np.array(list(itertools.product(range(q), repeat=2)), dtype=np.int64)
    rows = np.zeros((len(grid), 5), dtype=np.int64)
    if F.p >= 5:
        rows[:, 3], rows[:, 4] = grid[:, 0], grid[:, 1]
    elif F.p == 3:
        rows[:, 1], rows[:, 4] = grid[:, 0], grid[:, 1]
    else:
        rows[:, 0] = 1
        rows[:, 1], rows[:, 4] = grid[:, 0], grid[:, 1]
    return rows


def best_tau(ring, ann):
    """Invertible residue of largest multiplicative order modulo ann (first on ties)."""
    order = ring.order
    best, best_T = None, 0
    for r in order.unit_residues(ann.ideal):
        T = order.residue_order(r, ann.ideal)
        if T > best_T:
            best, best_T = r, T
    return best, best_T


def _points_of_order(G, ell):
    return [P for P in G.torsion_points(ell) if P.x is not None and G.point_order(P) == ell]


def _examine(curve, ell, want, budget=SEARCH_BUDGET):
    ring = determine_end_ring(curve, budget)
    if not ring.certified:
        return None
    order = ring.order
    if want in ("inert", "split", "max-period"):
        if ring.u % ell == 0:
            return None
        try:
            kind = order.splitting(ell)
        except ConductorCollision:
            return None
        wanted = "split" if want == "split" else "inert"
        if kind != wanted:
            return None
    G = curve.group(1)
    points = _points_of_order(G, ell)
    if not points:
        return None
    full = len(G.torsion_points(ell)) == ell * ell
    if want in ("full-torsion", "max-period") and not full:
        return None
    target = order.hnf(ell, 0, ell)
    chosen = None
    for P in points:
        ann = ring.annihilator(P)
        if want != "max-period" or ann.ideal == target:
            chosen = (P, ann)
            break
    if chosen is None:
        return None
    P, ann = chosen
    tau, T = best_tau(ring, ann)
    if tau is None:
        return None
    if want == "max-period" and T != ell * ell - 1:
        return None
    # residue order and point period must agree
    T_checked = ring.multiplicative_order(tau, ann)
    return Candidate(curve, ring, P, tau, T_checked, ann)


def search(ell, want, q_max, q_min=2, limit=None, sample=None, seed=0):
    """Candidates over q_min <= q <= q_max, scanning each normal-form family in order."""
    if want not in WANTS:
        raise InvalidConfiguration(f"want must be one of {WANTS}")
    if q_max > SEARCH_Q_LIMIT:
        raise InvalidConfiguration(f"q_max = {q_max} exceeds the scan limit {SEARCH_Q_LIMIT}")
    rng = np.random.default_rng(seed)
    out = []
    for q, p, k in prime_powers(q_min, q_max):
        F = standard_field(p, k)
        rows = curve_family(F)
        if sample is not None and sample < len(rows):
            rows = rows[np.sort(rng.choice(len(rows), size=sample, replace=False))]
        rows = rows[batch_discriminant(F, rows) != 0]
        counts = batch_counts(F, rows)
        t = q + 1 - counts
        keep = (t % p != 0) & (counts % ell == 0)
        if want in ("full-torsion", "max-period"):
            keep &= counts % (ell * ell) == 0
        for row in rows[keep]:
            curve = Curve(F, *(F.element(int(c)) for c in row))
            try:
                cand = _examine(curve, ell, want)
            except (NotInvertible, ScaleLimit):
                continue
            if cand is not None:
                out.append(cand)
                if limit is not None and len(out) >= limit:
                    return out
    return out
