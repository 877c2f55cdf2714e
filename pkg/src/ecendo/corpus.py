"""A fixed corpus of small curves, generator instances and lemma instances."""

import json
import math

from .analysis import analyze_run
from .cm_order import CMOrder
from .curve import Curve
from .endo import determine_end_ring
from .errors import EcendoError, NotInvertible, ScaleLimit, UncertifiedRing
from .field import standard_field
from .generator import X, Y, GeneratorState
from . import lemmas

__all__ = [
    "DESK_CURVES",
    "TORSION_CURVES",
    "TAU_CANDIDATES",
    "desk_rings",
    "generator_instances",
    "corpus_report",
    "write_corpus_report",
    "lemma_instances",
    "run_lemma_corpus",
]

# (p, k, (a1, a2, a3, a4, a6)) with coefficients given as field codes
TORSION_CURVES = [
    (2, 2, (1, 0, 0, 0, 1)),
    (5, 1, (0, 0, 0, 1, 1)),
    (13, 1, (0, 0, 0, 1, 1)),
    (13, 1, (0, 0, 0, 7, 0)),
    (3, 2, (0, 1, 0, 0, 1)),
    (3, 2, (0, 1, 0, 0, 2)),
    (7, 1, (0, 0, 0, 0, 1)),
    (7, 1, (0, 0, 0, 0, 6)),
    (7, 1, (0, 0, 0, 1, 1)),
    (7, 1, (0, 0, 0, 3, 1)),
    (7, 1, (0, 0, 0, 3, 6)),
    (19, 1, (0, 0, 0, 2, 2)),
    (5, 1, (0, 0, 0, 3, 2)),
]

DESK_CURVES = TORSION_CURVES + [
    (19, 1, (0, 0, 0, 1, 8)),
    (11, 1, (0, 0, 0, 1, 3)),
    (2, 3, (1, 0, 0, 0, 1)),
    (2, 4, (1, 0, 0, 0, 1)),
    (17, 1, (0, 0, 0, 1, 5)),
    (23, 1, (0, 0, 0, 1, 1)),
    (31, 1, (0, 0, 0, 1, 3)),
    (5, 2, (0, 0, 0, 1, 1)),
    (7, 2, (0, 0, 0, 1, 3)),
    (61, 1, (0, 0, 0, 2, 7)),
    (101, 1, (0, 0, 0, 1, 1)),
    (127, 1, (0, 0, 0, 3, 5)),
]

# largest field the lifting checks may enumerate
LIFT_FIELD_LIMIT = 10**6

TAU_CANDIDATES = [(0, 1), (1, 1), (2, 1), (1, 2), (3, 1), (2, 3), (5, 2)]


def desk_rings(specs=DESK_CURVES):
    """(spec, ring) for each spec whose endomorphism ring is certified."""
    out = []
    for p, k, coeffs in specs:
        curve = Curve(standard_field(p, k), *coeffs)
        ring = determine_end_ring(curve)
        if ring.certified:
            out.append(((p, k, coeffs), ring))
    return out


def _largest_order_points(G, count):
    pts = [P for P in G.points() if P.x is not None]
    pts.sort(key=lambda P: (-G.point_order(P), P.x, P.y))
    return pts[:count]


def generator_instances(per_curve=2, taus=TAU_CANDIDATES, specs=DESK_CURVES):
    """Deterministic (ring, P, tau) triples with T > 1, up to ``per_curve`` per curve."""
    out = []
    for spec, ring in desk_rings(specs):
        G = ring.curve.group(1)
        found = 0
        for P in _largest_order_points(G, 3):
            for tau in taus:
                if found == per_curve:
                    break
                try:
                    state = GeneratorState(ring, P, tau)
                except (NotInvertible, ValueError):
                    continue
                if state.T > 1:
                    out.append((spec, state))
                    found += 1
    return out


def corpus_report(seed=0, per_curve=2):
    """Measured/bound rows over the generator corpus (both observables)."""
    rows = []
    for spec, state in generator_instances(per_curve):
        for f in (X, Y):
            if not f.admissible(state.curve.p):
                continue
            for rep in analyze_run(state, f, seed=seed):
                rows.append(rep.to_dict())
    return rows


def write_corpus_report(path, seed=0, per_curve=2):
    rows = corpus_report(seed, per_curve)
    text = json.dumps(rows, indent=1, sort_keys=True) + "\n"
    with open(path, "w") as fh:
        fh.write(text)
    return rows


# -- lemma corpus -------------------------------------------------------------------


def lemma_instances(budget=None):
    """(lemma id, callable) pairs in a fixed order; ``budget`` caps the count."""
    items = []
    rings = desk_rings(TORSION_CURVES[:6])
    for spec, ring in rings:
        for a in lemmas.admissible_ideals(ring, 16):
            items.append(("L2", lambda r=ring, a=a: lemmas.verify_torsion_count(r, a)))
            items.append(("L3", lambda r=ring, a=a: lemmas.verify_annihilator_exists(r, a)))
    for spec, ring in rings[:3]:
        for a in lemmas.admissible_ideals(ring, 9):
            for tau in ((1, 1), (0, 1), (2, 1)):
                if ring.frobenius_prime.contains(*tau):
                    continue
                if math.gcd(ring.order.norm_form(*tau), ring.u) != 1:
                    continue
                b = a.scale(tau)
                if ring.curve.q ** ring.frobenius_order_mod(b) > LIFT_FIELD_LIMIT:
                    continue
                items.append(("L4", lambda r=ring, a=a, t=tau: lemmas.verify_lifting(r, a, t)))
        items.append(
            ("L5", lambda r=ring: lemmas.verify_function_degree(r, X, [1, 2], [(1, 0), (1, 1)]))
        )
    items.append(("L6", lambda: lemmas.verify_sieve(ell_max=2000)))
    for D_K, u in ((-3, 1), (-4, 1), (-7, 1), (-8, 1), (-11, 1), (-3, 2), (-4, 3), (-19, 1)):
        O = CMOrder(D_K, u)
        ideals = [a for a in O.ideals_up_to(40) if math.gcd(a.norm, u) == 1]
        for a in ideals[:: max(1, len(ideals) // 4)][:4]:
            items.append(("L7", lambda O=O, a=a: lemmas.verify_lattice_count(O, a, 2000)))
            items.append(("L8", lambda O=O, a=a: lemmas.verify_coprime_count(O, a, 300)))
            for tau in ((1, 1), (2, 1)):
                if O.is_coprime(tau, a):
                    items.append(
                        ("L9", lambda O=O, a=a, t=tau: lemmas.verify_partition(O, t, a, 100))
                    )
    if budget is not None:
        items = items[:budget]
    return items


def run_lemma_corpus(budget=None):
    """Run the corpus; ScaleLimit instances are recorded as skipped."""
    reports, skipped = [], []
    for lemma, fn in lemma_instances(budget):
        try:
            reports.append(fn())
        except (ScaleLimit, UncertifiedRing) as exc:
            skipped.append((lemma, str(exc)))
        except EcendoError:
            raise
    return reports, skipped
