"""Exponential sums, discrepancy and linear complexity of generator outputs,
with evaluators for the corresponding upper and lower bounds.

Bound evaluators set every implied constant to 1; reports therefore carry the
ratio measured / bound rather than a pass/fail verdict.
"""

import math
from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np

from .cm_order import _pair
from .errors import InvalidConfiguration, ScaleLimit, TrivialCharacter

__all__ = [
    "character_table",
    "exp_sum_codes",
    "exp_sum",
    "orbit_exp_sum",
    "curve_char_sum",
    "batch_x_char_sums",
    "subgroup_char_sum",
    "BoundParams",
    "bound_theorem1",
    "bound_theorem2",
    "bound_theorem3",
    "bound_corollary1",
    "bound_corollary2",
    "theorem1_threshold",
    "theorem2_threshold",
    "discrepancy",
    "berlekamp_massey",
    "linear_complexity",
    "linear_complexity_bruteforce",
    "shift_annihilator",
    "AnalysisReport",
    "DISCREPANCY_BUDGET",
]

DISCREPANCY_BUDGET = 5 * 10**7


# -- character sums -----------------------------------------------------------------


def character_table(F, j):
    """psi_j(c) for every code c of F."""
    j = int(j) % F.p
    if j == 0:
        raise TrivialCharacter("the trivial character must be handled by the caller")
    tr = F.vtrace(np.arange(F.q, dtype=np.int64))
    return np.exp(2j * np.pi * ((j * tr) % F.p) / F.p)


def _sum_by_trace(F, codes, j, weights=None):
    """sum psi_j(c) over codes (negative codes are poles and contribute 0).

    Terms are grouped by the trace value first, then combined with fsum.
    """
    j = int(j) % F.p
    if j == 0:
        raise TrivialCharacter("the trivial character must be handled by the caller")
    codes = np.asarray(codes, dtype=np.int64)
    keep = codes >= 0
    tr = F.vtrace(codes[keep])
    w = None if weights is None else np.asarray(weights)[keep]
    hist = np.bincount(tr, weights=w, minlength=F.p)
    angles = 2 * math.pi * ((j * np.arange(F.p)) % F.p) / F.p
    re = math.fsum(float(h) * math.cos(a) for h, a in zip(hist, angles) if h)
    im = math.fsum(float(h) * math.sin(a) for h, a in zip(hist, angles) if h)
    return complex(re, im)


def exp_sum_codes(F, codes, j):
    return _sum_by_trace(F, codes, j)


def exp_sum(state, f, j, length=None):
    """S = sum_{n=1}^{length} psi_j(f(P_n)), starting from a copy of ``state``."""
    if length is None:
        length = state.T
    if state.T is not None and length > state.T:
        raise InvalidConfiguration(f"length {length} exceeds the period {state.T}")
    codes = state.clone().emit_codes(f, length)
    return _sum_by_trace(state.P.group.field, codes, j)


def orbit_exp_sum(state, f, j):
    """Full-period sum computed from the orbit as a set, in sorted order."""
    F = state.P.group.field
    orbit = {state.point_at(n).key(): state.point_at(n) for n in range(1, state.T + 1)}
    total = 0j
    for key in sorted(orbit, key=lambda k: (k[0] is None, k)):
        c = f.code(F, orbit[key])
        if c is not None:
            total += np.exp(2j * np.pi * ((j * F.trace(c)) % F.p) / F.p)
    return complex(total)


def curve_char_sum(curve, j, m=1):
    """sum over E(F_{q^m}) of psi_j(x(Q)) (infinity contributes 0)."""
    from .curve import x_counts

    G = curve.group(m)
    F = G.field
    X = np.arange(F.q, dtype=np.int64)
    n = x_counts(F, [[G.a1, G.a2, G.a3, G.a4, G.a6]], X)[0]
    return _sum_by_trace(F, X, j, weights=n)


def batch_x_char_sums(F, coeffs):
    """Matrix of sum_{Q in E(F_q)} psi_1(c x(Q)) for each curve row and each code c.

    Infinity contributes 0; column c = 0 therefore holds #E - 1.
    """
    from .curve import x_counts

    X = np.arange(F.q, dtype=np.int64)
    tr = F.vtrace(F.vmul(X[:, None], X[None, :]))
    chars = np.exp(2j * np.pi * tr / F.p)
    A = np.asarray(coeffs, dtype=np.int64).reshape(-1, 5)
    out = np.empty((len(A), F.q), dtype=complex)
    rows = max(1, (1 << 22) // F.q)
    for start in range(0, len(A), rows):
        counts = x_counts(F, A[start : start + rows], X)
        out[start : start + rows] = counts @ chars
    return out


def _ratio(order, a, b):
    """a / b as an element of the order, or None."""
    ax, ay = _pair(a)
    bx, by = _pair(b)
    n = order.norm_form(bx, by)
    # a * conj(b) / n(b)
    cx, cy = order._mul(ax, ay, bx + by * order.D, -by)
    if cx % n or cy % n:
        return None
    return cx // n, cy // n


def _is_unit(order, alpha):
    return order.norm_form(*_pair(alpha)) == 1


def _is_frobenius_power(ring, ratio):
    """Whether ratio = pi^k for some integer k (ratio given as an element)."""
    order = ring.order
    n = order.norm_form(*ratio)
    q = ring.curve.q
    k = 0
    while q**k < n:
        k += 1
    if q**k != n:
        return False
    power = ring.frobenius**k
    return (power.x, power.y) == tuple(ratio)


def subgroup_char_sum(ring, P, f, j, coeffs, endos):
    """sum over H = End(E) P of psi_j(sum_i c_i f(tau_i Q)).

    Q with tau_i Q = infinity for some i contributes 0.  Returns the sum and the
    explicit bound 2 * s * deg f * J * sqrt(q) with J = max n(tau_i).
    """
    F = ring.curve.field
    coeffs = [c.code if hasattr(c, "code") else F.from_int(c) for c in coeffs]
    if len(coeffs) != len(endos) or not endos:
        raise InvalidConfiguration("need one coefficient per endomorphism")
    if all(c == 0 for c in coeffs):
        raise InvalidConfiguration("coefficients must not all vanish")
    order = ring.order
    elems = [_pair(t.element if hasattr(t, "element") else t) for t in endos]
    for e in elems:
        if math.gcd(order.norm_form(*e), ring.u) != 1:
            raise InvalidConfiguration(f"{e} is not prime to the conductor")
        if order.norm_form(*e) == 0:
            raise InvalidConfiguration("endomorphisms must be non-zero")
    for a, b in combinations(elems, 2):
        r = _ratio(order, a, b)
        if r is not None and _is_unit(order, r):
            raise InvalidConfiguration(f"{a} and {b} are associated")
        for x, y in ((a, b), (b, a)):
            r = _ratio(order, x, y)
            if r is not None and _is_frobenius_power(ring, r):
                raise InvalidConfiguration(f"{x}/{y} is a power of Frobenius")
    G = P.group
    if G.m != 1:
        raise InvalidConfiguration("H must be a subgroup of E(F_q)")
    ann = ring.annihilator(P)
    W = ann.W
    values = []
    for res in ann.ideal.residues():
        Q = ring.apply_element(res, P, W=W)
        WQ = ring.apply_element(order._mul(*res, 0, 1), P, W=W)
        acc = 0
        pole = False
        for c, (x, y) in zip(coeffs, elems):
            R = G.add(G.mul(x, Q), G.mul(y, WQ))
            v = f.code(F, R)
            if v is None:
                pole = True
                break
            acc = F.add(acc, F.mul(c, v))
        values.append(-1 if pole else acc)
    J = max(order.norm_form(*e) for e in elems)
    bound = 2 * len(elems) * f.pole_degree * J * math.sqrt(ring.curve.q)
    return _sum_by_trace(F, values, j), bound


# -- bound evaluators ---------------------------------------------------------------


@dataclass(frozen=True)
class BoundParams:
    nu: int
    deg_f: int
    T: int
    ell: int
    norm_l: int
    q: int
    D: int
    k: int = 1
    p: int = 0

    def __post_init__(self):
        if int(self.nu) != self.nu or self.nu < 1:
            raise InvalidConfiguration(f"nu must be an integer >= 1, got {self.nu}")
        for name in ("deg_f", "T", "ell", "norm_l", "q"):
            if getattr(self, name) <= 0:
                raise InvalidConfiguration(f"{name} must be positive")


def bound_theorem1(b):
    nu = b.nu
    e_T = 1 - (3 * nu + 2) / (2 * nu * (nu + 2))
    e_l = (2 * nu + 2) / (nu * (nu + 2))
    e_q = 1 / (4 * (nu + 2))
    return b.deg_f * b.T**e_T * b.ell**e_l * b.q**e_q


def bound_theorem2(b):
    nu = b.nu
    D = abs(b.D)
    first = (
        b.deg_f
        * D ** (1 / (4 * (nu + 1)))
        * b.T ** (1 - (2 * nu + 1) / (2 * nu * (nu + 1)))
        * b.norm_l ** (1 / (2 * nu))
        * b.q ** (1 / (4 * (nu + 1)))
    )
    second = b.deg_f * D ** (1 / nu) * b.T ** (1 - 1 / (2 * nu)) * b.q ** (1 / (4 * nu))
    return max(first, second)


def bound_theorem3(b, eps=0.0):
    """Lower bound on the linear complexity; requires deg f < ell^(2 - eps)."""
    if not b.deg_f < b.ell ** (2 - eps):
        raise InvalidConfiguration(f"deg f = {b.deg_f} is not below ell^(2 - {eps})")
    first = b.T / (b.ell ** (4 / 3) * b.deg_f ** (1 / 3))
    second = b.T / (abs(b.D) ** (5 / 4) * b.norm_l ** 0.5 * b.deg_f ** (5 / 4))
    return max(first, second)


def _box_factor(b):
    if b.p <= 0:
        raise InvalidConfiguration("the characteristic p is needed for discrepancy bounds")
    return (math.log(b.p) + 1) ** b.k


def bound_corollary1(b):
    return bound_theorem1(b) * _box_factor(b)


def bound_corollary2(b):
    return bound_theorem2(b) * _box_factor(b)


def theorem1_threshold(b, eps=0.0):
    """Threshold values and hypothesis flags for the first character-sum bound."""
    need_T = b.ell ** (4 / 3) * b.q ** (1 / 6 + eps)
    need_l = b.q ** (1 / 4 + eps)
    return {
        "T_threshold": need_T,
        "T_ok": b.T >= need_T,
        "ell_threshold": need_l,
        "ell_ok": b.ell >= need_l,
    }


def theorem2_threshold(b, eps=0.0):
    D = abs(b.D)
    need_T = max(D**0.25 * b.norm_l**0.5 * b.q ** (0.25 + eps), D * D * b.q)
    need_n = b.q ** (0.5 + eps)
    return {
        "T_threshold": need_T,
        "T_ok": b.T >= need_T,
        "norm_threshold": need_n,
        "norm_ok": b.norm_l >= need_n,
    }


def theorem1_alpha_beta(nu):
    """Exponents with T^-a l^b q^c = (T^-1 l^alpha q^beta)^a in the first bound."""
    return 4 / 3 * (1 + 1 / (3 * nu + 2)), 1 / 6 * (1 - 2 / (3 * nu + 2))


# -- discrepancy -------------------------------------------------------------------


def _coordinates(F, codes, coords):
    codes = np.asarray(codes, dtype=np.int64)
    codes = codes[codes >= 0]
    digits = F.vdigits(codes)
    if coords is not None:
        digits = digits[:, list(coords)]
    return digits


def _box_pairs(p):
    pairs = np.array([(a, b) for a in range(p) for b in range(a + 1, p + 1)], dtype=np.int64)
    return pairs[:, 0], pairs[:, 1]


def discrepancy(F, codes, boxes="all", coords=None, seed=0):
    """sup over boxes of |N(alpha, beta) - vol * T / p^k'|.

    ``codes`` is an emitted sequence (poles, marked by negative codes, are dropped
    and T counts only the remaining terms).  ``boxes`` is "all" or ("sample", n).
    ``coords`` restricts to a subset of basis coordinates.
    """
    p = F.p
    digits = _coordinates(F, codes, coords)
    T, k = digits.shape
    if k == 0:
        raise InvalidConfiguration("no coordinates selected")
    hist = np.zeros((p,) * k, dtype=np.int64)
    np.add.at(hist, tuple(digits.T), 1)
    cum = np.zeros((p + 1,) * k, dtype=np.int64)
    inner = hist
    for axis in range(k):
        inner = np.cumsum(inner, axis=axis)
    cum[(slice(1, None),) * k] = inner
    A, B = _box_pairs(p)
    Q = p**k
    if boxes == "all":
        if len(A) ** k > DISCREPANCY_BUDGET:
            raise ScaleLimit(f"{len(A)}^{k} boxes exceed the budget {DISCREPANCY_BUDGET}")
        N = cum
        for axis in range(k):
            N = np.take(N, B, axis=axis) - np.take(N, A, axis=axis)
        vol = np.ones((1,) * k, dtype=np.int64)
        widths = B - A
        for axis in range(k):
            shape = [1] * k
            shape[axis] = len(widths)
            vol = vol * widths.reshape(shape)
        dev = np.abs(N * Q - vol * T)
        return float(dev.max()) / Q
    kind, n = boxes
    if kind != "sample":
        raise InvalidConfiguration(f"unknown box mode {boxes!r}")
    rng = np.random.default_rng(seed)
    idx = rng.integers(len(A), size=(int(n), k))
    lo, hi = A[idx], B[idx]
    N = np.zeros(int(n), dtype=np.int64)
    for corner in range(1 << k):
        sel = [(corner >> i) & 1 for i in range(k)]
        pts = tuple(np.where(sel[i], lo[:, i], hi[:, i]) for i in range(k))
        N += (-1) ** sum(sel) * cum[pts]
    vol = np.prod(hi - lo, axis=1)
    dev = np.abs(N * Q - vol * T)
    return float(dev.max()) / Q


def parse_boxes(text):
    if text == "all":
        return "all"
    if text.startswith("sample:"):
        return ("sample", int(text.split(":", 1)[1]))
    raise InvalidConfiguration(f"box mode must be 'all' or 'sample:N', got {text!r}")


# -- linear complexity --------------------------------------------------------------


def _as_codes(seq):
    out = []
    for s in seq:
        if s is None or (isinstance(s, (int, np.integer)) and s < 0):
            out.append(0)
        elif hasattr(s, "code"):
            out.append(s.code)
        elif isinstance(s, (int, np.integer)):
            out.append(int(s))
        else:
            out.append(0)  # pole marks count as 0
    return out


def berlekamp_massey(F, seq):
    """(L, C) with C the connection polynomial coefficients c_0 = 1, ..., c_L."""
    s = _as_codes(seq)
    C, B = [1], [1]
    L, m, b = 0, 1, 1
    for n in range(len(s)):
        d = s[n]
        for i in range(1, L + 1):
            if C[i] and s[n - i]:
                d = F.add(d, F.mul(C[i], s[n - i]))
        if d == 0:
            m += 1
            continue
        coef = F.mul(d, F.inv(b))
        newC = C + [0] * max(0, len(B) + m - len(C))
        for i, bi in enumerate(B):
            if bi:
                newC[i + m] = F.sub(newC[i + m], F.mul(coef, bi))
        if 2 * L <= n:
            B, b, L, m = C, d, n + 1 - L, 1
        else:
            m += 1
        C = newC
    return L, C[: L + 1] + [0] * max(0, L + 1 - len(C))


def linear_complexity(F, seq):
    return berlekamp_massey(F, seq)[0]


def _rref(F, M):
    """Row-reduce a code matrix in place; returns (rref, pivot columns)."""
    M = np.array(M, dtype=np.int64)
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = F.inv(int(M[r, c]))
        M[r] = F.vmul(M[r], np.full(cols, inv, dtype=np.int64))
        factors = M[:, c].copy()
        factors[r] = 0
        if factors.any():
            M = F.vsub(M, F.vmul(factors[:, None], M[r][None, :]))
        pivots.append(c)
        r += 1
    return M, pivots


def linear_complexity_bruteforce(F, seq):
    """Least L such that the recurrence system of order L is solvable."""
    s = np.array(_as_codes(seq), dtype=np.int64)
    N = len(s)
    for L in range(N + 1):
        rows = N - L
        if rows == 0:
            return L
        A = np.array([s[n : n + L] for n in range(rows)], dtype=np.int64).reshape(rows, L)
        aug = np.concatenate([A, s[L:].reshape(-1, 1)], axis=1)
        _, piv = _rref(F, aug)
        if L not in piv:
            return L
    return N


def shift_annihilator(F, seq, offsets, period=None):
    """Non-zero c with sum_i c_i s_{n + k_i} = 0 for every n, or None.

    The sequence is read cyclically when ``period`` is given.
    """
    s = np.array(_as_codes(seq), dtype=np.int64)
    T = period or len(s)
    rows = T if period else len(s) - max(offsets)
    M = np.array([[s[(n + k) % T] for k in offsets] for n in range(rows)], dtype=np.int64)
    R, piv = _rref(F, M)
    free = [c for c in range(len(offsets)) if c not in piv]
    if not free:
        return None
    fc = free[0]
    c = [0] * len(offsets)
    c[fc] = 1
    for i, pc in enumerate(piv):
        c[pc] = F.neg(int(R[i, fc]))
    return c


# -- reports -----------------------------------------------------------------------


@dataclass
class AnalysisReport:
    quantity: str
    params: dict
    measured: float
    bound: float
    ratio: float = None
    vacuous: bool = False
    seed: int = 0
    hypotheses: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.ratio is None and self.bound > 0:
            self.ratio = self.measured / self.bound

    def to_dict(self):
        """Plain dict with floats kept to 12 significant digits (stable across platforms)."""
        return _rounded(asdict(self))


def _rounded(value):
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, dict):
        return {k: _rounded(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_rounded(v) for v in value]
    return value


# -- run-level analysis -------------------------------------------------------------


def sequence_discrepancy(state, f, boxes="all", coords=None, seed=0, length=None):
    """Discrepancy of f(P_1), ..., f(P_length) from a copy of the state."""
    length = length or state.T
    codes = state.clone().emit_codes(f, length)
    return discrepancy(state.P.group.field, codes, boxes=boxes, coords=coords, seed=seed)


def _box_mode_for(F, coords=None):
    k = F.k if coords is None else len(coords)
    return "all" if (F.p * (F.p + 1) // 2) ** k <= DISCREPANCY_BUDGET else ("sample", 4096)


def analyze_run(state, f, j=1, nus=(1, 2, 3), boxes=None, seed=0, eps=0.0):
    """Measured |S|, discrepancy and linear complexity against every bound and nu."""
    ring = state.ring
    E = ring.curve
    F = E.field
    T = state.T
    codes = state.clone().emit_codes(f, T)
    S = abs(_sum_by_trace(F, codes, j))
    mode = boxes or _box_mode_for(F)
    delta = discrepancy(F, codes, boxes=mode, seed=seed)
    L = linear_complexity(F, np.concatenate([codes, codes]))
    base = {
        "curve": [E.p, E.field.k, list(E.coeffs)],
        "P": [state.P.x, state.P.y],
        "tau": list(_pair(state.alpha)),
        "j": j,
        "observable": f.name,
    }
    reports = []
    for nu in nus:
        b = BoundParams(
            nu=nu,
            deg_f=f.pole_degree,
            T=T,
            ell=state.ell,
            norm_l=state.ann.norm,
            q=E.q,
            D=ring.order.D,
            k=F.k,
            p=F.p,
        )
        params = dict(base, **asdict(b))
        h1, h2 = theorem1_threshold(b, eps), theorem2_threshold(b, eps)
        for quantity, measured, bound, hyp in (
            ("exp_sum/theorem1", S, bound_theorem1(b), h1),
            ("exp_sum/theorem2", S, bound_theorem2(b), h2),
            ("discrepancy/corollary1", delta, bound_corollary1(b), h1),
            ("discrepancy/corollary2", delta, bound_corollary2(b), h2),
        ):
            reports.append(
                AnalysisReport(quantity, params, measured, bound, None, bound >= T, seed, hyp)
            )
        # the lower bound does not depend on nu; it is repeated so every nu has a full set
        try:
            lower = bound_theorem3(b, eps)
            hyp = {"deg_f_ok": True}
        except InvalidConfiguration:
            lower, hyp = 0.0, {"deg_f_ok": False}
        reports.append(
            AnalysisReport(
                "linear_complexity/theorem3", params, L, lower, None, lower <= 1, seed, hyp
            )
        )
    return reports
