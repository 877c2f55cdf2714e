"""Find a maximal-period instance and look at the sequence it produces."""

from ecendo import X, GeneratorState
from ecendo.analysis import analyze_run, linear_complexity
from ecendo.search import search

ell = 2
cand = search(ell, "max-period", q_max=50, limit=1)[0]
info = cand.to_dict()
print(f"curve over F_{info['q']} with coefficients {info['coeffs']}, #E = {info['n_points']}")
print(f"P = {cand.P!r}, ann(P) = {cand.ann.ideal!r} (the principal ideal ({ell}), ell inert)")
print(f"tau = {cand.tau!r} has order T = {cand.T} = ell^2 - 1 modulo ann(P)")

state = GeneratorState(cand.ring, cand.P, cand.tau)
orbit = state.clone().orbit(2 * state.T)
print("orbit:", " -> ".join(repr(Q) for Q in orbit))

F = cand.curve.field
codes = state.clone().emit_codes(X, state.T)
print(f"x-coordinates over one period: {[int(c) for c in codes]}, linear complexity {linear_complexity(F, list(codes) * 2)}")

for rep in analyze_run(state, X, nus=(1,)):
    flag = "vacuous" if rep.vacuous else "non-trivial"
    print(f"{rep.quantity:28} measured {rep.measured:8.3f}  bound {rep.bound:10.3f}  ({flag})")
