"""Walk through one small curve: point count, Frobenius, End(E), annihilators."""

from ecendo import Curve, determine_end_ring, standard_field

F = standard_field(5, 1)
E = Curve(F, 0, 0, 0, 1, 1)  # y^2 = x^3 + x + 1
print(f"{E!r}")
print(f"#E(F_5) = {E.n_points}, trace t = {E.t}, t^2 - 4q = {E.frobenius_discriminant}")
print(f"D_K = {E.D_K}, v = {E.v}")

ring = determine_end_ring(E)
print(f"End(E) = {ring.order!r}, Frobenius = {ring.frobenius!r}")

G = E.group()
print("\npoint     order  ann(P)            n(ann)")
for P in G.points():
    if P.x is None:
        continue
    ann = ring.annihilator(P)
    print(f"{P!r:9} {ann.ell:5}  {ann.ideal!r:17} {ann.norm}")

# E[3] becomes fully rational once pi = 1 modulo 3
M = E.frobenius_period(3)
print(f"\nE[3] inside E(F_5^m): m=1 -> {E.rational_torsion(3)}, m={M} -> {E.rational_torsion(3, M)}")
