"""A few structural identities checked by enumeration."""

from ecendo import Curve, determine_end_ring, standard_field
from ecendo import lemmas
from ecendo.cm_order import CMOrder

ring = determine_end_ring(Curve(standard_field(7, 1), 0, 0, 0, 0, 1))
print(f"{ring!r}")
for a in lemmas.admissible_ideals(ring, 7):
    print(lemmas.verify_torsion_count(ring, a).line())
    print(lemmas.verify_annihilator_exists(ring, a).line())

O = CMOrder(-4)
a = O.ideal((5, 0))
print(lemmas.verify_coprime_count(O, a, 400).line())
print(lemmas.verify_partition(O, (1, 1), a, 400).line())
print(lemmas.verify_lattice_count(O, O.unit_ideal, 10**4).line())
print(lemmas.verify_sieve(ell_max=500).line())
