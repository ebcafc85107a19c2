"""Pairwise-incompatible families of k-matchings.

Run: python3 demos/05_matchings.py
"""
from phplab import brute_force_max_family, count_extensions, count_k_matchings, family_bound, fixed_holes_family

for d, c, k in [(3, 2, 1), (3, 2, 2), (4, 3, 2), (4, 4, 3)]:
    size, fam = brute_force_max_family(d, c, k)
    print(f"d={d} c={c} k={k}: largest family {size}, bound {family_bound(d, k)}")

# the bound counts c-matchings: each contains at most one member of the family
d, c, k = 5, 4, 2
print(f"{count_k_matchings(d, c, c)} {c}-matchings, each {k}-matching lies in {count_extensions(d, c, k)}")
print(f"quotient {count_k_matchings(d, c, c) // count_extensions(d, c, k)} = {family_bound(d, k)}")
print("witness for (3, 2):", [str(m) for m in fixed_holes_family(3, 2).members])
