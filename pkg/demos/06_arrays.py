"""Arrays: property checks, uniformizing a row, the size bounds and the exhaustive search.

Run: python3 demos/06_arrays.py
"""
from phplab import (
    Condition,
    Scale,
    WArray,
    ajtai_check,
    brute_force_search_array,
    contradiction_check,
    leaves,
    lower_bound,
    min_leaf_count,
    pigeon_chain,
    uniformize_row,
    upper_bound,
    verify_properties,
)

E = Condition()



def star(a):
    return [Condition.of((a, v)) for v in range(8)]


# two pigeon stars in one column: each row covers, but the column clashes
A = WArray.from_grid([[star(0)], [star(1)]], 1, 1, E, Scale(8, 2))
rep = verify_properties(A)
print("p1..p4:", rep.p1, rep.p2, rep.p3, rep.p4, "p2 witness:", rep.witnesses["p2"]["conditions"])

row = leaves(pigeon_chain(E, 1, Scale(8, 8))).leaves
out = uniformize_row(row, 1, E, Scale(8, 2))
print(f"uniformized pigeon-0 row at n=8: {len(out)} members of size 2 (at least {min_leaf_count(8, 0, 2)})")

print("bounds at n=8, k=2:", lower_bound(8, 0, 2, 1), ">", upper_bound(8, 0, 2, 1))
print("contradiction_check(100, 0, 10):", contradiction_check(100, 0, 10))
print("ajtai_check(10000, 0, 50, 1/2):", ajtai_check(10000, 0, 50, "1/2"))

for n in (3, 4):
    found = brute_force_search_array(Scale(n, 2), 1, 1)
    print(f"search n={n} K=2 m=1 k=1:", "none" if found is None else found)
