"""PHP decision trees: chains, deciding trees, covering and grafting.

Run: python3 demos/02_trees.py
"""
from phplab import (
    Condition,
    Scale,
    check_covering,
    covering_witness,
    decide_condition_tree,
    extend_uniform,
    leaves,
    min_leaf_count,
    pigeon_chain,
)

E = Condition()
s = Scale(4, 4)

t = pigeon_chain(E, 2, s)
print(f"pigeon chain of depth 2 at n=4: {len(leaves(t))} leaves, minimum is {min_leaf_count(4, 0, 2)}")

d = decide_condition_tree(E, Condition.parse("0->0"), s)
print("tree deciding 0->0:", [str(x) for x in leaves(d)])
u = extend_uniform(d, 3)
print(f"padded to depth 3: {len(leaves(u))} leaves, uniform: {u.is_uniform(3)}")

# depth + K <= n keeps the leaves covering; past that a leaf set can miss
print("chain depth 2, n=4, K=2 covers:", check_covering(leaves(t), Scale(4, 2)))
small = leaves(pigeon_chain(E, 2, Scale(2, 2)))
print("chain depth 2, n=2, K=1 covers:", check_covering(small, Scale(2, 1)),
      "- missed:", covering_witness(small, Scale(2, 1)))
