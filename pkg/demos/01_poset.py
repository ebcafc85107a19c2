"""Conditions, compatibility and the size cap.

Run: python3 demos/01_poset.py
"""
from phplab import Condition, Scale, count_conditions, enumerate_conditions, extensions, is_compatible

s = Scale(3, 2)
print(f"P(3, 2) has {count_conditions(s)} conditions")

a = Condition.parse("0->1")
b = Condition.parse("2->0")
c = Condition.parse("1->1")
print(f"{a} and {b} compatible: {is_compatible(a, b, s)}")
print(f"{a} and {c} compatible: {is_compatible(a, c, s)}  (hole 1 used twice)")

# with K = 1 the union 0->1,2->0 no longer fits, so the pair is not compatible
print(f"in P(3, 1): {is_compatible(a, b, Scale(3, 1))}")

# a condition of size K is a dead end: it has no proper extensions
top = Condition.parse("0->0,1->1")
print(f"extensions of {top} in P(3, 2): {[str(e) for e in extensions(top, s)]}")
print(f"extensions of {a}: {len(extensions(a, s))}")
assert len(enumerate_conditions(s)) == count_conditions(s)
