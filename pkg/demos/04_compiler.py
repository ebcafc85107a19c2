"""Compile a bounded formula into a marked tree and compare with forcing.

Run: python3 demos/04_compiler.py
"""
from phplab import Condition, ForcingContext, Scale, accepting_leaves, compile_formula, forces, parse

s = Scale(3, 2)
phi = parse("E u<=1.R(u,0)")
tree = compile_formula(phi, Condition(), s)
for label, leaf in tree.walk():
    print(f"{str(label):>12}  {'accept' if leaf.mark else 'reject'}")
print("accepting:", [str(x) for x in accepting_leaves(tree)])

ctx = ForcingContext(s)
agree = all(forces(label, phi, ctx) == leaf.mark for label, leaf in tree.walk() if len(label) <= s.K)
print("every in-horizon leaf agrees with forcing:", agree)
