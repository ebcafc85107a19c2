"""The forcing relation on a finite poset.

Run: python3 demos/03_forcing.py
"""
from phplab import Condition, ForcingContext, Scale, enumerate_conditions, forces, parse

ctx = ForcingContext(Scale(3, 2))


def show(text, sigma="{}"):
    print(f"{sigma:>10} forces {text:<28} {forces(Condition.parse(sigma), parse(text), ctx)}")


show("R(0,0)")
show("R(0,0)", "0->0")
show("!R(0,0)", "0->1")
show("E u<=3.R(u,0)")          # nobody needs hole 0 yet
show("E u<=3.R(u,0)", "0->1,1->2")
show("R(0,0) | !(R(0,0))")      # the negation node looks at every extension
show("R(0,0) | !R(0,0)")        # the literal needs an actual conflict, so the horizon matters

phi = parse("E u<=1.R(u,0)")
forcing = [str(c) for c in enumerate_conditions(ctx.scale) if forces(c, phi, ctx)]
print(f"conditions forcing {phi}: {forcing}")
