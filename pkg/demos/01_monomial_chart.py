"""
A regular chart for x1 + x2
===========================

Two variables with values 1 and sqrt(2).  The sum x1 + x2 is not a monomial,
but in a suitable chart it is a unit times a monomial.
"""

from valuniform import Context, OrderSpec, chart_report, monomialize_set, residue

# values 1 and sqrt(2): the order compares 1*c1 + sqrt(2)*c2, then c2
order = OrderSpec.weights([(1, 0), (0, 1)], 2)
ctx = Context.build(0, order, [("x1", "value", (1, 0)), ("x2", "value", (0, 1))])

z = ctx.parse("x1 + x2")
chart = monomialize_set([z], ctx)

for nv in chart.new_vars:
    print(f"{nv.name} has exponents {nv.definition} over (x1, x2) and value {nv.value.coords}")

fz = chart.factorizations[0]
print(f"{z} = ({fz.unit}) * {chart.monomial(fz.exps)}")
print("residue of the unit:", residue(fz.unit, chart.context))

# every claim is recomputed from scratch
report = chart_report(chart)
print("all checks pass:", report.ok)

# substituting the definitions gives back the original element exactly
print("round trip:", chart.expand(fz.unit * chart.monomial(fz.exps)) == z)
