"""
Ascending a chart through an unramified extension
=================================================

Adjoin a root T of T^2 - T - x1.  Modulo the valuation ideal the polynomial
becomes T^2 - T = T (T - 1), so there are two roots and two places above
the base place.  Choosing the residue 1 makes T a unit.
"""

from valuniform import EtalePresentation, Context, OrderSpec, check_inertial, ext_value, monomialize_set
from valuniform.inertial import ascend_chart, parse_ext, verify_ascended

order = OrderSpec.weights([(1, 0), (0, 1)], 2)
ctx = Context.build(0, order, [("x1", "value", (1, 0)), ("x2", "value", (0, 1))])
P = ctx.parse

# f = T^2 - T - x1, f'(T) = 2T - 1 and 1/f'(T) = (2T - 1)/(4 x1 + 1)
def presentation(residue):
    return EtalePresentation("T", (P("-x1"), P("-1"), P("1")), (P("4*x1 + 1"),), (P("-1"), P("2")), 1, P(residue))

for r in ("0", "1"):
    pres = presentation(r)
    print(f"residue {r}: presentation valid = {check_inertial(pres, ctx).ok}, "
          f"v(T) = {ext_value(parse_ext('T', pres), pres, ctx).coords}")

# a ramified polynomial fails the checks
ram = EtalePresentation("T", (P("-x1"), P("0"), P("1")), (P("1"),), (P("1"),), 0, P("0"))
print("T^2 - x1 failing clauses:", check_inertial(ram, ctx).failed())

# the base chart only has to factor the constants of the presentation and the monomials of Z
pres = presentation("1")
Z = [parse_ext("(x1 + x2)*T", pres), parse_ext("x1*T + x1^2", pres)]
base = monomialize_set([P("x1 + x2"), P("x1"), P("4*x1 + 1")], ctx)
ac = ascend_chart(base, pres, Z, ctx=ctx)
for fz in ac.factorizations:
    print(f"{fz.zeta.format('T')} = ({fz.unit.format('T')}) * {base.monomial(fz.exps)}")
print("verification:", {k: ok for k, (ok, _) in verify_ascended(ac, ctx).items()})
