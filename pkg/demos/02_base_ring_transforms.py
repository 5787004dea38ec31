"""
Quadratic transforms of a plane base ring
=========================================

The cusp s^3 + t^2 under two monomial valuations.  With values 1 and sqrt(2)
the transforms follow the subtractive continued fraction of the values
3 and 2*sqrt(2) of the two terms.  With values 2
and 3 a transformed param reaches value 0 and becomes a residue-class
variable, and the ring drops to dimension 1.
"""

from valuniform import Context, OrderSpec, establish_nc_v, initial_state, uniformize
from valuniform.transforms import verify_certificate

for label, order, vs, vt in [
    ("values 1, sqrt(2)", OrderSpec.weights([(1, 0), (0, 1)], 2), (1, 0), (0, 1)),
    ("values 2, 3", OrderSpec.lex(1), (2,), (3,)),
]:
    ctx = Context.build(0, order, [("s", "param", vs), ("t", "param", vt)])
    state, certs = establish_nc_v(initial_state(ctx), [ctx.parse("s^3 + t^2")], ctx)
    print(label)
    for step in state.history:
        print("  ", step)
    for p in state.params:
        print(f"   param {p.name}: exponents {p.definition} over (s, t)")
    for p in state.reclassified:
        print(f"   residue-class {p.name}: exponents {p.definition} over (s, t)")
    cert = certs[0]
    print(f"   s^3 + t^2 = ({cert.unit}) * params^{cert.exps}")
    print("   certificate problems:", verify_certificate(cert, state, ctx) or "none")

# the full pipeline: transforms on the coefficients, then a chart for the elements
order = OrderSpec.lex(2)
ctx = Context.build(0, order, [("s", "param", (2, 0)), ("t", "param", (3, 0)), ("x", "value", (0, 1))])
u = uniformize([ctx.parse("(s^3 + t^2)*x + s")], ctx)
print("pipeline dimension:", u.dimension, "checks pass:", u.ok)
