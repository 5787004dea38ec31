"""Random problem generators and independent oracles shared by the test suites."""

from __future__ import annotations

import itertools
import random

import mpmath

from valuniform.funcfield import Context, Polynomial, RationalFunction
from valuniform.ordered_group import OrderSpec, QuadraticNumber, express_in_basis
from valuniform.valuation import value_ratfun

mpmath.mp.dps = 60

SQRT2 = OrderSpec.weights([(1, 0), (0, 1)], 2)


def order_family(kind: str, rank: int) -> OrderSpec:
    """Pure lex, or a first form ``(1, sqrt d, 0, ...)`` completed lexicographically."""
    if kind == "lex" or rank == 1:
        return OrderSpec.lex(rank)
    d = {"sqrt2": 2, "sqrt3": 3}[kind]
    first = [QuadraticNumber(1, 0, d), QuadraticNumber(0, 1, d)] + [QuadraticNumber(0, 0, d)] * (rank - 2)
    rows = [tuple(first)]
    for i in range(1, rank):
        rows.append(tuple(QuadraticNumber(int(i == j), 0, d) for j in range(rank)))
    return OrderSpec(rank, tuple(rows), d)


def random_unimodular(rng: random.Random, n: int, steps: int = 4) -> list[list[int]]:
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        M[i] = [a + c * b for a, b in zip(M[i], M[j])]
    if n and rng.random() < 0.5:
        M[0] = [-x for x in M[0]]
    return M


def random_context(rng: random.Random, n_value: int, n_residue: int, kind: str, characteristic: int = 0) -> Context:
    """Value variables with a random unimodular value matrix, all values positive."""
    order = order_family(kind, n_value)
    while True:
        M = random_unimodular(rng, n_value)
        if all(order.sign(row) > 0 for row in M):
            break
        # flip rows of negative value; unimodularity is kept
        M = [row if order.sign(row) > 0 else [-x for x in row] for row in M]
        if all(order.sign(row) > 0 for row in M):
            break
    decls = [(f"x{i + 1}", "value", tuple(M[i])) for i in range(n_value)]
    decls += [(f"y{i + 1}", "residue") for i in range(n_residue)]
    return Context.build(characteristic, order, decls)


def random_poly(rng: random.Random, ctx: Context, max_terms: int = 5, max_deg: int = 6, coeff: int = 9) -> Polynomial:
    n = ctx.nvars
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        budget = rng.randint(0, max_deg)
        e = [0] * n
        for _ in range(budget):
            e[rng.randrange(n)] += 1
        c = rng.randint(-coeff, coeff) or 1
        terms[tuple(e)] = terms.get(tuple(e), 0) + c
    p = Polynomial(ctx, terms)
    return p if not p.is_zero() else Polynomial.const(ctx, 1)


def non_negative_ratio(rng: random.Random, ctx: Context) -> RationalFunction:
    """A random quotient, multiplied by the monomial that lifts its value to >= 0."""
    z = RationalFunction(random_poly(rng, ctx), random_poly(rng, ctx, max_terms=3, max_deg=3))
    v = value_ratfun(z, ctx)
    V = [list(r) for r in ctx.value_matrix]
    fix = [-c for c in express_in_basis(v, V)]
    extra = [rng.randint(0, 2) for _ in fix]
    exps = ctx.embed_tx([a + b for a, b in zip(fix, extra)])
    return z * RationalFunction.monomial(ctx, exps)


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------


def form_images(coords, order: OrderSpec) -> tuple:
    """High-precision real images of a value vector under the order's forms."""
    out = []
    for row in order.forms:
        total = mpmath.mpf(0)
        for c, x in zip(row, coords):
            total += (mpmath.mpf(c.a.numerator) / c.a.denominator
                      + mpmath.mpf(c.b.numerator) / c.b.denominator * mpmath.sqrt(c.d)) * x
        out.append(total)
    return tuple(out)


def lex_key(coords, order: OrderSpec, eps=mpmath.mpf(10) ** -40):
    """Comparison key rounding images to a grid far below any real gap."""
    return tuple(mpmath.nint(x / eps) for x in form_images(coords, order))


def brute_force_value(f: Polynomial, ctx: Context):
    """Minimum over all terms of the term value, by floating enumeration."""
    best = None
    for e in f.terms:
        coords = [0] * ctx.order.rank
        for i in ctx.tx:
            for j, w in enumerate(ctx.vars[i].value.coords):
                coords[j] += e[i] * w
        key = lex_key(coords, ctx.order)
        if best is None or key < best[0]:
            best = (key, tuple(coords))
    return best[1]


def exhaustive_unimodular(bound: int):
    """All 2x2 integer matrices with entries in [-bound, bound] and det +-1."""
    rng = range(-bound, bound + 1)
    for a, b, c, d in itertools.product(rng, repeat=4):
        if abs(a * d - b * c) == 1:
            yield ((a, b), (c, d))


def positive_unimodular_rank2(order: OrderSpec, bound: int = 5) -> list:
    """Every candidate basis: det +-1, entries bounded, both rows positive."""
    return [U for U in exhaustive_unimodular(bound) if order.sign(U[0]) > 0 and order.sign(U[1]) > 0]


def feasible_bases_rank2(alphas, order: OrderSpec, bound: int = 5, candidates=None):
    """Exhaustive search for positive unimodular bases representing every alpha >= 0."""
    if candidates is None:
        candidates = positive_unimodular_rank2(order, bound)
    found = []
    for U in candidates:
        det = U[0][0] * U[1][1] - U[0][1] * U[1][0]
        ok = True
        for a in alphas:
            # c U = a  =>  c = a U^-1, and U^-1 = det * adj(U) for det = +-1
            c0 = (a[0] * U[1][1] - a[1] * U[1][0]) * det
            c1 = (-a[0] * U[0][1] + a[1] * U[0][0]) * det
            if c0 < 0 or c1 < 0:
                ok = False
                break
        if ok:
            found.append(U)
    return found


def binomial_transform_oracle(a: int, b: int, ws, wt) -> int:
    """Quadratic transforms needed to make ``s^a + t^b`` unit times monomial.

    Works on the two exponent vectors only: each step divides the param of
    larger value by the other, until one vector is componentwise below the
    other.  A param whose value reaches 0 leaves the parameter system.
    """
    m1, m2 = [a, 0], [0, b]
    w = [ws, wt]
    alive = [True, True]
    steps = 0
    while True:
        idx = [i for i in range(2) if alive[i]]
        if all(m1[i] <= m2[i] for i in idx) or all(m2[i] <= m1[i] for i in idx):
            return steps
        x, y = (0, 1) if w[0] <= w[1] else (1, 0)
        # y = x * y'; the monomial x^p y^q becomes x^(p+q) y'^q
        for m in (m1, m2):
            m[x] += m[y]
        w[y] = w[y] - w[x]
        if w[y] == 0:
            alive[y] = False
        steps += 1

