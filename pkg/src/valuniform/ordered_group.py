"""Finitely generated ordered abelian groups ``Z^r`` and positive bases.

An order on ``Z^r`` is given by ``r`` linear forms with coefficients in a real
quadratic field ``Q(sqrt d)``; two elements are compared lexicographically by
their images under the forms.  Everything here is exact: signs of numbers
``a + b sqrt d`` are decided by integer case analysis.

The main algorithm is :func:`perron_basis`: given non-negative elements
``alpha_1, ..., alpha_l`` it finds a basis of positive elements
``gamma_1, ..., gamma_r`` of the whole group such that every ``alpha_i`` is a
non-negative integer combination of the ``gamma_j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import (
    AlgorithmStall,
    NegativeInput,
    NonUnimodular,
    OrderNotTotal,
    RankMismatch,
)

DEFAULT_STEP_CAP = 10**6


def _squarefree(d: int) -> bool:
    if d < 1:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _isign(a: int, b: int, d: int) -> int:
    """Sign of ``a + b*sqrt(d)`` for integers a, b and square-free d."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if d == 1:
        s = a + b
        return (s > 0) - (s < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb if sa == 0 else sa
    diff = a * a - b * b * d
    if diff > 0:
        return sa
    if diff < 0:
        return sb
    return 0  # unreachable for square-free d > 1


# ---------------------------------------------------------------------------
# QuadraticNumber
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadraticNumber:
    """The real number ``a + b*sqrt(d)`` with rational a, b."""

    a: Fraction
    b: Fraction = Fraction(0)
    d: int = 1

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if not _squarefree(self.d):
            raise ValueError(f"d={self.d} is not a square-free positive integer")
        if self.d == 1 and self.b != 0:
            object.__setattr__(self, "a", self.a + self.b)
            object.__setattr__(self, "b", Fraction(0))

    def _coerce(self, other) -> "QuadraticNumber":
        if isinstance(other, QuadraticNumber):
            if other.d != self.d and other.b != 0 and self.b != 0:
                raise ValueError("quadratic numbers over different fields")
            return other
        return QuadraticNumber(Fraction(other), Fraction(0), self.d)

    def _d(self, other: "QuadraticNumber") -> int:
        return self.d if self.d != 1 else other.d

    def __add__(self, other):
        o = self._coerce(other)
        return QuadraticNumber(self.a + o.a, self.b + o.b, self._d(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        d = self._d(o)
        return QuadraticNumber(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticNumber":
        norm = self.a * self.a - self.b * self.b * self.d
        if norm == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadraticNumber(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def sign(self) -> int:
        return qn_sign(self)

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * self.d**0.5

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a}{'+' if self.b > 0 else '-'}{abs(self.b)}*sqrt({self.d})"


def qn_sign(q: QuadraticNumber) -> int:
    """Exact sign (-1, 0, 1) of a quadratic number."""
    den = q.a.denominator * q.b.denominator
    return _isign(q.a.numerator * (den // q.a.denominator), q.b.numerator * (den // q.b.denominator), q.d)


# ---------------------------------------------------------------------------
# Integer linear algebra (small dense matrices, lists of lists of int)
# ---------------------------------------------------------------------------


def int_det(m: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _rational_inverse(m: Sequence[Sequence[int]]) -> list[list[Fraction]] | None:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def int_inverse(m: Sequence[Sequence[int]]) -> list[list[int]]:
    """Inverse of a unimodular integer matrix."""
    if len(m) and any(len(row) != len(m) for row in m):
        raise NonUnimodular("matrix is not square")
    if abs(int_det(m)) != 1:
        raise NonUnimodular("matrix is not unimodular")
    inv = _rational_inverse(m)
    return [[int(x) for x in row] for row in inv]


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    if not a:
        return []
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(cols)] for i in range(len(a))]


def vec_mat(v: Sequence[int], m: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Row vector times matrix."""
    cols = len(m[0]) if m else 0
    return tuple(sum(v[k] * m[k][j] for k in range(len(m))) for j in range(cols))


def express_in_basis(target, U: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """The integer vector ``c`` with ``c . U = target`` for unimodular ``U``."""
    coords = target.coords if isinstance(target, GroupElement) else tuple(target)
    if len(U) != len(coords):
        raise RankMismatch("target length does not match basis size")
    inv = int_inverse(U)
    return vec_mat(coords, inv)


def _column_reduce(M: list[list[int]], m: int) -> tuple[list[list[int]], int]:
    """Unimodular W (m x m) with M.W = [H | 0]; returns (W, rank)."""
    M = [list(row) for row in M]
    W = [[int(i == j) for j in range(m)] for i in range(m)]

    def col_op(dst, src, k):  # column dst -= k * column src
        for row in M:
            row[dst] -= k * row[src]
        for row in W:
            row[dst] -= k * row[src]

    def swap(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in W:
            row[i], row[j] = row[j], row[i]

    piv = 0
    for row in M:
        if piv >= m:
            break
        while True:
            nz = [j for j in range(piv, m) if row[j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: (abs(row[j]), j))
            if len(nz) == 1:
                swap(piv, j0)
                piv += 1
                break
            for j in nz:
                if j != j0:
                    col_op(j, j0, row[j] // row[j0])
    return W, piv


# ---------------------------------------------------------------------------
# Ordered groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupElement:
    """An element of ``Z^r`` given by its coordinates."""

    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @classmethod
    def zero(cls, rank: int) -> "GroupElement":
        return cls((0,) * rank)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __add__(self, other: "GroupElement") -> "GroupElement":
        if other.rank != self.rank:
            raise RankMismatch("group elements of different rank")
        return GroupElement(tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __neg__(self) -> "GroupElement":
        return GroupElement(tuple(-x for x in self.coords))

    def __mul__(self, k: int) -> "GroupElement":
        return GroupElement(tuple(k * x for x in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)


@dataclass(frozen=True)
class OrderSpec:
    """A total order on ``Z^rank``: lexicographic in the images under ``forms``."""

    rank: int
    forms: tuple[tuple[QuadraticNumber, ...], ...]
    d: int = 1

    def __post_init__(self):
        forms = tuple(
            tuple(c if isinstance(c, QuadraticNumber) else QuadraticNumber(Fraction(c), 0, self.d) for c in row)
            for row in self.forms
        )
        object.__setattr__(self, "forms", forms)
        if self.rank < 1:
            raise ValueError("rank must be positive")
        if any(len(row) != self.rank for row in forms):
            raise RankMismatch("every form needs one coefficient per generator")
        for row in forms:
            for c in row:
                if c.b != 0 and c.d != self.d:
                    raise ValueError("all forms must share the same d")

    # constructors --------------------------------------------------------
    @classmethod
    def lex(cls, rank: int) -> "OrderSpec":
        """Pure lexicographic order, first coordinate most significant."""
        return cls(rank, tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank)))

    @classmethod
    def weights(cls, weights: Sequence[tuple], d: int) -> "OrderSpec":
        """Rank-2 order with first form ``(a_1 + b_1 sqrt d, a_2 + b_2 sqrt d)``
        completed by the second coordinate; ``weights`` is a pair of (a, b)."""
        row = tuple(QuadraticNumber(a, b, d) for a, b in weights)
        return cls(2, (row, (QuadraticNumber(0, 0, d), QuadraticNumber(1, 0, d))), d)

    # integer forms used on hot paths ------------------------------------
    @cached_property
    def _int_forms(self) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
        out = []
        for row in self.forms:
            den = 1
            for c in row:
                for x in (c.a, c.b):
                    den = den * x.denominator // _gcd(den, x.denominator)
            out.append(
                (
                    tuple(int(c.a * den) for c in row),
                    tuple(int(c.b * den) for c in row),
                )
            )
        return tuple(out)

    def sign(self, coords: Sequence[int]) -> int:
        """Sign of a group element in this order."""
        if len(coords) != self.rank:
            raise RankMismatch(f"expected {self.rank} coordinates, got {len(coords)}")
        d = self.d
        for A, B in self._int_forms:
            a = sum(x * y for x, y in zip(A, coords))
            b = sum(x * y for x, y in zip(B, coords)) if d != 1 else 0
            s = _isign(a, b, d)
            if s:
                return s
        return 0

    def compare(self, x: Sequence[int], y: Sequence[int]) -> int:
        if len(x) != len(y):
            raise RankMismatch("rank mismatch")
        return self.sign([a - b for a, b in zip(x, y)])

    def evaluate(self, coords: Sequence[int]) -> tuple[QuadraticNumber, ...]:
        """Images of ``coords`` under all forms."""
        return tuple(sum((c * x for c, x in zip(row, coords)), QuadraticNumber(0, 0, self.d)) for row in self.forms)

    def is_total(self) -> bool:
        """Whether the forms have full rank over ``Q(sqrt d)``."""
        a = [list(row) for row in self.forms]
        n = self.rank
        if len(a) < n:
            return False
        rank = 0
        for col in range(n):
            piv = next((r for r in range(rank, len(a)) if a[r][col]), None)
            if piv is None:
                continue
            a[rank], a[piv] = a[piv], a[rank]
            p = a[rank][col]
            for r in range(rank + 1, len(a)):
                if a[r][col]:
                    f = a[r][col] / p
                    a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
            rank += 1
        return rank == n


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def gp_compare(a: GroupElement, b: GroupElement, order: OrderSpec) -> int:
    """Return -1, 0 or 1 as ``a < b``, ``a == b`` or ``a > b``."""
    if a.rank != order.rank or b.rank != order.rank:
        raise RankMismatch("group element rank differs from order rank")
    return order.compare(a.coords, b.coords)


# ---------------------------------------------------------------------------
# Perron basis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PerronResult:
    """``basis`` rows are the gamma_j; ``reps[i]`` are the coefficients of alpha_i."""

    basis: tuple[tuple[int, ...], ...]
    reps: tuple[tuple[int, ...], ...]
    steps: int = 0

    def gammas(self) -> list[GroupElement]:
        return [GroupElement(row) for row in self.basis]


def check_perron(result: PerronResult, alphas: Sequence, order: OrderSpec) -> list[str]:
    """Re-verify the three postconditions; returns the list of violations."""
    problems = []
    U = [list(r) for r in result.basis]
    if len(U) != order.rank or abs(int_det(U)) != 1:
        problems.append("basis is not unimodular")
    for j, row in enumerate(U):
        if order.sign(row) <= 0:
            problems.append(f"basis element {j} is not positive")
    coords = [a.coords if isinstance(a, GroupElement) else tuple(a) for a in alphas]
    if len(result.reps) != len(coords):
        problems.append("wrong number of representations")
    for i, (rep, alpha) in enumerate(zip(result.reps, coords)):
        if any(n < 0 for n in rep):
            problems.append(f"representation {i} has a negative coefficient")
        if vec_mat(rep, U) != tuple(alpha):
            problems.append(f"representation {i} does not reconstruct its element")
    return problems


def _qsum(coeffs, values, d):
    total = QuadraticNumber(0, 0, d)
    for c, v in zip(coeffs, values):
        if c:
            total = total + v * c
    return total


class _StepCounter:
    def __init__(self, cap):
        self.cap = cap
        self.steps = 0

    def tick(self):
        self.steps += 1
        if self.steps > self.cap:
            raise AlgorithmStall(f"Perron reduction exceeded {self.cap} steps")


def _archimedean_rank2(vals, ys, d, counter):
    """Subtractive reduction on Z^2 embedded in R by ``vals``.

    Returns (Q, reps) with Q rows the positive basis in the given coordinates.
    """
    Q = [[1, 0], [0, 1]]
    for k in range(2):
        if vals[k].sign() < 0:
            Q[k] = [-x for x in Q[k]]
    gv = [_qsum(Q[k], vals, d) for k in range(2)]
    # coordinates of each alpha w.r.t. Q
    inv = int_inverse(Q)
    reps = [list(vec_mat(y, inv)) for y in ys]
    for rep in reps:
        if rep[0] <= 0 and rep[1] <= 0:
            raise NegativeInput("an input element is negative")
    while True:
        bad = next((rep for rep in reps if rep[0] < 0 or rep[1] < 0), None)
        if bad is None:
            return Q, reps
        counter.tick()
        big, small = (0, 1) if gv[0] > gv[1] else (1, 0)
        # gamma_big <- gamma_big - gamma_small; coefficient of small absorbs big's
        Q[big] = [x - y for x, y in zip(Q[big], Q[small])]
        gv[big] = gv[big] - gv[small]
        for rep in reps:
            rep[small] += rep[big]


def _perron_layer(basis, alphas, forms, d, counter):
    """Positive basis of the lattice spanned by ``basis`` (ambient rows).

    ``alphas`` are coordinate vectors w.r.t. ``basis``.  Returns (T, reps) where
    the new basis is ``T . basis`` and ``reps[i] . T = alphas[i]``.
    """
    m = len(basis)
    if m == 0:
        if any(any(a) for a in alphas):
            raise RankMismatch("non-zero element in the zero lattice")
        return [], [() for _ in alphas]
    fi = 0
    while True:
        if fi >= len(forms):
            raise OrderNotTotal("forms do not separate the lattice")
        form = forms[fi]
        vals = [_qsum(b, form, d) for b in basis]
        if any(vals):
            break
        fi += 1
    den = 1
    for v in vals:
        for x in (v.a, v.b):
            den = den * x.denominator // _gcd(den, x.denominator)
    M = [[int(v.a * den) for v in vals]]
    if d != 1 and any(v.b for v in vals):
        M.append([int(v.b * den) for v in vals])
    W, s = _column_reduce(M, m)
    Winv = int_inverse(W)
    Wt = [list(col) for col in zip(*W)]  # new basis in terms of input basis
    nb = [list(vec_mat(row, basis)) for row in Wt]
    ys = [vec_mat(a, [list(r) for r in zip(*Winv)]) for a in alphas]  # y' = W^{-1} y
    qvals = [_qsum(nb[k], form, d) for k in range(s)]

    top = [i for i, y in enumerate(ys) if any(y[:s])]
    low = [i for i, y in enumerate(ys) if not any(y[:s])]

    # quotient layer
    if s == 1:
        sgn = qvals[0].sign()
        Q = [[sgn]]
        qreps = {}
        for i in top:
            n0 = ys[i][0] * sgn
            if n0 < 0:
                raise NegativeInput("an input element is negative")
            qreps[i] = [n0]
    else:
        Q, reps2 = _archimedean_rank2(qvals, [ys[i][:2] for i in top], d, counter)
        qreps = dict(zip(top, reps2))

    # convex subgroup layer
    Td, dreps = _perron_layer(nb[s:], [ys[i][s:] for i in low], forms[fi + 1 :], d, counter)
    Tdinv = int_inverse(Td) if Td else []
    r = m - s
    z0 = {i: list(vec_mat(ys[i][s:], Tdinv)) if r else [] for i in top}
    N = 0
    for i in top:
        tot = sum(qreps[i])
        for z in z0[i]:
            if z < 0:
                N = max(N, -(z // tot))
    # lifted basis: gamma_k = Q_k . nb[:s] - N * sum(delta_l)
    colsum = [sum(Td[l][c] for l in range(r)) for c in range(r)]
    P = [list(Q[k]) + [-N * c for c in colsum] for k in range(s)]
    P += [[0] * s + list(Td[l]) for l in range(r)]
    T = mat_mul(P, Wt)
    reps: list[tuple[int, ...]] = [()] * len(alphas)
    for i in top:
        tot = sum(qreps[i])
        reps[i] = tuple(qreps[i]) + tuple(z + N * tot for z in z0[i])
    for i, dr in zip(low, dreps):
        reps[i] = (0,) * s + tuple(dr)
    return T, reps


def perron_basis(alphas: Sequence, order: OrderSpec, step_cap: int = DEFAULT_STEP_CAP) -> PerronResult:
    """Positive basis of ``Z^r`` in which all ``alphas`` have non-negative coordinates.

    The order is peeled layer by layer: the first form that does not vanish
    cuts out the largest proper convex subgroup; its (rank <= 2) archimedean
    quotient is handled by subtractive Euclidean steps, the convex subgroup
    recursively, and the quotient lifts are shifted down far enough that the
    subgroup parts of all representations become non-negative.
    """
    coords = [tuple(a.coords) if isinstance(a, GroupElement) else tuple(a) for a in alphas]
    for c in coords:
        if len(c) != order.rank:
            raise RankMismatch("element rank differs from order rank")
        if order.sign(c) < 0:
            raise NegativeInput(f"element {c} is negative")
    counter = _StepCounter(step_cap)
    identity = [[int(i == j) for j in range(order.rank)] for i in range(order.rank)]
    T, reps = _perron_layer(identity, coords, list(order.forms), order.d, counter)
    return PerronResult(tuple(tuple(row) for row in T), tuple(tuple(r) for r in reps), counter.steps)
