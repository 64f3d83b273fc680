"""
Integer linear algebra and homology bookkeeping.

Smith normal forms give kernels and cokernels of integer matrices; the Wang
sequence of the boundary fibration and the rank-1 assembly rules are written
on top of them.
"""

import logging
from dataclasses import dataclass, field
from itertools import zip_longest
from math import prod

from sympy import factorint
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

from detvan.errors import DomainError, StructuralError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, row-major, arbitrary precision."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        entries = tuple(tuple(int(e) for e in row) for row in self.entries)
        if len(entries) != self.rows or any(len(row) != self.cols for row in entries):
            raise StructuralError(
                f"entry grid does not match declared shape {self.rows}x{self.cols}"
            )
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def from_rows(cls, rows, cols=None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, n):
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, rows, cols):
        return cls.from_rows([[0] * cols for _ in range(rows)], cols)

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def is_square(self):
        return self.rows == self.cols

    def __getitem__(self, index):
        i, j = index
        return self.entries[i][j]

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise StructuralError(f"cannot multiply {self.shape} by {other.shape}")
        result = [[sum(self.entries[i][k] * other.entries[k][j] for k in range(self.cols))
                   for j in range(other.cols)] for i in range(self.rows)]
        return IntMatrix.from_rows(result, other.cols)

    def __sub__(self, other):
        if self.shape != other.shape:
            raise StructuralError(f"cannot subtract {other.shape} from {self.shape}")
        return IntMatrix.from_rows(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
            self.cols,
        )

    def hstack(self, other):
        if self.rows != other.rows:
            raise StructuralError(f"cannot place {other.shape} beside {self.shape}")
        return IntMatrix.from_rows(
            [r1 + r2 for r1, r2 in zip(self.entries, other.entries)], self.cols + other.cols
        )

    def det(self):
        if not self.is_square:
            raise StructuralError(f"determinant of a non-square {self.shape} matrix")
        if self.rows == 0:
            return 1
        return int(DomainMatrix([[ZZ(e) for e in row] for row in self.entries], self.shape, ZZ).det())

    def tolist(self):
        return [list(row) for row in self.entries]


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group: Z^free_rank + Z/d_1 + ... with d_1 | d_2 | ..."""

    free_rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        torsion = tuple(int(d) for d in self.torsion)
        if self.free_rank < 0:
            raise StructuralError("free rank must be a natural number")
        if any(d < 2 for d in torsion):
            raise StructuralError(f"torsion coefficients must be at least 2, got {list(torsion)}")
        if any(b % a for a, b in zip(torsion, torsion[1:])):
            raise StructuralError(f"torsion {list(torsion)} is not a divisor chain")
        object.__setattr__(self, 'torsion', torsion)

    @classmethod
    def from_divisors(cls, *divisors):
        """Group Z/d_1 + Z/d_2 + ... for arbitrary d_i (0 means Z, 1 the trivial group)."""
        primary = {}
        rank = 0
        for d in divisors:
            d = abs(int(d))
            if d == 0:
                rank += 1
            elif d > 1:
                for p, e in factorint(d).items():
                    primary.setdefault(int(p), []).append(int(e))
        columns = zip_longest(*[
            [p ** e for e in sorted(exps, reverse=True)] for p, exps in sorted(primary.items())
        ], fillvalue=1)
        invariants = sorted(prod(col) for col in columns)
        return cls(rank, tuple(invariants))

    @classmethod
    def free(cls, rank):
        return cls(rank, ())

    @property
    def rank(self):
        return self.free_rank

    @property
    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    @property
    def is_free(self):
        return not self.torsion

    def direct_sum(self, *others):
        divisors = [0] * self.free_rank + list(self.torsion)
        for other in others:
            divisors += [0] * other.free_rank + list(other.torsion)
        return AbelianGroup.from_divisors(*divisors)

    def to_dict(self):
        return {'rank': self.free_rank, 'torsion': list(self.torsion)}

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append('Z')
        elif self.free_rank > 1:
            parts.append(f'Z^{self.free_rank}')
        parts += [f'Z/{d}' for d in self.torsion]
        return ' + '.join(parts) if parts else '0'


TRIVIAL = AbelianGroup()
INTEGERS = AbelianGroup.free(1)


class SNF:
    """Smith normal form by repeated minimal-absolute-value pivoting.

    Row operations are accumulated in ``left`` and column operations in
    ``right`` so that left * M * right = S.
    """

    def __init__(self, matrix):
        self.matrix = matrix
        self.A = matrix.tolist()
        self.left = IntMatrix.identity(matrix.rows).tolist()
        self.right = IntMatrix.identity(matrix.cols).tolist()

    @property
    def num_rows(self):
        return self.matrix.rows

    @property
    def num_cols(self):
        return self.matrix.cols

    def compute(self):
        s = 0
        while s < min(self.num_rows, self.num_cols):
            row, col = self._min_abs_pivot(s)
            if row is None:
                break
            self._swap_rows(s, row)
            self._swap_cols(s, col)

            pivot = self.A[s][s]
            for i in range(s + 1, self.num_rows):
                if self.A[i][s]:
                    self._add_row(i, s, -(self.A[i][s] // pivot))
            for j in range(s + 1, self.num_cols):
                if self.A[s][j]:
                    self._add_col(j, s, -(self.A[s][j] // pivot))

            if any(self.A[i][s] for i in range(s + 1, self.num_rows)) or \
                    any(self.A[s][j] for j in range(s + 1, self.num_cols)):
                continue

            row_next = self._non_divisible_row(s)
            if row_next is not None:
                self._add_row(s, row_next, 1)
                continue
            if self.A[s][s] < 0:
                self._negate_row(s)
            s += 1

        return (
            IntMatrix.from_rows(self.left, self.num_rows),
            IntMatrix.from_rows(self.A, self.num_cols),
            IntMatrix.from_rows(self.right, self.num_cols),
        )

    def _min_abs_pivot(self, s):
        best = (None, None)
        best_value = None
        for i in range(s, self.num_rows):
            for j in range(s, self.num_cols):
                value = abs(self.A[i][j])
                if value and (best_value is None or value < best_value):
                    best, best_value = (i, j), value
        return best

    def _non_divisible_row(self, s):
        pivot = self.A[s][s]
        for i in range(s + 1, self.num_rows):
            for j in range(s + 1, self.num_cols):
                if self.A[i][j] % pivot:
                    return i
        return None

    def _swap_rows(self, a, b):
        self.A[a], self.A[b] = self.A[b], self.A[a]
        self.left[a], self.left[b] = self.left[b], self.left[a]

    def _swap_cols(self, a, b):
        for grid in (self.A, self.right):
            for row in grid:
                row[a], row[b] = row[b], row[a]

    def _add_row(self, target, source, k):
        """row[target] += k * row[source]"""
        for grid in (self.A, self.left):
            grid[target] = [t + k * s for t, s in zip(grid[target], grid[source])]

    def _add_col(self, target, source, k):
        """col[target] += k * col[source]"""
        for grid in (self.A, self.right):
            for row in grid:
                row[target] += k * row[source]

    def _negate_row(self, a):
        self.A[a] = [-e for e in self.A[a]]
        self.left[a] = [-e for e in self.left[a]]


def smith_normal_form(M):
    """Return (U, S, V) with U*M*V = S, U and V unimodular, S diagonal with d_1 | d_2 | ..."""
    return SNF(M).compute()


def diagonal(S):
    return [S[i, i] for i in range(min(S.rows, S.cols))]


def ker_coker(M):
    """Kernel rank and cokernel of M viewed as a map Z^cols -> Z^rows."""
    _, S, _ = smith_normal_form(M)
    diag = [d for d in diagonal(S) if d]
    rank = len(diag)
    cokernel = AbelianGroup.from_divisors(*([0] * (M.rows - rank) + diag))
    return M.cols - rank, cokernel


@dataclass(frozen=True)
class GradedHomology:
    """Homology groups by degree, with the number of vertical generators tagged per degree."""

    groups: dict
    vertical: dict = field(default_factory=dict)

    def __getitem__(self, degree):
        return self.groups.get(degree, TRIVIAL)

    @property
    def top_degree(self):
        return max(self.groups) if self.groups else 0

    def betti(self, top=None):
        top = self.top_degree if top is None else top
        return [self[q].rank for q in range(top + 1)]

    def to_list(self, top=None):
        top = self.top_degree if top is None else top
        return [dict(degree=q, **self[q].to_dict()) for q in range(top + 1)]


def wang_homology(T, n):
    """Homology of the second boundary, fibred over the circle with monodromy ``T``.

    T acts on H_{n-1} of the transversal Milnor fibre. For n >= 3:
    H_n = ker(T - 1), H_{n-1} = coker(T - 1), H_1 = Z, H_0 = Z. For n = 2 the
    vertical circle lands in degree 1: H_1 = coker(T - 1) + Z.
    """
    if n < 2:
        raise DomainError(f"Wang sequence needs n >= 2, got {n}")
    if not T.is_square:
        raise StructuralError(f"monodromy must be square, got {T.shape}")
    kernel_rank, cokernel = ker_coker(T - IntMatrix.identity(T.rows))
    groups = {q: TRIVIAL for q in range(n + 1)}
    groups[0] = INTEGERS
    groups[n] = AbelianGroup.free(kernel_rank)
    if n == 2:
        groups[1] = cokernel.direct_sum(INTEGERS)
    else:
        groups[n - 1] = cokernel
        groups[1] = INTEGERS
    return GradedHomology(groups=groups, vertical={1: 1})


def iota1_matrix(N):
    """N x (N+1) matrix: a column of ones followed by the N x N identity."""
    if N < 0:
        raise DomainError("iota1_matrix needs N >= 0")
    rows = [[1] + [1 if i == j else 0 for j in range(N)] for i in range(N)]
    return IntMatrix.from_rows(rows, N + 1)


@dataclass(frozen=True)
class BoundaryPiece:
    """Wang data of one special point (or the axis) of the transversal family."""

    kind: str
    n: int
    monodromy: IntMatrix  # None when unknown (non-D_infinity points)
    dinfty: bool
    count: int = 1

    def __post_init__(self):
        if self.kind not in ('special_point', 'axis'):
            raise StructuralError(f"unknown boundary piece kind '{self.kind}'")
        if self.monodromy is None:
            if self.dinfty:
                raise StructuralError("a D_infinity piece carries a 1x1 monodromy")
        elif not self.monodromy.is_square:
            raise StructuralError(f"monodromy must be square, got {self.monodromy.shape}")
        if self.dinfty and self.monodromy is not None and self.monodromy.shape != (1, 1):
            raise StructuralError("a D_infinity piece carries a 1x1 monodromy")
        if self.count < 1:
            raise StructuralError("a boundary piece represents at least one point")

    @classmethod
    def dinfty_point(cls, n, count=1):
        """Whitney-umbrella point: transversal A_1 whose vanishing cycle is reversed."""
        return cls('special_point', n, IntMatrix.from_rows([[-1]]), True, count)


@dataclass(frozen=True)
class AxisClass:
    kind: str
    milnor: int = None

    A_INFINITY = 'a_infinity'
    ICIS = 'icis'

    @classmethod
    def a_infinity(cls):
        return cls(cls.A_INFINITY)

    @classmethod
    def icis(cls, milnor):
        return cls(cls.ICIS, milnor)

    def to_dict(self):
        if self.kind == self.A_INFINITY:
            return {'class': 'A_infinity'}
        return {'class': 'ICIS', 'milnor': self.milnor}


@dataclass(frozen=True)
class Unsupported:
    """Configuration outside the closed-form rules; ``facts`` holds what is still guaranteed."""

    reason: str
    facts: dict = field(default_factory=dict)


def guaranteed_facts(n):
    """Facts that hold for every ICMC2 Milnor fibre of dimension n."""
    if n == 3:
        return {'betti': [1, 0, 1, None], 'vertical_rank': 1, 'symbolic': {'b3': '2-chi'}}
    return {'betti': [1, 0, None], 'vertical_rank': 1, 'symbolic': {}}


@dataclass(frozen=True)
class Rank1Homology:
    homology: GradedHomology
    vertical_rank: int
    horizontal_rank: int
    h1_prime: AbelianGroup = None


def assemble_rank1_homology(n, pieces, axis, transversal, axis_removed=False):
    """Homology of the perturbed transform from its boundary pieces.

    Closed form for D_infinity points over an A_infinity axis: each of the k
    points contributes two horizontal spheres, the section over P^1 gives the
    vertical class in degree 2. With ``axis_removed`` the affine part is a
    bouquet of 2k - 1 n-spheres (nothing for k = 0).
    """
    if n not in (2, 3):
        raise DomainError(f"assembly is implemented for n in {{2, 3}}, got {n}")
    for piece in pieces:
        if piece.n != n:
            raise StructuralError(f"boundary piece of dimension {piece.n} in an n={n} assembly")

    facts = guaranteed_facts(n)
    if axis.kind != AxisClass.A_INFINITY:
        return Unsupported(f"axis carries an isolated singularity (mu = {axis.milnor})", facts)
    bad = [p for p in pieces if p.kind == 'special_point' and not p.dinfty]
    if bad:
        return Unsupported(f"{sum(p.count for p in bad)} special point(s) are not of type D_infinity", facts)
    if transversal != INTEGERS:
        return Unsupported(f"transversal homology {transversal} is not that of an A_1 point", facts)

    k = sum(p.count for p in pieces if p.kind == 'special_point')
    horizontal = max(2 * k - 1, 0) if axis_removed else 2 * k
    vertical, h1 = 1, TRIVIAL
    if axis_removed:
        vertical = 0
    elif k:
        # kernel of the gluing map is the vertical class, its cokernel is H_1
        vertical, h1 = ker_coker(iota1_matrix(k))

    groups = {0: INTEGERS, 1: h1}
    if n == 3:
        groups[2] = AbelianGroup.free(vertical)
        groups[3] = AbelianGroup.free(horizontal)
    else:
        groups[2] = AbelianGroup.free(horizontal + vertical)

    h1_prime = None
    if n == 2 and pieces:
        stacked = None
        for piece in pieces:
            block = piece.monodromy - IntMatrix.identity(piece.monodromy.rows)
            for _ in range(piece.count):
                stacked = block if stacked is None else stacked.hstack(block)
        h1_prime = ker_coker(stacked)[1]

    logger.debug(f"Assembled n={n}, k={k}, axis_removed={axis_removed}: betti {[groups[q].rank for q in sorted(groups)]}")
    return Rank1Homology(
        homology=GradedHomology(groups=groups, vertical={2: vertical} if vertical else {}),
        vertical_rank=vertical,
        horizontal_rank=horizontal,
        h1_prime=h1_prime,
    )
