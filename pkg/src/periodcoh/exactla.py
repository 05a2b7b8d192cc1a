"""Exact integer/rational linear algebra.

Dense matrices with arbitrary-precision entries, Smith normal form with
transformation matrices, and small rational helpers (rank, solve, nullspace).
Everything here is a pure function of immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from numbers import Rational
from typing import Iterable, Optional, Sequence


class Matrix:
    """Immutable dense matrix with exact entries (``int`` or ``Fraction``).

    ``rows`` and ``cols`` are counts; ``entries`` is the flat row-major tuple.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable = ()):
        entries = tuple(entries) if entries != () else (0,) * (rows * cols)
        if rows < 0 or cols < 0:
            raise ValueError("negative dimension")
        if len(entries) != rows * cols:
            raise ValueError(
                f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {len(entries)}"
            )
        for e in entries:
            if isinstance(e, bool) or not isinstance(e, Rational):
                raise TypeError(f"matrix entries must be exact rationals, got {e!r}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, [e for r in rows for e in r])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def diagonal(cls, values: Sequence, rows: Optional[int] = None, cols: Optional[int] = None):
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        data = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            data[i][i] = v
        return cls.from_rows(data, cols)

    @classmethod
    def block(cls, blocks: Sequence[Sequence["Matrix"]]) -> "Matrix":
        """Assemble a block matrix; every block row/column must have consistent sizes."""
        if not blocks:
            return cls(0, 0)
        heights = [row[0].rows for row in blocks]
        widths = [b.cols for b in blocks[0]]
        data = []
        for bi, row in enumerate(blocks):
            if len(row) != len(widths):
                raise ValueError("block rows have different lengths")
            for b, w in zip(row, widths):
                if b.rows != heights[bi] or b.cols != w:
                    raise ValueError("inconsistent block sizes")
            for i in range(heights[bi]):
                line = []
                for b in row:
                    line.extend(b.row(i))
                data.append(line)
        return cls(sum(heights), sum(widths), [e for r in data for e in r])

    # -- access -----------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def tolist(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(len(rows), len(cols), [self[i, j] for i in rows for j in cols])

    def columns(self, cols: Sequence[int]) -> "Matrix":
        return self.submatrix(range(self.rows), cols)

    # -- arithmetic -------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Matrix({self.tolist()!r})" if self.rows else f"Matrix.zeros(0, {self.cols})"

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c) -> "Matrix":
        return Matrix(self.rows, self.cols, [c * a for a in self.entries])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = [other.col(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for c in ocols:
                out.append(sum(a * b for a, b in zip(r, c) if a and b))
        return Matrix(self.rows, other.cols, out)

    def apply(self, vec: Sequence) -> tuple:
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum(a * b for a, b in zip(self.row(i), vec) if a and b) for i in range(self.rows))

    @property
    def T(self) -> "Matrix":
        return Matrix(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_integral(self) -> bool:
        return all(isinstance(e, int) or e.denominator == 1 for e in self.entries)

    def to_int(self) -> "Matrix":
        if not self.is_integral():
            raise ValueError("matrix has non-integral entries")
        return Matrix(self.rows, self.cols, [int(e) for e in self.entries])

    def mod(self, n: int) -> "Matrix":
        return Matrix(self.rows, self.cols, [int(e) % n for e in self.to_int().entries])

    def hstack(self, other: "Matrix") -> "Matrix":
        return Matrix.block([[self, other]])

    def vstack(self, other: "Matrix") -> "Matrix":
        return Matrix.block([[self], [other]])

    # -- text format ------------------------------------------------------
    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        lines += [" ".join(str(e) for e in self.row(i)) for i in range(self.rows)]
        return "\n".join(lines) + "\n"


def parse_matrix_lines(lines: list[str], start: int = 0) -> tuple[Matrix, int]:
    """Parse one matrix in the ``rows cols`` text format beginning at ``lines[start]``.

    Blank lines are skipped.  Returns the matrix and the index of the next unread line.
    """
    i = start
    while i < len(lines) and not lines[i].strip():
        i += 1
    if i >= len(lines):
        raise ValueError("missing matrix header")
    header = lines[i].split()
    if len(header) != 2:
        raise ValueError(f"bad matrix header {lines[i]!r}")
    rows, cols = int(header[0]), int(header[1])
    i += 1
    data = []
    while len(data) < rows:
        if i >= len(lines):
            raise ValueError("matrix truncated")
        if lines[i].strip():
            vals = [int(t) for t in lines[i].split()]
            if len(vals) != cols:
                raise ValueError(f"expected {cols} entries in row, got {len(vals)}")
            data.append(vals)
        i += 1
    return Matrix(rows, cols, [e for r in data for e in r]), i


def parse_matrix(text: str) -> Matrix:
    m, _ = parse_matrix_lines(text.splitlines())
    return m


# -- determinants ---------------------------------------------------------

def determinant(A: Matrix):
    """Exact determinant (fraction-free Bareiss for integral input)."""
    if A.rows != A.cols:
        raise ValueError("determinant of a non-square matrix")
    n = A.rows
    if n == 0:
        return 1
    if not A.is_integral():
        M = [[Fraction(x) for x in A.row(i)] for i in range(n)]
        det = Fraction(1)
        for k in range(n):
            p = next((i for i in range(k, n) if M[i][k] != 0), None)
            if p is None:
                return 0
            if p != k:
                M[k], M[p] = M[p], M[k]
                det = -det
            det *= M[k][k]
            for i in range(k + 1, n):
                f = M[i][k] / M[k][k]
                if f:
                    for j in range(k, n):
                        M[i][j] -= f * M[k][j]
        return det
    M = [list(map(int, A.row(i))) for i in range(n)]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            p = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if p is None:
                return 0
            M[k], M[p] = M[p], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# -- Smith normal form ----------------------------------------------------

@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal.

    ``invariant_factors`` lists the ``min(rows, cols)`` diagonal entries of ``D``:
    non-negative, each dividing the next, zeros last.
    """

    U: Matrix
    D: Matrix
    V: Matrix
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d)


def _integral_rows(A: Matrix) -> list[list[int]]:
    if not A.is_integral():
        raise TypeError("Smith normal form needs an integer matrix")
    return [[int(x) for x in A.row(i)] for i in range(A.rows)]


def smith_normal_form(A: Matrix) -> SmithDecomposition:
    m, n = A.shape
    D = _integral_rows(A)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        D[i], D[k] = D[k], D[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for r in D:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        rd, rs = D[dst], D[src]
        for j in range(n):
            if rs[j]:
                rd[j] += q * rs[j]
        ud, us = U[dst], U[src]
        for j in range(m):
            if us[j]:
                ud[j] += q * us[j]

    def add_col(dst, src, q):
        for r in D:
            if r[src]:
                r[dst] += q * r[src]
        for r in V:
            if r[src]:
                r[dst] += q * r[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)

        while True:
            p = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
            # remainders are strictly smaller than |p|; move the smallest in
            cand = None
            for i in range(t + 1, m):
                x = D[i][t]
                if x and (cand is None or abs(x) < cand[0]):
                    cand = (abs(x), "r", i)
            for j in range(t + 1, n):
                x = D[t][j]
                if x and (cand is None or abs(x) < cand[0]):
                    cand = (abs(x), "c", j)
            if cand is not None:
                if cand[1] == "r":
                    swap_rows(t, cand[2])
                else:
                    swap_cols(t, cand[2])
                continue
            bad = None
            for i in range(t + 1, m):
                row = D[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1

    factors = tuple(D[i][i] for i in range(min(m, n)))
    return SmithDecomposition(
        U=Matrix(m, m, [e for r in U for e in r]),
        D=Matrix(m, n, [e for r in D for e in r]),
        V=Matrix(n, n, [e for r in V for e in r]),
        invariant_factors=factors,
    )


def invariant_factors(A: Matrix) -> tuple[int, ...]:
    return smith_normal_form(A).invariant_factors


def clear_denominators(A: Matrix) -> Matrix:
    """Scale a rational matrix by the lcm of its denominators (row space unchanged over Q)."""
    if A.is_integral():
        return A.to_int()
    den = 1
    for e in A.entries:
        den = lcm(den, Fraction(e).denominator)
    return Matrix(A.rows, A.cols, [int(e * den) for e in A.entries])


def rational_rank(A: Matrix) -> int:
    return smith_normal_form(clear_denominators(A)).rank


def solve_integer(A: Matrix, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """An integer ``x`` with ``A x = b``, or ``None`` when no integer solution exists."""
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {A.rows} rows")
    snf = smith_normal_form(A)
    c = snf.U.apply([int(x) for x in b])
    y = [0] * A.cols
    for i, ci in enumerate(c):
        d = snf.invariant_factors[i] if i < len(snf.invariant_factors) else 0
        if d == 0:
            if ci != 0:
                return None
        else:
            if ci % d:
                return None
            y[i] = ci // d
    return snf.V.apply(y)


# -- rational elimination ---------------------------------------------------

def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    M = [r[:] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rational_solve(A: Matrix, b: Sequence) -> Optional[tuple[Fraction, ...]]:
    """One rational solution of ``A x = b`` (free variables set to zero), or ``None``."""
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {A.rows} rows")
    aug = [[Fraction(x) for x in A.row(i)] + [Fraction(b[i])] for i in range(A.rows)]
    R, pivots = _rref(aug, A.cols + 1)
    if A.cols in pivots:
        return None
    x = [Fraction(0)] * A.cols
    for r, c in enumerate(pivots):
        x[c] = R[r][A.cols]
    return tuple(x)


def rational_nullspace(A: Matrix) -> list[tuple[Fraction, ...]]:
    """Basis of ``{x : A x = 0}`` over Q, one vector per free column."""
    R, pivots = _rref([[Fraction(x) for x in A.row(i)] for i in range(A.rows)], A.cols)
    free = [c for c in range(A.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * A.cols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -R[r][f]
        basis.append(tuple(v))
    return basis


def rational_inverse(A: Matrix) -> Matrix:
    if A.rows != A.cols:
        raise ValueError("inverse of a non-square matrix")
    n = A.rows
    aug = [[Fraction(x) for x in A.row(i)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    R, pivots = _rref(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return Matrix(n, n, [R[i][n + j] for i in range(n) for j in range(n)])


def integer_inverse(A: Matrix) -> Matrix:
    """Inverse of a unimodular integer matrix, as an integer matrix."""
    inv = rational_inverse(A)
    if not inv.is_integral():
        raise ValueError("matrix is not unimodular")
    return inv.to_int()


def gcd_all(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g
