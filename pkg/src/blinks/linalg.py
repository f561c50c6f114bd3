"""Exact rational linear algebra on small dense matrices."""

from fractions import Fraction


def solve(matrix, rhs):
    """Solve ``matrix * x = rhs`` exactly; raise ``ValueError`` if singular."""
    n = len(matrix)
    rows = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    if any(len(row) != n + 1 for row in rows) or len(rhs) != n:
        raise ValueError("matrix must be square and match the right-hand side")
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular matrix")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        lead = rows[col][col]
        rows[col] = [v / lead for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return [row[n] for row in rows]


def determinant(matrix):
    n = len(matrix)
    rows = [[Fraction(v) for v in row] for row in matrix]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        lead = rows[col][col]
        det *= lead
        for r in range(col + 1, n):
            if rows[r][col] != 0:
                factor = rows[r][col] / lead
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return det


def is_negative_definite(matrix):
    """Leading principal minors alternate in sign, starting negative."""
    n = len(matrix)
    for k in range(1, n + 1):
        minor = determinant([row[:k] for row in matrix[:k]])
        if minor == 0 or (minor > 0) != (k % 2 == 0):
            return False
    return True
