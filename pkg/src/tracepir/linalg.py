"""Exact Gaussian elimination over a field context.

Matrices are lists of row lists.  Used for the error-locator solve in the
decoder, trace-Gram inversion, and coordinate changes between power
bases; sizes stay small so there is no pivoting strategy beyond "first
nonzero".
"""


def solve(field, rows, rhs):
    """One solution of rows * x = rhs with free variables set to zero.

    Returns None when the system is inconsistent.
    """
    m = len(rows)
    if m != len(rhs):
        raise ValueError("matrix/vector size mismatch")
    ncols = len(rows[0]) if m else 0
    aug = [list(r) + [v] for r, v in zip(rows, rhs)]
    pivots = []
    row = 0
    for col in range(ncols):
        pivot = None
        for i in range(row, m):
            if aug[i][col] != field.zero:
                pivot = i
                break
        if pivot is None:
            continue
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = field.inv(aug[row][col])
        aug[row] = [field.mul(inv, c) for c in aug[row]]
        for i in range(m):
            if i != row and aug[i][col] != field.zero:
                f = aug[i][col]
                aug[i] = [field.sub(c, field.mul(f, p)) for c, p in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for i in range(row, m):
        if aug[i][ncols] != field.zero:
            return None
    x = [field.zero] * ncols
    for r, col in enumerate(pivots):
        x[col] = aug[r][ncols]
    return x


def invert(field, rows):
    """Matrix inverse, or None if singular."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    aug = [list(r) + [field.one if i == j else field.zero for j in range(n)]
           for i, r in enumerate(rows)]
    for col in range(n):
        pivot = None
        for i in range(col, n):
            if aug[i][col] != field.zero:
                pivot = i
                break
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = field.inv(aug[col][col])
        aug[col] = [field.mul(inv, c) for c in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != field.zero:
                f = aug[i][col]
                aug[i] = [field.sub(c, field.mul(f, p)) for c, p in zip(aug[i], aug[col])]
    return [row[n:] for row in aug]


def is_invertible(field, rows) -> bool:
    return invert(field, rows) is not None


def mat_vec(field, rows, vec):
    out = []
    for row in rows:
        acc = field.zero
        for c, v in zip(row, vec):
            acc = field.add(acc, field.mul(c, v))
        out.append(acc)
    return out
