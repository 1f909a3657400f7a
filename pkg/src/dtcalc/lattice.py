"""Row Hermite normal form over the integers and exact lattice membership."""

from __future__ import annotations

from dataclasses import dataclass


def hermite_normal_form(rows: list[list[int]]):
    """Return ``(H, U, pivots)`` with ``H = U @ rows``.

    ``H`` has no zero rows, is upper echelon with positive pivots at the
    strictly increasing columns ``pivots``, and entries above each pivot lie in
    ``[0, pivot)``. ``U`` is the matching slice of a unimodular transform.
    """
    m = len(rows)
    n = len(rows[0]) if rows else 0
    a = [list(map(int, r)) for r in rows]
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    pivots = []
    k = 0
    for j in range(n):
        if k == m:
            break
        while True:
            nz = [i for i in range(k, m) if a[i][j]]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(a[i][j]))
            a[k], a[best] = a[best], a[k]
            u[k], u[best] = u[best], u[k]
            done = True
            for i in range(k + 1, m):
                if a[i][j]:
                    q = a[i][j] // a[k][j]
                    a[i] = [x - q * y for x, y in zip(a[i], a[k])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[k])]
                    if a[i][j]:
                        done = False
            if done:
                break
        if not a[k][j]:
            continue
        if a[k][j] < 0:
            a[k] = [-x for x in a[k]]
            u[k] = [-x for x in u[k]]
        p = a[k][j]
        for i in range(k):
            q = a[i][j] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[k])]
                u[i] = [x - q * y for x, y in zip(u[i], u[k])]
        pivots.append(j)
        k += 1
    return a[:k], u[:k], pivots


@dataclass(frozen=True)
class Reduction:
    """Outcome of reducing ``target`` against an HNF basis.

    On success ``residual`` is zero and ``x`` expresses ``target`` in the
    basis. On failure ``column`` is the first column that cannot be cleared and
    ``pivot`` the basis pivot there (0 when the column has none).
    """

    member: bool
    x: list
    residual: list
    column: int | None
    pivot: int


def reduce_vector(basis: list[list[int]], pivots: list[int], target: list[int]) -> Reduction:
    residual = list(map(int, target))
    x = [0] * len(basis)
    row_of = {p: i for i, p in enumerate(pivots)}
    for j in range(len(residual)):
        if not residual[j]:
            continue
        i = row_of.get(j)
        if i is None:
            return Reduction(False, x, residual, j, 0)
        p = basis[i][j]
        if residual[j] % p:
            return Reduction(False, x, residual, j, p)
        q = residual[j] // p
        residual = [r - q * b for r, b in zip(residual, basis[i])]
        x[i] += q
    return Reduction(True, x, residual, None, 0)


def combine(coeffs: list[int], rows: list[list[int]], n: int) -> list[int]:
    out = [0] * n
    for c, row in zip(coeffs, rows):
        if c:
            out = [o + c * r for o, r in zip(out, row)]
    return out
