from fractions import Fraction

from hypothesis import assume, given, strategies as st

from dtcalc.lattice import combine, hermite_normal_form, reduce_vector

small = st.integers(-6, 6)


def matrices(rows=st.integers(1, 4), cols=st.integers(1, 4)):
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(st.lists(small, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0])
    )


def rational_solve(rows, target):
    """Unique ``x`` with ``x @ rows = target`` for a square nonsingular matrix, or ``None``."""
    n = len(rows)
    # transpose system: rows^T x = target
    a = [[Fraction(rows[j][i]) for j in range(n)] + [Fraction(target[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        for r in range(n):
            if r != col and a[r][col]:
                q = a[r][col] / a[col][col]
                a[r] = [x - q * y for x, y in zip(a[r], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


@given(matrices())
def test_hnf_shape(rows):
    h, u, pivots = hermite_normal_form(rows)
    n = len(rows[0])
    for i, row in enumerate(h):
        assert combine(u[i], rows, n) == row
        j = pivots[i]
        assert row[j] > 0 and not any(row[:j])
        for above in h[:i]:
            assert 0 <= above[j] < row[j]
    assert pivots == sorted(set(pivots))


@given(matrices())
def test_every_input_row_is_a_member(rows):
    h, _, pivots = hermite_normal_form(rows)
    for row in rows:
        assert reduce_vector(h, pivots, row).member


@given(matrices(), st.data())
def test_combinations_are_members_with_valid_certificate(rows, data):
    h, u, pivots = hermite_normal_form(rows)
    coeffs = data.draw(st.lists(small, min_size=len(rows), max_size=len(rows)))
    target = combine(coeffs, rows, len(rows[0]))
    red = reduce_vector(h, pivots, target)
    assert red.member
    x = combine(red.x, u, len(rows))
    assert combine(x, rows, len(rows[0])) == target


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n),
    st.lists(small, min_size=n, max_size=n))))
def test_membership_matches_rational_solve(case):
    rows, target = case
    sol = rational_solve(rows, target)
    assume(sol is not None)
    h, _, pivots = hermite_normal_form(rows)
    expected = all(x.denominator == 1 for x in sol)
    assert reduce_vector(h, pivots, target).member == expected


def test_node_generators():
    # closures of x0 and e on NODE with twisted values (3 at x0, 1 at e); columns (x0, e)
    h, _, pivots = hermite_normal_form([[3, 0], [3, 1]])
    assert h == [[3, 0], [0, 1]] and pivots == [0, 1]
    red = reduce_vector(h, pivots, [1, 1])
    assert not red.member and red.column == 0 and red.pivot == 3


def test_empty_matrix():
    assert hermite_normal_form([]) == ([], [], [])
    assert reduce_vector([], [], [0, 0]).member
    red = reduce_vector([], [], [0, 2])
    assert not red.member and red.column == 1 and red.pivot == 0
