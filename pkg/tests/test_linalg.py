from fractions import Fraction as F

from robustftap.linalg import nullspace, rref, solve_linear


def test_solve_trivial_zero_system():
    assert solve_linear([[F(0)]], [F(0)]) == [F(0)]


def test_solve_two_by_two():
    # x + y = 1, x - y = 0  ->  (1/2, 1/2)
    sol = solve_linear([[F(1), F(1)], [F(1), F(-1)]], [F(1), F(0)])
    assert sol == [F(1, 2), F(1, 2)]


def test_solve_inconsistent():
    assert solve_linear([[F(0)]], [F(1)]) is None


def test_solve_underdetermined_sets_free_to_zero():
    sol = solve_linear([[F(1), F(2)]], [F(4)])
    assert sol == [F(4), F(0)]


def test_nullspace_identity_is_trivial():
    assert nullspace([[F(1), F(0)], [F(0), F(1)]]) == []


def test_nullspace_single_row():
    assert nullspace([[F(1), F(1)]]) == [[F(1), F(-1)]]


def test_nullspace_conditional_expectation_system():
    # Two aggregation equations in four unknowns, uniform weights 1/4:
    # hand elimination leaves two free columns.
    mat = [
        [F(1, 4), F(1, 4), F(0), F(0)],
        [F(0), F(0), F(1, 4), F(1, 4)],
    ]
    basis = nullspace(mat)
    assert len(basis) == 2
    for vec in basis:
        assert all(sum(row[j] * vec[j] for j in range(4)) == 0 for row in mat)


def test_rref_pivots():
    red, pivots = rref([[F(2), F(4)], [F(1), F(2)]])
    assert pivots == [0]
    assert red[0] == [F(1), F(2)]
    assert red[1] == [F(0), F(0)]


def test_solution_plus_kernel_spans_solutions():
    mat = [[F(1), F(2), F(-1)], [F(2), F(4), F(-2)]]
    rhs = [F(3), F(6)]
    part = solve_linear(mat, rhs)
    kern = nullspace(mat)
    assert part is not None
    assert len(kern) == 2
    # Any kernel combination added to the particular solution still solves.
    combo = [part[j] + 2 * kern[0][j] - 3 * kern[1][j] for j in range(3)]
    for row, b in zip(mat, rhs):
        assert sum(row[j] * combo[j] for j in range(3)) == b
