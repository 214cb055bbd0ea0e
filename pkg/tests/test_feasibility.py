import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import lp_feasible
from univjac.errors import ResourceLimit
from univjac.feasibility import (
    Certificate,
    Constraint,
    LinearForm,
    LinearSystem,
    Witness,
    combine_certificate,
    eliminate,
    eq,
    gt,
    is_feasible,
    le,
    lt,
    rational_from_json,
    rational_to_json,
    solve,
    verify,
)

x, y, z = (LinearForm.var(v) for v in "xyz")


def test_linear_form_drops_zero_coefficients():
    f = x + y - y
    assert f.coeffs == {"x": 1}
    assert (x * 0).coeffs == {}


def test_constraint_scaling_is_canonical():
    a = lt(x * F(2, 3) + y * F(4, 3), 2)
    b = lt(x + y * 2, 3)
    assert a == b
    assert eq(-x, 3) == eq(x, -3)


def test_eliminate_feasible_interval():
    s = LinearSystem((lt(x, 1), gt(x, 0)))
    assert len(eliminate(s, "x")) == 0


def test_eliminate_contradictory_interval():
    s = LinearSystem((lt(x, 0), gt(x, 1)))
    out = eliminate(s, "x")
    assert len(out) == 1
    c = out.constraints[0]
    assert c.form.is_constant() and c.relation == "<" and not c.holds_at({})
    assert out.labels == ("r0+r1",)


def test_eliminate_with_equality():
    s = LinearSystem((le(x, y), le(y, z), eq(x, 5)))
    out = eliminate(s, "y")
    assert set(out.constraints) == {le(x, z), eq(x, 5)}
    assert "y" not in out.variables


def test_empty_system_has_a_witness():
    out = solve(LinearSystem(()))
    assert isinstance(out, Witness) and dict(out.values) == {}


@pytest.mark.parametrize("A", [-3, 0, 1, 7])
def test_interval_system_with_solution(A):
    s = LinearSystem(
        (
            gt(x, A), lt(x, A + 1),
            gt(x, F(3 * A - 2, 3)), lt(x, F(3 * A + 2, 3)),
            gt(x, A - 2), lt(x, A + 2),
            gt(x, A), lt(x, A + 2),
        )
    )
    out = solve(s)
    assert isinstance(out, Witness)
    assert A < out.values["x"] < A + F(2, 3)
    assert verify(out, s)


def test_two_intervals_on_one_form_conflict():
    X = (x * 2 - y * 2 + 8) / 4
    s = LinearSystem((gt(X, 2), lt(X, 3), gt(X, 1), lt(X, 2)))
    out = solve(s)
    assert isinstance(out, Certificate)
    assert verify(out, s)
    used = {i for i, m in out.multipliers if m}
    assert used == {0, 3}


def test_certificate_combination_is_contradictory():
    s = LinearSystem((lt(x + y, 0), gt(x, 1), gt(y, 0)))
    out = solve(s)
    coeffs, const, rel = combine_certificate(out, s)
    assert coeffs == {} and rel == "<" and const >= 0


def test_verify_rejects_bad_outcomes():
    s = LinearSystem((lt(x, 0),))
    assert not verify(Witness({"x": F(1)}), s)
    assert not verify(Certificate(((0, F(-1)),)), s)
    assert not verify(Certificate(((3, F(1)),)), s)


def test_equality_multipliers_may_be_negative():
    s = LinearSystem((eq(x, 1), gt(x, 2)))
    out = solve(s)
    assert isinstance(out, Certificate) and verify(out, s)


def test_unbounded_side_gets_an_offset():
    out = solve(LinearSystem((gt(x, 5),)))
    assert out.values["x"] == 6


def test_too_many_variables():
    forms = [LinearForm.var(f"v{i}") for i in range(40)]
    with pytest.raises(ResourceLimit):
        solve(LinearSystem(tuple(lt(f, 1) for f in forms)))


def test_json_round_trips():
    s = LinearSystem((lt(x * F(1, 3) + y, 2), eq(z, F(-7, 2))), labels=("a", "b"))
    assert LinearSystem.from_json(s.to_json()) == s
    assert rational_from_json(rational_to_json(F(-22, 7))) == F(-22, 7)
    assert rational_to_json(F(3)) == {"num": "3", "den": "1"}


# random systems against the vertex-enumeration oracle ---------------------------

VARS = ("a", "b", "c")
coef = st.integers(-3, 3)
row = st.tuples(st.tuples(coef, coef, coef), st.integers(-6, 6), st.sampled_from(["<", "<", "<=", "<=", "="]))
systems = st.lists(row, min_size=1, max_size=7)


def build(rows):
    cons = []
    for coeffs, const, rel in rows:
        form = LinearForm({v: c for v, c in zip(VARS, coeffs)}, const)
        cons.append(Constraint(form, rel))
    return LinearSystem(tuple(cons), VARS)


@given(systems)
@settings(max_examples=500)
def test_solver_agrees_with_brute_force(rows):
    s = build(rows)
    out = solve(s)
    assert verify(out, s)
    assert isinstance(out, Witness) == lp_feasible(rows, 3)


@given(systems, st.integers(0, 10**6))
@settings(max_examples=500)
def test_feasibility_invariant_under_scaling_and_renaming(rows, seed):
    rng = random.Random(seed)
    base = is_feasible(build(rows))
    scaled = [(tuple(c * k for c in co), const * k, rel) for (co, const, rel), k in ((r, rng.randint(1, 5)) for r in rows)]
    assert is_feasible(build(scaled)) == base
    perm = list(range(3))
    rng.shuffle(perm)
    renamed = [(tuple(co[p] for p in perm), const, rel) for co, const, rel in rows]
    assert is_feasible(build(renamed)) == base
    shuffled = list(rows)
    rng.shuffle(shuffled)
    assert is_feasible(build(shuffled)) == base
