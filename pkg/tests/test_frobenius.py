from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _fixtures import P_REF, TABLES, e8_character, j_minus_744
from exvoa.errors import Degenerate, ResonantObstruction
from exvoa.frobenius import (check_solution, indicial, p_function, primary_counts, resonances,
                             root_condition_report, solve_at, solve_symbolic, vacuum_dims,
                             vacuum_forcing)
from exvoa.qseries import partition_counts
from exvoa.zhu import assemble


def _sign(l, n):
    """Reference p_l at half-integral l carries the factor (-1)^(l - 1/2)."""
    if n == l and l.denominator == 2:
        return -1 if int(l - Fr(1, 2)) % 2 else 1
    return 1


@pytest.mark.parametrize("key", sorted(P_REF, key=lambda k: (Fr(k[0]), Fr(k[1]))))
def test_reference_p_functions(key):
    l, n = Fr(key[0]), Fr(key[1])
    assert p_function(l, n) == P_REF[key] * _sign(l, n)


def test_vacuum_dims():
    # prod_{n>=2} (1 - q^n)^(-1) = (1 - q) * partitions
    p = partition_counts(20)
    assert vacuum_dims(20) == tuple(p[n] - (p[n - 1] if n else 0) for n in range(20))


def test_e8_and_moonshine_solutions():
    op = assemble(1)
    sol = solve_at(op.specialize(8), Fr(-1, 3), 15)
    assert sol.coeffs.agrees_with(e8_character(15), 15)
    op2 = assemble(2)
    sol2 = solve_at(op2.specialize(24), -1, 12, vacuum_forcing(op2, 2))
    assert sol2.coeffs.agrees_with(j_minus_744(12), 12)


def test_primary_counts_e8():
    op = assemble(1).specialize(8)
    sol = solve_at(op, Fr(-1, 3), 5)
    counts = primary_counts(list(sol.coeffs.coeffs), Fr(1), False, 3)
    assert counts == {1: 248, 2: 3875, 3: 30380}


@pytest.mark.parametrize("l", [Fr(1), Fr(2), Fr(3), Fr(3, 2)])
def test_symbolic_dims_specialize(l):
    """Every table row: the symbolic profile evaluated at c equals the specialized solution."""
    op = assemble(l)
    prof = solve_symbolic(op, l, terms=int(l) + 3)
    for c, _, _ in TABLES[l]:
        if l == 3 and c == 48:
            continue
        spec = op.specialize(c)
        sol = solve_at(spec, -c / 24, int(l) + 3, vacuum_forcing(op, l))
        n = len(prof.dims)
        assert [d(c) for d in prof.dims] == list(sol.coeffs.coeffs[:n])


@pytest.mark.parametrize("l", [Fr(1), Fr(2), Fr(3, 2), Fr(5, 2)])
@given(c=st.fractions(min_value=-30, max_value=30, max_denominator=7))
@settings(max_examples=15, deadline=None)
def test_residual_vanishes(l, c):
    op = assemble(l)
    spec = op.specialize(c)
    if not spec.g0:
        return
    roots = indicial(spec).roots()
    for x in set(roots) | {-c / 24}:
        forced = vacuum_forcing(op, l) if x == -c / 24 else None
        try:
            sol = solve_at(spec, x, 8, forced)
        except ResonantObstruction:
            continue
        assert sol.coeffs.offset == x and sol.coeffs.coeffs[0] == 1
        assert check_solution(spec, sol)


def test_h_relation_on_table_rows():
    for l in (Fr(1), Fr(2), Fr(3, 2)):
        op = assemble(l)
        for c, _, hs in TABLES[l]:
            roots = indicial(op.specialize(c)).roots()
            assert {x + c / 24 for x in roots} == set(hs)


def test_resonance_at_c_10():
    op = assemble(1).specialize(10)
    roots = indicial(op).roots()
    assert roots == [Fr(-5, 12), Fr(7, 12)]
    assert resonances(roots, False) == [(Fr(-5, 12), Fr(7, 12))]
    with pytest.raises(ResonantObstruction):
        solve_at(op, Fr(-5, 12), 5)


def test_degenerate_leading_coefficient():
    op = assemble(3).specialize(Fr(7, 578))
    with pytest.raises(Degenerate):
        solve_at(op, 0, 3)


@pytest.mark.parametrize("l", [1, 2, 3, Fr(3, 2), Fr(5, 2)])
def test_root_condition(l):
    rep = root_condition_report(assemble(l), l)
    assert rep.identical_shifts == [0] and rep.violators == []


def test_twisted_resonance_uses_half_steps():
    assert resonances([Fr(0), Fr(1, 2)], True) == [(Fr(0), Fr(1, 2))]
    assert resonances([Fr(0), Fr(1, 2)], False) == []
