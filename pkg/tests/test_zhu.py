from fractions import Fraction as Fr

import pytest

from _fixtures import e8_character, j_minus_744, mlde, tmlde
from exvoa.kernel import C, UniPoly
from exvoa.qseries import eisenstein_series, eta_quotient_fermion
from exvoa.zhu import (E, ModLinOp, assemble, assemble_mlde, assemble_tmlde, casimir_operator,
                       ef_qd, ef_series, partition_operator, reset_caches)

UNIT = (0, 0, 0, 0)
T = 12


def test_vacuum_descendant_operators():
    one = UniPoly.const(1)
    assert partition_operator(()) == {0: {UNIT: one}}
    assert partition_operator((2,)) == {1: {UNIT: one}}
    assert partition_operator((2, 2)) == {2: {UNIT: one}, 0: {(0, 1, 0, 0): C.scale(Fr(1, 2))}}
    # L[-n] 1 for n >= 3 is an L[-1]-derivative of a vacuum vector
    for n in (3, 4, 5, 6):
        assert partition_operator((n,)) == {}


def test_ramanujan_in_form_ring():
    # q d/dq E4 = -4 E2 E4 + 14 E6, compared on q-expansions
    lhs = ef_series(ef_qd(E(4)), T)
    assert lhs.agrees_with(eisenstein_series(4, T).qd(), T)


@pytest.mark.parametrize("l", [1, 2, 3, 4])
def test_reference_mlde(l):
    op = assemble_mlde(l)
    assert op.equivalent(mlde(l))
    assert op.series_equivalent(mlde(l), 8)


@pytest.mark.parametrize("l", [Fr(1, 2), Fr(3, 2), Fr(5, 2)])
def test_reference_tmlde(l):
    assert assemble_tmlde(l).equivalent(tmlde(l))


@pytest.mark.parametrize("l", [1, 2, 3, 4, Fr(1, 2), Fr(3, 2), Fr(5, 2), Fr(7, 2)])
def test_weights_and_no_e2(l):
    op = assemble(l)
    assert op.weight_ok() and not op.has_e2()
    assert op.order == int(l + Fr(1, 2)) + (1 if Fr(l).denominator == 1 else 0)


def test_e8_character_annihilated():
    op = assemble(1).specialize(8)
    assert not any(op.apply(e8_character(T)).coeffs)


def test_moonshine_annihilated():
    op = assemble(2).specialize(24)
    z = j_minus_744(T)
    assert z.coeffs[:4] == (Fr(1), Fr(0), Fr(196884), Fr(21493760))
    assert not any(op.apply(z).coeffs)


@pytest.mark.parametrize("m", [1, 2, 5])
def test_free_fermion_annihilated(m):
    op = assemble(Fr(1, 2)).specialize(Fr(m, 2))
    assert not any(op.apply(eta_quotient_fermion(m, T)).coeffs)


def test_casimir_operator_top_order():
    op, den = casimir_operator(1, 4)
    assert max(op) == 2 and den.degree >= 1


def test_json_roundtrip():
    for l in (2, Fr(3, 2)):
        op = assemble(l)
        back = ModLinOp.from_json(op.to_json())
        assert back.equivalent(op)
        spec = op.specialize(Fr(7, 3))
        assert ModLinOp.from_json(spec.to_json()).equivalent(spec)


def test_disk_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("EXVOA_CACHE_DIR", str(tmp_path))
    reset_caches()
    first = assemble(2)
    assert list(tmp_path.glob("mlde_l2_v*.json"))
    reset_caches()
    again = assemble(2)
    assert again.equivalent(first)
    reset_caches()


def test_specialize_and_indicial():
    op = assemble(1)
    # I(x) = 4 x(x - 1/6) - 5c(c+4)/720 ; roots -c/24 and (c+4)/24
    for c in (Fr(1), Fr(8), Fr(-22, 5)):
        ind = op.specialize(c).indicial()
        val = lambda x: sum(a * x**i for i, a in enumerate(ind))  # noqa: E731
        assert val(-c / 24) == 0 and val((c + 4) / 24) == 0
