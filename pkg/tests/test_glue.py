#  FloerGlue
#  Copyright (C) 2023-2024, Henry Stratmann III
#
#  This program is free software: you can redistribute it and/or modify
#  it under the terms of the GNU General Public License version 3 as
#  published by the Free Software Foundation.
#
#  This program is distributed in the hope that it will be useful,
#  but WITHOUT ANY WARRANTY; without even the implied warranty of
#  MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
#  GNU General Public License for more details.
#
#  You should have received a copy of the GNU General Public License
#  along with this program.  If not, see <https://www.gnu.org/licenses/>.

from floerglue.glue import (connecting_iso_rho, quotient_by_span, glue_parallel, glue_perp, connected_sum_cfk, connected_sum_cfl,
                            PARALLEL, PERP, CONNECTED_SUM)
from floerglue.floer import CflFlag, build_cfl_flag, build_cfk_flag, hfk_ranks, total_homology, total_rank_of
from floerglue.homalg import Generator, Flag, ChainMap, F2Matrix, make_complex, homology, is_contractible
from floerglue.knotio import KnotData, lookup, knot_table, connected_sum_data
from floerglue.model import hfk_ranks_from_data
from floerglue.errors import NotIso, IncompatibleRelation

import pytest

def test_trefoil_connecting_isomorphism() -> None:
    rho = connecting_iso_rho(build_cfl_flag(lookup("3_1"))[1])
    assert rho.pairs() == [("A:z", "C:y0_0")]
    assert rho.maslov_shift == -1

def test_connecting_isomorphism_of_the_empty_flag() -> None:
    rho = connecting_iso_rho(build_cfl_flag(lookup("3_1")).sector(9))
    assert rho.rank() == 0

def test_missing_connecting_map() -> None:
    plus = make_complex([Generator("a", 0, 1), Generator("c", -1, 1)], [("a", "c")])
    with pytest.raises(NotIso):
        connecting_iso_rho(Flag(plus, ["c"], ["c"]))

def test_connecting_map_of_wrong_size() -> None:
    plus = make_complex([Generator("a", 0, 1), Generator("b", 0, 1), Generator("c", -1, 1)], [("a", "c")])
    flag = Flag(plus, ["c"], ["c"])
    flag.connecting = ChainMap.from_pairs(flag.top(), flag.minus(), [("a", "c")], 0, -1)
    with pytest.raises(NotIso):
        connecting_iso_rho(flag)

def test_degenerate_connecting_map() -> None:
    plus = make_complex([Generator("a", 0, 1), Generator("c", -1, 1)])
    flag = Flag(plus, ["c"], ["c"])
    flag.connecting = ChainMap(flag.top(), flag.minus(), F2Matrix(1, 1), 0, -1)
    with pytest.raises(NotIso):
        connecting_iso_rho(flag)

def test_quotient_must_be_closed() -> None:
    c = make_complex([Generator("x", 1, 0), Generator("y", 0, 0)], [("x", "y")])
    with pytest.raises(IncompatibleRelation):
        quotient_by_span(c, ["x"], [])
    quotient, span = quotient_by_span(c, ["y"], [])
    assert quotient.ids() == ["x"]
    assert span == 1

def test_quotient_adds_arrows_to_close_the_span() -> None:
    c = make_complex([Generator("a", 1, 0), Generator("b", 0, 0), Generator("c", 1, 0)], [("a", "b")])
    quotient, span = quotient_by_span(c, [], [{"a", "c"}])
    assert span == 1
    assert quotient.ids() == ["b", "c"]
    assert quotient.arrows() == [("c", "b")]
    assert is_contractible(quotient)

def test_quotient_without_a_closing_correction() -> None:
    c = make_complex([Generator("a", 1, 0), Generator("b", 0, 0), Generator("c", 1, -2)], [("a", "b")])
    with pytest.raises(IncompatibleRelation) as e:
        quotient_by_span(c, [], [{"a", "b", "c"}])
    assert str(e.value) == "the identified span is not closed under the differential"

def test_parallel_trefoils() -> None:
    flag = build_cfl_flag(lookup("3_1"))[1]
    glued = glue_parallel(flag, flag, ["3_1", "3_1"])
    p = glued.provenance
    assert (p.ambient, p.killed, p.identified) == (16, 9, 1)
    assert len(glued) == 6
    assert glued.bookkeeping_holds()
    assert p.pairs == [("[C:y0_0,A:z]", ["[A:z,C:y0_0]"])]
    assert glued.to_json()["provenance"]["op"] == PARALLEL

def test_parallel_unknots() -> None:
    flag = build_cfl_flag(lookup("unknot"))[-1]
    glued = glue_parallel(flag, flag)
    assert glued.complex.ids() == ["[A:z,A:z]", "[C:z,A:z]"]
    assert sum(homology(glued.complex).values()) == 2
    assert glued.companion is not None
    assert is_contractible(glued.companion)

@pytest.mark.parametrize("label", [-1, 1])
def test_parallel_with_the_unknot_gives_the_total_complex(label: int) -> None:
    trefoil = build_cfl_flag(lookup("3_1"))
    glued = glue_parallel(build_cfl_flag(lookup("unknot"))[-1], trefoil[label])
    assert len(glued) == 4
    sector = CflFlag(trefoil.knot, {label: trefoil[label]})
    assert sum(homology(glued.complex).values()) == total_rank_of(total_homology(sector, True))

def test_parallel_of_empty_sectors() -> None:
    empty = build_cfl_flag(lookup("3_1")).sector(11)
    glued = glue_parallel(empty, empty)
    assert len(glued) == 0
    assert glued.bookkeeping_holds()

def test_perp_unknots() -> None:
    glued = glue_perp(build_cfl_flag(lookup("unknot"))[-1], build_cfk_flag(lookup("unknot")), ["unknot", "unknot"])
    assert glued.complex.ids() == ["0:[A:z,BX:z]"]
    assert homology(glued.complex) == {(1, -1): 1}
    assert glued.companion is not None
    assert is_contractible(glued.companion)
    p = glued.provenance
    assert (p.op, p.ambient, p.killed, p.identified) == (PERP, 2, 1, 0)

def test_granny_knot() -> None:
    trefoil = lookup("3_1")
    for s, rank in zip([2, 1, 0, -1, -2], [1, 2, 3, 2, 1]):
        assert homology(connected_sum_cfk(trefoil, trefoil, 2 * s)) == {(s - 2, 2 * s): rank}
    assert len(connected_sum_cfk(trefoil, trefoil, 6)) == 0

def test_sum_with_the_unknot() -> None:
    unknot = lookup("unknot")
    trefoil = lookup("3_1")
    for s2 in [-2, 0, 2]:
        assert homology(connected_sum_cfk(unknot, trefoil, s2)) == hfk_ranks(trefoil, s2)

def test_trefoil_and_figure_eight() -> None:
    total = 0
    for s2 in range(-4, 5, 2):
        total += sum(homology(connected_sum_cfk(lookup("3_1"), lookup("4_1"), s2)).values())
    assert total == 15

def test_connected_sum_longitude_bookkeeping() -> None:
    trefoil = lookup("3_1")
    for s2 in [-2, 0, 2]:
        glued = connected_sum_cfl(trefoil, trefoil, s2)
        assert glued.provenance.op == CONNECTED_SUM
        assert glued.provenance.inputs == ["3_1", "3_1"]
        assert glued.bookkeeping_holds()

@pytest.mark.parametrize("k", knot_table(), ids=lambda k: k.name)
def test_sum_with_the_trefoil_multiplies_ranks(k: KnotData) -> None:
    trefoil = lookup("3_1")
    total = connected_sum_data(k, trefoil)
    for s2 in range(-2 * total.genus, 2 * total.genus + 1, 2):
        expected = {key: rank for key, rank in hfk_ranks_from_data(total).items() if key[1] == s2 and rank > 0}
        assert homology(connected_sum_cfk(k, trefoil, s2)) == expected
        assert connected_sum_cfl(k, trefoil, s2).bookkeeping_holds()
