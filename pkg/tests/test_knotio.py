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

from floerglue.knotio import (Diagram, parse_pd, serialize_pd, pd_to_json, pd_from_json, braid_closure_pd, seifert_circles,
                              braid_word, braid_seifert_matrix, knot_from_diagram, mirror, connected_sum_data, knot_to_json,
                              knot_from_json, table_diagrams, lookup, knot_table, twist_word, faces, incoherent_pair, vogel_move,
                              braided, KnotData, SeifertData, alexander_polynomial, signature)
from floerglue.laurent import LaurentPoly
from floerglue.errors import PdSyntaxError, EdgeCountError, Disconnected, NotKnot, UnknownKnot, InputError

import pytest

TREFOIL_PD = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"

def test_parse_trefoil() -> None:
    d = parse_pd(TREFOIL_PD)
    assert len(d) == 3
    assert d.edge_count() == 6
    assert d.crossings[0] == (1, 4, 2, 5)

def test_parse_accepts_brackets_and_commas() -> None:
    assert parse_pd("X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]") == parse_pd(TREFOIL_PD)

def test_serialize_is_canonical() -> None:
    assert serialize_pd(parse_pd("  X( 1, 4, 2, 5 )\nX(3,6,4,1)   X(5,2,6,3) ")) == TREFOIL_PD

def test_pd_json() -> None:
    assert pd_to_json(parse_pd(TREFOIL_PD))["pd"][1] == [3, 6, 4, 1]
    assert pd_from_json(pd_to_json(parse_pd(TREFOIL_PD))) == parse_pd(TREFOIL_PD)

def test_empty_json_diagram_is_the_unknot() -> None:
    k = knot_from_diagram("unknot", pd_from_json({"pd": []}))
    assert k.alexander == LaurentPoly({0: 1})
    assert k.signature == 0
    assert k.genus == 0

def test_empty_text() -> None:
    with pytest.raises(PdSyntaxError) as e:
        parse_pd("")
    assert str(e.value) == "0: empty diagram"

def test_short_crossing() -> None:
    with pytest.raises(PdSyntaxError) as e:
        parse_pd("X(1,2,3)")
    assert e.value.offset == 0

def test_garbage_after_crossing() -> None:
    with pytest.raises(PdSyntaxError) as e:
        parse_pd("X(1,4,2,5) Y")
    assert str(e.value) == "11: expected a crossing of the form X(a,b,c,d)"

def test_zero_label() -> None:
    with pytest.raises(PdSyntaxError):
        parse_pd("X(0,1,1,0)")

def test_labels_must_appear_twice() -> None:
    with pytest.raises(EdgeCountError):
        parse_pd("X(1,2,3,4)")

def test_disconnected_diagram() -> None:
    with pytest.raises(Disconnected):
        parse_pd("X(1,1,2,2) X(3,3,4,4)")

def test_braid_closure_of_hopf_link() -> None:
    with pytest.raises(NotKnot):
        braid_closure_pd([1, 1])

def test_braid_closure_with_free_strand() -> None:
    with pytest.raises(NotKnot):
        braid_closure_pd([1, 1, 1], 3)

def test_braid_generator_out_of_range() -> None:
    with pytest.raises(InputError):
        braid_closure_pd([2], 2)

def test_braid_closure_of_trefoil() -> None:
    d = braid_closure_pd([1, 1, 1])
    assert len(d) == 3
    assert len(seifert_circles(d)) == 2
    assert braid_word(d) == ([1, 1, 1], 2)

def test_seifert_matrix_of_trefoil() -> None:
    assert braid_seifert_matrix([1, 1, 1]) == [[-1, 1], [0, -1]]

def test_seifert_matrix_of_figure_eight() -> None:
    assert braid_seifert_matrix([1, -2, 1, -2]) == [[-1, 1], [0, 1]]

def test_invariants_from_seifert_matrix() -> None:
    data = SeifertData([[-1, 1], [0, -1]])
    assert alexander_polynomial(data) == LaurentPoly({2: 1, 0: -1, -2: 1})
    assert signature(data) == -2

def test_pd_of_trefoil_is_the_mirror() -> None:
    k = knot_from_diagram("3_1", parse_pd(TREFOIL_PD))
    assert k.alexander == lookup("3_1").alexander
    assert k.signature == 2

@pytest.mark.parametrize("name,alexander,sigma", [
    ("unknot", {0: 1}, 0),
    ("3_1", {2: 1, 0: -1, -2: 1}, -2),
    ("4_1", {2: -1, 0: 3, -2: -1}, 0),
    ("5_1", {4: 1, 2: -1, 0: 1, -2: -1, -4: 1}, -4),
    ("5_2", {2: 2, 0: -3, -2: 2}, -2),
    ("6_1", {2: -2, 0: 5, -2: -2}, 0),
    ("7_2", {2: 3, 0: -5, -2: 3}, -2),
    ("6_3", {4: 1, 2: -3, 0: 5, -2: -3, -4: 1}, 0),
    ("8_1", {2: -3, 0: 7, -2: -3}, 0),
])
def test_table_invariants(name: str, alexander: dict, sigma: int) -> None:
    k = lookup(name)
    assert k.alexander == LaurentPoly(alexander)
    assert k.signature == sigma
    assert k.genus == max(alexander) // 2

@pytest.mark.parametrize("name,alexander", [
    ("6_2", {4: -1, 2: 3, 0: -3, -2: 3, -4: -1}),
    ("7_4", {2: 4, 0: -7, -2: 4}),
])
def test_table_alexander_polynomials(name: str, alexander: dict) -> None:
    assert lookup(name).alexander == LaurentPoly(alexander)

@pytest.mark.parametrize("k", knot_table(), ids=lambda k: k.name)
def test_every_table_knot_is_well_formed(k: KnotData) -> None:
    assert k.alexander.is_symmetric()
    assert k.alexander.at_one() == 1
    assert k.signature % 2 == 0
    assert k.genus == k.alexander.top() // 2
    assert k.diagram is not None
    assert incoherent_pair(k.diagram) is None

def test_twist_words() -> None:
    assert twist_word(4) == [1, -2, 1, -2]
    assert twist_word(6) == [1, -2, 1, -2, -3, 2, -3]
    assert twist_word(5) == [1, 1, 1, 2, -1, 2]

def test_braid_closures_are_planar() -> None:
    for word in [[1, 1, 1], [1, -2, 1, -2], [1, -2, 1, -2, 3], [1, 1, 2, -1, 2, 2, 3, -2, 3]]:
        d = braid_closure_pd(word)
        assert len(faces(d)) == len(d) + 2
        assert braid_word(d) == (word, max(abs(g) for g in word) + 1)

def test_figure_eight_closure() -> None:
    d = braid_closure_pd([1, -2, 1, -2])
    assert serialize_pd(d) == "X(4,2,5,1) X(2,7,3,8) X(8,6,1,5) X(6,3,7,4)"
    assert sorted(len(face) for face in faces(d)) == [2, 2, 3, 3, 3, 3]

FIVE_TWO_PD = "X(1,5,2,4) X(3,9,4,8) X(5,1,6,10) X(7,3,8,2) X(9,7,10,6)"

def test_incoherent_faces_of_five_two() -> None:
    d = parse_pd(FIVE_TWO_PD)
    assert len(seifert_circles(d)) == 4
    assert incoherent_pair(d) == (5, 7, True)

def test_vogel_move() -> None:
    d = vogel_move(parse_pd(FIVE_TWO_PD), 5, 7, True)
    assert serialize_pd(d) == "X(1,5,2,4) X(3,13,4,12) X(7,1,8,14) X(11,3,12,2) X(13,9,14,8) X(10,6,11,5) X(9,6,10,7)"
    assert len(seifert_circles(d)) == 4
    assert incoherent_pair(d) == (4, 8, False)

def test_braid_form_of_five_two() -> None:
    d = braided(parse_pd(FIVE_TWO_PD))
    assert len(d) == 9
    assert incoherent_pair(d) is None
    assert braid_word(d) == ([-1, 2, -3, 2, 1, 2, 3, 2, 2], 4)

@pytest.mark.parametrize("name,text", [
    ("5_2", FIVE_TWO_PD),
    ("6_1", "X(1,7,2,6) X(3,10,4,11) X(5,3,6,2) X(7,1,8,12) X(9,4,10,5) X(11,9,12,8)"),
])
def test_invariants_of_general_diagrams(name: str, text: str) -> None:
    k = knot_from_diagram(name, parse_pd(text))
    assert k.alexander == lookup(name).alexander
    assert k.signature == lookup(name).signature

def test_link_diagram_is_not_a_knot() -> None:
    with pytest.raises(NotKnot):
        knot_from_diagram("hopf", parse_pd("X(4,1,3,2) X(2,3,1,4)"))

def test_torus_knot_signatures() -> None:
    for n in range(1, 6):
        assert lookup(f"T(2,{2 * n + 1})").signature == -2 * n

def test_alternative_diagrams_agree() -> None:
    for name in ["3_1", "4_1"]:
        diagrams = table_diagrams(name)
        assert len(diagrams) == 2
        first, second = (knot_from_diagram(name, d) for d in diagrams)
        assert first.alexander == second.alexander
        assert first.signature == second.signature

def test_unknown_knot() -> None:
    with pytest.raises(UnknownKnot) as e:
        lookup("not_a_knot")
    assert str(e.value) == "unknown knot: not_a_knot"

def test_mirror() -> None:
    k = mirror(lookup("3_1"))
    assert k.name == "3_1*"
    assert k.signature == 2
    assert mirror(k).name == "3_1"

def test_granny_knot_data() -> None:
    trefoil = lookup("3_1")
    k = connected_sum_data(trefoil, trefoil)
    assert k.name == "3_1#3_1"
    assert k.alexander == LaurentPoly({4: 1, 2: -2, 0: 3, -2: -2, -4: 1})
    assert k.signature == -4
    assert k.genus == 2

def test_knot_json() -> None:
    data = knot_to_json(lookup("4_1"))
    assert data == {"name": "4_1", "alexander": {"2": -1, "0": 3, "-2": -1}, "signature": 0, "genus": 1}
    assert knot_from_json(data).alexander == lookup("4_1").alexander

def test_laurent_text() -> None:
    assert str(lookup("3_1").alexander) == "t - 1 + t^-1"
    assert str(lookup("5_2").alexander) == "2t - 3 + 2t^-1"
    assert str(LaurentPoly({0: 1})) == "1"
    assert str(LaurentPoly({3: 1})) == "t^3/2"

def test_empty_braid_diagram() -> None:
    assert braid_closure_pd([], 1) == Diagram([])
