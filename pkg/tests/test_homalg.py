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

from floerglue.homalg import (F2Matrix, Generator, GradedComplex, ChainMap, Flag, make_complex, rank_f2, nullspace_f2, solve_f2,
                              reduce, homology, sub_quotient, restrict, tensor, dual_shift, direct_sum, is_contractible,
                              euler_poly, d_extremes, verify_ses, complex_to_json, complex_from_json, flag_to_json,
                              flag_from_json, maslov_ranks, SUB, QUOTIENT)
from floerglue.model import build_master
from floerglue.floer import build_cfl_flag, build_cfk_flag
from floerglue.knotio import KnotData, lookup, knot_table
from floerglue.laurent import LaurentPoly
from floerglue.errors import Dsquared, DegreeViolation, FiltrationViolation, NotClosed, EmptyFamily, ConstraintError

from typing import Dict, List

import numpy as np
import pytest

def box(prefix: str = "", maslov: int = 1, alex2: int = 0) -> GradedComplex:
    x = Generator(f"{prefix}x", maslov, alex2)
    y = Generator(f"{prefix}y", maslov - 1, alex2)
    return make_complex([x, y], [(x.id, y.id)])

def trefoil_master() -> GradedComplex:
    gens = [Generator("z", 0, 2), Generator("x", -1, 0), Generator("y", -2, -2)]
    return make_complex(gens, [("x", "y")])

def test_identity_squares_to_itself() -> None:
    i = F2Matrix.identity(3)
    assert i @ i == i
    assert (i + i).is_zero()

def test_rank_of_repeated_rows() -> None:
    assert rank_f2(F2Matrix.from_dense(np.array([[1, 1], [1, 1]], dtype=np.uint8))) == 1
    assert rank_f2(F2Matrix(2, 2)) == 0

def test_nullspace_vectors_are_annihilated() -> None:
    a = np.array([[1, 1, 0]], dtype=np.uint8)
    basis = nullspace_f2(a)
    assert len(basis) == 2
    for v in basis:
        assert not ((a.astype(np.int64) @ v.astype(np.int64)) % 2).any()

def test_solve_inconsistent_system() -> None:
    a = np.array([[1, 1], [1, 1]], dtype=np.uint8)
    assert solve_f2(a, np.array([1, 0], dtype=np.uint8)) is None

def test_solve_consistent_system() -> None:
    a = np.array([[1, 1, 0], [0, 1, 1]], dtype=np.uint8)
    b = np.array([1, 0], dtype=np.uint8)
    x = solve_f2(a, b)
    assert x is not None
    assert list((a.astype(np.int64) @ x.astype(np.int64)) % 2) == [1, 0]

def test_arrow_must_lower_maslov_by_one() -> None:
    with pytest.raises(DegreeViolation):
        make_complex([Generator("a", 0, 0), Generator("b", 0, 0)], [("a", "b")])

def test_arrow_must_not_raise_alex2() -> None:
    with pytest.raises(FiltrationViolation):
        make_complex([Generator("a", 1, 0), Generator("b", 0, 2)], [("a", "b")])

def test_exact_alex2() -> None:
    gens = [Generator("a", 1, 2), Generator("b", 0, 0)]
    make_complex(gens, [("a", "b")])
    with pytest.raises(FiltrationViolation):
        make_complex(gens, [("a", "b")], exact_alex2=True)

def test_nonzero_square() -> None:
    gens = [Generator("a", 2, 0), Generator("b", 1, 0), Generator("c", 0, 0)]
    with pytest.raises(Dsquared):
        make_complex(gens, [("a", "b"), ("b", "c")])

def test_duplicate_ids() -> None:
    with pytest.raises(ConstraintError):
        make_complex([Generator("a", 0, 0), Generator("a", 1, 0)])

def test_box_is_contractible() -> None:
    assert is_contractible(box())
    assert homology(box()) == {}

def test_master_homology() -> None:
    assert homology(trefoil_master()) == {(0, 2): 1}

def test_reduce_corrects_remaining_boundaries() -> None:
    gens = [Generator("a", 1, 0), Generator("d", 1, 0), Generator("b", 0, 0), Generator("c", 0, 0)]
    c = make_complex(gens, [("a", "b"), ("a", "c"), ("d", "c")])
    assert len(reduce(c)) == 0

def test_reduce_respects_strata() -> None:
    c = box()
    assert len(reduce(c, {"x": 1, "y": 0})) == 2
    assert len(reduce(c, {"x": 0, "y": 0})) == 0

def test_subcomplex_must_be_closed() -> None:
    with pytest.raises(NotClosed):
        sub_quotient(box(), ["x"], SUB)
    assert sub_quotient(box(), ["y"], SUB).ids() == ["y"]

def test_quotient_must_not_receive_arrows() -> None:
    with pytest.raises(NotClosed):
        sub_quotient(box(), ["y"], QUOTIENT)
    assert sub_quotient(box(), ["x"], QUOTIENT).ids() == ["x"]

def test_restrict_keeps_listed_order() -> None:
    c = restrict(trefoil_master(), ["y", "x"])
    assert c.ids() == ["y", "x"]
    assert c.arrows() == [("x", "y")]

def test_tensor_of_boxes() -> None:
    t = tensor(box("a"), box("b"))
    assert len(t) == 4
    assert t.generator("[ax,bx]").maslov == 2
    assert is_contractible(t)

def test_tensor_with_master_keeps_homology() -> None:
    single = make_complex([Generator("u", 0, 0)])
    assert homology(tensor(trefoil_master(), single)) == {(0, 2): 1}

def test_dual_shift_reverses_arrows() -> None:
    d = dual_shift(box(), (-1, 0), (1, 0))
    assert d.arrows() == [("y", "x")]
    assert d.generator("x").maslov == -1
    assert d.generator("y").maslov == 0

def test_direct_sum() -> None:
    s = direct_sum([box("a"), trefoil_master()])
    assert len(s) == 5
    assert homology(s) == {(0, 2): 1}

def test_euler_poly() -> None:
    assert euler_poly({(0, 2): 1, (-1, 0): 1, (-2, -2): 1}) == LaurentPoly({2: 1, 0: -1, -2: 1})

def test_d_extremes() -> None:
    family = {2: box(), 0: make_complex([Generator("a", 0, 0)]), -2: make_complex([Generator("b", 0, -2)])}
    assert d_extremes(family) == (0, -2)

def test_d_extremes_of_contractible_family() -> None:
    with pytest.raises(EmptyFamily):
        d_extremes({0: box(), 2: make_complex([])})

def two_step_flag() -> Flag:
    plus = make_complex([Generator("a", 0, 1), Generator("c", -1, 1)], [("a", "c")])
    flag = Flag(plus, ["c"], ["c"])
    flag.connecting = ChainMap.from_pairs(flag.top(), flag.minus(), [("a", "c")], 0, -1)
    return flag

def test_flag_strata() -> None:
    flag = two_step_flag()
    assert flag.strata() == {"a": 2, "c": 0}
    assert flag.top().ids() == ["a"]
    assert len(flag.zero_over_minus()) == 0
    assert flag.plus_over_minus().ids() == ["a"]

def test_minus_inside_zero() -> None:
    plus = make_complex([Generator("a", 0, 1), Generator("c", -1, 1)], [("a", "c")])
    with pytest.raises(NotClosed):
        Flag(plus, ["c"], ["a", "c"])

def test_exact_sequence_passes() -> None:
    report = verify_ses(*two_step_flag().ses())
    assert report.passed
    assert report.failures == []

def test_zero_connecting_map_breaks_exactness() -> None:
    flag = two_step_flag()
    flag.connecting = ChainMap(flag.top(), flag.minus(), F2Matrix(1, 1), 0, -1)
    report = verify_ses(*flag.ses())
    assert "surjectivity: g not onto" in report.failures
    assert "exactness: im f ≠ ker g" in report.failures
    assert report.to_json()["passed"] is False

def test_connecting_map_composition() -> None:
    flag = two_step_flag()
    assert flag.connecting is not None
    inclusion, projection = flag.ses()
    assert projection.compose(inclusion).matrix.is_zero()
    assert projection.compose(inclusion).maslov_shift == -1

def test_complex_json() -> None:
    data = complex_to_json(trefoil_master())
    assert [g["id"] for g in data["generators"]] == ["y", "x", "z"]
    assert data["differential"] == [["x", "y"]]
    assert complex_from_json(data).arrows() == [("x", "y")]

def test_flag_json_keeps_connecting_map() -> None:
    data = flag_to_json(two_step_flag())
    assert data["minus"] == ["c"]
    assert data["connecting"] == [["a", "c"]]
    assert data["maslov_shift"] == -1
    restored = flag_from_json(data)
    assert restored.connecting is not None
    assert restored.connecting.pairs() == [("a", "c")]

def test_reduce_cancels_the_smallest_gap_first() -> None:
    gens = [Generator("a", 1, 4), Generator("b", 0, 2), Generator("c", 0, 0)]
    c = make_complex(gens, [("a", "b"), ("a", "c")])
    assert reduce(c).ids() == ["c"]
    assert homology(c) == {(0, 0): 1}

def table_complexes(k: KnotData) -> List[GradedComplex]:
    complexes = [build_master(k).complex]
    for flag in build_cfl_flag(k).flags.values():
        complexes += [flag.plus, flag.zero(), flag.minus(), flag.top()]
    for flag in build_cfk_flag(k).flags.values():
        complexes += [flag.plus, flag.zero(), flag.minus()]
    return complexes

@pytest.mark.parametrize("k", knot_table(), ids=lambda k: k.name)
def test_reduce_is_idempotent(k: KnotData) -> None:
    for c in table_complexes(k):
        once = reduce(c)
        assert once.arrows() == []
        assert reduce(once).ids() == once.ids()
        assert homology(once) == homology(c)

@pytest.mark.parametrize("k", knot_table(), ids=lambda k: k.name)
def test_contractible_means_no_homology(k: KnotData) -> None:
    for c in table_complexes(k):
        assert is_contractible(c) == (homology(c) == {})

@pytest.mark.parametrize("k", knot_table(), ids=lambda k: k.name)
def test_dual_shift_round_trip(k: KnotData) -> None:
    for c in table_complexes(k):
        dual = dual_shift(c, (-1, k.signature), (-1, 1))
        assert complex_to_json(dual_shift(dual, (-1, k.signature), (-1, 1))) == complex_to_json(c)
        shifted = dual_shift(c, (1, 3), (1, -2))
        assert complex_to_json(dual_shift(shifted, (1, -3), (1, 2))) == complex_to_json(c)
        assert maslov_ranks(homology(dual)) == {k.signature - maslov: rank for maslov, rank in maslov_ranks(homology(c)).items()}

def convolve(left: Dict[int, int], right: Dict[int, int]) -> Dict[int, int]:
    result: Dict[int, int] = {}
    for m1, r1 in left.items():
        for m2, r2 in right.items():
            result[m1 + m2] = result.get(m1 + m2, 0) + r1 * r2
    return result

@pytest.mark.parametrize("k", knot_table(), ids=lambda k: k.name)
def test_kunneth_with_trefoil_sectors(k: KnotData) -> None:
    for label, flag in build_cfl_flag(lookup("3_1")).flags.items():
        for c in table_complexes(k)[:4]:
            expected = {m: r for m, r in convolve(maslov_ranks(homology(c)), maslov_ranks(homology(flag.plus))).items() if r > 0}
            assert maslov_ranks(homology(tensor(c, flag.plus))) == expected
