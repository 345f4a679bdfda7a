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

from typing import List, Dict, Tuple, Any

from .homalg import Generator, GradedComplex, make_complex, sub_quotient, restrict, SUB, QUOTIENT, TAG_PLAIN, Ranks, complex_to_json
from .knotio import KnotData
from .errors import NotThin

MINUS = "minus"
PLUS = "plus"

class BoxProfile:
    def __init__(self, boxes: Dict[int, int], survivor_level: int) -> None:
        # Doubled level of the box top -> number of boxes.
        self.boxes = {level: count for level, count in boxes.items() if count != 0}
        self.survivor_level = survivor_level

    def count(self, level2: int) -> int:
        return self.boxes.get(level2, 0)

    def to_json(self) -> Dict[str, int]:
        return {str(level): count for level, count in sorted(self.boxes.items(), reverse=True)}

class MasterComplex:
    def __init__(self, knot: KnotData, complex: GradedComplex, profile: BoxProfile) -> None:
        self.knot = knot
        self.complex = complex
        self.profile = profile

    def levels(self) -> List[int]:
        return sorted({g.alex2 for g in self.complex.generators}, reverse=True)

    # Generators at one doubled level in their canonical order.
    def at_level(self, level2: int) -> List[Generator]:
        return [g for g in self.complex.generators if g.alex2 == level2]

    def to_json(self) -> Dict[str, Any]:
        data = complex_to_json(self.complex)
        data["profile"] = self.profile.to_json()
        data["survivor"] = self.profile.survivor_level
        return data

def box_profile(k: KnotData) -> BoxProfile:
    if k.signature % 2 != 0:
        raise NotThin(f"{k.name}: signature {k.signature} is odd")
    if not k.alexander.is_symmetric():
        raise NotThin(f"{k.name}: Alexander polynomial is not symmetric")
    tau = -k.signature // 2
    g = k.genus
    if abs(tau) > g:
        raise NotThin(f"{k.name}: |signature/2| exceeds the genus")

    boxes: Dict[int, int] = {}
    above = 0
    for s in range(g, -g - 1, -1):
        coefficient = k.alexander[2 * s]
        # Thin complexes carry the Euler sign (-1)^(s - tau) at level s.
        if coefficient != 0 and coefficient != (-1) ** ((s - tau) % 2) * abs(coefficient):
            raise NotThin(f"{k.name}: coefficient of t^{s} has the wrong sign for a thin knot")
        count = abs(coefficient) - above - (1 if s == tau else 0)
        if count < 0:
            raise NotThin(f"{k.name}: negative box count at level {s}")
        boxes[2 * s] = count
        above = count
    if above != 0:
        raise NotThin(f"{k.name}: box recursion does not close at level {-g}")
    return BoxProfile(boxes, 2 * tau)

def build_master(k: KnotData) -> MasterComplex:
    profile = box_profile(k)
    half_sigma = k.signature // 2
    gens: List[Generator] = []
    arrows: List[Tuple[str, str]] = []
    for level2 in sorted(profile.boxes, reverse=True):
        s = level2 // 2
        for i in range(profile.count(level2)):
            top = Generator(f"x{s}_{i}", s + half_sigma, level2, TAG_PLAIN, f"box {s}.{i} top")
            bottom = Generator(f"y{s}_{i}", s - 1 + half_sigma, level2 - 2, TAG_PLAIN, f"box {s}.{i} bottom")
            gens += [top, bottom]
            arrows.append((top.id, bottom.id))
    gens.append(Generator("z", 0, profile.survivor_level, TAG_PLAIN, "survivor"))
    # Canonical order: by level from the top, survivor first, then box tops, then box bottoms.
    rank = {"z": 0, "x": 1, "y": 2}
    gens.sort(key=lambda g: (-g.alex2, rank[g.id[0]], g.id))
    return MasterComplex(k, make_complex(gens, arrows), profile)

def g_slice(m: MasterComplex, ell2: int, mode: str) -> GradedComplex:
    below = [g.id for g in m.complex.generators if g.alex2 < ell2]
    if mode == MINUS:
        return sub_quotient(m.complex, below, SUB)
    if mode == PLUS:
        return sub_quotient(m.complex, [g.id for g in m.complex.generators if g.alex2 >= ell2], QUOTIENT)
    raise ValueError(f"unknown slice mode {mode}")

def assoc_graded(m: MasterComplex, level2: int) -> GradedComplex:
    return restrict(m.complex, [g.id for g in m.at_level(level2)])

# HFK of a thin knot: |a_s| at (maslov s + sigma/2, alex2 2s).
def hfk_ranks_from_data(k: KnotData) -> Ranks:
    ranks: Ranks = {}
    for alex2, coefficient in k.alexander:
        ranks[(alex2 // 2 + k.signature // 2, alex2)] = abs(coefficient)
    return ranks
