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

from typing import List, Dict, Tuple, Optional, Callable, Iterable, TextIO

import csv

import numpy as np

from .homalg import (Generator, GradedComplex, F2Matrix, ChainMap, Flag, Ranks, make_complex, dual_shift, reduce,
                     homology, verify_ses, solve_f2, TAG_A, TAG_BX, TAG_BY, TAG_C)
from .model import MasterComplex, build_master, g_slice, assoc_graded, hfk_ranks_from_data, MINUS, PLUS
from .knotio import KnotData
from .errors import PerturbationFailure, ConstraintUnsatisfiable, DegreeViolation

CFL = "cfl"
CFK = "cfk"

LAYER_ORDER = (TAG_A, TAG_BX, TAG_BY, TAG_C)
HEIGHT = {TAG_A: 2, TAG_BX: 1, TAG_BY: 1, TAG_C: 0}

class SectorModel:
    def __init__(self, spinc2: int, layers: Dict[str, GradedComplex],
                 cross_maps: Dict[Tuple[str, str], List[Tuple[str, str]]],
                 connecting: Optional[List[Tuple[str, str]]] = None) -> None:
        self.spinc2 = spinc2
        self.layers = {tag: layers.get(tag, make_complex([])) for tag in LAYER_ORDER}
        # (source tag, target tag) -> arrows between the two layers.
        self.cross_maps = {key: sorted(set(pairs)) for key, pairs in cross_maps.items() if len(pairs) > 0}
        self.connecting_pairs = connecting

    def dims(self) -> Tuple[int, ...]:
        return tuple(len(self.layers[tag]) for tag in LAYER_ORDER)

    def is_empty(self) -> bool:
        return sum(self.dims()) == 0

    def generators(self) -> List[Generator]:
        return [g for tag in LAYER_ORDER for g in self.layers[tag].generators]

    # The plus complex, without validating the square of its differential.
    def raw_complex(self) -> GradedComplex:
        gens = self.generators()
        index = {g.id: i for i, g in enumerate(gens)}
        entries = []
        for tag in LAYER_ORDER:
            layer = self.layers[tag]
            entries += [(index[target], index[source]) for source, target in layer.arrows()]
        for pairs in self.cross_maps.values():
            entries += [(index[target], index[source]) for source, target in pairs]
        return GradedComplex(gens, F2Matrix(len(gens), len(gens), entries))

    def assemble(self) -> GradedComplex:
        raw = self.raw_complex()
        return make_complex(raw.generators, raw.differential)

    def connecting(self) -> Optional[ChainMap]:
        if self.connecting_pairs is None:
            return None
        return ChainMap.from_pairs(self.layers[TAG_A], self.layers[TAG_C], self.connecting_pairs, 0, -1)

def _relabel(c: GradedComplex, tag: str, alex2: int, maslov: Callable[[int], int] = lambda m: m,
             from_label: bool = False) -> GradedComplex:
    gens = []
    for g in c.generators:
        origin = g.label if from_label else g.id
        gens.append(Generator(f"{tag}:{origin}", maslov(g.maslov), alex2, tag, origin))
    return make_complex(gens, c.differential)

def _same_origin(source: GradedComplex, target: GradedComplex) -> List[Tuple[str, str]]:
    return [(s.id, t.id) for s in source.generators for t in target.generators
            if s.label == t.label and t.maslov == s.maslov - 1]

def _b_layers(m: MasterComplex, u: int, spinc2: int) -> Dict[str, GradedComplex]:
    sigma = m.knot.signature
    minus = g_slice(m, -2 * u + 1, MINUS)
    plus = g_slice(m, 2 * u, PLUS)
    return {
        TAG_BX: _relabel(dual_shift(minus, (-1, sigma), (-1, 0)), TAG_BX, spinc2),
        TAG_BY: _relabel(plus, TAG_BY, spinc2, lambda mu: mu - 1),
    }

def cfl_sector_u(spinc2: int) -> int:
    assert spinc2 % 2 != 0, "CFL sectors carry odd doubled labels"
    return (spinc2 + 1) // 2

def _build_cfl_sector(m: MasterComplex, spinc2: int) -> SectorModel:
    u = cfl_sector_u(spinc2)
    sigma = m.knot.signature
    bottom = _relabel(assoc_graded(m, -2 * u), TAG_C, spinc2)
    top = _relabel(dual_shift(assoc_graded(m, 2 * u), (-1, 1 + sigma), (-1, 0)), TAG_A, spinc2)
    if u >= 1:
        b = _b_layers(m, u, spinc2)
    else:
        # Negative sectors take the B layers of the symmetric sector, dualized.
        partner = _b_layers(m, 1 - u, 1 - 2 * u)
        b = {
            TAG_BY: _relabel(dual_shift(partner[TAG_BX], (-1, sigma), (1, 0)), TAG_BY, spinc2, from_label=True),
            TAG_BX: _relabel(dual_shift(partner[TAG_BY], (-1, sigma), (1, 0)), TAG_BX, spinc2, from_label=True),
        }
    layers = {TAG_A: top, TAG_BX: b[TAG_BX], TAG_BY: b[TAG_BY], TAG_C: bottom}

    # Mirror pairing: the k-th generator at level u meets the k-th at level -u.
    assert len(top) == len(bottom), "Alexander symmetry broken"
    mirror = list(zip(top.ids(), bottom.ids()))
    for a, c in mirror:
        if top.generator(a).maslov - 1 != bottom.generator(c).maslov:
            raise DegreeViolation(f"{a} -> {c} is not of degree -1")
    cross = {
        (TAG_A, TAG_BX): _same_origin(top, b[TAG_BX]),
        (TAG_BY, TAG_C): _same_origin(b[TAG_BY], bottom),
        (TAG_A, TAG_C): mirror,
    }
    return SectorModel(spinc2, layers, cross, mirror)

def build_cfl_sector(k: KnotData, spinc2: int) -> SectorModel:
    return perturb_to_complex(_build_cfl_sector(build_master(k), spinc2))

def _block(square: np.ndarray, rows: List[int], cols: List[int]) -> np.ndarray:
    return square[np.ix_(rows, cols)] if rows and cols else np.zeros((len(rows), len(cols)), dtype=np.uint8)

def perturb_to_complex(sm: SectorModel) -> SectorModel:
    cross = {key: set(pairs) for key, pairs in sm.cross_maps.items()}
    blocks = [(s, t) for s in LAYER_ORDER for t in LAYER_ORDER if HEIGHT[s] > HEIGHT[t]]
    for gap in (1, 2):
        for source, target in [b for b in blocks if HEIGHT[b[0]] - HEIGHT[b[1]] == gap]:
            current = SectorModel(sm.spinc2, sm.layers, {key: list(v) for key, v in cross.items()}, sm.connecting_pairs)
            raw = current.raw_complex()
            if len(raw) == 0:
                return sm
            d = raw.differential.to_dense().astype(np.int64)
            square = ((d @ d) % 2).astype(np.uint8)
            s_layer = sm.layers[source]
            t_layer = sm.layers[target]
            rows = [raw.index[id] for id in t_layer.ids()]
            cols = [raw.index[id] for id in s_layer.ids()]
            obstruction = _block(square, rows, cols)
            if not obstruction.any():
                continue

            existing = cross.get((source, target), set())
            unknowns = [(t.id, s.id) for s in s_layer.generators for t in t_layer.generators
                        if t.maslov == s.maslov - 1 and t.alex2 <= s.alex2]
            # Prefer new arrows over toggling existing ones.
            unknowns.sort(key=lambda e: ((e[1], e[0]) in existing, e))
            d_s = s_layer.differential.to_dense()
            d_t = t_layer.differential.to_dense()
            width = len(s_layer)
            system = np.zeros((len(t_layer) * width, len(unknowns)), dtype=np.uint8)
            for k, (t_id, s_id) in enumerate(unknowns):
                ti = t_layer.index[t_id]
                si = s_layer.index[s_id]
                effect = np.zeros((len(t_layer), width), dtype=np.uint8)
                effect[:, si] ^= d_t[:, ti]
                effect[ti, :] ^= d_s[si, :]
                system[:, k] = effect.reshape(-1)
            solution = solve_f2(system, obstruction.reshape(-1)) if unknowns else None
            if solution is None:
                raise PerturbationFailure(f"sector {sm.spinc2}: no correction from {source} to {target} squares the differential to zero",
                                          "perturbation")
            arrows = cross.setdefault((source, target), set())
            for k, (t_id, s_id) in enumerate(unknowns):
                if solution[k]:
                    arrows ^= {(s_id, t_id)}

    result = SectorModel(sm.spinc2, sm.layers, {key: list(v) for key, v in cross.items()}, sm.connecting_pairs)
    final = result.raw_complex().differential
    if not (final @ final).is_zero():
        raise PerturbationFailure(f"sector {sm.spinc2}: the corrected differential does not square to zero", "perturbation")
    return result

class FlagFamily:
    theory = ""
    connecting_shift = 0

    def __init__(self, knot: KnotData, flags: Dict[int, Flag]) -> None:
        self.knot = knot
        self.flags = dict(sorted(flags.items()))

    def labels(self) -> List[int]:
        return list(self.flags)

    def __getitem__(self, label: int) -> Flag:
        return self.flags[label]

    # Like indexing, but sectors outside the support come back as the empty flag.
    def sector(self, label: int) -> Flag:
        if label in self.flags:
            return self.flags[label]
        empty = make_complex([])
        return Flag(empty, [], [], ChainMap(empty, empty, F2Matrix(0, 0), self.connecting_shift, -1))

    # Family of one stratum keyed by the doubled s_u label.
    def stratum(self, name: str) -> Dict[int, GradedComplex]:
        result: Dict[int, GradedComplex] = {}
        for label, flag in self.flags.items():
            key = label + 1 if self.theory == CFL else label
            if name == "minus":
                result[key] = flag.minus()
            elif name == "zero":
                result[key] = flag.zero()
            elif name == "plus":
                result[key] = flag.plus
            else:
                raise ValueError(f"unknown stratum {name}")
        return result

class CflFlag(FlagFamily):
    theory = CFL
    connecting_shift = 0

class CfkFlag(FlagFamily):
    theory = CFK
    connecting_shift = -2

def sector_flag(sm: SectorModel) -> Flag:
    plus = sm.assemble()
    minus = sm.layers[TAG_C].ids()
    zero = minus + sm.layers[TAG_BX].ids() + sm.layers[TAG_BY].ids()
    flag = Flag(plus, zero, minus)
    if sm.connecting_pairs is not None:
        flag.connecting = ChainMap.from_pairs(flag.top(), flag.minus(), sm.connecting_pairs, 0, -1)
    return flag

def cfl_sectors(k: KnotData) -> Dict[int, SectorModel]:
    m = build_master(k)
    sectors: Dict[int, SectorModel] = {}
    for u in range(-k.genus, k.genus + 2):
        sm = _build_cfl_sector(m, 2 * u - 1)
        if not sm.is_empty():
            sectors[2 * u - 1] = perturb_to_complex(sm)
    return sectors

def build_cfl_flag(k: KnotData) -> CflFlag:
    family = CflFlag(k, {label: sector_flag(sm) for label, sm in cfl_sectors(k).items()})
    for label, flag in family.flags.items():
        report = verify_ses(*flag.ses())
        if not report.passed:
            raise ConstraintUnsatisfiable(f"{k.name}: CFL sector {label}: {report.failures[0]}", report.failures[0])
    return family

def hfl_ranks(k: KnotData, spinc2: int) -> Ranks:
    sm = _build_cfl_sector(build_master(k), spinc2)
    if sm.is_empty():
        return {}
    return homology(perturb_to_complex(sm).assemble())

def hfk_ranks(k: KnotData, s2: int) -> Ranks:
    return {key: rank for key, rank in hfk_ranks_from_data(k).items() if key[1] == s2}

# CFK sectors. Layers are assembled from reduced CFL sectors: C(s) = HFL(s+1),
# A(s) = HFL(s) one degree up, and B cancels everything but |a_s| classes.

def _cfk_sector(k: KnotData, s: int, reduced: Dict[int, GradedComplex], boxes: Callable[[int], int]) -> SectorModel:
    half_sigma = k.signature // 2
    tau = -half_sigma
    alex2 = 2 * s
    below = reduced.get(2 * s + 1, make_complex([]))
    above = reduced.get(2 * s - 1, make_complex([]))
    c_layer = _relabel(below, TAG_C, alex2)
    a_layer = _relabel(above, TAG_A, alex2, lambda mu: mu + 1)

    def selected(c: GradedComplex, u: int) -> List[str]:
        degree = u - 1 + half_sigma
        return [g.id for g in c.generators if g.maslov == degree][:boxes(u)]

    keep_a = set(selected(above, s))
    keep_c = set(selected(below, s + 1))
    b_gens: List[Generator] = []
    to_b: List[Tuple[str, str]] = []
    from_b: List[Tuple[str, str]] = []
    if s == tau:
        b_gens.append(Generator("BX:z", 0, alex2, TAG_BX, "survivor"))
    for g in a_layer.generators:
        if g.label not in keep_a:
            copy = Generator(f"BX:+{g.label}", g.maslov - 1, alex2, TAG_BX, g.label)
            b_gens.append(copy)
            to_b.append((g.id, copy.id))
    by_gens: List[Generator] = []
    for g in c_layer.generators:
        if g.label not in keep_c:
            copy = Generator(f"BY:-{g.label}", g.maslov + 1, alex2, TAG_BY, g.label)
            by_gens.append(copy)
            from_b.append((copy.id, g.id))
    layers = {TAG_A: a_layer, TAG_BX: make_complex(b_gens), TAG_BY: make_complex(by_gens), TAG_C: c_layer}
    return SectorModel(alex2, layers, {(TAG_A, TAG_BX): to_b, (TAG_BY, TAG_C): from_b})

def build_cfk_flag(k: KnotData) -> CfkFlag:
    m = build_master(k)
    reduced = {label: reduce(sm.assemble()) for label, sm in cfl_sectors(k).items()}
    sectors: Dict[int, SectorModel] = {}
    for s in range(-k.genus - 1, k.genus + 2):
        sm = perturb_to_complex(_cfk_sector(k, s, reduced, lambda u: m.profile.count(2 * u)))
        if not sm.is_empty():
            sectors[2 * s] = sm

    flags: Dict[int, Flag] = {}
    for alex2, sm in sectors.items():
        flags[alex2] = sector_flag(sm)
    for alex2, sm in sectors.items():
        flag = flags[alex2]
        if alex2 - 2 in flags:
            target = flags[alex2 - 2].minus()
        else:
            target = make_complex([])
        # ∂' identifies the A copy of HFL(s) with the C copy in sector s-1.
        pairs = [(g.id, f"{TAG_C}:{g.label}") for g in sm.layers[TAG_A].generators]
        flag.connecting = ChainMap.from_pairs(flag.top(), target, pairs, -2, -1)

    family = CfkFlag(k, flags)
    check_cfk_constraints(family)
    return family

def check_cfk_constraints(family: CfkFlag) -> None:
    k = family.knot
    for alex2, flag in family.flags.items():
        s = alex2 // 2
        report = verify_ses(*flag.ses())
        if not report.passed:
            raise ConstraintUnsatisfiable(f"{k.name}: CFK sector {s}: {report.failures[0]}", report.failures[0])
        expected = {(maslov, alex2): rank for (maslov, _), rank in hfk_ranks(k, alex2).items() if rank > 0}
        if homology(flag.plus) != expected:
            raise ConstraintUnsatisfiable(f"{k.name}: CFK sector {s}: plus homology differs from HFK", "hfk")
    if total_rank_of(total_homology(family, True)) != 1:
        raise ConstraintUnsatisfiable(f"{k.name}: CFK total complex does not have rank 1", "total")

def total_rank_of(ranks: Ranks) -> int:
    return sum(ranks.values())

def total_complex(family: FlagFamily, include_connecting: bool) -> GradedComplex:
    gens: List[Generator] = []
    arrows: List[Tuple[str, str]] = []
    for label, flag in family.flags.items():
        gens += [g.copy(id=f"{label}/{g.id}") for g in flag.plus.generators]
        arrows += [(f"{label}/{s}", f"{label}/{t}") for s, t in flag.plus.arrows()]
    if include_connecting:
        present = set(arrows)
        for label, flag in family.flags.items():
            if flag.connecting is None:
                continue
            target = label + family.connecting_shift
            for s, t in flag.connecting.pairs():
                arrow = (f"{label}/{s}", f"{target}/{t}")
                if arrow in present:
                    present.discard(arrow)
                else:
                    present.add(arrow)
        arrows = sorted(present)
    return make_complex(gens, arrows)

def total_homology(family: FlagFamily, include_connecting: bool) -> Ranks:
    return homology(total_complex(family, include_connecting))

def support(k: KnotData, theory: str) -> List[int]:
    if theory == CFL:
        return sorted(cfl_sectors(k))
    return build_cfk_flag(k).labels()

# Expected (d_plus, d_minus) per stratum in doubled s_u units; None means every sector is contractible.
def expected_degrees(theory: str, genus: int) -> Dict[str, Optional[Tuple[int, int]]]:
    g2 = 2 * genus
    if theory == CFL:
        table = {"minus": (g2, -g2), "zero": (g2, -g2), "plus": (g2, 2 - g2)}
    else:
        table = {"minus": (g2 - 2, -g2), "zero": (g2, -g2), "plus": (g2, -g2)}
    return {name: None if top < bottom else (top, bottom) for name, (top, bottom) in table.items()}

CSV_HEADER = ["knot", "theory", "spinc2", "maslov", "rank"]

def rank_rows(family: FlagFamily) -> List[Tuple[str, str, int, int, int]]:
    rows = []
    for label, flag in family.flags.items():
        by_maslov: Dict[int, int] = {}
        for (maslov, _), rank in homology(flag.plus).items():
            by_maslov[maslov] = by_maslov.get(maslov, 0) + rank
        rows += [(family.knot.name, family.theory, label, maslov, rank) for maslov, rank in sorted(by_maslov.items())]
    return rows

def write_rank_csv(rows: Iterable[Tuple[str, str, int, int, int]], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row)
