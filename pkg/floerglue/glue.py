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

from typing import List, Dict, Set, Tuple, Optional, Sequence, Callable, Any

import numpy as np

from .homalg import (GradedComplex, F2Matrix, ChainMap, Flag, make_complex, direct_sum, tensor, row_reduce, solve_f2,
                     complex_to_json)
from .floer import CfkFlag, build_cfk_flag
from .knotio import KnotData
from .errors import NotIso, IncompatibleRelation

PARALLEL = "parallel"
PERP = "perp"
CONNECTED_SUM = "connsum"

class Provenance:
    def __init__(self, op: str, inputs: Sequence[str], ambient: int, killed: int, identified: int,
                 pairs: List[Tuple[str, List[str]]]) -> None:
        self.op = op
        self.inputs = list(inputs)
        self.ambient = ambient
        self.killed = killed
        self.identified = identified
        # Each pair is a generator and the sum of generators it is identified with.
        self.pairs = pairs

    def to_json(self) -> Dict[str, Any]:
        return {
            "op": self.op,
            "inputs": self.inputs,
            "ambient": self.ambient,
            "killed": self.killed,
            "identified": self.identified,
            "pairs": [[lhs, rhs] for lhs, rhs in self.pairs],
        }

class GluedComplex:
    def __init__(self, complex: GradedComplex, provenance: Provenance, companion: Optional[GradedComplex] = None) -> None:
        self.complex = complex
        self.provenance = provenance
        # The plain tensor complex that comes with the quotient (the CFL side of the gluing).
        self.companion = companion

    def __len__(self) -> int:
        return len(self.complex)

    def bookkeeping_holds(self) -> bool:
        p = self.provenance
        return len(self.complex) == p.ambient - p.killed - p.identified

    def to_json(self) -> Dict[str, Any]:
        data = complex_to_json(self.complex)
        data["provenance"] = self.provenance.to_json()
        return data

def connecting_iso_rho(flag: Flag) -> ChainMap:
    if flag.connecting is None:
        raise NotIso("flag has no connecting map")
    rho = flag.connecting
    if len(rho.source) != len(rho.target) or rho.rank() != len(rho.source):
        raise NotIso(f"connecting map of rank {rho.rank()} between strata of dimension "
                     f"{len(rho.source)} and {len(rho.target)} is not an isomorphism")
    return rho

def _images(rho: ChainMap) -> Dict[str, List[str]]:
    result: Dict[str, List[str]] = {id: [] for id in rho.source.ids()}
    for s, t in rho.pairs():
        result[s].append(t)
    return result

def _preimages(rho: ChainMap) -> Dict[str, List[str]]:
    result: Dict[str, List[str]] = {}
    dense = rho.matrix.to_dense()
    for r, target in enumerate(rho.target.ids()):
        unit = np.zeros(len(rho.target), dtype=np.uint8)
        unit[r] = 1
        solution = solve_f2(dense, unit)
        assert solution is not None, "connecting map is not invertible"
        result[target] = [rho.source.generators[c].id for c in np.nonzero(solution)[0]]
    return result

def _rename(c: GradedComplex, prefix: str, alex2: Optional[int] = None) -> GradedComplex:
    gens = [g.copy(id=prefix + g.id, alex2=alex2) for g in c.generators]
    return make_complex(gens, c.differential)

def _cross(prefix: str, left: Sequence[str], right: Sequence[str]) -> List[str]:
    return [f"{prefix}[{a},{b}]" for a in left for b in right]

def _image(d: np.ndarray, v: np.ndarray) -> np.ndarray:
    return ((d.astype(np.int64) @ v.astype(np.int64)) % 2).astype(np.uint8)

# Add filtered arrows, never remove one, until the differential carries the span into itself.
def _close_span(ambient: GradedComplex, d: np.ndarray, basis: np.ndarray,
                project: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    n = len(ambient)
    gens = ambient.generators
    unknowns = [(t, s) for s in range(n) for t in range(n)
                if not d[t, s] and gens[t].maslov == gens[s].maslov - 1 and gens[t].alex2 <= gens[s].alex2]
    units = np.eye(n, dtype=np.uint8)
    system = np.zeros((len(basis) * n, len(unknowns)), dtype=np.uint8)
    for k, (t, s) in enumerate(unknowns):
        system[:, k] = np.outer(basis[:, s], project(units[t])).reshape(-1)
    rhs = np.concatenate([project(_image(d, row)) for row in basis])
    solution = solve_f2(system, rhs) if unknowns else None
    if solution is None:
        raise IncompatibleRelation("the identified span is not closed under the differential")
    corrected = d.copy()
    for k, (t, s) in enumerate(unknowns):
        if solution[k]:
            corrected[t, s] ^= 1
    if _image(corrected, corrected).any():
        raise IncompatibleRelation("the correction closing the identified span does not square to zero")
    return corrected

def quotient_by_span(ambient: GradedComplex, killed: Sequence[str], relations: Sequence[Set[str]]) -> Tuple[GradedComplex, int]:
    """
    Quotient of a complex by the span of a killed subcomplex and a set of identifications.

    :param ambient: The complex to divide.
    :param killed: Generator ids spanning the killed subcomplex.
    :param relations: Identifications, each given as the set of generator ids summing to zero in the quotient.
    :return: The quotient complex on the non-pivot generators and the rank of the whole span.
    """
    n = len(ambient)
    vectors = [{id} for id in killed] + list(relations)
    if n == 0 or len(vectors) == 0:
        return ambient, 0
    array = np.zeros((len(vectors), n), dtype=np.uint8)
    for i, vector in enumerate(vectors):
        for id in vector:
            array[i, ambient.index[id]] = 1
    reduced, pivots = row_reduce(array)
    basis = reduced[:len(pivots)]

    def project(v: np.ndarray) -> np.ndarray:
        v = v.copy()
        for i, p in enumerate(pivots):
            if v[p]:
                v ^= basis[i]
        return v

    d = ambient.differential.to_dense()
    if any(project(_image(d, row)).any() for row in basis):
        d = _close_span(ambient, d, basis, project)

    pivot_set = set(pivots)
    keep = [j for j in range(n) if j not in pivot_set]
    position = {j: i for i, j in enumerate(keep)}
    entries = []
    for j in keep:
        column = project(d[:, j])
        entries += [(position[r], position[j]) for r in np.nonzero(column)[0] if int(r) in position]
    gens = [ambient.generators[j] for j in keep]
    return make_complex(gens, F2Matrix(len(keep), len(keep), entries)), len(pivots)

def _relation(lhs: str, prefix: str, left: List[str], right: List[str]) -> Set[str]:
    vector = {lhs}
    for id in _cross(prefix, left, right):
        vector ^= {id}
    return vector

def _glue(op: str, inputs: Sequence[str], ambient: GradedComplex, killed: List[str],
          relations: List[Tuple[str, Set[str]]], companion: Optional[GradedComplex]) -> GluedComplex:
    quotient, span = quotient_by_span(ambient, killed, [vector for _, vector in relations])
    pairs = [(lhs, sorted(vector - {lhs})) for lhs, vector in relations]
    provenance = Provenance(op, inputs, len(ambient), len(killed), span - len(killed), pairs)
    return GluedComplex(quotient, provenance, companion)

def glue_parallel(f1: Flag, f2: Flag, inputs: Sequence[str] = ("", "")) -> GluedComplex:
    """
    Glue two knot complements along their boundaries, meridian to meridian and longitude to longitude.

    The result is plus1 ⊗ plus2 modulo zero1 ⊗ zero2, with minus1 ⊗ top2 identified with
    top1 ⊗ minus2 through the connecting isomorphisms of both sectors.
    """
    inverse = _preimages(connecting_iso_rho(f1))
    image = _images(connecting_iso_rho(f2))
    ambient = tensor(f1.plus, f2.plus)
    killed = _cross("", f1.zero_ids, f2.zero_ids)
    relations = []
    for c1 in f1.minus_ids:
        for a2 in f2.top().ids():
            lhs = f"[{c1},{a2}]"
            relations.append((lhs, _relation(lhs, "", inverse[c1], image[a2])))
    return _glue(PARALLEL, inputs, ambient, killed, relations, tensor(f1.plus, f2.plus))

def _pairs(labels1: Sequence[int], labels2: Sequence[int], s2: int) -> List[Tuple[int, int]]:
    return [(l1, s2 - l1) for l1 in labels1 if s2 - l1 in labels2]

def _block_prefix(l1: int, l2: int) -> str:
    return f"{l1},{l2}:"

def connected_sum_cfk(k1: KnotData, k2: KnotData, s2: int) -> GradedComplex:
    fam1 = build_cfk_flag(k1)
    fam2 = build_cfk_flag(k2)
    blocks = [_rename(tensor(fam1[l1].plus, fam2[l2].plus), _block_prefix(l1, l2))
              for l1, l2 in _pairs(fam1.labels(), fam2.labels(), s2)]
    return direct_sum(blocks)

def connected_sum_cfl(k1: KnotData, k2: KnotData, s2: int) -> GluedComplex:
    fam1 = build_cfk_flag(k1)
    fam2 = build_cfk_flag(k2)
    pairs = _pairs(fam1.labels(), fam2.labels(), s2)
    ambient = direct_sum(_rename(tensor(fam1[l1].plus, fam2[l2].plus), _block_prefix(l1, l2)) for l1, l2 in pairs)
    killed: List[str] = []
    relations = []
    for l1, l2 in pairs:
        prefix = _block_prefix(l1, l2)
        killed += _cross(prefix, fam1[l1].zero_ids, fam2[l2].zero_ids)
        # C(s1) ⊗ A(s2) ~ A(s1+1) ⊗ C(s2-1).
        if not fam1[l1].minus_ids or not fam2[l2].top().ids():
            continue
        inverse = _preimages(connecting_iso_rho(fam1[l1 + 2]))
        image = _images(connecting_iso_rho(fam2[l2]))
        for c1 in fam1[l1].minus_ids:
            for a2 in fam2[l2].top().ids():
                lhs = f"{prefix}[{c1},{a2}]"
                relations.append((lhs, _relation(lhs, _block_prefix(l1 + 2, l2 - 2), inverse[c1], image[a2])))
    companion = direct_sum(_rename(tensor(fam1[l1].plus, fam2[l2].plus), _block_prefix(l1, l2)) for l1, l2 in pairs)
    return _glue(CONNECTED_SUM, [k1.name, k2.name], ambient, killed, relations, companion)

def glue_perp(f1: Flag, f2: CfkFlag, inputs: Sequence[str] = ("", "")) -> GluedComplex:
    """
    Glue a CFL sector to a whole CFK family, swapping meridian and longitude.

    Spin^c labels of the second factor collapse into one class, so every generator of the
    output carries the label of the first factor. The companion complex is the CFL output.
    """
    base = f1.plus.generators[0].alex2 if len(f1.plus) > 0 else 0
    inverse = _preimages(connecting_iso_rho(f1))
    labels = f2.labels()
    ambient = direct_sum(_rename(tensor(f1.plus, f2[k].plus), f"{k}:", base) for k in labels)
    killed: List[str] = []
    relations = []
    for k in labels:
        killed += _cross(f"{k}:", f1.zero_ids, f2[k].zero_ids)
        image = _images(connecting_iso_rho(f2[k]))
        for c1 in f1.minus_ids:
            for a2 in f2[k].top().ids():
                lhs = f"{k}:[{c1},{a2}]"
                relations.append((lhs, _relation(lhs, f"{k - 2}:", inverse[c1], image[a2])))
    companion = direct_sum(_rename(tensor(f1.plus, f2[k].plus), f"{k}:", base) for k in labels)
    return _glue(PERP, inputs, ambient, killed, relations, companion)
