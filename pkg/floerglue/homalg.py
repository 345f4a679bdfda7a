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

from typing import List, Dict, Set, Tuple, Iterable, Optional, Mapping, Union, Any, FrozenSet

import numpy as np
import numpy.typing as npt

from .laurent import LaurentPoly
from .errors import Dsquared, DegreeViolation, FiltrationViolation, NotClosed, EmptyFamily, ConstraintError

TAG_A = "A"
TAG_BX = "BX"
TAG_BY = "BY"
TAG_C = "C"
TAG_PLAIN = "PLAIN"
TAGS = (TAG_A, TAG_BX, TAG_BY, TAG_C, TAG_PLAIN)

SUB = "sub"
QUOTIENT = "quotient"

Entry = Tuple[int, int]
Bits = npt.NDArray[np.uint8]
Ranks = Dict[Tuple[int, int], int]

class F2Matrix:
    def __init__(self, rows: int, cols: int, entries: Iterable[Entry] = ()) -> None:
        self.rows = rows
        self.cols = cols
        self.entries: FrozenSet[Entry] = frozenset(entries)
        for r, c in self.entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry ({r},{c}) outside a {rows}x{cols} matrix")

    @staticmethod
    def identity(n: int) -> 'F2Matrix':
        return F2Matrix(n, n, ((i, i) for i in range(n)))

    @staticmethod
    def from_dense(array: Bits) -> 'F2Matrix':
        rows, cols = array.shape
        return F2Matrix(rows, cols, ((int(r), int(c)) for r, c in zip(*np.nonzero(array % 2))))

    def to_dense(self) -> Bits:
        array = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for r, c in self.entries:
            array[r, c] = 1
        return array

    def transpose(self) -> 'F2Matrix':
        return F2Matrix(self.cols, self.rows, ((c, r) for r, c in self.entries))

    def is_zero(self) -> bool:
        return len(self.entries) == 0

    def column(self, col: int) -> List[int]:
        return sorted(r for r, c in self.entries if c == col)

    def __add__(self, other: 'F2Matrix') -> 'F2Matrix':
        assert (self.rows, self.cols) == (other.rows, other.cols), "shape mismatch"
        return F2Matrix(self.rows, self.cols, self.entries ^ other.entries)

    def __matmul__(self, other: 'F2Matrix') -> 'F2Matrix':
        assert self.cols == other.rows, "shape mismatch"
        if self.is_zero() or other.is_zero():
            return F2Matrix(self.rows, other.cols)
        product = self.to_dense().astype(np.int64) @ other.to_dense().astype(np.int64)
        return F2Matrix.from_dense((product % 2).astype(np.uint8))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, F2Matrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"F2Matrix({self.rows}, {self.cols}, {sorted(self.entries)})"

# Reduced row echelon form over the two-element field.
# Returns the reduced copy together with its pivot columns.
def row_reduce(array: Bits) -> Tuple[Bits, List[int]]:
    work = (array % 2).astype(np.uint8)
    pivots: List[int] = []
    row = 0
    for col in range(work.shape[1]):
        if row >= work.shape[0]:
            break
        candidates = np.nonzero(work[row:, col])[0]
        if len(candidates) == 0:
            continue
        pivot = row + int(candidates[0])
        if pivot != row:
            work[[row, pivot]] = work[[pivot, row]]
        mask = work[:, col].astype(bool)
        mask[row] = False
        work[mask] ^= work[row]
        pivots.append(col)
        row += 1
    return work, pivots

def rank_f2(m: F2Matrix) -> int:
    if m.is_zero():
        return 0
    return len(row_reduce(m.to_dense())[1])

# Basis of the null space, one column vector per free column.
def nullspace_f2(array: Bits) -> List[Bits]:
    reduced, pivots = row_reduce(array)
    basis: List[Bits] = []
    for free in range(array.shape[1]):
        if free in pivots:
            continue
        vector = np.zeros(array.shape[1], dtype=np.uint8)
        vector[free] = 1
        for i, col in enumerate(pivots):
            vector[col] = reduced[i, free]
        basis.append(vector)
    return basis

# Solve a x = b; returns None when the system is inconsistent.
def solve_f2(array: Bits, rhs: Bits) -> Optional[Bits]:
    rows, cols = array.shape
    augmented = np.zeros((rows, cols + 1), dtype=np.uint8)
    augmented[:, :cols] = array % 2
    augmented[:, cols] = rhs % 2
    reduced, pivots = row_reduce(augmented)
    if cols in pivots:
        return None
    solution = np.zeros(cols, dtype=np.uint8)
    for i, col in enumerate(pivots):
        solution[col] = reduced[i, cols]
    return solution

class Generator:
    def __init__(self, id: str, maslov: int, alex2: int, tag: str = TAG_PLAIN, label: str = "") -> None:
        assert tag in TAGS, f"unknown generator tag {tag}"
        self.id = id
        self.maslov = maslov
        self.alex2 = alex2
        self.tag = tag
        self.label = label

    def copy(self, id: Optional[str] = None, maslov: Optional[int] = None, alex2: Optional[int] = None,
             tag: Optional[str] = None, label: Optional[str] = None) -> 'Generator':
        return Generator(self.id if id is None else id,
                         self.maslov if maslov is None else maslov,
                         self.alex2 if alex2 is None else alex2,
                         self.tag if tag is None else tag,
                         self.label if label is None else label)

    def key(self) -> Tuple[int, int, str]:
        return (self.alex2, self.maslov, self.id)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Generator):
            return NotImplemented
        return (self.id, self.maslov, self.alex2, self.tag, self.label) == (other.id, other.maslov, other.alex2, other.tag, other.label)

    def __hash__(self) -> int:
        return hash((self.id, self.maslov, self.alex2, self.tag))

    def __repr__(self) -> str:
        return f"Generator({self.id!r}, maslov={self.maslov}, alex2={self.alex2}, tag={self.tag})"

# Column x of the differential is the boundary of generator x.
class GradedComplex:
    def __init__(self, generators: List[Generator], differential: F2Matrix) -> None:
        self.generators = list(generators)
        self.differential = differential
        self.index: Dict[str, int] = {g.id: i for i, g in enumerate(self.generators)}

    def __len__(self) -> int:
        return len(self.generators)

    def ids(self) -> List[str]:
        return [g.id for g in self.generators]

    def generator(self, id: str) -> Generator:
        return self.generators[self.index[id]]

    def boundary(self, id: str) -> List[str]:
        return [self.generators[r].id for r in self.differential.column(self.index[id])]

    def arrows(self) -> List[Tuple[str, str]]:
        return sorted((self.generators[c].id, self.generators[r].id) for r, c in self.differential.entries)

    def __repr__(self) -> str:
        return f"GradedComplex({self.ids()}, {self.arrows()})"

Arrows = Union[F2Matrix, Iterable[Tuple[str, str]]]

def make_complex(gens: Iterable[Generator], diff: Arrows = (), exact_alex2: bool = False) -> GradedComplex:
    generators = list(gens)
    index: Dict[str, int] = {}
    for i, g in enumerate(generators):
        if g.id in index:
            raise ConstraintError(f"duplicate generator id {g.id}")
        index[g.id] = i

    if isinstance(diff, F2Matrix):
        matrix = diff
    else:
        matrix = F2Matrix(len(generators), len(generators), ((index[target], index[source]) for source, target in diff))
    if matrix.rows != len(generators) or matrix.cols != len(generators):
        raise ConstraintError(f"differential shape {matrix.rows}x{matrix.cols} does not match {len(generators)} generators")

    for r, c in sorted(matrix.entries):
        source = generators[c]
        target = generators[r]
        if target.maslov != source.maslov - 1:
            raise DegreeViolation(f"{source.id} -> {target.id} moves maslov from {source.maslov} to {target.maslov}")
        if target.alex2 > source.alex2:
            raise FiltrationViolation(f"{source.id} -> {target.id} raises alex2 from {source.alex2} to {target.alex2}")
        if exact_alex2 and target.alex2 != source.alex2:
            raise FiltrationViolation(f"{source.id} -> {target.id} changes alex2 from {source.alex2} to {target.alex2}")

    if not (matrix @ matrix).is_zero():
        raise Dsquared("the differential does not square to zero")
    return GradedComplex(generators, matrix)

def empty_complex() -> GradedComplex:
    return GradedComplex([], F2Matrix(0, 0))

def direct_sum(complexes: Iterable[GradedComplex]) -> GradedComplex:
    generators: List[Generator] = []
    entries: List[Entry] = []
    for c in complexes:
        offset = len(generators)
        generators.extend(c.generators)
        entries.extend((r + offset, c_ + offset) for r, c_ in c.differential.entries)
    return make_complex(generators, F2Matrix(len(generators), len(generators), entries))

def sub_quotient(c: GradedComplex, keep_ids: Iterable[str], mode: str) -> GradedComplex:
    if mode not in (SUB, QUOTIENT):
        raise ValueError(f"unknown mode {mode}")
    keep = set(keep_ids)
    unknown = keep - set(c.index)
    if unknown:
        raise ConstraintError(f"unknown generator ids {sorted(unknown)}")
    for r, col in c.differential.entries:
        source = c.generators[col].id
        target = c.generators[r].id
        if mode == SUB and source in keep and target not in keep:
            raise NotClosed(f"{source} -> {target} leaves the subcomplex")
        if mode == QUOTIENT and source not in keep and target in keep:
            raise NotClosed(f"{source} -> {target} leaves the killed subcomplex")
    return restrict(c, [g.id for g in c.generators if g.id in keep])

# Keep the listed generators (in the listed order) and every arrow between them.
def restrict(c: GradedComplex, ids: List[str]) -> GradedComplex:
    position = {id: i for i, id in enumerate(ids)}
    entries = []
    for r, col in c.differential.entries:
        source = c.generators[col].id
        target = c.generators[r].id
        if source in position and target in position:
            entries.append((position[target], position[source]))
    return GradedComplex([c.generator(id) for id in ids], F2Matrix(len(ids), len(ids), entries))

def tensor(c1: GradedComplex, c2: GradedComplex) -> GradedComplex:
    n2 = len(c2)
    generators = [Generator(f"[{a.id},{b.id}]", a.maslov + b.maslov, a.alex2 + b.alex2, TAG_PLAIN, f"{a.label}|{b.label}")
                  for a in c1.generators for b in c2.generators]
    entries: List[Entry] = []
    for r, c in c1.differential.entries:
        entries.extend((r * n2 + j, c * n2 + j) for j in range(n2))
    for r, c in c2.differential.entries:
        entries.extend((i * n2 + r, i * n2 + c) for i in range(len(c1)))
    return make_complex(generators, F2Matrix(len(generators), len(generators), entries))

def dual_shift(c: GradedComplex, maslov_affine: Tuple[int, int], alex2_affine: Tuple[int, int]) -> GradedComplex:
    maslov_sign, maslov_offset = maslov_affine
    alex2_sign, alex2_offset = alex2_affine
    if maslov_sign not in (1, -1) or alex2_sign not in (1, -1):
        raise ValueError("affine signs must be +1 or -1")
    generators = [g.copy(maslov=maslov_sign * g.maslov + maslov_offset, alex2=alex2_sign * g.alex2 + alex2_offset)
                  for g in c.generators]
    differential = c.differential.transpose() if maslov_sign == -1 else c.differential
    return make_complex(generators, differential)

# Gaussian cancellation. Pairs joined by an arrow are removed one at a time and the
# boundary of the rest is corrected by ∂'z = ∂z + <∂z,y>∂x.
def reduce(c: GradedComplex, strata: Optional[Mapping[str, int]] = None) -> GradedComplex:
    boundary: Dict[str, Set[str]] = {g.id: set(c.boundary(g.id)) for g in c.generators}
    coboundary: Dict[str, Set[str]] = {g.id: set() for g in c.generators}
    for source, targets in boundary.items():
        for target in targets:
            coboundary[target].add(source)
    gens = {g.id: g for g in c.generators}

    def eligible(x: str, y: str) -> bool:
        if strata is None:
            return True
        return strata[x] == strata[y] and gens[x].alex2 == gens[y].alex2

    # Smallest alex2 gap first, then lowest alex2, then lowest maslov, so every
    # correction z -> w still lowers alex2 by at least that gap.
    while True:
        best: Optional[Tuple[int, int, int, str, str]] = None
        for x, targets in boundary.items():
            gx = gens[x]
            for y in targets:
                if not eligible(x, y):
                    continue
                candidate = (gx.alex2 - gens[y].alex2, gx.alex2, gx.maslov, x, y)
                if best is None or candidate < best:
                    best = candidate
        if best is None:
            break
        x, y = best[3], best[4]
        rest = boundary[x] - {y}
        for z in list(coboundary[y]):
            if z == x:
                continue
            for w in rest:
                if w in boundary[z]:
                    boundary[z].discard(w)
                    coboundary[w].discard(z)
                else:
                    boundary[z].add(w)
                    coboundary[w].add(z)
        for gone in (x, y):
            for target in boundary.pop(gone):
                if target in coboundary:
                    coboundary[target].discard(gone)
            for source in coboundary.pop(gone):
                if source in boundary:
                    boundary[source].discard(gone)

    survivors = [g for g in c.generators if g.id in boundary]
    arrows = [(source, target) for source in boundary for target in boundary[source]]
    return make_complex(survivors, arrows)

def homology(c: GradedComplex) -> Ranks:
    ranks: Ranks = {}
    for g in reduce(c).generators:
        ranks[(g.maslov, g.alex2)] = ranks.get((g.maslov, g.alex2), 0) + 1
    return ranks

def total_rank(ranks: Ranks) -> int:
    return sum(ranks.values())

def maslov_ranks(ranks: Ranks) -> Dict[int, int]:
    result: Dict[int, int] = {}
    for (maslov, _), rank in ranks.items():
        result[maslov] = result.get(maslov, 0) + rank
    return result

def is_contractible(c: GradedComplex) -> bool:
    return len(c) == 2 * rank_f2(c.differential)

def euler_poly(ranks: Ranks) -> LaurentPoly:
    poly: Dict[int, int] = {}
    for (maslov, alex2), rank in ranks.items():
        poly[alex2] = poly.get(alex2, 0) + (-1) ** (maslov % 2) * rank
    return LaurentPoly(poly)

def d_extremes(family: Mapping[int, GradedComplex]) -> Tuple[int, int]:
    alive = [alex2 for alex2, c in family.items() if not is_contractible(c)]
    if len(alive) == 0:
        raise EmptyFamily("every sector of the family is contractible")
    return max(alive), min(alive)

class ChainMap:
    def __init__(self, source: GradedComplex, target: GradedComplex, matrix: F2Matrix,
                 alex2_shift: int = 0, maslov_shift: int = 0) -> None:
        assert (matrix.rows, matrix.cols) == (len(target), len(source)), "chain map shape mismatch"
        self.source = source
        self.target = target
        self.matrix = matrix
        self.alex2_shift = alex2_shift
        self.maslov_shift = maslov_shift

    @staticmethod
    def from_pairs(source: GradedComplex, target: GradedComplex, pairs: Iterable[Tuple[str, str]],
                   alex2_shift: int = 0, maslov_shift: int = 0) -> 'ChainMap':
        entries = [(target.index[t], source.index[s]) for s, t in pairs]
        return ChainMap(source, target, F2Matrix(len(target), len(source), entries), alex2_shift, maslov_shift)

    def pairs(self) -> List[Tuple[str, str]]:
        return sorted((self.source.generators[c].id, self.target.generators[r].id) for r, c in self.matrix.entries)

    # Every entry moves maslov by exactly the declared shift and never raises alex2 past it.
    def respects_shifts(self) -> bool:
        for r, c in self.matrix.entries:
            s = self.source.generators[c]
            t = self.target.generators[r]
            if t.maslov != s.maslov + self.maslov_shift or t.alex2 > s.alex2 + self.alex2_shift:
                return False
        return True

    def commutes(self) -> bool:
        return (self.target.differential @ self.matrix) == (self.matrix @ self.source.differential)

    def rank(self) -> int:
        return rank_f2(self.matrix)

    def compose(self, first: 'ChainMap') -> 'ChainMap':
        return ChainMap(first.source, self.target, self.matrix @ first.matrix,
                        first.alex2_shift + self.alex2_shift, first.maslov_shift + self.maslov_shift)

class SesReport:
    def __init__(self) -> None:
        self.checks: Dict[str, bool] = {}

    def record(self, name: str, ok: bool) -> None:
        self.checks[name] = ok

    @property
    def failures(self) -> List[str]:
        return [name for name, ok in self.checks.items() if not ok]

    @property
    def passed(self) -> bool:
        return len(self.failures) == 0

    def to_json(self) -> Dict[str, Any]:
        return {"passed": self.passed, "failures": self.failures}

def verify_ses(f: ChainMap, g: ChainMap) -> SesReport:
    report = SesReport()
    report.record("chain map: f", f.commutes() and f.respects_shifts())
    report.record("chain map: g", g.commutes() and g.respects_shifts())
    rank_f = f.rank()
    rank_g = g.rank()
    report.record("injectivity: f not one-to-one", rank_f == len(f.source))
    report.record("surjectivity: g not onto", rank_g == len(g.target))
    composed = g.matrix @ f.matrix if len(f.target) == len(g.source) else None
    composes = composed is not None and composed.is_zero()
    report.record("composition: g∘f ≠ 0", composes)
    report.record("exactness: im f ≠ ker g", composes and rank_f == len(g.source) - rank_g)
    return report

class Flag:
    def __init__(self, plus: GradedComplex, zero_ids: Iterable[str], minus_ids: Iterable[str],
                 connecting: Optional[ChainMap] = None) -> None:
        self.plus = plus
        zero = set(zero_ids)
        minus = set(minus_ids)
        self.zero_ids: List[str] = [id for id in plus.ids() if id in zero]
        self.minus_ids: List[str] = [id for id in plus.ids() if id in minus]
        if not minus <= zero:
            raise NotClosed("the minus stratum is not contained in the zero stratum")
        self._minus = sub_quotient(plus, self.minus_ids, SUB)
        self._zero = sub_quotient(plus, self.zero_ids, SUB)
        self._top = sub_quotient(plus, [id for id in plus.ids() if id not in set(self.zero_ids)], QUOTIENT)
        self.connecting = connecting

    def minus(self) -> GradedComplex:
        return self._minus

    def zero(self) -> GradedComplex:
        return self._zero

    # The A stratum, CFL_+/CFL_0.
    def top(self) -> GradedComplex:
        return self._top

    def zero_over_minus(self) -> GradedComplex:
        return sub_quotient(self._zero, [id for id in self.zero_ids if id not in set(self.minus_ids)], QUOTIENT)

    def plus_over_minus(self) -> GradedComplex:
        return sub_quotient(self.plus, [id for id in self.plus.ids() if id not in set(self.minus_ids)], QUOTIENT)

    def strata(self) -> Dict[str, int]:
        minus = set(self.minus_ids)
        zero = set(self.zero_ids)
        return {id: 0 if id in minus else 1 if id in zero else 2 for id in self.plus.ids()}

    # The exact sequence 0 -> C_0 -> C_+ -> C_-' -> 0 whose last map is ∂' after projecting to the A stratum.
    def ses(self) -> Tuple[ChainMap, ChainMap]:
        assert self.connecting is not None, "flag has no connecting map"
        inclusion = ChainMap.from_pairs(self._zero, self.plus, ((id, id) for id in self.zero_ids))
        target = self.connecting.target
        entries = [(r, self.plus.index[self.connecting.source.generators[c].id]) for r, c in self.connecting.matrix.entries]
        projection = ChainMap(self.plus, target, F2Matrix(len(target), len(self.plus), entries),
                              self.connecting.alex2_shift, self.connecting.maslov_shift)
        return inclusion, projection

# Serialization.

def complex_to_json(c: GradedComplex) -> Dict[str, Any]:
    ordered = sorted(c.generators, key=Generator.key)
    return {
        "generators": [{"id": g.id, "maslov": g.maslov, "alex2": g.alex2, "tag": g.tag, "label": g.label} for g in ordered],
        "differential": [[source, target] for source, target in c.arrows()],
    }

def complex_from_json(data: Mapping[str, Any]) -> GradedComplex:
    gens = [Generator(str(g["id"]), int(g["maslov"]), int(g["alex2"]), str(g.get("tag", TAG_PLAIN)), str(g.get("label", "")))
            for g in data["generators"]]
    return make_complex(gens, [(str(s), str(t)) for s, t in data["differential"]])

def flag_to_json(flag: Flag) -> Dict[str, Any]:
    data = complex_to_json(flag.plus)
    data["minus"] = sorted(flag.minus_ids)
    data["zero"] = sorted(flag.zero_ids)
    if flag.connecting is not None:
        data["connecting"] = [[s, t] for s, t in flag.connecting.pairs()]
        data["alex2_shift"] = flag.connecting.alex2_shift
        data["maslov_shift"] = flag.connecting.maslov_shift
        data["target"] = complex_to_json(flag.connecting.target)
    return data

def flag_from_json(data: Mapping[str, Any]) -> Flag:
    plus = complex_from_json(data)
    flag = Flag(plus, data["zero"], data["minus"])
    if "connecting" in data:
        target = complex_from_json(data["target"])
        flag.connecting = ChainMap.from_pairs(flag.top(), target, [(str(s), str(t)) for s, t in data["connecting"]],
                                              int(data.get("alex2_shift", 0)), int(data.get("maslov_shift", 0)))
    return flag
