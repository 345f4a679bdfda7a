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

from typing import List, Dict, Set, Tuple, Optional, Sequence, Mapping, Any
from functools import lru_cache

import heapq
import re

import sympy

from .laurent import LaurentPoly
from .errors import InputError, PdSyntaxError, EdgeCountError, Disconnected, NotKnot, UnsupportedDiagram, NormalizationImpossible, UnknownKnot

Crossing = Tuple[int, int, int, int]

class Diagram:
    def __init__(self, crossings: Sequence[Crossing]) -> None:
        self.crossings: List[Crossing] = [tuple(x) for x in crossings] # type: ignore

    def __len__(self) -> int:
        return len(self.crossings)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        return self.crossings == other.crossings

    def __repr__(self) -> str:
        return f"Diagram({serialize_pd(self)!r})"

    def edge_count(self) -> int:
        return 2 * len(self.crossings)

    # Successor of an edge label along the knot orientation.
    def next_edge(self, edge: int) -> int:
        return edge % self.edge_count() + 1

class SeifertData:
    def __init__(self, matrix: List[List[int]]) -> None:
        self.matrix = matrix
        self.genus_of_surface = len(matrix) // 2

    def size(self) -> int:
        return len(self.matrix)

class KnotData:
    def __init__(self, name: str, alexander: LaurentPoly, signature: int, diagram: Optional[Diagram] = None) -> None:
        self.name = name
        self.alexander = alexander
        self.signature = signature
        self.genus = alexander.top() // 2
        self.diagram = diagram

    def __repr__(self) -> str:
        return f"KnotData({self.name!r}, {self.alexander}, signature={self.signature})"

# PD text parsing.

TERM = re.compile(r"X\s*[\(\[]\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*[\)\]]")
SEPARATOR = re.compile(r"[\s,]+")

def _offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))

def parse_pd(text: str) -> Diagram:
    crossings: List[Crossing] = []
    position = 0
    separator = SEPARATOR.match(text, position)
    if separator is not None:
        position = separator.end()
    while position < len(text):
        match = TERM.match(text, position)
        if match is None:
            raise PdSyntaxError("expected a crossing of the form X(a,b,c,d)", _offset(text, position))
        labels = tuple(int(v) for v in match.groups())
        for i, label in enumerate(labels):
            if label < 1:
                raise PdSyntaxError("edge labels are 1-based positive integers", _offset(text, match.start(i + 1)))
        crossings.append(labels) # type: ignore
        position = match.end()
        separator = SEPARATOR.match(text, position)
        if separator is not None:
            position = separator.end()
        elif position < len(text):
            raise PdSyntaxError("expected whitespace between crossings", _offset(text, position))
    if len(crossings) == 0:
        raise PdSyntaxError("empty diagram", 0)
    return validate(Diagram(crossings))

def validate(d: Diagram) -> Diagram:
    counts: Dict[int, int] = {}
    for crossing in d.crossings:
        for label in crossing:
            counts[label] = counts.get(label, 0) + 1
    for label, count in sorted(counts.items()):
        if count != 2:
            raise EdgeCountError(f"edge {label} appears {count} time(s), expected 2")
    if sorted(counts) != list(range(1, d.edge_count() + 1)):
        raise EdgeCountError(f"expected edge labels 1..{d.edge_count()} for {len(d)} crossings")

    # Union the four edges at each crossing; a connected diagram ends with one class.
    parent = {label: label for label in counts}
    def find(label: int) -> int:
        while parent[label] != label:
            parent[label] = parent[parent[label]]
            label = parent[label]
        return label
    for crossing in d.crossings:
        for label in crossing[1:]:
            parent[find(label)] = find(crossing[0])
    if len({find(label) for label in counts}) > 1:
        raise Disconnected("the diagram is not connected")
    return d

def serialize_pd(d: Diagram) -> str:
    return " ".join(f"X({a},{b},{c},{e})" for a, b, c, e in d.crossings)

def pd_to_json(d: Diagram) -> Dict[str, Any]:
    return {"pd": [list(x) for x in d.crossings]}

def pd_from_json(data: Mapping[str, Any]) -> Diagram:
    crossings = [tuple(int(v) for v in x) for x in data["pd"]]
    if any(len(x) != 4 for x in crossings):
        raise PdSyntaxError("every crossing needs four edge labels", 0)
    if len(crossings) == 0:
        return Diagram([])
    return validate(Diagram(crossings)) # type: ignore

# Closed braids.

def braid_closure_pd(word: Sequence[int], strands: Optional[int] = None) -> Diagram:
    if strands is None:
        strands = max((abs(g) for g in word), default=0) + 1
    for g in word:
        if g == 0 or abs(g) >= strands:
            raise InputError(f"generator {g} is out of range for {strands} strands")
    if len(word) == 0:
        if strands != 1:
            raise NotKnot(f"the closure of the empty {strands}-strand braid is a link")
        return Diagram([])
    touched = {abs(g) - 1 for g in word} | {abs(g) for g in word}
    if len(touched) != strands:
        raise NotKnot("a strand without crossings closes up to a separate component")

    # Edge ids: position p starts on edge p; each crossing opens two new edges.
    # Strands run upwards and the two strands at a crossing trade places.
    current = list(range(strands))
    records: List[Tuple[int, int, int, int, int]] = []
    fresh = strands
    for g in word:
        i = abs(g) - 1
        out_left, out_right = fresh, fresh + 1
        fresh += 2
        if g > 0:
            # The strand entering from the left passes over.
            records.append((1, current[i + 1], out_left, current[i], out_right))
        else:
            records.append((-1, current[i], out_right, current[i + 1], out_left))
        current[i] = out_left
        current[i + 1] = out_right
    alias = {current[p]: p for p in range(strands)}

    follow: Dict[int, int] = {}
    resolved: List[Tuple[int, int, int, int, int]] = []
    for sign, in_under, out_under, in_over, out_over in records:
        row = (sign, alias.get(in_under, in_under), alias.get(out_under, out_under),
               alias.get(in_over, in_over), alias.get(out_over, out_over))
        follow[row[1]] = row[2]
        follow[row[3]] = row[4]
        resolved.append(row)

    label: Dict[int, int] = {}
    edge = 0
    while edge not in label:
        label[edge] = len(label) + 1
        edge = follow[edge]
    if len(label) != 2 * len(word):
        raise NotKnot("the braid closes up to a link with more than one component")

    crossings: List[Crossing] = []
    for sign, in_under, out_under, in_over, out_over in resolved:
        if sign > 0:
            crossings.append((label[in_under], label[out_over], label[out_under], label[in_over]))
        else:
            crossings.append((label[in_under], label[in_over], label[out_under], label[out_over]))
    return validate(Diagram(crossings))

# Over strand of a crossing as (incoming, outgoing) labels.
def over_strand(d: Diagram, crossing: Crossing) -> Tuple[int, int]:
    _, b, _, e = crossing
    if d.next_edge(b) == e and d.next_edge(e) != b:
        return b, e
    if d.next_edge(e) == b and d.next_edge(b) != e:
        return e, b
    return b, e

def crossing_sign(d: Diagram, crossing: Crossing) -> int:
    incoming, _ = over_strand(d, crossing)
    return 1 if incoming == crossing[3] else -1

# Seifert circles as edge cycles, following the oriented smoothing at every crossing.
def seifert_circles(d: Diagram) -> List[List[int]]:
    follow: Dict[int, int] = {}
    for crossing in d.crossings:
        incoming, outgoing = over_strand(d, crossing)
        follow[crossing[0]] = outgoing
        follow[incoming] = crossing[2]
    circles: List[List[int]] = []
    seen: Set[int] = set()
    for start in sorted(follow):
        if start in seen:
            continue
        cycle: List[int] = []
        edge = start
        while edge not in seen:
            seen.add(edge)
            cycle.append(edge)
            edge = follow[edge]
        circles.append(cycle)
    return circles

# Recover a braid word from a diagram whose Seifert circles are the closures of braid strands.
def braid_word(d: Diagram) -> Tuple[List[int], int]:
    if len(d) == 0:
        return [], 1
    circles = seifert_circles(d)
    circle_of = {edge: i for i, circle in enumerate(circles) for edge in circle}
    head: Dict[int, int] = {}
    ends: List[Tuple[int, int]] = []
    for k, crossing in enumerate(d.crossings):
        incoming, _ = over_strand(d, crossing)
        head[crossing[0]] = k
        head[incoming] = k
        pair = (circle_of[crossing[0]], circle_of[incoming])
        if pair[0] == pair[1]:
            raise UnsupportedDiagram(f"crossing {k + 1} joins a Seifert circle to itself")
        ends.append(pair)

    neighbors: Dict[int, Set[int]] = {i: set() for i in range(len(circles))}
    for u, v in ends:
        neighbors[u].add(v)
        neighbors[v].add(u)
    if any(len(n) > 2 for n in neighbors.values()) or sum(len(n) for n in neighbors.values()) != 2 * (len(circles) - 1):
        raise UnsupportedDiagram("the Seifert graph is not a path")

    # Walk the path from the endpoint holding the smallest edge label.
    endpoints = [i for i, n in neighbors.items() if len(n) == 1]
    level_of: Dict[int, int] = {}
    circle = min(endpoints, key=lambda i: min(circles[i]))
    while circle not in level_of:
        level_of[circle] = len(level_of)
        unvisited = [n for n in neighbors[circle] if n not in level_of]
        if unvisited:
            circle = unvisited[0]
    levels = sorted(level_of, key=lambda i: level_of[i])
    column = [min(level_of[u], level_of[v]) for u, v in ends]

    orders: List[List[int]] = []
    for depth, circle in enumerate(levels):
        order = [head[edge] for edge in circles[circle]]
        if depth == 0:
            start = order.index(min(order))
        else:
            first = next(k for k in orders[-1] if column[k] == depth - 1)
            start = order.index(first)
        orders.append(order[start:] + order[:start])

    # Merge the per-strand orders into one word.
    before: Dict[int, Set[int]] = {k: set() for k in range(len(d))}
    after: Dict[int, Set[int]] = {k: set() for k in range(len(d))}
    for order in orders:
        for earlier, later in zip(order, order[1:]):
            before[later].add(earlier)
            after[earlier].add(later)
    ready = [k for k in range(len(d)) if len(before[k]) == 0]
    heapq.heapify(ready)
    word: List[int] = []
    while ready:
        k = heapq.heappop(ready)
        word.append(crossing_sign(d, d.crossings[k]) * (column[k] + 1))
        for later in after[k]:
            before[later].discard(k)
            if len(before[later]) == 0:
                heapq.heappush(ready, later)
    if len(word) != len(d):
        raise UnsupportedDiagram("the Seifert circles are not coherently ordered")
    return word, len(circles)

# Seifert matrix of the closure of a braid word: one generator per pair of consecutive
# crossings in the same column.
def braid_seifert_matrix(word: Sequence[int]) -> List[List[int]]:
    following: List[Optional[int]] = []
    for j, g in enumerate(word):
        following.append(next((l for l in range(j + 1, len(word)) if abs(word[l]) == abs(g)), None))
    starts = [j for j, h in enumerate(following) if h is not None]
    size = len(starts)
    matrix = [[0] * size for _ in range(size)]
    for a, i in enumerate(starts):
        hi = following[i]
        assert hi is not None
        total = word[i] + word[hi]
        matrix[a][a] = -1 if total > 0 else 1 if total < 0 else 0
        for b in range(a + 1, size):
            j = starts[b]
            hj = following[j]
            assert hj is not None
            if j > hi or hj < hi:
                continue
            if j == hi:
                if word[j] > 0:
                    matrix[a][b] = 1
                else:
                    matrix[b][a] = -1
            elif abs(word[j]) - abs(word[i]) == 1:
                matrix[a][b] = 1
            elif abs(word[i]) - abs(word[j]) == 1:
                matrix[b][a] = -1
    return matrix

# General diagrams are brought into braid form by Vogel moves: a Reidemeister II move that
# pushes one edge across a face over another edge of a different Seifert circle running the
# same way around that face. Each move keeps the number of Seifert circles and removes one
# incoherent pair, so the loop ends with the circles nested like the strands of a braid.

# Crossing slots at which an edge leaves its crossing.
def _outgoing(d: Diagram) -> Set[Tuple[int, int]]:
    result: Set[Tuple[int, int]] = set()
    for k, crossing in enumerate(d.crossings):
        incoming, _ = over_strand(d, crossing)
        result.add((k, 2))
        result.add((k, 1 if incoming == crossing[3] else 3))
    return result

# Faces as lists of (edge, agrees) in the order they are traversed with the face on the left;
# agrees is True when the traversal follows the knot orientation.
def faces(d: Diagram) -> List[List[Tuple[int, bool]]]:
    ends: Dict[int, List[Tuple[int, int]]] = {}
    for k, crossing in enumerate(d.crossings):
        for s, label in enumerate(crossing):
            ends.setdefault(label, []).append((k, s))
    outgoing = _outgoing(d)
    seen: Set[Tuple[int, int]] = set()
    result: List[List[Tuple[int, bool]]] = []
    for k in range(len(d)):
        for s in range(4):
            at = (k, s)
            face: List[Tuple[int, bool]] = []
            while at not in seen:
                seen.add(at)
                label = d.crossings[at[0]][at[1]]
                face.append((label, at in outgoing))
                first, second = ends[label]
                y, j = second if first == at else first
                at = (y, (j - 1) % 4)
            if face:
                result.append(face)
    return result

def incoherent_pair(d: Diagram) -> Optional[Tuple[int, int, bool]]:
    circle_of = {edge: i for i, circle in enumerate(seifert_circles(d)) for edge in circle}
    for face in faces(d):
        for i, (e1, agrees) in enumerate(face):
            for e2, other in face[i + 1:]:
                if agrees == other and circle_of[e1] != circle_of[e2]:
                    return e1, e2, agrees
    return None

# Push e1 over e2 through their common face. Both edges are split in three and the two new
# crossings are appended; edges are then renumbered from the piece that starts at edge 1.
def vogel_move(d: Diagram, e1: int, e2: int, agrees: bool) -> Diagram:
    Piece = Tuple[int, int]
    outgoing = _outgoing(d)
    slots: List[List[Piece]] = []
    over_in: List[int] = []
    for k, crossing in enumerate(d.crossings):
        row: List[Piece] = []
        for s, label in enumerate(crossing):
            if label in (e1, e2):
                row.append((label, 1 if (k, s) in outgoing else 3))
            else:
                row.append((label, 0))
        slots.append(row)
        over_in.append(1 if (k, 3) in outgoing else 3)

    first1, middle1, last1 = (e1, 1), (e1, 2), (e1, 3)
    first2, middle2, last2 = (e2, 1), (e2, 2), (e2, 3)
    if agrees:
        slots += [[middle2, middle1, last2, first1], [first2, middle1, middle2, last1]]
        over_in += [3, 1]
    else:
        slots += [[middle2, first1, last2, middle1], [first2, last1, middle2, middle1]]
        over_in += [1, 3]

    head: Dict[Piece, Tuple[int, int]] = {}
    for k, row in enumerate(slots):
        head[row[0]] = (k, 0)
        head[row[over_in[k]]] = (k, over_in[k])
    piece = next(slots[k][s] for k, s in sorted(outgoing) if d.crossings[k][s] == 1)
    number: Dict[Piece, int] = {}
    while piece not in number:
        number[piece] = len(number) + 1
        k, s = head[piece]
        piece = slots[k][2 if s == 0 else 4 - s]
    return validate(Diagram([tuple(number[p] for p in row) for row in slots])) # type: ignore

def braided(d: Diagram) -> Diagram:
    for _ in range((len(d) + 1) ** 2):
        pair = incoherent_pair(d)
        if pair is None:
            return d
        d = vogel_move(d, *pair)
    raise UnsupportedDiagram("the diagram did not reach braid form")

def seifert_matrix(d: Diagram) -> SeifertData:
    for a, b, c, e in d.crossings:
        if d.next_edge(a) != c or (d.next_edge(b) != e and d.next_edge(e) != b):
            raise NotKnot("the diagram has more than one component")
    word, _ = braid_word(braided(d))
    return SeifertData(braid_seifert_matrix(word))

T = sympy.Symbol("t")

def alexander_polynomial(s: SeifertData) -> LaurentPoly:
    if s.size() == 0:
        return LaurentPoly({0: 1})
    v = sympy.Matrix(s.matrix)
    determinant = sympy.expand((v - T * v.T).det())
    if determinant == 0:
        raise NormalizationImpossible("det(V - tV^T) vanishes")
    terms = {int(exponent[0]): int(coefficient) for exponent, coefficient in sympy.Poly(determinant, T).terms()}
    shift = min(terms) + max(terms)
    poly = LaurentPoly({2 * e - shift: c for e, c in terms.items()})
    if poly.at_one() == -1:
        poly = -poly
    if poly.at_one() != 1 or not poly.is_symmetric():
        raise NormalizationImpossible(f"{poly} cannot be normalized to a knot polynomial")
    return poly

# Congruence diagonalization of V + V^T over the rationals.
def signature(s: SeifertData) -> int:
    if s.size() == 0:
        return 0
    v = sympy.Matrix(s.matrix)
    form = (v + v.T).applyfunc(sympy.Rational)
    result = 0
    while form.rows > 0:
        pivots = [i for i in range(form.rows) if form[i, i] != 0]
        if pivots:
            p = pivots[0]
        else:
            off = [(i, j) for i in range(form.rows) for j in range(form.rows) if form[i, j] != 0]
            if not off:
                break
            p, j = off[0]
            form[p, :] = form[p, :] + form[j, :]
            form[:, p] = form[:, p] + form[:, j]
        pivot = form[p, p]
        result += 1 if pivot > 0 else -1
        others = [k for k in range(form.rows) if k != p]
        row = form.extract([p], others)
        form = form.extract(others, others) - row.T * row / pivot
    return result

def knot_from_diagram(name: str, d: Diagram) -> KnotData:
    data = seifert_matrix(d)
    return KnotData(name, alexander_polynomial(data), signature(data), d)

def mirror(k: KnotData) -> KnotData:
    name = k.name[:-1] if k.name.endswith("*") else f"{k.name}*"
    return KnotData(name, k.alexander, -k.signature)

def connected_sum_data(k1: KnotData, k2: KnotData) -> KnotData:
    return KnotData(f"{k1.name}#{k2.name}", k1.alexander * k2.alexander, k1.signature + k2.signature)

def knot_to_json(k: KnotData) -> Dict[str, Any]:
    return {"name": k.name, "alexander": k.alexander.to_json(), "signature": k.signature, "genus": k.genus}

def knot_from_json(data: Mapping[str, Any]) -> KnotData:
    return KnotData(str(data["name"]), LaurentPoly.from_json(data["alexander"]), int(data["signature"]))

# Built-in table.

def twist_word(crossings: int) -> List[int]:
    if crossings % 2 == 1:
        word = [1, 1, 1]
        for k in range(2, (crossings - 1) // 2 + 1):
            word += [k, -(k - 1), k]
    else:
        word = [1, -2, 1, -2]
        for k in range(3, crossings // 2 + 1):
            word += [-k, k - 1, -k]
    return word

def torus_word(q: int) -> List[int]:
    return [1] * q

BraidSpec = Tuple[List[int], Optional[int]]

# Positive braids close up to knots with negative signature.
TABLE: List[Tuple[str, List[BraidSpec]]] = [
    ("unknot", [([], 1)]),
    ("3_1", [(torus_word(3), None), (torus_word(3) + [2], None)]),
    ("4_1", [(twist_word(4), None), (twist_word(4) + [3], None)]),
    ("5_1", [(torus_word(5), None)]),
    ("5_2", [(twist_word(5), None)]),
    ("6_1", [(twist_word(6), None)]),
    ("6_2", [([1, 1, 1, -2, 1, -2], None)]),
    ("6_3", [([1, 1, -2, 1, -2, -2], None)]),
    ("7_2", [(twist_word(7), None)]),
    ("7_4", [([1, 1, 2, -1, 2, 2, 3, -2, 3], None)]),
    ("8_1", [(twist_word(8), None)]),
] + [(f"T(2,{2 * n + 1})", [(torus_word(2 * n + 1), None)]) for n in range(1, 6)]

def table_diagrams(name: str) -> List[Diagram]:
    for entry, braids in TABLE:
        if entry == name:
            return [braid_closure_pd(word, strands) for word, strands in braids]
    raise UnknownKnot(f"unknown knot: {name}")

@lru_cache(maxsize=None)
def _table() -> Tuple[KnotData, ...]:
    return tuple(knot_from_diagram(name, table_diagrams(name)[0]) for name, _ in TABLE)

def knot_table() -> List[KnotData]:
    return list(_table())

def lookup(name: str) -> KnotData:
    for k in _table():
        if k.name == name:
            return k
    raise UnknownKnot(f"unknown knot: {name}")
