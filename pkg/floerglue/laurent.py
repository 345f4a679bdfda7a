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

from typing import Dict, Iterator, Mapping, Tuple

# Laurent polynomial in t^(1/2) with integer coefficients.
# Exponents are stored doubled ("alex2") so half-integer powers stay exact.
class LaurentPoly:
    def __init__(self, coefficients: Mapping[int, int] = {}) -> None:
        self.coefficients: Dict[int, int] = {k: v for k, v in coefficients.items() if v != 0}

    @staticmethod
    def monomial(alex2: int, coefficient: int = 1) -> 'LaurentPoly':
        return LaurentPoly({alex2: coefficient})

    def __getitem__(self, alex2: int) -> int:
        return self.coefficients.get(alex2, 0)

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(sorted(self.coefficients.items(), reverse=True))

    def __bool__(self) -> bool:
        return len(self.coefficients) > 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(frozenset(self.coefficients.items()))

    def __add__(self, other: 'LaurentPoly') -> 'LaurentPoly':
        result = dict(self.coefficients)
        for k, v in other.coefficients.items():
            result[k] = result.get(k, 0) + v
        return LaurentPoly(result)

    def __neg__(self) -> 'LaurentPoly':
        return LaurentPoly({k: -v for k, v in self.coefficients.items()})

    def __sub__(self, other: 'LaurentPoly') -> 'LaurentPoly':
        return self + (-other)

    def __mul__(self, other: 'LaurentPoly') -> 'LaurentPoly':
        result: Dict[int, int] = {}
        for k1, v1 in self.coefficients.items():
            for k2, v2 in other.coefficients.items():
                result[k1 + k2] = result.get(k1 + k2, 0) + v1 * v2
        return LaurentPoly(result)

    def at_one(self) -> int:
        return sum(self.coefficients.values())

    def mirror(self) -> 'LaurentPoly':
        return LaurentPoly({-k: v for k, v in self.coefficients.items()})

    def is_symmetric(self) -> bool:
        return self == self.mirror()

    # Largest doubled exponent with a nonzero coefficient.
    def top(self) -> int:
        if not self.coefficients:
            return 0
        return max(self.coefficients)

    def bottom(self) -> int:
        if not self.coefficients:
            return 0
        return min(self.coefficients)

    def to_json(self) -> Dict[str, int]:
        return {str(k): v for k, v in sorted(self.coefficients.items(), reverse=True)}

    @staticmethod
    def from_json(data: Mapping[str, int]) -> 'LaurentPoly':
        return LaurentPoly({int(k): int(v) for k, v in data.items()})

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_json()})"

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        text = ""
        for alex2, coefficient in self:
            magnitude = abs(coefficient)
            if alex2 == 0:
                power = ""
            elif alex2 == 2:
                power = "t"
            elif alex2 % 2 == 0:
                power = f"t^{alex2 // 2}"
            else:
                power = f"t^{alex2}/2"
            if power == "":
                term = str(magnitude)
            elif magnitude == 1:
                term = power
            else:
                term = f"{magnitude}{power}"
            if len(text) == 0:
                text = term if coefficient > 0 else f"-{term}"
            else:
                text += f" + {term}" if coefficient > 0 else f" - {term}"
        return text
