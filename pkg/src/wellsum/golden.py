"""Printed values of Tables 1-7, kept verbatim as test vectors.

Nothing in the package derives a value from this module; it exists so that
generated closed forms can be compared with the printed ones, including
the two rows whose printed form disagrees with the generator (Table 5 row
7;8 numerator, Table 7 row (3, 5/2) length exponent).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import RangeError
from .exactval import ExactSum, ExactValue

F = Fraction

# (numerator, denominator, power of pi)
_T1 = [
    (1, 3, 0),
    (2, 315, 2),
    (8, 155925, 4),
    (16, 70945875, 6),
    (128, 206239658625, 8),
    (256, 219150261254925, 10),
    (1024, 641014514170655625, 12),
    (2048, 1234868674798755871875, 14),
    (32768, 24246646429673571544265625, 16),
    (65536, 73863367240262256781014515625, 18),
]
_T2 = [
    (2, 45, 1),
    (8, 14175, 3),
    (16, 4729725, 5),
    (128, 10854718875, 7),
    (256, 9528272228475, 9),
    (1024, 23741278302616875, 11),
    (2048, 39834473380605028125, 13),
    (32768, 692761326562102044121875, 15),
    (65536, 1893932493340057866179859375, 17),
]
_T3 = [
    (1, 15, 0),
    (2, 2835, 2),
    (8, 2027025, 4),
    (16, 1206079875, 6),
    (128, 4331032831125, 8),
    (256, 5478756531373125, 10),
    (1024, 18589420910949013125, 12),
    (2048, 40750666268358943771875, 14),
    (32768, 897125917897922147137828125, 16),
]
# second terms: -pi^power / den
_T4_SECOND = [
    32,
    2048,
    294912,
    75497472,
    30198988800,
    17394617548800,
    13637380158259200,
    13964677282057420800,
    18098221757546417356800,
    28957154812074267770880000,
]
_T5_FIRST = list(_T2)
_T5_FIRST[6] = (2043, 39834473380605028125, 13)  # printed numerator
_T5_SECOND = [
    256,
    24576,
    4718592,
    1509949440,
    724775731200,
    487049291366400,
    436396165064294400,
    502728382154067148800,
    723928870301856694272000,
]
_T6 = list(_T3)
_T7 = {
    (F(1), F(1, 2)): (3675, 2048),
    (F(2), F(1, 2)): (6615, 4096),
    (F(3), F(1, 2)): (1715175, 1048576),
    (F(1), F(3, 2)): (6615, 2048),
    (F(2), F(3, 2)): (38115, 16384),
    (F(3), F(3, 2)): (2147145, 1048576),
    (F(1), F(5, 2)): (22869, 4096),
    (F(2), F(5, 2)): (143143, 40960),
    (F(3), F(5, 2)): (2927925, 1048576),
}
# printed pFq parameter lists of Table 7
T7_PARAMETERS = {
    (F(1), F(1, 2)): ([F(2)], [F(9, 4), F(11, 4)]),
    (F(2), F(1, 2)): ([F(2), F(5, 2)], [F(3, 2), F(11, 4), F(13, 4)]),
    (F(3), F(1, 2)): ([F(5, 2), F(3)], [F(3, 2), F(13, 4), F(15, 4)]),
    (F(1), F(3, 2)): ([F(2)], [F(11, 4), F(13, 4)]),
    (F(2), F(3, 2)): ([F(2), F(5, 2)], [F(3, 2), F(13, 4), F(15, 4)]),
    (F(3), F(3, 2)): ([F(5, 2), F(3)], [F(3, 2), F(15, 4), F(17, 4)]),
    (F(1), F(5, 2)): ([F(2)], [F(13, 4), F(15, 4)]),
    (F(2), F(5, 2)): ([F(2), F(5, 2)], [F(3, 2), F(15, 4), F(17, 4)]),
    (F(3), F(5, 2)): ([F(5, 2), F(3)], [F(3, 2), F(17, 4), F(19, 4)]),
}

# wave-function prefactors as printed: outer * sqrt(radicand / a^k) -> (outer, radicand, k)
_N1 = [(1, 6, 3), (2, 35, 7), (6, 77, 11), (6, 1430, 15), (2, 230945, 19), (2, 4056234, 23),
       (30, 312018, 27), (12, 33393355, 31), (30, 90751353, 35), (30, 1531628098, 39)]
_N2 = [(1, 42, 7), (2, 330, 11), (1, 30030, 15), (12, 4199, 19), (2, 2860165, 23), (12, 1448655, 27),
       (15, 16500246, 31), (20, 162397158, 35), (6, 31179571995, 39)]
_N3 = [(1, 20, 5), (6, 14, 9), (6, 286, 13), (4, 12155, 17), (2, 881790, 21), (20, 156009, 25),
       (12, 7540435, 29), (12, 129644790, 33), (30, 353452638, 37)]
# Table 7 prints outer * sqrt(radicand) / a^k -> (outer, radicand, k)
_N7 = {
    (F(1), F(1, 2)): (2, 3, 2),
    (F(2), F(1, 2)): (1, 30, 3),
    (F(3), F(1, 2)): (2, 14, 4),
    (F(1), F(3, 2)): (2, 15, 3),
    (F(2), F(3, 2)): (2, 70, 4),
    (F(3), F(3, 2)): (2, 210, 5),
    (F(1), F(5, 2)): (2, 42, 4),
    (F(2), F(5, 2)): (6, 35, 5),
    (F(3), F(5, 2)): (6, 154, 3),
}


def _v(num, den, power) -> ExactValue:
    return ExactValue(F(num, den), 2 * power)


def _index(table: int, key) -> int:
    start = {1: 1, 2: 1, 3: 2, 4: 1, 5: 1, 6: 2}[table]
    return key - start


def printed_value(table: int, key) -> ExactSum:
    """The printed closed form of a row (key as in ``formulas.normalize_row``)."""
    try:
        if table == 1:
            return ExactSum.of(_v(*_T1[_index(1, key)]))
        if table == 2:
            return ExactSum.of(_v(*_T2[_index(2, key)]))
        if table == 3:
            return ExactSum.of(_v(*_T3[_index(3, key)]))
        if table == 4:
            i = _index(4, key)
            return ExactSum.of(_v(*_T1[i]), -_v(1, _T4_SECOND[i], 2 * key))
        if table == 5:
            i = _index(5, key)
            return ExactSum.of(_v(*_T5_FIRST[i]), -_v(1, _T5_SECOND[i], 2 * key + 1))
        if table == 6:
            return ExactSum.of(_v(*_T6[_index(6, key)]))
        if table == 7:
            num, den = _T7[key]
            return ExactSum.of(_v(num, den, -2))
    except (IndexError, KeyError, TypeError) as exc:
        raise RangeError(f"row {key!r} is not printed in Table {table}") from exc
    raise RangeError(f"there is no table {table}")


def printed_normalization(table: int, key) -> tuple[Fraction, Fraction]:
    """(C^2, power of a in psi) as printed for a Table 1-3 or 7 row."""
    try:
        if table == 7:
            outer, rad, k = _N7[key]
            return F(outer * outer * rad), F(k)
        rows = {1: _N1, 2: _N2, 3: _N3}[table]
        outer, rad, k = rows[_index(table, key)]
        return F(outer * outer * rad), F(k, 2)
    except (IndexError, KeyError, TypeError) as exc:
        raise RangeError(f"no printed normalization for Table {table} row {key!r}") from exc
