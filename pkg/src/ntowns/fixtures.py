"""Reference optimal costs for n = 1..80, used for regression checks."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class FixtureRow:
    n: int
    town_cost: int
    town_multiplicity: int
    city_cost3: int  # 3 * c_city
    city_multiplicity: int
    e1: int
    e2_times3: int
    e3: int


# n, c_town, town mult, 3*c_city, city mult, E1, 3*E2, E3
_ROWS = [
    (1, 0, 1, 1, 1, 0, 0, 1),
    (2, 1, 1, 6, 1, 0, 0, 1),
    (3, 4, 2, 17, 1, 0, 1, 1),
    (4, 8, 1, 32, 1, 0, -1, 1),
    (5, 16, 2, 59, 2, 1, 1, 1),
    (6, 25, 1, 90, 1, 0, -1, 1),
    (7, 38, 1, 132, 1, 0, 0, 1),
    (8, 54, 2, 184, 2, 0, 0, 1),
    (9, 72, 1, 243, 1, -1, -3, 2),
    (10, 96, 1, 319, 1, 0, 0, 1),
    (11, 124, 4, 407, 2, 2, 3, 0),
    (12, 152, 1, 496, 1, -1, -4, 1),
    (13, 188, 1, 609, 1, 0, -1, 1),
    (14, 227, 1, 732, 1, 0, -1, 1),
    (15, 272, 2, 872, 1, 1, 3, 1),
    (16, 318, 1, 1016, 1, -1, -4, 1),
    (17, 374, 2, 1189, 1, 1, 3, 0),
    (18, 433, 2, 1372, 1, 2, 5, 0),
    (19, 496, 2, 1567, 1, 2, 4, 0),
    (20, 563, 1, 1775, 1, 0, 0, 1),
    (21, 632, 1, 1989, 1, -5, -15, 1),
    (22, 716, 1, 2248, 1, 0, -1, 1),
    (23, 804, 2, 2518, 1, 2, 6, 1),
    (24, 895, 1, 2799, 1, 2, 7, 2),
    (25, 992, 1, 3097, 1, 2, 6, 1),
    (26, 1091, 1, 3402, 1, -2, -5, 2),
    (27, 1204, 1, 3747, 1, 2, 4, 1),
    (28, 1318, 1, 4096, 1, 0, -1, 0),
    (29, 1442, 1, 4476, 1, 2, 5, 1),
    (30, 1570, 1, 4868, 1, 1, 4, 1),
    (31, 1704, 1, 5279, 1, 0, 1, 2),
    (32, 1840, 1, 5696, 1, -6, -16, 3),
    (33, 1996, 1, 6171, 1, 1, 4, 2),
    (34, 2153, 1, 6650, 1, 3, 8, 1),
    (35, 2318, 1, 7152, 1, 5, 12, 0),
    (36, 2486, 1, 7664, 1, 3, 6, -1),
    (37, 2656, 1, 8183, 1, -5, -16, -1),
    (38, 2847, 1, 8765, 1, 1, 3, 0),
    (39, 3040, 1, 9353, 1, 2, 5, 0),
    (40, 3241, 1, 9966, 1, 3, 9, 1),
    (41, 3446, 1, 10591, 1, 1, 2, 1),
    (42, 3662, 1, 11247, 1, 1, 3, 0),
    (43, 3886, 1, 11928, 1, 2, 5, 0),
    (44, 4112, 1, 12616, 1, -3, -10, 0),
    (45, 4360, 2, 13370, 1, 6, 17, 1),
    (46, 4612, 2, 14136, 2, 10, 31, 1),
    (47, 4868, 2, 14911, 2, 11, 29, -2),
    (48, 5128, 1, 15702, 1, 7, 18, -1),
    (49, 5398, 1, 16522, 1, 4, 11, -1),
    (50, 5675, 1, 17364, 1, 1, 0, 0),
    (51, 5960, 1, 18229, 1, -4, -13, 0),
    (52, 6248, 1, 19104, 1, -14, -43, 1),
    (53, 6568, 1, 20075, 1, -1, -4, 1),
    (54, 6890, 1, 21052, 1, 5, 15, 2),
    (55, 7222, 2, 22057, 1, 12, 35, 0),
    (56, 7556, 2, 23070, 1, 13, 36, 0),
    (57, 7896, 1, 24101, 1, 10, 28, 0),
    (58, 8243, 1, 25154, 1, 5, 14, 1),
    (59, 8604, 1, 26248, 1, 4, 13, 1),
    (60, 8968, 1, 27352, 1, -2, -6, 2),
    (61, 9354, 1, 28519, 1, 3, 9, 0),
    (62, 9749, 2, 29714, 2, 9, 24, -1),
    (63, 10146, 1, 30916, 1, 7, 17, -2),
    (64, 10556, 1, 32158, 1, 8, 21, -1),
    (65, 10972, 1, 33419, 1, 5, 15, 0),
    (66, 11400, 1, 34715, 1, 5, 14, 1),
    (67, 11836, 2, 36035, 1, 3, 7, 1),
    (68, 12280, 1, 37380, 1, -2, -4, 2),
    (69, 12728, 1, 38737, 1, -12, -34, 3),
    (70, 13209, 1, 40190, 1, 1, 2, 1),
    (71, 13700, 3, 41673, 1, 13, 37, -1),
    (72, 14193, 1, 43164, 2, 17, 49, -1),
    (73, 14690, 1, 44664, 1, 15, 40, -4),
    (74, 15195, 1, 46192, 1, 11, 27, -4),
    (75, 15712, 1, 47755, 1, 8, 17, -4),
    (76, 16232, 1, 49328, 1, -3, -14, -4),
    (77, 16780, 1, 50985, 1, 4, 7, -3),
    (78, 17335, 1, 52664, 1, 7, 18, -2),
    (79, 17904, 2, 54384, 1, 13, 37, -2),
    (80, 18478, 1, 56120, 1, 14, 40, 0),
]

FIXTURES: dict[int, FixtureRow] = {row[0]: FixtureRow(*row) for row in _ROWS}
MAX_FIXTURE_N = max(FIXTURES)


def fixture(n: int) -> FixtureRow:
    try:
        return FIXTURES[n]
    except KeyError:
        raise KeyError(f"no fixture row for n={n} (have 1..{MAX_FIXTURE_N})") from None
