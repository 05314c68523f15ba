"""Transcribed data: plumbings, fillings, fibrations, embeddings, chamber vectors.

Vectors are copied as printed.  Where a printed vector fails its own
checks the printed version is kept under a ``*_PRINTED`` name and the
version rebuilt from the accompanying construction is used instead.
"""

from __future__ import annotations

from itertools import combinations

from . import mcg
from .handlebody import Handlebody
from .homblowup import BlowupClass, SphereConfiguration, e_class, fiber, parse_class
from .plumbing import s_family, star

# ---------------------------------------------------------------------------
# Plumbings
# ---------------------------------------------------------------------------

S2 = s_family(2)
Q = star(-5, [-2], [-2, -2], [-2, -3], [-3], name="Q", arm_holes=[(3,), (6,), (4, 5), (1, 2)])
U = star(-5, [-2, -2, -3], [-2, -3], [-2, -3], [-3], name="U")
K_GRAPH = star(-6, [-2], [-2], [-2], [-2], name="K", arm_holes=[(1,), (2,), (4,), (5,)], center_holes=(3,))

PLUMBINGS = {"S1": s_family(1), "S2": S2, "S3": s_family(3), "S4": s_family(4), "Q": Q, "U": U, "K": K_GRAPH}

# Printed monodromy words of the plumbings' boundary open books.
PRINTED_GAYMARK = {
    "S1": "D123 D1 D2 D3",
    "S2": "D1234 D1^2 D2^2 D3^2 D4^2",
    "S3": "D12345 D1^3 D2^3 D3^3 D4^3 D5^3",
    "S4": "D123456 D1^4 D2^4 D3^4 D4^4 D5^4 D6^4",
    "Q": mcg.PRINTED["QR"][1],
    "U": mcg.PRINTED["UV"][1],
    "K": mcg.PRINTED["KL"][1],
}
GAYMARK_OUTER = {"K": "last"}

# ---------------------------------------------------------------------------
# Fillings
# ---------------------------------------------------------------------------


def t_filling(i: int) -> Handlebody:
    n = i + 2
    return Handlebody.from_subsets(n, list(combinations(range(1, n + 1), 2)), name=f"T{i}")


def _from_rhs(name: str, label: str) -> Handlebody:
    return Handlebody.from_word(mcg.printed_relation(name)[1], name=label)


FILLINGS = {
    "T1": t_filling(1),
    "T2": t_filling(2),
    "R": _from_rhs("QR", "R"),
    "V": _from_rhs("UV", "V"),
    "L": _from_rhs("KL", "L"),
    "N": _from_rhs("MN", "N"),
    "P": _from_rhs("OP", "P"),
}

# H_2 bases printed for the fillings, as coefficient vectors over the handles.
FILLING_CYCLES = {
    # handles of T2 in the order x12 x13 x14 x23 x24 x34
    "T2": [[1, -1, 0, 0, -1, 1], [-1, 0, 1, 1, 0, -1]],
    "R": [[1, 1, -1, -1, 1, 1, 0, -2], [1, 1, -3, -3, 5, 0, 3, -5]],
    "V": [[-2, -2, 1, 1, 0, 0, -3, 1, 1, 3], [0, 0, -3, -3, 3, 3, -1, 2, 2, -2]],
    # handles of L: x123 x14 x15 x24 x25 x345
    "L": [[0, 1, -1, -1, 1, 0]],
}
FILLING_GRAMS = {
    "T2": [[-4, 2], [2, -4]],
    "R": [[-10, -23], [-23, -79]],
    "V": [[-30, 5], [5, -49]],
    "L": [[-4]],
}

# ---------------------------------------------------------------------------
# Elliptic fibrations on E(1)
# ---------------------------------------------------------------------------


def _c(text: str, N: int = 9) -> BlowupClass:
    return parse_class(text, N)


# one I_3, one I_0^*, three fishtails; S_4 has multiplicity 2
FIBRATION_1 = {
    "I3": [(_c("h-e1-e8-e9"), 1), (_c("h-e2-e4-e6"), 1), (_c("h-e3-e5-e7"), 1)],
    "I0*": [
        (_c("h-e1-e2-e3"), 1),
        (_c("h-e1-e4-e5"), 1),
        (_c("h-e1-e6-e7"), 1),
        (_c("e1-e8"), 2),
        (_c("e8-e9"), 1),
    ],
}

_F2 = {
    "C1": "2h-e1-e2-e3-e4-e7-e8",
    "L1": "h-e5-e6-e9",
    "C2": "2h-e1-e2-e3-e4-e5-e6",
    "L2": "h-e7-e8-e9",
    "X3": "h-e3-e6-e8",
    "Y3": "h-e3-e5-e7",
    "Z3": "h-e1-e2-e9",
    "E3": "e3-e4",
    "X4": "h-e1-e6-e7",
    "Y4": "h-e1-e5-e8",
    "Z4": "h-e3-e4-e9",
    "E4": "e1-e2",
}
FIBRATION_2_CLASSES = {k: _c(v) for k, v in _F2.items()}
FIBRATION_2 = {
    "I2a": [(FIBRATION_2_CLASSES[k], 1) for k in ("C1", "L1")],
    "I2b": [(FIBRATION_2_CLASSES[k], 1) for k in ("C2", "L2")],
    "I4a": [(FIBRATION_2_CLASSES[k], 1) for k in ("X3", "Y3", "Z3", "E3")],
    "I4b": [(FIBRATION_2_CLASSES[k], 1) for k in ("X4", "Y4", "Z4", "E4")],
}

_F3 = {
    "C1": "e1-e6",
    "C2": "h-e1-e4-e9",
    "C3": "h-e2-e5-e8",
    "C4": "e2-e7",
    "C5": "h-e1-e2-e3",
    "D1": "e4-e9",
    "D2": "h-e3-e4-e5",
    "D3": "e5-e8",
    "D4": "h-e1-e5-e6",
    "D5": "h-e2-e4-e7",
}
FIBRATION_3_CLASSES = {k: _c(v) for k, v in _F3.items()}
FIBRATION_3 = {
    "I5a": [(FIBRATION_3_CLASSES[f"C{i}"], 1) for i in range(1, 6)],
    "I5b": [(FIBRATION_3_CLASSES[f"D{i}"], 1) for i in range(1, 6)],
}

ALL_FIBERS = {
    **{f"fibration1.{k}": v for k, v in FIBRATION_1.items()},
    **{f"fibration2.{k}": v for k, v in FIBRATION_2.items()},
    **{f"fibration3.{k}": v for k, v in FIBRATION_3.items()},
}

# ---------------------------------------------------------------------------
# Embedded configurations
# ---------------------------------------------------------------------------


def _cls(N: int, *texts: str) -> list[BlowupClass]:
    return [parse_class(t, N) for t in texts]


# S_2 in CP^2 # 11
S2_CLASSES = [(2 * fiber(11)) + parse_class("e1-2e10-2e11", 11)] + _cls(
    11, "h-e1-e2-e3", "h-e1-e4-e5", "h-e1-e6-e7", "h-e1-e8-e9"
)
S2_CONFIG = SphereConfiguration(tuple(S2_CLASSES), S2, ("u0", "u1", "u2", "u3", "u4"))

# Q in CP^2 # 12; vertex order: centre, u11, u21, u22, u31, u32, u41
_Q_ARMS = _cls(
    12,
    "2h-e1-e2-e3-e4-e5-e6",
    "h-e1-e2-e9",
    "h-e3-e5-e7",
    "h-e1-e6-e7",
    "h-e3-e4-e9-e10",
    "h-e1-e5-e8-e10",
)
Q_U0_PRINTED = parse_class("6h-2e1-e2-2e3-2e4-2e5-2e6-2e7-2e8-2e9-2e11-2e12", 12)
# centre = section e2 + fishtails f-2e11, f-2e12 + the I_4 component e1-e2
Q_U0 = (
    e_class(12, 2)
    + (fiber(12) - 2 * e_class(12, 11))
    + (fiber(12) - 2 * e_class(12, 12))
    + FIBRATION_2_CLASSES["E4"].extend(12)
)
Q_LABELS = ("u0", "u11", "u21", "u22", "u31", "u32", "u41")
Q_CONFIG = SphereConfiguration(tuple([Q_U0] + _Q_ARMS), Q, Q_LABELS)
Q_CONFIG_PRINTED = SphereConfiguration(tuple([Q_U0_PRINTED] + _Q_ARMS), Q, Q_LABELS)

# U in CP^2 # 13, built from the I_5 classes as printed
_C = {k: v.extend(13) for k, v in FIBRATION_3_CLASSES.items()}
_e = lambda i: e_class(13, i)  # noqa: E731
U_CLASSES = [
    2 * fiber(13) - 2 * _e(12) - 2 * _e(13) + _C["C2"] + _C["D1"] + _e(9),
    _C["D2"],
    _C["D3"],
    _C["D4"] - _e(11),
    _C["C3"],
    _C["C4"] - _e(10),
    _C["C1"],
    _C["C5"] - _e(10),
    _C["D5"] - _e(11),
]
U_LABELS = ("u0", "u11", "u12", "u13", "u21", "u22", "u31", "u32", "u41")
U_CONFIG = SphereConfiguration(tuple(U_CLASSES), U, U_LABELS)

# K in CP^2 # 12
K_CLASSES = [(2 * fiber(12)) + parse_class("e1-2e10-2e11-e12", 12)] + _cls(
    12, "h-e1-e2-e3", "h-e1-e4-e5", "h-e1-e6-e7", "h-e1-e8-e9"
)
K_CONFIG = SphereConfiguration(tuple(K_CLASSES), K_GRAPH, ("C0", "C1", "C2", "C3", "C4"))

# S_2 in E(1)_K # (-CP^2): homology of CP^2 # 10.  The class called K in that
# construction is -3h + e1..e9 - e10; adjunction for these spheres holds with
# its negative F + e10.
KNOT_K = parse_class("-3h+e1+e2+e3+e4+e5+e6+e7+e8+e9-e10", 10)
KNOT_CLASSES = _cls(10, "e1-2e10", "2h-e1-e2-e3-e4-e5-e6", "h-e1-e2-e9", "h-e1-e6-e7", "h-e1-e5-e8")
KNOT_CONFIG = SphereConfiguration(
    tuple(KNOT_CLASSES), S2, ("u0", "u1", "u2", "u3", "u4"), canonical=-KNOT_K
)
KNOT_CHI_SIGMA = (13, -9)

CONFIGURATIONS = {
    "S2": S2_CONFIG,
    "Q": Q_CONFIG,
    "Q-printed": Q_CONFIG_PRINTED,
    "U": U_CONFIG,
    "K": K_CONFIG,
    "S2-knot": KNOT_CONFIG,
}

# ---------------------------------------------------------------------------
# Chamber vectors: (vector, configuration key, required sign of W.K, K)
# ---------------------------------------------------------------------------

V_VECTOR = parse_class("86h-36e1-25e2-25e3-25e4-25e5-25e6-25e7-19e8-31e9-20e10-20e11", 11)
R_VECTOR = parse_class(
    "533h-188e1-186e2-192e3-126e4-185e5-189e6-156e7-104e8-159e9-56e10-0e11-151e12", 12
)
R_PRIME_VECTOR = parse_class(
    "5656h-1728e1-1846e2-1836e3-1915e4-1905e5-1728e6-1600e7"
    "-1905e8-1890e9-246e10-295e11-393e12-1241e13",
    13,
)
H_VECTOR = parse_class("50h-32e1-14e2-12e3-21e4-5e5-15e6-3e7-12e8-4e9-16e10", 10)

CHAMBER_VECTORS = {
    "V": (V_VECTOR, "S2", 1, None),
    "R": (R_VECTOR, "Q", 1, None),
    "R-printed-config": (R_VECTOR, "Q-printed", 1, None),
    "R-prime": (R_PRIME_VECTOR, "U", 1, None),
    "H": (H_VECTOR, "S2-knot", -1, KNOT_K),
}

# ---------------------------------------------------------------------------
# Surgery arithmetic: (ambient N or (chi, sigma), plumbing, filling)
# ---------------------------------------------------------------------------

SURGERIES = {
    "S2->T2 in CP2#11": ((14, -10), "S2", "T2"),
    "Q->R in CP2#12": ((15, -11), "Q", "R"),
    "U->V in CP2#13": ((16, -12), "U", "V"),
    "K->L in CP2#12": ((15, -11), "K", "L"),
    "S2->T2 in E(1)_K#CP2bar": (KNOT_CHI_SIGMA, "S2", "T2"),
}

# ---------------------------------------------------------------------------
# Basic-class search data
# ---------------------------------------------------------------------------

SEARCH_A = _cls(
    11,
    "h-e3-e5-e7-e9+e11",
    "-3h+2e1+e3+e5+e7+e9+2e10+2e11",
    "e2-e3",
    "e4-e5",
    "e6-e7",
    "e10-e11",
    "e8-e9",
)
T2_GRAM = [[-4, 2], [2, -4]]

PHI_PRINTED = [
    (1, 0, 0, 0, 0), (-3, 2, 2, 2, 2), (-1, 2, 0, 0, 2), (-3, 0, 2, 2, 0),
    (1, 2, 0, 2, 0), (3, 0, 0, 0, 0), (-1, 2, 2, 0, 0), (-3, 2, 0, 2, 0),
    (-1, 0, 2, 0, 2), (-3, 0, 0, 2, 2), (1, 0, 2, 2, 0), (1, 0, 0, 2, 2),
    (-1, 0, 2, 2, 0), (-3, 0, 2, 0, 2), (-3, 0, 0, 0, 0), (1, 2, 0, 0, 2),
    (5, 0, 0, 0, 0), (-3, 2, 0, 0, 2), (-1, 0, 0, 2, 2), (1, 0, 2, 0, 2),
    (-1, 2, 0, 2, 0), (-3, 2, 2, 0, 0), (1, 2, 2, 0, 0), (-1, 0, 0, 0, 0),
]  # fmt: skip

S2_D_MOD2_PRINTED = ("-2/3", "-1/3", "-1/4", "-1/12", "0", "1/4", "2/3", "-11/12", "1")
T2_D_MOD2_PRINTED = ("-1/3", "0", "2/3", "1")
STAGE_COUNTS_PRINTED = (243000, 25040, 600960, 219064, 122212, 2)
