"""
Reference values for the bundled categories

Coordinate names for A3 with both arrows pointing right (1 -> 2 -> 3).
"""

ALPHA = "Ext([2,2],[3,3])"
BETA = "Ext([1,1],[2,2])"
GAMMA = "Ext([1,2],[2,3])"
DELTA = "Ext([1,2],[3,3])"
EPSILON = "Ext([1,1],[2,3])"

A3_COORDINATES = [BETA, EPSILON, GAMMA, DELTA, ALPHA]
A3_SOCLE = {ALPHA, BETA, GAMMA}

A3_CLOSED_SUPPORTS = {
    frozenset(),
    frozenset({ALPHA}),
    frozenset({BETA}),
    frozenset({GAMMA}),
    frozenset({ALPHA, BETA}),
    frozenset({ALPHA, GAMMA, DELTA}),
    frozenset({BETA, GAMMA, EPSILON}),
    frozenset({ALPHA, BETA, GAMMA, DELTA, EPSILON}),
}

A3_DIMENSIONS = {"0": 1, "1": 3, "2": 3, "3": 3, "4": 2, "5": 1}
A3_NODES = 13
A3_HASSE_EDGES = 20
A3_CLOSED = 8

BIMODULE_DIMS = {2: 1, 3: 5, 4: 15, 5: 35}

BUNDLED = {
    "a2.json": (2, "R"),
    "a3_rr.json": (3, "RR"),
    "a3_rl.json": (3, "RL"),
    "a3_lr.json": (3, "LR"),
    "a4_rrr.json": (4, "RRR"),
}
