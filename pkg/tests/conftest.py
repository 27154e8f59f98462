"""Shared fixtures: the worked weight-(1,1,4,1,0) example in index form.

Mark letters of the pictorial form map to indices bottom-up per column:
column 1 has a=1, column 2 has b=1, column 3 has f,e,d,c = 1,2,3,4, column 4
has g=1, column 5 is empty.  The expected tree-pair was nested by hand from
the bracket data and acts as an independent cross-check on two_tau.
"""

import pytest

from twoassoc.twobracketing import TwoBracketing, make_bracket

N11410 = (1, 1, 4, 1, 0)

SPANS = [(1, 1), (2, 2), (3, 3), (4, 4), (5, 5), (1, 2), (3, 5), (1, 5)]

MARK_A = make_bracket(1, 1, [(1, 1)])
MARK_B = make_bracket(2, 2, [(1, 1)])
MARK_F = make_bracket(3, 3, [(1, 1)])
MARK_E = make_bracket(3, 3, [(2, 2)])
MARK_D = make_bracket(3, 3, [(3, 3)])
MARK_C = make_bracket(3, 3, [(4, 4)])
MARK_G = make_bracket(4, 4, [(1, 1)])

W12_A = make_bracket(1, 2, [(1, 1), None])
W12_B = make_bracket(1, 2, [None, (1, 1)])
W12_AB = make_bracket(1, 2, [(1, 1), (1, 1)])

W345_CG = make_bracket(3, 5, [(4, 4), (1, 1), None])
W345_D = make_bracket(3, 5, [(3, 3), None, None])
W345_FE = make_bracket(3, 5, [(1, 2), None, None])

ROOT = make_bracket(1, 5, [(1, 1), (1, 1), (1, 4), (1, 1), None])
FULL_X = make_bracket(1, 5, [None, None, (1, 3), None, None])
FULL_Y = make_bracket(1, 5, [(1, 1), (1, 1), (4, 4), (1, 1), None])

BRACKETS2 = [
    MARK_A, MARK_B, MARK_F, MARK_E, MARK_D, MARK_C, MARK_G,
    W12_A, W12_B, W12_AB,
    W345_CG, W345_D, W345_FE,
    ROOT, FULL_X, FULL_Y,
]

ORDERS = {
    (3, 3): {(MARK_F, MARK_E), (MARK_E, MARK_D), (MARK_D, MARK_C)},
    (1, 2): {(W12_A, W12_B)},
    (3, 5): {(W345_FE, W345_D), (W345_D, W345_CG)},
    (1, 5): {(FULL_X, FULL_Y)},
}


def worked_bracketing():
    return TwoBracketing(N11410, SPANS, BRACKETS2, ORDERS)


# The same element as a bubble tree, nested by hand from the brackets.
FE_DISK = (((), ()), (), ())
D_DISK = (((),), (), ())
X_DISK = ((), (FE_DISK, D_DISK))
A0_DISK = (((),), ())
B0_DISK = ((), ((),))
AB_DISK = ((A0_DISK, B0_DISK),)
CG_DISK = (((),), ((),), ())
Y_DISK = ((AB_DISK,), (CG_DISK,))
WORKED_BUBBLE = ((X_DISK, Y_DISK),)
WORKED_SEAM = (((), ()), ((), (), ()))


@pytest.fixture
def worked():
    return worked_bracketing()
