"""Independent expected-value helpers shared by the test modules.

The general braided expansion below was derived by hand from the cascade
composition (two passes through four points with arbitrary per-point rates
g1..g4, inter-point phases t1..t3, and mirror round trip th) and is kept
separate from the library code it checks.
"""

import math

from gawsim.model import ConnectionPoint, GiantAtomSpec, build_custom


def general_braided_layout(g1, g2, g3, g4, t1, t2, t3, theta, omega=0.0):
    """Layout with points a1, b1, a2, b2 at cumulative phases from theta/2."""
    p1 = theta / 2
    p2, p3, p4 = p1 + t1, p1 + t1 + t2, p1 + t1 + t2 + t3
    return build_custom(
        [
            GiantAtomSpec(0, (ConnectionPoint(0, p1, g1), ConnectionPoint(0, p3, g3)), omega),
            GiantAtomSpec(1, (ConnectionPoint(1, p2, g2), ConnectionPoint(1, p4, g4)), omega),
        ]
    )


def general_braided_expected(g1, g2, g3, g4, t1, t2, t3, th):
    """Hand-expanded coefficients (dwa, dwb, g_ab, G_a, G_b, G_coll)."""
    s, c = math.sin, math.cos
    ga = g1 + g3 + g1 * c(th) + g3 * c(2 * t1 + 2 * t2 + th) + 2 * math.sqrt(g1 * g3) * (
        c(t1 + t2) + c(t1 + t2 + th)
    )
    gb = g2 + g4 + g2 * c(2 * t1 + th) + g4 * c(2 * t1 + 2 * t2 + 2 * t3 + th) + 2 * math.sqrt(
        g2 * g4
    ) * (c(t2 + t3) + c(2 * t1 + t2 + t3 + th))
    gcol = (
        math.sqrt(g1 * g2) * (c(t1) + c(t1 + th))
        + math.sqrt(g2 * g3) * (c(t2) + c(2 * t1 + t2 + th))
        + math.sqrt(g3 * g4) * (c(t3) + c(2 * t1 + 2 * t2 + t3 + th))
        + math.sqrt(g1 * g4) * (c(t1 + t2 + t3) + c(t1 + t2 + t3 + th))
    )
    dwa = (
        math.sqrt(g1 * g3) * (s(t1 + t2) + s(t1 + t2 + th))
        + 0.5 * g1 * s(th)
        + 0.5 * g3 * s(2 * t1 + 2 * t2 + th)
    )
    dwb = (
        math.sqrt(g2 * g4) * (s(t2 + t3) + s(2 * t1 + t2 + t3 + th))
        + 0.5 * g2 * s(2 * t1 + th)
        + 0.5 * g4 * s(2 * t1 + 2 * t2 + 2 * t3 + th)
    )
    gx = 0.5 * (
        math.sqrt(g1 * g2) * (s(t1) + s(t1 + th))
        + math.sqrt(g2 * g3) * (s(t2) + s(2 * t1 + t2 + th))
        + math.sqrt(g3 * g4) * (s(t3) + s(2 * t1 + 2 * t2 + t3 + th))
        + math.sqrt(g1 * g4) * (s(t1 + t2 + t3) + s(t1 + t2 + t3 + th))
    )
    return dwa, dwb, gx, ga, gb, gcol
