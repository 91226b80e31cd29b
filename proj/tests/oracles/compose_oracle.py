"""Exact-arithmetic oracle for the two-layer forward model.

Evaluates z = x + y(1-x)^2 + x y^2 (1-x)^2, its partial derivatives and a
few derived quantities with fractions.Fraction, then checks them against the
decimal values frozen in the C++ tests. Run directly or through ctest.
"""

from fractions import Fraction as F
import sys


def compose(x, y):
    return x + y * (1 - x) ** 2 + x * y ** 2 * (1 - x) ** 2


def dz_dx(x, y):
    # Expanded by hand from d/dx of compose.
    return 1 - 2 * (1 - x) * y - 2 * x * (1 - x) * y ** 2 + (1 - x) ** 2 * y ** 2


def dz_dy(x, y):
    return (1 - x) ** 2 + 2 * x * (1 - x) ** 2 * y


def dz_dx_limit(x, y, h=F(1, 10 ** 30)):
    # Symmetric difference quotient on exact rationals; error is O(h^2).
    return (compose(x + h, y) - compose(x - h, y)) / (2 * h)


def dz_dy_limit(x, y, h=F(1, 10 ** 30)):
    return (compose(x, y + h) - compose(x, y - h)) / (2 * h)


FROZEN = {
    "compose(0.5,0.5)": (compose(F(1, 2), F(1, 2)), F("0.65625")),
    "compose(0.2,0.8)": (compose(F(1, 5), F(4, 5)), F("0.79392")),
    "compose(0.4,0.6)": (compose(F(2, 5), F(3, 5)), F("0.66784")),
    "compose(0,0)": (compose(F(0), F(0)), F(0)),
    "compose(1,0.7)": (compose(F(1), F(7, 10)), F(1)),
    "compose(0,0.5)": (compose(F(0), F(1, 2)), F(1, 2)),
    "dz_dx(0,0.5)": (dz_dx(F(0), F(1, 2)), F("0.25")),
    "dz_dx(0.5,0.5)": (dz_dx(F(1, 2), F(1, 2)), F("0.4375")),
    "dz_dy(0.5,0.5)": (dz_dy(F(1, 2), F(1, 2)), F("0.375")),
    # Single-pixel gradient at x = y = 0.5 against z' = 0: 2 z dz/d{x,y}.
    "gx(0.5,0.5;0)": (2 * compose(F(1, 2), F(1, 2)) * dz_dx(F(1, 2), F(1, 2)),
                      F("0.57421875")),
    "gy(0.5,0.5;0)": (2 * compose(F(1, 2), F(1, 2)) * dz_dy(F(1, 2), F(1, 2)),
                      F("0.4921875")),
    # Calibration example: x0 = 1, y0 = 0, z' = 0.5.
    "surface(0.5,*)": ((compose(F(1, 2), F(0)) - F(1, 2)) ** 2, F(0)),
    "surface(1,*)": ((compose(F(1), F(0)) - F(1, 2)) ** 2, F("0.25")),
}


def main():
    failures = 0
    for name, (exact, frozen) in FROZEN.items():
        ok = exact == frozen
        failures += not ok
        print(f"{'PASS' if ok else 'FAIL'} {name} = {exact} ({float(exact)!r})")

    # The hand-expanded derivatives must agree with difference quotients.
    for x in (F(0), F(1, 5), F(1, 2), F(9, 10)):
        for y in (F(0), F(3, 10), F(1, 2), F(1)):
            for label, exact, approx in (
                ("dz_dx", dz_dx(x, y), dz_dx_limit(x, y)),
                ("dz_dy", dz_dy(x, y), dz_dy_limit(x, y)),
            ):
                if abs(exact - approx) > F(1, 10 ** 40):
                    failures += 1
                    print(f"FAIL {label}({x},{y}) expansion mismatch")
    print("derivative expansions checked against difference quotients")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
