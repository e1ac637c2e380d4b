"""Reference value for the Slobodeckij double integral of a P1 hat on [0,1].

The hat sits on the 4-segment uniform partition with peak at x = 0.5. The inner
integral is split at y = x and at the partition nodes, so the integrand is
smooth on each piece and tanh-sinh quadrature converges quickly.
"""
import mpmath as mp

mp.mp.dps = 30
nodes = [mp.mpf(0), mp.mpf("0.25"), mp.mpf("0.5"), mp.mpf("0.75"), mp.mpf(1)]


def hat(x):
    if x <= 0.25 or x >= 0.75:
        return mp.mpf(0)
    return 1 - abs(x - mp.mpf("0.5")) / mp.mpf("0.25")


def inner(x):
    pts = sorted(set(nodes + [x]))
    f = lambda y: ((hat(x) - hat(y)) / (x - y)) ** 2 if y != x else mp.mpf(0)
    return mp.quad(f, pts)


semi = mp.quad(inner, nodes)
l2 = mp.mpf(1) / 6
print("seminorm", mp.nstr(semi, 20))
print("full", mp.nstr(semi + l2, 20))
