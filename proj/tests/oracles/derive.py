"""Reference values frozen into the unit tests.

Each quantity is computed here by a route that shares no code or algebra
with the C++ implementation: coupling densities by a change of variables
integrated over the orientation, the variance from the factorised moment
E[A(u)^2] E[r^-6], hypergeometric values by mpmath.
"""
import mpmath as mp

mp.mp.dps = 30
a = 27 * mp.sqrt(3) / (8 * mp.pi)


def diameter(n):
    return 2 * mp.cbrt(3 * n / (4 * mp.pi))


def pair_pdf(r, n, rb):
    d = diameter(n)
    s = r / d
    chi = 1 - (8 * (rb / d) ** 3 - 9 * (rb / d) ** 4 + 2 * (rb / d) ** 6)
    if r <= rb or r > d:
        return mp.mpf(0)
    return 12 * s**2 * (2 - 3 * s + s**3) / (chi * d)


def coupling_pdf(h, n, rb):
    # h = a (u^2 - 1/3) / r^3 with u uniform on [0, 1]; for fixed u,
    # r = (a (u^2 - 1/3) / h)^(1/3) and |dr/dh| = r / (3 |h|).
    def f(u):
        q = a * (u * u - mp.mpf(1) / 3) / h
        if q <= 0:
            return mp.mpf(0)
        r = mp.cbrt(q)
        return pair_pdf(r, n, rb) * r / (3 * abs(h))

    d = diameter(n)
    pts = [0, 1 / mp.sqrt(3), 1]
    # the integrand switches on and off where r crosses rb or d
    for lim in (rb, d):
        if lim > 0:
            for sign in (1, -1):
                v = lim**3 * h / a + mp.mpf(1) / 3
                if 0 < v < 1:
                    pts.append(mp.sqrt(v))
    pts = sorted(set(pts))
    return mp.quad(f, pts)


def variance(n, rb):
    d = diameter(n)
    er6 = mp.quad(lambda r: r**-6 * pair_pdf(r, n, rb), [rb, d])
    return a**2 * mp.mpf(4) / 45 * er6


if __name__ == "__main__":
    print("cloud_radius(1000) =", mp.cbrt(3000 / (4 * mp.pi)))
    for n, rb, hs in [(1000, 0.5, [-0.3, 0.01, 0.5, 1.2, 3.0]),
                      (10000, 0.75, [-1.0, -0.02, 0.004, 0.8, 2.5]),
                      (10000, 0.0, [-0.5, -0.001, 0.002, 0.3, 40.0])]:
        for h in hs:
            print(f"coupling_pdf n={n} rb={rb} h={h}: {mp.nstr(coupling_pdf(mp.mpf(h), n, mp.mpf(rb)), 17)}")
    for n, rb in [(1000, 0.5), (10000, 0.75), (1000, 0.25)]:
        print(f"variance n={n} rb={rb}: {mp.nstr(variance(n, mp.mpf(rb)), 17)}")
    for x in [-2, -1.5, -0.95, -0.5, 0.3, 0.5, 0.95, 0.999]:
        fo = mp.hyp2f1(-mp.mpf(1) / 6, 1, mp.mpf(1) / 3, x)
        fi = mp.hyp2f1(-mp.mpf(2) / 3, mp.mpf(1) / 2, mp.mpf(1) / 3, x)
        print(f"hyp2f1 x={x}: outer={mp.nstr(fo, 20)} inner={mp.nstr(fi, 20)}")
