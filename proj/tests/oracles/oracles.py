"""Reference values frozen into the C++ tests, computed with mpmath at 30 digits."""
import mpmath as mp
import numpy as np

mp.mp.dps = 30


def zeta(xi, h):
    return (mp.exp(1j * h * xi) - 1) / h


def show(name, v):
    if isinstance(v, mp.mpc):
        print(f"{name} = {mp.nstr(v.real, 20)} {mp.nstr(v.imag, 20)}i")
    else:
        print(f"{name} = {mp.nstr(v, 20)}")


show("zeta(1, 0.1)", zeta(mp.mpf(1), mp.mpf("0.1")))

# two unit masses at (0,0) and (h,0), h = 0.5
h = mp.mpf("0.5")
for x1 in (mp.mpf("1.3"), mp.mpf("-3.7")):
    show(f"two_mass({x1})", h**2 * (1 + mp.exp(1j * h * x1)))


def norm2d_const(s, h):
    edge = mp.pi / h
    f = lambda a, b: (1 + abs(zeta(a, h) ** 2 + zeta(b, h) ** 2)) ** s
    pts = [-edge, -edge / 2, 0, edge / 2, edge]
    return mp.sqrt(mp.quad(f, pts, pts))


mp.mp.dps = 15
for s in (mp.mpf("0.5"), mp.mpf(-1), mp.mpf("1.5")):
    show(f"norm2d_one(h=1, s={s})", norm2d_const(s, mp.mpf(1)))
mp.mp.dps = 30

for hv, s in ((mp.mpf("0.5"), mp.mpf(-1)), (mp.mpf(1), mp.mpf("0.75"))):
    edge = mp.pi / hv
    show(f"norm1d_one(h={hv}, s={s})",
         mp.sqrt(mp.quad(lambda x: (1 + abs(zeta(x, hv)) ** 2) ** s, [-edge, 0, edge])))

# class constants of zeta_1 on the 64-node midpoint grid, h = 1, alpha = 1
N = 64
nodes = [-mp.pi + (i + mp.mpf(1) / 2) * 2 * mp.pi / N for i in range(N)]
ratios = [abs(zeta(a, 1)) / mp.sqrt(1 + abs(zeta(a, 1) ** 2 + zeta(b, 1) ** 2)) for a in nodes for b in nodes]
show("class_zeta1 c1", min(ratios))
show("class_zeta1 c2", max(ratios))

# tube values
show("geometric tube", (1 - mp.mpf("0.5") * mp.exp(-1)) ** 2)
z1 = mp.pi / 2 + 0.5j
z2 = -mp.pi / 2 + 0.5j
show("zeta-shift tube", 5 + (mp.exp(1j * z1) - 1) + (mp.exp(1j * z2) - 1))

# zeta power gaps
xi, hv = mp.mpf(1), mp.mpf("0.1")
show("gap k=1", abs(1j * xi - zeta(xi, hv)))
show("bound k=1", mp.e**mp.pi * hv * xi**2)
hv = mp.mpf("0.25")
xi = mp.pi / hv
show("gap k=2 edge", abs((1j * xi) ** 2 - zeta(xi, hv) ** 2))
show("closed k=2 edge", (mp.pi**2 - 4) / hv**2)
show("bound k=2 edge", 2 * mp.e ** (2 * mp.pi) * hv * xi**3)

# arctan kernels
for lam in (mp.mpf(10), mp.mpf(20)):
    show(f"2 atan({lam})", 2 * mp.atan(lam))
for x1 in (mp.mpf(0), mp.mpf("1.5")):
    a = mp.sqrt(1 + x1**2)
    show(f"R_full_index4({x1})", mp.quad(lambda t: 1 / (1 + x1**2 + t**2) ** 2, [-mp.inf, mp.inf]))
    show(f"  closed", mp.pi / (2 * a**3))
    lam = mp.mpf(8)
    show(f"R_trunc_index4({x1}, 8)", mp.quad(lambda t: 1 / (1 + x1**2 + t**2) ** 2, [-lam, lam]))
    show(f"  closed", lam / (a**2 * (a**2 + lam**2)) + mp.atan(lam / a) / a**3)
hb = mp.mpf(2)
show("tail 2(pi/2 - atan(pi hbar)) hbar=2", 2 * (mp.pi / 2 - mp.atan(mp.pi * hb)))

# noisy rate regression
rng = np.random.default_rng(20240611)
hs = np.array([1, 0.5, 0.25, 0.125, 0.0625])
noise = 1 + 0.05 * rng.uniform(-1, 1, hs.size)
norms = 3.0 * hs**1.25 * noise
print("noise =", ", ".join(repr(float(v)) for v in noise))
print("slope =", repr(float(np.polyfit(np.log(hs), np.log(norms), 1)[0])))
