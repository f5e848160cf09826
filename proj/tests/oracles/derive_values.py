"""Independent high-precision oracles for frozen test values.

Run with: python3 derive_values.py
Uses mpmath only; shares no code with the C++ implementation.
"""
import mpmath as mp

mp.mp.dps = 40


def npdf(z, mean=0, var=1):
    return mp.exp(-(z - mean) ** 2 / (2 * var)) / mp.sqrt(2 * mp.pi * var)


def ncdf_quad(z):
    # quadrature of the pdf, not erfc
    return mp.mpf(1) / 2 + mp.quad(lambda t: npdf(t), [0, z])


def nquantile_bisect(p):
    lo, hi = mp.mpf(-40), mp.mpf(40)
    for _ in range(400):
        mid = (lo + hi) / 2
        if ncdf_quad(mid) < p:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


print("normal_cdf(1.959963985) =", ncdf_quad(mp.mpf("1.959963985")))
print("normal_quantile(0.975)  =", nquantile_bisect(mp.mpf("0.975")))

# Mills-ratio asymptotic series for the lower tail at z=-37
z = mp.mpf(37)
series = npdf(z) / z * (1 - 1 / z**2 + 3 / z**4 - 15 / z**6 + 105 / z**8)
print("Phi(-37) asymptotic     =", series)

# banana log density at (0,-10): y = (0, -10 + 10) = (0, 0)
print("banana log_gamma(0,-10) =", mp.log(npdf(0, 0, 100)) + mp.log(npdf(0)))
# funnel log density at (0,0): N(0|0,36) N(0|0,exp(0))
print("funnel log_gamma(0,0)   =", mp.log(npdf(0, 0, 36)) + mp.log(npdf(0, 0, 1)))

# leapfrog on harmonic oscillator, grad log pi(x) = -x
eps = mp.mpf("0.1")
x, v = mp.mpf(1), mp.mpf(0)
vh = v + eps / 2 * (-x)
xp = x + eps * vh
vp = vh + eps / 2 * (-xp)
print("leapfrog v_half, x', v' =", vh, xp, vp)

# IRF worked example: 1-D standard normal target, RWMH eps=0.3,
# s=(x=0, v=0.5, u_v=0.3, u_a=0.2), theta=(0.25, 0.5)
eps = mp.mpf("0.3")
x, v, uv, ua = mp.mpf(0), mp.mpf("0.5"), mp.mpf("0.3"), mp.mpf("0.2")
tv, ta = mp.mpf("0.25"), mp.mpf("0.5")
uv = (uv + tv) % 1
ua = (ua + ta) % 1
uv_new = ncdf_quad(v)
vt = nquantile_bisect(uv)
xp, vp = x + eps * vt, -vt
log_joint = lambda a, b: mp.log(npdf(a)) + mp.log(npdf(b))
log_r = log_joint(xp, vp) - log_joint(x, vt)
r = mp.exp(log_r)
print("worked example: v_tilde =", vt, " log r =", log_r)
if ua > r:
    out = (x, vt, uv_new, ua)
    print("worked example: REJECT")
else:
    out = (xp, vp, uv_new, ua / r)
    print("worked example: ACCEPT")
print("worked example output   =", [mp.nstr(o, 20) for o in out])

# per-sample ESS for weights (1,1,2)
w = [1, 1, 2]
print("ess(1,1,2)              =", mp.mpf(sum(w)) ** 2 / (len(w) * sum(a * a for a in w)))
# AR(1) phi=0.9: integrated autocorrelation time (1+phi)/(1-phi)
print("AR(1) ess fraction      =", (1 - mp.mpf("0.9")) / (1 + mp.mpf("0.9")))
# TV between N(0,1) and N(1,1): 2 Phi(1/2) - 1
print("TV shifted normals      =", 2 * ncdf_quad(mp.mpf("0.5")) - 1)

# quantile at the ends of the accuracy range; the inputs are the exact binary64
# values the C++ tests pass (1e-300 and 1 - 1e-15 after rounding)
def nquantile_erfc(p):
    # invert via erfc with findroot; independent of the bisection above
    if p > mp.mpf(1) / 2:
        return -nquantile_erfc(1 - p)
    start = mp.mpf(0) if p > 1e-5 else -mp.sqrt(-2 * mp.log(p))
    return mp.findroot(lambda z: mp.log(mp.erfc(-z / mp.sqrt(2)) / 2) - mp.log(p), start)


for p in [mp.mpf(1e-300), mp.mpf(1e-10), mp.mpf(float(1 - 1e-15))]:
    print("normal_quantile(%s) =" % mp.nstr(p, 17), nquantile_erfc(p))
