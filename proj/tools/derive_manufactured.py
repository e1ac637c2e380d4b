"""Symbolic derivation of the trigonometric manufactured case.

Prints forcings, boundary data and interface defects at fixed sample points
for the parameter set used in tests/verification_test.cpp.
"""
import sympy as sp

x, y, t = sp.symbols("x y t", real=True)
rho_f, nu_f, rho_p, nu_p, lam, alpha, s0, kappa, beta = (
    sp.Rational(13, 10), sp.Rational(7, 10), sp.Rational(9, 10), sp.Rational(6, 5),
    sp.Rational(17, 10), sp.Rational(4, 5), sp.Rational(1, 2), sp.Rational(3, 10), sp.Rational(2, 1))
pi = sp.pi
g = sp.exp(-t)

u = sp.Matrix([pi * sp.sin(pi * x) ** 2 * sp.cos(pi * y), -pi * sp.sin(2 * pi * x) * sp.sin(pi * y)]) * g
pf = g * sp.cos(pi * x) * sp.cos(pi * y)
eta = sp.Matrix([sp.sin(pi * x) * sp.cos(pi * y), sp.sin(pi * x) * sp.sin(pi * y)]) * g
pp = g * sp.sin(pi * x) * sp.cos(pi * y)

X = [x, y]


def grad(v):
    return sp.Matrix(2, 2, lambda i, j: sp.diff(v[i], X[j]))


def div_tensor(T):
    return sp.Matrix([sp.diff(T[i, 0], x) + sp.diff(T[i, 1], y) for i in range(2)])


I = sp.eye(2)
Du = (grad(u) + grad(u).T) / 2
De = (grad(eta) + grad(eta).T) / 2
div_eta = sp.diff(eta[0], x) + sp.diff(eta[1], y)
sigma_f = 2 * nu_f * Du - pf * I
sigma_p = 2 * nu_p * De + lam * div_eta * I - alpha * pp * I

f_f = rho_f * sp.diff(u, t) - div_tensor(2 * nu_f * Du) + sp.Matrix([sp.diff(pf, x), sp.diff(pf, y)])
f_eta = rho_p * sp.diff(eta, t, 2) - div_tensor(2 * nu_p * De) - lam * sp.Matrix([sp.diff(div_eta, x), sp.diff(div_eta, y)]) \
    + alpha * sp.Matrix([sp.diff(pp, x), sp.diff(pp, y)])
f_p = s0 * sp.diff(pp, t) + alpha * sp.diff(div_eta, t) - kappa * (sp.diff(pp, x, 2) + sp.diff(pp, y, 2))

n_f = sp.Matrix([0, 1])
n_p = -n_f
tau = sp.Matrix([1, 0])
eta_t = sp.diff(eta, t)
g1 = (sigma_f * n_f).dot(n_f)
g2 = (sigma_f * n_f).dot(tau)
lam_p = kappa * sp.Matrix([sp.diff(pp, x), sp.diff(pp, y)]).dot(n_p)
rho1 = u.dot(n_f) + eta_t.dot(n_p) - lam_p
rho2 = g1 + pp
rho3 = g2 + beta * (u - eta_t).dot(tau)
jump = sigma_f * n_f + sigma_p * n_p

quantities = {
    "fluid_force": f_f, "solid_force": f_eta, "pressure_source": f_p,
    "fluid_traction": sigma_f * sp.Matrix([0, -1]), "solid_traction": sigma_p * sp.Matrix([0, 1]),
    "pressure_flux": kappa * sp.diff(pp, y), "stress_jump": jump, "mass_defect": rho1,
    "pressure_defect": rho2, "slip_defect": rho3 / beta,
}

samples = [(sp.Rational(3, 10), sp.Rational(7, 10), sp.Rational(1, 4)),
           (sp.Rational(81, 100), sp.Rational(13, 10), sp.Rational(3, 5)),
           (sp.Rational(1, 2), sp.Rational(1, 1), sp.Rational(1, 10))]

for name, expr in quantities.items():
    for (a, b, c) in samples:
        val = expr.subs({x: a, y: b, t: c})
        if isinstance(val, sp.MatrixBase):
            vals = [sp.N(v, 20) for v in val]
        else:
            vals = [sp.N(val, 20)]
        print(name, float(a), float(b), float(c), " ".join(f"{float(v):.17g}" for v in vals))
