"""Independent reference values for the tests: closed forms and alternate
numerical routes that share no code with the package internals.
"""
from __future__ import annotations

import numpy as np
from scipy.integrate import quad


def free_gaussian_exact(x, t):
    """e^{itH_0} applied to e^{-x^2/2}: (1 - 2it)^{-1/2} e^{-x^2/(2(1-2it))}."""
    s = 1.0 - 2j * t
    return s ** -0.5 * np.exp(-x * x / (2.0 * s))


def free_brute_point(x0: float, t: float) -> complex:
    """Direct adaptive quadrature of the free kernel against e^{-y^2/2}."""
    pref = (-4j * np.pi * t) ** -0.5

    def integrand(y, part):
        val = np.exp(-1j * (x0 - y) ** 2 / (4 * t)) * np.exp(-y * y / 2)
        return val.real if part == 0 else val.imag

    re = quad(integrand, -30, 30, args=(0,), limit=800, epsabs=1e-12)[0]
    im = quad(integrand, -30, 30, args=(1,), limit=800, epsabs=1e-12)[0]
    return complex(pref * (re + 1j * im))


def sw_exact_scattering(lam, depth=1.0, a=1.0):
    """Exact alpha, beta for the sharp well V = -depth on [-a, a], by
    propagating f_+ through the two interfaces with a transfer matrix and
    expanding f_- in the two outgoing exponentials on the left."""
    kp = np.sqrt(lam * lam + depth)

    def match(k_out, k_in, xm, c_out):
        v = (c_out[0] * np.exp(1j * k_out * xm)
             + c_out[1] * np.exp(-1j * k_out * xm))
        d = 1j * k_out * (c_out[0] * np.exp(1j * k_out * xm)
                          - c_out[1] * np.exp(-1j * k_out * xm))
        P = (v + d / (1j * k_in)) / (2 * np.exp(1j * k_in * xm))
        Q = (v - d / (1j * k_in)) / (2 * np.exp(-1j * k_in * xm))
        return (P, Q)

    c = (1.0 + 0j, 0.0 + 0j)
    c = match(lam, kp, a, c)
    A, B = match(kp, lam, -a, c)
    M = np.array([[A, np.conj(B)], [B, np.conj(A)]])
    alpha, beta = np.linalg.solve(M, np.array([0.0, 1.0]))
    return alpha, beta


def sw_exact_fplus(x, lam, depth=1.0, a=1.0):
    """Piecewise closed form of f_+ and f_+' for the sharp square well."""
    kp = np.sqrt(lam * lam + depth)
    f = np.empty(x.size, dtype=complex)
    d = np.empty(x.size, dtype=complex)
    hi = x >= a
    f[hi] = np.exp(1j * lam * x[hi])
    d[hi] = 1j * lam * f[hi]
    va = np.exp(1j * lam * a)
    da = 1j * lam * va
    P = (va + da / (1j * kp)) / (2 * np.exp(1j * kp * a))
    Q = (va - da / (1j * kp)) / (2 * np.exp(-1j * kp * a))
    mid = np.abs(x) < a
    f[mid] = P * np.exp(1j * kp * x[mid]) + Q * np.exp(-1j * kp * x[mid])
    d[mid] = 1j * kp * (P * np.exp(1j * kp * x[mid])
                        - Q * np.exp(-1j * kp * x[mid]))
    vb = P * np.exp(-1j * kp * a) + Q * np.exp(1j * kp * a)
    db = 1j * kp * (P * np.exp(-1j * kp * a) - Q * np.exp(1j * kp * a))
    A = (vb + db / (1j * lam)) / (2 * np.exp(-1j * lam * a))
    B = (vb - db / (1j * lam)) / (2 * np.exp(1j * lam * a))
    lo = x <= -a
    f[lo] = A * np.exp(1j * lam * x[lo]) + B * np.exp(-1j * lam * x[lo])
    d[lo] = 1j * lam * (A * np.exp(1j * lam * x[lo])
                        - B * np.exp(-1j * lam * x[lo]))
    return f, d


def pt_exact_m(x, lam):
    """m_+ for V = -2 sech^2 x (the n = 1 reflectionless well)."""
    return (lam + 1j * np.tanh(x)) / (lam + 1j)


def pt_exact_dm(x, lam):
    return 1j / np.cosh(x) ** 2 / (lam + 1j)


def pt_exact_m_minus(x, lam):
    return (lam - 1j * np.tanh(x)) / (lam + 1j)


def pt_exact_transmission(lam):
    return (lam + 1j) / (lam - 1j)


def dirichlet_free_eigs(n: int, h: float) -> np.ndarray:
    """All eigenvalues of the n-node free Dirichlet second-difference matrix:
    2(1 - cos(k pi / (n+1))) / h^2, k = 1..n."""
    k = np.arange(1, n + 1)
    return 2.0 * (1.0 - np.cos(k * np.pi / (n + 1))) / h ** 2


def rk4_jost_m(V_fn, lam: float, x_right: float, x_eval: float,
               n_steps: int) -> tuple:
    """Back-integrate m'' = -2 i lam m' + V m from m(x_right) = 1, m' = 0
    down to x_eval with classic RK4 on the continuum potential V_fn.

    Independent of the sweep solver: different formulation (ODE vs integral
    equation), different stepper, analytic potential samples.
    """
    h = (x_eval - x_right) / n_steps      # negative step

    def rhs(x, y):
        m, dm = y
        return np.array([dm, -2j * lam * dm + V_fn(x) * m], dtype=complex)

    y = np.array([1.0 + 0j, 0.0 + 0j])
    x = x_right
    for _ in range(n_steps):
        k1 = rhs(x, y)
        k2 = rhs(x + h / 2, y + h / 2 * k1)
        k3 = rhs(x + h / 2, y + h / 2 * k2)
        k4 = rhs(x + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        x += h
    return complex(y[0]), complex(y[1])
