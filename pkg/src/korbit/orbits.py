"""Closed-form orbit descriptors: constraint sets per family and case,
membership and tangency checks, and sampled end-to-end verification.

A case is determined by which of (gamma, delta, sigma) vanish at the base
covector. Every positive-dimensional orbit here is two-dimensional and is
cut out by exactly three independent constraints plus strict sign
conditions; y is always a free coordinate. Constraints carry analytic
gradients and evaluability guards (positive power/log arguments).
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import algebra, exp_action, kirillov
from .errors import AsymmetryError, DomainError, EvaluationError

_X, _Y, _Z, _T, _S = range(5)


@dataclass(frozen=True)
class Guard:
    """A quantity that must be strictly positive for evaluation."""
    expr: str
    fn: object


@dataclass(frozen=True)
class SignPredicate:
    """A strict sign condition selecting the orbit's connected stratum."""
    expr: str
    fn: object


@dataclass(frozen=True)
class Constraint:
    """One scalar equation g(p) = 0 with analytic gradient."""
    expr: str
    fn: object
    grad: object
    affine: bool
    guards: tuple = ()


@dataclass(frozen=True)
class OrbitCase:
    family: str
    case_index: int
    zero_pattern: tuple  # (gamma == 0, delta == 0, sigma == 0)


@dataclass(frozen=True)
class OrbitDescriptor:
    case: OrbitCase
    base: np.ndarray
    params: dict
    constraints: tuple
    signs: tuple
    dim: int
    shape: str  # point | half-plane | cylinder
    provenance: str  # literal | oracle-corrected
    snapped: bool = False

    @property
    def family(self) -> str:
        return self.case.family

    @property
    def case_index(self) -> int:
        return self.case.case_index


def _aff(coef, const, expr) -> Constraint:
    c = np.asarray(coef, dtype=float)
    const = float(const)

    def fn(P):
        return P @ c + const

    def grad(P):
        return np.broadcast_to(c, np.shape(P)).copy()

    return Constraint(expr=expr, fn=fn, grad=grad, affine=True)


def _zero(i, name) -> Constraint:
    e = np.zeros(5)
    e[i] = 1.0
    return _aff(e, 0.0, f"{name} = 0")


def _ratio_guard(i, den, expr) -> Guard:
    return Guard(expr=expr, fn=lambda P: P[..., i] / den)


def _sign(coefval, i, expr) -> SignPredicate:
    return SignPredicate(expr=expr, fn=lambda P: coefval * P[..., i])


def _pow_con(out, coef, i, den, expo, expr, guard) -> Constraint:
    # g = p[out] - coef * (p[i]/den)**expo
    def fn(P):
        r = P[..., i] / den
        return P[..., out] - coef * r ** expo

    def grad(P):
        r = P[..., i] / den
        G = np.zeros(np.shape(P))
        G[..., out] = 1.0
        G[..., i] = -coef * expo * r ** (expo - 1.0) / den
        return G

    return Constraint(expr, fn, grad, False, (guard,))


def _xpow_con(m, al, ga, i, den, expo, expr, guard) -> Constraint:
    # g = m*(x - al) - ga*(1 - (p[i]/den)**expo)
    def fn(P):
        r = P[..., i] / den
        return m * (P[..., _X] - al) - ga + ga * r ** expo

    def grad(P):
        r = P[..., i] / den
        G = np.zeros(np.shape(P))
        G[..., _X] = m
        G[..., i] = ga * expo * r ** (expo - 1.0) / den
        return G

    return Constraint(expr, fn, grad, False, (guard,))


def _log_con(out, src, den, lin, expr, guard) -> Constraint:
    # g = p[out] - p[src]*log(p[src]/den) - lin*p[src]
    def fn(P):
        u = P[..., src]
        return P[..., out] - u * np.log(u / den) - lin * u

    def grad(P):
        u = P[..., src]
        G = np.zeros(np.shape(P))
        G[..., out] = 1.0
        G[..., src] = -np.log(u / den) - 1.0 - lin
        return G

    return Constraint(expr, fn, grad, False, (guard,))


def _log2_con(den, c1, c2, expr, guard) -> Constraint:
    # g = s - (z/2)*L**2 - c1*z*L - c2*z with L = log(z/den)
    def fn(P):
        z = P[..., _Z]
        L = np.log(z / den)
        return P[..., _S] - 0.5 * z * L * L - c1 * z * L - c2 * z

    def grad(P):
        z = P[..., _Z]
        L = np.log(z / den)
        G = np.zeros(np.shape(P))
        G[..., _S] = 1.0
        G[..., _Z] = -(0.5 * L * L + L) - c1 * (L + 1.0) - c2
        return G

    return Constraint(expr, fn, grad, False, (guard,))


def _point_case(base):
    al, be = base[_X], base[_Y]
    cons = (
        _aff((1, 0, 0, 0, 0), -al, "x = alpha"),
        _aff((0, 1, 0, 0, 0), -be, "y = beta"),
        _zero(_Z, "z"),
        _zero(_T, "t"),
        _zero(_S, "s"),
    )
    return cons, ()


def _x_is_alpha(al):
    return _aff((1, 0, 0, 0, 0), -al, "x = alpha")


def _xz_link(m, al, ga, mname):
    # m*(x - al) + z - ga = 0
    lhs = f"{mname}*x = {mname}*alpha + gamma - z" if mname else "x = alpha + gamma - z"
    if mname:
        return _aff((m, 0, 1, 0, 0), -m * al - ga, lhs)
    return _aff((1, 0, 1, 0, 0), -al - ga, lhs)


def _build_case(family, p, base, case_index):
    """(constraints, signs) for one family and case at a frozen base."""
    al, be, ga, de, si = (float(v) for v in base)
    sig_s = _sign(si, _S, "sigma*s > 0")
    sig_t = _sign(de, _T, "delta*t > 0")
    sig_z = _sign(ga, _Z, "gamma*z > 0")
    g_s = _ratio_guard(_S, si, "s/sigma > 0") if si != 0.0 else None
    g_t = _ratio_guard(_T, de, "t/delta > 0") if de != 0.0 else None
    g_z = _ratio_guard(_Z, ga, "z/gamma > 0") if ga != 0.0 else None

    if case_index == 1:
        return _point_case(base)

    if family == "5.3.8":
        if case_index == 2:
            return (_x_is_alpha(al), _zero(_Z, "z"), _zero(_T, "t")), (sig_s,)
        return _build_538_case3(p, base)

    if case_index == 2:
        return (_x_is_alpha(al), _zero(_Z, "z"), _zero(_T, "t")), (sig_s,)

    if family == "5.3.1":
        l1, l2 = p["lambda1"], p["lambda2"]
        xz = _xz_link(l1, al, ga, "lambda1")
        if case_index == 3:
            return (_x_is_alpha(al), _zero(_Z, "z"), _zero(_S, "s")), (sig_t,)
        if case_index == 4:
            c = _pow_con(_T, de, _S, si, l2,
                         "t = delta*(s/sigma)**lambda2", g_s)
            return (_x_is_alpha(al), _zero(_Z, "z"), c), (sig_s,)
        if case_index == 5:
            return (xz, _zero(_T, "t"), _zero(_S, "s")), (sig_z,)
        if case_index == 6:
            c = _xpow_con(l1, al, ga, _S, si, l1,
                          "lambda1*x = lambda1*alpha + gamma*(1 - (s/sigma)**lambda1)",
                          g_s)
            return (xz, c, _zero(_T, "t")), (sig_s,)
        if case_index == 7:
            c = _xpow_con(l1, al, ga, _T, de, l1 / l2,
                          "lambda1*x = lambda1*alpha + gamma*(1 - (t/delta)**(lambda1/lambda2))",
                          g_t)
            return (xz, c, _zero(_S, "s")), (sig_t,)
        c1 = _xpow_con(l1, al, ga, _S, si, l1,
                       "lambda1*x = lambda1*alpha + gamma*(1 - (s/sigma)**lambda1)",
                       g_s)
        c2 = _pow_con(_T, de, _S, si, l2, "t = delta*(s/sigma)**lambda2", g_s)
        return (xz, c1, c2), (sig_s,)

    if family == "5.3.2":
        lam = p["lambda"]
        xz = _xz_link(0, al, ga, "")
        if case_index == 3:
            return (_x_is_alpha(al), _zero(_Z, "z"), _zero(_S, "s")), (sig_t,)
        if case_index == 4:
            c = _pow_con(_S, si, _T, de, lam, "s = sigma*(t/delta)**lambda", g_t)
            return (_x_is_alpha(al), _zero(_Z, "z"), c), (sig_t,)
        if case_index == 5:
            return (xz, _zero(_T, "t"), _zero(_S, "s")), (sig_z,)
        if case_index == 6:
            c = _pow_con(_S, si, _Z, ga, lam, "s = sigma*(z/gamma)**lambda", g_z)
            return (xz, c, _zero(_T, "t")), (sig_z,)
        xt = _aff((1, 0, 0, ga / de, 0), -al - ga, "x = alpha + (1 - t/delta)*gamma")
        if case_index == 7:
            return (xz, xt, _zero(_S, "s")), (sig_t,)
        c = _pow_con(_S, si, _T, de, lam, "s = sigma*(t/delta)**lambda", g_t)
        return (xz, xt, c), (sig_t,)

    if family == "5.3.3":
        lam = p["lambda"]
        xz = _xz_link(lam, al, ga, "lambda")
        ts = _aff((0, 0, 0, -si, de), 0.0, "delta*s = sigma*t")
        if case_index == 3:
            return (_x_is_alpha(al), _zero(_Z, "z"), _zero(_S, "s")), (sig_t,)
        if case_index == 4:
            return (_x_is_alpha(al), _zero(_Z, "z"), ts), (sig_t,)
        if case_index == 5:
            return (xz, _zero(_T, "t"), _zero(_S, "s")), (sig_z,)
        if case_index == 6:
            c = _xpow_con(lam, al, ga, _S, si, lam,
                          "lambda*x = lambda*alpha + gamma*(1 - (s/sigma)**lambda)",
                          g_s)
            return (xz, c, _zero(_T, "t")), (sig_s,)
        if case_index == 7:
            c = _pow_con(_Z, ga, _T, de, lam, "z = gamma*(t/delta)**lambda", g_t)
            return (xz, c, _zero(_S, "s")), (sig_t,)
        c = _xpow_con(lam, al, ga, _T, de, lam,
                      "lambda*x = lambda*alpha + gamma*(1 - (t/delta)**lambda)",
                      g_t)
        return (xz, c, ts), (sig_t,)

    if family == "5.3.4":
        xz = _xz_link(0, al, ga, "")
        ts = _aff((0, 0, 0, -si, de), 0.0, "delta*s = sigma*t")
        if case_index == 3:
            return (_x_is_alpha(al), _zero(_Z, "z"), _zero(_S, "s")), (sig_t,)
        if case_index == 4:
            return (_x_is_alpha(al), _zero(_Z, "z"), ts), (sig_t,)
        if case_index == 5:
            return (xz, _zero(_T, "t"), _zero(_S, "s")), (sig_z,)
        if case_index == 6:
            xs = _aff((1, 0, 0, 0, ga / si), -al - ga, "x = alpha + gamma*(1 - s/sigma)")
            return (xz, xs, _zero(_T, "t")), (sig_s,)
        if case_index == 7:
            zt = _aff((0, 0, 1, -ga / de, 0), 0.0, "z = gamma*t/delta")
            return (xz, zt, _zero(_S, "s")), (sig_t,)
        xs = _aff((1, 0, 0, 0, ga / si), -al - ga, "x = alpha + gamma*(1 - s/sigma)")
        return (xz, xs, ts), (sig_t,)

    if family == "5.3.5":
        lam = p["lambda"]
        xz = _xz_link(lam, al, ga, "lambda")
        if case_index == 3:
            c = _log_con(_S, _T, de, 0.0, "s = t*log(t/delta)", g_t)
            return (_x_is_alpha(al), _zero(_Z, "z"), c), (sig_t,)
        if case_index == 4:
            c = _log_con(_S, _T, de, si / de,
                         "s = sigma*t/delta + t*log(t/delta)", g_t)
            return (_x_is_alpha(al), _zero(_Z, "z"), c), (sig_t,)
        if case_index == 5:
            return (xz, _zero(_T, "t"), _zero(_S, "s")), (sig_z,)
        if case_index == 6:
            c = _xpow_con(lam, al, ga, _S, si, lam,
                          "lambda*x = lambda*alpha + gamma*(1 - (s/sigma)**lambda)",
                          g_s)
            return (xz, c, _zero(_T, "t")), (sig_s,)
        if case_index == 7:
            c1 = _pow_con(_Z, ga, _T, de, lam, "z = gamma*(t/delta)**lambda", g_t)
            c2 = _log_con(_S, _T, de, 0.0, "s = t*log(t/delta)", g_t)
            return (xz, c1, c2), (sig_t,)
        c1 = _xpow_con(lam, al, ga, _T, de, lam,
                       "lambda*x = lambda*alpha + gamma*(1 - (t/delta)**lambda)",
                       g_t)
        c2 = _log_con(_S, _T, de, si / de,
                      "s = sigma*t/delta + t*log(t/delta)", g_t)
        return (xz, c1, c2), (sig_t,)

    if family == "5.3.6":
        lam = p["lambda"]
        xz = _xz_link(0, al, ga, "")
        if case_index == 3:
            return (_x_is_alpha(al), _zero(_Z, "z"), _zero(_S, "s")), (sig_t,)
        if case_index == 4:
            c = _pow_con(_S, si, _T, de, lam, "s = sigma*(t/delta)**lambda", g_t)
            return (_x_is_alpha(al), _zero(_Z, "z"), c), (sig_t,)
        if case_index == 5:
            c = _log_con(_T, _Z, ga, 0.0, "t = z*log(z/gamma)", g_z)
            return (xz, c, _zero(_S, "s")), (sig_z,)
        if case_index == 6:
            c1 = _log_con(_T, _Z, ga, 0.0, "t = z*log(z/gamma)", g_z)
            c2 = _pow_con(_S, si, _Z, ga, lam, "s = sigma*(z/gamma)**lambda", g_z)
            return (xz, c1, c2), (sig_s,)
        if case_index == 7:
            c = _log_con(_T, _Z, ga, de / ga,
                         "t = z*log(z/gamma) + delta*z/gamma", g_z)
            return (xz, c, _zero(_S, "s")), (sig_z,)
        c1 = _log_con(_T, _Z, ga, de / ga,
                      "t = z*log(z/gamma) + delta*z/gamma", g_z)
        c2 = _pow_con(_S, si, _Z, ga, lam, "s = sigma*(z/gamma)**lambda", g_z)
        return (xz, c1, c2), (sig_z,)

    # 5.3.7
    xz = _xz_link(0, al, ga, "")
    if case_index == 3:
        c = _log_con(_S, _T, de, 0.0, "s = t*log(t/delta)", g_t)
        return (_x_is_alpha(al), _zero(_Z, "z"), c), (sig_t,)
    if case_index == 4:
        c = _log_con(_S, _T, de, si / de,
                     "s = t*log(t/delta) + sigma*t/delta", g_t)
        return (_x_is_alpha(al), _zero(_Z, "z"), c), (sig_t,)
    tz = _log_con(_T, _Z, ga, 0.0, "t = z*log(z/gamma)", g_z)
    tz_lin = _log_con(_T, _Z, ga, de / ga if ga != 0.0 else 0.0,
                      "t = z*log(z/gamma) + delta*z/gamma", g_z)
    if case_index == 5:
        c = _log2_con(ga, 0.0, 0.0, "s = (z/2)*log(z/gamma)**2", g_z)
        return (xz, tz, c), (sig_z,)
    if case_index == 6:
        c = _log2_con(ga, 0.0, si / ga,
                      "s = (z/2)*log(z/gamma)**2 + sigma*z/gamma", g_z)
        return (xz, tz, c), (sig_z,)
    if case_index == 7:
        c = _log2_con(ga, de / ga, 0.0,
                      "s = (z/2)*log(z/gamma)**2 + (delta/gamma)*z*log(z/gamma)", g_z)
        return (xz, tz_lin, c), (sig_z,)
    c = _log2_con(ga, de / ga, si / ga,
                  "s = (z/2)*log(z/gamma)**2 + (delta/gamma)*z*log(z/gamma) + sigma*z/gamma",
                  g_z)
    return (xz, tz_lin, c), (sig_z,)


# Detection threshold for the quarter-turn branch of family 5.3.8: float pi/2
# leaves cos(phi) ~ 6e-17, and for |cos(phi)| below this the two branches
# agree far beyond the membership tolerance at any reasonable radius.
_QUARTER_TURN_TOL = 1e-9


def _build_538_case3(p, base):
    """Family 5.3.8 with (gamma, delta) != 0: solve-then-check membership.

    The group parameter b is recovered from the point (from s when
    sigma != 0, else from the modulus of (z, t), else, at phi = pi/2 where
    the modulus is constant, from the winding angle mod 2pi; the x
    coordinate is exactly 2pi-periodic in b there, so the principal angle
    suffices), then the remaining coordinates are checked against the
    closed-form motion.
    """
    lam, ph = p["lambda"], p["phi"]
    al, ga, de, si = float(base[_X]), float(base[_Z]), float(base[_T]), float(base[_S])
    zeta0 = complex(ga, de)
    ed = complex(math.cos(ph), -math.sin(ph))  # e^(-i*phi), moves (z, t)
    eu = ed.conjugate()                        # e^(+i*phi), moves x

    if si != 0.0:
        g_s = _ratio_guard(_S, si, "s/sigma > 0")

        def b_of(P):
            return np.log(P[..., _S] / si) / lam

        def con_z():
            def fn(P):
                zeta = zeta0 * np.exp(b_of(P) * ed)
                return P[..., _Z] - zeta.real

            def grad(P):
                zeta = zeta0 * np.exp(b_of(P) * ed)
                G = np.zeros(np.shape(P))
                G[..., _Z] = 1.0
                G[..., _S] = -(ed * zeta).real / (lam * P[..., _S])
                return G

            return Constraint(
                "z = Re((gamma + i*delta)*exp(b*exp(-i*phi))), b = log(s/sigma)/lambda",
                fn, grad, False, (g_s,))

        def con_t():
            def fn(P):
                zeta = zeta0 * np.exp(b_of(P) * ed)
                return P[..., _T] - zeta.imag

            def grad(P):
                zeta = zeta0 * np.exp(b_of(P) * ed)
                G = np.zeros(np.shape(P))
                G[..., _T] = 1.0
                G[..., _S] = -(ed * zeta).imag / (lam * P[..., _S])
                return G

            return Constraint(
                "t = Im((gamma + i*delta)*exp(b*exp(-i*phi))), b = log(s/sigma)/lambda",
                fn, grad, False, (g_s,))

        def con_x():
            def fn(P):
                w = (np.exp(b_of(P) * eu) - 1.0) * ed
                return P[..., _X] - al + ga * w.real + de * w.imag

            def grad(P):
                Ep = np.exp(b_of(P) * eu)
                G = np.zeros(np.shape(P))
                G[..., _X] = 1.0
                G[..., _S] = (ga * Ep.real + de * Ep.imag) / (lam * P[..., _S])
                return G

            return Constraint(
                "x = alpha - gamma*Re(w) - delta*Im(w), "
                "w = (exp(b*exp(i*phi)) - 1)*exp(-i*phi), b = log(s/sigma)/lambda",
                fn, grad, False, (g_s,))

        return (con_z(), con_t(), con_x()), (_sign(si, _S, "sigma*s > 0"),)

    # sigma = 0: the orbit stays in the s = 0 slice
    r0 = math.hypot(ga, de)
    g_r = Guard("z**2 + t**2 > 0", lambda P: P[..., _Z] ** 2 + P[..., _T] ** 2)
    s_zero = _zero(_S, "s")

    if abs(math.cos(ph)) < _QUARTER_TURN_TOL:
        def b_of(P):
            rho = (P[..., _Z] + 1j * P[..., _T]) * zeta0.conjugate()
            return -np.arctan2(np.imag(rho), np.real(rho))

        def db(P):
            u = ga * P[..., _Z] + de * P[..., _T]
            v = ga * P[..., _T] - de * P[..., _Z]
            m2 = u * u + v * v
            return (de * u + ga * v) / m2, -(ga * u - de * v) / m2

        def con_mod():
            def fn(P):
                return np.hypot(P[..., _Z], P[..., _T]) - r0

            def grad(P):
                r = np.hypot(P[..., _Z], P[..., _T])
                G = np.zeros(np.shape(P))
                G[..., _Z] = P[..., _Z] / r
                G[..., _T] = P[..., _T] / r
                return G

            return Constraint("hypot(z, t) = hypot(gamma, delta)",
                              fn, grad, False, (g_r,))

        def con_x():
            def fn(P):
                b = b_of(P)
                return P[..., _X] - al + ga * np.sin(b) + de * (1.0 - np.cos(b))

            def grad(P):
                b = b_of(P)
                dz, dt = db(P)
                xb = ga * np.cos(b) + de * np.sin(b)
                G = np.zeros(np.shape(P))
                G[..., _X] = 1.0
                G[..., _Z] = xb * dz
                G[..., _T] = xb * dt
                return G

            return Constraint(
                "x = alpha - gamma*sin(b) - delta*(1 - cos(b)), "
                "b = winding angle of (z + i*t) against (gamma + i*delta), mod 2*pi",
                fn, grad, False, (g_r,))

        return (s_zero, con_mod(), con_x()), ()

    cosph = math.cos(ph)

    def b_of(P):
        return np.log(np.hypot(P[..., _Z], P[..., _T]) / r0) / cosph

    def db(P):
        r2 = P[..., _Z] ** 2 + P[..., _T] ** 2
        return P[..., _Z] / (r2 * cosph), P[..., _T] / (r2 * cosph)

    def con_z():
        def fn(P):
            zeta = zeta0 * np.exp(b_of(P) * ed)
            return P[..., _Z] - zeta.real

        def grad(P):
            zeta = zeta0 * np.exp(b_of(P) * ed)
            dz, dt = db(P)
            d = (ed * zeta).real
            G = np.zeros(np.shape(P))
            G[..., _Z] = 1.0 - d * dz
            G[..., _T] = -d * dt
            return G

        return Constraint(
            "z = Re((gamma + i*delta)*exp(b*exp(-i*phi))), "
            "b = log(hypot(z, t)/hypot(gamma, delta))/cos(phi)",
            fn, grad, False, (g_r,))

    def con_t():
        def fn(P):
            zeta = zeta0 * np.exp(b_of(P) * ed)
            return P[..., _T] - zeta.imag

        def grad(P):
            zeta = zeta0 * np.exp(b_of(P) * ed)
            dz, dt = db(P)
            d = (ed * zeta).imag
            G = np.zeros(np.shape(P))
            G[..., _Z] = -d * dz
            G[..., _T] = 1.0 - d * dt
            return G

        return Constraint(
            "t = Im((gamma + i*delta)*exp(b*exp(-i*phi))), "
            "b = log(hypot(z, t)/hypot(gamma, delta))/cos(phi)",
            fn, grad, False, (g_r,))

    def con_x():
        def fn(P):
            w = (np.exp(b_of(P) * eu) - 1.0) * ed
            return P[..., _X] - al + ga * w.real + de * w.imag

        def grad(P):
            Ep = np.exp(b_of(P) * eu)
            dz, dt = db(P)
            d = ga * Ep.real + de * Ep.imag
            G = np.zeros(np.shape(P))
            G[..., _X] = 1.0
            G[..., _Z] = d * dz
            G[..., _T] = d * dt
            return G

        return Constraint(
            "x = alpha - gamma*Re(w) - delta*Im(w), "
            "w = (exp(b*exp(i*phi)) - 1)*exp(-i*phi), "
            "b = log(hypot(z, t)/hypot(gamma, delta))/cos(phi)",
            fn, grad, False, (g_r,))

    return (s_zero, con_z(), con_t(), con_x()), ()


# Families whose case 5-8 equations divide by the first ideal eigenvalue.
_FIRST_EIGENVALUE = {"5.3.1": "lambda1", "5.3.3": "lambda", "5.3.5": "lambda"}


def classify_orbit(family, params, F, snap_tol: float = 0.0) -> OrbitDescriptor:
    """Build the orbit descriptor through F.

    Exact zero comparisons decide the case; snap_tol > 0 additionally
    treats |coordinate| < snap_tol as zero for scanned (non-exact) input
    and records that in the descriptor.
    """
    family = algebra.normalize_family(family)
    p = algebra.validate_params(family, params)
    F = algebra.as_vector5(F, "covector")
    base = F.copy()
    snapped = False
    if snap_tol > 0.0:
        for i in (_Z, _T, _S):
            if base[i] != 0.0 and abs(base[i]) < snap_tol:
                base[i] = 0.0
                snapped = True
    ga, de, si = base[_Z], base[_T], base[_S]

    if family == "5.3.8":
        if ga == 0.0 and de == 0.0:
            case_index = 1 if si == 0.0 else 2
        else:
            case_index = 3
    else:
        case_index = (1 + (4 if ga != 0.0 else 0) + (2 if de != 0.0 else 0)
                      + (1 if si != 0.0 else 0))

    if case_index >= 5 and family in _FIRST_EIGENVALUE:
        pname = _FIRST_EIGENVALUE[family]
        if p[pname] == 0.0:
            raise DomainError(
                f"family {family} with {pname} = 0: cases with gamma != 0 have "
                "no valid closed-form constraint set (the x coordinate "
                "decouples from z); rank and dimension checks remain available")

    constraints, signs = _build_case(family, p, base, case_index)
    dim = 0 if case_index == 1 else 2
    if dim == 0:
        shape = "point"
    elif all(c.affine for c in constraints):
        shape = "half-plane"
    else:
        shape = "cylinder"
    provenance = "oracle-corrected" if (family, case_index) in (
        ("5.3.5", 8), ("5.3.8", 3)) else "literal"
    base.setflags(write=False)
    return OrbitDescriptor(
        case=OrbitCase(family=family, case_index=case_index,
                       zero_pattern=(bool(ga == 0.0), bool(de == 0.0),
                                     bool(si == 0.0))),
        base=base, params=p, constraints=constraints, signs=signs,
        dim=dim, shape=shape, provenance=provenance, snapped=snapped)


def descriptor_summary(desc: OrbitDescriptor) -> dict:
    return {
        "family": desc.family,
        "params": dict(desc.params),
        "case": desc.case_index,
        "zero_pattern": {"gamma": desc.case.zero_pattern[0],
                         "delta": desc.case.zero_pattern[1],
                         "sigma": desc.case.zero_pattern[2]},
        "base": [float(v) for v in desc.base],
        "dim": desc.dim,
        "shape": desc.shape,
        "provenance": desc.provenance,
        "snapped": desc.snapped,
        "constraints": [c.expr for c in desc.constraints],
        "signs": [s.expr for s in desc.signs],
    }


def _check_guards(desc, P):
    for con in desc.constraints:
        for g in con.guards:
            val = np.asarray(g.fn(P))
            if np.any(val <= 0.0):
                raise EvaluationError(
                    f"cannot evaluate {con.expr!r}: requires {g.expr}")


def _guard_mask(desc, P):
    """Boolean mask of batch rows where every guard is strictly positive."""
    ok = np.ones(P.shape[:-1], dtype=bool)
    for con in desc.constraints:
        for g in con.guards:
            ok &= np.asarray(g.fn(P)) > 0.0
    return ok


def constraint_residuals(desc: OrbitDescriptor, p) -> np.ndarray:
    """Normalized residuals g_i(p)/(1 + |p|_inf), in descriptor order.

    Raises EvaluationError when a power/log argument is not strictly
    positive at p.
    """
    P = np.asarray(p, dtype=float)
    if P.shape[-1] != 5:
        raise DomainError("point must have 5 coordinates")
    _check_guards(desc, P)
    scale = 1.0 + np.max(np.abs(P), axis=-1)
    res = np.stack([con.fn(P) for con in desc.constraints], axis=-1)
    return res / scale[..., None]


def is_member(desc: OrbitDescriptor, p, tol: float = 1e-8) -> bool:
    """Strict sign predicates plus all |normalized residuals| < tol.

    Unevaluable points (guard violations) are non-members, not errors.
    """
    P = algebra.as_vector5(p, "point")
    for sp in desc.signs:
        if not float(sp.fn(P)) > 0.0:
            return False
    try:
        r = constraint_residuals(desc, P)
    except EvaluationError:
        return False
    return bool(np.all(np.abs(r) < tol))


def tangency_residual(alg: algebra.LieAlgebra, desc: OrbitDescriptor, p) -> float:
    """max_i |(B(p) @ grad g)_i| / (1 + |p|_inf) over the constraints.

    The rows of the Kirillov form at p span the orbit tangent space, so
    this vanishes on descriptors that cut out the orbit correctly.
    """
    P = algebra.as_vector5(p, "point")
    B = kirillov.kirillov_form(alg, P).b
    scale = 1.0 + float(np.max(np.abs(P)))
    worst = 0.0
    for con in desc.constraints:
        v = B @ con.grad(P)
        worst = max(worst, float(np.max(np.abs(v))) / scale)
    return worst


def jacobian_rank_check(desc: OrbitDescriptor, p, tol: float = 1e-9) -> int:
    """Numeric rank of the constraint-gradient stack at p (expected 3)."""
    P = algebra.as_vector5(p, "point")
    J = np.stack([con.grad(P) for con in desc.constraints])
    sv = np.linalg.svd(J, compute_uv=False)
    thr = tol * max(1.0, float(sv[0]))
    return int(np.count_nonzero(sv > thr))


def gradient_fd_error(desc: OrbitDescriptor, p, step: float = 1e-6) -> float:
    """Max relative deviation of analytic gradients from central differences."""
    P = np.asarray(p, dtype=float)
    worst = 0.0
    for con in desc.constraints:
        G = con.grad(P)
        denom = np.maximum(1.0, np.max(np.abs(G), axis=-1))
        for j in range(5):
            Pp = P.copy()
            Pp[..., j] += step
            Pm = P.copy()
            Pm[..., j] -= step
            fd = (con.fn(Pp) - con.fn(Pm)) / (2.0 * step)
            worst = max(worst, float(np.max(np.abs(fd - G[..., j]) / denom)))
    return worst


def orbits_equal(alg: algebra.LieAlgebra, F1, F2, tol: float = 1e-8) -> bool:
    """Mutual membership check; both directions must agree."""
    d1 = classify_orbit(alg.family, alg.params, F1)
    d2 = classify_orbit(alg.family, alg.params, F2)
    a = is_member(d1, F2, tol)
    b = is_member(d2, F1, tol)
    if a != b:
        raise AsymmetryError(
            f"orbit membership disagreed for family {alg.family}: "
            f"{list(map(float, np.asarray(F1, float)))} vs "
            f"{list(map(float, np.asarray(F2, float)))} ({a} / {b})")
    return a


_CASE_MASKS = {1: (), 2: (_S,), 3: (_T,), 4: (_T, _S),
               5: (_Z,), 6: (_Z, _S), 7: (_Z, _T), 8: (_Z, _T, _S)}


def case_indices(family) -> tuple:
    """Valid case indices for a family (zero patterns of gamma, delta, sigma)."""
    family = algebra.normalize_family(family)
    return (1, 2, 3) if family == "5.3.8" else tuple(range(1, 9))


def canonical_bases(family, case_index, sign_variants: bool = True) -> list:
    """Base covectors for verification: alpha = beta = 1, nonzero stratum
    coordinates set to all +-1 sign patterns (family 5.3.8 case 3 also
    includes sigma = 0 sub-branch bases)."""
    family = algebra.normalize_family(family)
    if case_index not in case_indices(family):
        raise DomainError(f"family {family} has no case {case_index}")
    if family == "5.3.8":
        if case_index == 1:
            pats = [(0.0, 0.0, 0.0)]
        elif case_index == 2:
            pats = [(0.0, 0.0, 1.0)]
            if sign_variants:
                pats.append((0.0, 0.0, -1.0))
        elif sign_variants:
            pats = [(g, d, s)
                    for g in (1.0, -1.0, 0.0) for d in (1.0, -1.0, 0.0)
                    if (g, d) != (0.0, 0.0)
                    for s in (1.0, -1.0, 0.0)]
        else:
            pats = [(1.0, 1.0, 1.0)]
        return [np.array([1.0, 1.0, g, d, s]) for (g, d, s) in pats]
    nz = _CASE_MASKS[case_index]
    out = []
    patterns = (itertools.product((1.0, -1.0), repeat=len(nz))
                if sign_variants else [(1.0,) * len(nz)])
    for signs in patterns:
        b = np.array([1.0, 1.0, 0.0, 0.0, 0.0])
        for i, sgn in zip(nz, signs):
            b[i] = sgn
        out.append(b)
    return out


def _provenance_entries(family, case_index, p, desc, P, mask, scale):
    """Adjudication records for the flagged equations of this case."""
    entries = []
    al, ga, de, si = (float(desc.base[_X]), float(desc.base[_Z]),
                      float(desc.base[_T]), float(desc.base[_S]))

    def normed_max(con):
        if not np.any(mask):
            return None
        vals = con.fn(P[mask]) / scale[mask]
        return float(np.max(np.abs(vals)))

    if family == "5.3.1" and case_index == 6:
        l1 = p["lambda1"]
        r0 = normed_max(desc.constraints[0])
        r1 = normed_max(desc.constraints[1])
        lit = None if r0 is None else max(r0, r1)
        implied = _pow_con(_Z, ga, _S, si, l1, "z = gamma*(s/sigma)**lambda1",
                           _ratio_guard(_S, si, "s/sigma > 0"))
        entries.append({
            "equation": desc.constraints[1].expr,
            "literal_residual": lit,
            "corrected_residual": normed_max(implied),
            "adopted": "literal",
            "note": ("both transcribed equations share the left-hand side "
                     "lambda1*x; the pair is mutually consistent and, with the "
                     "t = 0 template constraint, has Jacobian rank 3, so the "
                     "transcribed pair is kept; the implied z-s relation is "
                     "evaluated in the corrected slot"),
        })
    elif family == "5.3.3" and case_index == 4:
        entries.append({
            "equation": desc.constraints[2].expr,
            "literal_residual": normed_max(desc.constraints[2]),
            "corrected_residual": None,
            "adopted": "literal",
            "note": ("every constraint in this case is affine, so the "
                     "descriptor is tagged half-plane even though the case "
                     "enumeration labels it a cylinder; shape tags here follow "
                     "the structural test"),
        })
    elif family == "5.3.5" and case_index == 8:
        lam = p["lambda"]

        def lit_fn(Q):
            r = Q[..., _T] / de
            return lam * (Q[..., _Y] - al) - ga + ga * r ** lam

        lit = None
        if np.any(mask):
            lit = float(np.max(np.abs(lit_fn(P[mask]) / scale[mask])))
        entries.append({
            "equation": desc.constraints[1].expr,
            "literal_residual": lit,
            "corrected_residual": normed_max(desc.constraints[1]),
            "adopted": "corrected",
            "note": ("the transcribed equation reads lambda*y on the left-hand "
                     "side, but y is a free coordinate of the orbit; the "
                     "single-symbol correction y -> x passes the sampled "
                     "oracle, so the corrected form is adopted"),
        })
    elif family == "5.3.7" and case_index in (5, 6, 7, 8):
        entries.append({
            "equation": desc.constraints[2].expr,
            "literal_residual": normed_max(desc.constraints[2]),
            "corrected_residual": None,
            "adopted": "literal",
            "note": ("the s equation is parsed as (z/2) times the square of "
                     "log(z/gamma); this parse passes the sampled oracle and "
                     "is adopted as transcribed"),
        })
    elif family == "5.3.8" and case_index == 3:
        worst = None
        if np.any(mask):
            worst = max(normed_max(c) for c in desc.constraints)
        entries.append({
            "equation": "; ".join(c.expr for c in desc.constraints),
            "literal_residual": None,
            "corrected_residual": worst,
            "adopted": "oracle-corrected",
            "note": ("the transcribed set-builder leaves the first coordinate "
                     "pair unconstrained; membership is implemented by "
                     "recovering the group parameter b from s (sigma != 0), "
                     "from the modulus of (z, t) (cos(phi) != 0), or from the "
                     "winding angle mod 2pi (phi = pi/2, where x is exactly "
                     "2pi-periodic in b)"),
        })
    return entries


@dataclass
class VerificationReport:
    """Sampled verification of one family case against its descriptor."""
    family: str
    params: dict
    case: int
    base: list
    bases: list
    n: int
    seed: int
    radius: float
    member_tol: float
    tangency_tol: float
    rank_tol: float
    shape: str
    dim: int
    max_residual: float
    tangency_max: float
    sign_violations: int
    jacobian_failures: int
    dimension_mismatches: int
    gradient_max_rel_err: float
    provenance: list
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "params": dict(self.params),
            "case": self.case,
            "base": self.base,
            "bases": self.bases,
            "n": self.n,
            "seed": self.seed,
            "radius": self.radius,
            "member_tol": self.member_tol,
            "tangency_tol": self.tangency_tol,
            "rank_tol": self.rank_tol,
            "shape": self.shape,
            "dim": self.dim,
            "max_residual": self.max_residual,
            "tangency_max": self.tangency_max,
            "sign_violations": self.sign_violations,
            "jacobian_failures": self.jacobian_failures,
            "dimension_mismatches": self.dimension_mismatches,
            "gradient_max_rel_err": self.gradient_max_rel_err,
            "provenance": self.provenance,
            "passed": self.passed,
        }


def verify_proposition(family, params, case_index, n: int, seed: int,
                       radius: float = 2.0, member_tol: float = 1e-8,
                       tangency_tol: float = 1e-8, rank_tol: float = 1e-9,
                       grad_tol: float = 1e-4, grad_step: float = 1e-6,
                       base=None, sign_variants: bool = True) -> VerificationReport:
    """Sample n orbit points per canonical base of one case and check the
    constraint set end to end.

    Checks: normalized residuals below member_tol, sign predicates strict,
    tangency of the Kirillov rows below tangency_tol, constraint Jacobian
    rank exactly 3 (dim-2 cases), sampled orbit dimension equal to the base
    dimension, and analytic gradients against central differences. The base
    covectors are canonical_bases(family, case) unless an explicit base is
    given; base k samples with seed + 7919*k.
    """
    alg = algebra.build_algebra(family, params)
    p = alg.params
    family = alg.family
    if base is not None:
        bases = [algebra.as_vector5(base, "base covector")]
    else:
        bases = canonical_bases(family, case_index, sign_variants)

    n = int(n)
    max_residual = 0.0
    tangency_max = 0.0
    sign_violations = 0
    jacobian_failures = 0
    dimension_mismatches = 0
    grad_worst = 0.0
    prov_acc = {}

    for k, B in enumerate(bases):
        desc = classify_orbit(family, p, B)
        if desc.case_index != case_index:
            raise DomainError(
                f"base {list(map(float, B))} lies in case {desc.case_index}, "
                f"not requested case {case_index}")
        sample = exp_action.sample_orbit(alg, B, n, seed=int(seed) + 7919 * k,
                                         radius=radius)
        P = sample.points
        if P.shape[0] == 0:
            continue
        scale = 1.0 + np.max(np.abs(P), axis=-1)
        mask = _guard_mask(desc, P)
        sign_violations += int(P.shape[0] - int(mask.sum()))
        for sp in desc.signs:
            vals = np.asarray(sp.fn(P))
            sign_violations += int(np.count_nonzero(~(vals > 0.0) & mask))

        if np.any(mask):
            Pm = P[mask]
            sm = scale[mask]
            res = np.stack([con.fn(Pm) for con in desc.constraints], axis=-1)
            max_residual = max(max_residual,
                               float(np.max(np.abs(res / sm[:, None]))))
            Bk = kirillov.kirillov_forms(alg, Pm)
            grads = [con.grad(Pm) for con in desc.constraints]
            for G in grads:
                v = np.einsum("nij,nj->ni", Bk, G)
                tangency_max = max(tangency_max,
                                   float(np.max(np.abs(v) / sm[:, None])))
            if desc.dim == 2:
                J = np.stack(grads, axis=1)  # (m, k, 5)
                sv = np.linalg.svd(J, compute_uv=False)
                thr = rank_tol * np.maximum(1.0, sv[:, 0])
                ranks = (sv > thr[:, None]).sum(axis=1)
                jacobian_failures += int(np.count_nonzero(ranks != 3))
            ranks_b, _ = kirillov._batch_skew_ranks(Bk, rank_tol)
            dimension_mismatches += int(np.count_nonzero(ranks_b != desc.dim))
            for con, G in zip(desc.constraints, grads):
                denom = np.maximum(1.0, np.max(np.abs(G), axis=-1))
                for j in range(5):
                    Pp = Pm.copy()
                    Pp[:, j] += grad_step
                    Pq = Pm.copy()
                    Pq[:, j] -= grad_step
                    fd = (con.fn(Pp) - con.fn(Pq)) / (2.0 * grad_step)
                    grad_worst = max(grad_worst, float(
                        np.max(np.abs(fd - G[:, j]) / denom)))

        for entry in _provenance_entries(family, case_index, p, desc, P,
                                         mask, scale):
            key = entry["equation"]
            if key in prov_acc:
                old = prov_acc[key]
                for slot in ("literal_residual", "corrected_residual"):
                    a, b = old[slot], entry[slot]
                    old[slot] = b if a is None else (
                        a if b is None else max(a, b))
            else:
                prov_acc[key] = entry

    desc0 = classify_orbit(family, p, bases[0])
    passed = (max_residual < member_tol and tangency_max < tangency_tol
              and sign_violations == 0 and jacobian_failures == 0
              and dimension_mismatches == 0 and grad_worst < grad_tol)
    return VerificationReport(
        family=family, params=dict(p), case=case_index,
        base=[float(v) for v in bases[0]],
        bases=[[float(v) for v in b] for b in bases],
        n=n, seed=int(seed), radius=float(radius),
        member_tol=float(member_tol), tangency_tol=float(tangency_tol),
        rank_tol=float(rank_tol), shape=desc0.shape, dim=desc0.dim,
        max_residual=max_residual, tangency_max=tangency_max,
        sign_violations=sign_violations, jacobian_failures=jacobian_failures,
        dimension_mismatches=dimension_mismatches,
        gradient_max_rel_err=grad_worst,
        provenance=list(prov_acc.values()), passed=passed)
