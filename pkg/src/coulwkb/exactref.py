"""Exact Coulomb-function backend: series, asymptotics and ODE integration.

This module is the oracle the WKB evaluation is validated against, built
from three independent routes:

* ``f_series``      -- the regular solution from its power series.  The
  Kummer exponential is folded into the series, giving coefficients with
  the three-term recurrence (k+1)(k+2l+2) A_{k+1} = 2 eta A_k - A_{k-1}
  (A&S 14.1 style).  The folded form is far better conditioned than the
  raw 1F1 sum and is manifestly independent of the omega sign.
* ``h_asymptotic``  -- H(+/-) from the large-rho expansion
  e^{+/- i theta} 2F0(-l + i w eta, 1 + l + i w eta;; -i/(2 w rho)),
  truncated at its smallest term.
* ``ode_propagate`` -- direct integration of u'' = (l(l+1)/rho^2 +
  2 eta/rho - 1) u along straight complex paths with an embedded
  Dormand-Prince 5(4) pair.

``exact_quad`` combines them per region: F from the series near the origin,
H(+/-) far out, and the ODE bridging the gap.  The bridge carries the
inward-GROWING member of the H pair (H^w with w = sign Im rho) and rebuilds
G = H^w - i w F from it, which keeps the integration self-correcting both
through the barrier and along complex rays.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .complexops import log_gamma
from .errors import (
    AsymptoticFailureError,
    ConvergenceError,
    NoStrategyError,
    PathError,
    SeriesCancellationError,
    StepUnderflowError,
)
from .wkbcore import ComplexParams, CoulombQuad

_LOG2 = math.log(2.0)

SERIES_RADIUS = 50.0        # beyond this the power series is not attempted
SERIES_MAX_TERMS = 10000
SERIES_TOL = 1e-15
CANCELLATION_LIMIT = 1e8    # max term magnitude over result magnitude
ASYM_TOL = 1e-10


@dataclass(frozen=True)
class NormalizationConstants:
    """Gamow factor C_l(eta) and Coulomb phase shift sigma_l(eta)."""

    c_l: complex
    sigma_l: complex


@dataclass(frozen=True)
class SeriesDiagnostics:
    terms_used: int
    last_term_ratio: float
    converged: bool


def _norm_logs(ell: complex, eta: complex):
    """(log C_l, sigma_l); everything stays in log space to dodge overflow."""
    lgp = log_gamma(1.0 + ell + 1j * eta)
    lgm = log_gamma(1.0 + ell - 1j * eta)
    lg2 = log_gamma(2.0 * ell + 2.0)
    sigma = (lgp - lgm) / 2j
    log_c = ell * _LOG2 - 0.5 * math.pi * eta - lg2 + 0.5 * (lgp + lgm)
    return log_c, sigma


def norm_constants(ell: complex, eta: complex) -> NormalizationConstants:
    """C_l(eta) and sigma_l(eta) evaluated through log-gamma.

    For real l >= 0 and real eta the conjugation symmetry of log-gamma makes
    both outputs exactly real.
    """
    log_c, sigma = _norm_logs(complex(ell), complex(eta))
    return NormalizationConstants(c_l=cmath.exp(log_c), sigma_l=sigma)


# ---------------------------------------------------------------------------
# power series for the regular solution
# ---------------------------------------------------------------------------

def f_series(params: ComplexParams, *, max_terms: int = SERIES_MAX_TERMS,
             tol: float = SERIES_TOL, radius: float = SERIES_RADIUS):
    """(F, F', diagnostics) from the regular power series.

    Raises ConvergenceError outside the trust radius or when the term ratio
    never reaches ``tol``; raises SeriesCancellationError when the largest
    summed term exceeds the result by more than 1e8 (more than ~8 digits
    lost).  The result does not depend on params.omega.
    """
    f, fp, diag, _ = _f_series_core(params, max_terms=max_terms, tol=tol,
                                    radius=radius)
    return f, fp, diag


def _f_series_core(params: ComplexParams, *, max_terms: int = SERIES_MAX_TERMS,
                   tol: float = SERIES_TOL, radius: float = SERIES_RADIUS):
    """f_series plus the cancellation ratio, for route selection."""
    ell, eta, rho = params.ell, params.eta, params.rho
    if abs(rho) > radius:
        raise ConvergenceError(
            f"|rho| = {abs(rho):.3g} outside the series radius {radius:g}")
    log_c, _ = _norm_logs(ell, eta)

    a_prev = complex(0.0)
    a_cur = complex(1.0)
    s = complex(0.0)
    sd = complex(0.0)      # sum of k A_k rho^k
    rk = complex(1.0)
    max_mag = 0.0
    ratio = math.inf
    converged = False
    k = 0
    while k < max_terms:
        t = a_cur * rk
        s += t
        if k:
            sd += k * t
        mag = abs(t)
        max_mag = max(max_mag, mag)
        prev_ratio = ratio
        ratio = mag / max(abs(s), 1e-300)
        # two consecutive small terms: every other coefficient can vanish
        # (free field), so one small term is not evidence of convergence
        if k > 8 and ratio <= tol and prev_ratio <= tol:
            converged = True
            break
        a_prev, a_cur = a_cur, (2.0 * eta * a_cur - a_prev) / ((k + 1) * (k + 2.0 * ell + 2.0))
        rk *= rho
        k += 1

    diag = SeriesDiagnostics(terms_used=k + 1, last_term_ratio=ratio,
                             converged=converged)
    if not converged:
        raise ConvergenceError(
            f"series did not reach tol={tol:g} in {max_terms} terms")
    cancel = max_mag / max(abs(s), 1e-300)
    if cancel > CANCELLATION_LIMIT:
        raise SeriesCancellationError(
            f"series cancellation {cancel:.2e} exceeds {CANCELLATION_LIMIT:.0e}")
    pref = cmath.exp(log_c + (ell + 1.0) * cmath.log(rho))
    f = pref * s
    fp = pref * (sd / rho + (ell + 1.0) / rho * s)
    return f, fp, diag, cancel


# ---------------------------------------------------------------------------
# asymptotic expansion for H(+/-)
# ---------------------------------------------------------------------------

def h_asymptotic(params: ComplexParams, *, tol: float = ASYM_TOL,
                 max_terms: int = 400):
    """(H, H', diagnostics) from the divergent large-rho expansion.

    The sum is truncated at its globally smallest term; early terms may grow
    while k < ~2(|eta| + |l|), so growth is tolerated during that burn-in.
    Raises AsymptoticFailureError when the smallest term is above ``tol``.
    """
    ell, eta, rho, omega = params.ell, params.eta, params.rho, params.omega
    _, sigma = _norm_logs(ell, eta)
    theta = rho - eta * cmath.log(2.0 * rho) - ell * (math.pi / 2.0) + sigma
    pa = -ell + 1j * omega * eta
    pb = 1.0 + ell + 1j * omega * eta
    z = -1j * omega / (2.0 * rho)

    s = complex(1.0)
    sd = complex(0.0)          # sum of k t_k
    term = complex(1.0)
    best_mag = 1.0
    best_s, best_sd, best_k = s, sd, 0
    burn_in = 4 + int(2.0 * (abs(eta) + abs(ell)))
    k = 0
    while k < max_terms:
        term = term * (pa + k) * (pb + k) / (k + 1.0) * z
        k += 1
        mag = abs(term)
        if mag >= best_mag and k > burn_in:
            break
        s += term
        sd += k * term
        if mag < best_mag:
            best_mag, best_s, best_sd, best_k = mag, s, sd, k
        if mag < 1e-18:
            break

    ratio = best_mag / max(abs(best_s), 1e-300)
    converged = ratio <= tol
    diag = SeriesDiagnostics(terms_used=best_k, last_term_ratio=ratio,
                             converged=converged)
    if not converged:
        raise AsymptoticFailureError(
            f"smallest asymptotic term ratio {ratio:.2e} above tol={tol:g} "
            f"(rho too small)")
    phase = cmath.exp(1j * omega * theta)
    h = phase * best_s
    hp = 1j * omega * (1.0 - eta / rho) * h - phase * best_sd / rho
    return h, hp, diag


def _fg_from_h(ell: complex, eta: complex, rho: complex, *, tol: float = ASYM_TOL):
    """Full quad from H+ and H-: G = (H+ + H-)/2, F = (H+ - H-)/(2i)."""
    hp, hpp, d1 = h_asymptotic(ComplexParams(ell, eta, rho, 1), tol=tol)
    hm, hmp, d2 = h_asymptotic(ComplexParams(ell, eta, rho, -1), tol=tol)
    return CoulombQuad(f=(hp - hm) / 2j, fp=(hpp - hmp) / 2j,
                       g=(hp + hm) / 2.0, gp=(hpp + hmp) / 2.0)


# ---------------------------------------------------------------------------
# adaptive Dormand-Prince 5(4) propagation along complex paths
# ---------------------------------------------------------------------------

_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
# y5 - y4 error weights
_DP_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525,
         -1 / 40)


def _segment_hits_cut(start: complex, end: complex) -> bool:
    """True if the straight segment meets the closed negative real axis."""
    for p in (start, end):
        if p.imag == 0.0 and p.real <= 0.0:
            return True
    si, ei = start.imag, end.imag
    if si == 0.0 and ei == 0.0:
        return min(start.real, end.real) <= 0.0
    if si * ei < 0.0 or (si == 0.0 or ei == 0.0):
        if si == ei:
            return False
        t = si / (si - ei)
        if 0.0 <= t <= 1.0 and (start + t * (end - start)).real <= 0.0:
            return True
    return False


def ode_propagate(ell: complex, eta: complex, start: complex,
                  quad_start: CoulombQuad, end: complex, *,
                  rtol: float = 1e-12, max_steps: int = 2_000_000) -> CoulombQuad:
    """Propagate (F, F', G, G') from ``start`` to ``end`` along the straight
    segment between them.

    Both solutions satisfy u'' = (l(l+1)/rho^2 + 2 eta/rho - 1) u; the
    blocks evolve independently, so errors in one pair never leak into the
    other.  Local error is controlled per pair relative to the pair
    magnitude at the given ``rtol``.
    """
    ell = complex(ell)
    eta = complex(eta)
    start = complex(start)
    end = complex(end)
    if _segment_hits_cut(start, end):
        raise PathError(
            f"segment {start!r} -> {end!r} meets the origin or the negative "
            f"real axis")
    if start == end:
        return quad_start

    delta = end - start
    ll1 = ell * (ell + 1.0)
    eta2 = 2.0 * eta

    def rhs(t: float, y):
        rho = start + t * delta
        v = ((ll1 / rho + eta2) / rho - 1.0) * delta
        return (delta * y[1], v * y[0], delta * y[3], v * y[2])

    y = (quad_start.f, quad_start.fp, quad_start.g, quad_start.gp)
    t = 0.0
    h = min(0.1, 0.5 / (1.0 + abs(delta)))
    k1 = rhs(t, y)
    steps = 0
    while t < 1.0:
        if steps > max_steps:
            raise ConvergenceError("ODE step budget exhausted")
        steps += 1
        if t + h > 1.0:
            h = 1.0 - t
        ks = [k1]
        for i in range(1, 7):
            acc = [0.0 + 0j] * 4
            row = _DP_A[i]
            for j, aij in enumerate(row):
                if aij:
                    kj = ks[j]
                    for m in range(4):
                        acc[m] += aij * kj[m]
            yi = tuple(y[m] + h * acc[m] for m in range(4))
            ks.append(rhs(t + h * sum(row) if i < 6 else t + h, yi))
        y_new = yi            # stage 7 argument is the 5th-order solution
        k_new = ks[6]
        err = [0.0 + 0j] * 4
        for j, ej in enumerate(_DP_E):
            if ej:
                kj = ks[j]
                for m in range(4):
                    err[m] += ej * kj[m]
        sc_f = rtol * max(abs(y[0]), abs(y[1]), abs(y_new[0]), abs(y_new[1]), 1e-290)
        sc_g = rtol * max(abs(y[2]), abs(y[3]), abs(y_new[2]), abs(y_new[3]), 1e-290)
        e2 = ((abs(h * err[0]) / sc_f) ** 2 + (abs(h * err[1]) / sc_f) ** 2
              + (abs(h * err[2]) / sc_g) ** 2 + (abs(h * err[3]) / sc_g) ** 2)
        enorm = math.sqrt(e2 / 4.0)
        if enorm <= 1.0:
            t += h
            y = y_new
            k1 = k_new
        factor = 0.9 * (enorm + 1e-30) ** -0.2
        h *= min(5.0, max(0.2, factor))
        if h < 1e-14:
            raise StepUnderflowError(
                f"step size collapsed at t={t:.6f} along {start!r} -> {end!r}")
    return CoulombQuad(f=y[0], fp=y[1], g=y[2], gp=y[3])


# ---------------------------------------------------------------------------
# combining backend
# ---------------------------------------------------------------------------

def _omega_star(rho: complex) -> int:
    """Sign whose H grows toward the origin: |H^w| ~ exp(-w Im rho)."""
    return 1 if rho.imag >= 0.0 else -1


def _h_anchor(ell: complex, eta: complex, rho: complex, omega: int, *,
              tol: float = 1e-11):
    """(anchor_rho, H, H') out along the ray of rho where the expansion
    converges; raises AsymptoticFailureError if none found."""
    unit = rho / abs(rho)
    r = max(50.0, abs(eta) ** 2 / 5.0, 1.05 * abs(rho))
    last_exc = None
    for _ in range(9):
        anchor = r * unit
        try:
            h, hp, _ = h_asymptotic(ComplexParams(ell, eta, anchor, omega),
                                    tol=tol)
            return anchor, h, hp
        except AsymptoticFailureError as exc:
            last_exc = exc
            r *= 1.3
    raise last_exc


def _h_inward(ell: complex, eta: complex, rho: complex, omega: int):
    """H^omega pair at rho by inward propagation from an asymptotic anchor.

    Only the omega of :func:`_omega_star` is propagated this way: that H
    grows toward the origin (through the barrier for real rho, through
    exp(|Im rho|) for complex rho), which is the direction in which the
    integration is self-correcting.
    """
    anchor, h, hp = _h_anchor(ell, eta, rho, omega)
    prop = ode_propagate(ell, eta, anchor, CoulombQuad(h, hp, 0.0, 0.0), rho)
    return prop.f, prop.fp


def _is_real_point(ell: complex, eta: complex, rho: complex) -> bool:
    return ell.imag == 0.0 and eta.imag == 0.0 and rho.imag == 0.0


def _series_anchor(params: ComplexParams):
    """Largest radius at or below |rho| where the series passes its guards."""
    ell, eta, rho = params.ell, params.eta, params.rho
    unit = rho / abs(rho)
    r = min(abs(rho), SERIES_RADIUS * 0.98)
    last_exc = None
    for _ in range(24):
        anchor = r * unit
        try:
            f, fp, _ = f_series(ComplexParams(ell, eta, anchor, params.omega))
            return anchor, f, fp
        except ConvergenceError as exc:
            last_exc = exc
            r *= 0.82
            if r < 0.3:
                break
    raise last_exc


# rough per-route accuracy estimates used to pick between valid routes
_SERIES_EPS = 5e-15           # times the cancellation ratio
_CHAIN_EST = 1e-11            # inward-propagated H, relative


def _series_route(params: ComplexParams, notes: dict):
    """(F, F', est) by series, or None."""
    try:
        f, fp, _, cancel = _f_series_core(params)
        notes["series"] = "ok"
        return f, fp, max(cancel, 1.0) * _SERIES_EPS
    except ConvergenceError as exc:
        notes["series"] = str(exc)
        return None


def _asym_route(params: ComplexParams, notes: dict):
    """(quad, estF, estG) from H(+/-) at the point itself, or None.

    The estimates combine the smallest-term ratios with the cancellation
    incurred when |F| or |G| is far below |H| (e.g. the regular solution
    at small rho for integer l, eta = 0, where the expansion terminates).
    """
    ell, eta, rho = params.ell, params.eta, params.rho
    try:
        hp_, hpd, d1 = h_asymptotic(ComplexParams(ell, eta, rho, 1))
        hm_, hmd, d2 = h_asymptotic(ComplexParams(ell, eta, rho, -1))
    except AsymptoticFailureError as exc:
        notes["asymptotic"] = str(exc)
        return None
    notes["asymptotic"] = "ok"
    quad = CoulombQuad(f=(hp_ - hm_) / 2j, fp=(hpd - hmd) / 2j,
                       g=(hp_ + hm_) / 2.0, gp=(hpd + hmd) / 2.0)
    ratio = d1.last_term_ratio + d2.last_term_ratio
    hmag = abs(hp_) + abs(hm_)
    est_f = ratio + 1e-16 * hmag / max(abs(quad.f), 1e-300)
    est_g = ratio + 1e-16 * hmag / max(abs(quad.g), 1e-300)
    return quad, est_f, est_g


def exact_quad(params: ComplexParams) -> CoulombQuad:
    """F, F', G, G' by the most accurate available exact route at one point.

    F comes from the power series (guard-checked; it has no cancellation at
    and below the turning point) or from H(+/-) where that expansion is the
    more accurate, with outward propagation of series values as a last
    resort.  G comes from H(+/-) where the expansion converges; otherwise
    the inward-growing member H^w (w = sign Im rho) is propagated in from
    the asymptotic region and G is reconstructed as H^w - i w F, so the
    exponentially small correction to G never rides on an unstable
    integration.  Raises NoStrategyError with per-route diagnostics when
    every route fails.
    """
    ell, eta, rho = params.ell, params.eta, params.rho
    notes: dict[str, str] = {}

    ser = _series_route(params, notes)
    asym = _asym_route(params, notes)

    f = fp = None
    if ser is not None:
        f, fp, est_f = ser
    if asym is not None:
        quad, est_af, est_ag = asym
        if f is None or est_af < est_f:
            f, fp = quad.f, quad.fp
        return CoulombQuad(f=f, fp=fp, g=quad.g, gp=quad.gp)

    om = _omega_star(rho)
    h = hp = None
    try:
        h, hp = _h_inward(ell, eta, rho, om)
        notes["h_ode_inward"] = "ok"
    except (AsymptoticFailureError, PathError, ConvergenceError) as exc:
        notes["h_ode_inward"] = str(exc)

    if h is not None and _is_real_point(ell, eta, rho):
        # real parameters: H^- = conj(H^+), so F is Im(H^+)
        if f is None or est_f > _CHAIN_EST:
            f = complex(h.imag * om, 0.0)
            fp = complex(hp.imag * om, 0.0)
            notes["f_from_h"] = "ok"

    if f is None:
        try:
            anchor, fa, fpa = _series_anchor(params)
            prop = ode_propagate(ell, eta, anchor,
                                 CoulombQuad(fa, fpa, 0.0, 0.0), rho)
            f, fp = prop.f, prop.fp
            notes["f_ode_outward"] = "ok"
        except (ConvergenceError, PathError) as exc:
            notes["f_ode_outward"] = str(exc)

    if f is None or h is None:
        raise NoStrategyError(
            f"no exact route covers rho = {rho!r}", diagnostics=notes)
    jw = 1j * om
    return CoulombQuad(f=f, fp=fp, g=h - jw * f, gp=hp - jw * fp)


def exact_quad_grid(ell: complex, eta: complex, rhos) -> list:
    """Evaluate ``exact_quad`` on a grid of rho values sharing one ray.

    The inward-growing H pair is carried along the sorted grid in a single
    traversal instead of re-propagating from the asymptotic region per
    point, so a whole sweep costs one pass.  Returns one CoulombQuad or one
    CoulwkbError per input point, in input order.
    """
    ell = complex(ell)
    eta = complex(eta)
    pts = [complex(r) for r in rhos]
    out: list = [None] * len(pts)
    if not pts:
        return out
    order = sorted(range(len(pts)), key=lambda i: -abs(pts[i]))

    om = _omega_star(pts[order[0]])
    chain_rho = None
    chain_h = None
    try:
        chain_rho, h, hp = _h_anchor(ell, eta, pts[order[0]], om)
        chain_h = (h, hp)
    except AsymptoticFailureError:
        pass

    real_ray = ell.imag == 0.0 and eta.imag == 0.0

    for i in order:
        rho = pts[i]
        try:
            params = ComplexParams(ell, eta, rho)
        except Exception as exc:                      # invalid grid point
            out[i] = exc
            continue
        f = fp = None
        est_f = math.inf
        try:
            f, fp, _, cancel = _f_series_core(params)
            est_f = max(cancel, 1.0) * _SERIES_EPS
        except ConvergenceError:
            pass
        if chain_h is not None:
            try:
                if rho != chain_rho:
                    prop = ode_propagate(ell, eta, chain_rho,
                                         CoulombQuad(chain_h[0], chain_h[1],
                                                     0.0, 0.0), rho)
                    chain_h = (prop.f, prop.fp)
                    chain_rho = rho
                h, hp = chain_h
                if real_ray and rho.imag == 0.0 and est_f > _CHAIN_EST:
                    f = complex(h.imag * om, 0.0)
                    fp = complex(hp.imag * om, 0.0)
                if f is not None:
                    jw = 1j * om
                    out[i] = CoulombQuad(f=f, fp=fp, g=h - jw * f,
                                         gp=hp - jw * fp)
            except (PathError, ConvergenceError) as exc:
                chain_h = None
                out[i] = exc
        if out[i] is None:
            try:
                out[i] = exact_quad(params)
            except Exception as exc:
                out[i] = exc
    return out
