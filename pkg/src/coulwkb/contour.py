"""Branch-continuous WKB evaluation along complex-rho contours.

The Coulomb functions are single-valued on any contour that avoids the
negative real rho axis, but the elementary functions inside the closed-form
phase map have their own principal cuts, and a contour may drag their
arguments across them.  This module walks a contour point by point, watches
every branched argument (the log term, the arctan/arctanh term, the arccos
term, the outer 2/3-power logarithm, the phi' root) and bumps the matching
sheet index whenever an argument crosses its principal cut, so the
evaluated phi, and with it F and G, stays continuous along the path.

Crossings are detected by a sign change of the transverse coordinate at
the cut (e.g. Im of a log argument changing sign at negative Re); value
jumps that survive correction trigger interval halving before being
reported as errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import PathError, StepRefinementError
from .wkbcore import (
    ComplexParams,
    _assemble_quad,
    phi_jet_terms,
    turning_geometry,
)

DEFAULT_STEP_DIVISOR = 50.0   # default max_step = |rho_t| / 50
_MAX_DEPTH = 16
_JUMP_SAFETY = 10.0


@dataclass(frozen=True)
class BranchState:
    """Sheet indices for every branched term of the closed-form phase map.

    All indices are zero at a contour start; they change by one step at a
    time, only when the matching argument crosses its principal cut.
    """

    log_term: int = 0
    atan_term: int = 0
    acos_term: int = 0
    outer_power: int = 0
    dphi_root: int = 0

    def as_tuple(self):
        return (self.log_term, self.atan_term, self.acos_term,
                self.outer_power, self.dphi_root)


def _segment_crosses_cut(p: complex, q: complex) -> bool:
    if p.imag == 0.0 or q.imag == 0.0 or p.imag * q.imag > 0.0:
        return False
    t = p.imag / (p.imag - q.imag)
    return (p.real + t * (q.real - p.real)) <= 0.0


@dataclass(frozen=True)
class ContourPath:
    """A polyline in the rho plane avoiding the closed negative real axis.

    ``max_step`` bounds |drho| between consecutive points after refinement;
    when None, |rho_t|/50 is used at evaluation time.
    """

    points: tuple
    max_step: float | None = None

    def __post_init__(self):
        pts = tuple(complex(p) for p in self.points)
        if len(pts) < 2:
            raise PathError("a contour needs at least two points")
        for p in pts:
            if p.imag == 0.0 and p.real <= 0.0:
                raise PathError(
                    f"contour point {p!r} lies on the closed negative real axis")
        for p, q in zip(pts, pts[1:]):
            if _segment_crosses_cut(p, q):
                raise PathError(
                    f"contour segment {p!r} -> {q!r} crosses the negative "
                    f"real axis")
        if self.max_step is not None and not self.max_step > 0.0:
            raise PathError("max_step must be positive")
        object.__setattr__(self, "points", pts)

    def refined(self, fallback_step: float) -> list:
        """Points with every segment subdivided to at most the step bound."""
        step = self.max_step if self.max_step is not None else fallback_step
        out = [self.points[0]]
        for a, b in zip(self.points, self.points[1:]):
            n = max(1, math.ceil(abs(b - a) / step))
            for k in range(1, n + 1):
                p = a + (b - a) * (k / n)
                if p.imag == 0.0 and p.real <= 0.0:
                    raise PathError(
                        f"refined point {p!r} lies on the closed negative real axis")
                out.append(p)
        return out


def _cross_neg_axis(prev: complex, new: complex) -> int:
    """+1/-1 when the segment crosses the negative real axis, else 0."""
    if prev.imag == 0.0 or new.imag == 0.0 or prev.imag * new.imag > 0.0:
        return 0
    t = prev.imag / (prev.imag - new.imag)
    if (prev.real + t * (new.real - prev.real)) < 0.0:
        return 1 if prev.imag > 0.0 else -1
    return 0


def _cross_atan(prev: complex, new: complex) -> int:
    """Crossings of the arctan cuts (imaginary axis, |Im| >= 1)."""
    if prev.real == 0.0 or new.real == 0.0 or prev.real * new.real > 0.0:
        return 0
    t = prev.real / (prev.real - new.real)
    if abs(prev.imag + t * (new.imag - prev.imag)) > 1.0:
        return 1 if prev.real > 0.0 else -1
    return 0


def _cross_atanh(prev: complex, new: complex) -> int:
    """Crossings of the arctanh cuts (real axis, |Re| >= 1)."""
    if prev.imag == 0.0 or new.imag == 0.0 or prev.imag * new.imag > 0.0:
        return 0
    t = prev.imag / (prev.imag - new.imag)
    if abs(prev.real + t * (new.real - prev.real)) > 1.0:
        return 1 if prev.imag > 0.0 else -1
    return 0


def _acos_crossed(k: int, prev: complex, new: complex) -> int:
    """New arccos sheet index after a possible cut crossing.

    Both arccos cuts flip the sign sheet (the monodromy around +/-1 has
    order two), so the index toggles between neighbours instead of
    accumulating: right cut pairs {2n, 2n-1}, left cut pairs {2n, 2n+1}.
    """
    if prev.imag == 0.0 or new.imag == 0.0 or prev.imag * new.imag > 0.0:
        return k
    t = prev.imag / (prev.imag - new.imag)
    re_c = prev.real + t * (new.real - prev.real)
    if re_c > 1.0:
        return k - 1 if k % 2 == 0 else k + 1
    if re_c < -1.0:
        return k + 1 if k % 2 == 0 else k - 1
    return k


def _advance_state(state: BranchState, prev_args: dict, new_args: dict) -> BranchState:
    """Update sheet indices for cuts crossed between two argument sets.

    Only terms present in both argument sets are compared; a region handoff
    changes the closed form, so its terms are not comparable across it and
    continuity there is enforced on phi itself instead.
    """
    upd = {}
    if "log" in prev_args and "log" in new_args:
        d = _cross_neg_axis(prev_args["log"], new_args["log"])
        if d:
            upd["log_term"] = state.log_term + d
    if "outer" in prev_args and "outer" in new_args:
        d = _cross_neg_axis(prev_args["outer"], new_args["outer"])
        if d:
            upd["outer_power"] = state.outer_power + d
    if "atan" in prev_args and "atan" in new_args:
        d = _cross_atan(prev_args["atan"], new_args["atan"])
        if d:
            upd["atan_term"] = state.atan_term + d
    if "atanh" in prev_args and "atanh" in new_args:
        d = _cross_atanh(prev_args["atanh"], new_args["atanh"])
        if d:
            upd["atan_term"] = state.atan_term + d
    if "acos" in prev_args and "acos" in new_args:
        k = _acos_crossed(state.acos_term, prev_args["acos"], new_args["acos"])
        if k != state.acos_term:
            upd["acos_term"] = k
    return replace(state, **upd) if upd else state


def _eval(x: complex, a: complex, state: BranchState):
    return phi_jet_terms(x, a, state.log_term, state.atan_term,
                         state.acos_term, state.outer_power, state.dphi_root)


@dataclass(frozen=True)
class _Node:
    rho: complex
    x: complex
    jet: object
    args: dict
    state: BranchState


def _match_sheets(x: complex, a: complex, state: BranchState, jet_prev):
    """Search neighbouring sheet indices for the continuation of the jet.

    A region handoff swaps one closed form for the other; the new form
    represents the same phi, but possibly on non-principal sheets of its
    own elementary terms.  The continuation is unique, so the correct
    combination is the one whose (phi, phi') pair lands closest to the
    incoming values; matching phi alone would leave the phi' root free.
    Returns (jet, args, state, miss) for the best candidate.
    """
    best = None
    for d_out in (0, -1, 1):
        for d_ac in (0, -1, 1):
            for d_at in (0, -1, 1):
                for d_dp in (0, 1):
                    cand = replace(
                        state,
                        outer_power=state.outer_power + d_out,
                        acos_term=state.acos_term + d_ac,
                        atan_term=state.atan_term + d_at,
                        dphi_root=state.dphi_root + d_dp,
                    )
                    try:
                        jet, args = _eval(x, a, cand)
                    except Exception:
                        continue
                    miss = (abs(jet.phi - jet_prev.phi)
                            + abs(jet.dphi - jet_prev.dphi))
                    if best is None or miss < best[3]:
                        best = (jet, args, cand, miss)
    return best


def _step(prev: _Node, rho: complex, a: complex, rho_t: complex,
          depth: int) -> _Node:
    """Continue the phase map from ``prev`` to ``rho``, refining on jumps."""
    x = rho / rho_t - 1.0
    jet, args = _eval(x, a, prev.state)
    state = prev.state
    handoff = (x.real >= 0.0) != (prev.x.real >= 0.0)
    if not handoff:
        # within one region the term arguments deform continuously and cut
        # crossings are detectable; across a handoff the closed form changes
        # and the arguments are not comparable
        state = _advance_state(prev.state, prev.args, args)
        if state is not prev.state:
            jet, args = _eval(x, a, state)

    scale = max(abs(jet.dphi), abs(prev.jet.dphi), 0.05)
    dx = abs(x - prev.x)
    bound = _JUMP_SAFETY * scale * dx + 1e-9
    dbound = _JUMP_SAFETY * max(abs(jet.d2phi), abs(prev.jet.d2phi), 0.05) * dx + 1e-8

    if abs(jet.phi - prev.jet.phi) > bound:
        if handoff:
            found = _match_sheets(x, a, state, prev.jet)
            if found is not None and found[3] <= bound + dbound:
                jet, args, state, _ = found
                return _Node(rho=rho, x=x, jet=jet, args=args, state=state)
        if depth >= _MAX_DEPTH:
            raise StepRefinementError(
                f"phi jump {abs(jet.phi - prev.jet.phi):.3e} at rho={rho!r} "
                f"not resolved by refinement")
        mid = 0.5 * (prev.rho + rho)
        if mid.imag == 0.0 and mid.real <= 0.0:
            raise PathError(
                f"refinement pushed a point onto the cut ray at {mid!r}")
        node_mid = _step(prev, mid, a, rho_t, depth + 1)
        return _step(node_mid, rho, a, rho_t, depth + 1)

    # phi is continuous here; a clean sign flip of the phi' root shows up
    # as dphi landing closer to -dphi_prev than to +dphi_prev
    if abs(jet.dphi + prev.jet.dphi) < abs(jet.dphi - prev.jet.dphi):
        state = replace(state, dphi_root=state.dphi_root + 1
                        if state.dphi_root % 2 == 0 else state.dphi_root - 1)
        jet, args = _eval(x, a, state)
    return _Node(rho=rho, x=x, jet=jet, args=args, state=state)


def continue_quad_detailed(ell: complex, eta: complex, path: ContourPath):
    """(refined points, quads, branch states) along a contour.

    The first point is evaluated on principal branches (all sheet indices
    zero); each subsequent point carries the accumulated BranchState.
    """
    geom = turning_geometry(ComplexParams(ell, eta, path.points[0]))
    rho_t, a = geom.rho_t, geom.a
    pts = path.refined(abs(rho_t) / DEFAULT_STEP_DIVISOR)

    x0 = pts[0] / rho_t - 1.0
    jet0, args0 = _eval(x0, a, BranchState())
    node = _Node(rho=pts[0], x=x0, jet=jet0, args=args0, state=BranchState())
    quads = [_assemble_quad(rho_t, jet0)]
    states = [node.state]
    for rho in pts[1:]:
        node = _step(node, rho, a, rho_t, 0)
        quads.append(_assemble_quad(rho_t, node.jet))
        states.append(node.state)
    return pts, quads, states


def continue_quad(ell: complex, eta: complex, path: ContourPath) -> list:
    """WKB quads at every refined point of a contour, branch-continuously.

    Equivalent to :func:`coulwkb.wkbcore.wkb_quad` wherever no cut is
    crossed; on contours that do cross elementary-function cuts the sheet
    corrections keep F and G continuous instead of jumping.
    """
    return continue_quad_detailed(ell, eta, path)[1]
