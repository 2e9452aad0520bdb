"""Declarative scenes: strict JSON schema, paper presets, and resolution.

A scenario file fixes everything a run needs: shapes, springs, contact
pairing, control boundary conditions, and every solver and search setting.
Loading is strict (unknown keys are errors that name the offending field),
fills documented defaults, and then resolves the scene-dependent pieces:

* the initial equilibrium state, proxies included,
* the haptic-obstacle margin ``lambda_det = lambda_rel * det(H_zz)`` at
  that equilibrium (or an explicitly given absolute margin).  The default
  ``lambda_rel`` is 0: the determinant is a product over every state
  coordinate, and the factors of unloaded proxies drift across orders of
  magnitude with pose while the scene stays perfectly stable, so any
  positive rest-relative margin misfires on that drift.  Zero turns the
  guard into a determinant sign test, which is exactly the loss of the
  stable branch.
* the failure penalty weight: when the file leaves it null, ten times the
  effort of the straight-line (zero-weight) policy run to completion with
  the obstacle guard disabled, per meter of leftover goal distance.  The
  guard must be off for the measurement, otherwise a scene whose straight
  push dies early would get a penalty far too small to rank failures
  behind successful insertions.

Everything resolved is echoed back into the document, so a saved scenario
reloads to byte-identical canonical JSON and its hash pins a run.
"""

from __future__ import annotations

import copy
import dataclasses
import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import contact as ct
from . import dmp as dmp_mod
from . import manifold, rollout, runio
from .errors import HmpError, ParseError, UnknownPreset, ValidationError
from .geometry import CornerId, Superellipse
from .optimizer import BboConfig
from .potential import BookParams, PotentialParams, SceneState

__all__ = ["Scenario", "load", "from_dict", "preset", "preset_names", "SCHEMA_VERSION"]

log = logging.getLogger("hmp.scenario")

SCHEMA_VERSION = 1
MANIPULATED = "manipulated"

_MISSING = object()


def _fail(path, msg):
    raise ValidationError(f"{path}: {msg}")


def _take(section, path, key, default=_MISSING):
    if key in section:
        return section.pop(key)
    if default is _MISSING:
        _fail(f"{path}.{key}" if path else key, "missing required key")
    return copy.deepcopy(default)


def _done(section, path):
    if section:
        name = sorted(section)[0]
        _fail(f"{path}.{name}" if path else name, "unknown key")


def _num(value, path, positive=False, nonneg=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(path, f"expected a number, got {value!r}")
    v = float(value)
    if not math.isfinite(v):
        _fail(path, "must be finite")
    if positive and v <= 0.0:
        _fail(path, f"must be positive, got {v!r}")
    if nonneg and v < 0.0:
        _fail(path, f"must be non-negative, got {v!r}")
    return v


def _int(value, path, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(path, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        _fail(path, f"must be at least {minimum}, got {value}")
    return value


def _str(value, path, choices=None):
    if not isinstance(value, str):
        _fail(path, f"expected a string, got {value!r}")
    if choices is not None and value not in choices:
        _fail(path, f"must be one of {sorted(choices)}, got {value!r}")
    return value


def _vec(value, path, n, positive=False):
    if not isinstance(value, (list, tuple)) or len(value) != n:
        _fail(path, f"expected a list of {n} numbers")
    return [_num(v, f"{path}[{i}]", positive=positive) for i, v in enumerate(value)]


def _shape(section, path):
    half = _vec(_take(section, path, "half_extents"), f"{path}.half_extents", 2, positive=True)
    roundness = _num(_take(section, path, "roundness", 0.2), f"{path}.roundness")
    _done(section, path)
    try:
        return Superellipse(a1=half[0], a2=half[1], eps=roundness)
    except ValueError as e:
        _fail(path, str(e))


def _body_code(name, path, n_shelf):
    if name == MANIPULATED:
        return ct.GRASPED
    if name.startswith("shelf_"):
        try:
            idx = int(name[len("shelf_"):])
        except ValueError:
            idx = -1
        if 0 <= idx < n_shelf:
            return idx
    _fail(path, f"unknown body {name!r}; use '{MANIPULATED}' or 'shelf_<i>' with i < {n_shelf}")


@dataclass
class Scenario:
    """A fully validated, fully resolved scene plus all run settings."""

    name: str
    description: str
    params: PotentialParams
    state0: SceneState
    dmp: dmp_mod.DmpParams
    manifold_config: manifold.ManifoldConfig
    rollout_config: rollout.RolloutConfig
    bbo: BboConfig
    resolved: dict = field(repr=False)

    @property
    def u0(self):
        return self.dmp.u0

    @property
    def goal(self):
        return self.dmp.goal

    @property
    def lambda_det(self):
        return self.manifold_config.lambda_det

    @property
    def canonical_text(self):
        return runio.canonical_json(self.resolved)

    @property
    def sha256(self):
        return hashlib.sha256(self.canonical_text.encode()).hexdigest()

    def save(self, path):
        return runio.atomic_write_text(path, self.canonical_text)

    def zero_theta(self):
        return self.dmp.zero_theta()

    def simulate(self, theta, until=None, lambda_det=None):
        return rollout.integrate(
            self.state0,
            theta,
            self.params,
            self.dmp,
            self.rollout_config,
            lambda_det=self.lambda_det if lambda_det is None else lambda_det,
            until=until,
        )

    def policy_cost(self, theta):
        r = self.simulate(theta)
        return rollout.cost(r, self.dmp), r


def load(path):
    """Parse, validate, and resolve a scenario file."""
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: {e}") from e
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be a JSON object")
    return from_dict(doc)


def from_dict(doc):
    """Build a Scenario from an already-parsed document (not mutated)."""
    doc = copy.deepcopy(doc)
    if not isinstance(doc, dict):
        raise ParseError("scenario document must be a mapping")
    doc.pop("resolved", None)  # derived echoes; recomputed below

    version = _take(doc, "", "schema_version")
    if version != SCHEMA_VERSION:
        _fail("schema_version", f"expected {SCHEMA_VERSION}, got {version!r}")
    name = _str(_take(doc, "", "name"), "name")
    if not name:
        _fail("name", "must be non-empty")
    description = _str(_take(doc, "", "description", ""), "description")

    grasped_shape = _shape(_dict(_take(doc, "", "manipulated"), "manipulated"), "manipulated")

    shelf_raw = _take(doc, "", "shelf_books", [])
    if not isinstance(shelf_raw, list):
        _fail("shelf_books", "expected a list")
    books = []
    for i, entry in enumerate(shelf_raw):
        p = f"shelf_books[{i}]"
        sec = _dict(entry, p)
        shape_sec = {
            "half_extents": _take(sec, p, "half_extents"),
            "roundness": _take(sec, p, "roundness", 0.2),
        }
        shape = _shape(shape_sec, p)
        y = _num(_take(sec, p, "y", 0.0), f"{p}.y")
        rest_x = _num(_take(sec, p, "rest_x"), f"{p}.rest_x")
        rest_theta = _num(_take(sec, p, "rest_theta", 0.0), f"{p}.rest_theta")
        stiff = _vec(_take(sec, p, "stiffness"), f"{p}.stiffness", 2, positive=True)
        _done(sec, p)
        books.append(
            BookParams(shape, y=y, rest_x=rest_x, rest_theta=rest_theta,
                       k_x=stiff[0], k_theta=stiff[1])
        )

    anchor_raw = _take(doc, "", "anchor", None)
    anchor_k = anchor_rest = None
    if anchor_raw is not None:
        p = "anchor"
        sec = _dict(anchor_raw, p)
        anchor_k = _vec(_take(sec, p, "stiffness"), f"{p}.stiffness", 3)
        anchor_rest = _vec(_take(sec, p, "rest", [0.0, 0.0, 0.0]), f"{p}.rest", 3)
        _done(sec, p)
        if any(k < 0.0 for k in anchor_k):
            _fail("anchor.stiffness", "must be non-negative")

    p = "control"
    sec = _dict(_take(doc, "", p), p)
    k_c = _vec(_take(sec, p, "stiffness"), f"{p}.stiffness", 3, positive=True)
    u0 = _vec(_take(sec, p, "u0"), f"{p}.u0", 3)
    goal = _vec(_take(sec, p, "goal"), f"{p}.goal", 3)
    duration = _num(_take(sec, p, "duration", 10.0), f"{p}.duration", positive=True)
    _done(sec, p)

    p = "contact"
    sec = _dict(_take(doc, "", p, {}), p)
    k_min = _num(_take(sec, p, "k_min", 1e-3), f"{p}.k_min", positive=True)
    k_max = _num(_take(sec, p, "k_max", 1e4), f"{p}.k_max", positive=True)
    d0 = _num(_take(sec, p, "d0", 0.05), f"{p}.d0", positive=True)
    pairs_raw = _take(sec, p, "pairs", [])
    _done(sec, p)
    if not isinstance(pairs_raw, list):
        _fail("contact.pairs", "expected a list")
    pairs = []
    for j, entry in enumerate(pairs_raw):
        pp = f"contact.pairs[{j}]"
        psec = _dict(entry, pp)
        owner_name = _str(_take(psec, pp, "corner_of"), f"{pp}.corner_of")
        corner = _take(psec, pp, "corner")
        surface_name = _str(_take(psec, pp, "surface"), f"{pp}.surface")
        _done(psec, pp)
        if (
            not isinstance(corner, (list, tuple))
            or len(corner) != 2
            or any(isinstance(c, bool) or c not in (-1, 1) for c in corner)
        ):
            _fail(f"{pp}.corner", "expected a [sx, sy] pair of -1/+1 signs")
        owner = _body_code(owner_name, f"{pp}.corner_of", len(books))
        surface = _body_code(surface_name, f"{pp}.surface", len(books))
        if owner == surface:
            _fail(pp, "corner_of and surface must be different bodies")
        pairs.append(ct.ProxyPair(owner, CornerId(int(corner[0]), int(corner[1])), surface, j))

    p = "dmp"
    sec = _dict(_take(doc, "", p, {}), p)
    n_basis = _int(_take(sec, p, "n_basis", 10), f"{p}.n_basis", minimum=2)
    alpha_v = _num(_take(sec, p, "alpha_v", 25.0), f"{p}.alpha_v", positive=True)
    beta_v = _num(_take(sec, p, "beta_v", 6.25), f"{p}.beta_v", positive=True)
    x_end = _num(_take(sec, p, "x_end", 1e-3), f"{p}.x_end", positive=True)
    spacing = _str(_take(sec, p, "spacing", "time"), f"{p}.spacing", choices={"time", "phase"})
    width_overlap = _num(_take(sec, p, "width_overlap", 0.75), f"{p}.width_overlap", positive=True)
    _done(sec, p)

    p = "manifold"
    sec = _dict(_take(doc, "", p, {}), p)
    equilibrium_tol = _num(_take(sec, p, "equilibrium_tol", 1e-2), f"{p}.equilibrium_tol", positive=True)
    max_relax_steps = _int(_take(sec, p, "max_relax_steps", 200), f"{p}.max_relax_steps", minimum=1)
    lambda_rel_raw = _take(sec, p, "lambda_rel", None)
    lambda_det_raw = _take(sec, p, "lambda_det", None)
    _done(sec, p)

    p = "rollout"
    sec = _dict(_take(doc, "", p, {}), p)
    dt = _num(_take(sec, p, "dt", 1e-3), f"{p}.dt", positive=True)
    export_stride = _int(_take(sec, p, "export_stride", 10), f"{p}.export_stride", minimum=1)
    newton_step_fraction = _num(
        _take(sec, p, "newton_step_fraction", 0.05), f"{p}.newton_step_fraction", positive=True
    )
    alpha_p = _num(_take(sec, p, "alpha_p", 1e3), f"{p}.alpha_p", positive=True)
    proxy_flow = _str(_take(sec, p, "proxy_flow", "newton"), f"{p}.proxy_flow",
                      choices={"newton", "gradient"})
    gamma_rate_cap = _num(_take(sec, p, "gamma_rate_cap", 100.0), f"{p}.gamma_rate_cap", positive=True)
    workspace_pos = _num(_take(sec, p, "workspace_pos", 0.5), f"{p}.workspace_pos", positive=True)
    workspace_angle = _num(
        _take(sec, p, "workspace_angle", math.pi / 2.0), f"{p}.workspace_angle", positive=True
    )
    workspace_zb_raw = _take(sec, p, "workspace_zb", None)
    penalty_raw = _take(sec, p, "penalty_weight", None)
    _done(sec, p)
    if penalty_raw is not None:
        penalty_raw = _num(penalty_raw, "rollout.penalty_weight", nonneg=True)
    workspace_zb = None
    if workspace_zb_raw is not None:
        if not isinstance(workspace_zb_raw, (list, tuple)) or len(workspace_zb_raw) != 3:
            _fail("rollout.workspace_zb", "expected three [lo, hi] pairs")
        box = []
        for i, entry in enumerate(workspace_zb_raw):
            bounds = _vec(entry, f"rollout.workspace_zb[{i}]", 2)
            if not bounds[0] < bounds[1]:
                _fail(f"rollout.workspace_zb[{i}]", "lower bound must be below the upper")
            box.append((bounds[0], bounds[1]))
        workspace_zb = tuple(box)

    p = "bbo"
    sec = _dict(_take(doc, "", p, {}), p)
    sigma0_raw = _take(sec, p, "sigma0", 20.0)
    if isinstance(sigma0_raw, (list, tuple)):
        sigma0 = tuple(_vec(sigma0_raw, f"{p}.sigma0", 3, positive=True))
    else:
        sigma0 = _num(sigma0_raw, f"{p}.sigma0", positive=True)
    bbo_kwargs = dict(
        n_rollouts=_int(_take(sec, p, "n_rollouts", 15), f"{p}.n_rollouts", minimum=2),
        sigma0=sigma0,
        decay=_num(_take(sec, p, "decay", 0.97), f"{p}.decay", positive=True),
        temperature=_num(_take(sec, p, "temperature", 10.0), f"{p}.temperature", positive=True),
        max_iters=_int(_take(sec, p, "max_iters", 40), f"{p}.max_iters", minimum=1),
        convergence_eps=_num(_take(sec, p, "convergence_eps", 1e-3), f"{p}.convergence_eps", nonneg=True),
        seed=_int(_take(sec, p, "seed", 0), f"{p}.seed", minimum=0),
    )
    _done(doc, "")

    try:
        bbo = BboConfig(**bbo_kwargs)
    except ValueError as e:
        _fail("bbo", str(e))
    try:
        profile = ct.StiffnessProfile(k_min=k_min, k_max=k_max, d0=d0)
    except ValueError as e:
        _fail("contact", str(e))
    try:
        params = PotentialParams(
            k_c=np.array(k_c),
            grasped_shape=grasped_shape,
            books=tuple(books),
            pairs=tuple(pairs),
            profile=profile,
            anchor_k=None if anchor_k is None else np.array(anchor_k),
            anchor_rest=None if anchor_rest is None else np.array(anchor_rest),
        )
    except ValueError as e:
        _fail("contact.pairs", str(e))
    try:
        rcfg = rollout.RolloutConfig(
            dt=dt,
            export_stride=export_stride,
            newton_step_fraction=newton_step_fraction,
            alpha_p=alpha_p,
            proxy_flow=proxy_flow,
            gamma_rate_cap=gamma_rate_cap,
            workspace_pos=workspace_pos,
            workspace_angle=workspace_angle,
            workspace_zb=workspace_zb,
            penalty_weight=penalty_raw,
        )
    except ValueError as e:
        _fail("rollout", str(e))
    try:
        dparams = dmp_mod.DmpParams(
            u0=np.array(u0),
            goal=np.array(goal),
            duration=duration,
            n_basis=n_basis,
            alpha_v=alpha_v,
            beta_v=beta_v,
            x_end=x_end,
            spacing=spacing,
            width_overlap=width_overlap,
        )
    except ValueError as e:
        _fail("dmp", str(e))

    _warn_if_tight(grasped_shape, books)

    # -- resolution: equilibrium, obstacle margin, penalty weight ----------
    guess = SceneState(
        np.array(u0),
        np.array([[b.rest_x, b.rest_theta] for b in books]).reshape(-1, 2),
        np.zeros(len(pairs)),
    )
    boot_cfg = manifold.ManifoldConfig(
        eta=rcfg.eta_for_dt,
        lambda_det=0.0,
        equilibrium_tol=equilibrium_tol,
        max_relax_steps=max_relax_steps,
    )
    try:
        if pairs:
            guess = manifold.refresh_proxies(guess, params)
        state0 = manifold.solve_equilibrium(guess, np.array(u0), params, boot_cfg)
    except HmpError as e:
        _fail("control.u0", f"no stable initial equilibrium there: {e}")
    _, det_rest = manifold.control_hessian(state0, np.array(u0), params)

    if lambda_rel_raw is not None:
        # given, or echoed from a resolved file: the relative margin is
        # authoritative and the absolute one is recomputed from it
        lambda_rel = _num(lambda_rel_raw, "manifold.lambda_rel", nonneg=True)
        lambda_det = lambda_rel * det_rest
    elif lambda_det_raw is not None:
        lambda_rel = None
        lambda_det = _num(lambda_det_raw, "manifold.lambda_det")
    else:
        # default: exact determinant sign test
        lambda_rel = 0.0
        lambda_det = 0.0
    mcfg = manifold.ManifoldConfig(
        eta=rcfg.eta_for_dt,
        lambda_det=lambda_det,
        equilibrium_tol=equilibrium_tol,
        max_relax_steps=max_relax_steps,
    )

    straight = rollout.integrate(
        state0, dparams.zero_theta(), params, dparams, rcfg, lambda_det=-math.inf
    )
    straight_phi = straight.phi_end
    penalty = penalty_raw if penalty_raw is not None else 10.0 * straight_phi
    rcfg = dataclasses.replace(rcfg, penalty_weight=penalty)

    resolved = {
        "schema_version": SCHEMA_VERSION,
        "name": name,
        "description": description,
        "manipulated": {
            "half_extents": [grasped_shape.a1, grasped_shape.a2],
            "roundness": grasped_shape.eps,
        },
        "shelf_books": [
            {
                "half_extents": [b.shape.a1, b.shape.a2],
                "roundness": b.shape.eps,
                "y": b.y,
                "rest_x": b.rest_x,
                "rest_theta": b.rest_theta,
                "stiffness": [b.k_x, b.k_theta],
            }
            for b in books
        ],
        "anchor": None if anchor_k is None else {"stiffness": anchor_k, "rest": anchor_rest},
        "control": {"stiffness": k_c, "u0": u0, "goal": goal, "duration": duration},
        "contact": {
            "k_min": k_min,
            "k_max": k_max,
            "d0": d0,
            "pairs": [
                {
                    "corner_of": _body_name(pr.owner),
                    "corner": [pr.corner.sx, pr.corner.sy],
                    "surface": _body_name(pr.partner),
                }
                for pr in pairs
            ],
        },
        "dmp": {
            "n_basis": n_basis,
            "alpha_v": alpha_v,
            "beta_v": beta_v,
            "x_end": x_end,
            "spacing": spacing,
            "width_overlap": width_overlap,
        },
        "manifold": {
            "equilibrium_tol": equilibrium_tol,
            "max_relax_steps": max_relax_steps,
            "lambda_rel": lambda_rel,
            "lambda_det": lambda_det,
        },
        "rollout": {
            "dt": dt,
            "export_stride": export_stride,
            "newton_step_fraction": newton_step_fraction,
            "alpha_p": alpha_p,
            "proxy_flow": proxy_flow,
            "gamma_rate_cap": gamma_rate_cap,
            "workspace_pos": workspace_pos,
            "workspace_angle": workspace_angle,
            "workspace_zb": None if workspace_zb is None else [list(b) for b in workspace_zb],
            "penalty_weight": penalty,
        },
        "bbo": {
            "n_rollouts": bbo.n_rollouts,
            "sigma0": list(bbo.sigma0) if isinstance(bbo.sigma0, tuple) else bbo.sigma0,
            "decay": bbo.decay,
            "temperature": bbo.temperature,
            "max_iters": bbo.max_iters,
            "convergence_eps": bbo.convergence_eps,
            "seed": bbo.seed,
        },
        "resolved": {
            "det_hzz_rest": det_rest,
            "straight_line_phi": straight_phi,
            "straight_line_termination": straight.termination.value,
            "equilibrium": {
                "zb": state0.zb.tolist(),
                "books": state0.books.tolist(),
                "gammas": state0.gammas.tolist(),
            },
        },
    }

    return Scenario(
        name=name,
        description=description,
        params=params,
        state0=state0,
        dmp=dparams,
        manifold_config=mcfg,
        rollout_config=rcfg,
        bbo=bbo,
        resolved=resolved,
    )


def _dict(value, path):
    if not isinstance(value, dict):
        _fail(path, "expected an object")
    return dict(value)


def _body_name(code):
    return MANIPULATED if code == ct.GRASPED else f"shelf_{code}"


def _warn_if_tight(grasped_shape, books):
    """Log when the shelf gap is narrower than the manipulated book."""
    uprights = [b for b in books if abs(b.rest_theta) < 0.3]
    if len(uprights) != 2:
        return
    left, right = sorted(uprights, key=lambda b: b.rest_x)
    gap = (right.rest_x - right.shape.a1) - (left.rest_x + left.shape.a1)
    width = 2.0 * grasped_shape.a1
    if gap < width:
        log.warning(
            "tight insertion: shelf gap %.4g m is narrower than the book width %.4g m",
            gap, width,
        )


# -- presets -----------------------------------------------------------------


def _bookshelf_doc(name, description, k_left=(350.0, 20.0), k_right=(350.0, 20.0),
                   u0_x=0.0):
    pairs = [
        {"corner_of": MANIPULATED, "corner": [-1, 1], "surface": "shelf_0"},
        {"corner_of": MANIPULATED, "corner": [1, 1], "surface": "shelf_1"},
        {"corner_of": "shelf_0", "corner": [1, -1], "surface": MANIPULATED},
        {"corner_of": "shelf_1", "corner": [-1, -1], "surface": MANIPULATED},
    ]
    if u0_x > 0.0:
        # A start to the right of the shelf passes the right neighbor on the
        # way in, so every corner interaction with that book needs a witness;
        # head-on starts only ever meet the neighbors slot-side and keep the
        # short list.  The extras sit at zero depth during a slot insertion,
        # so adding them leaves head-on dynamics untouched.
        pairs += [
            {"corner_of": MANIPULATED, "corner": [-1, 1], "surface": "shelf_1"},
            {"corner_of": MANIPULATED, "corner": [-1, -1], "surface": "shelf_1"},
            {"corner_of": MANIPULATED, "corner": [1, -1], "surface": "shelf_1"},
            {"corner_of": "shelf_1", "corner": [1, -1], "surface": MANIPULATED},
            {"corner_of": "shelf_1", "corner": [1, 1], "surface": MANIPULATED},
            {"corner_of": "shelf_1", "corner": [-1, 1], "surface": MANIPULATED},
        ]
    return {
        "schema_version": SCHEMA_VERSION,
        "name": name,
        "description": description,
        "manipulated": {"half_extents": [0.02, 0.11], "roundness": 0.2},
        "shelf_books": [
            {
                # Slightly shorter than the manipulated book so their inner
                # corners stay engaged with its side faces at full insertion;
                # with equal heights every tracked corner clears the partner
                # surface near the goal and the pair set goes blind there.
                "half_extents": [0.02, 0.10],
                "roundness": 0.2,
                "y": 0.0,
                "rest_x": -0.035,
                "rest_theta": 0.0,
                "stiffness": list(k_left),
            },
            {
                "half_extents": [0.02, 0.10],
                "roundness": 0.2,
                "y": 0.0,
                "rest_x": 0.035,
                "rest_theta": 0.0,
                "stiffness": list(k_right),
            },
        ],
        "control": {
            "stiffness": [800.0, 800.0, 20.0],
            "u0": [u0_x, -0.35, 0.0],
            "goal": [0.0, 0.0, 0.0],
            "duration": 10.0,
        },
        "contact": {
            "pairs": pairs,
        },
        "rollout": {
            # The shelf front leaves only a corridor over the slot: the book
            # cannot swing wide of its own neighbor and come in from the
            # flank, and free-space flanking would cost nothing in effort, so
            # an unbounded search drifts there.  The corridor spans the slot,
            # reaches right far enough to cover offset starts, and stops just
            # above the seated pose.
            "workspace_zb": [
                [-0.03, 0.03 + u0_x],
                [-0.40, 0.03],
                [-0.9, 0.9],
            ],
        },
        "bbo": {"temperature": 30.0},
    }


def _chain_doc():
    return {
        "schema_version": SCHEMA_VERSION,
        "name": "spring-chain-1d",
        "description": "Two springs in series along x; the closed-form oracle scene.",
        "manipulated": {"half_extents": [0.02, 0.11], "roundness": 0.2},
        "shelf_books": [],
        "anchor": {"stiffness": [350.0, 350.0, 350.0], "rest": [0.0, 0.0, 0.0]},
        "control": {
            "stiffness": [800.0, 800.0, 20.0],
            "u0": [0.0, 0.0, 0.0],
            "goal": [1.0, 0.0, 0.0],
            "duration": 10.0,
        },
        "rollout": {"workspace_pos": 2.0},
    }


_RIGID = 1e3


def _preset_docs():
    ratios = [
        ("stiffness-1to2", 1.0, 2.0),
        ("stiffness-2to1", 2.0, 1.0),
        ("stiffness-1to3", 1.0, 3.0),
        ("stiffness-3to1", 3.0, 1.0),
        ("stiffness-1to4", 1.0, 4.0),
        ("stiffness-4to1", 4.0, 1.0),
    ]
    return {
        "paper-bookshelf": _bookshelf_doc(
            "paper-bookshelf",
            "Crowded-shelf insertion with equally stiff neighbors.",
        ),
        "left-wall-rigid": _bookshelf_doc(
            "left-wall-rigid",
            "Left neighbor stiffened into a near-rigid wall.",
            k_left=(350.0 * _RIGID, 20.0 * _RIGID),
        ),
        "right-wall-rigid": _bookshelf_doc(
            "right-wall-rigid",
            "Right neighbor stiffened into a near-rigid wall.",
            k_right=(350.0 * _RIGID, 20.0 * _RIGID),
        ),
        "spring-chain-1d": _chain_doc(),
        "stiffness-ratio-sweep": [
            _bookshelf_doc(
                nm,
                f"Neighbor stiffness ratio {int(a)}:{int(b)} (left:right).",
                k_left=(350.0 * a, 20.0 * a),
                k_right=(350.0 * b, 20.0 * b),
            )
            for nm, a, b in ratios
        ],
        "initial-position-sweep": [
            _bookshelf_doc(
                f"initial-x-{int(round(1000 * x)):03d}mm",
                f"Start offset {x:.3f} m to the right of the shelf gap.",
                u0_x=x,
            )
            for x in (0.0, 0.025, 0.050, 0.075, 0.100)
        ],
    }


def preset_names():
    return sorted(_preset_docs())


def preset(name):
    """A built-in Scenario (or list of them, for sweep presets) by name."""
    docs = _preset_docs()
    if name not in docs:
        raise UnknownPreset(f"unknown preset {name!r}; known: {', '.join(sorted(docs))}")
    doc = docs[name]
    if isinstance(doc, list):
        return [from_dict(d) for d in doc]
    return from_dict(doc)
