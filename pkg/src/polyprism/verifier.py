"""Face registry and trial driver for both prism diagrams.

Thirteen commutation claims are registered: five for the weight-2 prism and
eight for the weight-3 prism.  Each face knows which backends can check it:

* formal   - one symbolic run over free determinant symbols (sufficient);
* exact    - seeded random Q(t) configurations, structural equality, or (for
             the two faces that only commute modulo relation subgroups)
             exact projections into lattice-checkable groups;
* numeric  - polylogarithm functionals on random complex configurations.

The sign audit enumerates the full 2048-point convention space and returns
every table under which all structurally-checkable faces commute.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import groups as G
from . import morphisms as M
from .backends import NumContext, QtContext, SymContext, cross_ratio_val
from .configs import Config, random_generic, random_gl, stable_seed
from .conventions import ConventionTable, sign_space
from .errors import (
    BackendInadmissible,
    DegenerateConfiguration,
    DegenerateTrial,
    ExceptionalValue,
    NoConsistentAssignment,
    NotCrossRatioShape,
    RetryLimitExceeded,
)
from .oracles import (
    FunctionalValue,
    functional_b2_tensor,
    functional_f_tensor_b2,
    functional_mid_left,
)
from .scalars import Poly, RatFunc, ratfunc

REPORT_VERSION = "1"
BACKENDS = ("formal", "exact", "numeric")
RESAMPLE_BUDGET = 100


@dataclass(frozen=True)
class FaceSpec:
    """One commutation claim of a prism diagram."""

    id: str
    weight: int
    claim: str
    target: str
    input_kind: str  # "config" | "generator"
    m: int
    n: int
    lhs: Callable  # (ctx, table, inp) -> GroupElt
    rhs: Callable
    sign_params: tuple[str, ...] = ()
    exact_kind: str = "struct"  # "struct" | "projections"
    projections: tuple = ()  # ((name, (ctx, table, elt) -> GroupElt), ...)
    functionals: tuple = ()  # ((name, (lc, table) -> FunctionalValue), ...)
    numeric_kind: Optional[str] = None  # "complex" | "dual"
    coeff_mode: str = "formal"

    @property
    def admissible(self) -> tuple[str, ...]:
        out = []
        if self.exact_kind == "struct":
            out.append("formal")
        out.append("exact")
        if self.functionals:
            out.append("numeric")
        return tuple(out)


@dataclass
class FaceReport:
    face_id: str
    backend: str
    trials: int = 0
    degenerate_resamples: int = 0
    failures: int = 0
    max_relative_residual: float = 0.0
    elapsed_ms: float = 0.0
    counterexample: Optional[str] = None
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.trials > 0

    def to_dict(self, weight: int) -> dict:
        return {
            "id": self.face_id,
            "weight": weight,
            "backend": self.backend,
            "trials": self.trials,
            "degenerate_resamples": self.degenerate_resamples,
            "failures": self.failures,
            "max_relative_residual": self.max_relative_residual,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "counterexample": self.counterexample,
        }


# ---------------------------------------------------------------------------
# Face definitions.


def _chain(fn, ctx, table, pts):
    return M.apply_chain(fn, M.boundary_chain(pts, table))


def _faces() -> dict[str, FaceSpec]:
    f: list[FaceSpec] = []

    f.append(
        FaceSpec(
            id="W2-SQ-A",
            weight=2,
            claim="f2_0 . d = delta_2 . f2_1",
            target="W2",
            input_kind="config",
            m=4,
            n=2,
            lhs=lambda ctx, t, p: _chain(lambda q: M.f2_0(ctx, q), ctx, t, p),
            rhs=lambda ctx, t, p: G.delta_2(ctx, M.f2_1(ctx, p)),
            sign_params=("boundary_index_base",),
        )
    )
    f.append(
        FaceSpec(
            id="W2-SQ-B",
            weight=2,
            claim="tau2_0 . d = partial_2 . tau2_1",
            target="FXF",
            input_kind="config",
            m=4,
            n=2,
            lhs=lambda ctx, t, p: _chain(lambda q: M.tau2_0(ctx, q, t), ctx, t, p),
            rhs=lambda ctx, t, p: G.partial_2(ctx, M.tau2_1(ctx, p, t), t),
            sign_params=("boundary_index_base", "partial2", "tau2_0_sign"),
        )
    )
    f.append(
        FaceSpec(
            id="W2-SQ-C",
            weight=2,
            claim="partial_2 . f_D = g1_2D . delta_2",
            target="FXF",
            input_kind="generator",
            m=4,
            n=2,
            lhs=lambda ctx, t, a: G.partial_2(ctx, G.f_D(G.GroupElt.single("QF", a)), t),
            rhs=lambda ctx, t, a: G.g_2D(ctx, G.delta_2(ctx, G.GroupElt.single("QF", a))),
            sign_params=("partial2",),
            coeff_mode="value",
        )
    )
    f.append(
        FaceSpec(
            id="W2-TRI-1",
            weight=2,
            claim="tau2_D . f2_1 = tau2_1",
            target="BR",
            input_kind="config",
            m=4,
            n=2,
            lhs=lambda ctx, t, p: G.tau_D2(M.f2_1(ctx, p)),
            rhs=lambda ctx, t, p: M.tau2_1(ctx, p, t),
        )
    )
    f.append(
        FaceSpec(
            id="W2-TRI-2",
            weight=2,
            claim="g1_2D . f2_0 = tau2_0",
            target="FXF",
            input_kind="config",
            m=3,
            n=2,
            lhs=lambda ctx, t, p: G.g_2D(ctx, M.f2_0(ctx, p)),
            rhs=lambda ctx, t, p: M.tau2_0(ctx, p, t),
            sign_params=("tau2_0_sign",),
        )
    )
    f.append(
        FaceSpec(
            id="W3-SQ-A1",
            weight=3,
            claim="f3_0 . d = delta_32 . f3_1",
            target="W3",
            input_kind="config",
            m=5,
            n=3,
            lhs=lambda ctx, t, p: _chain(lambda q: M.f3_0(ctx, q), ctx, t, p),
            rhs=lambda ctx, t, p: G.delta_32(ctx, M.f3_1(ctx, p)),
            sign_params=("boundary_index_base",),
        )
    )
    f.append(
        FaceSpec(
            id="W3-SQ-A2",
            weight=3,
            claim="f3_1 . d = delta_3 . f3_2   (modulo R2 (x) F*)",
            target="B2XF",
            input_kind="config",
            m=6,
            n=3,
            lhs=lambda ctx, t, p: _chain(lambda q: M.f3_1(ctx, q), ctx, t, p),
            rhs=lambda ctx, t, p: G.delta_3(ctx, M.f3_2(ctx, p)),
            exact_kind="projections",
            projections=(("delta2_tensor_id", lambda ctx, t, e: G.project_delta2_tensor(ctx, e)),),
            functionals=(("d2_log", lambda lc, t: functional_b2_tensor(lc)),),
            numeric_kind="complex",
        )
    )
    f.append(
        FaceSpec(
            id="W3-SQ-B1",
            weight=3,
            claim="tau3_0 . d = partial_32 . tau3_1",
            target="FXW2",
            input_kind="config",
            m=5,
            n=3,
            lhs=lambda ctx, t, p: _chain(lambda q: M.tau3_0(ctx, q, t), ctx, t, p),
            rhs=lambda ctx, t, p: G.partial_32(ctx, M.tau3_1(ctx, p, t), t),
            sign_params=("boundary_index_base", "partial32", "tau3_0_sign", "tau3_1_sign"),
        )
    )
    f.append(
        FaceSpec(
            id="W3-SQ-B2",
            weight=3,
            claim="tau3_1 . d = partial_3 . tau3_2   (modulo the relation subgroups)",
            target="MID",
            input_kind="config",
            m=6,
            n=3,
            lhs=lambda ctx, t, p: _chain(lambda q: M.tau3_1(ctx, q, t), ctx, t, p),
            rhs=lambda ctx, t, p: G.partial_3(ctx, M.tau3_2(ctx, p, t), t),
            exact_kind="projections",
            projections=(
                ("partial2_tensor_id", lambda ctx, t, e: G.project_partial2_tensor(ctx, e, t)),
                ("id_tensor_delta2", lambda ctx, t, e: G.project_id_delta2(ctx, e)),
            ),
            functionals=(
                ("partial2_log_log", functional_mid_left),
                ("x_d2", lambda lc, t: functional_f_tensor_b2(lc)),
            ),
            numeric_kind="dual",
        )
    )
    f.append(
        FaceSpec(
            id="W3-SQ-C",
            weight=3,
            claim="partial_3 . f_D = g2_3D . delta_3",
            target="MID",
            input_kind="generator",
            m=5,
            n=3,
            lhs=lambda ctx, t, a: G.partial_3(ctx, G.f_D(G.GroupElt.single("QF", a)), t),
            rhs=lambda ctx, t, a: G.g_3D_mid(ctx, G.delta_3(ctx, G.GroupElt.single("QF", a))),
            sign_params=("partial3_second_term",),
            coeff_mode="value",
        )
    )
    f.append(
        FaceSpec(
            id="W3-TRI-1",
            weight=3,
            claim="tau3_D . f3_2 = tau3_2",
            target="BR",
            input_kind="config",
            m=6,
            n=3,
            lhs=lambda ctx, t, p: G.tau_D3(M.f3_2(ctx, p)),
            rhs=lambda ctx, t, p: M.tau3_2(ctx, p, t),
        )
    )
    f.append(
        FaceSpec(
            id="W3-TRI-2",
            weight=3,
            claim="g2_3D . f3_1 = tau3_1",
            target="MID",
            input_kind="config",
            m=5,
            n=3,
            lhs=lambda ctx, t, p: G.g_3D_mid(ctx, M.f3_1(ctx, p)),
            rhs=lambda ctx, t, p: M.tau3_1(ctx, p, t),
            sign_params=("tau3_1_sign",),
        )
    )
    f.append(
        FaceSpec(
            id="W3-TRI-3",
            weight=3,
            claim="g1_3D . f3_0 = tau3_0",
            target="FXW2",
            input_kind="config",
            m=4,
            n=3,
            lhs=lambda ctx, t, p: G.g_3D_right(ctx, M.f3_0(ctx, p)),
            rhs=lambda ctx, t, p: M.tau3_0(ctx, p, t),
            sign_params=("tau3_0_sign",),
        )
    )
    return {spec.id: spec for spec in f}


FACES = _faces()

#: face id -> the commutation statement it certifies (used by the registry test)
CLAIMS = {spec.id: spec.claim for spec in FACES.values()}


# ---------------------------------------------------------------------------
# Inputs per backend.


def _random_generator(seed) -> RatFunc:
    """Random degree-one rational function avoiding {0, 1}."""
    import random as _random

    rng = _random.Random(stable_seed("generator", seed))
    for _ in range(RESAMPLE_BUDGET):
        num = Poly.make([rng.randint(-6, 6), rng.randint(-6, 6)])
        den = Poly.make([rng.randint(-6, 6), rng.randint(-6, 6)])
        if num.is_zero() or den.is_zero():
            continue
        v = ratfunc(num, den)
        if v.is_zero() or v.is_one() or (1 - v).is_zero():
            continue
        if v.num.degree < 1 and v.den.degree < 1:
            continue
        return v
    raise RetryLimitExceeded("no usable generator found")


def _formal_input(face: FaceSpec):
    ctx = SymContext(face.m, face.n)
    if face.input_kind == "config":
        return ctx, tuple(range(face.m))
    if face.n == 2:
        return ctx, cross_ratio_val(ctx, (0, 1, 2, 3))
    return ctx, cross_ratio_val(ctx, (1, 2, 3, 4), lead=0)


def _exact_input(face: FaceSpec, trial_seed, gl_twist: bool):
    if face.input_kind == "generator":
        ctx = QtContext(None, coeff_mode=face.coeff_mode)
        return ctx, ctx.from_ratfunc(_random_generator(trial_seed)), None
    config = random_generic(face.m, face.n, trial_seed, "ratfunc")
    if gl_twist:
        g = random_gl(face.n, trial_seed, "ratfunc")
        config = config.apply_gl(g)
    ctx = QtContext(config, coeff_mode=face.coeff_mode)
    return ctx, tuple(range(face.m)), config


def _numeric_input(face: FaceSpec, trial_seed):
    kind = face.numeric_kind or "complex"
    config = random_generic(face.m, face.n, trial_seed, kind)
    return NumContext(config), tuple(range(face.m)), config


# ---------------------------------------------------------------------------
# Face execution.


def _exact_trial(face: FaceSpec, ctx, table, inp) -> dict:
    lhs = face.lhs(ctx, table, inp)
    rhs = face.rhs(ctx, table, inp)
    if face.exact_kind == "struct":
        return G.residual(lhs, rhs, ctx)
    out: dict = {}
    for name, proj in face.projections:
        res = G.residual(proj(ctx, table, lhs), proj(ctx, table, rhs), ctx)
        for k, v in res.items():
            out[(name, k)] = v
    return out


def _numeric_trial(face: FaceSpec, ctx, table, inp) -> float:
    diff = (face.lhs(ctx, table, inp) - face.rhs(ctx, table, inp)).lc
    worst = 0.0
    for _name, fn in face.functionals:
        fv: FunctionalValue = fn(diff, table)
        worst = max(worst, fv.relative)
    return worst


def _render_counterexample(face: FaceSpec, config, inp, residual) -> str:
    lines = [f"face {face.id}: {face.claim}"]
    if config is not None:
        lines.append(config.to_text().rstrip())
    elif face.input_kind == "generator":
        lines.append(f"generator: {inp}")
    lines.append(f"residual terms ({len(residual)}):")
    for i, (k, v) in enumerate(residual.items()):
        if i == 5:
            lines.append("  ...")
            break
        lines.append(f"  {k}: {v}")
    return "\n".join(lines)


def run_face(
    face: FaceSpec | str,
    backend: str,
    trials: int = 50,
    seed=0,
    table: ConventionTable | None = None,
    tolerance: float = 1e-8,
    gl_twist: bool = False,
) -> FaceReport:
    """Run one face on one backend; deterministic given (seed, table, trials)."""
    if isinstance(face, str):
        face = FACES[face]
    table = table or ConventionTable()
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    if backend not in face.admissible:
        raise BackendInadmissible(f"face {face.id} does not admit backend {backend}")
    report = FaceReport(face_id=face.id, backend=backend)
    start = time.perf_counter()

    if backend == "formal":
        ctx, inp = _formal_input(face)
        try:
            residual = _exact_trial(face, ctx, table, inp)
            report.trials = 1
            if residual:
                report.failures = 1
                report.max_relative_residual = float(len(residual))
                report.counterexample = _render_counterexample(face, None, inp, residual)
        except (NotCrossRatioShape, BackendInadmissible) as ex:
            report.notes.append(f"formal backend inapplicable: {ex}")
            report.failures = 1
        report.elapsed_ms = (time.perf_counter() - start) * 1000
        return report

    trial = 0
    produced = 0
    while produced < trials:
        if report.degenerate_resamples > RESAMPLE_BUDGET:
            raise DegenerateTrial(f"face {face.id}: resample budget exhausted")
        trial_seed = stable_seed(seed, face.id, backend, trial, "gl" if gl_twist else "")
        trial += 1
        try:
            if backend == "exact":
                ctx, inp, config = _exact_input(face, trial_seed, gl_twist)
                residual = _exact_trial(face, ctx, table, inp)
                produced += 1
                report.trials = produced
                if residual:
                    report.failures += 1
                    report.max_relative_residual = max(
                        report.max_relative_residual, float(len(residual))
                    )
                    if report.counterexample is None:
                        report.counterexample = _render_counterexample(face, config, inp, residual)
            else:
                ctx, inp, config = _numeric_input(face, trial_seed)
                rel = _numeric_trial(face, ctx, table, inp)
                produced += 1
                report.trials = produced
                report.max_relative_residual = max(report.max_relative_residual, rel)
                if rel >= tolerance:
                    report.failures += 1
                    if report.counterexample is None:
                        report.counterexample = _render_counterexample(
                            face, config, inp, {"relative_residual": rel}
                        )
        except (DegenerateConfiguration, ExceptionalValue, RetryLimitExceeded):
            report.degenerate_resamples += 1
    report.elapsed_ms = (time.perf_counter() - start) * 1000
    return report


def run_faces(
    face_ids: Sequence[str],
    backend: str = "all",
    trials: int = 50,
    seed=0,
    table: ConventionTable | None = None,
    tolerance: float = 1e-8,
) -> list[FaceReport]:
    """Run faces on the requested backend, or escalate through all admissible."""
    reports = []
    for fid in face_ids:
        face = FACES[fid]
        wanted = BACKENDS if backend == "all" else (backend,)
        for b in wanted:
            if b not in face.admissible:
                if backend != "all":
                    rep = FaceReport(face_id=fid, backend=b)
                    rep.notes.append("backend inadmissible for this face")
                    rep.failures = 1
                    reports.append(rep)
                continue
            n = 1 if b == "formal" else trials
            reports.append(run_face(face, b, n, seed, table, tolerance))
    return reports


# ---------------------------------------------------------------------------
# Sign audit.


AUDIT_FACE_IDS = tuple(fid for fid, s in FACES.items() if s.exact_kind == "struct")


def sign_audit(face_ids: Sequence[str] | None = None, seed=0) -> list[ConventionTable]:
    """Exhaustive search of the convention space.

    Returns every table under which all requested structurally-checkable
    faces pass (formal backend where possible, exact otherwise).  Raises
    NoConsistentAssignment when the result is empty and the search was over
    all auditable faces.
    """
    ids = tuple(face_ids) if face_ids is not None else AUDIT_FACE_IDS
    for fid in ids:
        if FACES[fid].exact_kind != "struct":
            raise BackendInadmissible(f"face {fid} is not auditable (no structural equality)")
    memo: dict = {}

    def face_passes(fid: str, table: ConventionTable) -> bool:
        spec = FACES[fid]
        key = (fid,) + tuple(getattr(table, p) for p in spec.sign_params)
        hit = memo.get(key)
        if hit is None:
            if spec.input_kind == "generator":
                # value coefficients are needed so that both second-term
                # conventions of the weight-3 boundary can be compared
                rep = run_face(spec, "exact", trials=1, seed=seed, table=table)
            else:
                rep = run_face(spec, "formal", trials=1, seed=seed, table=table)
            hit = rep.passed
            memo[key] = hit
        return hit

    out = []
    for table in sign_space():
        if all(face_passes(fid, table) for fid in ids):
            out.append(table)
    if not out and face_ids is None:
        raise NoConsistentAssignment("no convention table makes all exact faces commute")
    return out


# ---------------------------------------------------------------------------
# Reports.


def reports_to_json(reports: list[FaceReport], seed, table: ConventionTable) -> str:
    payload = {
        "version": REPORT_VERSION,
        "seed": seed,
        "convention": table.to_dict(),
        "faces": [r.to_dict(FACES[r.face_id].weight) for r in reports],
    }
    return json.dumps(payload, indent=2)


def reports_to_text(reports: list[FaceReport]) -> str:
    lines = []
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        lines.append(
            f"{status}  {r.face_id:9s} {r.backend:7s} trials={r.trials:3d} "
            f"resamples={r.degenerate_resamples} max_rel_residual={r.max_relative_residual:.3e} "
            f"({r.elapsed_ms:.0f} ms)"
        )
        if r.counterexample:
            lines.append("  counterexample:")
            lines.extend("    " + ln for ln in r.counterexample.splitlines())
        for note in r.notes:
            lines.append(f"  note: {note}")
    return "\n".join(lines)
