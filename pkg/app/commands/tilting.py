import logging

from app.commands import CommandResult, CommandRouter
from app.commands.render import complex_out, layer_out, multiplicity_rows, phrase, status_of
from app.dependencies import Job
from app.engine.duality import quotient_classification
from app.engine.homology import complex_euler_characteristic
from app.engine.strat import HOLDS, UNDETERMINED, VIOLATED, combine_verdicts, is_standardly_stratified
from app.engine.tilting import (
    LADDER,
    characteristic_tilting_summary,
    classify,
    simple_as_tilting_complex,
    tilting_coresolution,
)
from app.exceptions import RefusedError

logger = logging.getLogger(__name__)

router = CommandRouter(tags=["tilting"])


@router.command("tilting")
def tilting(job: Job) -> CommandResult:
    """
    Build every T(lam) by universal extensions and report its layers.

    Raises:
        RefusedError: the algebra is not standardly stratified in the window
    """
    A = job.algebra
    strat = is_standardly_stratified(A, job.order)
    if strat.verdict != HOLDS:
        raise RefusedError(f"algebra is not standardly stratified ({phrase(strat.verdict, A.N)})",
                           provenance="tilting", exit_code=1 if strat.verdict == VIOLATED else 2)
    summaries = characteristic_tilting_summary(A, job.order)
    verdict = combine_verdicts(s.verdict for s in summaries)
    summary = []
    modules = {}
    for s in summaries:
        state = "finite" if s.finite else "cut by the window"
        if s.verdict != HOLDS:
            state = f"not finitely constructible at N = {A.N}"
        layers = ", ".join(str(x) for x in s.delta_layers)
        summary.append(f"T({s.vertex}): {state}; standard layers {layers}")
        modules[s.vertex] = {
            "dims": s.dims,
            "lo": s.lo,
            "finite": s.finite,
            "verdict": s.verdict,
            "indecomposable": s.indecomposable,
            "delta_layers": [layer_out(x).model_dump() for x in s.delta_layers],
            "nabla_layers": multiplicity_rows(s.nabla_layers),
        }
    coresolutions = {}
    if verdict == HOLDS:
        for lam in A.vertices:
            try:
                C = tilting_coresolution(A, job.order, lam)
                coresolutions[lam] = complex_out(C).model_dump()
                summary.append(f"Δ({lam}) -> {C.term_list()}")
            except RefusedError as e:
                coresolutions[lam] = {"refused": e.detail}
    data = {"tilting_modules": modules, "coresolutions": coresolutions}
    return CommandResult(verdict, summary, data)


@router.command("classify")
def classify_algebra(job: Job) -> CommandResult:
    """Place the algebra on the ladder stratified < weakly adapted < adapted < balanced."""
    A = job.algebra
    result = classify(A, job.order)
    if result.status == LADDER[-1]:
        headline = f"balanced at N = {A.N}"
    else:
        missing = LADDER[LADDER.index(result.status) + 1]
        headline = f"{result.status}; not {missing.replace('-', ' ')} ({phrase(result.verdict, A.N)})"
    summary = [headline] + list(result.reasons) + list(result.boundary)
    data = {
        "ladder": result.status,
        "verdict": result.verdict,
        "reasons": list(result.reasons),
        "boundary": list(result.boundary),
        "tilting_modules": {lam: {"layers": [str(x) for x in T.layers], "verdict": T.verdict}
                            for lam, T in result.tiltings.items()},
        "coresolutions": {lam: complex_out(C).model_dump() for lam, C in result.coresolutions.items()},
        "resolutions": {lam: complex_out(R.to_complex(), complete=R.complete).model_dump()
                        for lam, R in result.resolutions.items()},
    }
    for lam, C in result.coresolutions.items():
        summary.append(f"Δ({lam}) -> {C.term_list()}")
    for lam, R in result.resolutions.items():
        summary.append(f"{R.term_list()} -> ∇̄({lam})")
    if result.status == LADDER[-1]:
        quotient = quotient_classification(A, job.order)
        if quotient is not None:
            data["quotient_by_top_class"] = quotient.status
            summary.append(f"quotient by the largest class: {quotient.status}")
    logger.info("classify: %s", headline)
    return CommandResult(result.verdict, summary, data)


@router.command("simples-as-tilting")
def simples_as_tilting(job: Job) -> CommandResult:
    """Every simple module as a linear complex of tilting modules."""
    A = job.algebra
    verdicts = []
    summary = []
    data = {}
    for lam in A.vertices:
        try:
            X = simple_as_tilting_complex(A, job.order, lam)
        except RefusedError as e:
            verdicts.append(VIOLATED if e.exit_code == 1 else UNDETERMINED)
            data[lam] = {"refused": e.detail}
            summary.append(f"L({lam}): {status_of(verdicts[-1])}: {e.detail}")
            continue
        C = X.to_complex()
        dims, horizon = complex_euler_characteristic(C)
        euler_matches = dims == {(0, lam): 1}
        verdicts.append(HOLDS if euler_matches else VIOLATED)
        entry = complex_out(C, complete=X.complete).model_dump()
        entry["euler_matches"] = euler_matches
        entry["euler_horizon"] = horizon
        data[lam] = entry
        summary.append(f"L({lam}) = {X.term_list()}")
    return CommandResult(combine_verdicts(verdicts), summary, data)
