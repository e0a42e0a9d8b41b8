import logging

from app.commands import CommandResult, CommandRouter
from app.commands.render import algebra_out, ext_tables_out, module_out
from app.dependencies import Job
from app.engine.duality import (
    DISTINGUISHED,
    ISOMORPHIC,
    check_commutativity,
    koszul_dual,
    ringel_dual,
    ringel_image_of_standard,
)
from app.engine.homology import ext_algebra_dims, is_koszul
from app.engine.strat import HOLDS, UNDETERMINED, VIOLATED

logger = logging.getLogger(__name__)

router = CommandRouter(tags=["duality"])

VERDICT_OF_COMPARISON = {ISOMORPHIC: HOLDS, DISTINGUISHED: VIOLATED}


@router.command("ringel")
def ringel(job: Job) -> CommandResult:
    """R(A) as a presentation, with the images of the standard modules."""
    dual = ringel_dual(job.algebra, job.order)
    images = {}
    checks = []
    for lam in job.algebra.vertices:
        image = ringel_image_of_standard(job.algebra, job.order, lam, dual)
        checks.append(image.isomorphic)
        images[lam] = {
            "module": module_out(image.module).model_dump(),
            "dims_match": image.dims_match,
            "isomorphic": image.isomorphic,
        }
    verdict = HOLDS if not dual.mismatches and all(checks) else UNDETERMINED
    summary = [
        f"R(A): {len(dual.presentation.quiver.arrows)} arrows, {len(dual.presentation.relations)} relations, "
        f"reliable to degree {dual.reliable_degree}",
        f"order of R(A): {dual.order.to_text()}",
    ]
    summary.extend(dual.mismatches)
    summary.extend(f"hom(Δ({lam}), T) is {'' if ok else 'not '}the standard R(A)-module"
                   for lam, ok in zip(job.algebra.vertices, checks))
    data = {"algebra": algebra_out(dual).model_dump(), "standard_images": images}
    return CommandResult(verdict, summary, data)


@router.command("koszul")
def koszul(job: Job) -> CommandResult:
    """E(A) as a presentation, with the linearity evidence and the ext tables between simples."""
    A = job.algebra
    dual = koszul_dual(A, job.order, job.depth)
    _, reports = is_koszul(A, dual.reliable_degree)
    verdict = HOLDS if not dual.mismatches else UNDETERMINED
    summary = [
        f"E(A): {len(dual.presentation.quiver.arrows)} arrows, {len(dual.presentation.relations)} relations "
        f"up to degree {dual.reliable_degree}",
    ]
    summary.extend(dual.mismatches)
    data = {
        "algebra": algebra_out(dual).model_dump(),
        "linearity": {lam: {"verdict": r.verdict, "checked_positions": r.checked_positions}
                      for lam, r in reports.items()},
        "ext_tables": [t.model_dump() for t in ext_tables_out(ext_algebra_dims(A, dual.reliable_degree))],
    }
    return CommandResult(verdict, summary, data)


@router.command("commute")
def commute(job: Job) -> CommandResult:
    """Compare R(E(A)) with E(R(A))."""
    report = check_commutativity(job.algebra, job.order, job.depth)
    comparison = report.comparison
    verdict = VERDICT_OF_COMPARISON.get(comparison.verdict, UNDETERMINED)
    summary = [f"R(E(A)) and E(R(A)): {comparison.verdict} at N = {comparison.truncation}"]
    if comparison.witness:
        summary.append(comparison.witness)
    summary.extend(f"{name}: {status}" for name, status in report.statuses.items())
    data = {
        "algebras": {name: algebra_out(dual).model_dump() for name, dual in report.algebras.items()},
        "statuses": report.statuses,
        "comparison": {
            "verdict": comparison.verdict,
            "truncation": comparison.truncation,
            "witness": comparison.witness,
            "vertex_map": comparison.vertex_map,
            "arrow_images": comparison.arrow_images,
        },
    }
    logger.info("commute: %s", comparison.verdict)
    return CommandResult(verdict, summary, data)
