import logging
from dataclasses import dataclass
from fractions import Fraction

from app.engine.algebra import (
    AlgebraPresentation,
    Arrow,
    GradedAlgebra,
    Quiver,
    Relation,
    build_algebra,
    check_presentation,
)
from app.engine.linalg import field_from_name
from app.engine.order import StratOrder
from app.exceptions import PresentationError
from app.schemas import JobSpec

logger = logging.getLogger(__name__)


@dataclass
class Job:
    """A parsed job with its algebra and order built."""

    spec: JobSpec
    presentation: AlgebraPresentation
    algebra: GradedAlgebra
    order: StratOrder

    @property
    def depth(self) -> int:
        return self.spec.depth


def get_presentation(spec: JobSpec) -> AlgebraPresentation:
    """
    Convert the input schema into an engine presentation.

    Raises:
        PresentationError: unknown field, or a malformed quiver or relation
            (with the line number of the relation when known)
    """
    p = spec.presentation
    field_from_name(p.field)
    arrows = tuple(Arrow(a.name, a.source, a.target, a.degree) for a in p.arrows)
    relations = []
    for r in p.relations:
        terms = tuple((Fraction(c), tuple(word)) for c, word in r.terms)
        relations.append(Relation(terms, line=r.line))
    presentation = AlgebraPresentation(Quiver(tuple(p.vertices), arrows), tuple(relations), p.field, p.truncation)
    check_presentation(presentation)
    return presentation


def get_order(spec: JobSpec, presentation: AlgebraPresentation) -> StratOrder:
    """
    The stratification order of the job.

    Without an order line every vertex is its own class, ascending in
    declaration order.
    """
    vertices = presentation.quiver.vertices
    if spec.order is None:
        return StratOrder(tuple((v,) for v in vertices))
    try:
        return StratOrder.from_classes(spec.order, vertices)
    except PresentationError as e:
        if spec.order_line is None:
            raise
        raise PresentationError(e.detail, spec.order_line)


def get_algebra(spec: JobSpec) -> GradedAlgebra:
    """Built algebras are cached per presentation."""
    return build_algebra(get_presentation(spec))


def resolve_job(spec: JobSpec) -> Job:
    """Build everything a command handler needs."""
    presentation = get_presentation(spec)
    order = get_order(spec, presentation)
    algebra = get_algebra(spec)
    logger.debug("resolved job '%s' at N = %d", spec.command, presentation.truncation)
    return Job(spec, presentation, algebra, order)
