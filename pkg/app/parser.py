"""
Line-oriented input format.

    field Q                     # or GF(p), GF:p
    vertex 1
    arrow alpha 1 2 [degree]
    relation alpha*b2 - b1*alpha
    order 1 < 2                 # classes ascending, a class is 1,2
    truncate 8
    depth 6

Blank lines and text after '#' are ignored.
"""
import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from app.config import settings
from app.dependencies import get_order, get_presentation
from app.exceptions import PresentationError
from app.schemas import ArrowSpec, JobSpec, PresentationSpec, RelationSpec

logger = logging.getLogger(__name__)

_NAME = re.compile(r"^[A-Za-z_][\w.']*$")
_VERTEX = re.compile(r"^[\w.']+$")
_NUMBER = re.compile(r"^\d+(/\d+)?$")


def _integer(token: str, what: str, line: int, minimum: int = 1) -> int:
    try:
        value = int(token)
    except ValueError:
        raise PresentationError(f"{what} must be an integer, got '{token}'", line)
    if value < minimum:
        raise PresentationError(f"{what} must be at least {minimum}, got {value}", line)
    return value


def parse_relation(text: str, line: Optional[int] = None) -> RelationSpec:
    """
    Parse a linear combination such as ``2 a*b - 1/2 c*d``.

    Raises:
        PresentationError: empty terms, bad names or zero coefficients
    """
    body = text.strip()
    if not body:
        raise PresentationError("empty relation", line)
    if body[0] not in "+-":
        body = "+" + body
    pieces = re.findall(r"([+-])\s*([^+-]+)", body)
    if not pieces or "".join(s + t for s, t in pieces).replace(" ", "") != body.replace(" ", ""):
        raise PresentationError(f"cannot read relation '{text.strip()}'", line)
    terms: Dict[Tuple[str, ...], Fraction] = {}
    for sign, chunk in pieces:
        factors = [f for f in re.split(r"[\s*]+", chunk.strip()) if f]
        coefficient = Fraction(-1 if sign == "-" else 1)
        while factors and _NUMBER.match(factors[0]):
            coefficient *= Fraction(factors.pop(0))
        if not factors:
            raise PresentationError(f"term '{chunk.strip()}' has no path", line)
        for name in factors:
            if not _NAME.match(name):
                raise PresentationError(f"'{name}' is not an arrow name", line)
        word = tuple(factors)
        terms[word] = terms.get(word, Fraction(0)) + coefficient
    kept = [[str(c), list(w)] for w, c in terms.items() if c]
    if not kept:
        raise PresentationError("relation has only zero coefficients", line)
    return RelationSpec(terms=kept, line=line)


def parse_order(text: str, line: Optional[int] = None) -> List[List[str]]:
    classes = []
    for chunk in text.split("<"):
        members = [v.strip() for v in chunk.split(",") if v.strip()]
        if not members:
            raise PresentationError("order contains an empty class", line)
        classes.append(members)
    return classes


def parse_input(text: str) -> JobSpec:
    """
    Strict parse of the input format.

    Returns:
        JobSpec with settings defaults for missing truncate and depth lines

    Raises:
        PresentationError: with the line number of the offending line
    """
    field_name = settings.default_field
    vertices: List[str] = []
    arrows: List[ArrowSpec] = []
    relations: List[RelationSpec] = []
    order: Optional[List[List[str]]] = None
    order_line: Optional[int] = None
    truncation = settings.default_truncation
    depth = settings.default_depth
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        keyword, _, rest = content.partition(" ")
        rest = rest.strip()
        if keyword == "field":
            if not rest:
                raise PresentationError("field needs a name", number)
            field_name = rest
        elif keyword == "vertex":
            for v in rest.split():
                if not _VERTEX.match(v):
                    raise PresentationError(f"'{v}' is not a vertex id", number)
                if v in vertices:
                    raise PresentationError(f"duplicate vertex '{v}'", number)
                vertices.append(v)
            if not rest:
                raise PresentationError("vertex needs an id", number)
        elif keyword == "arrow":
            parts = rest.split()
            if len(parts) not in (3, 4):
                raise PresentationError("arrow needs a name, a source, a target and an optional degree", number)
            name, source, target = parts[:3]
            if not _NAME.match(name):
                raise PresentationError(f"'{name}' is not an arrow name", number)
            if any(a.name == name for a in arrows):
                raise PresentationError(f"duplicate arrow name '{name}'", number)
            degree = _integer(parts[3], "arrow degree", number) if len(parts) == 4 else 1
            arrows.append(ArrowSpec(name=name, source=source, target=target, degree=degree, line=number))
        elif keyword == "relation":
            relations.append(parse_relation(rest, number))
        elif keyword == "order":
            if order is not None:
                raise PresentationError("order given twice", number)
            order, order_line = parse_order(rest, number), number
        elif keyword == "truncate":
            truncation = _integer(rest, "truncation", number)
        elif keyword == "depth":
            depth = _integer(rest, "depth", number)
        else:
            raise PresentationError(f"unknown directive '{keyword}'", number)
    if not vertices:
        raise PresentationError("no vertices declared")
    for a in arrows:
        for v in (a.source, a.target):
            if v not in vertices:
                raise PresentationError(f"arrow '{a.name}' uses undeclared vertex '{v}'", a.line)
    presentation = PresentationSpec(field=field_name, vertices=vertices, arrows=arrows,
                                    relations=relations, truncation=truncation)
    job = JobSpec(presentation=presentation, order=order, order_line=order_line, depth=depth)

    # relation shapes and the order partition need the whole presentation
    get_order(job, get_presentation(job))
    logger.debug("parsed %d vertices, %d arrows, %d relations", len(vertices), len(arrows), len(relations))
    return job


def load_job(path: Path) -> JobSpec:
    """
    Read and parse an input file.

    Raises:
        PresentationError: the file is missing or unreadable, or its content
            does not parse
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise PresentationError(f"cannot read {path}: {e.strerror or e}")
    return parse_input(text)
