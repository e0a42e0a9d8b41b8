"""
Truncated positively graded path algebras.

A path is stored as a tuple of arrow names in traversal order: ``("p", "q")``
means first ``p``, then ``q``. The algebra is built degree by degree: the
relation ideal in degree d is spanned by the relations of degree d together
with arrow multiples of the ideal in lower degrees, and its reduced echelon
form splits the paths into reducible (pivot) paths and the standard basis.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from app.engine import linalg
from app.engine.order import StratOrder
from app.exceptions import PresentationError, UsageError

logger = logging.getLogger(__name__)

Element = Dict["Path", object]


# ============ PRESENTATIONS ============

@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str
    degree: int = 1


@dataclass(frozen=True)
class Relation:
    """A linear combination of parallel paths with rational coefficients."""

    terms: Tuple[Tuple[Fraction, Tuple[str, ...]], ...]
    line: Optional[int] = field(default=None, compare=False)


@dataclass(frozen=True)
class Quiver:
    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...]

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise PresentationError(f"unknown arrow '{name}'")


@dataclass(frozen=True)
class AlgebraPresentation:
    quiver: Quiver
    relations: Tuple[Relation, ...] = ()
    field: str = "Q"
    truncation: int = 8

    def with_truncation(self, n: int) -> "AlgebraPresentation":
        return AlgebraPresentation(self.quiver, self.relations, self.field, n)

    def with_field(self, name: str) -> "AlgebraPresentation":
        return AlgebraPresentation(self.quiver, self.relations, name, self.truncation)


@dataclass(frozen=True)
class Path:
    source: str
    target: str
    arrows: Tuple[str, ...] = ()

    def __str__(self) -> str:
        return "*".join(self.arrows) if self.arrows else f"e_{self.source}"


def check_presentation(p: AlgebraPresentation, allow_empty: bool = False) -> Dict[str, Arrow]:
    """
    Validate a presentation's invariants.

    Returns:
        arrows by name

    Raises:
        PresentationError: duplicate names, bad degrees, inhomogeneous or
            non-parallel relations
    """
    q = p.quiver
    if not q.vertices and not allow_empty:
        raise PresentationError("the vertex set is empty")
    if len(set(q.vertices)) != len(q.vertices):
        raise PresentationError("duplicate vertex id")
    if p.truncation < 1:
        raise PresentationError(f"truncation must be at least 1, got {p.truncation}")
    arrows: Dict[str, Arrow] = {}
    for a in q.arrows:
        if a.name in arrows:
            raise PresentationError(f"duplicate arrow name '{a.name}'")
        if a.source not in q.vertices or a.target not in q.vertices:
            raise PresentationError(f"arrow '{a.name}' uses an undeclared vertex")
        if a.degree < 1:
            raise PresentationError(f"arrow '{a.name}' has degree {a.degree}; degrees must be positive")
        arrows[a.name] = a
    for r in p.relations:
        _relation_shape(r, arrows)
    return arrows


def _relation_shape(r: Relation, arrows: Dict[str, Arrow]) -> Tuple[str, str, int]:
    shape = None
    if not r.terms:
        raise PresentationError("empty relation", r.line)
    for _, word in r.terms:
        if not word:
            raise PresentationError("relations may not contain trivial paths", r.line)
        for name in word:
            if name not in arrows:
                raise PresentationError(f"unknown arrow '{name}' in relation", r.line)
        for a, b in zip(word, word[1:]):
            if arrows[a].target != arrows[b].source:
                raise PresentationError(f"'{a}*{b}' is not a path", r.line)
        this = (arrows[word[0]].source, arrows[word[-1]].target, sum(arrows[n].degree for n in word))
        if shape is None:
            shape = this
        elif this[2] != shape[2]:
            raise PresentationError("relation is not homogeneous", r.line)
        elif this[:2] != shape[:2]:
            raise PresentationError("relation terms are not parallel", r.line)
    if shape[2] < 2:
        raise PresentationError("relations must have degree at least 2", r.line)
    return shape


# ============ GRADED ALGEBRA ============

class GradedAlgebra:
    """
    A path algebra modulo homogeneous relations, truncated at degree N.

    Standard paths of degree d from s to t form the basis of e_t A_d e_s in
    the representation convention (paths start at s).
    """

    def __init__(self, presentation: AlgebraPresentation, allow_empty: bool = False):
        self.presentation = presentation
        self.arrows = check_presentation(presentation, allow_empty=allow_empty)
        self.field = linalg.field_from_name(presentation.field)
        self.N = presentation.truncation
        self.vertices: Tuple[str, ...] = presentation.quiver.vertices
        self.max_degree = max((a.degree for a in self.arrows.values()), default=1)
        # (degree, source, target) -> all paths / standard paths
        self._paths: Dict[Tuple[int, str, str], List[Path]] = {}
        self._standard: Dict[Tuple[int, str, str], List[Path]] = {}
        self._normal: Dict[Path, Element] = {}
        self._build()

    @property
    def arrow_list(self) -> List[Arrow]:
        return list(self.presentation.quiver.arrows)

    def degree_of(self, path: Path) -> int:
        return sum(self.arrows[a].degree for a in path.arrows)

    def _build(self):
        by_degree: Dict[int, List[Path]] = {0: [Path(v, v) for v in self.vertices]}
        for d in range(1, self.N + 1):
            paths = []
            for a in self.arrow_list:
                if a.degree > d:
                    continue
                for p in by_degree.get(d - a.degree, []):
                    if p.target == a.source:
                        paths.append(Path(p.source, a.target, p.arrows + (a.name,)))
            by_degree[d] = paths
        for d, paths in by_degree.items():
            for p in paths:
                self._paths.setdefault((d, p.source, p.target), []).append(p)
        order = {a.name: i for i, a in enumerate(self.arrow_list)}
        for key in self._paths:
            self._paths[key].sort(key=lambda p: tuple(order[n] for n in p.arrows))

        # ideal rows per degree, as dicts Path -> coefficient
        ideal: Dict[int, List[Element]] = {}
        relations = self._relation_elements()
        for d in range(0, self.N + 1):
            rows = list(relations.get(d, []))
            for a in self.arrow_list:
                for row in ideal.get(d - a.degree, []):
                    rows.append(self._concat_element(row, prefix=a))
                    rows.append(self._concat_element(row, suffix=a))
            rows = [r for r in rows if r]
            ideal[d] = self._reduce_degree(d, rows)
        logger.debug("built algebra with dims %s", [self.dim(d) for d in range(self.N + 1)])

    def _relation_elements(self) -> Dict[int, List[Element]]:
        K = self.field
        out: Dict[int, List[Element]] = {}
        for r in self.presentation.relations:
            s, t, d = _relation_shape(r, self.arrows)
            elem: Element = {}
            for c, word in r.terms:
                p = Path(s, t, tuple(word))
                elem[p] = elem.get(p, K.zero) + linalg.scalar(K, c)
            elem = {p: c for p, c in elem.items() if c}
            if elem and d <= self.N:
                out.setdefault(d, []).append(elem)
        return out

    def _concat_element(self, elem: Element, prefix: Optional[Arrow] = None,
                        suffix: Optional[Arrow] = None) -> Element:
        out: Element = {}
        for p, c in elem.items():
            if prefix is not None:
                if prefix.target != p.source:
                    continue
                out[Path(prefix.source, p.target, (prefix.name,) + p.arrows)] = c
            else:
                if p.target != suffix.source:
                    continue
                out[Path(p.source, suffix.target, p.arrows + (suffix.name,))] = c
        return out

    def _reduce_degree(self, d: int, rows: List[Element]) -> List[Element]:
        K = self.field
        keys = sorted({k for k in self._paths if k[0] == d})
        basis_rows: List[Element] = []
        for key in keys:
            paths = self._paths[key]
            index = {p: i for i, p in enumerate(paths)}
            block = [{index[p]: c for p, c in r.items()} for r in rows if next(iter(r)) in index]
            echelon, pivots, _ = linalg.rref(linalg.from_rows(block, len(paths), K))
            pivot_set = set(pivots)
            self._standard[key] = [p for i, p in enumerate(paths) if i not in pivot_set]
            for i, p in enumerate(paths):
                if i not in pivot_set:
                    self._normal[p] = {p: K.one}
            for row, piv in zip(echelon, pivots):
                self._normal[paths[piv]] = {paths[c]: -x for c, x in row.items() if c != piv}
                basis_rows.append({paths[c]: x for c, x in row.items()})
        return basis_rows

    # ------------ queries ------------

    def standard_paths(self, d: int, source: Optional[str] = None, target: Optional[str] = None) -> List[Path]:
        out = []
        for s in self.vertices:
            if source is not None and s != source:
                continue
            for t in self.vertices:
                if target is None or t == target:
                    out.extend(self._standard.get((d, s, t), []))
        return out

    def block(self, d: int, source: str, target: str) -> List[Path]:
        return self._standard.get((d, source, target), [])

    def dim(self, d: int, source: Optional[str] = None, target: Optional[str] = None) -> int:
        return len(self.standard_paths(d, source, target))

    def normal_form(self, path: Path) -> Element:
        """
        Express a path as a combination of standard paths.

        Raises:
            UsageError: the path's degree exceeds the truncation
        """
        if path not in self._normal:
            if self.degree_of(path) > self.N:
                raise UsageError(f"path {path} lies beyond truncation degree {self.N}")
            raise UsageError(f"{path} is not a path of the quiver")
        return self._normal[path]

    def concat(self, p: Path, q: Path) -> Optional[Path]:
        if p.target != q.source:
            return None
        return Path(p.source, q.target, p.arrows + q.arrows)

    def multiply(self, x: Element, y: Element) -> Element:
        """Product x*y (x first, then y) reduced to standard paths."""
        K = self.field
        out: Element = {}
        for p, a in x.items():
            for q, b in y.items():
                pq = self.concat(p, q)
                if pq is None:
                    continue
                for r, c in self.normal_form(pq).items():
                    out[r] = out.get(r, K.zero) + a * b * c
        return {p: c for p, c in out.items() if c}

    def idempotent(self, v: str) -> Element:
        if v not in self.vertices:
            raise UsageError(f"unknown vertex '{v}'")
        return {Path(v, v): self.field.one}

    def cartan(self, d: int) -> Dict[Tuple[str, str], int]:
        """C_d[(mu, lam)] = number of standard paths of degree d from lam to mu."""
        return {(mu, lam): len(self.block(d, lam, mu)) for lam in self.vertices for mu in self.vertices}

    def cartan_table(self, upto: Optional[int] = None) -> List[List[List[int]]]:
        upto = self.N if upto is None else min(upto, self.N)
        return [[[len(self.block(d, lam, mu)) for lam in self.vertices] for mu in self.vertices]
                for d in range(upto + 1)]


# ============ CONSTRUCTIONS ============

@lru_cache(maxsize=64)
def build_algebra(p: AlgebraPresentation, allow_empty: bool = False) -> GradedAlgebra:
    """
    Build the truncated graded algebra of a presentation.

    Args:
        p: quiver, relations, field and truncation
        allow_empty: permit the zero algebra (no vertices)

    Returns:
        GradedAlgebra with standard bases up to degree p.truncation

    Raises:
        PresentationError: if the presentation is malformed
    """
    return GradedAlgebra(p, allow_empty=allow_empty)


def opposite_presentation(p: AlgebraPresentation) -> AlgebraPresentation:
    arrows = tuple(Arrow(a.name, a.target, a.source, a.degree) for a in p.quiver.arrows)
    relations = tuple(Relation(tuple((c, tuple(reversed(w))) for c, w in r.terms), r.line)
                      for r in p.relations)
    return AlgebraPresentation(Quiver(p.quiver.vertices, arrows), relations, p.field, p.truncation)


def opposite(A: GradedAlgebra) -> GradedAlgebra:
    return build_algebra(opposite_presentation(A.presentation), allow_empty=True)


def quotient_presentation(p: AlgebraPresentation, removed: Iterable[str]) -> AlgebraPresentation:
    gone = set(removed)
    vertices = tuple(v for v in p.quiver.vertices if v not in gone)
    arrows = tuple(a for a in p.quiver.arrows if a.source not in gone and a.target not in gone)
    kept = {a.name for a in arrows}
    relations = []
    for r in p.relations:
        terms = tuple((c, w) for c, w in r.terms if all(n in kept for n in w))
        if terms:
            relations.append(Relation(terms, r.line))
    return AlgebraPresentation(Quiver(vertices, arrows), tuple(relations), p.field, p.truncation)


def quotient_by_class(A: GradedAlgebra, order: StratOrder, cls: Iterable[str]) -> GradedAlgebra:
    """
    The quotient of A by the ideal generated by the idempotents of a class.

    Args:
        A: the algebra
        order: the stratification order
        cls: a maximal class of the order

    Returns:
        The quotient algebra on the remaining vertices

    Raises:
        UsageError: if the class is not maximal
    """
    cls = tuple(cls)
    order.check_maximal(cls)
    return build_algebra(quotient_presentation(A.presentation, cls), allow_empty=True)


def validate_positive(A) -> Dict[str, object]:
    """
    Check positivity of the grading.

    Accepts a GradedAlgebra or a raw AlgebraPresentation so that presentations
    that cannot be built (degree-0 arrows) can still be diagnosed.
    """
    p = A.presentation if isinstance(A, GradedAlgebra) else A
    violations = [f"arrow '{a.name}' has degree {a.degree}" for a in p.quiver.arrows if a.degree < 1]
    if isinstance(A, GradedAlgebra):
        if A.dim(0) != len(A.vertices):
            violations.append(f"A_0 has dimension {A.dim(0)} but there are {len(A.vertices)} vertices")
        for u in A.vertices:
            for v in A.vertices:
                prod = A.multiply(A.idempotent(u), A.idempotent(v))
                expected = A.idempotent(u) if u == v else {}
                if prod != expected:
                    violations.append(f"idempotents e_{u}, e_{v} are not orthogonal")
    return {"positive": not violations, "violations": violations}


def direct_sum(p1: AlgebraPresentation, p2: AlgebraPresentation,
               prefixes: Tuple[str, str] = ("a", "b")) -> AlgebraPresentation:
    """Disjoint union of the quivers; ids get the given prefixes."""
    if p1.field != p2.field:
        raise UsageError(f"field mismatch: {p1.field} vs {p2.field}")
    vertices: List[str] = []
    arrows: List[Arrow] = []
    relations: List[Relation] = []
    for pre, p in zip(prefixes, (p1, p2)):
        vertices.extend(f"{pre}{v}" for v in p.quiver.vertices)
        arrows.extend(Arrow(f"{pre}{a.name}", f"{pre}{a.source}", f"{pre}{a.target}", a.degree)
                      for a in p.quiver.arrows)
        relations.extend(Relation(tuple((c, tuple(f"{pre}{n}" for n in w)) for c, w in r.terms))
                         for r in p.relations)
    return AlgebraPresentation(Quiver(tuple(vertices), tuple(arrows)), tuple(relations),
                               p1.field, min(p1.truncation, p2.truncation))


def tensor_product(p1: AlgebraPresentation, p2: AlgebraPresentation) -> AlgebraPresentation:
    """
    Presentation of the tensor product over the field.

    Vertices are pairs ``u.v``; arrows are ``a.v`` and ``u.b``; both factors'
    relations hold on every copy and the two kinds of arrows commute.
    """
    if p1.field != p2.field:
        raise UsageError(f"field mismatch: {p1.field} vs {p2.field}")
    q1, q2 = p1.quiver, p2.quiver
    vertices = tuple(f"{u}.{v}" for u, v in product(q1.vertices, q2.vertices))
    arrows: List[Arrow] = []
    for a in q1.arrows:
        for v in q2.vertices:
            arrows.append(Arrow(f"{a.name}.{v}", f"{a.source}.{v}", f"{a.target}.{v}", a.degree))
    for u in q1.vertices:
        for b in q2.arrows:
            arrows.append(Arrow(f"{u}.{b.name}", f"{u}.{b.source}", f"{u}.{b.target}", b.degree))
    relations: List[Relation] = []
    for r in p1.relations:
        for v in q2.vertices:
            relations.append(Relation(tuple((c, tuple(f"{n}.{v}" for n in w)) for c, w in r.terms)))
    for r in p2.relations:
        for u in q1.vertices:
            relations.append(Relation(tuple((c, tuple(f"{u}.{n}" for n in w)) for c, w in r.terms)))
    for a in q1.arrows:
        for b in q2.arrows:
            first = (f"{a.name}.{b.source}", f"{a.target}.{b.name}")
            second = (f"{a.source}.{b.name}", f"{a.name}.{b.target}")
            relations.append(Relation(((Fraction(1), first), (Fraction(-1), second))))
    return AlgebraPresentation(Quiver(vertices, tuple(arrows)), tuple(relations),
                               p1.field, min(p1.truncation, p2.truncation))


def format_coefficient(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def to_fraction(K, x) -> Fraction:
    return Fraction(str(K.to_sympy(x)))


def relation_text(r: Relation) -> str:
    parts = []
    for c, w in r.terms:
        word = "*".join(w)
        if c == 1:
            parts.append(f"+ {word}")
        elif c == -1:
            parts.append(f"- {word}")
        elif c < 0:
            parts.append(f"- {format_coefficient(-c)} {word}")
        else:
            parts.append(f"+ {format_coefficient(c)} {word}")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text


def to_presentation_text(p: AlgebraPresentation, order: Optional[StratOrder] = None,
                         depth: Optional[int] = None) -> str:
    """Render a presentation in the line format accepted by the parser."""
    lines = [f"field {p.field}"]
    lines.extend(f"vertex {v}" for v in p.quiver.vertices)
    for a in p.quiver.arrows:
        suffix = f" {a.degree}" if a.degree != 1 else ""
        lines.append(f"arrow {a.name} {a.source} {a.target}{suffix}")
    lines.extend(f"relation {relation_text(r)}" for r in p.relations)
    if order is not None and order.classes:
        lines.append(f"order {order.to_text()}")
    lines.append(f"truncate {p.truncation}")
    if depth is not None:
        lines.append(f"depth {depth}")
    return "\n".join(lines) + "\n"


def arrows_between(A: GradedAlgebra, source: str, target: str) -> Sequence[Arrow]:
    return [a for a in A.arrow_list if a.source == source and a.target == target]
