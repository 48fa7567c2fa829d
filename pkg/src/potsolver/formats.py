"""Text formats: instance files (``p pot n m`` / ``c i j rels``) and model files.

Instance file::

    # comment
    p pot 3 3
    c 0 2 <
    c 0 1 |
    c 1 2 <>

Model file::

    s yes
    q 0 0
    q 1 1
    q 2 2
    o 0 2
    o 1 2
"""

from typing import List, Optional, Union

from .algebra import format_rels, parse_rels
from .errors import ParseError
from .network import Constraint, Instance, Model


def _text(data: Union[str, bytes]) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    return data


def _int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {token!r}", line) from None


def format_instance(ins: Instance, comment: Optional[str] = None) -> str:
    lines: List[str] = []
    if comment:
        lines.extend(f"# {part}" for part in comment.splitlines())
    lines.append(f"p pot {ins.n} {len(ins.constraints)}")
    lines.extend(f"c {c.i} {c.j} {format_rels(c.rels)}" for c in ins.constraints)
    return "\n".join(lines) + "\n"


def parse_instance(data: Union[str, bytes]) -> Instance:
    """Parse an instance file.

    Blank lines and ``#`` comments are skipped anywhere; the header must come
    before any constraint and its constraint count must match.

    Raises:
        ParseError: any grammar violation, with the offending line number
    """
    n: Optional[int] = None
    expected = 0
    constraints: List[Constraint] = []
    last_line = 0
    for lineno, raw in enumerate(_text(data).splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0].startswith("#"):
            continue
        last_line = lineno
        tag = tokens[0]
        if tag == "p":
            if n is not None:
                raise ParseError("duplicate header", lineno)
            if len(tokens) != 4 or tokens[1] != "pot":
                raise ParseError("header must read 'p pot <n> <m>'", lineno)
            n = _int(tokens[2], lineno, "variable count")
            expected = _int(tokens[3], lineno, "constraint count")
            if n <= 0:
                raise ParseError(f"variable count must be positive, got {n}", lineno)
            if expected < 0:
                raise ParseError(f"constraint count must be non-negative, got {expected}", lineno)
        elif tag == "c":
            if n is None:
                raise ParseError("constraint before header", lineno)
            if len(tokens) != 4:
                raise ParseError("constraint must read 'c <i> <j> <rels>'", lineno)
            i = _int(tokens[1], lineno, "variable index")
            j = _int(tokens[2], lineno, "variable index")
            if not (0 <= i < n and 0 <= j < n):
                raise ParseError(f"variable index out of range 0..{n - 1}", lineno)
            if i == j:
                raise ParseError(f"constraint relates variable {i} to itself", lineno)
            try:
                rels = parse_rels(tokens[3])
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            constraints.append(Constraint(i, j, rels))
        else:
            raise ParseError(f"unknown line tag {tag!r}", lineno)
    if n is None:
        raise ParseError("missing 'p pot' header")
    if len(constraints) != expected:
        raise ParseError(f"header announces {expected} constraints, found {len(constraints)}", last_line)
    return Instance(n, constraints)


def format_model(model: Optional[Model]) -> str:
    """``s no`` for None, otherwise ``s yes`` plus ``q``/``o`` lines."""
    if model is None:
        return "s no\n"
    lines = ["s yes"]
    lines.extend(f"q {var} {cls}" for var, cls in enumerate(model.class_of))
    lines.extend(f"o {c1} {c2}" for c1, c2 in sorted(model.strict_edges))
    return "\n".join(lines) + "\n"


def parse_model(data: Union[str, bytes]) -> Optional[Model]:
    """Parse a model file; returns None for ``s no``.

    Raises:
        ParseError: missing or repeated ``s`` line, variables without a ``q``
            line, sparse class ids or ``o`` edges naming unknown classes
    """
    verdict: Optional[str] = None
    classes: dict = {}
    edges = set()
    for lineno, raw in enumerate(_text(data).splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0].startswith("#"):
            continue
        tag = tokens[0]
        if tag == "s":
            if verdict is not None:
                raise ParseError("duplicate status line", lineno)
            if len(tokens) != 2 or tokens[1] not in ("yes", "no"):
                raise ParseError("status must read 's yes' or 's no'", lineno)
            verdict = tokens[1]
        elif tag in ("q", "o"):
            if verdict is None:
                raise ParseError(f"'{tag}' line before status line", lineno)
            if verdict == "no":
                raise ParseError(f"'{tag}' line after 's no'", lineno)
            if len(tokens) != 3:
                raise ParseError(f"'{tag}' line needs two integers", lineno)
            a = _int(tokens[1], lineno, "id")
            b = _int(tokens[2], lineno, "id")
            if a < 0 or b < 0:
                raise ParseError("ids must be non-negative", lineno)
            if tag == "q":
                if a in classes:
                    raise ParseError(f"variable {a} assigned twice", lineno)
                classes[a] = b
            else:
                edges.add((a, b))
        else:
            raise ParseError(f"unknown line tag {tag!r}", lineno)
    if verdict is None:
        raise ParseError("missing status line")
    if verdict == "no":
        return None
    if not classes:
        raise ParseError("model has no 'q' lines")
    if sorted(classes) != list(range(len(classes))):
        raise ParseError("'q' lines must cover variables 0..n-1 exactly once")
    class_of = tuple(classes[v] for v in range(len(classes)))
    k = len(set(class_of))
    if set(class_of) != set(range(k)):
        raise ParseError("class ids must be dense from 0")
    for c1, c2 in edges:
        if c1 >= k or c2 >= k:
            raise ParseError(f"edge ({c1}, {c2}) names an unknown class")
    return Model(class_of, frozenset(edges))
