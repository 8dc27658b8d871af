"""Declarative workspace files: rings, potentials, factorisations, defects.

One flat line-oriented grammar (no REPL): every computation is batch and
reproducible.  Polynomial expressions use the textual grammar of
:func:`lgmf.ring.parse_poly` (signed sums of terms with ``^``, ``*`` and
integer or ``p/q`` coefficients).

    # comment
    ring R = [x, y]
    potential W on R = x^3 - y^3
    mf X on W = ([x - y], [x^2 + x*y + y^2])
    defect D from W to V = ([...], [...])
    morphism f : X -> X parity 1 = [[0, -x], [1, 0]]

A flat bracket list in a factorisation denotes a diagonal block; a nested
list is a full matrix block (d0, d1).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .adjunction import AdjointData
from .mf import FactorisationError, MatrixFactorisation, Morphism, new_mf
from .ring import (ParseError, Poly, RingContext, UnknownVariable,
                   embed, parse_poly as ring_parse_poly)


class WorkspaceError(ValueError):
    """A parse or resolution failure, carrying file position."""

    def __init__(self, message, line=None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


# -- polynomial expressions --------------------------------------------------

def parse_poly(text: str, ctx: RingContext) -> Poly:
    """An exact polynomial from the textual grammar, with workspace errors."""
    try:
        return ring_parse_poly(text, ctx)
    except (ParseError, UnknownVariable) as exc:
        raise WorkspaceError(f"bad expression {text!r}: {exc}") from None


def _parse_matrix_literal(text: str):
    """Nested bracket lists with arbitrary expression leaves, kept as text."""
    depth, buf, items = 0, "", []
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise WorkspaceError(f"expected a bracket list, got {text!r}")
    inner = text[1:-1]
    for ch in inner:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == "," and depth == 0:
            items.append(buf)
            buf = ""
        else:
            buf += ch
    if buf.strip() or not items:
        items.append(buf)
    out = []
    for item in items:
        item = item.strip()
        if item.startswith("["):
            out.append(_parse_matrix_literal(item))
        else:
            out.append(item)
    return out


def _block_to_matrix(block, ctx):
    """A flat list is a diagonal block; a nested list is a full matrix."""
    if all(isinstance(e, str) for e in block):
        polys = [parse_poly(e, ctx) for e in block]
        k = len(polys)
        return [[polys[i] if i == j else ctx.zero() for j in range(k)]
                for i in range(k)]
    if not all(isinstance(row, list) for row in block):
        raise WorkspaceError("matrix block mixes rows and entries")
    return [[parse_poly(e, ctx) for e in row] for row in block]


def _split_top(text, sep=","):
    depth, buf, items = 0, "", []
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == sep and depth == 0:
            items.append(buf)
            buf = ""
        else:
            buf += ch
    items.append(buf)
    return [i.strip() for i in items]


# -- workspace ---------------------------------------------------------------

@dataclass
class Workspace:
    rings: dict = field(default_factory=dict)
    potentials: dict = field(default_factory=dict)
    mfs: dict = field(default_factory=dict)
    defects: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    positions: dict = field(default_factory=dict)  # name -> line number

    def _declare(self, kind, name, value, line):
        for table in (self.rings, self.potentials, self.mfs,
                      self.defects, self.morphisms):
            if name in table:
                raise WorkspaceError(f"duplicate name {name!r} "
                                     f"(first declared at line "
                                     f"{self.positions[name]})", line)
        getattr(self, kind)[name] = value
        self.positions[name] = line

    def potential(self, name) -> Poly:
        if name not in self.potentials:
            raise WorkspaceError(f"unknown potential {name!r}")
        return self.potentials[name]

    def factorisation(self, name) -> MatrixFactorisation:
        if name in self.mfs:
            return self.mfs[name]
        if name in self.defects:
            return self.defects[name].base
        raise WorkspaceError(f"unknown factorisation {name!r}")

    def defect(self, name) -> AdjointData:
        if name in self.defects:
            return self.defects[name]
        if name in self.mfs:
            # a plain factorisation is a boundary defect from the empty theory
            X = self.mfs[name]
            empty = RingContext([])
            return AdjointData(X, empty.zero(), X.potential)
        raise WorkspaceError(f"unknown defect {name!r}")

    def morphism(self, name) -> Morphism:
        if name not in self.morphisms:
            raise WorkspaceError(f"unknown morphism {name!r}")
        return self.morphisms[name]


_RING_RE = re.compile(r"ring\s+(\w+)\s*=\s*\[([^\]]*)\]\s*$")
_POT_RE = re.compile(r"potential\s+(\w+)\s+on\s+(\w+)\s*=\s*(.+)$")
_MF_RE = re.compile(r"mf\s+(\w+)\s+on\s+(\w+)\s*=\s*\((.+)\)\s*$")
_DEF_RE = re.compile(
    r"defect\s+(\w+)\s+from\s+(\w+)\s+to\s+(\w+)\s*=\s*\((.+)\)\s*$")
_MOR_RE = re.compile(
    r"morphism\s+(\w+)\s*:\s*(\w+)\s*->\s*(\w+)\s+parity\s+([01])"
    r"\s*=\s*(.+)$")


def _factor_pair(body, ctx, line):
    blocks = _split_top(body)
    halves, depth, buf = [], 0, ""
    # body is "blockA , blockB" at bracket depth zero, each block a list
    parts = []
    for item in blocks:
        parts.append(item)
    if len(parts) != 2:
        raise WorkspaceError("factorisation needs exactly two blocks "
                             "(d0, d1)", line)
    a = _block_to_matrix(_parse_matrix_literal(parts[0]), ctx)
    b = _block_to_matrix(_parse_matrix_literal(parts[1]), ctx)
    return a, b


def parse_workspace(text: str) -> Workspace:
    """Deterministic parse of the declarative grammar; errors carry lines."""
    ws = Workspace()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _RING_RE.match(line)
        if m:
            name, vars_ = m.groups()
            names = [v.strip() for v in vars_.split(",") if v.strip()]
            if len(set(names)) != len(names):
                raise WorkspaceError(f"repeated variable in ring {name!r}",
                                     lineno)
            ws._declare("rings", name, RingContext(names), lineno)
            continue
        m = _POT_RE.match(line)
        if m:
            name, ring, expr = m.groups()
            if ring not in ws.rings:
                raise WorkspaceError(f"unknown ring {ring!r}", lineno)
            try:
                W = parse_poly(expr, ws.rings[ring])
            except WorkspaceError as exc:
                raise WorkspaceError(str(exc), lineno) from None
            ws._declare("potentials", name, W, lineno)
            continue
        m = _MF_RE.match(line)
        if m:
            name, pot, body = m.groups()
            W = ws.potentials.get(pot)
            if W is None:
                raise WorkspaceError(f"unknown potential {pot!r}", lineno)
            d0, d1 = _factor_pair(body, W.ctx, lineno)
            try:
                X = new_mf(W.ctx, W, d0, d1)
            except FactorisationError as exc:
                raise WorkspaceError(f"mf {name!r} does not factor "
                                     f"{pot}: {exc}", lineno) from None
            ws._declare("mfs", name, X, lineno)
            continue
        m = _DEF_RE.match(line)
        if m:
            name, src, tgt, body = m.groups()
            Ws, Wt = ws.potentials.get(src), ws.potentials.get(tgt)
            if Ws is None or Wt is None:
                raise WorkspaceError(f"unknown potential in defect "
                                     f"{name!r}", lineno)
            ctx = Wt.ctx.merge(Ws.ctx)
            d0, d1 = _factor_pair(body, ctx, lineno)
            pot = embed(Wt, ctx) - embed(Ws, ctx)
            try:
                X = new_mf(ctx, pot, d0, d1)
                data = AdjointData(X, Ws, Wt)
            except (FactorisationError, ValueError) as exc:
                raise WorkspaceError(f"defect {name!r}: {exc}",
                                     lineno) from None
            ws._declare("defects", name, data, lineno)
            continue
        m = _MOR_RE.match(line)
        if m:
            name, src, tgt, parity, body = m.groups()
            try:
                X = ws.factorisation(src)
                Y = ws.factorisation(tgt)
            except WorkspaceError as exc:
                raise WorkspaceError(str(exc), lineno) from None
            ctx = Y.ctx.merge(X.ctx)
            mat = _block_to_matrix(_parse_matrix_literal(body.strip()), ctx)
            try:
                f = Morphism(X, Y, int(parity), mat)
            except ValueError as exc:
                raise WorkspaceError(f"morphism {name!r}: {exc}",
                                     lineno) from None
            ws._declare("morphisms", name, f, lineno)
            continue
        raise WorkspaceError(f"unrecognised declaration: {line!r}", lineno)
    return ws


def load_workspace(path: str) -> Workspace:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_workspace(fh.read())
