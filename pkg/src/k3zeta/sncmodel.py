"""Triple-point-free snc-models: parsing, validation and derived data."""

from __future__ import annotations

import dataclasses
import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Iterable

import jsonschema

from .flowers import (
    CATALOG,
    FlowerClasses,
    FlowerSpec,
    FlowerTypeError,
    ParityError,
    TopKind,
    canonical_code,
    cover_classes,
    endpoint_nu,
    flower_nus,
)
from .grotring import ClassSymbol, GrotElem, VLaurent

__all__ = [
    "Geometry",
    "Component",
    "CurveData",
    "Edge",
    "FlowerRef",
    "Model",
    "ModelParseError",
    "InsufficientData",
    "CycleDegeneration",
    "Violation",
    "ValidationReport",
    "parse_model",
    "load_model",
    "model_to_dict",
    "validate",
    "weight",
    "minimal_components",
    "classify",
    "euler_open",
    "euler_total",
    "degree_sum",
    "flower_spec",
    "assign_cover_classes",
    "open_class",
    "curve_class",
]


class ModelParseError(ValueError):
    """Malformed model document; ``path`` locates the offending field."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class InsufficientData(ValueError):
    pass


class CycleDegeneration(ValueError):
    """Components of minimal weight form a cycle."""


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class Geometry:
    kind: str  # "P2", "RuledSurface" or "KTrivial"
    base_genus: int = 0
    L: int = 0
    euler: int | None = None

    @property
    def minimal_ruled(self) -> bool:
        return self.kind == "RuledSurface" and self.L == 0


@dataclass(frozen=True)
class Component:
    id: str
    N: int
    nu: int
    geometry: Geometry
    euler_open_override: int | None = None
    symbol: ClassSymbol | None = None
    cover_class: GrotElem | None = None

    @property
    def weight(self) -> Fraction:
        return Fraction(self.nu, self.N) + 1

    @property
    def ratio(self) -> Fraction:
        """The candidate pole -nu/N."""
        return Fraction(-self.nu, self.N)


@dataclass(frozen=True)
class CurveData:
    genus: int = 0
    symbol: ClassSymbol | None = None
    cover_class: GrotElem | None = None


@dataclass(frozen=True)
class Edge:
    a: str
    b: str
    curves: tuple[CurveData, ...]

    def other(self, cid: str) -> str:
        return self.b if cid == self.a else self.a

    def joins(self, x: str, y: str) -> bool:
        return {self.a, self.b} == {x, y}


@dataclass(frozen=True)
class FlowerRef:
    type_code: str
    members: tuple[str, ...]
    attachment: str

    @property
    def top(self) -> str:
        return self.members[0]

    @property
    def length(self) -> int:
        return len(self.members) - 1


@dataclass(frozen=True)
class Model:
    components: tuple[Component, ...]
    edges: tuple[Edge, ...] = ()
    flowers: tuple[FlowerRef, ...] = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "_index", {c.id: c for c in self.components})

    def component(self, cid: str) -> Component:
        try:
            return self._index[cid]
        except KeyError:
            raise KeyError(f"unknown component {cid!r}") from None

    @property
    def ids(self) -> list[str]:
        return [c.id for c in self.components]

    def incident(self, cid: str) -> list[Edge]:
        return [e for e in self.edges if cid in (e.a, e.b)]

    def edge_between(self, x: str, y: str) -> Edge | None:
        for e in self.edges:
            if e.joins(x, y):
                return e
        return None

    def flower_of(self, cid: str) -> tuple[FlowerRef, int] | None:
        for f in self.flowers:
            if cid in f.members:
                return f, f.members.index(cid)
        return None

    def role(self, cid: str) -> str:
        """'Flowerpot', 'ChainMember' or 'FlowerMember'."""
        if self.flower_of(cid) is not None:
            return "FlowerMember"
        mins = minimal_components(self)
        if cid in mins:
            return "Flowerpot" if len(mins) == 1 else "ChainMember"
        return "Unassigned"


# ---------------------------------------------------------------------------
# parsing


@lru_cache(maxsize=None)
def _schema() -> dict:
    text = resources.files("k3zeta").joinpath("schemas/model.schema.json").read_text()
    return json.loads(text)


def _path_str(parts: Iterable) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _parse_class(raw, path: str) -> ClassSymbol:
    if isinstance(raw, str):
        return ClassSymbol(raw)
    poincare = None
    if "poincare" in raw:
        try:
            poincare = VLaurent({Fraction(k): v for k, v in raw["poincare"].items()})
        except (ValueError, ZeroDivisionError) as exc:
            raise ModelParseError(str(exc), path + ".poincare") from None
    try:
        return ClassSymbol(raw["name"], raw.get("euler"), poincare)
    except ValueError as exc:
        raise ModelParseError(str(exc), path) from None


def parse_model(text: str | dict) -> Model:
    """Parse a model document (JSON text or an already decoded dict)."""
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ModelParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from None
    else:
        doc = text
    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ModelParseError(err.message, _path_str(err.absolute_path))

    comps = []
    seen = set()
    for i, c in enumerate(doc["components"]):
        path = f"$.components[{i}]"
        if c["id"] in seen:
            raise ModelParseError(f"duplicate component id {c['id']!r}", path + ".id")
        seen.add(c["id"])
        g = c["geometry"]
        geom = Geometry(g["kind"], g.get("base_genus", 0), g.get("L", 0), g.get("euler"))
        sym = _parse_class(c["class"], path + ".class") if "class" in c else None
        comps.append(Component(c["id"], c["N"], c["nu"], geom, c.get("euler_open_override"), sym))

    edges = []
    for i, e in enumerate(doc.get("edges", [])):
        path = f"$.edges[{i}]"
        for end in ("a", "b"):
            if e[end] not in seen:
                raise ModelParseError(f"unknown component {e[end]!r}", f"{path}.{end}")
        if e["a"] == e["b"]:
            raise ModelParseError("self-intersection edges are not allowed", path)
        if any(x.joins(e["a"], e["b"]) for x in edges):
            raise ModelParseError("duplicate edge; list every curve under one edge", path)
        curves = []
        for j, cv in enumerate(e["curves"]):
            sym = _parse_class(cv["class"], f"{path}.curves[{j}].class") if "class" in cv else None
            curves.append(CurveData(cv["genus"], sym))
        edges.append(Edge(e["a"], e["b"], tuple(curves)))

    flowers = []
    for i, f in enumerate(doc.get("flowers", [])):
        path = f"$.flowers[{i}]"
        try:
            code = canonical_code(f["type"])
        except FlowerTypeError as exc:
            raise ModelParseError(str(exc), path + ".type") from None
        for j, mid in enumerate(f["members"]):
            if mid not in seen:
                raise ModelParseError(f"unknown component {mid!r}", f"{path}.members[{j}]")
        if f["attachment"] not in seen:
            raise ModelParseError(f"unknown component {f['attachment']!r}", path + ".attachment")
        flowers.append(FlowerRef(code, tuple(f["members"]), f["attachment"]))

    return Model(tuple(comps), tuple(edges), tuple(flowers), doc.get("name", ""))


def load_model(path) -> Model:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())


def _class_to_json(sym: ClassSymbol | None):
    if sym is None:
        return None
    if sym.euler is None and sym.poincare is None:
        return sym.name
    out: dict = {"name": sym.name}
    if sym.euler is not None:
        out["euler"] = sym.euler
    if sym.poincare is not None:
        out["poincare"] = sym.poincare.to_json()
    return out


def model_to_dict(m: Model) -> dict:
    """Inverse of ``parse_model`` for user-supplied data."""
    comps = []
    for c in m.components:
        g = {"kind": c.geometry.kind}
        if c.geometry.kind == "RuledSurface":
            g.update(base_genus=c.geometry.base_genus, L=c.geometry.L)
        if c.geometry.euler is not None:
            g["euler"] = c.geometry.euler
        d = {"id": c.id, "N": c.N, "nu": c.nu, "geometry": g}
        if c.euler_open_override is not None:
            d["euler_open_override"] = c.euler_open_override
        if c.symbol is not None:
            d["class"] = _class_to_json(c.symbol)
        comps.append(d)
    edges = []
    for e in m.edges:
        curves = []
        for cv in e.curves:
            d = {"genus": cv.genus}
            if cv.symbol is not None:
                d["class"] = _class_to_json(cv.symbol)
            curves.append(d)
        edges.append({"a": e.a, "b": e.b, "curves": curves})
    flowers = [{"type": f.type_code, "members": list(f.members), "attachment": f.attachment} for f in m.flowers]
    out = {"components": comps, "edges": edges, "flowers": flowers}
    if m.name:
        out["name"] = m.name
    return out


# ---------------------------------------------------------------------------
# weights and the minimal-weight graph


def weight(m: Model, cid: str) -> Fraction:
    return m.component(cid).weight


def minimal_components(m: Model) -> list[str]:
    w = min(c.weight for c in m.components)
    return [c.id for c in m.components if c.weight == w]


def _min_graph_shape(m: Model) -> str:
    """'vertex', 'path', 'cycle' or 'disconnected' for the minimal-weight graph."""
    mins = set(minimal_components(m))
    if len(mins) == 1:
        return "vertex"
    deg: dict[str, int] = defaultdict(int)
    nedges = 0
    adj: dict[str, set] = defaultdict(set)
    for e in m.edges:
        if e.a in mins and e.b in mins:
            k = len(e.curves)
            deg[e.a] += k
            deg[e.b] += k
            nedges += k
            adj[e.a].add(e.b)
            adj[e.b].add(e.a)
    if not _connected(mins, adj):
        return "disconnected"
    if nedges == len(mins) - 1 and all(deg[v] <= 2 for v in mins):
        return "path"
    if nedges == len(mins) and all(deg[v] == 2 for v in mins):
        return "cycle"
    return "other"


def _connected(vertices: set, adj) -> bool:
    vertices = set(vertices)
    if not vertices:
        return True
    start = next(iter(vertices))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj.get(v, ()):
            if w in vertices and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == vertices


def min_path_order(m: Model) -> list[str]:
    """Minimal-weight components in path order (a single id for a flowerpot)."""
    mins = minimal_components(m)
    if len(mins) == 1:
        return mins
    if _min_graph_shape(m) != "path":
        raise CycleDegeneration("minimal-weight components do not form a path")
    sm = set(mins)
    adj = defaultdict(list)
    for e in m.edges:
        if e.a in sm and e.b in sm:
            adj[e.a].append(e.b)
            adj[e.b].append(e.a)
    ends = sorted(v for v in mins if len(adj[v]) == 1)
    order = [ends[0]]
    while len(order) < len(mins):
        nxt = [w for w in adj[order[-1]] if w not in order]
        order.append(nxt[0])
    return order


def classify(m: Model) -> str:
    shape = _min_graph_shape(m)
    if shape == "vertex":
        return "Flowerpot"
    if shape == "path":
        return "Chain"
    if shape == "cycle":
        raise CycleDegeneration("cycle degeneration: excluded for K3 surfaces")
    raise CycleDegeneration(f"minimal-weight graph is not a vertex or path ({shape})")


# ---------------------------------------------------------------------------
# Euler characteristics


def euler_total(m: Model, cid: str) -> int:
    g = m.component(cid).geometry
    if g.kind == "P2":
        return 3
    if g.kind == "RuledSurface":
        return 2 * (2 - 2 * g.base_genus) + g.L
    if g.euler is None:
        raise InsufficientData(f"component {cid!r}: KTrivial geometry needs an euler value")
    return g.euler


def euler_open(m: Model, cid: str) -> int:
    c = m.component(cid)
    if c.euler_open_override is not None:
        return c.euler_open_override
    chi = euler_total(m, cid)
    for e in m.incident(cid):
        chi -= sum(2 - 2 * cv.genus for cv in e.curves)
    return chi


def degree_sum(m: Model) -> int:
    """Sum of N_i chi(E_i open); equals 24 for a K3 model."""
    return sum(c.N * euler_open(m, c.id) for c in m.components)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    code: str
    message: str

    def __str__(self):
        return f"[{self.code}] {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    warnings: list[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def add(self, code: str, message: str):
        self.violations.append(Violation(code, message))

    def warn(self, code: str, message: str):
        self.warnings.append(Violation(code, message))


def flower_spec(m: Model, f: FlowerRef) -> FlowerSpec:
    """The FlowerSpec realized by a model flower (multiplicities not checked)."""
    t = CATALOG[f.type_code]
    top = m.component(f.top)
    first = t.pattern(f.length)[0] if (t.variable_length or f.length == t.fixed_length) else 1
    if top.N % first:
        raise FlowerTypeError(f"top multiplicity {top.N} is not a multiple of {first}")
    genus = top.geometry.base_genus if t.top_kind is TopKind.MINIMAL_RULED else 0
    length = f.length if t.variable_length else None
    return FlowerSpec(f.type_code, top.N // first, top.nu, length, genus)


def _check_flower(m: Model, f: FlowerRef, rep: ValidationReport, mins: set):
    t = CATALOG[f.type_code]
    label = f"flower {f.type_code} at {f.top!r}"
    if f.type_code == "4D":
        rep.add("flower-4D", f"{label}: flower type excluded for K3")
        return
    if len(set(f.members)) != len(f.members) or f.attachment in f.members:
        rep.add("flower-members", f"{label}: repeated component")
        return
    if f.attachment not in mins:
        rep.add("flower-attachment", f"{label}: attachment {f.attachment!r} is not of minimal weight")
    chain = list(f.members) + [f.attachment]
    for x, y in zip(chain, chain[1:]):
        e = m.edge_between(x, y)
        if e is None:
            rep.add("flower-edge", f"{label}: no double curve between {x!r} and {y!r}")
        elif len(e.curves) != 1:
            rep.add("flower-edge", f"{label}: flower curves must be irreducible")
    for j, cid in enumerate(f.members):
        for e in m.incident(cid):
            other = e.other(cid)
            if other not in chain or abs(chain.index(other) - j) != 1:
                rep.add("flower-edge", f"{label}: {cid!r} meets {other!r} outside the flower chain")
    top = m.component(f.top)
    kind = t.top_kind
    if top.geometry.kind != ("RuledSurface" if kind is TopKind.MINIMAL_RULED else "P2"):
        rep.add("flower-top", f"{label}: top geometry {top.geometry.kind} does not fit the type")
    elif kind is TopKind.MINIMAL_RULED and not top.geometry.minimal_ruled:
        rep.add("flower-top", f"{label}: ruled top must be minimal (L = 0)")
    if kind is not TopKind.MINIMAL_RULED:
        e = m.edge_between(chain[0], chain[1])
        if e is not None and any(cv.genus != 0 for cv in e.curves):
            rep.add("flower-top", f"{label}: top must meet the next component in a rational curve")
    try:
        spec = flower_spec(m, f)
    except FlowerTypeError as exc:
        rep.add("flower-table", f"{label}: {exc}")
        return
    actual_N = [m.component(c).N for c in chain]
    if actual_N != spec.all_N:
        rep.add("flower-table", f"{label}: multiplicities {actual_N} do not match {spec.all_N}")
        return
    try:
        nus = flower_nus(spec)
    except ParityError as exc:
        rep.add("flower-nu", f"{label}: {exc}")
        return
    actual_nu = [m.component(c).nu for c in chain]
    if actual_nu != nus:
        expected_end = endpoint_nu(spec.code, spec.nu0, spec.length)
        rep.add(
            "flower-nu",
            f"{label}: discrepancies {actual_nu} break the recursion {nus} (nu_end should be {expected_end})",
        )


def validate(m: Model, strict: bool = False) -> ValidationReport:
    """Combinatorial checks; the result lists violations rather than raising."""
    rep = ValidationReport()
    adj = defaultdict(set)
    for e in m.edges:
        adj[e.a].add(e.b)
        adj[e.b].add(e.a)
    if not _connected(set(m.ids), adj):
        rep.add("disconnected", "dual graph is not connected")
    shape = _min_graph_shape(m)
    if shape == "cycle":
        rep.add("cycle", "minimal-weight components form a cycle (excluded for K3)")
    elif shape not in ("vertex", "path"):
        rep.add("min-graph", f"minimal-weight components do not form a vertex or path ({shape})")
    mins = set(minimal_components(m))
    owners: dict[str, int] = defaultdict(int)
    for f in m.flowers:
        for cid in f.members:
            owners[cid] += 1
        _check_flower(m, f, rep, mins)
    for cid, k in owners.items():
        if k > 1:
            rep.add("flower-members", f"component {cid!r} belongs to {k} flowers")
        if cid in mins:
            rep.add("flower-members", f"minimal-weight component {cid!r} listed as a flower member")
    for c in m.components:
        if c.id not in mins and c.id not in owners:
            rep.add("unassigned", f"component {c.id!r} is neither of minimal weight nor in a flower")
    try:
        d = degree_sum(m)
    except InsufficientData as exc:
        rep.warn("degree", str(exc))
    else:
        if d != 24:
            msg = f"sum of N chi(E open) is {d}, not 24"
            if strict:
                rep.add("degree", msg)
            else:
                rep.warn("degree", msg)
    return rep


# ---------------------------------------------------------------------------
# cover classes


def _flower_classes(m: Model, f: FlowerRef) -> FlowerClasses:
    spec = flower_spec(m, f)
    top = m.component(f.top)
    nxt = f.members[1] if f.length else f.attachment
    e = m.edge_between(f.top, nxt)
    curve_sym = e.curves[0].symbol if e is not None and e.curves else None
    return cover_classes(
        spec,
        tag=f.top,
        top_name=top.symbol.name if top.symbol is not None else None,
        curve_name=curve_sym.name if curve_sym is not None else None,
    )


def assign_cover_classes(m: Model) -> Model:
    """Attach GrotElem classes to all strata, deriving them on flowers."""
    comps = {c.id: c for c in m.components}
    curves = {i: list(e.curves) for i, e in enumerate(m.edges)}
    for c in m.components:
        if c.symbol is not None:
            comps[c.id] = dataclasses.replace(c, cover_class=GrotElem.symbol(c.symbol))
    for i, e in enumerate(m.edges):
        curves[i] = [
            dataclasses.replace(cv, cover_class=GrotElem.symbol(cv.symbol)) if cv.symbol is not None else cv
            for cv in e.curves
        ]
    for f in m.flowers:
        if f.type_code == "4D":
            continue
        cls = _flower_classes(m, f)
        chain = list(f.members) + [f.attachment]
        for j, cid in enumerate(f.members):
            comps[cid] = dataclasses.replace(comps[cid], cover_class=cls.opens[j])
            idx = next(k for k, e in enumerate(m.edges) if e.joins(cid, chain[j + 1]))
            curves[idx] = [dataclasses.replace(curves[idx][0], cover_class=cls.curves[j])]
    new_edges = tuple(Edge(e.a, e.b, tuple(curves[i])) for i, e in enumerate(m.edges))
    return Model(tuple(comps[c.id] for c in m.components), new_edges, m.flowers, m.name)


def flower_classes(m: Model, f: FlowerRef) -> FlowerClasses:
    return _flower_classes(m, f)


def open_class(m: Model, cid: str) -> GrotElem:
    c = m.component(cid)
    if c.cover_class is None:
        raise InsufficientData(f"component {cid!r} has no class; supply one in the model")
    return c.cover_class


def curve_class(m: Model, edge: Edge, k: int) -> GrotElem:
    cv = edge.curves[k]
    if cv.cover_class is None:
        raise InsufficientData(f"curve {k} of edge {edge.a!r}-{edge.b!r} has no class; supply one in the model")
    return cv.cover_class
