"""Line-oriented text format (``.ggr``) for groups, graduations, gamma rings,
anneids and moduloids.

Example::

    kind anneid
    group R = Z2 x Z2
    component S = {(1,0)}
    component I = {(0,1)}
    group Gamma = Z2
    component G1 = {(1)}
    alias s = (1,0)
    alias i = (0,1)
    alias g = (1)
    triple (s, g, s) -> s
    triple (s, g, i) -> i
    triple (i, g, s) -> i
    default triple -> 0

Groups have fixed role names: ``R`` (the ring), ``Gamma`` and ``M`` (the
moduloid).  A ``component`` line lists generators of a homogeneous component
of the most recently declared group.  ``extend TABLE additive`` declares that
table entries are given on unit vectors only and extended tri-additively.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .anneid import GammaAnneid, anneid_from_graded, semihomogeneous_from_graded, verify_anneid, verify_semihomogeneous
from .finabel import FiniteAbelianGroup, subgroup_generate
from .gammaring import GammaRing, GradedGammaRing, lemma_consistency_check, verify_gamma_ring, verify_graded
from .grading import Graduation, Homogroupoid, linearize
from .moduloid import Moduloid, verify_moduloid
from .report import CheckReport, StructureError

KINDS = ("group", "graduation", "gammaring", "anneid", "moduloid")
GROUP_ROLES = ("R", "Gamma", "M")
TABLE_SLOTS = {
    "triple": ("R", "Gamma", "R", "R"),
    "cotriple": ("Gamma", "R", "Gamma", "Gamma"),
    "action": ("M", "Gamma", "R", "M"),
}

Element = tuple[int, ...]


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str, token: str = ""):
        self.line = line
        self.column = column
        self.message = message
        self.token = token
        super().__init__(f"line {line}, column {column}: {message}" + (f" (at {token!r})" if token else ""))


@dataclass
class StructureSpec:
    kind: str
    name: str | None = None
    groups: dict[str, tuple[int, ...]] = field(default_factory=dict)
    components: dict[str, dict[str, list[Element]]] = field(default_factory=dict)
    aliases: dict[str, Element] = field(default_factory=dict)
    tables: dict[str, dict[tuple[Element, Element, Element], Element]] = field(default_factory=dict)
    defaults: dict[str, Element] = field(default_factory=dict)
    extend: set[str] = field(default_factory=set)

    def group(self, role: str) -> FiniteAbelianGroup:
        return FiniteAbelianGroup(self.groups[role])


# tokenizer -------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<arrow>->)|(?P<int>-?\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[(){},=]))")


@dataclass
class Token:
    kind: str
    text: str
    column: int


def _tokenize(line: str, lineno: int) -> list[Token]:
    tokens, pos = [], 0
    while pos < len(line):
        if line[pos:].strip() == "":
            break
        m = _TOKEN.match(line, pos)
        if not m:
            col = pos + len(line[pos:]) - len(line[pos:].lstrip()) + 1
            raise ParseError(lineno, col, "unexpected character", line[col - 1])
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(Token(kind, m.group(kind), start + 1))
        pos = m.end()
    return tokens


class _Line:
    def __init__(self, tokens: list[Token], lineno: int, text: str):
        self.tokens = tokens
        self.pos = 0
        self.lineno = lineno
        self.text = text

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.peek()
        if tok is None:
            return ParseError(self.lineno, len(self.text.rstrip()) + 1, message, "")
        return ParseError(self.lineno, tok.column, message, tok.text)

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, kind: str | None = None, text: str | None = None, what: str = "") -> Token:
        tok = self.peek()
        if tok is None or (kind and tok.kind != kind) or (text and tok.text != text):
            raise self.error(f"expected {what or text or kind}")
        self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.text == text

    def end(self) -> None:
        if self.peek() is not None:
            raise self.error("unexpected trailing input")


# parser ----------------------------------------------------------------------------


def _parse_cyclic_orders(ln: _Line) -> tuple[int, ...]:
    first = ln.take("int" if ln.peek() and ln.peek().kind == "int" else "ident", what="group description")
    if first.kind == "int":
        if first.text != "1":
            raise ln.error("only the trivial group may be written as a number", first)
        ln.end()
        return ()
    orders = []
    tok = first
    while True:
        m = re.fullmatch(r"Z(\d+)", tok.text)
        if not m or int(m.group(1)) < 2:
            raise ln.error("cyclic factor must look like Zn with n >= 2", tok)
        orders.append(int(m.group(1)))
        if ln.peek() is None:
            break
        ln.take("ident", "x", what="'x'")
        tok = ln.take("ident", what="cyclic factor")
    return tuple(orders)


def _parse_tuple(ln: _Line) -> tuple[Element, Token]:
    open_tok = ln.take("punct", "(", what="'('")
    values = []
    if ln.at(")"):
        ln.take("punct", ")")
        return (), open_tok
    while True:
        values.append(int(ln.take("int", what="integer residue").text))
        if ln.at(","):
            ln.take("punct", ",")
            continue
        ln.take("punct", ")", what="',' or ')'")
        return tuple(values), open_tok


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.spec = StructureSpec(kind="")
        self.explicit_kind: str | None = None
        self.current_group: str | None = None
        self.seen_version = False

    def ref(self, ln: _Line, role: str) -> Element:
        """An element reference in a slot belonging to the group with this role."""
        if role not in self.spec.groups:
            raise ln.error(f"group {role} is not declared")
        tok = ln.peek()
        if tok is None:
            raise ln.error("expected element")
        if tok.kind == "ident":
            ln.take()
            if tok.text not in self.spec.aliases:
                raise ln.error(f"unresolved name {tok.text!r}", tok)
            value = self.spec.aliases[tok.text]
        elif tok.kind == "int" and tok.text == "0":
            ln.take()
            return (0,) * len(self.spec.groups[role])
        else:
            value, tok = _parse_tuple(ln)
        return self.check_element(ln, role, value, tok)

    def check_element(self, ln: _Line, role: str, value: Element, tok: Token) -> Element:
        orders = self.spec.groups[role]
        if len(value) != len(orders):
            raise ln.error(f"element has {len(value)} residues but {role} has rank {len(orders)}", tok)
        for v, n in zip(value, orders):
            if not 0 <= v < n:
                raise ln.error(f"residue {v} out of range for Z{n}", tok)
        return value

    def parse(self) -> StructureSpec:
        for lineno, raw in enumerate(self.text.splitlines(), start=1):
            line = raw.split("#", 1)[0]
            tokens = _tokenize(line, lineno)
            if not tokens:
                continue
            ln = _Line(tokens, lineno, line)
            head = ln.take("ident", what="directive")
            handler = getattr(self, f"_d_{head.text}", None)
            if handler is None:
                raise ln.error(f"unknown directive {head.text!r}", head)
            handler(ln, head)
        spec = self.spec
        inferred = infer_kind(spec)
        spec.kind = self.explicit_kind or inferred
        return spec

    def _d_version(self, ln, head):
        if self.seen_version or len(self.spec.groups) or self.explicit_kind:
            raise ln.error("version must be the first directive", head)
        tok = ln.take("int", what="version number")
        if tok.text != "1":
            raise ln.error("unsupported version", tok)
        ln.end()
        self.seen_version = True

    def _d_kind(self, ln, head):
        tok = ln.take("ident", what="structure kind")
        if tok.text not in KINDS:
            raise ln.error(f"unknown kind {tok.text!r}", tok)
        if self.explicit_kind is not None:
            raise ln.error("kind declared twice", head)
        ln.end()
        self.explicit_kind = tok.text

    def _d_name(self, ln, head):
        tok = ln.take("ident", what="structure name")
        if self.spec.name is not None:
            raise ln.error("name declared twice", head)
        ln.end()
        self.spec.name = tok.text

    def _d_group(self, ln, head):
        tok = ln.take("ident", what="group role")
        if tok.text not in GROUP_ROLES:
            raise ln.error(f"group role must be one of {', '.join(GROUP_ROLES)}", tok)
        if tok.text in self.spec.groups:
            raise ln.error(f"group {tok.text} declared twice", tok)
        ln.take("punct", "=", what="'='")
        self.spec.groups[tok.text] = _parse_cyclic_orders(ln)
        self.current_group = tok.text

    def _d_component(self, ln, head):
        if self.current_group is None:
            raise ln.error("component before any group", head)
        tok = ln.take("ident", what="component name")
        comps = self.spec.components.setdefault(self.current_group, {})
        if tok.text in comps:
            raise ln.error(f"component {tok.text} declared twice", tok)
        ln.take("punct", "=", what="'='")
        ln.take("punct", "{", what="'{'")
        gens = []
        while not ln.at("}"):
            value, vt = _parse_tuple(ln)
            gens.append(self.check_element(ln, self.current_group, value, vt))
            if ln.at(","):
                ln.take("punct", ",")
            elif not ln.at("}"):
                raise ln.error("expected ',' or '}'")
        ln.take("punct", "}")
        ln.end()
        comps[tok.text] = gens

    def _d_alias(self, ln, head):
        tok = ln.take("ident", what="alias name")
        if tok.text in self.spec.aliases:
            raise ln.error(f"alias {tok.text} declared twice", tok)
        if tok.text in KINDS or tok.text in GROUP_ROLES or tok.text in TABLE_SLOTS:
            raise ln.error(f"{tok.text!r} is reserved", tok)
        ln.take("punct", "=", what="'='")
        value, _ = _parse_tuple(ln)
        ln.end()
        self.spec.aliases[tok.text] = value

    def _table_entry(self, ln, head):
        table = head.text
        for role in TABLE_SLOTS[table]:
            if role not in self.spec.groups:
                raise ln.error(f"table {table} needs group {role}", head)
        slots = TABLE_SLOTS[table]
        ln.take("punct", "(", what="'('")
        args = []
        for k, role in enumerate(slots[:3]):
            args.append(self.ref(ln, role))
            if k < 2:
                if not ln.at(","):
                    raise ln.error(f"{table} entries take exactly 3 arguments")
                ln.take("punct", ",")
        if ln.at(","):
            raise ln.error(f"{table} entries take exactly 3 arguments")
        ln.take("punct", ")", what="')'")
        ln.take("arrow", what="'->'")
        value = self.ref(ln, slots[3])
        ln.end()
        entries = self.spec.tables.setdefault(table, {})
        key = tuple(args)
        if key in entries:
            raise ln.error(f"duplicate {table} entry", head)
        entries[key] = value

    _d_triple = _d_cotriple = _d_action = _table_entry

    def _table_name(self, ln) -> str:
        tok = ln.take("ident", what="table name")
        if tok.text not in TABLE_SLOTS:
            raise ln.error(f"unknown table {tok.text!r}", tok)
        for role in TABLE_SLOTS[tok.text]:
            if role not in self.spec.groups:
                raise ln.error(f"table {tok.text} needs group {role}", tok)
        return tok.text

    def _d_default(self, ln, head):
        table = self._table_name(ln)
        ln.take("arrow", what="'->'")
        value = self.ref(ln, TABLE_SLOTS[table][3])
        ln.end()
        if table in self.spec.defaults:
            raise ln.error(f"default for {table} declared twice", head)
        self.spec.defaults[table] = value
        self.spec.tables.setdefault(table, {})

    def _d_extend(self, ln, head):
        table = self._table_name(ln)
        ln.take("ident", "additive", what="'additive'")
        ln.end()
        self.spec.extend.add(table)
        self.spec.tables.setdefault(table, {})


def infer_kind(spec: StructureSpec) -> str:
    if "action" in spec.tables:
        return "moduloid"
    if "triple" in spec.tables or "cotriple" in spec.tables:
        return "gammaring"
    if spec.components:
        return "graduation"
    return "group"


def parse(text: str) -> StructureSpec:
    return _Parser(text).parse()


def parse_file(path) -> StructureSpec:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# serializer ------------------------------------------------------------------------


def _fmt(x: Element) -> str:
    return "(" + ",".join(str(v) for v in x) + ")"


def serialize(spec: StructureSpec) -> str:
    lines = []
    if spec.kind != infer_kind(spec):
        lines.append(f"kind {spec.kind}")
    if spec.name:
        lines.append(f"name {spec.name}")
    for role in GROUP_ROLES:
        if role not in spec.groups:
            continue
        orders = spec.groups[role]
        desc = " x ".join(f"Z{n}" for n in orders) if orders else "1"
        lines.append(f"group {role} = {desc}")
        for cname in sorted(spec.components.get(role, {})):
            gens = ", ".join(_fmt(g) for g in spec.components[role][cname])
            lines.append(f"component {cname} = {{{gens}}}")
    for name in sorted(spec.aliases):
        lines.append(f"alias {name} = {_fmt(spec.aliases[name])}")
    for table in TABLE_SLOTS:
        if table not in spec.tables:
            continue
        for key in sorted(spec.tables[table]):
            args = ", ".join(_fmt(k) for k in key)
            lines.append(f"{table} ({args}) -> {_fmt(spec.tables[table][key])}")
        if table in spec.defaults:
            value = spec.defaults[table]
            lines.append(f"default {table} -> {'0' if not any(value) else _fmt(value)}")
        if table in spec.extend:
            lines.append(f"extend {table} additive")
    return "\n".join(lines) + "\n"


# elaboration -----------------------------------------------------------------------


@dataclass
class Elaborated:
    kind: str
    structure: Any
    reports: list[CheckReport]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)


def _graduation(spec: StructureSpec, role: str) -> Graduation:
    G = spec.group(role)
    comps = spec.components.get(role)
    if not comps:
        return Graduation.trivial(G)
    names = list(comps)
    parts = [subgroup_generate(G, comps[n]) for n in names]
    return Graduation.from_parts(G, parts, names)


def _unit_vectors(G: FiniteAbelianGroup) -> list[Element]:
    return [tuple(int(i == k) for i in range(G.rank)) for k in range(G.rank)]


def _table(spec: StructureSpec, table: str, domains: tuple[list[Element], list[Element], list[Element]]) -> np.ndarray:
    """Product ids of the target group over the given element lists."""
    roles = TABLE_SLOTS[table]
    groups = [spec.group(r) for r in roles]
    entries = spec.tables.get(table, {})
    default = spec.defaults.get(table)
    out_group = groups[3]
    shape = tuple(len(d) for d in domains)
    if table in spec.extend:
        units = [_unit_vectors(g) for g in groups[:3]]
        for key in entries:
            if any(k not in u for k, u in zip(key, units)):
                raise StructureError(f"{table} entry {key} is not on unit vectors")
        digits = np.zeros(shape + (out_group.rank,), dtype=np.int64)
        coeffs = [np.array(d, dtype=np.int64).reshape(len(d), -1) for d in domains]
        for (i, ui), (j, uj), (k, uk) in itertools.product(*(list(enumerate(u)) for u in units)):
            value = entries.get((ui, uj, uk), default)
            if value is None:
                raise StructureError(f"{table} has no entry for {(ui, uj, uk)} and no default")
            if not any(value):
                continue
            c = coeffs[0][:, i][:, None, None] * coeffs[1][:, j][None, :, None] * coeffs[2][:, k][None, None, :]
            digits += c[..., None] * np.array(value, dtype=np.int64)
        return out_group.ids_from_digits(digits) if out_group.rank else np.zeros(shape, dtype=np.int64)
    out = np.zeros(shape, dtype=np.int64)
    index = [{x: n for n, x in enumerate(d)} for d in domains]
    for key in entries:
        if any(k not in idx for k, idx in zip(key, index)):
            raise StructureError(f"{table} entry {key} lies outside the carriers")
    for p, x in enumerate(domains[0]):
        for q, y in enumerate(domains[1]):
            for r, z in enumerate(domains[2]):
                value = entries.get((x, y, z), default)
                if value is None:
                    raise StructureError(f"{table} has no entry for {(x, y, z)} and no default")
                out[p, q, r] = out_group.id(value)
    return out


def _homogroupoid(spec: StructureSpec, role: str) -> Homogroupoid:
    return Homogroupoid.from_graduation(_graduation(spec, role))


def elaborate(spec: StructureSpec) -> Elaborated:
    kind = spec.kind
    if kind == "group":
        return Elaborated(kind, {r: spec.group(r) for r in spec.groups}, [])
    if kind == "graduation":
        grads = {}
        rep = CheckReport("graduation")
        for role in spec.groups:
            try:
                grads[role] = _graduation(spec, role)
                rep.add(f"{role}_direct_sum", True)
            except StructureError as exc:
                rep.add(f"{role}_direct_sum", False, witness=str(exc))
        return Elaborated(kind, grads, [rep])
    if kind == "gammaring":
        R, Gm = spec.group("R"), spec.group("Gamma")
        triple = _table(spec, "triple", (list(R.elements), list(Gm.elements), list(R.elements)))
        cotriple = None
        if "cotriple" in spec.tables:
            cotriple = _table(spec, "cotriple", (list(Gm.elements), list(R.elements), list(Gm.elements)))
        ring = GammaRing(R, Gm, triple, cotriple)
        g = GradedGammaRing(ring, _graduation(spec, "R"), _graduation(spec, "Gamma"), name=spec.name or "")
        reports = [verify_gamma_ring(ring)]
        if reports[0].passed:
            reports += [verify_graded(g), lemma_consistency_check(g), verify_semihomogeneous(semihomogeneous_from_graded(g))]
            if reports[1].passed:
                reports.append(verify_anneid(anneid_from_graded(g)))
        return Elaborated(kind, g, reports)
    if kind in ("anneid", "moduloid"):
        A, G = _homogroupoid(spec, "R"), _homogroupoid(spec, "Gamma")
        T = _table(spec, "triple", (list(A.labels), list(G.labels), list(A.labels)))
        T = _relabel(spec, "R", A, T)
        C = None
        if "cotriple" in spec.tables:
            C = _relabel(spec, "Gamma", G, _table(spec, "cotriple", (list(G.labels), list(A.labels), list(G.labels))))
        a = GammaAnneid(A, G, T, C, name=spec.name or "")
        if kind == "anneid":
            return Elaborated(kind, a, [verify_anneid(a)])
        M = _homogroupoid(spec, "M")
        P = _relabel(spec, "M", M, _table(spec, "action", (list(M.labels), list(G.labels), list(A.labels))))
        m = Moduloid(M, a, P, name=spec.name or "")
        return Elaborated(kind, m, [verify_moduloid(m)])
    raise StructureError(f"unknown kind {kind}")


def _relabel(spec: StructureSpec, role: str, h: Homogroupoid, ids: np.ndarray) -> np.ndarray:
    """Group ids of products to homogroupoid indices (-1 when not homogeneous)."""
    G = spec.group(role)
    pos = -np.ones(len(G), dtype=np.int64)
    for i, lab in enumerate(h.labels):
        pos[G.id(lab)] = i
    return pos[ids]


# specs from structures -------------------------------------------------------------


def _graduation_components(grad: Graduation) -> dict[str, list[Element]]:
    out = {}
    for d in grad.strict_grades:
        comp = grad.components[d]
        gens = _generators(grad.group, comp)
        out[grad.name(d)] = gens
    return out


def _generators(G: FiniteAbelianGroup, comp) -> list[Element]:
    """A small generating list of a subgroup, greedily by element id."""
    gens, span = [], {G.zero}
    for x in sorted(comp, key=G.id):
        if x not in span:
            gens.append(x)
            span = set(subgroup_generate(G, gens))
        if len(span) == len(comp):
            break
    return gens


def spec_from_graded(g: GradedGammaRing, name: str | None = None, additive: bool = True) -> StructureSpec:
    """Gamma ring spec; with ``additive`` only unit-vector entries are listed."""
    R, Gm = g.ring.R, g.ring.Gamma
    spec = StructureSpec(kind="gammaring", name=name or (_identifier(g.name) or None))
    spec.groups = {"R": R.cyclic_orders, "Gamma": Gm.cyclic_orders}
    spec.components = {"R": _graduation_components(g.gradR), "Gamma": _graduation_components(g.gradGamma)}
    spec.components = {k: v for k, v in spec.components.items() if v}
    tabs = {"triple": (g.ring.triple, (R, Gm, R))}
    if g.ring.nobusawa:
        tabs["cotriple"] = (g.ring.cotriple, (Gm, R, Gm))
    for table, (T, groups) in tabs.items():
        out = groups[0]
        if additive:
            domains = [_unit_vectors(grp) for grp in groups]
            spec.extend.add(table)
        else:
            domains = [grp.elements for grp in groups]
        entries = {}
        for key in itertools.product(*domains):
            v = int(T[groups[0].id(key[0]), groups[1].id(key[1]), groups[2].id(key[2])])
            if v:
                entries[key] = out.element(v)
        spec.tables[table] = entries
        spec.defaults[table] = out.zero
    return spec


def spec_from_anneid(a: GammaAnneid, name: str | None = None) -> StructureSpec:
    """Anneid spec over the linearizations of A and G, listing nonzero products."""
    linA, linG = linearize(a.A), linearize(a.G)
    spec = StructureSpec(kind="anneid", name=name or (_identifier(a.name) or None))
    spec.groups = {"R": linA.group.cyclic_orders, "Gamma": linG.group.cyclic_orders}
    spec.components = {"R": _graduation_components(linA.graduation), "Gamma": _graduation_components(linG.graduation)}
    spec.components = {k: v for k, v in spec.components.items() if v}
    eA, eG = linA.embedding, linG.embedding
    entries = {}
    for x, al, y in np.argwhere(a.triple != 0):
        entries[(eA[x], eG[al], eA[y])] = eA[a.triple[x, al, y]]
    spec.tables["triple"] = entries
    spec.defaults["triple"] = linA.group.zero
    if a.nobusawa:
        co = {}
        for al, x, be in np.argwhere(a.cotriple != 0):
            co[(eG[al], eA[x], eG[be])] = eG[a.cotriple[al, x, be]]
        spec.tables["cotriple"] = co
        spec.defaults["cotriple"] = linG.group.zero
    return spec


def _identifier(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_]", "_", name).strip("_") if name else ""
