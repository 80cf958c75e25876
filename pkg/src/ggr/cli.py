"""Command-line entry point: ``ggr check|radical|enumerate|linearize|ideals``.

Exit codes: 0 pass, 1 verification failure, 2 input error, 3 resource bound.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import dsl
from .anneid import anneid_from_graded, linearize_anneid
from .corpus import build_corpus
from .ideals import DEFAULT_CARRIER_BOUND, DEFAULT_LATTICE_BOUND, enumerate_ideals, maximal_members, modularity_witnesses
from .radical import Bounds, jacobson_radical
from .report import ResourceError, StructureError, jsonable
from .suite import invariant_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    paths: list[str] = field(default_factory=list)
    max_size: int = DEFAULT_CARRIER_BOUND
    max_lattice: int = DEFAULT_LATTICE_BOUND
    json: bool = False
    seed: int = 0
    strict: bool = False
    require_agreement: bool = False
    out: str = "counterexamples"

    def __post_init__(self):
        if self.max_size < 1 or self.max_lattice < 1:
            raise ValueError("bounds must be positive")

    @property
    def bounds(self) -> Bounds:
        return Bounds(max_size=self.max_size, max_count=self.max_lattice)


class InputError(Exception):
    pass


def _emit(cfg: RunConfig, payload, text: str) -> None:
    if cfg.json:
        print(json.dumps(jsonable(payload), sort_keys=True, indent=2))
    else:
        print(text)


def load(path: str) -> tuple[dsl.StructureSpec, dsl.Elaborated]:
    try:
        spec = dsl.parse_file(path)
        return spec, dsl.elaborate(spec)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    except (dsl.ParseError, StructureError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_anneid(path: str):
    spec, elab = load(path)
    if elab.kind == "anneid":
        a = elab.structure
    elif elab.kind == "gammaring":
        a = anneid_from_graded(elab.structure) if elab.passed else None
    elif elab.kind == "moduloid":
        a = elab.structure.over
    else:
        raise InputError(f"{path}: a {elab.kind} does not describe an anneid")
    return spec, elab, a


def element_namer(spec: dsl.StructureSpec):
    names = {v: k for k, v in sorted(spec.aliases.items(), reverse=True)}

    def name(label) -> str:
        if not any(label):
            return "0"
        return names.get(tuple(label), "(" + ",".join(map(str, label)) + ")")

    return name


def _fmt_set(s, labels, name) -> str:
    if s is None:
        return "n/a"
    return "{" + ", ".join(name(labels[x]) for x in sorted(s)) + "}"


# commands ------------------------------------------------------------------------


def cmd_check(cfg: RunConfig) -> int:
    results, code = [], EXIT_OK
    for path in cfg.paths:
        try:
            spec, elab = load(path)
        except InputError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        reports = list(elab.reports)
        results.append({"path": path, "kind": elab.kind, "passed": elab.passed,
                        "reports": [r.to_json() for r in reports]})
        if not elab.passed:
            code = EXIT_FAIL
        if not cfg.json:
            print(f"{path} ({elab.kind}): {'PASS' if elab.passed else 'FAIL'}")
            for r in reports:
                print("  " + r.summary().replace("\n", "\n  "))
    if cfg.json:
        _emit(cfg, results, "")
    return code


def cmd_radical(cfg: RunConfig) -> int:
    path = cfg.paths[0]
    try:
        spec, elab, a = load_anneid(path)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if a is None or not elab.passed:
        for r in elab.reports:
            print(r.summary(), file=sys.stderr)
        return EXIT_FAIL
    if len(a.A) > cfg.max_size:
        print(f"error: |A| = {len(a.A)} exceeds --max-size {cfg.max_size}", file=sys.stderr)
        return EXIT_RESOURCE
    try:
        rep = jacobson_radical(a, cfg.bounds)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    name = element_namer(spec)
    payload = rep.to_json()
    payload["path"] = path
    payload["J"] = [name(rep.labels[x]) for x in sorted(rep.radical)]
    lines = [f"{path}: anneid {rep.name or '?'} with |A| = {len(a.A)}, |G| = {len(a.G)}",
             f"  right regular: {rep.right_regular}, regular: {rep.regular}",
             f"  J = {_fmt_set(rep.radical, rep.labels, name)}"]
    for route in ("J_modular", "J_qr", "J_local", "J_left", "J_large", "J_linearized"):
        lines.append(f"  {route:13s} {_fmt_set(getattr(rep, route), rep.labels, name)}")
    for key, v in sorted(rep.agreements.items()):
        status = "n/a" if v["agree"] is None else ("agree" if v["agree"] else "DISAGREE")
        lines.append(f"  {key:22s} {status}{'' if v['applicable'] else ' (outside theorem scope)'}")
    lines += [f"  note: {n}" for n in rep.notes]
    _emit(cfg, payload, "\n".join(lines))
    if cfg.require_agreement and rep.disagreements():
        return EXIT_FAIL
    return EXIT_OK


def cmd_enumerate(cfg: RunConfig) -> int:
    corpus = build_corpus(seed=cfg.seed, max_size=cfg.max_size)
    found, rows = [], []
    for entry in corpus:
        try:
            rep = invariant_suite(entry, cfg.bounds)
        except ResourceError as exc:
            rows.append({"name": entry.name, "family": entry.family, "skipped": str(exc)})
            continue
        failed = [c.condition_id for c in rep.failures()]
        passed = sum(c.passed is True for c in rep.conditions)
        rows.append({"name": entry.name, "family": entry.family, "passed": passed, "failed": failed})
        if failed:
            found.append((entry, failed))
    written = []
    if found:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        for entry, failed in found:
            target = out / f"{entry.name}.ggr"
            header = "".join(f"# fails {cid}\n" for cid in failed)
            target.write_text(header + dsl.serialize(dsl.spec_from_anneid(entry.anneid, name=entry.name)),
                              encoding="utf-8")
            written.append(str(target))
    payload = {"seed": cfg.seed, "max_size": cfg.max_size, "anneids": len(corpus),
               "counterexamples": len(found), "files": written, "results": rows}
    skipped = sum("skipped" in r for r in rows)
    text = [f"corpus seed {cfg.seed}, |A| <= {cfg.max_size}: {len(corpus)} anneids, "
            f"{len(found)} counterexamples, {skipped} skipped"]
    text += [f"  counterexample {e.name}: {', '.join(f)}" for e, f in found]
    text += [f"  wrote {w}" for w in written]
    _emit(cfg, payload, "\n".join(text))
    return EXIT_FAIL if (cfg.strict and found) else EXIT_OK


def cmd_linearize(cfg: RunConfig) -> int:
    path = cfg.paths[0]
    try:
        spec, elab, a = load_anneid(path)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if a is None or not elab.passed:
        return EXIT_FAIL
    try:
        g = linearize_anneid(a)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    print(dsl.serialize(dsl.spec_from_graded(g, name=spec.name)), end="")
    return EXIT_OK


def cmd_ideals(cfg: RunConfig) -> int:
    path = cfg.paths[0]
    try:
        spec, elab, a = load_anneid(path)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if a is None or not elab.passed:
        return EXIT_FAIL
    try:
        right = enumerate_ideals(a, "right", cfg.max_size, cfg.max_lattice)
        two = enumerate_ideals(a, "two-sided", cfg.max_size, cfg.max_lattice)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    name = element_namer(spec)
    whole = frozenset(range(len(a.A)))
    maximal = maximal_members(right, whole)

    def describe(I):
        return {"elements": [name(a.A.labels[x]) for x in sorted(I)],
                "two_sided": I in two, "modular": bool(modularity_witnesses(a, I)) and I != whole,
                "maximal": I in maximal}

    order = sorted(right, key=lambda I: (len(I), sorted(I)))
    covers = [[j for j, J in enumerate(order) if I < J and not any(I < K < J for K in order)] for I in order]
    payload = {"path": path, "anneid": a.name, "right_ideals": [describe(I) for I in order], "covers": covers}
    print(json.dumps(jsonable(payload), sort_keys=True, indent=2))
    return EXIT_OK


COMMANDS = {"check": cmd_check, "radical": cmd_radical, "enumerate": cmd_enumerate,
            "linearize": cmd_linearize, "ideals": cmd_ideals}


def build_parser() -> argparse.ArgumentParser:
    env_size = os.environ.get("GGR_MAX_SIZE")
    parser = argparse.ArgumentParser(prog="ggr", description="Verify and analyse finite graded gamma structures.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_size):
        p.add_argument("--json", action="store_true", help="emit JSON instead of text")
        p.add_argument("--max-size", type=int, default=int(env_size) if env_size else default_size,
                       help="carrier bound (default from GGR_MAX_SIZE)")
        p.add_argument("--max-lattice", type=int, default=DEFAULT_LATTICE_BOUND, help="ideal lattice bound")

    p = sub.add_parser("check", help="run every applicable verifier on .ggr files")
    p.add_argument("paths", nargs="+")
    common(p, DEFAULT_CARRIER_BOUND)
    p = sub.add_parser("radical", help="compute the Jacobson radical by every route")
    p.add_argument("paths", nargs=1, metavar="path")
    p.add_argument("--require-agreement", action="store_true",
                   help="exit 1 on any theorem-applicable disagreement")
    common(p, DEFAULT_CARRIER_BOUND)
    p = sub.add_parser("enumerate", help="run the invariant suite over a generated corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strict", action="store_true", help="exit 1 if any counterexample is found")
    p.add_argument("--out", default="counterexamples", help="directory for counterexample files")
    common(p, 8)
    p = sub.add_parser("linearize", help="print the linearization as a .ggr gamma ring")
    p.add_argument("paths", nargs=1, metavar="path")
    common(p, DEFAULT_CARRIER_BOUND)
    p = sub.add_parser("ideals", help="print the right-ideal lattice as JSON")
    p.add_argument("paths", nargs=1, metavar="path")
    common(p, DEFAULT_CARRIER_BOUND)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = RunConfig(**{k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__})
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return COMMANDS[cfg.command](cfg)


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
