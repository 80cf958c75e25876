"""Regenerate tests/data/mutations: single-entry changes to fixture product tables.

Run from the repository root: python3 tests/data/generate_mutations.py
"""

import random
from pathlib import Path

from ggr import corpus, dsl

OUT = Path(__file__).parent / "mutations"
PER_FIXTURE = {"semidirect": 7, "dual_numbers": 7, "matrix_m2f2": 6}


def mutants(spec: dsl.StructureSpec, rng: random.Random):
    """Yield (description, spec) with one table entry changed to another value."""
    keys = [(t, k) for t in sorted(spec.tables) for k in sorted(spec.tables[t])]
    rng.shuffle(keys)
    for table, key in keys:
        out_group = spec.group(dsl.TABLE_SLOTS[table][3])
        old = spec.tables[table].get(key, spec.defaults.get(table))
        for new in out_group.elements:
            if new == old:
                continue
            m = dsl.parse(dsl.serialize(spec))
            m.tables[table][key] = new
            yield f"{table} {key} {old} -> {new}", m
            break


def main():
    rng = random.Random(7)
    builders = {"semidirect": corpus.semidirect_f2, "dual_numbers": corpus.dual_numbers_f2,
                "matrix_m2f2": corpus.matrix_m2f2}
    for name, build in builders.items():
        g = build()
        # full explicit tables where they are small, unit-vector tables otherwise
        spec = dsl.spec_from_graded(g, additive=len(g.ring.R) > 4)
        # list zero entries explicitly too so that zero products can be mutated
        if not spec.extend:
            for table, entries in spec.tables.items():
                slots = dsl.TABLE_SLOTS[table]
                groups = [spec.group(r) for r in slots]
                for x in groups[0].elements:
                    for y in groups[1].elements:
                        for z in groups[2].elements:
                            entries.setdefault((x, y, z), groups[3].zero)
        kept = 0
        for desc, m in mutants(spec, rng):
            if dsl.elaborate(m).passed:
                continue
            kept += 1
            m.name = f"{name}_mut{kept}"
            (OUT / f"{m.name}.ggr").write_text(f"# {desc}\n" + dsl.serialize(m), encoding="utf-8")
            if kept == PER_FIXTURE[name]:
                break


if __name__ == "__main__":
    main()
