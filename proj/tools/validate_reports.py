#!/usr/bin/env python3
"""Runs the CLI over the fixture corpus and validates every report against its schema."""

import json
import pathlib
import subprocess
import sys

import jsonschema
import referencing

CASES = [
    ["check", "--axiom", "strict", "collinear_counterexample.json"],
    ["check", "--axiom", "weighted", "r0.json"],
    ["check", "--axiom", "extreme", "r0.json"],
    ["recover", "collinear_counterexample.json"],
    ["recover", "r0.json"],
    ["recover", "missing_pair.json"],
    ["eval", "representation.json"],
    ["bayes", "belief.json"],
    ["bayes", "belief_extreme.json"],
    ["cps", "belief.json"],
    ["cps", "belief_extreme.json"],
    ["discount", "discount.json"],
    ["luce", "r0.json"],
    ["luce", "menu_dictatorial.json"],
    ["luce", "missing_pair.json"],
    ["pathindep", "pathindep_luce.json"],
    ["pathindep", "pathindep_dictatorial.json"],
    ["pareto", "pareto.json"],
    ["pareto", "pareto_violation.json"],
    ["gswf-verify", "gswf.json"],
    ["sdeu", "sdeu.json"],
    ["gen", "--config", "gen_config.json"],
]


def main() -> int:
    binary, schema_dir, fixtures = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    schemas = {}
    for path in sorted(schema_dir.glob("*.schema.json")):
        schemas[path.name.removesuffix(".schema.json")] = json.loads(path.read_text())
    registry = referencing.Registry().with_resources(
        (s["$id"], referencing.Resource.from_contents(s)) for s in schemas.values()
    )
    def validator(name):
        return jsonschema.Draft202012Validator(schemas[name], registry=registry)

    failures = 0
    seen = set()
    for case in CASES:
        args = [str(fixtures / a) if a.endswith(".json") else a for a in case]
        run = subprocess.run([binary, *args], capture_output=True, text=True, check=False)
        name = "dataset" if case[0] == "gen" else case[0]
        seen.add(name)
        errors = [] if run.stdout else ["empty output: " + run.stderr.strip()]
        if run.stdout:
            errors = [e.message for e in validator(name).iter_errors(json.loads(run.stdout))]
        if run.stdout and not errors and name != "dataset":
            # A tampered copy must be rejected, or the schema proves nothing.
            tampered = json.loads(run.stdout)
            tampered["verdict"] = "tampered"
            if validator(name).is_valid(tampered):
                errors = ["schema accepts an unknown verdict"]
        status = "ok" if not errors else "FAIL"
        print(f"{status} {' '.join(case)} (exit {run.returncode})")
        for e in errors[:5]:
            print("   ", e)
        failures += bool(errors)

    for path in sorted(fixtures.glob("*.json")):
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError:
            continue
        if path.name in ("malformed.json", "gen_config.json") or doc.get("kind") == "representation":
            continue
        errors = [e.message for e in validator("dataset").iter_errors(doc)]
        print(f"{'ok' if not errors else 'FAIL'} dataset {path.name}")
        failures += bool(errors)

    missing = set(schemas) - seen - {"common"}
    if missing:
        print("schemas never exercised:", ", ".join(sorted(missing)))
        failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
