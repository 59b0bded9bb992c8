"""Runs the CLI over the shipped problems and validates every JSON document."""

import json
import subprocess
import sys
from pathlib import Path

import jsonschema

binary, root = sys.argv[1], Path(sys.argv[2])
problems = root / "problems"
schema = json.loads((root / "schema" / "result.schema.json").read_text())
validator = jsonschema.Draft202012Validator(schema)

runs = [
    (["implicitize", "curve_conic.txt"], 0),
    (["implicitize", "curve_conic.json"], 0),
    (["implicitize", "curve_base_point.txt"], 0),
    (["implicitize", "quadric_fourfold.txt"], 0),
    (["implicitize", "cubic_surface.txt"], 0),
    (["implicitize", "lci_surface.txt"], 0),
    (["implicitize", "lci_surface_gf.json", "--method", "gcd-minors"], 0),
    (["implicitize", "lci_surface.txt", "--nu", "2", "--allow-sub-bound"], 0),
    (["implicitize", "curve_base_point.txt", "--method", "resultant"], 3),
    (["implicitize", "curve_conic.txt", "--method", "resultant"], 0),
    (["implicitize", "degenerate.txt"], 3),
    (["implicitize", "inhomogeneous.txt"], 2),
    (["analyze", "lci_surface.txt"], 0),
    (["analyze", "quadric_fourfold.txt"], 0),
    (["analyze", "degenerate.txt"], 0),
    (["analyze", "cubic_surface.txt", "--skip-syzygetic"], 0),
    (["resultant", "curve_conic.txt", "--kind", "kravitsky", "--emit-matrix"], 0),
    (["resultant", "bezout_squares.txt", "--kind", "bezout", "--emit-matrix"], 0),
    (["resultant", "sylvester_linear.txt", "--kind", "sylvester"], 0),
    (["resultant", "curve_conic.txt", "--kind", "sylvester"], 0),
]

failures = 0
for args, expected in runs:
    cmd = [binary, args[0], str(problems / args[1]), "--format", "json", *args[2:]]
    proc = subprocess.run(cmd, capture_output=True, text=True, timeout=300)
    label = " ".join(args)
    if proc.returncode != expected:
        print(f"FAIL {label}: exit {proc.returncode}, expected {expected}\n{proc.stderr}")
        failures += 1
        continue
    if expected != 0:
        if proc.stdout or not proc.stderr.startswith("error:"):
            print(f"FAIL {label}: errors must go to stderr only")
            failures += 1
        continue
    try:
        doc = json.loads(proc.stdout)
    except json.JSONDecodeError as e:
        print(f"FAIL {label}: stdout is not one JSON document: {e}")
        failures += 1
        continue
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
    for e in errors:
        print(f"FAIL {label}: {'/'.join(map(str, e.path))}: {e.message}")
    failures += bool(errors)
    if not errors:
        print(f"ok   {label}")

sys.exit(1 if failures else 0)
