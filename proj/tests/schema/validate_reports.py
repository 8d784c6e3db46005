# evmhorn: sound reentrancy analysis for EVM bytecode
# Copyright 2026 The evmhorn Authors.
# SPDX-License-Identifier: Apache-2.0

"""Runs `evmhorn analyze --format json` on every corpus fixture and checks
each report against docs/report.schema.json.

usage: validate_reports.py <evmhorn> <source-dir> [<z3>]
"""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

EXIT_BY_VERDICT = {"secure": 0, "insecure": 10, "unknown": 20, "error": 2}


def main():
    tool, source = sys.argv[1], pathlib.Path(sys.argv[2])
    z3 = sys.argv[3] if len(sys.argv) > 3 and sys.argv[3] else None
    schema = json.loads((source / "docs" / "report.schema.json").read_text())
    validator = jsonschema.Draft202012Validator(schema)
    corpus = source / "corpus"

    runs = []
    for line in (corpus / "manifest.txt").read_text().splitlines():
        line = line.split("#", 1)[0].split()
        if not line:
            continue
        name, prop, _ = line
        args = ["analyze", str(corpus / f"{name}.hex"), "--format", "json", "--property", prop]
        if prop == "assertion":
            args += ["--assertions", str(corpus / f"{name}.assert")]
        runs.append(args)
        if z3:
            runs.append(args + ["--engine", "external", "--solver", z3])
    with tempfile.NamedTemporaryFile("w", suffix=".hex", delete=False) as bad:
        bad.write("60zz\n")
    runs.append(["analyze", bad.name, "--format", "json"])

    failures = 0
    for args in runs:
        proc = subprocess.run([tool] + args, capture_output=True, text=True)
        try:
            report = json.loads(proc.stdout)
            errors = [e.message for e in validator.iter_errors(report)]
            if EXIT_BY_VERDICT[report["verdict"]] != proc.returncode:
                errors.append(f"exit {proc.returncode} does not match verdict {report['verdict']}")
        except (json.JSONDecodeError, KeyError) as e:
            errors = [f"unreadable report: {e}"]
        status = "ok" if not errors else "INVALID"
        print(f"{status}: {' '.join(args[1:2] + args[4:])}")
        for e in errors:
            print(f"    {e}")
        failures += bool(errors)
    pathlib.Path(bad.name).unlink()
    print(f"{len(runs) - failures}/{len(runs)} reports valid")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
