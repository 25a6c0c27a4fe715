"""Command line: fixtures, validators, sigma, gluing, tori, Witt checks and scenario runs.

Exit codes: 0 pass, 1 usage or input error, 2 validation failure or expectation
mismatch, 3 inconclusive verdict under --strict.
"""
from __future__ import annotations

import argparse
import json
import sys
import re
import time
from fractions import Fraction
from importlib import resources
from pathlib import Path

from symsig import checks, serial
from symsig.errors import DimensionMismatch, ParseError, StepFailure, SymsigError, UnknownFixture
from symsig.fixtures import REGISTRY, certificate, fixture
from symsig.forms import (EpsForm, Formation, Lagrangian, evaluation_signature, find_lagrangian,
                          is_trivial_formation, make_lagrangian, middle_form, signature)
from symsig.instances import random_pair
from symsig.linalg import Matrix
from symsig.rings import QQ, Laurent, ring_from_tag
from symsig.sigma import SigmaResult, difference_formation, fingerprint, sigma_even, sigma_odd
from symsig.structures import (PoincarePair, SymmetricComplex, ValidationReport, glue_pairs,
                               mapping_torus, push_pair, validate_pair,
                               validate_symmetric_complex)

EXIT_OK, EXIT_ERROR, EXIT_FAIL, EXIT_INCONCLUSIVE = 0, 1, 2, 3


# --------------------------------------------------------------------------
# JSON summaries of results


def summarize(obj):
    """A JSON-friendly description of any step output."""
    if isinstance(obj, ValidationReport):
        return {"ok": obj.ok, "checks": obj.to_json()}
    if isinstance(obj, SigmaResult):
        return {"ok": True, "dim": obj.dim, "fingerprint": obj.fingerprint.to_json(),
                "provenance": obj.provenance}
    if isinstance(obj, SymmetricComplex):
        rep = validate_symmetric_complex(obj)
        return {"ok": rep.ok, "dim": obj.dim, "ranks": list(obj.complex.ranks),
                "fingerprint": fingerprint(obj).to_json() if rep.ok else None}
    if isinstance(obj, PoincarePair):
        rep = validate_pair(obj)
        return {"ok": rep.ok, "dim": obj.dim, "ambient_ranks": list(obj.ambient.ranks),
                "boundary_ranks": list(obj.boundary.complex.ranks)}
    if isinstance(obj, (EpsForm, Formation, Lagrangian, Matrix)):
        return {"ok": True, "value": serial.dump(obj)}
    if isinstance(obj, bool):
        return {"ok": obj}
    if isinstance(obj, dict):
        return {k: summarize(v) if not isinstance(v, (int, str, float, list, type(None), bool))
                else v for k, v in obj.items()}
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return obj


# --------------------------------------------------------------------------
# scenario runner


def _witt(target) -> dict:
    if isinstance(target, Formation):
        return is_trivial_formation(target).to_json()
    if isinstance(target, EpsForm):
        out = {"rank": target.rank, "eps": target.eps}
        if target.ring.laurent and target.eps == 1:
            out["evaluation_signatures"] = [evaluation_signature(target, w) for w in (1, -1)]
        elif target.eps == 1 and not target.ring.laurent:
            out["signature"] = signature(target)
        if target.ring is QQ:
            res = find_lagrangian(target)
            out["status"] = {"found": "trivial", "none": "nontrivial"}.get(res.status, res.status)
            out["lagrangian"] = None if res.lagrangian is None else res.lagrangian.j.to_json()
            out["reason"] = res.reason
        else:
            out["status"] = "inconclusive"
        return out
    raise StepFailure("witt", "expects a form or a formation")


_TERM = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*(t(?:\^\(?(-?\d+)\)?)?)?")


def parse_entry(ring, x):
    """Ring element from an int, an encoded value, or text such as "t", "1 - t^-1", "1/2"."""
    if isinstance(x, int) and not isinstance(x, bool):
        return ring(x)
    if not isinstance(x, str):
        return ring.decode(x)
    text = x.replace(" ", "")
    if not text:
        raise ParseError("empty ring element")
    total, pos = ring.zero(), 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise ParseError(f"cannot parse ring element {x!r}")
        coeff = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(1) == "-":
            coeff = -coeff
        if m.group(3):
            if not ring.laurent:
                raise ParseError(f"{x!r} uses t but the ring is {ring.tag}")
            k = int(m.group(4)) if m.group(4) else 1
            term = ring(Laurent.monomial(k, coeff))
        else:
            term = ring(coeff if coeff.denominator != 1 else coeff.numerator)
        total = total + term
        pos = m.end()
    return total


def _matrix(ring, rows) -> Matrix:
    return Matrix(ring, [[parse_entry(ring, x) for x in row] for row in rows])


def _lagrangian(form, columns) -> Lagrangian:
    F = form.form if hasattr(form, "basis") else form
    return make_lagrangian(F, _matrix(F.ring, columns))


OPS = {
    "fixture": lambda a: fixture(a["name"]),
    "random_pair": lambda a: random_pair(int(a["seed"]), int(a["dim"]), int(a.get("max_rank", 8))),
    "validate": lambda a: (validate_pair(a["target"]) if isinstance(a["target"], PoincarePair)
                           else validate_symmetric_complex(a["target"])),
    "sigma_even": lambda a: sigma_even(a["pair"], variant=int(a.get("variant", 0))),
    "sigma_odd": lambda a: sigma_odd(a["pair"], a["lagrangian"], variant=int(a.get("variant", 0))),
    "middle_form": lambda a: middle_form(a["target"].boundary if isinstance(a["target"], PoincarePair)
                                         else a["target"]).form,
    "lagrangian": lambda a: _lagrangian(a["form"], a["columns"]),
    "matrix": lambda a: _matrix(ring_from_tag(a["ring"]), a["rows"]),
    "difference_formation": lambda a: difference_formation(a["form"], a["lagrangian"],
                                                           a["automorphism"]),
    "glue": lambda a: glue_pairs(a["P"], a["Q"], a.get("map")),
    "torus": lambda a: mapping_torus(a["target"], a["map"]),
    "fingerprint": lambda a: fingerprint(a["target"].representative
                                         if isinstance(a["target"], SigmaResult) else a["target"]),
    "witt": lambda a: _witt(a["target"]),
    "push_pair": lambda a: push_pair(a["pair"], a["ambient_map"], a.get("boundary_map"),
                                     a.get("inclusion")),
    "equal": lambda a: serial.dumps(a["a"]) == serial.dumps(a["b"]),
    "check_gluing_formula": lambda a: checks.gluing_formula(int(a["seed"]), int(a["dim"])),
    "check_homotopy_invariance": lambda a: checks.homotopy_invariance(int(a["seed"]), int(a["dim"])),
    "check_choice_independence": lambda a: checks.choice_independence(int(a["seed"]), int(a["dim"])),
    "check_torus_lemma": lambda a: checks.torus_lemma(int(a["seed"])),
}


def _resolve(value, env: dict, seed: int):
    if isinstance(value, str):
        if value == "$seed":
            return seed
        if value.startswith("@"):
            ref = value[1:]
            if ref not in env:
                raise ParseError(f"reference {value!r} does not name an earlier step")
            return env[ref]
        return value
    if isinstance(value, list):
        return [_resolve(v, env, seed) for v in value]
    if isinstance(value, dict):
        if set(value) == {"kind", "data"}:
            return serial.load(value)
        return {k: _resolve(v, env, seed) for k, v in value.items()}
    return value


def _lookup(summary, path: str):
    cur = summary
    for part in path.split("."):
        if isinstance(cur, dict) and part in cur:
            cur = cur[part]
        elif isinstance(cur, list) and part.isdigit() and int(part) < len(cur):
            cur = cur[int(part)]
        else:
            return None
    return cur


def _compare(obj, summary, expect: dict) -> list[str]:
    problems = []
    for key, want in expect.items():
        if key == "equals_fixture":
            if serial.dumps(obj) != serial.dumps(fixture(want)):
                problems.append(f"output differs from fixture {want!r}")
        elif key == "equal_fields":
            a, b = (_lookup(summary, p) for p in want)
            if a != b:
                problems.append(f"{want[0]} = {a!r} but {want[1]} = {b!r}")
        else:
            got = _lookup(summary, key)
            if got != want:
                problems.append(f"{key}: expected {want!r}, got {got!r}")
    return problems


def _parse_scenario(payload) -> dict:
    if not isinstance(payload, dict) or not isinstance(payload.get("steps", []), list):
        raise ParseError("a scenario is an object with a 'steps' list")
    seen = set()
    for step in payload.get("steps", []):
        if not isinstance(step, dict) or "id" not in step or "op" not in step:
            raise ParseError("every step needs 'id' and 'op'")
        if step["op"] not in OPS:
            raise ParseError(f"unknown op {step['op']!r}")
        if step["id"] in seen:
            raise ParseError(f"duplicate step id {step['id']!r}")
        refs = [v[1:] for v in _strings(step.get("args", {})) if v.startswith("@")]
        missing = [r for r in refs if r not in seen]
        if missing:
            raise ParseError(f"step {step['id']!r} refers to unknown or later steps {missing}")
        seen.add(step["id"])
    return payload


def _strings(value):
    if isinstance(value, str):
        yield value
    elif isinstance(value, list):
        for v in value:
            yield from _strings(v)
    elif isinstance(value, dict):
        for v in value.values():
            yield from _strings(v)


def run_scenario(source, seed: int | None = None, timing: bool = False) -> dict:
    """Run a scenario (path, builtin name or parsed dict) and return the report."""
    if isinstance(source, dict):
        payload = source
    else:
        payload = json.loads(_read_scenario(source))
    sc = _parse_scenario(payload)
    seeds = [seed] if seed is not None else list(sc.get("seeds", [0]))
    runs = []
    for s in seeds:
        env, steps, passed = {}, [], True
        for step in sc.get("steps", []):
            t0 = time.perf_counter()
            try:
                args = _resolve(step.get("args", {}), env, s)
                obj = OPS[step["op"]](args)
            except ParseError:
                raise
            except SymsigError as exc:
                raise StepFailure(step["id"], f"{type(exc).__name__}: {exc}") from exc
            env[step["id"]] = obj
            summary = summarize(obj)
            problems = _compare(obj, summary, step.get("expect", {}))
            status = "pass" if not problems else "fail"
            if not problems and isinstance(summary, dict) and summary.get("status") == "inconclusive":
                status = "inconclusive"
            passed = passed and not problems
            entry = {"id": step["id"], "op": step["op"], "status": status, "summary": summary,
                     "mismatches": problems}
            if timing:
                entry["seconds"] = round(time.perf_counter() - t0, 4)
            steps.append(entry)
        runs.append({"seed": s, "passed": passed, "steps": steps})
    return {"scenario": sc.get("name", ""), "passed": all(r["passed"] for r in runs), "runs": runs}


def builtin_scenarios() -> list[str]:
    root = resources.files("symsig") / "scenarios"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def _read_scenario(source) -> str:
    path = Path(source)
    if path.exists():
        return path.read_text()
    res = resources.files("symsig") / "scenarios" / f"{source}.json"
    if res.is_file():
        return res.read_text()
    raise ParseError(f"no scenario file or builtin named {source!r}")


# --------------------------------------------------------------------------
# argument handling


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--strict", action="store_true", help="exit 3 on inconclusive verdicts")
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--format", choices=("json", "text"), default="json")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="symsig", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("validate", parents=[common], help="validate a complex or pair")
    p.add_argument("file", type=Path)
    p = sub.add_parser("sigma-even", parents=[common], help="sigma of an even pair")
    p.add_argument("file", type=Path)
    p.add_argument("--variant", type=int, default=0)
    p = sub.add_parser("sigma-odd", parents=[common], help="sigma of an odd pair")
    p.add_argument("file", type=Path)
    p.add_argument("--lagrangian", type=Path, required=True)
    p.add_argument("--variant", type=int, default=0)
    p = sub.add_parser("glue", parents=[common], help="glue two pairs")
    p.add_argument("first", type=Path)
    p.add_argument("second", type=Path)
    p.add_argument("--map", type=Path, default=None)
    p = sub.add_parser("torus", parents=[common], help="algebraic mapping torus")
    p.add_argument("file", type=Path)
    p.add_argument("--map", type=Path, required=True)
    p = sub.add_parser("witt", parents=[common], help="signature / Lagrangian / formation verdict")
    p.add_argument("file", type=Path)
    p = sub.add_parser("fixture", parents=[common], help="emit a canonical or random fixture")
    p.add_argument("name", help=f"one of {', '.join(sorted(REGISTRY))}, or random-pair")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--max-rank", type=int, default=8)
    p = sub.add_parser("run", parents=[common], help="run a scenario file or builtin")
    p.add_argument("scenario", nargs="?", default=None)
    p.add_argument("--list", action="store_true")
    p.add_argument("--timing", action="store_true", help="record wall-clock per step")
    return parser


def _load(path: Path):
    try:
        return serial.loads(path.read_text())
    except OSError as exc:
        raise ParseError(str(exc)) from None


def _text(payload) -> str:
    if isinstance(payload, dict) and "runs" in payload:
        lines = [f"scenario {payload['scenario']}: {'pass' if payload['passed'] else 'FAIL'}"]
        for run in payload["runs"]:
            for st in run["steps"]:
                lines.append(f"  seed {run['seed']} {st['id']:<20} {st['status']}"
                             + "".join(f"\n      {m}" for m in st["mismatches"]))
        return "\n".join(lines)
    if isinstance(payload, dict) and "checks" in payload:
        return "\n".join(f"{'pass' if c['pass'] else ('undecided' if c['pass'] is None else 'FAIL'):<10}"
                         f"{c['check']}" + ("" if c["degree"] is None else f" (degree {c['degree']})")
                         for c in payload["checks"])
    return json.dumps(payload, sort_keys=True, indent=1)


def _emit(args, payload) -> None:
    text = _text(payload) if args.format == "text" else json.dumps(payload, sort_keys=True, indent=1)
    if args.out:
        args.out.write_text(text + "\n")
    else:
        print(text)


def _command(args) -> tuple[object, int]:
    cmd = args.command
    if cmd == "validate":
        obj = _load(args.file)
        if isinstance(obj, PoincarePair):
            rep = validate_pair(obj)
        elif isinstance(obj, SymmetricComplex):
            rep = validate_symmetric_complex(obj)
        else:
            raise ParseError("validate expects a complex or a pair")
        return {"ok": rep.ok, "checks": rep.to_json()}, EXIT_OK if rep.ok else EXIT_FAIL
    if cmd == "sigma-even":
        return sigma_even(_load(args.file), variant=args.variant).to_json(), EXIT_OK
    if cmd == "sigma-odd":
        return sigma_odd(_load(args.file), _load(args.lagrangian),
                         variant=args.variant).to_json(), EXIT_OK
    if cmd == "glue":
        u = _load(args.map) if args.map else None
        X = glue_pairs(_load(args.first), _load(args.second), u)
        rep = validate_symmetric_complex(X)
        return {"complex": serial.dump(X), "report": rep.to_json(),
                "fingerprint": fingerprint(X).to_json() if rep.ok else None}, \
            EXIT_OK if rep.ok else EXIT_FAIL
    if cmd == "torus":
        X = mapping_torus(_load(args.file), _load(args.map))
        rep = validate_symmetric_complex(X)
        return {"complex": serial.dump(X), "report": rep.to_json(),
                "fingerprint": fingerprint(X).to_json() if rep.ok else None}, \
            EXIT_OK if rep.ok else EXIT_FAIL
    if cmd == "witt":
        out = _witt(_load(args.file))
        code = EXIT_INCONCLUSIVE if args.strict and out.get("status") == "inconclusive" else EXIT_OK
        return out, code
    if cmd == "fixture":
        if args.name == "random-pair":
            try:
                obj = random_pair(args.seed or 0, args.dim, args.max_rank)
            except DimensionMismatch as exc:
                raise ParseError(str(exc)) from None
        else:
            obj = fixture(args.name)
        if isinstance(obj, dict):
            return {"kind": "bundle", "data": {k: serial.dump(v) for k, v in sorted(obj.items())},
                    "certificate": {k: certificate(v).to_json() for k, v in sorted(obj.items())}}, EXIT_OK
        env = serial.dump(obj)
        cert = certificate(obj)
        if cert is not None:
            env["certificate"] = cert.to_json()
        return env, EXIT_OK
    if cmd == "run":
        if args.list or args.scenario is None:
            return {"scenarios": builtin_scenarios()}, EXIT_OK
        report = run_scenario(args.scenario, args.seed, timing=args.timing)
        if not report["passed"]:
            return report, EXIT_FAIL
        inconclusive = any(st["status"] == "inconclusive" for r in report["runs"] for st in r["steps"])
        return report, EXIT_INCONCLUSIVE if args.strict and inconclusive else EXIT_OK
    raise ParseError(f"unknown command {cmd!r}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload, code = _command(args)
    except (ParseError, UnknownFixture) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except StepFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except SymsigError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(args, payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
