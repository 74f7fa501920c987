"""Command-line front end: exact, asymptotic, Monte Carlo and oracle reports."""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from . import asymptotics, montecarlo, oracle
from .diagrams import (
    DiagramClass,
    GuardExceeded,
    class_size,
    enumerate_ann_nc,
    enumerate_class,
    enumerate_disc_nc,
)
from .ensembles import (
    GOE,
    EnsembleModel,
    Letter,
    TraceExpression,
    Wishart,
    exact_centred_cumulant,
    exact_moment,
    exact_trace_cumulant,
    model_from_dict,
)
from .laurent import LaurentValue
from .perm import SignedPermutation

MODES = ("exact", "asymptotic", "mc", "oracle", "verify")
EXIT_OK, EXIT_FAILED, EXIT_SCHEMA, EXIT_GUARD = 0, 1, 2, 3
MC_Z_LIMIT = 5.0


class SchemaError(ValueError):
    """A malformed job description; ``line`` points into the source text when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


# --------------------------------------------------------------------------
# Job description


@dataclass
class Expression:
    name: str
    kind: str  # moment | cumulant | centred
    traces: list  # words, or for centred: lists of factors
    shape: SignedPermutation | None = None
    letters: list[Letter] | None = None

    def trace_expression(self) -> TraceExpression:
        if self.shape is not None:
            return TraceExpression(tuple(self.letters), self.shape)
        return TraceExpression.from_traces(self.traces)

    def colours(self) -> set[str]:
        if self.kind == "centred":
            return {x.colour for t in self.traces for f in t for x in f}
        if self.letters is not None:
            return {x.colour for x in self.letters}
        return {x.colour for t in self.traces for x in t}


@dataclass
class JobSpec:
    ensembles: dict[str, EnsembleModel]
    expressions: list[Expression]
    modes: list[str] = field(default_factory=lambda: ["exact"])
    N: list[int] = field(default_factory=lambda: [50])
    samples: int = 10_000
    seed: int = 0
    threads: int = 1


def _word(value, where: str) -> list[Letter]:
    tokens = value.split() if isinstance(value, str) else value
    if not isinstance(tokens, list) or not all(isinstance(t, str) for t in tokens):
        raise SchemaError(f"{where}: a word is a string or a list of letter tokens")
    try:
        return [Letter.parse(t) for t in tokens]
    except ValueError as err:
        raise SchemaError(f"{where}: {err}") from None


def _parse_expression(raw: Any, index: int, line: int | None) -> Expression:
    where = f"expressions[{index}]"
    if not isinstance(raw, dict):
        raise SchemaError(f"{where}: expected an object", line)
    kind = raw.get("type", "moment")
    name = str(raw.get("name", f"e{index}"))
    try:
        if kind not in ("moment", "cumulant", "centred"):
            raise SchemaError(f"{where}.type: unknown type {kind!r}")
        if "gamma" in raw:
            if kind == "centred":
                raise SchemaError(f"{where}: centred expressions take factor lists, not gamma")
            letters = _word(raw.get("letters"), f"{where}.letters")
            try:
                shape = SignedPermutation.parse(str(raw["gamma"]))
                expr = TraceExpression(tuple(letters), shape)
            except ValueError as err:
                raise SchemaError(f"{where}.gamma: {err}") from None
            return Expression(name, kind, expr.traces(), shape, letters)
        traces = raw.get("traces")
        if not isinstance(traces, list):
            raise SchemaError(f"{where}.traces: expected a list")
        if kind == "centred":
            parsed = []
            for t, trace in enumerate(traces):
                if not isinstance(trace, list) or not trace:
                    raise SchemaError(f"{where}.traces[{t}]: expected a nonempty list of factors")
                factors = [_word(f, f"{where}.traces[{t}][{j}]") for j, f in enumerate(trace)]
                if any(not f for f in factors):
                    raise SchemaError(f"{where}.traces[{t}]: empty factor")
                parsed.append(factors)
            return Expression(name, kind, parsed)
        return Expression(name, kind, [_word(t, f"{where}.traces[{i}]") for i, t in enumerate(traces)])
    except SchemaError as err:
        raise SchemaError(str(err), err.line or line) from None


def _element_lines(text: str, key: str) -> list[int]:
    """1-based line of each element of a top-level array, or [] if not locatable."""
    decoder = json.JSONDecoder()
    pos = text.find(f'"{key}"')
    if pos < 0:
        return []
    pos = text.find("[", pos)
    if pos < 0:
        return []
    lines = []
    pos += 1
    try:
        while True:
            while pos < len(text) and text[pos] in " \t\r\n,":
                pos += 1
            if pos >= len(text) or text[pos] == "]":
                return lines
            lines.append(text.count("\n", 0, pos) + 1)
            _, pos = decoder.raw_decode(text, pos)
    except json.JSONDecodeError:
        return lines


def _key_line(text: str, key: str) -> int | None:
    pos = text.find(f'"{key}"')
    return None if pos < 0 else text.count("\n", 0, pos) + 1


def parse_jobspec(text: str) -> JobSpec:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise SchemaError(f"invalid JSON: {err.msg}", err.lineno) from None
    if not isinstance(raw, dict):
        raise SchemaError("the job description must be a JSON object", 1)
    unknown = set(raw) - {"ensembles", "expressions", "modes", "N", "samples", "seed", "threads"}
    if unknown:
        key = sorted(unknown)[0]
        raise SchemaError(f"unknown field {key!r}", _key_line(text, key))

    ensembles = {}
    raw_ens = raw.get("ensembles", {})
    if not isinstance(raw_ens, dict):
        raise SchemaError("ensembles: expected an object", _key_line(text, "ensembles"))
    for colour, desc in raw_ens.items():
        if not isinstance(desc, dict):
            desc = {"kind": desc}
        try:
            ensembles[colour] = model_from_dict(desc)
        except (ValueError, TypeError, KeyError) as err:
            raise SchemaError(f"ensembles.{colour}: {err}", _key_line(text, colour)) from None

    raw_exprs = raw.get("expressions", [])
    if not isinstance(raw_exprs, list):
        raise SchemaError("expressions: expected a list", _key_line(text, "expressions"))
    lines = _element_lines(text, "expressions")
    expressions = []
    for i, item in enumerate(raw_exprs):
        line = lines[i] if i < len(lines) else None
        expr = _parse_expression(item, i, line)
        missing = sorted(expr.colours() - set(ensembles))
        if missing:
            raise SchemaError(f"expressions[{i}]: undeclared colours {missing}", line)
        expressions.append(expr)

    modes = raw.get("modes", ["exact"])
    if not isinstance(modes, list) or any(m not in MODES for m in modes):
        raise SchemaError(f"modes: expected a subset of {list(MODES)}", _key_line(text, "modes"))
    n_list = raw.get("N", [50])
    if isinstance(n_list, int):
        n_list = [n_list]
    if not isinstance(n_list, list) or not all(isinstance(n, int) and n >= 1 for n in n_list):
        raise SchemaError("N: expected a positive integer or a list of them", _key_line(text, "N"))
    spec = JobSpec(ensembles, expressions, list(modes), list(n_list))
    for key in ("samples", "seed", "threads"):
        if key in raw:
            if not isinstance(raw[key], int) or raw[key] < (0 if key == "seed" else 1):
                raise SchemaError(f"{key}: expected a nonnegative integer", _key_line(text, key))
            setattr(spec, key, raw[key])
    return spec


# --------------------------------------------------------------------------
# Evaluation


def _exact(expr: Expression, models) -> LaurentValue:
    if expr.kind == "moment":
        return exact_moment(expr.trace_expression(), models)
    if expr.kind == "cumulant":
        return exact_trace_cumulant(expr.trace_expression(), models)
    return exact_centred_cumulant(expr.traces, models)


def _numeric_c(expr: Expression, models) -> Fraction | None:
    for col in sorted(expr.colours()):
        m = models[col]
        if isinstance(m, Wishart) and m.c is not None:
            return m.c
    return None


def _value_json(value) -> object:
    if isinstance(value, LaurentValue):
        return value.to_json()
    if isinstance(value, Fraction):
        return str(value)
    return value


def _single_colour(expr: Expression) -> bool:
    return len(expr.colours()) == 1


def _pure_power(word: Sequence[Letter]) -> bool:
    return len({(x.colour, x.label, x.transpose) for x in word}) == 1


def _asymptotic(expr: Expression, models, exact: LaurentValue | None) -> dict:
    """Limit by noncrossing enumeration when available, else from the exact constant term."""
    traces = expr.traces
    if expr.kind == "moment" and len(traces) == 1 and _single_colour(expr):
        lim = asymptotics.phi1(traces[0], models)
        return {"value": lim.value, "method": lim.provenance}
    if expr.kind == "cumulant" and len(traces) == 2 and _single_colour(expr):
        lim = asymptotics.phi2(traces[0], traces[1], models)
        return {"value": lim.value, "method": lim.provenance}
    exact = exact if exact is not None else _exact(expr, models)
    scale = -1 if expr.kind == "centred" and len(traces) == 1 else 0
    if expr.kind == "cumulant" and len(traces) == 1:
        scale = -1
    value = exact.shift(scale).constant_term()
    return {"value": value, "method": "constant term of the exact value"}


def _closed_form_note(expr: Expression, models, limit: LaurentValue) -> dict | None:
    """Compare a two-trace single-colour power cumulant against the published closed forms."""
    if expr.kind != "cumulant" or len(expr.traces) != 2 or not _single_colour(expr):
        return None
    a, b = expr.traces
    if not (_pure_power(a) and _pure_power(b)) or a[0] != b[0] or a[0].transpose:
        return None
    model = models[a[0].colour]
    p, q = len(a), len(b)
    if isinstance(model, GOE):
        closed = asymptotics.closed_form_goe_fluct(p, q)
    elif isinstance(model, Wishart) and not model.explicit and model.c == 1:
        closed = asymptotics.closed_form_wishart_fluct(p, q)
    else:
        return None
    agrees = limit == closed
    note = {"closed_form": str(closed), "agrees": agrees}
    if not agrees:
        note["flag"] = (f"closed form gives {closed} but the enumerated limit is {limit}; "
                        "the limit is checked against the exact cumulant instead")
    return note


def _verify(expr: Expression, models, exact: LaurentValue, asym: dict | None) -> dict:
    traces = expr.traces
    r = len(traces)
    if expr.kind == "cumulant" and r >= 3:
        top = exact.max_n_exponent()
        ok = top is None or top < 0
        return {"check": "higher cumulant vanishes", "verdict": "pass" if ok else "fail"}
    if expr.kind == "centred" and r == 1 and len(traces[0]) >= 2:
        try:
            asymptotics._check_alternating(traces[0], cyclic=False)
        except ValueError as err:
            return {"check": "first-order freeness", "verdict": f"skipped: {err}"}
        defect = exact.shift(-1).constant_term()
        return {"check": "first-order freeness", "defect": defect.to_json(),
                "verdict": "pass" if defect.is_zero() else "fail"}
    if expr.kind == "centred" and r == 2:
        a, b = traces
        try:
            rhs = asymptotics.second_order_rhs(a, b, models).value
        except ValueError as err:
            return {"check": "second-order freeness", "verdict": f"skipped: {err}"}
        lhs = exact.constant_term()
        ok = lhs == rhs
        if len(a) != len(b):
            verdict = "zero-limit: pass" if ok else "zero-limit: fail"
        else:
            verdict = "pass" if ok else "fail"
        return {"check": "second-order freeness", "lhs": lhs.to_json(), "rhs": rhs.to_json(),
                "verdict": verdict}
    if asym is not None and "noncrossing" in asym["method"]:
        const = exact.constant_term()
        ok = const == asym["value"]
        out = {"check": "limit equals exact constant term", "limit": asym["value"].to_json(),
               "constant_term": const.to_json(), "verdict": "pass" if ok else "fail"}
        note = _closed_form_note(expr, models, asym["value"])
        if note:
            out["closed_form"] = note
        return out
    return {"check": "none applicable", "verdict": "skipped"}


def _mc_target(expr: Expression) -> montecarlo.Target:
    if expr.kind == "moment":
        return montecarlo.moment_target(*expr.traces, name=expr.name)
    if expr.kind == "cumulant":
        return montecarlo.cumulant_target(*expr.traces, name=expr.name)
    return montecarlo.centred_target(*expr.traces, name=expr.name)


def evaluate_expression(expr: Expression, spec: JobSpec) -> dict:
    models = spec.ensembles
    entry: dict[str, Any] = {"name": expr.name, "type": expr.kind, "expression": _describe(expr)}
    exact = None
    guard_hit = False
    needs_exact = any(m in spec.modes for m in ("exact", "verify", "mc", "oracle"))
    if needs_exact:
        try:
            exact = _exact(expr, models)
            if "exact" in spec.modes:
                entry["exact"] = exact.to_json()
        except GuardExceeded as err:
            entry["exact"] = {"error": f"guard exceeded: {err}"}
            guard_hit = True
    asym = None
    if "asymptotic" in spec.modes or "verify" in spec.modes:
        try:
            asym = _asymptotic(expr, models, exact)
            if "asymptotic" in spec.modes:
                entry["asymptotic"] = {"value": asym["value"].to_json(), "method": asym["method"]}
        except GuardExceeded as err:
            entry["asymptotic"] = {"error": f"guard exceeded: {err}"}
            guard_hit = True
        except (ValueError, NotImplementedError) as err:
            entry["asymptotic"] = {"error": str(err)}
    verdicts = []
    if "verify" in spec.modes and exact is not None:
        entry["verify"] = _verify(expr, models, exact, asym)
        verdicts.append(entry["verify"]["verdict"])
    if "oracle" in spec.modes:
        rows = []
        for N in spec.N:
            if expr.kind != "moment":
                rows.append({"N": N, "error": "the oracle evaluates moments only"})
                continue
            try:
                value = oracle.wick_expectation(expr.trace_expression(), models, N)
            except GuardExceeded as err:
                rows.append({"N": N, "error": f"guard exceeded: {err}"})
                continue
            except ValueError as err:
                rows.append({"N": N, "error": str(err)})
                continue
            row = {"N": N, "value": str(value)}
            if exact is not None:
                ok = exact.evaluate(N, _numeric_c(expr, models)) == value
                row["verdict"] = "pass" if ok else "fail"
                verdicts.append(row["verdict"])
            rows.append(row)
        entry["oracle"] = rows
    if "mc" in spec.modes:
        rows = []
        for N in spec.N:
            try:
                est = montecarlo.estimate(_mc_target(expr), models, N, spec.samples, spec.seed,
                                          spec.threads)
            except (ValueError, NotImplementedError, KeyError) as err:
                rows.append({"N": N, "error": str(err)})
                continue
            ref = None
            if exact is not None:
                ref = exact.evaluate(N, _numeric_c(expr, models))
            row = est.as_row(N, ref)
            if ref is not None:
                row["verdict"] = "pass" if row["z"] <= MC_Z_LIMIT else "fail"
                if "verify" in spec.modes:
                    verdicts.append(row["verdict"])
            rows.append(row)
        entry["mc"] = rows
    entry["_guard"] = guard_hit
    entry["_failed"] = any(not v.endswith("pass") and not v.startswith("skipped") for v in verdicts)
    return entry


def _describe(expr: Expression) -> str:
    if expr.kind == "centred":
        inner = [" ".join("(" + " ".join(map(str, f)) + ")°" for f in t) for t in expr.traces]
        return "k(" + ", ".join(f"Tr {x}" for x in inner) + ")"
    words = [" ".join(map(str, t)) for t in expr.traces]
    if expr.kind == "moment":
        return " ".join(f"tr({w})" for w in words)
    return "k(" + ", ".join(f"Tr({w})" for w in words) + ")"


def run_job(spec: JobSpec) -> tuple[dict, int]:
    entries = [evaluate_expression(e, spec) for e in spec.expressions]
    guard_all = bool(entries) and all(e.pop("_guard") for e in entries)
    for e in entries:
        e.pop("_guard", None)
    failed = any(e.pop("_failed") for e in entries)
    report = {"modes": spec.modes, "N": spec.N, "samples": spec.samples, "seed": spec.seed,
              "rng": montecarlo.RNG_NAME, "expressions": entries}
    if guard_all:
        return report, EXIT_GUARD
    return report, EXIT_FAILED if failed else EXIT_OK


# --------------------------------------------------------------------------
# Output


def report_rows(report: dict) -> list[dict]:
    """Flatten a report into CSV rows."""
    rows = []
    for e in report.get("expressions", []):
        base = {"expression": e["name"], "description": e["expression"]}
        if "exact" in e:
            rows.append({**base, "mode": "exact", "value": json.dumps(e["exact"])})
        if "asymptotic" in e:
            rows.append({**base, "mode": "asymptotic", "value": json.dumps(e["asymptotic"])})
        if "verify" in e:
            rows.append({**base, "mode": "verify", "verdict": e["verify"]["verdict"],
                         "value": json.dumps(e["verify"])})
        for r in e.get("oracle", []):
            rows.append({**base, "mode": "oracle", "N": r["N"], "value": r.get("value", r.get("error")),
                         "verdict": r.get("verdict", "")})
        for r in e.get("mc", []):
            rows.append({**base, "mode": "mc", **{k: v for k, v in r.items() if k != "expression"}})
        for r in e.get("rows", []):
            rows.append({**base, **r})
    return rows


_CSV_COLUMNS = ["expression", "description", "mode", "N", "samples", "seed", "mean", "se",
                "exact", "z", "value", "verdict", "error"]


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=_CSV_COLUMNS, extrasaction="ignore")
    writer.writeheader()
    for row in report_rows(report):
        writer.writerow(row)
    return buf.getvalue()


def _emit(report: dict, args) -> None:
    text = render(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# Inline expressions


_DEFAULT_KINDS = {"T": "goe", "Z": "ginibre", "W": "wishart"}


def parse_ensemble_flag(text: str) -> tuple[str, dict]:
    """``W=wishart:c=1/2`` → ("W", {"kind": "wishart", "c": "1/2"})."""
    colour, _, desc = text.partition("=")
    if not colour or not desc:
        raise SchemaError(f"--ensemble expects COLOUR=KIND[:c=VALUE], got {text!r}")
    kind, *opts = desc.split(":")
    out: dict[str, Any] = {"kind": kind}
    for opt in opts:
        key, _, value = opt.partition("=")
        if key != "c":
            raise SchemaError(f"unknown ensemble option {key!r}")
        out["c"] = value
    return colour, out


def _inline_spec(args) -> JobSpec:
    declared = dict(parse_ensemble_flag(e) for e in args.ensemble or [])
    exprs = []
    if args.type == "centred":
        traces = [[_word(f, "factor") for f in w.split("/")] for w in args.words]
        expr = Expression("e0", "centred", traces)
    else:
        expr = Expression("e0", args.type, [_word(w, "word") for w in args.words])
    if args.words:
        exprs.append(expr)
    for colour in sorted(expr.colours() - set(declared)):
        kind = _DEFAULT_KINDS.get(colour[0].upper())
        if kind is None:
            raise SchemaError(f"colour {colour!r} needs --ensemble {colour}=KIND")
        declared[colour] = {"kind": kind}
    ensembles = {}
    for colour, desc in declared.items():
        try:
            ensembles[colour] = model_from_dict(desc)
        except (ValueError, TypeError) as err:
            raise SchemaError(f"ensemble {colour}: {err}") from None
    return JobSpec(ensembles, exprs)


def _apply_overrides(spec: JobSpec, args, modes: list[str] | None) -> JobSpec:
    if modes is not None:
        spec.modes = modes
    if getattr(args, "mode", None):
        spec.modes = [m.strip() for m in args.mode.split(",") if m.strip()]
        bad = [m for m in spec.modes if m not in MODES]
        if bad:
            raise SchemaError(f"--mode: unknown modes {bad}")
    if getattr(args, "N", None):
        spec.N = args.N
    for key in ("samples", "seed", "threads"):
        if getattr(args, key, None) is not None:
            setattr(spec, key, getattr(args, key))
    return spec


# --------------------------------------------------------------------------
# Built-in verification suites


def _colour_models(names: list[str]) -> dict[str, EnsembleModel]:
    """Two independent colours named A and B of the requested kinds."""
    if len(names) != 2:
        raise SchemaError("--colours expects two ensemble kinds, e.g. goe,wishart")
    return {"A": model_from_dict({"kind": names[0]}), "B": model_from_dict({"kind": names[1]})}


def first_order_words(max_factors: int = 4, max_letters: int = 2):
    """Alternating products of centred one-colour factors over colours A and B."""
    for p in range(2, max_factors + 1):
        for start in ("A", "B"):
            colours = [start if i % 2 == 0 else ("B" if start == "A" else "A") for i in range(p)]
            lengths = [range(1, max_letters + 1)] * p
            for sizes in itertools.product(*lengths):
                yield [[Letter(c)] * s for c, s in zip(colours, sizes)]


def second_order_cases():
    A, B = Letter("A"), Letter("B")
    yield [[A], [B]], [[A], [B]]
    yield [[A, A], [B]], [[A], [B, B]]
    yield [[A], [B]], [[A], [B], [A], [B]]


def run_suite(suite: str, models) -> tuple[dict, int]:
    rows = []
    if suite == "first-order":
        for factors in first_order_words():
            defect = asymptotics.freeness_defect(factors, models)
            ok = defect.constant_term().is_zero()
            rows.append({"value": _show_factors(factors), "exact": str(defect),
                         "verdict": "pass" if ok else "fail"})
    elif suite == "second-order":
        for a, b in second_order_cases():
            lhs = asymptotics.second_order_lhs(a, b, models).value
            rhs = asymptotics.second_order_rhs(a, b, models).value
            ok = lhs == rhs
            if len(a) != len(b):
                verdict = "zero-limit: pass" if ok else "zero-limit: fail"
            else:
                verdict = "pass" if ok else "fail"
            rows.append({"value": f"{_show_factors(a)} | {_show_factors(b)}",
                         "lhs": str(lhs), "rhs": str(rhs), "verdict": verdict})
    else:
        raise SchemaError(f"unknown suite {suite!r}")
    failed = any(not r["verdict"].endswith("pass") for r in rows)
    report = {"suite": suite, "colours": {k: m.kind for k, m in models.items()},
              "expressions": [{"name": suite, "expression": suite, "rows": rows}]}
    return report, EXIT_FAILED if failed else EXIT_OK


def _show_factors(factors) -> str:
    return " ".join("(" + " ".join(map(str, f)) + ")°" for f in factors)


# --------------------------------------------------------------------------
# Enumeration


_ENUM_CLASSES = {"premaps": DiagramClass.ALL_PREMAPS, "pairing-premaps": DiagramClass.PAIRING_PREMAPS,
                 "ginibre": DiagramClass.GINIBRE}


def run_enumerate(args) -> dict:
    if args.cls in _ENUM_CLASSES:
        if args.n is None:
            raise SchemaError(f"--class {args.cls} needs --n")
        kind = _ENUM_CLASSES[args.cls]
        if args.members:
            members = enumerate_class(kind, args.n)
            count = len(members)
        else:
            members, count = None, class_size(kind, args.n)
    else:
        if args.gamma is None:
            raise SchemaError(f"--class {args.cls} needs --gamma")
        try:
            gamma = SignedPermutation.parse(args.gamma)
        except ValueError as err:
            raise SchemaError(f"--gamma: {err}") from None
        finder = enumerate_disc_nc if args.cls == "disc-nc" else enumerate_ann_nc
        try:
            members = finder(gamma, pairings_only=args.pairings)
        except ValueError as err:
            raise SchemaError(str(err)) from None
        count = len(members)
        if not args.members:
            members = None
    out = {"class": args.cls, "count": count}
    if args.n is not None:
        out["n"] = args.n
    if args.gamma is not None:
        out["gamma"] = args.gamma
    if members is not None:
        out["members"] = [str(m) for m in members]
    return out


# --------------------------------------------------------------------------
# Argument parsing


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def _add_job(p: argparse.ArgumentParser, positional: bool = True) -> None:
    p.add_argument("--spec", help="JSON job description")
    if positional:
        p.add_argument("words", nargs="*",
                       help="one word per trace, letters separated by spaces; "
                            "for --type centred separate factors with '/'")
        p.add_argument("--type", choices=("moment", "cumulant", "centred"), default="moment")
        p.add_argument("--ensemble", action="append", metavar="COLOUR=KIND[:c=VALUE]",
                       help="declare a colour (default: T goe, Z ginibre, W wishart)")
    p.add_argument("--mode", help="comma-separated subset of " + ",".join(MODES))
    p.add_argument("--N", type=int, nargs="+", help="matrix sizes for mc and oracle")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    _add_output(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="realfree", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("exact", "exact finite-N value as a Laurent polynomial in N"),
                            ("asymptotic", "large-N limit"),
                            ("mc", "Monte Carlo estimate against the exact value"),
                            ("oracle", "brute-force Wick expectation at small N")):
        _add_job(sub.add_parser(name, help=help_text))
    run = sub.add_parser("run", help="run a JSON job description")
    _add_job(run, positional=False)
    verify = sub.add_parser("verify", help="identity checks on expressions or a built-in suite")
    _add_job(verify)
    verify.add_argument("--suite", choices=("first-order", "second-order"))
    verify.add_argument("--colours", default="goe,goe", help="two kinds, e.g. goe,wishart")
    enum = sub.add_parser("enumerate", help="count or list diagram classes")
    enum.add_argument("--class", dest="cls", required=True,
                      choices=sorted(_ENUM_CLASSES) + ["disc-nc", "ann-nc"])
    enum.add_argument("--n", type=int)
    enum.add_argument("--gamma")
    enum.add_argument("--members", action="store_true", help="list members, not just the count")
    enum.add_argument("--pairings", action="store_true", help="noncrossing pairings only")
    _add_output(enum)
    return parser


def _load_spec(path: str) -> JobSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise SchemaError(f"cannot read {path}: {err.strerror}") from None
    try:
        return parse_jobspec(text)
    except SchemaError as err:
        prefix = f"{path}:{err.line}" if err.line else path
        raise SchemaError(f"{prefix}: {err}", err.line) from None


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "enumerate":
            _emit(run_enumerate(args), args)
            return EXIT_OK
        if args.command == "verify" and args.suite:
            report, code = run_suite(args.suite, _colour_models(args.colours.split(",")))
            _emit(report, args)
            return code
        if args.command == "run" and not args.spec:
            raise SchemaError("run needs --spec")
        spec = _load_spec(args.spec) if args.spec else _inline_spec(args)
        default_modes = None if args.command == "run" else [args.command]
        if args.command == "verify":
            default_modes = ["exact", "asymptotic", "verify"]
        spec = _apply_overrides(spec, args, default_modes)
        report, code = run_job(spec)
        _emit(report, args)
        return code
    except SchemaError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_SCHEMA
    except GuardExceeded as err:
        print(f"error: guard exceeded: {err}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
