"""Command-line front end.

Usage examples:
  heunseries find-q --gamma0 gamma --N 1 --gamma 0.5 --alpha -1.3 --beta 0.5 --delta 0.7 --a 3 --derive-epsilon
  heunseries solve --params-file p.json --gamma0 gamma --N 1 --root-index 0 --second-solution
  heunseries expand --gamma 0.5 --delta 0.7 --epsilon -0.3 --alpha -0.6 --beta 0.5 --q 0.3 --a 3 --K 200
  heunseries verify --from-json solve_output.json
  heunseries catalog --classes gamma --N-min 0 --N-max 2 --seeds 5 --output catalog.csv

Exit codes: 0 success, 2 usage/validation error, 3 computational breakdown,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from .accessory import q_polynomial, solve_q, termination_order
from .catalog import catalog_csv, catalog_rows
from .errors import ComputationError, HeunError, RecurrenceBreakdown, ValidationError
from .params import (
    ExpansionSpec,
    Frame,
    Gamma0,
    HeunParameters,
    Terminating,
    Truncated,
    derive_delta,
    map_positive_epsilon,
)
from .recurrence import RecurrenceContext, generate_coefficients, perron_ratios, tail_ratio
from .solutions import (
    SolutionForm,
    build_finite_solution,
    build_positive_epsilon_solution,
    build_second_solution,
    evaluate,
)
from .verification import Verdict, verify_solution, wronskian

EXIT_OK, EXIT_USAGE, EXIT_BREAKDOWN, EXIT_VERIFY = 0, 2, 3, 4
PARAM_NAMES = ("gamma", "delta", "epsilon", "alpha", "beta", "q", "a")
FRAMES = {"z": Frame.DIRECT_Z, "1-z": Frame.ONE_MINUS_Z}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ValidationError(message)


def _clean(obj):
    """JSON-ready copy: non-finite floats become null, complex numbers split."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, complex):
        return {"re": _clean(obj.real), "im": _clean(obj.imag)}
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item"):
        return _clean(obj.item())
    return obj


def _add_param_options(p: argparse.ArgumentParser, with_q: bool = True):
    g = p.add_argument_group("Heun parameters")
    for name in PARAM_NAMES:
        if name == "q" and not with_q:
            continue
        g.add_argument(f"--{name}", type=float, default=None)
    g.add_argument("--params-file", type=Path, default=None, help="JSON document with the seven Heun fields")
    g.add_argument(
        "--derive-epsilon",
        action="store_true",
        help="set epsilon from the termination class and N (delta is re-derived if needed)",
    )


def _add_expansion_options(p: argparse.ArgumentParser):
    p.add_argument("--gamma0", choices=[c.value for c in Gamma0], default="gamma")
    p.add_argument("--frame", choices=sorted(FRAMES), default="z")


def _collect_params(args, need_q: bool, notes: dict) -> HeunParameters:
    values = {}
    if args.params_file is not None:
        try:
            doc = json.loads(args.params_file.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read --params-file: {exc}") from None
        doc = doc.get("params", doc)
        values.update({k: float(doc[k]) for k in PARAM_NAMES if doc.get(k) is not None})
    for k in PARAM_NAMES:
        v = getattr(args, k, None)
        if v is not None:
            values[k] = v
    if not need_q:
        values.setdefault("q", 0.0)
    if getattr(args, "derive_epsilon", False):
        choice = Gamma0(args.gamma0)
        for k in ("gamma", "alpha", "beta"):
            if k not in values:
                raise ValidationError(f"--derive-epsilon needs --{k}")
        N = getattr(args, "N", None)
        if N is None:
            raise ValidationError("--derive-epsilon needs --N")
        if choice is Gamma0.GAMMA:
            eps = -float(N)
        elif choice is Gamma0.ALPHA:
            eps = values["alpha"] - values["gamma"] - N
        else:
            eps = values["beta"] - values["gamma"] - N
        values["epsilon"] = eps
        notes["epsilon"] = eps
        delta = derive_delta(values["gamma"], eps, values["alpha"], values["beta"])
        if "delta" not in values or abs(values["delta"] - delta) > 1e-12:
            values["delta"] = delta
            notes["delta"] = delta
    missing = [k for k in PARAM_NAMES if k not in values]
    if missing:
        raise ValidationError("missing required option(s): " + ", ".join(f"--{k}" for k in missing))
    return HeunParameters(**values)


def _spec(args, N: int | None = None, K: int | None = None) -> ExpansionSpec:
    mode = Terminating(N) if N is not None else Truncated(K)
    return ExpansionSpec(Gamma0(args.gamma0), FRAMES[args.frame], mode)


def _order(args, p: HeunParameters, spec: ExpansionSpec) -> int:
    if args.N is not None:
        return args.N
    N = termination_order(p, spec)
    if N is None:
        raise ValidationError("--N not given and the parameters satisfy no termination class for this gamma0")
    return N


def _root_doc(i, root):
    return {
        "index": i,
        "re": root.value.real,
        "im": root.value.imag,
        "is_real": root.is_real,
        "multiplicity": root.multiplicity,
    }


def cmd_find_q(args) -> tuple[int, dict, dict]:
    notes = {}
    p = _collect_params(args, need_q=False, notes=notes)
    spec0 = _spec(args, N=0)
    N = _order(args, p, spec0)
    spec = _spec(args, N=N)
    inputs = {"params": p.as_dict(), "gamma0": args.gamma0, "frame": args.frame, "N": N, "derived": notes}
    poly = q_polynomial(p, spec, N)
    roots = []
    code = EXIT_OK
    for i, root in enumerate(solve_q(poly)):
        doc = _root_doc(i, root)
        if root.is_real and args.verify:
            try:
                form = build_finite_solution(p, spec, root.real)
                report = verify_solution(form)
                doc["verification"] = report.to_dict()
                if report.verdict is Verdict.FAIL:
                    code = EXIT_VERIFY
            except ComputationError as exc:
                doc["verification"] = {"verdict": Verdict.INCONCLUSIVE.value, "reason": str(exc)}
        roots.append(doc)
    outputs = {
        "polynomial": {
            "coefficients": list(poly.coefficients),
            "center": poly.center,
            "degree": poly.degree,
            "termination_class": poly.termination_class.value,
        },
        "roots": roots,
    }
    return code, inputs, outputs


def _grid(text: str | None):
    if not text:
        return None
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValidationError(f"--grid must be a comma-separated list of numbers, got {text!r}") from None


def _samples(form: SolutionForm, grid):
    out = []
    for z in grid:
        u, u1, u2 = evaluate(form, z)
        out.append({"z": z, "u": u, "u_prime": u1, "u_double_prime": u2})
    return out


def cmd_solve(args) -> tuple[int, dict, dict]:
    notes = {}
    p = _collect_params(args, need_q=False, notes=notes)
    lift = args.lift
    if lift:
        target = map_positive_epsilon(p)
    else:
        target = p
    spec = _spec(args, N=_order(args, target, _spec(args, N=0)))
    N = spec.mode.N
    if args.q is not None and args.root_index is None:
        q = args.q - (p.gamma * (p.epsilon - 1.0) if lift else 0.0)
    else:
        roots = solve_q(q_polynomial(target, spec, N))
        idx = args.root_index or 0
        if not 0 <= idx < len(roots):
            raise ValidationError(f"--root-index {idx} out of range (0..{len(roots) - 1})")
        if not roots[idx].is_real:
            raise ValidationError(f"root {idx} is complex; only real roots are assembled")
        q = roots[idx].real
    expansion = None
    if lift:
        form = build_positive_epsilon_solution(p, spec, q)
    else:
        form = build_finite_solution(p, spec, q)
        if form.alternate is not None:
            # gamma0 = alpha or beta: report the (1-z)**(1-delta) polynomial form
            expansion = replace(form, alternate=None)
            form = form.alternate
    report = verify_solution(form)
    inputs = {
        "params": p.as_dict(),
        "gamma0": args.gamma0,
        "frame": args.frame,
        "N": N,
        "lift": lift,
        "derived": notes,
    }
    outputs = {"solution": form.to_dict(), "verification": report.to_dict()}
    if expansion is not None:
        outputs["expansion"] = expansion.to_dict()
    code = EXIT_VERIFY if report.verdict is Verdict.FAIL else EXIT_OK
    if args.second_solution:
        second = build_second_solution(form.params, form.params.q)
        rep2 = verify_solution(second)
        outputs["second_solution"] = second.to_dict()
        outputs["second_verification"] = rep2.to_dict()
        outputs["wronskian_at_half"] = wronskian(form, second, 0.5)
        if rep2.verdict is Verdict.FAIL:
            code = EXIT_VERIFY
    grid = _grid(args.grid)
    if grid:
        outputs["samples"] = _samples(form, grid)
    return code, inputs, outputs


def cmd_verify(args) -> tuple[int, dict, dict]:
    try:
        doc = json.loads(args.from_json.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read --from-json: {exc}") from None
    if "outputs" in doc:
        doc = doc["outputs"]
    forms = {}
    if "solution" in doc:
        forms["solution"] = SolutionForm.from_dict(doc["solution"])
        if "second_solution" in doc:
            forms["second_solution"] = SolutionForm.from_dict(doc["second_solution"])
    else:
        forms["solution"] = SolutionForm.from_dict(doc)
    outputs = {}
    code = EXIT_OK
    grid = _grid(args.grid)
    for name, form in forms.items():
        report = verify_solution(form, grid=grid)
        outputs[name] = report.to_dict()
        if report.verdict is Verdict.FAIL:
            code = EXIT_VERIFY
    if len(forms) == 2:
        outputs["wronskian_at_half"] = wronskian(forms["solution"], forms["second_solution"], 0.5)
    return code, {"from_json": str(args.from_json)}, outputs


def cmd_expand(args) -> tuple[int, dict, dict]:
    notes = {}
    p = _collect_params(args, need_q=True, notes=notes)
    spec = _spec(args, K=args.K)
    ctx = RecurrenceContext.from_spec(p, spec)
    seq = generate_coefficients(ctx, args.K)
    one, other = perron_ratios(ctx.params.a)
    ratio = tail_ratio(seq)
    inputs = {"params": p.as_dict(), "gamma0": args.gamma0, "frame": args.frame, "K": args.K}
    outputs = {
        "gamma0": seq.gamma0,
        "coefficients": list(seq.coefficients),
        "terminated_at": seq.terminated_at,
        "tail_ratio": ratio,
        "perron_candidates": [one, other],
        "dominant_ratio": max(1.0, abs(other)),
    }
    return EXIT_OK, inputs, outputs


def _write(text: str, path: Path | None):
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text, encoding="utf-8")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="heunseries", description="Hypergeometric-series solutions of the general Heun equation.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("find-q", help="terminating accessory parameters")
    _add_param_options(sp, with_q=False)
    _add_expansion_options(sp)
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--no-verify", dest="verify", action="store_false")
    sp.add_argument("--output", type=Path, default=None)

    sp = sub.add_parser("solve", help="assemble and verify a closed-form solution")
    _add_param_options(sp)
    _add_expansion_options(sp)
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--root-index", type=int, default=None)
    sp.add_argument("--second-solution", action="store_true")
    sp.add_argument("--lift", action="store_true", help="integer epsilon >= 2: solve via u = (z-a)^(1-epsilon) v")
    sp.add_argument("--grid", default=None, help="comma-separated z values to sample")
    sp.add_argument("--output", type=Path, default=None)

    sp = sub.add_parser("verify", help="re-verify a solution document")
    sp.add_argument("--from-json", type=Path, required=True)
    sp.add_argument("--grid", default=None)
    sp.add_argument("--output", type=Path, default=None)

    sp = sub.add_parser("expand", help="expansion coefficients c_0..c_K")
    _add_param_options(sp)
    _add_expansion_options(sp)
    sp.add_argument("--K", type=int, required=True)
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--output", type=Path, default=None)

    sp = sub.add_parser("catalog", help="sweep closed-form cases into a CSV table")
    sp.add_argument("--classes", default="gamma", help="comma-separated subset of gamma,alpha,beta")
    sp.add_argument("--N-min", type=int, default=0)
    sp.add_argument("--N-max", type=int, default=2)
    sp.add_argument("--seeds", type=int, default=5, help="number of parameter sets per (class, N)")
    sp.add_argument("--seed", type=int, default=0, help="first seed")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--output", type=Path, default=None)
    return ap


COMMANDS = {"find-q": cmd_find_q, "solve": cmd_solve, "verify": cmd_verify, "expand": cmd_expand}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    command = argv[0] if argv else None
    try:
        args = build_parser().parse_args(argv)
    except ValidationError as exc:
        _write(json.dumps({"command": command, "inputs": {}, "error": {"type": "UsageError", "message": str(exc)}}, indent=2) + "\n", None)
        return EXIT_USAGE
    out = getattr(args, "output", None)

    if args.command == "catalog":
        try:
            classes = [Gamma0(c.strip()) for c in args.classes.split(",") if c.strip()]
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        if args.N_min < 0 or args.N_max < args.N_min or args.seeds < 1:
            print("error: need 0 <= --N-min <= --N-max and --seeds >= 1", file=sys.stderr)
            return EXIT_USAGE
        rows = catalog_rows(classes, range(args.N_min, args.N_max + 1), range(args.seed, args.seed + args.seeds), args.workers)
        _write(catalog_csv(rows), out)
        return EXIT_OK

    doc = {"command": args.command}
    try:
        code, inputs, outputs = COMMANDS[args.command](args)
        doc.update(inputs=inputs, outputs=outputs)
    except ValidationError as exc:
        code = EXIT_USAGE
        doc.update(inputs={}, error={"type": type(exc).__name__, "message": str(exc)})
    except ComputationError as exc:
        code = EXIT_BREAKDOWN
        err = {"type": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, RecurrenceBreakdown):
            err["index"] = exc.n
        doc.update(inputs={}, error=err)
    except HeunError as exc:
        code = EXIT_BREAKDOWN
        doc.update(inputs={}, error={"type": type(exc).__name__, "message": str(exc)})

    if args.command == "expand" and getattr(args, "format", "json") == "csv" and "outputs" in doc:
        lines = ["n,coefficient"]
        lines += [f"{n},{format(c, '.17g')}" for n, c in enumerate(doc["outputs"]["coefficients"])]
        _write("\n".join(lines) + "\n", out)
    else:
        _write(json.dumps(_clean(doc), indent=2) + "\n", out)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
