"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 a required hypothesis fails,
3 internal consistency violation.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import deformation, obstruction, spectral
from .builtins import builtin
from .errors import (
    DeformationError,
    EquivalenceViolation,
    FrameNotHolomorphic,
    HypothesisFailed,
    LinalgError,
    ModelError,
    NoDomainPath,
    NoTrivialCanonical,
    NotSolvable,
    SpectraError,
)
from .model import ModelSpec, build_model

EXIT_OK, EXIT_INPUT, EXIT_HYPOTHESIS, EXIT_INTERNAL = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _add_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--manifold", choices=["iwasawa", "nakamura", "abelian"])
    p.add_argument("--k", type=int, default=1, help="Nakamura parameter (nonzero)")
    p.add_argument("--n", type=int, default=2, help="dimension of the abelian model")
    p.add_argument("--input", metavar="FILE", help="model description in JSON")
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.add_argument("--verify", action="store_true", help="runtime well-definedness checks")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spectra-def", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("pages", help="Frölicher spectral sequence pages")
    p.add_argument("--r", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    _add_source(p)

    p = sub.add_parser("degeneration", help="E_1-degeneration and filtration conditions")
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    _add_source(p)

    p = sub.add_parser("kodaira", help="refined Kodaira hypotheses and ker mu")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    _add_source(p)

    p = sub.add_parser("cy-check", help="unobstructedness criteria for trivial canonical bundle")
    _add_source(p)

    p = sub.add_parser("bott-chern", help="Bott-Chern and Aeppli dimensions")
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    _add_source(p)

    p = sub.add_parser("popovici", help="the maps A1 and A2")
    _add_source(p)

    for name, helptext in (("kuranishi", "Kuranishi iteration"),
                           ("parallelisable", "construction for parallelisable models")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--order", type=int, required=True)
        if name == "kuranishi":
            p.add_argument("--directions", help="comma-separated direction indices (0-based)")
        _add_source(p)

    p = sub.add_parser("obstruction", help="obstruction classes and ker mu membership")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--directions")
    _add_source(p)

    p = sub.add_parser("extend", help="extend a Dolbeault class along a deformation")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--class", dest="cls", type=int, default=0)
    p.add_argument("--directions")
    _add_source(p)

    p = sub.add_parser("report", help="full analysis bundle")
    _add_source(p)

    p = sub.add_parser("validate", help="build the model only")
    p.add_argument("--dump", action="store_true", help="print the model description as JSON")
    _add_source(p)
    return parser


def load_model(args):
    if args.manifold and args.input:
        raise InputError("give either --manifold or --input, not both")
    if args.input:
        try:
            with open(args.input, encoding="utf-8") as fh:
                obj = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read {args.input}: {exc}") from None
        return build_model(ModelSpec.from_json(obj))
    if not args.manifold:
        raise InputError("a model source is required (--manifold or --input)")
    if args.manifold == "nakamura" and args.k == 0:
        raise InputError("--k must be a nonzero integer")
    if args.manifold == "abelian" and args.n < 0:
        raise InputError("--n must be non-negative")
    return builtin(args.manifold, k=args.k, n=args.n)


def _directions(text):
    if not text:
        return None
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"bad direction list {text!r}") from None


# --------------------------------------------------------------------------
# subcommands; each returns (payload for json, text lines)


def _pages(model, args):
    if args.p is not None or args.q is not None:
        if args.p is None or args.q is None:
            raise InputError("--p and --q go together")
        r = args.r or 1
        e = spectral.page(model, r, args.p, args.q, verify=args.verify)
        lines = [f"E_{r}^{{{args.p},{args.q}}}: dim {e.dim}"]
        for f in e.representatives:
            lines.append(f"  [{model.format(f)}]")
        if e.d_matrix is not None:
            lines.append(f"  d_{r} zero: {e.d_matrix.is_zero()}")
        return e.to_json(model), lines
    r_max = args.r or spectral.stable_page(model)
    table = spectral.page_table(model, r_max, verify=args.verify)
    if args.r:
        payload = [c for c in table.to_json() if c["r"] == args.r]
        text = table.to_text().split("\n\n")[args.r - 1]
        return payload, text.rstrip().splitlines()
    return table.to_json(), table.to_text().rstrip().splitlines()


def _cells(model, args):
    if args.p is not None and args.q is not None:
        return [(args.p, args.q)]
    return [(p, q) for p in range(model.n + 1) for q in range(model.n + 1)]


def _degeneration(model, args):
    out, lines = [], []
    for p, q in _cells(model, args):
        d = spectral.degeneration(model, p, q, verify=args.verify)
        f = spectral.filtration_report(model, p, q, verify=args.verify)
        out.append({"p": p, "q": q, "degeneration": d.to_json(), "filtration": f.to_json()})
        lines.append(f"({p},{q}) degeneration={d.verdict} filtration={f.verdict}")
    return out, lines


def _kodaira(model, args):
    rep = obstruction.check_refined_kodaira(model, args.p, args.q, verify=args.verify)
    lines = [f"refined Kodaira check at ({args.p},{args.q})"]
    for name, ok in rep.flags().items():
        lines.append(f"  {'ok  ' if ok else 'FAIL'} {name}")
    lines.append(f"  {rep.conclusion}")
    if rep.kernel is not None:
        lines.append(f"  dim ker mu = {rep.kernel.dim}")
    return rep.to_json(), lines


def _cy(model, args):
    v = obstruction.check_cy(model, verify=args.verify)
    lines = [v.verdict] + [f"  {'ok  ' if ok else 'FAIL'} {k}" for k, ok in v.flags.items()]
    return v.to_json(), lines


def _bott_chern(model, args):
    out, lines = [], []
    for p, q in _cells(model, args):
        bc = spectral.bott_chern(model, p, q)
        ae = spectral.aeppli(model, p, q)
        out.append({"p": p, "q": q, "bott_chern": bc.to_json(model), "aeppli": ae.to_json(model)})
        lines.append(f"({p},{q}) bott-chern={bc.dim} aeppli={ae.dim}")
    return out, lines


def _popovici(model, args):
    a1, a2 = spectral.popovici_maps(model, verify=args.verify)
    payload = {"A1": a1.to_json(), "A1_zero": a1.is_zero(), "A2": a2.to_json(), "A2_zero": a2.is_zero()}
    return payload, [f"A1 zero: {a1.is_zero()}", f"A2 zero: {a2.is_zero()}"]


def _state_lines(model, state):
    lines = [f"solved through order {state.solved_through} of {state.order}"]
    for k, v in sorted(state.status.items()):
        lines.append(f"  order {k}: {'solved' if v == 'solved' else 'obstructed'}")
    for idx, c in sorted(state.phi.coeffs.items()):
        lines.append(f"  phi[{deformation._key(idx)}] = {model.format(c)}")
    return lines


def _kuranishi(model, args):
    st = deformation.kuranishi(model, args.order, _directions(args.directions))
    res = deformation.mc_residual(model, st)
    payload = st.to_json(model)
    payload["residual_zero_through"] = _residual_ok(res, st)
    return payload, _state_lines(model, st)


def _residual_ok(res, state):
    bad = [sum(i) for i in res.coeffs]
    return min(bad) - 1 if bad else state.order


def _parallelisable(model, args):
    st = deformation.parallelisable_mc(model, args.order)
    res = deformation.mc_residual(model, st)
    verdict = "UNOBSTRUCTED" if res.is_zero() else "INCONCLUSIVE"
    payload = st.to_json(model)
    payload["verdict"] = verdict
    payload["residual_zero"] = res.is_zero()
    return payload, [verdict] + _state_lines(model, st)


def _obstruction(model, args):
    st = deformation.kuranishi(model, args.order, _directions(args.directions))
    n_eff = min(args.order, st.solved_through)
    obs = deformation.obstruction_class(model, st, n_eff)
    inker = deformation.obstruction_in_ker_mu(model, st, args.p, args.q, n_eff)
    payload = {"order": obs.order, "obstruction": obs.to_json(model), "in_ker_mu": inker,
               "p": args.p, "q": args.q}
    lines = [f"order {obs.order} obstruction vanishes: {obs.vanishes}",
             f"contained in ker mu_{{{args.p},{args.q}}}: {inker}"]
    return payload, lines


def _extend(model, args):
    entry = spectral.page(model, 1, args.p, args.q)
    if not 0 <= args.cls < entry.dim:
        raise InputError(f"class index {args.cls} out of range (dim {entry.dim})")
    alpha0 = entry.representatives[args.cls]
    st = deformation.kuranishi(model, args.order, _directions(args.directions))
    series = deformation.extend_form(model, alpha0, st, args.order, args.p, args.q)
    lines = [f"alpha0 = {model.format(alpha0)}"]
    for idx, c in sorted(series.coeffs.items()):
        lines.append(f"  alpha[{deformation._key(idx)}] = {model.format(c)}")
    lines.append("d(e^(i_phi) alpha) = 0 through the requested order")
    return {"alpha0": model.form_to_json(alpha0), "series": series.to_json(model)}, lines


def _report(model, args):
    out = {"model": model.name, "n": model.n}
    table = spectral.page_table(model, verify=args.verify)
    out["pages"] = table.to_json()
    out["de_rham"] = [spectral.de_rham(model, k) for k in range(2 * model.n + 1)]
    cells = [(p, q) for p in range(model.n + 1) for q in range(model.n + 1)]
    out["degeneration"] = {f"{p},{q}": spectral.degeneration(model, p, q).verdict for p, q in cells}
    out["filtration"] = {f"{p},{q}": spectral.filtration_condition(model, p, q) for p, q in cells}
    out["bott_chern"] = {f"{p},{q}": spectral.bott_chern(model, p, q).dim for p, q in cells}
    out["aeppli"] = {f"{p},{q}": spectral.aeppli(model, p, q).dim for p, q in cells}
    a1, a2 = spectral.popovici_maps(model)
    out["popovici"] = {"A1_zero": a1.is_zero(), "A2_zero": a2.is_zero()}
    out["cy_check"] = obstruction.check_cy(model).to_json()
    kod = {}
    for p, q in cells:
        rep = obstruction.check_refined_kodaira(model, p, q)
        kod[f"{p},{q}"] = {"passed": rep.passed,
                           "ker_mu_dim": None if rep.kernel is None else rep.kernel.dim}
    out["kodaira"] = kod
    try:
        st = deformation.kuranishi(model, 2)
        out["kuranishi"] = {"directions": len(st.directions), "solved_through": st.solved_through}
    except SpectraError as exc:
        out["kuranishi"] = {"error": exc.qualified_name}
    lines = [f"model {model.name} (n = {model.n})", table.to_text().rstrip(),
             f"de Rham: {out['de_rham']}", f"CY check: {out['cy_check']['verdict']}"]
    return out, lines


def _validate(model, args):
    payload = model.spec.to_json() if args.dump else {"model": model.name, "n": model.n, "valid": True}
    if args.dump:
        return payload, json.dumps(payload, sort_keys=True, indent=2).splitlines()
    return payload, [f"model {model.name} is valid (n = {model.n})"]


COMMANDS = {
    "pages": _pages,
    "degeneration": _degeneration,
    "kodaira": _kodaira,
    "cy-check": _cy,
    "bott-chern": _bott_chern,
    "popovici": _popovici,
    "kuranishi": _kuranishi,
    "parallelisable": _parallelisable,
    "obstruction": _obstruction,
    "extend": _extend,
    "report": _report,
    "validate": _validate,
}


def emit_report(results, fmt: str) -> bytes:
    """Canonical bytes for a result: sorted-key JSON, or the text lines."""
    payload, lines = results
    if fmt == "json":
        return (json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=True) + "\n").encode()
    return ("\n".join(lines) + "\n").encode()


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, (HypothesisFailed, NoTrivialCanonical, NoDomainPath, FrameNotHolomorphic)):
        return EXIT_HYPOTHESIS
    if isinstance(exc, (EquivalenceViolation, NotSolvable)):
        return EXIT_INTERNAL
    if isinstance(exc, (ModelError, LinalgError)):
        return EXIT_INPUT
    if isinstance(exc, DeformationError):
        return EXIT_HYPOTHESIS
    return EXIT_INTERNAL


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        model = load_model(args)
        results = COMMANDS[args.command](model, args)
    except InputError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except SpectraError as exc:
        print(f"error: {exc.qualified_name}: {exc}", file=stderr)
        return _exit_code(exc)
    data = emit_report(results, args.format)
    out = getattr(stdout, "buffer", None)
    if out is not None:
        out.write(data)
        out.flush()
    else:
        stdout.write(data.decode())
    return EXIT_OK


def main() -> None:
    sys.exit(run())
