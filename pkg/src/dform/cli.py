"""The ``dform`` command line.

Exit status: 0 for a definite verdict or a completed table, 2 when a
budgeted search ends in Unknown, 1 for input errors, 3 when ``verify``
rejects a certificate, 4 if an internal consistency check fails.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .errors import CertificateError, DFormError, InputError
from .fields import DEFAULT_PREC, field_from_json
from .forms import form_text, make_form
from .isotropy import Verdict, check_anisotropy_tree, decide, verify_witness
from .patching import (
    RationalFunctionField,
    check_theorem21,
    decide_fqt,
    local_obstruction,
    model_from_json,
    threshold_report,
)
from .patching.functionfield import verify_fqt_witness
from .report import render
from .uinvariant import strong_u_report, u_diag_fq, u_diag_tower, verify_bounds

EXIT_OK, EXIT_INPUT, EXIT_UNKNOWN, EXIT_REJECTED, EXIT_INTERNAL = 0, 1, 2, 3, 4


def _load_json(text, what):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {what}: {exc.msg} at line {exc.lineno} column {exc.colno}") from exc


def _read_input(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def parse_field(obj):
    if isinstance(obj, dict) and obj.get("kind") == "rational_function":
        if "base" not in obj:
            raise InputError("field descriptor 'rational_function' is missing 'base'")
        return RationalFunctionField(field_from_json(obj["base"]), obj.get("var", "t"))
    return field_from_json(obj)


def _threads():
    try:
        return max(1, int(os.environ.get("DFORM_THREADS", "1")))
    except ValueError:
        return 1


def _parse_ints(text, flag):
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise InputError(f"{flag} expects integers, got {text!r}") from None


# --------------------------------------------------------------------------
# commands


def _form_from_args(args):
    if args.input:
        obj = _load_json(_read_input(args.input), args.input)
        field_obj, coeffs, degree = obj.get("field"), obj.get("form", obj.get("coeffs")), obj.get("degree")
    else:
        if args.field is None or args.form is None:
            raise InputError("decide needs --field and --form (or --input)")
        field_obj = _load_json(args.field, "--field")
        coeffs = _load_json(args.form, "--form")
        degree = args.degree
    if degree is None:
        raise InputError("missing degree (--degree)")
    if not isinstance(coeffs, list):
        raise InputError("--form must be a JSON list of coefficients")
    field = parse_field(field_obj)
    if args.prec is not None and hasattr(field, "prec"):
        field = parse_field({**field.to_json(), "prec": args.prec})
    return make_form(int(degree), [field.element_from_json(a) for a in coeffs], field)


def cmd_decide(args):
    form = _form_from_args(args)
    F = form.field
    prec = args.prec or getattr(F, "prec", DEFAULT_PREC)
    if isinstance(F, RationalFunctionField):
        cert = decide_fqt(form, args.budget)
    else:
        cert = decide(form, prec, args.seed)
    report = {
        "command": args.command,
        "field": F.to_json(),
        "field_label": F.label,
        "degree": form.degree,
        "form": [F.element_to_json(a) for a in form.coeffs],
        "form_text": form_text(form),
        "seed": args.seed,
        "certificate": cert.to_json(),
    }
    return report, EXIT_UNKNOWN if cert.verdict is Verdict.UNKNOWN else EXIT_OK


def _uinv_row(d, q=None, field=None):
    rep = u_diag_tower(d, field) if field is not None else u_diag_fq(d, q)
    row = rep.to_json()
    row["q"] = rep.field.label if field is not None else q
    row["extremal_text"] = form_text(rep.extremal_form) if rep.extremal_form else None
    return row


def cmd_uinv(args):
    if args.r is not None:
        if args.d is None:
            raise InputError("uinv needs --d")
        strong = strong_u_report(int(args.d), args.r, args.m or 0, args.k_point, args.all_extensions)
        return {"command": "uinv", "strong": strong}, EXIT_OK
    if args.d is None or (args.q is None and args.field is None):
        raise InputError("uinv needs --d and --q (or --field for a tower)")
    ds = _parse_ints(args.d, "--d")
    if args.field is not None:
        field = parse_field(_load_json(args.field, "--field"))
        jobs = [(d, None, field) for d in ds]
    else:
        jobs = [(d, q, None) for d in ds for q in _parse_ints(args.q, "--q")]
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        rows = list(pool.map(lambda job: _uinv_row(*job), jobs))
    return {"command": "uinv", "rows": rows}, EXIT_OK


def cmd_bounds(args):
    if args.d is None or args.q is None:
        raise InputError("bounds needs --d and --q")
    d, q = int(args.d), int(args.q)
    rep = u_diag_fq(d, q)
    report = {"command": "bounds", "d": d, "q": q, "d_star": rep.d_star, "u_diag": rep.u_diag,
              "bounds": [b.to_json() for b in verify_bounds(d, q, rep.u_diag)]}
    return report, EXIT_OK


def cmd_patch(args):
    if args.input:
        obj = _load_json(_read_input(args.input), args.input)
    elif args.form:
        obj = _load_json(args.form, "--form")
    else:
        raise InputError("patch-check needs --input or --form")
    if not isinstance(obj, dict):
        raise InputError("patch-check input must be a JSON object")
    if args.prec is not None:
        obj = {**obj, "prec": args.prec}
    model = model_from_json(obj)
    rep = check_theorem21(model, args.budget)
    report = {"command": "patch-check", **rep.to_json()}
    return report, EXIT_UNKNOWN if rep.status.startswith("inconclusive") else EXIT_OK


def cmd_thresholds(args):
    if args.d is None or args.n is None:
        raise InputError("thresholds needs --d and --n")
    rep = threshold_report(int(args.d), args.n, args.r, not args.k_infinite, args.hypothesis)
    return {"command": "thresholds", **rep}, EXIT_OK


def verify_report(obj):
    """Re-check the certificate embedded in a decide/witness report."""
    try:
        field = parse_field(obj["field"])
        form = make_form(int(obj["degree"]), [field.element_from_json(a) for a in obj["form"]], field)
        cert = obj["certificate"]
        verdict = cert["verdict"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"not a decide report: missing {exc}") from exc
    if verdict == "isotropic":
        x = [field.element_from_json(v) for v in cert["witness"]]
        if isinstance(field, RationalFunctionField):
            ok = verify_fqt_witness(form, x)
        else:
            ok = verify_witness(form, x, cert.get("precision"))
        return verdict, ok, "witness re-evaluated"
    if verdict == "anisotropic":
        tree = cert["tree"]
        if isinstance(field, RationalFunctionField):
            found = local_obstruction(form)
            ok = found is not None and tree.get("blocks", [{}])[0].get("j") == found[0].label(field.var)
            return verdict, ok, "local obstruction recomputed"
        return verdict, check_anisotropy_tree(form, tree), "proof tree re-derived"
    return verdict, False, "an unknown verdict carries no certificate"


def cmd_verify(args):
    if not args.input:
        raise InputError("verify needs --input (a decide report, or - for stdin)")
    obj = _load_json(_read_input(args.input), args.input)
    verdict, ok, detail = verify_report(obj)
    report = {"command": "verify", "verdict": verdict, "verified": bool(ok), "detail": detail}
    return report, EXIT_OK if ok else EXIT_REJECTED


COMMANDS = {
    "decide": cmd_decide,
    "witness": cmd_decide,
    "uinv": cmd_uinv,
    "bounds": cmd_bounds,
    "patch-check": cmd_patch,
    "thresholds": cmd_thresholds,
    "verify": cmd_verify,
}


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _precision(text):
    v = int(text)
    if v < 4:
        raise argparse.ArgumentTypeError("precision must be at least 4")
    return v


def build_parser():
    parser = argparse.ArgumentParser(prog="dform", description="Isotropy of diagonal forms of degree d.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="field descriptor (JSON)")
    common.add_argument("--form", help="coefficient list (JSON), or a patching descriptor")
    common.add_argument("--degree", type=int, help="degree d of the form")
    common.add_argument("--d", help="degree d (comma-separated list for uinv tables)")
    common.add_argument("--q", help="field order q (comma-separated list for uinv tables)")
    common.add_argument("--n", type=int, help="form dimension for thresholds")
    common.add_argument("--r", type=int, help="declared C_r exponent")
    common.add_argument("--m", type=int, help="number of Henselian levels")
    common.add_argument("--k-point", action="store_true", help="the curve has a K-point")
    common.add_argument("--all-extensions", action="store_true",
                        help="u_diag(d,k') = d^r for every finite extension k'")
    common.add_argument("--k-infinite", action="store_true", help="residue field is not finite")
    common.add_argument("--hypothesis", choices=["u_diag", "function_fields"], default="u_diag",
                        help="meaning of --r for thresholds")
    common.add_argument("--prec", type=_precision, help="witness precision N (>= 4)")
    common.add_argument("--budget", type=_positive, default=1, help="polynomial degree budget B")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--input", help="read the descriptor from a file (- for stdin)")
    common.add_argument("--output", help="write the report to a file")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        report, status = COMMANDS[args.command](args)
    except CertificateError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (DFormError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = render(report, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
