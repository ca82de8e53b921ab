"""Deterministic JSON and plain-text rendering of command reports.

Every command builds a JSON-ready dict first; the text view is derived
from that dict alone, so both views always carry the same verdicts.
"""

import json


def to_json_text(report):
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render(report, fmt="json"):
    if fmt == "json":
        return to_json_text(report)
    renderer = _TEXT.get(report.get("command"), _render_generic)
    return "\n".join(renderer(report)) + "\n"


# --------------------------------------------------------------------------


def tree_lines(node, indent=0):
    pad = " " * indent
    kind = node["kind"]
    what = "exhausted" if kind == "exhausted" else node.get("label") or kind
    lines = [f"{pad}{node['text']} over {node['field']}: {what}"]
    for block in node.get("blocks", []):
        j = block["j"]
        j = ",".join(map(str, j)) if isinstance(j, list) else j
        lines.append(f"{pad}  j={j}, slots {block['slots']}")
        lines.extend(tree_lines(block["proof"], indent + 4))
    return lines


def field_variables(field):
    """Series variables from the top of a field descriptor down."""
    out = []
    while isinstance(field, dict) and field.get("kind") == "laurent":
        out.append(field.get("var", "t"))
        field = field.get("residue")
    return out


def _witness_text(w, variables=()):
    if isinstance(w, dict) and "num" in w:
        den = w.get("den", [1])
        return f"{w['num']}" if den == [1] else f"{w['num']}/{den}"
    if isinstance(w, dict) and variables:
        var, rest = variables[0], variables[1:]
        parts = []
        for k in sorted(w, key=int):
            c = _witness_text(w[k], rest)
            if any(ch in c for ch in "+ ") or c.startswith("-") and int(k):
                c = f"({c})"
            k = int(k)
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            parts.append(c if not mono else (mono if c == "1" else f"{c}{mono}"))
        return " + ".join(parts) or "0"
    return str(w)


def certificate_lines(cert, variables=()):
    lines = [f"verdict: {cert['verdict']}"]
    if cert["verdict"] == "isotropic":
        lines.append("witness: (" + ", ".join(_witness_text(w, variables) for w in cert["witness"]) + ")")
        if cert.get("precision") is not None:
            lines.append(f"precision: {cert['precision']}")
        if cert.get("blocks"):
            lines.append(f"residue blocks: {cert['blocks']}")
    elif cert["verdict"] == "anisotropic":
        lines.append("proof:")
        lines.extend(tree_lines(cert["tree"], 2))
    else:
        lines.append(f"budget: {cert.get('budget_note', '')}")
    if cert.get("note"):
        lines.append(f"note: {cert['note']}")
    return lines


def _render_decide(r):
    lines = [f"form: {r['form_text']} over {r['field_label']} (d={r['degree']})"]
    return lines + certificate_lines(r["certificate"], field_variables(r["field"]))


def _table(header, rows):
    cols = list(zip(*([header] + rows))) if rows else [[h] for h in header]
    widths = [max(len(str(c)) for c in col) for col in cols]

    def fmt(row):
        return "  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip()

    return [fmt(header), fmt(["-" * w for w in widths])] + [fmt(row) for row in rows]


def _bounds_status(bounds):
    app = [b for b in bounds if b["applicable"]]
    if not app:
        return "none applicable"
    bad = [b["name"] for b in app if not b["satisfied"]]
    return "FAIL: " + ", ".join(bad) if bad else f"ok ({len(app)} checked)"


def _render_uinv(r):
    if "strong" in r:
        s = r["strong"]
        lines = [f"{s['status']}: {s['hypothesis']}", f"d={s['d']}, r={s['r']}, m={s['m']}"]
        lines += [f"  {c['claim']}  [{c['rule']}]" for c in s["claims"]]
        return lines
    rows = [[row["degree"], row["q"], row.get("d_star", ""), row["u_diag"],
             row["extremal_text"] or "-", _bounds_status(row["bounds"])] for row in r["rows"]]
    return _table(["d", "q", "d*", "u_diag", "extremal form", "bounds"], rows)


def _render_bounds(r):
    lines = [f"d={r['d']}, q={r['q']}, d*={r['d_star']}, u_diag={r['u_diag']}"]
    app = [b for b in r["bounds"] if b["applicable"]]
    if not app:
        lines.append("bounds: none applicable")
    else:
        lines.append("bounds:")
        for b in app:
            mark = "satisfied" if b["satisfied"] else "VIOLATED"
            lines.append(f"  {b['name']}: {b['statement']} -> {mark} ({b['detail']})")
    skipped = [b for b in r["bounds"] if not b["applicable"]]
    if skipped:
        lines.append("not applicable:")
        lines.extend(f"  {b['name']}: {b['detail']}" for b in skipped)
    return lines


def _render_patch(r):
    m = r["model"]
    lines = [f"p={m['p']}, d={m['degree']}, S={{{', '.join(m['S'])}}}, U={m['U']}",
             f"status: {r['status']}"]
    if r["hypothesis"]:
        lines.append("hypothesis:")
        for h in r["hypothesis"]:
            extra = f" ({h['reason']})" if "reason" in h else ""
            lines.append(f"  {h['valuation']}: {h['verdict']}{extra}")
    rows = [[n["node"], n["verdict"], n.get("note", "")] for n in r["nodes"]]
    return lines + _table(["node", "verdict", "note"], rows)


def _render_thresholds(r):
    declared = "not declared" if r["r"] is None else r["r"]
    lines = [f"d={r['d']}, n={r['n']}, r={declared}"]
    for rule in r["rules"]:
        state = "applies" if rule["applies"] else ("hypothesis not declared" if not rule["declared"]
                                                   else "does not hold")
        lines.append(f"  {rule['rule']}: {rule['inequality']} -> {state}")
    lines.append(f"conclusion: {r['conclusion']}")
    return lines


def _render_verify(r):
    lines = [f"verdict: {r['verdict']}", f"verified: {'yes' if r['verified'] else 'no'}"]
    if r.get("detail"):
        lines.append(f"detail: {r['detail']}")
    return lines


def _render_generic(r):
    return [to_json_text(r).rstrip()]


_TEXT = {
    "decide": _render_decide,
    "witness": _render_decide,
    "uinv": _render_uinv,
    "bounds": _render_bounds,
    "patch-check": _render_patch,
    "thresholds": _render_thresholds,
    "verify": _render_verify,
}
