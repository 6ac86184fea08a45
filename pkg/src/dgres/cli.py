"""``dgres run`` and ``dgres verify``.

Exit codes: 0 all Pass, 1 some Fail, 2 some Undetermined (no Fail),
3 input error (including a tampered report), 4 Pass -> Fail under base change.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .checkers import FAIL, PASS, UNDETERMINED, CheckReport, combine, rederive, verify_generation_certificate
from .codec import digest
from .errors import DGResError, MalformedStep, TamperedReport
from .io import dumps, document, load_json, parse_document

EXIT_PASS, EXIT_FAIL, EXIT_UNDETERMINED, EXIT_INPUT, EXIT_ANOMALY = 0, 1, 2, 3, 4


def _anomalies(d):
    found = d.get("check") == "transport" and d.get("evidence", {}).get("anomaly", False)
    return found or any(_anomalies(c) for c in d.get("children", []))


def exit_code(reports):
    if any(_anomalies(r) for r in reports):
        return EXIT_ANOMALY
    v = combine(r["verdict"] for r in reports)
    return {PASS: EXIT_PASS, FAIL: EXIT_FAIL, UNDETERMINED: EXIT_UNDETERMINED}[v]


def select_tasks(ws, names):
    picked = []
    for k, t in enumerate(ws.tasks):
        if names is None or t.get("task") in names:
            picked.append((k, t))
    return picked


def run_workspace(ws, tasks=None, window=10, depth=24, size=2000, seed=0, order="given", jobs=1):
    """Run the selected tasks; returns the report dict (key order fixed)."""
    chosen = select_tasks(ws, tasks)
    if not chosen:
        raise DGResError("no task in the document matches the selection")
    win = (-window, window)
    built = [(k, raw, ws.task(raw, f"tasks[{k}]", order, win)) for k, raw in chosen]

    def one(item):
        return item[2].run(depth, size).to_dict()

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        reports = list(pool.map(one, built))
    results = [{"index": k, "task": raw, "report": rep} for (k, raw, _), rep in zip(built, reports)]
    options = {"window": window, "depth": depth, "size": size, "seed": seed, "order": order,
               "tasks": sorted(tasks) if tasks else None}
    body = {"options": options, "results": results}
    return {
        "format": "dgres-report",
        "version": __version__,
        "options": options,
        "document": document(ws),
        "results": results,
        "exit_code": exit_code(reports),
        "digest": digest(body),
    }


def text_summary(report):
    lines = []
    for r in report["results"]:
        rep = CheckReport.from_dict(r["report"])
        lines.append(f"[task {r['index']}] {r['task']['task']}")
        lines.append(rep.summary(1))
    lines.append(f"exit code {report['exit_code']}")
    return "\n".join(lines) + "\n"


# -- verification -------------------------------------------------------------------------------

def _walk_certificates(d, cert, extension):
    """Replace certificate leaves by a fresh replay of the embedded certificate."""
    if d.get("children"):
        kids = []
        for c in d["children"]:
            ext = extension if c.get("check") == "over-extension" else None
            kids.append(_walk_certificates(c, cert, ext if ext is not None else None)
                        if c.get("check") != "over-extension" or extension is None
                        else _walk_certificates(c, cert.extend(extension), None))
        return dict(d, children=kids)
    ev = d.get("evidence", {})
    if ev.get("rule") != "certificate":
        return d
    try:
        fresh = verify_generation_certificate(cert).evidence
    except MalformedStep as exc:
        fresh = {"malformed": exc.index}
    ev2 = {k: v for k, v in ev.items() if k not in ("malformed", "cone_cohomology")}
    ev2.update({k: v for k, v in fresh.items() if k in ("malformed", "cone_cohomology")})
    return dict(d, evidence=ev2)


def _certificate_arg(raw):
    args = raw.get("args", {})
    if "certificate" in args:
        return args["certificate"], None
    if "task" in args:
        name, _ = _certificate_arg(args["task"])
        return name, args.get("extension")
    return None, None


def _check_consistent(d):
    if rederive(d) != d["verdict"]:
        raise TamperedReport(f"verdict of {d['check']} does not follow from its evidence")
    for c in d.get("children", []):
        _check_consistent(c)


def verify_report(report):
    """Re-check a report from its own evidence; returns the exit code it supports."""
    for key in ("options", "document", "results", "exit_code", "digest"):
        if key not in report:
            raise TamperedReport(f"report lacks {key!r}")
    if digest({"options": report["options"], "results": report["results"]}) != report["digest"]:
        raise TamperedReport("evidence digest does not match")
    for r in report["results"]:
        _check_consistent(r["report"])
    if exit_code([r["report"] for r in report["results"]]) != report["exit_code"]:
        raise TamperedReport("exit code does not follow from the verdicts")
    ws = parse_document(dumps(report["document"]))
    final = []
    for r in report["results"]:
        d = r["report"]
        name, ext_name = _certificate_arg(r["task"])
        if name is not None:
            cert = ws.get("certificates", name)
            ext = ws.get("extensions", ext_name) if ext_name else None
            d = _walk_certificates(d, cert, ext)
            d = dict(d, verdict=rederive(d))
        final.append(d)
    return exit_code(final)


# -- entry point ----------------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="dgres", description="Exact checks for DG algebras and their resolutions.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run the tasks of a workspace document")
    r.add_argument("document")
    r.add_argument("--task", help="comma-separated task kinds to run (default: all)")
    r.add_argument("--window", type=int, default=10)
    r.add_argument("--depth", type=int, default=24)
    r.add_argument("--size", type=int, default=2000)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--order", choices=("given", "reversed"), default="given")
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--report", help="write the JSON report here")
    r.add_argument("--format", choices=("json", "text"), default="text")
    v = sub.add_parser("verify", help="re-verify a report without recomputing resolutions")
    v.add_argument("report")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            with open(args.document, encoding="utf-8") as fh:
                ws = parse_document(fh.read())
            tasks = set(args.task.split(",")) if args.task else None
            report = run_workspace(ws, tasks, args.window, args.depth, args.size, args.seed,
                                   args.order, args.jobs)
            text = dumps(report)
            if args.report:
                with open(args.report, "w", encoding="utf-8") as fh:
                    fh.write(text)
            sys.stdout.write(text if args.format == "json" else text_summary(report))
            return report["exit_code"]
        with open(args.report, encoding="utf-8") as fh:
            report = load_json(fh.read())
        code = verify_report(report)
        print(f"verified: exit code {code}")
        return code
    except (DGResError, OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
