"""Command line front end.

Every command takes one or more task files (or directories of ``*.json``
tasks) and prints a result document::

    oracle-summ enumerate tasks/ --jobs 4
    oracle-summ export-lp task.json --lp task.lp
    oracle-summ evaluate task.json --system 0,3,5 --oracles enum.json

Exit codes: 0 success, 2 invalid input, 3 search/runtime error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__, kernels
from .counting import count_feasible
from .ilp import build_ilp, format_lp, gram_index
from .metrics import mean_pairwise_jaccard, multi_oracle_prf, pearson, random_single_oracle, spearman
from .rouge import EmptyReferenceError
from .search import enumerate_oracles, greedy_initial
from .tasks import SCHEMA_VERSION, TaskError, load_task, task_paths
from .textprep import read_stopwords

log = logging.getLogger("oracle_summ")

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME, EXIT_IO = 0, 2, 3, 4


def _score(num: int, den: int) -> dict:
    return {"score": num / den, "numerator": num, "denominator": den}


def _ids(s) -> list[int]:
    return sorted(int(i) for i in s)


def _options_overrides(opts: dict) -> dict:
    prep = {}
    if opts.get("stopwords"):
        prep["stopwords"] = sorted(read_stopwords(opts["stopwords"]))
    if opts.get("no_stem"):
        prep["stemming"] = False
    if opts.get("keep_stopwords"):
        prep["stopword_removal"] = False
    if opts.get("remove_stopwords"):
        prep["stopword_removal"] = True
    return {"n": opts.get("n"), "lmax": opts.get("lmax"), "prep_overrides": prep}


def _load(path, opts):
    task = load_task(path, **_options_overrides(opts))
    docset, bank = task.build()
    return task, docset, bank


def run_oracle(path, opts) -> dict:
    task, docset, bank = _load(path, opts)
    res = enumerate_oracles(bank, task.lmax, first_only=True, prune=not opts.get("no_prune"))
    return {"task": task.name, "sentences": len(docset), "n": task.n, "lmax": task.lmax,
            "tau": _score(res.numerator, res.denominator), "oracle": _ids(res.oracles[0]),
            "nodes_checked": res.nodes_checked, "greedy": _score(res.greedy_numerator, res.denominator),
            "_elapsed": res.elapsed}


def run_enumerate(path, opts) -> dict:
    task, docset, bank = _load(path, opts)
    res = enumerate_oracles(bank, task.lmax, prune=not opts.get("no_prune"),
                            minimal=bool(opts.get("minimal_oracles")))
    fam = [o for o in res.oracles if o]
    return {"task": task.name, "sentences": len(docset), "n": task.n, "lmax": task.lmax,
            "tau": _score(res.numerator, res.denominator), "oracles": [_ids(o) for o in res.oracles],
            "num_oracles": len(fam), "mean_pairwise_jaccard": mean_pairwise_jaccard(fam) if fam else None,
            "nodes_checked": res.nodes_checked, "greedy": _score(res.greedy_numerator, res.denominator),
            "_elapsed": res.elapsed}


def run_greedy(path, opts) -> dict:
    task, docset, bank = _load(path, opts)
    t0 = time.perf_counter()
    chosen, score = greedy_initial(bank, task.lmax)
    return {"task": task.name, "sentences": len(docset), "n": task.n, "lmax": task.lmax,
            "summary": _ids(chosen), "greedy": _score(int(score * bank.denominator), bank.denominator),
            "_elapsed": time.perf_counter() - t0}


def run_count(path, opts) -> dict:
    task, docset, bank = _load(path, opts)
    lens = docset.lengths(task.config.length)
    return {"task": task.name, "sentences": len(docset), "lmax": task.lmax,
            "feasible": str(count_feasible(lens, task.lmax)),
            "feasible_relevant": str(count_feasible(lens, task.lmax, filter=True, bank=bank))}


def run_export_lp(path, opts) -> dict:
    task, docset, bank = _load(path, opts)
    model = build_ilp(bank, task.lmax)
    text = format_lp(model)
    out = {"task": task.name, "sentences": len(docset), "lmax": task.lmax, "binaries": model.n_sentences,
           "integers": len(model.z), "objective_denominator": bank.denominator, "variables": gram_index(model)}
    lp_path = opts.get("lp")
    if lp_path:
        with open(lp_path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
        out["lp_file"] = str(lp_path)
    else:
        out["lp"] = text
    return out


def _oracle_family(path, opts, bank, lmax, task_name):
    src = opts.get("oracles")
    if not src:
        res = enumerate_oracles(bank, lmax, prune=not opts.get("no_prune"),
                                minimal=bool(opts.get("minimal_oracles")))
        return [o for o in res.oracles if o]
    doc = json.loads(Path(src).read_text(encoding="utf-8"))
    for r in doc.get("results", []):
        if r.get("task") == task_name and "oracles" in r:
            return [frozenset(o) for o in r["oracles"] if o]
    raise TaskError(f"{src}: no oracle family for task '{task_name}'")


def run_evaluate(path, opts) -> dict:
    task, docset, bank = _load(path, opts)
    system = opts.get("system")
    system = [int(x) for x in system.split(",") if x.strip()] if system else task.system
    if not system:
        raise TaskError(f"{path}: no system summary (use --system or the task's 'system' field)")
    if any(not 0 <= i < len(docset) for i in system):
        raise TaskError(f"{path}: system summary has sentence ids outside 0..{len(docset) - 1}")
    fam = _oracle_family(path, opts, bank, task.lmax, task.name)
    if not fam:
        raise TaskError(f"{path}: oracle family is empty (no sentence matches the references)")
    rep = multi_oracle_prf(system, fam)
    out = {"task": task.name, "system": _ids(system), "num_oracles": len(fam),
           "precision": rep.precision, "recall": rep.recall, "f_measure": rep.f_measure,
           "per_oracle": [{"oracle": _ids(o), "precision": p, "recall": r, "f_measure": f}
                          for o, (p, r, f) in zip(fam, rep.per_oracle)]}
    draws = opts.get("single_draws")
    if draws:
        out["single_oracle"] = random_single_oracle(system, fam, draws=draws, seed=opts.get("seed") or 0)
    return out


def run_bench(path, opts) -> dict:
    try:
        task, docset, bank = _load(path, opts)
    except (TaskError, OSError, EmptyReferenceError) as e:
        return {"task": Path(path).stem, "skipped": str(e)}
    lens = docset.lengths(task.config.length)
    t0 = time.perf_counter()
    pruned = enumerate_oracles(bank, task.lmax)
    t1 = time.perf_counter()
    full = enumerate_oracles(bank, task.lmax, prune=False)
    t2 = time.perf_counter()
    return {"task": task.name, "sentences": len(docset), "candidates": pruned.stats["candidates"],
            "lmax": task.lmax, "n": task.n,
            "feasible": str(count_feasible(lens, task.lmax)),
            "feasible_relevant": str(count_feasible(lens, task.lmax, filter=True, bank=bank)),
            "nodes_pruned": pruned.nodes_checked, "nodes_unpruned": full.nodes_checked,
            "num_oracles": len(pruned.oracles), "tau": _score(pruned.numerator, pruned.denominator),
            "_elapsed": {"pruned": t1 - t0, "unpruned": t2 - t1}}


def _median(xs):
    return statistics.median(xs) if xs else None


def summarize(command: str, results: list) -> dict:
    ok = [r for r in results if "skipped" not in r]
    s = {"tasks": len(results)}
    if command == "enumerate":
        counts = [r["num_oracles"] for r in ok]
        s.update(median_oracles=_median(counts),
                 rate_multiple=(sum(c > 1 for c in counts) / len(counts)) if counts else None,
                 median_tau=_median([r["tau"]["score"] for r in ok]))
    elif command == "oracle":
        s.update(median_tau=_median([r["tau"]["score"] for r in ok]))
    elif command == "greedy":
        s.update(median_score=_median([r["greedy"]["score"] for r in ok]))
    elif command == "count":
        s.update(median_feasible=str(statistics.median_low([int(r["feasible"]) for r in ok])) if ok else None)
    elif command == "evaluate":
        s.update(mean_precision=statistics.fmean(r["precision"] for r in ok) if ok else None,
                 mean_recall=statistics.fmean(r["recall"] for r in ok) if ok else None,
                 mean_f_measure=statistics.fmean(r["f_measure"] for r in ok) if ok else None)
    elif command == "bench":
        s.update(skipped=len(results) - len(ok),
                 median_feasible=str(statistics.median_low([int(r["feasible"]) for r in ok])) if ok else None,
                 median_nodes_pruned=_median([r["nodes_pruned"] for r in ok]),
                 median_nodes_unpruned=_median([r["nodes_unpruned"] for r in ok]),
                 median_reduction=_median([r["nodes_unpruned"] / r["nodes_pruned"]
                                           for r in ok if r["nodes_pruned"]]))
    return s


RUNNERS = {
    "oracle": run_oracle,
    "enumerate": run_enumerate,
    "greedy": run_greedy,
    "count": run_count,
    "export-lp": run_export_lp,
    "evaluate": run_evaluate,
    "bench": run_bench,
}


def _strip_timings(obj, keep: bool):
    if isinstance(obj, dict):
        out = {}
        for k, v in obj.items():
            if k.startswith("_"):
                if keep:
                    out[k[1:]] = v
            else:
                out[k] = _strip_timings(v, keep)
        return out
    if isinstance(obj, list):
        return [_strip_timings(v, keep) for v in obj]
    return obj


def _run_one(args):
    command, path, opts = args
    return RUNNERS[command](path, opts)


def run_command(command: str, inputs, opts: dict) -> dict:
    """Run ``command`` over task inputs; returns the result document."""
    paths = task_paths(inputs)
    if not paths:
        raise TaskError("no task files given")
    if command == "export-lp" and opts.get("lp") and len(paths) > 1:
        raise TaskError("--lp takes a single task")
    jobs = max(1, int(opts.get("jobs") or 1))
    work = [(command, str(p), opts) for p in paths]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, work))
    else:
        results = [_run_one(w) for w in work]
    doc = {"schema_version": SCHEMA_VERSION, "command": command, "results": results,
           "summary": summarize(command, results)}
    if opts.get("timings"):
        doc["backend"] = kernels.BACKEND
    return _strip_timings(doc, bool(opts.get("timings")))


def _text(doc: dict) -> str:
    lines = [f"command: {doc['command']}"]
    for r in doc["results"]:
        lines.append(f"[{r.get('task')}]")
        for k, v in r.items():
            if k in ("task", "lp", "variables", "per_oracle"):
                continue
            if isinstance(v, dict) and "score" in v:
                v = f"{v['score']:.6f} ({v['numerator']}/{v['denominator']})"
            lines.append(f"  {k}: {v}")
    lines.append("[summary]")
    lines.extend(f"  {k}: {v}" for k, v in doc["summary"].items())
    return "\n".join(lines) + "\n"


def render(doc: dict, fmt: str) -> str:
    if fmt == "text":
        return _text(doc)
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def correlate(path: str) -> dict:
    """Pearson and Spearman between the first two numeric columns of a CSV/TSV file."""
    import csv

    text = Path(path).read_text(encoding="utf-8")
    dialect = csv.Sniffer().sniff(text.splitlines()[0], delimiters=",\t ")
    rows = list(csv.reader(text.splitlines(), dialect))
    header = None
    try:
        float(rows[0][0])
    except ValueError:
        header, rows = rows[0], rows[1:]
    try:
        xs = [float(r[0]) for r in rows if r]
        ys = [float(r[1]) for r in rows if r]
    except (ValueError, IndexError):
        raise TaskError(f"{path}: expected two numeric columns") from None
    return {"schema_version": SCHEMA_VERSION, "command": "correlate", "columns": header[:2] if header else None,
            "count": len(xs), "pearson": pearson(xs, ys), "spearman": spearman(xs, ys)}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("tasks", nargs="+", help="task JSON files or directories of them")
    common.add_argument("--n", type=int, help="n-gram order (overrides the task)")
    common.add_argument("--lmax", type=int, help="word budget (overrides the task)")
    common.add_argument("--stopwords", help="stopword file, one word per line")
    common.add_argument("--no-stem", action="store_true", help="disable Porter stemming")
    sw = common.add_mutually_exclusive_group()
    sw.add_argument("--keep-stopwords", action="store_true", help="keep stopwords even for n=1")
    sw.add_argument("--remove-stopwords", action="store_true", help="remove stopwords even for n>1")
    common.add_argument("--minimal-oracles", action="store_true", help="report only inclusion-minimal oracles")
    common.add_argument("--no-prune", action="store_true", help="disable bound pruning")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized evaluation")
    common.add_argument("--jobs", type=int, default=1, help="parallel worker processes for batches")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("-o", "--output", help="write the result here instead of stdout")
    common.add_argument("--timings", action="store_true",
                        help="include wall-clock times (output is then not reproducible)")

    p = argparse.ArgumentParser(prog="oracle-summ", description="Extractive oracle summaries under ROUGE-N.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("oracle", parents=[common], help="one oracle summary per task")
    sub.add_parser("enumerate", parents=[common], help="all oracle summaries per task")
    sub.add_parser("greedy", parents=[common], help="greedy warm-start summary")
    sub.add_parser("count", parents=[common], help="number of length-feasible summaries")
    lp = sub.add_parser("export-lp", parents=[common], help="write the ILP in CPLEX LP format")
    lp.add_argument("--lp", help="LP output path (default: embed the text in the result)")
    ev = sub.add_parser("evaluate", parents=[common], help="P/R/F of a system summary against the oracles")
    ev.add_argument("--system", help="comma-separated sentence ids of the system summary")
    ev.add_argument("--oracles", help="result file of 'enumerate' to take oracle families from")
    ev.add_argument("--single-draws", type=int, default=0,
                    help="also score against N randomly drawn single oracles (bootstrap 95%% CI)")
    sub.add_parser("bench", parents=[common], help="feasible count vs nodes checked, with and without pruning")
    cor = sub.add_parser("correlate", help="Pearson and Spearman of two columns")
    cor.add_argument("table", help="CSV/TSV file with two numeric columns")
    cor.add_argument("-o", "--output")
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("ORACLE_SUMM_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    opts = vars(args)
    try:
        if args.command == "correlate":
            text = render(correlate(args.table), "json")
        else:
            text = render(run_command(args.command, args.tasks, opts), args.format)
        if opts.get("output"):
            with open(opts["output"], "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except (TaskError, EmptyReferenceError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
