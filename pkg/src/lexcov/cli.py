"""Command-line front end: compile, apply, coverage, classify, diff, bench.

Exit codes: 0 success, 1 environment/IO problems, 2 invalid input.
Run manifests (run.json) honor SOURCE_DATE_EPOCH for reproducible trees.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import datetime
import glob
import hashlib
import json
import os
import random
import sys
import time
from pathlib import Path

from . import __version__
from .automaton import CaseFoldPolicy, Lexicon, compile_lexicon, load_lexicon
from .classify import (
    ClassifierConfig,
    build_unknown_records,
    category_histogram,
    classify,
    load_classifier_config,
    write_classification_tsv,
)
from .coverage import (
    build_word_list,
    compare_versions,
    coverage_from_counts,
    coverage_from_dico,
    coverage_from_lexicon,
    diff_dictionaries,
    mean_delta,
    render_coverage_text,
    render_delta_text,
    render_diff_text,
)
from .delaf import RoleTag, load_dict_file
from .dico import (
    DicoResult,
    apply_dictionaries,
    merge_results,
    read_annotations,
    write_outputs,
)
from .errors import LexcovError, MalformedEntry
from .preprocess import (
    load_abbreviation_list,
    load_replacement_table,
    apply_replacements,
    normalize_delimiters,
    segment_sentences,
    tokenize,
)

_POLICIES = {p.value: p for p in CaseFoldPolicy}


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    moment = (
        datetime.datetime.fromtimestamp(int(epoch), datetime.timezone.utc)
        if epoch
        else datetime.datetime.now(datetime.timezone.utc)
    )
    return moment.strftime("%Y-%m-%dT%H:%M:%SZ")


def _expand_corpus(patterns) -> list[str]:
    paths = []
    for pattern in patterns:
        hits = sorted(glob.glob(pattern))
        paths.extend(hits if hits else [pattern])
    return sorted(dict.fromkeys(paths))


def _preprocess_file(path, abbrevs, replacements):
    text = normalize_delimiters(Path(path).read_text(encoding="utf-8"))
    stream = tokenize(text, source_id=str(path))
    if replacements:
        apply_replacements(stream, replacements)
    return segment_sentences(stream, abbrevs)


# -- subcommands ------------------------------------------------------------

def cmd_compile(args) -> int:
    dicts = [load_dict_file(p, RoleTag(args.role)) for p in args.dicts]
    lex = compile_lexicon(dicts)
    lex.save(args.output)
    stats = {
        "entries": lex.stats.entry_count,
        "unique_forms": lex.stats.unique_form_count,
        "unique_forms_folded": lex.stats.unique_form_count_folded,
        "states": lex.stats.state_count,
        "transitions": lex.stats.transition_count,
        "analyses": lex.stats.analysis_count,
        "compounds": lex.stats.compound_count,
    }
    out = sys.stdout if args.json else sys.stderr
    print(json.dumps(stats, indent=2, sort_keys=True), file=out)
    return 0


def cmd_apply(args) -> int:
    lexicons = [load_lexicon(p) for p in args.lexicon]
    policy = _POLICIES[args.case_policy]
    corpus = _expand_corpus(args.corpus)
    abbrevs = load_abbreviation_list(args.abbrev) if args.abbrev else ()
    replacements = (
        load_replacement_table(args.replacements) if args.replacements else None
    )

    def run_one(path):
        stream = _preprocess_file(path, abbrevs, replacements)
        return apply_dictionaries(lexicons, stream, policy)

    if args.jobs > 1 and len(corpus) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=args.jobs) as pool:
            partials = list(pool.map(run_one, corpus))
    else:
        partials = [run_one(path) for path in corpus]
    result = DicoResult(policy=policy)
    for part in partials:  # corpus list is sorted: merge order is deterministic
        result = merge_results(result, part)

    outdir = Path(args.output)
    write_outputs(result, outdir)
    counts = result.status_counts()
    manifest = {
        "tool": "lexcov",
        "version": __version__,
        "command": ["apply"] + args.corpus,
        "created": _timestamp(),
        "corpus_id": ",".join(Path(p).name for p in corpus),
        "policy": policy.value,
        "inputs": [{"path": str(p), "sha256": _sha256(p)} for p in corpus],
        "lexicons": [{"path": str(p), "sha256": _sha256(p)} for p in args.lexicon],
        "configs": {
            "abbrev": _sha256(args.abbrev) if args.abbrev else None,
            "replacements": _sha256(args.replacements) if args.replacements else None,
        },
        "counts": {
            "word_tokens": result.word_token_count,
            **{status.value: n for status, n in counts.items()},
            "err_forms": len(result.err),
        },
    }
    (outdir / "run.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    return 0


def _report_from_run(run_dir, fold_mode):
    run_dir = Path(run_dir)
    manifest = json.loads((run_dir / "run.json").read_text(encoding="utf-8"))
    annotations = read_annotations(run_dir / "annotations.tsv")
    dico = DicoResult(policy=_POLICIES[manifest["policy"]], annotations=annotations)
    from .preprocess import Token, TokenKind, TokenStream

    stream = TokenStream(
        tokens=[
            Token(a.kind, a.text, (0, 0), a.sentence_index, a.sentence_initial)
            for a in annotations
        ]
    )
    word_list = build_word_list(stream, fold_mode)
    dict_id = ",".join(Path(l["path"]).name for l in manifest.get("lexicons", []))
    return coverage_from_dico(word_list, dico, manifest.get("corpus_id", ""), dict_id)


def cmd_coverage(args) -> int:
    fold_mode = "cased" if args.cased else "folded"
    reports = []
    deltas = []
    if args.counts:
        rows = json.loads(Path(args.counts).read_text(encoding="utf-8"))
        for row in rows:
            reports.append(
                coverage_from_counts(
                    row.get("corpus_id", ""),
                    row.get("dict_id", ""),
                    row["types_total"],
                    row["types_unknown"],
                    row["tokens_total"],
                    row["tokens_unknown"],
                )
            )
    elif args.run:
        for run_dir in args.run:
            reports.append(_report_from_run(run_dir, fold_mode))
    else:
        if not args.lexicon or not args.corpus:
            print("coverage: need --counts, --run, or --lexicon with corpus", file=sys.stderr)
            return 2
        lexicons = [load_lexicon(p) for p in args.lexicon]
        corpus = _expand_corpus(args.corpus)
        streams = [_preprocess_file(p, (), None) for p in corpus]
        word_list = build_word_list(streams, fold_mode)
        reports.append(
            coverage_from_lexicon(
                word_list,
                lexicons,
                _POLICIES[args.case_policy],
                corpus_id=",".join(Path(p).name for p in corpus),
                dict_id=",".join(Path(p).name for p in args.lexicon),
            )
        )

    by_corpus = {}
    for report in reports:
        by_corpus.setdefault(report.corpus_id, []).append(report)
    for group in by_corpus.values():
        for old, new in zip(group, group[1:]):
            deltas.append(compare_versions(old, new))

    if args.format == "json":
        payload = {"reports": [r.to_dict() for r in reports]}
        if deltas:
            payload["deltas"] = [d.to_dict() for d in deltas]
            payload["mean_delta_types_pp"] = str(
                mean_delta([d.delta_types_pp for d in deltas])
            )
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        blocks = [render_coverage_text(r, args.locale) for r in reports]
        blocks.extend(render_delta_text(d, args.locale) for d in deltas)
        if deltas:
            mean = mean_delta([d.delta_types_pp for d in deltas])
            text = f"{mean:.2f}".replace(".", ",") if args.locale == "pt-BR" else f"{mean:.2f}"
            blocks.append(f"mean types delta: {text} pp")
        print("\n\n".join(blocks))
    return 0


def cmd_classify(args) -> int:
    run_dir = Path(args.run_dir)
    annotations = read_annotations(run_dir / "annotations.tsv")
    dico = DicoResult(policy=CaseFoldPolicy.UNITEX_LIKE, annotations=annotations)
    records = build_unknown_records(dico)
    lex_new = load_lexicon(args.lexicon)
    lex_old = load_lexicon(args.old) if args.old else None
    config = load_classifier_config(args.config) if args.config else ClassifierConfig()
    classified = classify(records, lex_new, lex_old, config)
    out_path = Path(args.output) if args.output else run_dir / "classification.tsv"
    write_classification_tsv(classified, out_path)
    print(json.dumps(category_histogram(classified), indent=2, sort_keys=True))
    return 0


def cmd_diff(args) -> int:
    fold_mode = "cased" if args.cased else "folded"
    a = [load_dict_file(p) for p in args.a]
    b = [load_dict_file(p) for p in args.b]
    diff = diff_dictionaries(a, b, fold_mode)
    if args.format == "json":
        print(json.dumps(diff.to_dict(), indent=2, ensure_ascii=False))
    else:
        print(render_diff_text(diff))
    return 0


def cmd_bench(args) -> int:
    lex = load_lexicon(args.lexicon)
    policy = _POLICIES[args.case_policy]
    forms = lex.iter_forms()
    if not forms:
        print("bench: lexicon has no simple forms", file=sys.stderr)
        return 2
    rng = random.Random(42)
    probes = [rng.choice(forms) for _ in range(args.count)]
    start = time.perf_counter()
    for probe in probes:
        lex.lookup(probe, policy)
    elapsed = time.perf_counter() - start
    rate = args.count / elapsed if elapsed else float("inf")
    print(json.dumps({"lookups": args.count, "seconds": round(elapsed, 3),
                      "lookups_per_second": int(rate)}))
    return 0


# -- argument parsing -------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexcov",
        description="DELAF dictionary compiler and lexical-coverage toolkit",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile DELAF files into a lexicon binary")
    p.add_argument("dicts", nargs="+", metavar="DICT")
    p.add_argument("--role", choices=[r.value for r in RoleTag], default="general")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--json", action="store_true", help="print stats to stdout as JSON")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("apply", help="apply compiled lexicons to a corpus")
    p.add_argument("corpus", nargs="+", metavar="CORPUS", help="files or globs")
    p.add_argument("-l", "--lexicon", action="append", required=True)
    p.add_argument("-o", "--output", required=True, help="run output directory")
    p.add_argument("--case-policy", choices=sorted(_POLICIES), default="unitex_like")
    p.add_argument("--abbrev", help="abbreviation list for sentence segmentation")
    p.add_argument("--replacements", help="two-column TSV replacement table")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("coverage", help="coverage report / version delta")
    p.add_argument("corpus", nargs="*", metavar="CORPUS")
    p.add_argument("--counts", help="JSON counts file (replay mode)")
    p.add_argument("--run", action="append", help="completed apply run directory")
    p.add_argument("-l", "--lexicon", action="append")
    p.add_argument("--case-policy", choices=sorted(_POLICIES), default="unitex_like")
    p.add_argument("--cased", action="store_true", help="keep case when counting types")
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.add_argument("--locale", choices=["plain", "pt-BR"], default="plain")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("classify", help="categorize a run's unknown forms")
    p.add_argument("run_dir", metavar="RUN_DIR")
    p.add_argument("-l", "--lexicon", required=True, help="new-version lexicon")
    p.add_argument("--old", help="old-version lexicon")
    p.add_argument("--config", help="classifier config file")
    p.add_argument("-o", "--output", help="classification TSV path")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("diff", help="diff the form sets of two dictionary versions")
    p.add_argument("-a", nargs="+", required=True, metavar="DICT_A")
    p.add_argument("-b", nargs="+", required=True, metavar="DICT_B")
    p.add_argument("--cased", action="store_true")
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("bench", help="report lookup throughput")
    p.add_argument("-l", "--lexicon", required=True)
    p.add_argument("--count", type=int, default=100_000)
    p.add_argument("--case-policy", choices=sorted(_POLICIES), default="unitex_like")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MalformedEntry as exc:
        print(f"lexcov: malformed entry: {exc}", file=sys.stderr)
        return 2
    except (LexcovError, UnicodeDecodeError, json.JSONDecodeError, KeyError) as exc:
        print(f"lexcov: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"lexcov: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
