"""``phantom-probe`` command line.

Exit codes: 0 success, 2 usage error, 3 bad or missing data, 4 endpoint failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import io
from .alignment import Outcome, Trial, compare_document
from .analytics import outcome_distribution, split_merge_summary, transition_matrix
from .masking import Blocklist, build_blocklist, export_logit_bias
from .probe import (
    DEFAULT_FRACTION,
    DEFAULT_MAX_WORDS,
    DEFAULT_MIN_WORDS,
    AnnotatedDoc,
    annotate,
    filter_corpus,
    load_stopwords,
)
from .remote import EndpointConfig, RemoteError, remote_generate
from .segmentation import SegmentationLimitError, count_segmentations, enumerate_segmentations, plausible_filter
from .simulator import BehaviorMixture, default_synonyms, generate_corpus, preset, synthetic_corpus
from .taxonomy import AffixLexicon, ErrorType, bitmask, classify_error, default_affixes, fired_predicates, histogram
from .vocab import EncodingError, VocabularyError, encode, load_vocab_merges, load_vocabulary, toy_vocabulary

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_TRANSPORT = 0, 2, 3, 4
TOY = "toy"

log = logging.getLogger("phantom_probe")


class DataError(Exception):
    pass


# -- shared option groups ------------------------------------------------------


def _add_vocab_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("vocabulary")
    g.add_argument("--vocab", default=TOY, help="vocabulary file, or 'toy' for the bundled toy vocabulary")
    g.add_argument("--merges", help="merges file (BPE) accompanying --vocab")
    g.add_argument("--mode", choices=("byte-level", "metaspace"), help="override the vocabulary mode")
    g.add_argument(
        "--normalize-whitespace",
        choices=("auto", "on", "off"),
        default="auto",
        help="treat a leading-space difference as equivalent on decode (default: on for toy/metaspace)",
    )


def _vocab(args):
    norm = {"auto": None, "on": True, "off": False}[args.normalize_whitespace]
    if args.vocab == TOY:
        return toy_vocabulary(True if norm is None else norm), None
    if args.merges:
        return load_vocab_merges(args.vocab, args.merges, args.mode or "byte-level", norm), args.vocab
    return load_vocabulary(args.vocab, args.mode, norm), args.vocab


def _vocab_config(args) -> dict:
    return {"vocab": args.vocab if args.vocab == TOY else None, "merges": args.merges,
            "mode": args.mode, "normalize_whitespace": args.normalize_whitespace}


def _manifest(path: Path, command: str, seed: int, config: dict, vocab_path=None) -> str:
    m = io.RunManifest.create(command, seed, config, vocab_path)
    io.write_json(path, m.to_record())
    return m.run_id


def _load_annotated(path) -> list[AnnotatedDoc]:
    return [AnnotatedDoc.from_record(r) for r in io.read_records(path, "annotated")]


# -- commands ------------------------------------------------------------------


def cmd_prepare(args) -> int:
    stop = load_stopwords(args.stopwords) if args.stopwords else None
    template = Path(args.template).read_text(encoding="utf-8") if args.template else None
    docs = filter_corpus(io.read_records(args.corpus, "corpus"), args.min_words, args.max_words)
    annotated, skipped = [], 0
    for d in docs:
        try:
            annotated.append(
                annotate(d["doc_id"], d["text"], args.fraction, stop, args.length_range, args.seed, template).to_record()
            )
        except ValueError as exc:
            skipped += 1
            log.warning("%s skipped: %s", d["doc_id"], exc)
    n = io.write_records(args.out, "annotated", annotated)
    config = {k: getattr(args, k) for k in ("fraction", "min_words", "max_words", "length_range")}
    config.update(corpus_sha256=io.file_sha256(args.corpus), stopwords=args.stopwords, template=args.template)
    _manifest(Path(f"{args.out}.manifest.json"), "prepare", args.seed, config)
    print(f"{n} documents annotated ({skipped} skipped) -> {args.out}")
    return EXIT_OK


def analyze_documents(vocab, docs, outputs: dict, affixes: AffixLexicon | None = None) -> list[Trial]:
    """Classify every target of ``docs`` against the matching output records."""
    affixes = affixes or default_affixes()
    trials = []
    for doc in docs:
        rec = outputs.get(doc.doc_id)
        if rec is None:
            log.warning("%s: no output record; all targets discarded", doc.doc_id)
            doc_trials = compare_document(vocab, doc, "")
            for t in doc_trials:
                t.outcome, t.output_surface, t.output_ids = Outcome.DISCARDED, "", ()
        else:
            doc_trials = compare_document(vocab, doc, rec["output_text"], rec.get("output_ids"))
        for t in doc_trials:
            if t.outcome is Outcome.DIFFERENT:
                fired = fired_predicates(vocab, t.input_ids, t.output_ids, t.input_word, affixes)
                t.error_type = classify_error(vocab, t.input_ids, t.output_ids, t.input_word, affixes).value
                t.fired = bitmask(fired)
        trials += doc_trials
    return trials


def cmd_analyze(args) -> int:
    vocab, vocab_path = _vocab(args)
    affixes = AffixLexicon.load(args.affixes) if args.affixes else default_affixes()
    docs = _load_annotated(args.annotated)
    outputs = {}
    for rec in io.read_records(args.outputs, "outputs"):
        outputs[rec["doc_id"]] = rec
    trials = analyze_documents(vocab, docs, outputs, affixes)

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    io.write_records(out / "trials.jsonl", "trials", [t.to_record() for t in trials])
    dist = outcome_distribution(trials)
    io.write_json(out / "distribution.json", dist.to_record())
    different = [t for t in trials if t.outcome is Outcome.DIFFERENT]
    io.write_json(out / "taxonomy.json", histogram(ErrorType(t.error_type) for t in different))
    matrix = transition_matrix(vocab, different, args.bounds)
    io.atomic_write_text(out / "matrix_counts.csv", matrix.to_csv("counts"))
    io.atomic_write_text(out / "matrix_mean_length.csv", matrix.to_csv("mean"))
    summary = None
    if matrix.total:
        summary = {k: float(v) for k, v in split_merge_summary(matrix)._asdict().items()}
    io.write_json(out / "split_merge.json", summary)
    config = {"annotated_sha256": io.file_sha256(args.annotated), "outputs_sha256": io.file_sha256(args.outputs),
              "bounds": args.bounds, "affixes": args.affixes, **_vocab_config(args)}
    _manifest(out / "manifest.json", "analyze", 0, config, vocab_path)

    fr = dist.fractions
    print(" ".join(f"{c.value}={'n/a' if fr[c] is None else f'{fr[c]:.4f}'}" for c in fr)
          + f" discarded={dist.discarded} trials={len(trials)}")
    return EXIT_OK


def cmd_mask(args) -> int:
    trials = [Trial.from_record(r) for r in io.read_records(args.trials, "trials")]
    blocklist = build_blocklist(t for t in trials if t.outcome is Outcome.DIFFERENT)
    io.write_json(args.out, blocklist.to_record())
    if args.logit_bias:
        bias = export_logit_bias(blocklist, args.sentinel)
        io.write_json(args.logit_bias, {str(k): v for k, v in bias.items()})
    print(f"{len(blocklist)} blocked ids -> {args.out}")
    return EXIT_OK


def _load_blocklist(path) -> Blocklist | None:
    if not path:
        return None
    try:
        return Blocklist.from_record(io.read_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"{path}: not a blocklist ({exc})") from None


def cmd_simulate(args) -> int:
    vocab, vocab_path = _vocab(args)
    if args.mixture:
        mixture = BehaviorMixture.from_record(io.read_json(args.mixture))
    else:
        mixture = preset(args.preset)
    synonyms = io.read_json(args.synonyms) if args.synonyms else default_synonyms()
    docs = _load_annotated(args.annotated)
    n_trials = args.n_trials if args.n_trials is not None else sum(len(d.targets) for d in docs)
    blocklist = _load_blocklist(args.blocklist)
    results = list(generate_corpus(vocab, docs, mixture, synonyms, args.seed, n_trials, blocklist))
    io.write_records(args.outputs, "outputs", [r.output_record() for r in results])
    io.write_records(args.labels, "labels", [lab.to_record() for r in results for lab in r.labels])
    if args.annotated_out:
        io.write_records(args.annotated_out, "annotated", [r.doc.to_record() for r in results])
    config = {"mixture": mixture.to_record(), "n_trials": n_trials,
              "annotated_sha256": io.file_sha256(args.annotated),
              "blocklist": sorted(blocklist.blocked_ids) if blocklist else None,
              "synonyms": args.synonyms, **_vocab_config(args)}
    _manifest(Path(f"{args.outputs}.manifest.json"), "simulate", args.seed, config, vocab_path)
    print(f"{len(results)} documents, {n_trials} labelled targets -> {args.outputs}")
    return EXIT_OK


def enumerate_report(vocab, word: str, limit: int, plausible: bool) -> dict:
    keep = plausible_filter(vocab) if plausible else None
    size = count_segmentations(vocab, word, keep)
    canonical = list(encode(vocab, word).ids)
    rec = {"surface": word, "canonical": canonical, "class_size": size, "plausible_only": plausible}
    try:
        cls = enumerate_segmentations(vocab, word, limit, keep) if size else None
        rec["members"] = sorted(list(s) for s in cls.id_sequences()) if cls else []
        rec["truncated"] = False
    except SegmentationLimitError:
        rec["members"], rec["truncated"] = [], True
    rec["member_tokens"] = [[vocab.surface(i).decode("utf-8", "replace") for i in m] for m in rec["members"]]
    return rec


def cmd_enumerate(args) -> int:
    vocab, _ = _vocab(args)
    records = [enumerate_report(vocab, w, args.limit, args.plausible) for w in args.words]
    text = "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records)
    if args.out:
        io.atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_synth(args) -> int:
    docs = synthetic_corpus(args.n_docs, args.seed)
    io.write_records(args.out, "corpus", docs)
    print(f"{len(docs)} synthetic documents -> {args.out}")
    return EXIT_OK


def cmd_remote(args) -> int:
    import httpx

    config = EndpointConfig(args.url, max_tokens=args.max_tokens, timeout=args.timeout,
                            attempts=args.attempts, backoff=args.backoff)
    bias = export_logit_bias(_load_blocklist(args.blocklist)) if args.blocklist else None
    docs = _load_annotated(args.annotated)
    records = []
    with httpx.Client(timeout=config.timeout) as client:
        for doc in docs:
            completion = remote_generate(config, doc.prompt, bias, client)
            rec = {"doc_id": doc.doc_id, "output_text": completion.text}
            if completion.token_ids is not None and not args.ignore_ids:
                rec["output_ids"] = list(completion.token_ids)
            records.append(rec)
    io.write_records(args.out, "outputs", records)
    print(f"{len(records)} completions -> {args.out}")
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phantom-probe", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="select and bracket target words in a corpus")
    p.add_argument("corpus")
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--fraction", type=float, default=DEFAULT_FRACTION)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-words", type=int, default=DEFAULT_MIN_WORDS)
    p.add_argument("--max-words", type=int, default=DEFAULT_MAX_WORDS)
    p.add_argument("--length-range", type=int, nargs=2, metavar=("MIN", "MAX"),
                   help="only words with MIN..MAX characters are eligible")
    p.add_argument("--stopwords", help="stopword list, one per line")
    p.add_argument("--template", help="prompt template containing {doc}")
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("analyze", help="classify model outputs against annotated inputs")
    p.add_argument("annotated")
    p.add_argument("outputs")
    p.add_argument("-o", "--out-dir", required=True)
    p.add_argument("--bounds", type=int, default=8, help="fragment counts tracked before the overflow bucket")
    p.add_argument("--affixes", help="affix list overriding the bundled one")
    _add_vocab_args(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("mask", help="build a token blocklist from Different trials")
    p.add_argument("trials")
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--logit-bias", help="also write an id -> bias map for remote endpoints")
    p.add_argument("--sentinel", type=float, default=-100.0)
    p.set_defaults(func=cmd_mask)

    p = sub.add_parser("simulate", help="generate labelled outputs with the simulator")
    p.add_argument("annotated")
    p.add_argument("--outputs", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--annotated-out", help="write the documents actually used (last one may be trimmed)")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--preset", default="balanced")
    src.add_argument("--mixture", help="JSON file with a behaviour mixture")
    p.add_argument("--synonyms", help="JSON word -> replacements map")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-trials", type=int)
    p.add_argument("--blocklist", help="blocklist file applied during decoding")
    _add_vocab_args(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("enumerate", help="report the segmentation class of words")
    p.add_argument("words", nargs="+")
    p.add_argument("--limit", type=int, default=10_000)
    p.add_argument("--plausible", action="store_true", help="exclude single-byte fallback tokens")
    p.add_argument("-o", "--out")
    _add_vocab_args(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("synth", help="write a synthetic corpus")
    p.add_argument("-n", "--n-docs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("remote", help="collect outputs from a completion endpoint")
    p.add_argument("annotated")
    p.add_argument("--url", required=True)
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--blocklist", help="send this blocklist as a logit-bias map")
    p.add_argument("--max-tokens", type=int, default=4096)
    p.add_argument("--timeout", type=float, default=60.0)
    p.add_argument("--attempts", type=int, default=3)
    p.add_argument("--backoff", type=float, default=0.5)
    p.add_argument("--ignore-ids", action="store_true", help="drop token ids returned by the endpoint")
    p.set_defaults(func=cmd_remote)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except RemoteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT
    except (io.SchemaError, DataError, VocabularyError, EncodingError, OSError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
