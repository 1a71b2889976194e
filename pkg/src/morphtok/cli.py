"""Command line interface: presegment, train, encode, evaluate.

Exit codes: 0 on success, 2 for input or configuration errors, 3 for
internal failures.
"""

from __future__ import annotations

import argparse
import hashlib
import sys

from . import artifacts, evaluation, presegment, ulm, wordpiece
from .corpus import (
    DEFAULT_DELIMITER,
    escape_delimiter,
    load_corpus,
    load_gold_set,
    load_lexicon,
    load_suffixes,
    load_tagged_corpus,
    reservoir_indices,
    unescape_delimiter,
)
from .errors import LoaderError
from .evaluation import normalize_pieces
from .morphology import load_pos_mapping

PRETOK_MODES = artifacts.PRETOK_MODES

# train options that a config file may set; flags override the file
TRAIN_OPTION_TYPES = {
    "vocab_size": int,
    "min_pair_frequency": int,
    "shrinking_factor": float,
    "seed_size": int,
    "max_piece_length": int,
    "em_iterations_per_round": int,
    "seed_weight": float,
    "morph_delimiter": str,
    "sample_fraction": float,
    "seed": int,
    "lowercase": lambda v: _parse_bool(v),
    "exact_pruning": lambda v: _parse_bool(v),
}

TRAIN_DEFAULTS = {
    "vocab_size": 30000,
    "min_pair_frequency": 2,
    "shrinking_factor": 0.75,
    "seed_size": 1_000_000,
    "max_piece_length": 16,
    "em_iterations_per_round": 2,
    "seed_weight": 0.5,
    "morph_delimiter": DEFAULT_DELIMITER,
    "sample_fraction": 1.0,
    "seed": 0,
    "lowercase": False,
    "exact_pruning": False,
}


def _parse_bool(value: str) -> bool:
    low = value.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {value!r}")


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _load_config_file(path) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition(" ")
            key = key.strip().replace("-", "_")
            value = value.strip()
            if key not in TRAIN_OPTION_TYPES:
                raise LoaderError(f"{path}:{lineno}: unknown config key {key!r}")
            if not value:
                raise LoaderError(f"{path}:{lineno}: missing value for {key!r}")
            try:
                values[key] = TRAIN_OPTION_TYPES[key](value)
            except ValueError as exc:
                raise LoaderError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from None
    return values


def _resolve_options(args) -> dict:
    file_values = _load_config_file(args.config) if args.config else {}
    resolved = {}
    for key, default in TRAIN_DEFAULTS.items():
        flag_value = getattr(args, key)
        if flag_value is not None:
            resolved[key] = flag_value
        elif key in file_values:
            resolved[key] = file_values[key]
        else:
            resolved[key] = default
    return resolved


def _sample(sentences: list, fraction: float, seed: int) -> list:
    if fraction == 1.0:
        return sentences
    keep = reservoir_indices(len(sentences), fraction, seed)
    return [sentences[i] for i in keep]


def cmd_train(args) -> int:
    opt = _resolve_options(args)
    guidance = args.guidance
    delimiter = opt["morph_delimiter"]
    if len(delimiter) != 1:
        raise ValueError(f"morph delimiter must be a single character, got {delimiter!r}")

    lexicon = load_lexicon(args.lexicon, delimiter) if args.lexicon else None
    mapping = load_pos_mapping(args.pos_mapping) if args.pos_mapping else None
    suffixes = load_suffixes(args.suffixes) if args.suffixes else None

    if guidance in PRETOK_MODES and lexicon is None:
        raise ValueError(f"guidance {guidance!r} requires --lexicon")
    if guidance == "morphseed" and suffixes is None:
        raise ValueError("guidance 'morphseed' requires --suffixes")
    if suffixes is not None and guidance != "morphseed":
        _warn(f"--suffixes is ignored with guidance {guidance!r}")
        suffixes = None
    if lexicon is not None and lexicon.rejected:
        _warn(f"lexicon: skipped {len(lexicon.rejected)} malformed rows")

    preseg_stats = None
    if guidance == "morphpretok-contextual":
        if not args.tagged_corpus:
            raise ValueError("guidance 'morphpretok-contextual' requires --tagged-corpus")
        tagged = load_tagged_corpus(args.tagged_corpus, opt["lowercase"], delimiter)
        tagged.sentences = _sample(tagged.sentences, opt["sample_fraction"], opt["seed"])
        training = presegment.presegment_contextual(tagged, lexicon, mapping, delimiter)
        preseg_stats = training.stats
        corpus_path = args.tagged_corpus
        n_input_sentences = len(tagged.sentences)
    else:
        if not args.corpus:
            raise ValueError("--corpus is required")
        corpus = load_corpus(args.corpus, opt["lowercase"], delimiter)
        corpus.sentences = _sample(corpus.sentences, opt["sample_fraction"], opt["seed"])
        corpus_path = args.corpus
        n_input_sentences = len(corpus.sentences)
        if guidance == "morphpretok-acontextual":
            training = presegment.presegment_acontextual(corpus, lexicon, delimiter)
            preseg_stats = training.stats
        else:
            training = corpus

    seed_tuple = tuple(suffixes) if suffixes else None
    train_delim = delimiter if guidance in PRETOK_MODES else None
    if args.algorithm == "wordpiece":
        cfg = wordpiece.WpTrainerConfig(
            vocab_size=opt["vocab_size"],
            min_pair_frequency=opt["min_pair_frequency"],
            seed_suffixes=seed_tuple,
            morph_delimiter=train_delim,
        )
        vocab = wordpiece.wp_train(training, cfg)
        model = wordpiece.WordPieceTokenizer(vocab, cfg, guidance)
    else:
        cfg = ulm.UlmTrainerConfig(
            vocab_size=opt["vocab_size"],
            shrinking_factor=opt["shrinking_factor"],
            seed_size=opt["seed_size"],
            max_piece_length=opt["max_piece_length"],
            em_iterations_per_round=opt["em_iterations_per_round"],
            seed_suffixes=seed_tuple,
            seed_weight=opt["seed_weight"],
            morph_delimiter=train_delim,
            exact_pruning=opt["exact_pruning"],
        )
        vocab = ulm.ulm_train(training, cfg)
        model = ulm.UlmTokenizer(vocab, cfg, guidance)

    artifacts.save_tokenizer(model, args.output)

    manifest_path = args.manifest or f"{args.output}.manifest"
    lines = [
        f"artifact {args.output}",
        f"kind {args.algorithm}",
        f"guidance {guidance}",
        f"config_digest {artifacts.config_digest(model)}",
        f"corpus {corpus_path}",
        f"corpus_sha256 {_sha256(corpus_path)}",
        f"sentences {n_input_sentences}",
        f"words {training.n_words}",
        f"vocab_entries {len(vocab)}",
    ]
    for key in sorted(TRAIN_DEFAULTS):
        lines.append(f"option_{key} {opt[key]}")
    if args.lexicon:
        lines.append(f"lexicon {args.lexicon}")
        lines.append(f"lexicon_sha256 {_sha256(args.lexicon)}")
    if args.suffixes:
        lines.append(f"suffixes {args.suffixes}")
        lines.append(f"suffixes_sha256 {_sha256(args.suffixes)}")
    if preseg_stats is not None:
        lines.extend(preseg_stats.to_kv().rstrip("\n").splitlines())
    with open(manifest_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")

    print(f"trained {args.algorithm} ({guidance}): {len(vocab)} entries -> {args.output}")
    return 0


def cmd_presegment(args) -> int:
    delimiter = args.morph_delimiter or DEFAULT_DELIMITER
    lexicon = load_lexicon(args.lexicon, delimiter)
    if lexicon.rejected:
        _warn(f"lexicon: skipped {len(lexicon.rejected)} malformed rows")
    mapping = load_pos_mapping(args.pos_mapping) if args.pos_mapping else None
    if args.mode == "contextual":
        if not args.tagged_corpus:
            raise ValueError("contextual presegmentation requires --tagged-corpus")
        tagged = load_tagged_corpus(args.tagged_corpus, args.lowercase, delimiter)
        result = presegment.presegment_contextual(tagged, lexicon, mapping, delimiter)
    else:
        if not args.corpus:
            raise ValueError("acontextual presegmentation requires --corpus")
        corpus = load_corpus(args.corpus, args.lowercase, delimiter)
        result = presegment.presegment_acontextual(corpus, lexicon, delimiter)

    out = sys.stdout if args.output == "-" else open(args.output, "w", encoding="utf-8", newline="\n")
    try:
        for sentence in result.sentences:
            out.write(" ".join(sentence) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    if args.stats_output:
        with open(args.stats_output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(result.stats.to_kv())
    else:
        print(result.stats.format_text(), file=sys.stderr, end="")
    return 0


def cmd_encode(args) -> int:
    model = artifacts.load_tokenizer(args.artifact)
    lexicon = None
    if args.lexicon:
        lexicon = load_lexicon(args.lexicon, model.config.morph_delimiter or DEFAULT_DELIMITER)
    mapping = load_pos_mapping(args.pos_mapping) if args.pos_mapping else None
    encoder = artifacts.word_encoder(model, lexicon, mapping, on_warning=_warn)

    delimiter = model.config.morph_delimiter or DEFAULT_DELIMITER
    if args.tagged:
        tagged = load_tagged_corpus(args.input, args.lowercase, delimiter)
        sentences = tagged.sentences
    elif args.input == "-":
        sentences = []
        for line in sys.stdin:
            words = line.split()
            if words:
                if args.lowercase:
                    words = [w.lower() for w in words]
                sentences.append([(escape_delimiter(w, delimiter), None) for w in words])
    else:
        corpus = load_corpus(args.input, args.lowercase, delimiter)
        sentences = [[(w, None) for w in s] for s in corpus.sentences]

    out = sys.stdout if args.output == "-" else open(args.output, "w", encoding="utf-8", newline="\n")
    try:
        for sentence in sentences:
            per_word = []
            for word, pos in sentence:
                pieces = encoder(word, pos)
                if args.strip_markers:
                    text = unescape_delimiter("".join(normalize_pieces(pieces)), delimiter)
                    per_word.append([text])
                else:
                    per_word.append([unescape_delimiter(p, delimiter) for p in pieces])
            if args.granularity == "word":
                for pieces in per_word:
                    out.write(" ".join(pieces) + "\n")
            else:
                out.write(" ".join(p for pieces in per_word for p in pieces) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_evaluate(args) -> int:
    gold = load_gold_set(args.gold)
    if gold.rejected:
        _warn(f"gold set: skipped {len(gold.rejected)} malformed rows")
    mapping = load_pos_mapping(args.pos_mapping) if args.pos_mapping else None

    reports = []
    names = set()
    for path in args.artifact:
        model = artifacts.load_tokenizer(path)
        lexicon = None
        if args.lexicon:
            lexicon = load_lexicon(args.lexicon, model.config.morph_delimiter or DEFAULT_DELIMITER)
        encoder = artifacts.word_encoder(model, lexicon, mapping, on_warning=_warn)
        name = f"{artifacts.model_kind(model)}-{model.guidance}"
        if name in names:
            name = f"{name}:{path}"
        names.add(name)
        reports.append(
            evaluation.evaluate(
                encoder,
                gold,
                mode=args.mode,
                name=name,
                piece_overlap=args.piece_overlap,
            )
        )

    if args.format == "kv":
        text = "\n".join(r.to_kv() for r in reports)
    else:
        text = evaluation.format_comparison(reports, extended=args.extended)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="morphtok",
        description="Morphologically guided subword tokenization toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train a tokenizer and write an artifact")
    p_train.add_argument("--algorithm", required=True, choices=["wordpiece", "ulm"])
    p_train.add_argument(
        "--guidance",
        default="baseline",
        choices=list(artifacts.GUIDANCE_MODES),
    )
    p_train.add_argument("--corpus", help="raw training corpus, one sentence per line")
    p_train.add_argument("--tagged-corpus", help="word<TAB>UD_POS corpus (contextual guidance)")
    p_train.add_argument("--lexicon", help="morphological lexicon TSV")
    p_train.add_argument("--suffixes", help="suffix list for morphseed guidance")
    p_train.add_argument("--pos-mapping", help="override UD-to-analyzer POS mapping TSV")
    p_train.add_argument("--config", help="flat key/value config file; flags override it")
    p_train.add_argument("--output", required=True, help="artifact path to write")
    p_train.add_argument("--manifest", help="run manifest path (default: <output>.manifest)")
    p_train.add_argument("--vocab-size", type=int, default=None)
    p_train.add_argument("--min-pair-frequency", type=int, default=None)
    p_train.add_argument("--shrinking-factor", type=float, default=None)
    p_train.add_argument("--seed-size", type=int, default=None)
    p_train.add_argument("--max-piece-length", type=int, default=None)
    p_train.add_argument("--em-iterations-per-round", type=int, default=None)
    p_train.add_argument("--seed-weight", type=float, default=None)
    p_train.add_argument("--morph-delimiter", default=None)
    p_train.add_argument("--sample-fraction", type=float, default=None)
    p_train.add_argument("--seed", type=int, default=None, help="random seed for corpus sampling")
    p_train.add_argument("--lowercase", action=argparse.BooleanOptionalAction, default=None)
    p_train.add_argument("--exact-pruning", action=argparse.BooleanOptionalAction, default=None)
    p_train.set_defaults(func=cmd_train)

    p_preseg = sub.add_parser("presegment", help="write a morpheme-delimited corpus")
    p_preseg.add_argument("--mode", required=True, choices=["acontextual", "contextual"])
    p_preseg.add_argument("--corpus")
    p_preseg.add_argument("--tagged-corpus")
    p_preseg.add_argument("--lexicon", required=True)
    p_preseg.add_argument("--pos-mapping")
    p_preseg.add_argument("--morph-delimiter", default=None)
    p_preseg.add_argument("--lowercase", action="store_true")
    p_preseg.add_argument("--output", default="-")
    p_preseg.add_argument("--stats-output", help="write machine-readable stats here")
    p_preseg.set_defaults(func=cmd_presegment)

    p_enc = sub.add_parser("encode", help="encode text with a trained artifact")
    p_enc.add_argument("--artifact", required=True)
    p_enc.add_argument("--input", default="-", help="corpus file or - for stdin")
    p_enc.add_argument("--tagged", action="store_true", help="input is word<TAB>UD_POS")
    p_enc.add_argument("--lexicon", help="lexicon for encode-time presegmentation")
    p_enc.add_argument("--pos-mapping")
    p_enc.add_argument("--granularity", choices=["sentence", "word"], default="sentence")
    p_enc.add_argument("--strip-markers", action="store_true", help="reconstruct words instead")
    p_enc.add_argument("--lowercase", action="store_true")
    p_enc.add_argument("--output", default="-")
    p_enc.set_defaults(func=cmd_encode)

    p_eval = sub.add_parser("evaluate", help="score artifacts against a gold set")
    p_eval.add_argument("--artifact", action="append", required=True)
    p_eval.add_argument("--gold", required=True)
    p_eval.add_argument("--mode", choices=["acontextual", "contextual"], default="acontextual")
    p_eval.add_argument("--lexicon")
    p_eval.add_argument("--pos-mapping")
    p_eval.add_argument("--format", choices=["table", "kv"], default="table")
    p_eval.add_argument("--extended", action="store_true", help="include boundary metrics")
    p_eval.add_argument("--piece-overlap", action="store_true", help="piece multiset overlap instead of boundaries")
    p_eval.add_argument("--output", default="-")
    p_eval.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (LoaderError, FileNotFoundError, IsADirectoryError, NotADirectoryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - last-resort boundary for exit code 3
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
