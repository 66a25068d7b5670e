"""Command-line interface.

Five subcommands: `augment` (one method over one split), `compose`
(equal-proportion mixed set at a target ratio), `stats` (change rates),
`eval` (score a predictions file), `baseline` (lexicon LU on the original
and each perturbed test set).

Every output file gets a sibling `<name>.manifest.json` recording the
seed, the full flag configuration and its hash, and input/output
checksums, so any run can be reproduced exactly.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys

from . import __version__
from .aug_sd import sd_augment
from .aug_sr import SrConfig, sr_augment
from .aug_tp import HttpParaphraser, TemplateParaphraser, tp_augment
from .aug_wp import WpConfig, wp_augment
from .corpus import (Corpus, Dialog, DialogActItem, atomic_write_text,
                     extract_lu_examples, load_corpus, save_corpus)
from .errors import (ConfigError, CorpusFormatError, CorpusValidationError,
                     LaugError, NoCandidateError, ResourceError)
from .evalkit import (change_rates, format_change_table, overall_f1,
                      predict, train_lexicon_lu)
from .records import METHODS, record_to_dialog, records_from_corpus
from .resources import ResourceBundle, default_bundle


def _sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _sha256_file(path: str) -> str:
    with open(path, "rb") as fh:
        return _sha256_bytes(fh.read())


def task_rng(seed: int, method: str, dialog_id: str, turn_index: int,
             occurrence: int = 0) -> random.Random:
    """Independent substream per augmentation task.

    String seeding is hashed with SHA-512 by the random module, so the
    stream is stable across processes and PYTHONHASHSEED values.
    """
    return random.Random(
        f"{seed}:{method}:{dialog_id}:{turn_index}:{occurrence}")


def _write_manifest(out_path: str, command: str, args: argparse.Namespace,
                    inputs: list[str], outputs: list[str],
                    counts: dict) -> None:
    config = {k: v for k, v in sorted(vars(args).items())
              if k != "func" and not k.startswith("_")}
    blob = json.dumps(config, sort_keys=True)
    manifest = {
        "command": command,
        "version": __version__,
        "seed": config.get("seed"),
        "config": config,
        "config_hash": _sha256_bytes(blob.encode("utf-8")),
        "inputs": {p: _sha256_file(p) for p in inputs},
        "outputs": {p: _sha256_file(p) for p in outputs},
        "counts": counts,
    }
    atomic_write_text(out_path + ".manifest.json",
                      json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _bundle_from_args(args: argparse.Namespace) -> ResourceBundle:
    return default_bundle(
        lexicon_path=args.lexicon, thesaurus_path=args.thesaurus,
        stopwords_path=args.stopwords, confusions_path=args.confusions,
        disfluency_path=args.disfluency, pools_path=args.unseen_values)


def _make_generator(args: argparse.Namespace):
    endpoint = args.tp_endpoint or os.environ.get("LAUG_TP_ENDPOINT")
    if endpoint:
        return HttpParaphraser(endpoint)
    return TemplateParaphraser()


def _make_augmenter(method: str, args: argparse.Namespace,
                    bundle: ResourceBundle, ontology: dict[str, list[str]],
                    gen):
    """(dialog, turn_index, rng) -> AugmentationRecord or None."""
    if method == "wp":
        cfg = WpConfig.from_bundle(bundle, alpha=args.alpha,
                                   p_svr=args.p_svr)

        def run(d: Dialog, i: int, rng: random.Random):
            return wp_augment(d.turns[i], cfg, bundle.unseen_values, rng,
                              source=(d.id, i))
    elif method == "tp":
        def run(d: Dialog, i: int, rng: random.Random):
            if not d.turns[i].da:
                return None
            return tp_augment(d, i, gen, rng, ontology, k=args.k,
                              threshold=args.tp_threshold,
                              context_window=args.context_window)
    elif method == "sr":
        cfg = SrConfig(p_confuse=args.p_confuse, p_liaison=args.p_liaison,
                       redetect_threshold=args.sr_threshold)

        def run(d: Dialog, i: int, rng: random.Random):
            return sr_augment(d.turns[i], cfg, bundle.confusions, bundle,
                              rng, source=(d.id, i))
    elif method == "sd":
        def run(d: Dialog, i: int, rng: random.Random):
            return sd_augment(d.turns[i], ontology, bundle.disfluency, rng,
                              source=(d.id, i))
    else:
        raise ConfigError(f"unknown method {method!r}")

    def safe(d: Dialog, i: int, rng: random.Random):
        try:
            return run(d, i, rng)
        except NoCandidateError:
            return None

    return safe


def _context_window(d: Dialog, i: int, m: int) -> list[tuple[str, str]]:
    lo = max(0, i - m)
    return [(t.speaker, t.text) for t in d.turns[lo:i]]


def _augment_split(c: Corpus, method: str, split: str,
                   args: argparse.Namespace, bundle: ResourceBundle,
                   gen) -> tuple[list[Dialog], int]:
    """One record per user turn of the split; failures are skipped."""
    aug_fn = _make_augmenter(method, args, bundle, c.ontology, gen)
    out: list[Dialog] = []
    skipped = 0
    for d in c.split_dialogs(split):
        for i, _ in d.user_turns():
            rng = task_rng(args.seed, method, d.id, i)
            rec = aug_fn(d, i, rng)
            if rec is None:
                skipped += 1
                continue
            ctx = _context_window(d, i, args.context_window)
            out.append(record_to_dialog(rec, f"{d.id}-u{i}-{method}",
                                        split=split, context=ctx))
    return out, skipped


def cmd_augment(args: argparse.Namespace) -> None:
    c = load_corpus(args.inp, strict=args.strict)
    bundle = _bundle_from_args(args)
    gen = _make_generator(args)
    dialogs, skipped = _augment_split(c, args.method, args.split, args,
                                      bundle, gen)
    out_c = Corpus(dialogs=dialogs, ontology=dict(c.ontology))
    save_corpus(out_c, args.out)
    _write_manifest(args.out, "augment", args, [args.inp], [args.out],
                    {"records": len(dialogs), "skipped": skipped})
    print(f"augment {args.method}: {len(dialogs)} records "
          f"({skipped} skipped) -> {args.out}")


def split_quota(n: int, k: int) -> list[int]:
    """n items over k buckets, earlier buckets take the remainder."""
    base, extra = divmod(n, k)
    return [base + (1 if j < extra else 0) for j in range(k)]


def cmd_compose(args: argparse.Namespace) -> None:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in METHODS:
            raise ConfigError(f"unknown method {m!r} in --methods")
    if not methods:
        raise ConfigError("--methods must name at least one method")
    if args.ratio <= 0:
        raise ConfigError(f"--ratio must be > 0, got {args.ratio}")
    c = load_corpus(args.inp, strict=args.strict)
    train = c.split_dialogs("train")
    pool = [(d, i) for d in train for i, _ in d.user_turns()]
    if not pool:
        raise CorpusValidationError("train split has no user turns")

    n_target = round(args.ratio * len(pool))
    quotas = split_quota(n_target, len(methods))
    bundle = _bundle_from_args(args)
    gen = _make_generator(args)

    aug_dialogs: list[Dialog] = []
    counts: dict[str, int] = {}
    for method, quota in zip(methods, quotas):
        aug_fn = _make_augmenter(method, args, bundle, c.ontology, gen)
        sampler = random.Random(f"{args.seed}:compose:{method}")
        order = list(range(len(pool)))
        sampler.shuffle(order)
        picks = [pool[j] for j in order[:quota]]
        while len(picks) < quota:
            picks.append(pool[sampler.randrange(len(pool))])

        occurrence: dict[tuple[str, int], int] = {}
        made = 0
        attempts = 0
        queue = list(picks)
        while made < quota:
            if attempts > quota * 20 + 100:
                raise LaugError(
                    f"compose: method {method} cannot fill its quota "
                    f"({made}/{quota} records)")
            attempts += 1
            if queue:
                d, i = queue.pop(0)
            else:
                d, i = pool[sampler.randrange(len(pool))]
            n = occurrence.get((d.id, i), 0)
            occurrence[(d.id, i)] = n + 1
            rec = aug_fn(d, i, task_rng(args.seed, method, d.id, i, n))
            if rec is None:
                continue
            ctx = _context_window(d, i, args.context_window)
            rec_id = f"{d.id}-u{i}-{method}-{n}"
            aug_dialogs.append(record_to_dialog(rec, rec_id, split="train",
                                                context=ctx))
            made += 1
        counts[method] = made

    out_c = Corpus(dialogs=list(train) + aug_dialogs,
                   ontology=dict(c.ontology))
    save_corpus(out_c, args.out)
    _write_manifest(args.out, "compose", args, [args.inp], [args.out],
                    {"target": n_target, "per_method": counts,
                     "train_user_turns": len(pool)})
    print(f"compose ratio={args.ratio}: {sum(counts.values())} records "
          f"{counts} -> {args.out}")


def cmd_stats(args: argparse.Namespace) -> None:
    orig = load_corpus(args.inp, strict=args.strict)
    aug = load_corpus(args.aug, strict=args.strict)
    recs = records_from_corpus(aug)
    if not recs:
        raise CorpusValidationError(
            f"{args.aug} holds no augmentation records")
    by_method: dict[str, list] = {}
    for r in recs:
        by_method.setdefault(r.method, []).append(r)
    reports = {m: change_rates(orig, rs)
               for m, rs in sorted(by_method.items())}
    overall = change_rates(orig, recs)
    payload = {"overall": overall.as_dict(),
               "per_method": {m: rep.as_dict()
                              for m, rep in reports.items()},
               "records": len(recs)}
    atomic_write_text(args.out,
                      json.dumps(payload, indent=2, sort_keys=True) + "\n")
    _write_manifest(args.out, "stats", args, [args.inp, args.aug],
                    [args.out], {"records": len(recs)})
    print(format_change_table({**reports, "all": overall}))


def _parse_da_list(obj, where: str) -> tuple[DialogActItem, ...]:
    if not isinstance(obj, list):
        raise ConfigError(f"{where}: expected a list of DA items")
    items = []
    for n, raw in enumerate(obj):
        if not isinstance(raw, dict):
            raise ConfigError(f"{where}[{n}]: expected an object")
        items.append(DialogActItem(
            domain=str(raw.get("domain", "")),
            intent=str(raw.get("intent", "")),
            slot=str(raw.get("slot", "")),
            value=str(raw.get("value", ""))))
    return tuple(items)


def cmd_eval(args: argparse.Namespace) -> None:
    c = load_corpus(args.inp, strict=args.strict)
    examples = extract_lu_examples(c, m=args.context_window,
                                   split=args.split)
    with open(args.predictions, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    pred_lists = raw.get("predictions") if isinstance(raw, dict) else raw
    if not isinstance(pred_lists, list):
        raise ConfigError("predictions file: expected a list under "
                          "'predictions' or a top-level list")
    if len(pred_lists) != len(examples):
        raise ConfigError(
            f"predictions file has {len(pred_lists)} entries but the "
            f"{args.split} split yields {len(examples)} examples")
    pairs = [(_parse_da_list(p, f"predictions[{n}]"), ex.gold)
             for n, (p, ex) in enumerate(zip(pred_lists, examples))]
    rep = overall_f1(pairs)
    atomic_write_text(args.out, json.dumps({"f1": rep.as_dict()}, indent=2,
                                           sort_keys=True) + "\n")
    _write_manifest(args.out, "eval", args, [args.inp, args.predictions],
                    [args.out], {"examples": len(examples)})
    print(f"overall F1 {rep.f1:.4f} (P {rep.precision:.4f} "
          f"R {rep.recall:.4f}) on {len(examples)} examples")


def cmd_baseline(args: argparse.Namespace) -> None:
    c = load_corpus(args.inp, strict=args.strict)
    bundle = _bundle_from_args(args)
    gen = _make_generator(args)
    lu = train_lexicon_lu(c, stopwords=bundle.stopwords)

    def score(examples) -> dict:
        pairs = [(predict(lu, ex), ex.gold) for ex in examples]
        return overall_f1(pairs).as_dict()

    results = {"ori": score(extract_lu_examples(
        c, m=args.context_window, split=args.split))}
    counts = {"ori": len(extract_lu_examples(c, m=args.context_window,
                                             split=args.split))}
    for method in METHODS:
        dialogs, _ = _augment_split(c, method, args.split, args, bundle,
                                    gen)
        aug_c = Corpus(dialogs=dialogs, ontology=dict(c.ontology))
        examples = extract_lu_examples(aug_c, m=args.context_window)
        results[method] = score(examples)
        counts[method] = len(examples)
    atomic_write_text(args.out, json.dumps({"f1": results}, indent=2,
                                           sort_keys=True) + "\n")
    _write_manifest(args.out, "baseline", args, [args.inp], [args.out],
                    counts)
    for name in ["ori", *METHODS]:
        print(f"{name:<4} F1 {results[name]['f1']:.4f} "
              f"on {counts[name]} examples")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="inp", required=True,
                        help="input corpus JSON")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--strict", action="store_true",
                        help="fail on the first corpus validation issue "
                             "instead of quarantining the dialog")

    res = argparse.ArgumentParser(add_help=False)
    for flag in ("lexicon", "thesaurus", "stopwords", "confusions",
                 "disfluency", "unseen-values"):
        res.add_argument(f"--{flag}", dest=flag.replace("-", "_"),
                         default=None, help=f"override the bundled "
                                            f"{flag} file")

    knobs = argparse.ArgumentParser(add_help=False)
    knobs.add_argument("--alpha", type=float, default=0.1,
                       help="word-perturbation edit-budget rate")
    knobs.add_argument("--p-svr", type=float, default=0.2,
                       help="slot value replacement probability")
    knobs.add_argument("--p-confuse", type=float, default=0.08,
                       help="similar-sound substitution probability")
    knobs.add_argument("--p-liaison", type=float, default=0.05,
                       help="liaison merge probability")
    knobs.add_argument("--sr-threshold", type=float, default=0.7,
                       help="fuzzy threshold for value redetection")
    knobs.add_argument("--tp-threshold", type=float, default=0.9,
                       help="fuzzy threshold for paraphrase repair")
    knobs.add_argument("--k", type=int, default=5,
                       help="paraphrase candidates per turn")
    knobs.add_argument("--context-window", type=int, default=2,
                       help="preceding turns kept as context")
    knobs.add_argument("--tp-endpoint", default=None,
                       help="paraphrase generator URL (default: "
                            "LAUG_TP_ENDPOINT or the built-in templates)")

    p = argparse.ArgumentParser(
        prog="laug",
        description="Perturbation toolkit for annotated task-oriented "
                    "dialog corpora")
    p.add_argument("--version", action="version",
                   version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("augment", parents=[common, res, knobs],
                        help="perturb one split with one method")
    pa.add_argument("--out", required=True)
    pa.add_argument("--method", required=True, choices=METHODS)
    pa.add_argument("--split", default="train")
    pa.set_defaults(func=cmd_augment)

    pc = sub.add_parser("compose", parents=[common, res, knobs],
                        help="equal-proportion augmented training set")
    pc.add_argument("--out", required=True)
    pc.add_argument("--ratio", type=float, required=True,
                    help="augmented-to-original size ratio")
    pc.add_argument("--methods", default=",".join(METHODS),
                    help="comma-separated methods (default all four)")
    pc.set_defaults(func=cmd_compose)

    ps = sub.add_parser("stats", parents=[common],
                        help="change rates of an augmented corpus")
    ps.add_argument("--aug", required=True,
                    help="augmented corpus produced by augment/compose")
    ps.add_argument("--out", required=True)
    ps.set_defaults(func=cmd_stats)

    pe = sub.add_parser("eval", parents=[common],
                        help="score a predictions file against gold DAs")
    pe.add_argument("--predictions", required=True)
    pe.add_argument("--out", required=True)
    pe.add_argument("--split", default="test")
    pe.add_argument("--context-window", type=int, default=2)
    pe.set_defaults(func=cmd_eval)

    pb = sub.add_parser("baseline", parents=[common, res, knobs],
                        help="lexicon LU F1 on original and perturbed "
                             "test sets")
    pb.add_argument("--out", required=True)
    pb.add_argument("--split", default="test")
    pb.set_defaults(func=cmd_baseline)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (CorpusFormatError, CorpusValidationError, ConfigError,
            ResourceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LaugError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
