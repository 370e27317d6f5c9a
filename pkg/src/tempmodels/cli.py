"""Command-line front end: ``tempmodels <command> [options] [sentence ...]``.

Sentences come from the positional arguments, or one per line from standard
input when none are given.  Each stage prints its artifact in the format of
the module that owns it, so stages can be chained through files.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import fol, perturb as perturb_mod, theory
from .errors import PipelineError, SyntaxParseError
from .model import parse_model, print_model
from .pipeline import Pipeline, PipelineConfig, summary

COMMANDS = ("parse", "represent", "translate", "build", "perturb", "pipeline")


def _common_options(top_level: bool) -> argparse.ArgumentParser:
    # Options are accepted before and after the command.  Only the top-level
    # parser sets defaults, otherwise the subcommand would overwrite them.
    p = argparse.ArgumentParser(add_help=False)

    def default(value):
        return value if top_level else argparse.SUPPRESS

    p.add_argument("--lexicon", metavar="FILE", default=default(None), help="lexicon file (default: bundled lexicon)")
    p.add_argument("--theory", metavar="FILE", action="append", default=default([]),
                   help="extra axiom file, may be repeated")
    p.add_argument("--disable-group", metavar="GROUP", action="append", default=default([]),
                   choices=[g for g in theory.GROUPS if g not in theory.REQUIRED_GROUPS],
                   help="drop an optional axiom group")
    p.add_argument("--max-size", type=int, default=default(8), metavar="N", help="largest domain tried by the builder")
    p.add_argument("--cap-timepoints", type=int, default=default(perturb_mod.DEFAULT_CAP), metavar="N",
                   help="refuse to perturb models with more time points than this")
    p.add_argument("--format", choices=("model", "summary"), default=default("model"), dest="output_format")
    p.add_argument("--dump-theory", action="store_true", default=default(False), help="print the active theory and exit")
    p.add_argument("-v", "--verbose", action="store_true", default=default(False))
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tempmodels", parents=[_common_options(True)],
                                     description="Temporal representations of Polish sentences and their models.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    helps = {
        "parse": "print the syntax tree",
        "represent": "print the higher-order representation",
        "translate": "print the first-order representation",
        "build": "print a minimal model",
        "perturb": "print the temporal variants of a model",
        "pipeline": "sentence to all temporal variants",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[_common_options(False)], help=helps[name])
        if name != "perturb":
            sp.add_argument("sentences", nargs="*", metavar="SENTENCE")
        if name in ("build", "perturb"):
            sp.add_argument("--goal", metavar="FILE", required=name == "perturb",
                            help="first-order goal file" + (" instead of a sentence" if name == "build" else ""))
        if name == "build":
            sp.add_argument("--all-minimal", action="store_true",
                            help="print every non-isomorphic minimal model")
        if name == "perturb":
            sp.add_argument("--model", metavar="FILE", required=True, help="initial model")
        if name in ("perturb", "pipeline"):
            sp.add_argument("--dump-candidates", metavar="FILE",
                            help="write every candidate, tagged with its succession, to FILE")
    return parser


def _config(args) -> PipelineConfig:
    groups = frozenset(g for g in theory.GROUPS if g not in args.disable_group)
    return PipelineConfig(
        lexicon_path=args.lexicon,
        theory=theory.TheoryConfig(groups=groups, extra_files=tuple(args.theory)),
        max_size=args.max_size,
        cap_timepoints=args.cap_timepoints,
        output_format=args.output_format,
    )


def _sentences(args, stdin: TextIO) -> list[str]:
    if args.sentences:
        return list(args.sentences)
    return [line.strip() for line in stdin if line.strip()]


def _read_goal(path: str) -> fol.Formula:
    entries = fol.parse_formula_file(Path(path).read_text())
    if not entries:
        raise SyntaxParseError(f"{path}: no formula found")
    return fol.conj(*[f for _, f in entries])


def _models_text(models, fmt: str, count: bool) -> str:
    if fmt == "summary":
        return (f"models: {len(models)}\n" if count else "") + summary(models)
    body = "\n".join(print_model(m) for m in models)
    return (f"models: {len(models)}\n" if count else "") + body


def _write_candidates(path: str, m0, cap: int):
    blocks = [f"% {s}\n{print_model(c)}" for s, c in perturb_mod.candidates(m0, cap)]
    Path(path).write_text("\n".join(blocks))


def _per_sentence(pipe: Pipeline, args, sentence: str) -> str:
    cmd, fmt = args.command, pipe.config.output_format
    if cmd == "parse":
        return f"{pipe.parse(sentence)}\n"
    if cmd == "represent":
        return f"{pipe.represent(sentence)}\n"
    if cmd == "translate":
        return f"{fol.print_formula(pipe.translate(sentence))}\n"
    if cmd == "build":
        goal = pipe.translate(sentence)
        background = pipe.background(sentence)
        if args.all_minimal:
            return _models_text(pipe.build_all(goal, background), fmt, True)
        return _models_text([pipe.build_goal(goal, background)], fmt, False)
    # pipeline
    goal = pipe.translate(sentence)
    m0 = pipe.build_goal(goal, pipe.background(sentence))
    if args.dump_candidates:
        _write_candidates(args.dump_candidates, m0, pipe.config.cap_timepoints)
    return _models_text(pipe.perturb(m0, goal), fmt, True)


def run(argv: Sequence[str] | None = None, stdin: TextIO | None = None,
        stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=stderr)
    try:
        pipe = Pipeline(_config(args))
        if args.dump_theory:
            stdout.write(theory.dump(pipe.axioms))
            return 0
        if args.command is None:
            parser.print_usage(stderr)
            return 2
        fmt = pipe.config.output_format
        if args.command == "perturb":
            m0 = parse_model(Path(args.model).read_text())
            goal = _read_goal(args.goal)
            if args.dump_candidates:
                _write_candidates(args.dump_candidates, m0, pipe.config.cap_timepoints)
            stdout.write(_models_text(pipe.perturb(m0, goal), fmt, True))
            return 0
        if args.command == "build" and args.goal:
            goal = _read_goal(args.goal)
            if args.all_minimal:
                stdout.write(_models_text(pipe.build_all(goal, [ax.formula for ax in pipe.axioms]), fmt, True))
            else:
                stdout.write(_models_text([pipe.build_goal(goal)], fmt, False))
            return 0
        sentences = _sentences(args, stdin)
        if not sentences:
            stderr.write("error: no sentence given\n")
            return 2
        outputs = []
        for sentence in sentences:
            header = f"% {sentence}\n" if len(sentences) > 1 else ""
            outputs.append(header + _per_sentence(pipe, args, sentence))
        stdout.write("\n".join(outputs))
        return 0
    except PipelineError as e:
        stderr.write(f"error [{e.stage}]: {e}\n")
        return e.exit_code
    except OSError as e:
        stderr.write(f"error [input]: {e}\n")
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
