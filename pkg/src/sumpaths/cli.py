"""Command-line front end.

Every command prints a few ``#`` header lines recording the command and the
strategy configuration, then its result.  Term inputs may be SOP text files
(first line ``sop n->m``) or circuit files.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from . import __version__
from .circuit import CircuitError, build, build_composed, equiv, parse_circuit, random_circuit
from .control import ControlError, add_terms, concat_terms, ctrl_concat, ctrl_sum, ctrl_term, ctrl_term_hint
from .dyadic import LevelError, ascend, descend
from .generate import random_term
from .rewrite import StrategyConfig, simplify
from .semantics import NonDyadicError, VariableCapError, dumps_float, dumps_matrix, interp, interp_approx, interp_contract
from .term import SopTerm
from .textio import dumps_sop, loads_sop

EXIT_ERROR = 3


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _is_sop(text: str) -> bool:
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            return line.startswith("sop")
    return False


def load_term(path: str, qubits: Optional[int] = None, mode: str = "direct") -> SopTerm:
    text = _read(path)
    if _is_sop(text):
        return loads_sop(text)
    c = parse_circuit(text, qubits)
    return build_composed(c) if mode == "compose" else build(c)


def _config(args) -> StrategyConfig:
    return StrategyConfig.named(args.rules, args.budget)


def _header(args, extra: str = "") -> str:
    lines = [f"# sumpaths {__version__} {args.command}"]
    if hasattr(args, "rules"):
        lines.append(f"# {_config(args).describe()}")
    if extra:
        lines.append(f"# {extra}")
    return "\n".join(lines) + "\n"


def _emit_term(t: SopTerm, fmt: str, cap: Optional[int] = None) -> str:
    if fmt == "sop":
        return dumps_sop(t)
    if fmt == "matrix-exact":
        try:
            return dumps_matrix(interp(t, cap))
        except VariableCapError:
            return dumps_matrix(interp_contract(t))
    return dumps_float(interp_approx(t, cap))


def _write_trace(args, trace) -> None:
    if getattr(args, "trace", None):
        Path(args.trace).write_text(trace.dumps())


# ---------------------------------------------------------------------------
# commands


def cmd_build(args) -> int:
    t = load_term(args.circuit, args.qubits, args.mode)
    print(_header(args, f"mode={args.mode}") + _emit_term(t, args.format), end="")
    return 0


def cmd_equiv(args) -> int:
    a = parse_circuit(_read(args.a), args.qubits)
    b = parse_circuit(_read(args.b), args.qubits)
    v = equiv(a, b, _config(args), args.oracle_cap)
    _write_trace(args, v.trace)
    out = _header(args, f"oracle-cap={args.oracle_cap}")
    out += f"verdict {v.describe()}\n"
    if v.reduced is not None and args.show_term:
        out += dumps_sop(v.reduced)
    print(out, end="")
    return v.exit_code


def cmd_simplify(args) -> int:
    t = load_term(args.input, args.qubits)
    red, trace = simplify(t, _config(args))
    _write_trace(args, trace)
    out = _header(args)
    out += "".join(f"# {line}\n" for line in trace.lines())
    out += f"# steps={len(trace)} exhausted={int(trace.exhausted)} vars={len(red.vars)} monomials={len(red.phase)}\n"
    print(out + _emit_term(red, args.format), end="")
    return 0


def cmd_interp(args) -> int:
    t = load_term(args.input, args.qubits)
    fmt = "matrix-exact" if args.format == "sop" else args.format
    print(_header(args) + _emit_term(t, fmt, args.cap), end="")
    return 0


def cmd_ascend(args) -> int:
    t = load_term(args.input)
    out, cert = ascend(t, args.k)
    print(_header(args, f"k={args.k}") + cert.dumps() + _emit_term(out, args.format), end="")
    return 0


def cmd_descend(args) -> int:
    t = load_term(args.input)
    out = descend(t, args.k)
    print(_header(args, f"k={args.k}") + _emit_term(out, args.format), end="")
    return 0


def _parse_hint(text: str):
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError("--hint expects V1,V2,RHO,THETA")
    v1 = [int(c) for c in parts[0]]
    v2 = [int(c) for c in parts[1]]
    return v1, v2, int(parts[2]), Fraction(parts[3])


def cmd_control(args) -> int:
    t = load_term(args.input)
    if args.hint:
        v1, v2, rho, theta = _parse_hint(args.hint)
        c = ctrl_term_hint(t, v1, v2, rho, theta)
    else:
        c = ctrl_term(t, args.scalar_control)
    extra = f"construction={c.note} control=first input"
    print(_header(args, extra) + _emit_term(c.inner, args.format), end="")
    return 0


def _combine(args, pipeline, ctrl) -> int:
    t0, t1 = load_term(args.a), load_term(args.b)
    if args.controlled:
        c = ctrl(ctrl_term(t0), ctrl_term(t1))
        print(_header(args, f"construction={c.note}") + _emit_term(c.inner, args.format), end="")
        return 0
    out = pipeline(t0, t1, args.rules)
    print(_header(args) + _emit_term(out, args.format), end="")
    return 0


def cmd_sum(args) -> int:
    return _combine(args, add_terms, ctrl_sum)


def cmd_concat(args) -> int:
    return _combine(args, concat_terms, ctrl_concat)


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    head = _header(args, f"seed={args.seed}")
    if args.kind == "circuit":
        c = random_circuit(rng, args.qubits or 3, args.gates)
        print(head + c.dumps(), end="")
    else:
        t = random_term(rng, max_vars=args.max_vars, level=args.level, max_qubits=args.qubits or 2)
        print(head + dumps_sop(t), end="")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sumpaths", description="Sum-over-paths terms: build, rewrite, evaluate.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def strategy(sp):
        sp.add_argument("--rules", default="th-prime", choices=["th", "th-prime", "th-plus-witness"])
        sp.add_argument("--budget", type=int, default=None, help="maximum number of rewrite steps")

    def fmt(sp, default="sop"):
        sp.add_argument("--format", default=default, choices=["sop", "matrix-exact", "matrix-float"])

    sp = sub.add_parser("build", help="circuit file -> SOP term")
    sp.add_argument("circuit")
    sp.add_argument("--qubits", type=int)
    sp.add_argument("--mode", default="direct", choices=["direct", "compose"])
    fmt(sp)
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("equiv", help="decide equality of two circuits (exit 0 equal, 1 not equal, 2 inconclusive)")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--qubits", type=int)
    sp.add_argument("--oracle-cap", type=int, default=10, help="largest qubit count checked by the matrix oracle")
    sp.add_argument("--trace")
    sp.add_argument("--show-term", action="store_true", help="print the reduced term")
    strategy(sp)
    sp.set_defaults(func=cmd_equiv)

    sp = sub.add_parser("simplify", help="rewrite a term to normal form")
    sp.add_argument("input")
    sp.add_argument("--qubits", type=int)
    sp.add_argument("--trace")
    strategy(sp)
    fmt(sp)
    sp.set_defaults(func=cmd_simplify)

    sp = sub.add_parser("interp", help="matrix of a term")
    sp.add_argument("input")
    sp.add_argument("--qubits", type=int)
    sp.add_argument("--cap", type=int, default=None, help="variable cap for exhaustive evaluation")
    fmt(sp, "matrix-exact")
    sp.set_defaults(func=cmd_interp)

    for name, func, helptext in (
        ("ascend", cmd_ascend, "lower the phase level by one, adding a wire"),
        ("descend", cmd_descend, "undo ascend"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("input")
        sp.add_argument("-k", type=int, required=True)
        fmt(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("control", help="controlled version of a term (control = first input)")
    sp.add_argument("input")
    sp.add_argument("--hint", help="V1,V2,RHO,THETA: <V1|t|V2> = (1/sqrt2)^RHO e^(i THETA pi)")
    sp.add_argument("--scalar-control", default="standard", choices=["standard", "prime"])
    fmt(sp)
    sp.set_defaults(func=cmd_control)

    for name, func in (("sum", cmd_sum), ("concat", cmd_concat)):
        sp = sub.add_parser(name, help=f"{name} of two terms via controlled terms")
        sp.add_argument("a")
        sp.add_argument("b")
        sp.add_argument("--controlled", action="store_true", help="print the controlled term instead")
        strategy(sp)
        fmt(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("gen", help="random test input")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--kind", default="term", choices=["term", "circuit"])
    sp.add_argument("--qubits", type=int)
    sp.add_argument("--gates", type=int, default=10)
    sp.add_argument("--max-vars", type=int, default=5)
    sp.add_argument("--level", type=int, default=3)
    sp.set_defaults(func=cmd_gen)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CircuitError, ControlError, LevelError, NonDyadicError, VariableCapError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
