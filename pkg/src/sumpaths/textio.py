"""Line-oriented text format for terms.

    sop 2->1
    scalar -1            # exponent e of sqrt2: the term is scaled by sqrt2^e
    vars y0 y1 y2
    phase 1/2*y0*y1 + 1/4*y2
    out y1 ^ y0*y2
    in y0;y2

``vars`` may be omitted, in which case the used variables are summed.
Lines starting with ``#`` are comments.
"""

from __future__ import annotations

import re

from .poly import BoolPoly, PhasePoly
from .term import SopTerm

_HEAD = re.compile(r"sop\s+(\d+)\s*->\s*(\d+)")


def dumps_sop(t: SopTerm) -> str:
    lines = [
        f"sop {t.n_in}->{t.n_out}",
        f"scalar {-t.scalar}",
        "vars" + "".join(f" y{v}" for v in t.vars),
        f"phase {t.phase}",
        "out " + ";".join(str(q) for q in t.outs),
        "in " + ";".join(str(q) for q in t.ins),
    ]
    return "\n".join(ln.rstrip() for ln in lines) + "\n"


def loads_sop(text: str) -> SopTerm:
    head = None
    scalar = 0
    vars_ = None
    phase = PhasePoly.zero()
    outs = ins = ()
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "sop":
            mt = _HEAD.fullmatch(line)
            if not mt:
                raise ValueError(f"bad header {line!r}")
            head = (int(mt.group(1)), int(mt.group(2)))
        elif key == "scalar":
            scalar = -int(rest)
        elif key == "vars":
            vars_ = tuple(int(v[1:]) for v in rest.split())
        elif key == "phase":
            phase = PhasePoly.parse(rest)
        elif key == "out":
            outs = tuple(BoolPoly.parse(q) for q in rest.split(";")) if rest else ()
        elif key == "in":
            ins = tuple(BoolPoly.parse(q) for q in rest.split(";")) if rest else ()
        else:
            raise ValueError(f"unknown line {line!r}")
    if head is None:
        raise ValueError("missing 'sop n->m' header")
    if head != (len(ins), len(outs)):
        raise ValueError(f"header says {head[0]}->{head[1]} but found {len(ins)} inputs and {len(outs)} outputs")
    if vars_ is None:
        used = set(phase.vars())
        for q in outs + ins:
            used |= q.vars()
        vars_ = tuple(sorted(used))
    return SopTerm(scalar, vars_, phase, outs, ins)
