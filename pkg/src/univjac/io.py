"""Reading and writing conditions, graphs and reports."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .domain import DomainConfig, domain_list
from .errors import ParseError, UnivJacError
from .graph import Graph
from .stability import UniversalStability


def dumps(data) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def read_json(source: str | Path):
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {source}: {exc.strerror or exc}") from None
    return parse_json(text, str(source))


def parse_json(text: str, where: str = "input"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{where}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def condition_from_data(data, where: str = "input") -> UniversalStability:
    """Parse a condition; malformed, duplicated or out-of-domain entries raise ParseError."""
    try:
        return UniversalStability.from_json(data)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ParseError(f"{where}: not a stability condition ({type(exc).__name__}: {exc})") from None


def load_condition(source: str | Path) -> UniversalStability:
    return condition_from_data(read_json(source), str(source))


def graph_from_data(data, where: str = "input") -> Graph:
    try:
        return Graph.from_json(data)
    except UnivJacError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{where}: not a graph ({type(exc).__name__}: {exc})") from None


def load_graph(source: str | Path) -> Graph:
    return graph_from_data(read_json(source), str(source))


def condition_table(m: UniversalStability) -> str:
    """CSV with one row per ``(e, h)`` and one column per marking set; blank outside the domain."""
    cfg = m.cfg
    triples = domain_list(DomainConfig(cfg.g, cfg.n, cfg.d, cfg.min_valence))
    rows = sorted({(t.e, t.h) for t in triples})
    sets = sorted({t.A for t in triples}, key=lambda a: (len(a), sorted(a)))
    by_key = {(t.e, t.h, t.A): m.values[t] for t in triples if t in m.values}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["e,h"] + ["{" + ",".join(map(str, sorted(a))) + "}" for a in sets])
    for e, h in rows:
        w.writerow([f"{e},{h}"] + [by_key.get((e, h, a), "") for a in sets])
    return buf.getvalue()


def write_text(text: str, out: str | Path | None, stream=None):
    """Write to ``out`` when given, else to ``stream``."""
    if out is None:
        stream.write(text)
    else:
        Path(out).write_text(text)
