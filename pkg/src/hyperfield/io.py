"""Reading and writing ``.hf`` tables, ``.phi`` maps and ``.sys`` systems.

``.hf`` is JSON with keys ``name``, ``elements`` (index 0 is zero), ``one``,
``mul`` (matrix of names) and ``add`` (matrix of name lists).  ``.phi`` has
one ``element: image-index`` line per nonzero element.  ``.sys`` starts with
``field: <builtin id or .hf path>`` and optionally ``phi: <.phi path>``,
followed by one ``coeff*var + ...`` equation per line.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from hyperfield.constructions import builtin, phi_tuple
from hyperfield.core import FiniteHyperfield, HyperfieldError
from hyperfield.linsolve.system import LinearSystem, parse_system


class FormatError(HyperfieldError):
    pass


# -- .hf -----------------------------------------------------------------------


def field_to_dict(F: FiniteHyperfield) -> dict:
    names = F.names
    return {
        "name": F.name,
        "elements": list(names),
        "one": names[F.one],
        "mul": [[names[int(F.mul_table[a, b])] for b in range(F.size)] for a in range(F.size)],
        "add": [[[names[x] for x in sorted(F.add_sets[a][b])] for b in range(F.size)] for a in range(F.size)],
    }


def field_from_dict(d: dict, strict: bool = True) -> FiniteHyperfield:
    """Build a table from its dict form.

    Empty or asymmetric sums are always rejected.  ``strict=False`` keeps
    tables whose negatives are not unique so they can still be diagnosed.
    """
    try:
        names = [str(x) for x in d["elements"]]
        index = {s: i for i, s in enumerate(names)}

        def ix(s):
            if s not in index:
                raise FormatError(f"unknown element {s!r}")
            return index[s]

        mul = [[ix(s) for s in row] for row in d["mul"]]
        add = [[[ix(s) for s in entry] for entry in row] for row in d["add"]]
        one = ix(d.get("one", names[1] if len(names) > 1 else ""))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed table: {exc}") from None
    n = len(names)
    if len(add) != n or any(len(row) != n for row in add):
        raise FormatError(f"add table must be {n}x{n}")
    for a in range(n):
        for b in range(n):
            if not add[a][b]:
                raise FormatError(f"empty sum {names[a]} + {names[b]}")
            if set(add[a][b]) != set(add[b][a]):
                raise FormatError(f"add table not symmetric at ({names[a]}, {names[b]})")
    return FiniteHyperfield(names, mul, add, one=one, name=str(d.get("name", "")), strict=strict)


def save_field(F: FiniteHyperfield, path) -> None:
    Path(path).write_text(json.dumps(field_to_dict(F), indent=1, ensure_ascii=False) + "\n")


def load_field(path, strict: bool = True) -> FiniteHyperfield:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from None
    return field_from_dict(d, strict=strict)


# -- .phi ----------------------------------------------------------------------


def save_phi(F: FiniteHyperfield, phi, path) -> None:
    phi = phi_tuple(F, phi)
    Path(path).write_text("".join(f"{F.names[x]}: {phi[x]}\n" for x in F.nonzero))


def parse_phi(text: str, F: FiniteHyperfield) -> tuple:
    out = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise FormatError(f"bad phi line {raw!r}")
        name, img = (s.strip() for s in line.rsplit(":", 1))
        try:
            out[F.index(name)] = int(img)
        except ValueError:
            raise FormatError(f"bad image index in {raw!r}") from None
    if 0 in out:
        raise FormatError("phi is defined on nonzero elements only")
    missing = [F.names[x] for x in F.nonzero if x not in out]
    if missing:
        raise FormatError(f"phi misses {', '.join(missing)}")
    return (-1,) + tuple(out[x] for x in F.nonzero)


def load_phi(path, F: FiniteHyperfield) -> tuple:
    return parse_phi(Path(path).read_text(), F)


# -- field references and .sys ---------------------------------------------------


def resolve_field(ref: str, base: Optional[Path] = None, strict: bool = True) -> tuple:
    """``(field, phi_or_None)`` for a builtin id or a path to a ``.hf`` file."""
    path = Path(ref)
    if base is not None and not path.is_absolute():
        path = base / path
    if ref.endswith(".hf") or path.exists():
        return load_field(path, strict=strict), None
    return builtin(ref)


@dataclass
class SystemFile:
    system: LinearSystem
    phi: Optional[tuple]
    field_ref: str


def parse_sys(text: str, base: Optional[Path] = None) -> SystemFile:
    header = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if ":" in line:
            key, val = (s.strip() for s in line.split(":", 1))
            if key.lower() in ("field", "phi"):
                header[key.lower()] = val
    if "field" not in header:
        raise FormatError("system file needs a 'field:' header line")
    F, phi = resolve_field(header["field"], base)
    if "phi" in header:
        p = Path(header["phi"])
        phi = load_phi(p if p.is_absolute() or base is None else base / p, F)
    return SystemFile(parse_system(text, F), phi, header["field"])


def load_sys(path) -> SystemFile:
    path = Path(path)
    return parse_sys(path.read_text(), base=path.parent)


def worked_example_text() -> str:
    from importlib.resources import files

    return files("hyperfield.data").joinpath("worked_example.sys").read_text()
