"""Robot model documents and the bundled desk-scale models.

A model document is a JSON object with a ``name`` and either an ``ets``
string or a ``dh`` table (converted on load), plus optional ``qlim``
metadata.  Joint limits are carried as data only; nothing enforces them.
"""

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import LimitError, SchemaError
from .ets import DhLink, DhTable, ETS, dh_to_ets, parse_ets

__all__ = ["RobotModel", "load_model", "bundled_models", "bundled_documents"]


@dataclass(frozen=True)
class RobotModel:
    name: str
    ets: ETS
    qlim: tuple | None = None

    @property
    def n(self):
        return self.ets.n


def _require_keys(obj, required, optional, where):
    missing = required - obj.keys()
    if missing:
        raise SchemaError(f"{where}: missing fields {sorted(missing)}")
    extra = obj.keys() - required - optional
    if extra:
        raise SchemaError(f"{where}: unknown fields {sorted(extra)}")


def _parse_dh(doc):
    _require_keys(doc, {"convention", "links"}, set(), "dh")
    convention = doc["convention"]
    if convention not in ("standard", "modified"):
        raise SchemaError(f"dh: bad convention {convention!r}")
    if not isinstance(doc["links"], list) or not doc["links"]:
        raise SchemaError("dh: links must be a non-empty array")
    links = []
    for k, row in enumerate(doc["links"]):
        if not isinstance(row, dict):
            raise SchemaError(f"dh link {k}: not an object")
        _require_keys(row, {"theta", "d", "a", "alpha"}, {"offset"}, f"dh link {k}")
        theta, d = row["theta"], row["d"]
        variable = [v == "q" for v in (theta, d)]
        if sum(variable) != 1:
            raise SchemaError(f"dh link {k}: exactly one of theta/d must be 'q'")
        kind = "revolute" if variable[0] else "prismatic"
        links.append(
            DhLink(
                joint_kind=kind,
                theta=0.0 if variable[0] else float(theta),
                d=0.0 if variable[1] else float(d),
                a=float(row["a"]),
                alpha=float(row["alpha"]),
                offset=float(row.get("offset", 0.0)),
            )
        )
    return DhTable(convention=convention, links=links)


def load_model(source):
    """Load and validate a robot model.

    ``source`` may be a dict (already-parsed document), a JSON string, or
    a filesystem path.  Raises SchemaError for structural problems,
    ParseError for a bad ETS string and LimitError for inconsistent qlim.
    """
    if isinstance(source, dict):
        doc = source
    else:
        text = str(source)
        if not text.lstrip().startswith("{"):
            text = Path(text).read_text()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise SchemaError(f"not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise SchemaError("model document must be a JSON object")
    if "ets" in doc and "dh" in doc:
        raise SchemaError("model must have exactly one of 'ets' or 'dh'")
    if "ets" in doc:
        _require_keys(doc, {"name", "ets"}, {"qlim"}, "model")
        ets = parse_ets(doc["ets"])
    elif "dh" in doc:
        _require_keys(doc, {"name", "dh"}, {"qlim"}, "model")
        ets = dh_to_ets(_parse_dh(doc["dh"]))
    else:
        raise SchemaError("model must have one of 'ets' or 'dh'")
    if not isinstance(doc["name"], str) or not doc["name"]:
        raise SchemaError("model name must be a non-empty string")

    qlim = None
    if doc.get("qlim") is not None:
        raw = doc["qlim"]
        if not isinstance(raw, list) or len(raw) != ets.n:
            raise LimitError(f"qlim must have {ets.n} [lo, hi] pairs")
        pairs = []
        for k, pair in enumerate(raw):
            if not isinstance(pair, list) or len(pair) != 2:
                raise LimitError(f"qlim[{k}] must be a [lo, hi] pair")
            lo, hi = float(pair[0]), float(pair[1])
            if not lo < hi:
                raise LimitError(f"qlim[{k}]: lo must be < hi")
            pairs.append((lo, hi))
        qlim = tuple(pairs)
    return RobotModel(name=doc["name"], ets=ets, qlim=qlim)


# Planar two-revolute arm with unit links.
_PLANAR2R = {
    "name": "planar2r",
    "ets": "rz(q0) tx(1) rz(q1) tx(1)",
}

# Two revolute and two prismatic joints, one flipped revolute.
_MIXED4 = {
    "name": "mixed4",
    "ets": "rz(q0) tx(0.4) tz(q1) ry(-q2) tx(0.2) ty(q3) rx(0.3)",
    "qlim": [[-3.0, 3.0], [-0.5, 0.5], [-3.0, 3.0], [-0.5, 0.5]],
}

# 7-revolute arm in the alternating tz/rz/ry form, link offsets from the
# vendor's modified-DH table; two wrist joints enter with a minus sign.
_PANDA7 = {
    "name": "panda7",
    "ets": (
        "tz(0.333) rz(q0) ry(q1) tz(0.316) rz(q2) tx(0.0825) ry(-q3) "
        "tx(-0.0825) tz(0.384) rz(q4) ry(-q5) tx(0.088) "
        "rx(3.1415926535897931) rz(q6) tz(0.107)"
    ),
    "qlim": [
        [-2.8973, 2.8973],
        [-1.7628, 1.7628],
        [-2.8973, 2.8973],
        [-3.0718, -0.0698],
        [-2.8973, 2.8973],
        [-0.0175, 3.7525],
        [-2.8973, 2.8973],
    ],
}

_DOCUMENTS = (_PLANAR2R, _MIXED4, _PANDA7)


def bundled_documents():
    """The raw model documents shipped with the package."""
    return tuple(dict(d) for d in _DOCUMENTS)


def bundled_models():
    """Load every bundled model: planar2r, mixed4 and panda7."""
    return tuple(load_model(doc) for doc in _DOCUMENTS)
