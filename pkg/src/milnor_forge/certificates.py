"""Canonical JSON envelopes.

Canonical form: sorted keys, two-space indent, ASCII only, newline at the
end, and no floats anywhere (fractions travel as strings).  The determinism
hash is sha256 over the canonical text of everything except the hash itself.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

SCHEMA_VERSION = 1


def _check_no_floats(obj, path="$"):
    if isinstance(obj, float):
        raise TypeError(f"float at {path}")
    if isinstance(obj, dict):
        for k, v in obj.items():
            if not isinstance(k, str):
                raise TypeError(f"non-string key at {path}")
            _check_no_floats(v, f"{path}.{k}")
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _check_no_floats(v, f"{path}[{i}]")


def _default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if hasattr(obj, "item"):  # numpy scalar
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def normalize(obj):
    """Round-trip through JSON so the tree holds only plain types."""
    return json.loads(json.dumps(obj, default=_default))


def canonical_json(obj) -> str:
    obj = normalize(obj)
    _check_no_floats(obj)
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def determinism_hash(body: dict) -> str:
    return hashlib.sha256(canonical_json(body).encode("ascii")).hexdigest()


def envelope(command: str, params: dict, result: dict) -> dict:
    body = {"schema_version": SCHEMA_VERSION, "command": command,
            "params": normalize(params), "result": normalize(result)}
    body["determinism_hash"] = determinism_hash(body)
    return body


def verify_envelope(env: dict) -> bool:
    body = {k: v for k, v in env.items() if k != "determinism_hash"}
    return env.get("determinism_hash") == determinism_hash(body)


def json_diff(a, b, path="$", limit=20) -> list[dict]:
    """Paths where two JSON trees differ (at most ``limit``)."""
    out: list[dict] = []

    def walk(x, y, p):
        if len(out) >= limit:
            return
        if isinstance(x, dict) and isinstance(y, dict):
            for k in sorted(set(x) | set(y)):
                if k not in x or k not in y:
                    out.append({"path": f"{p}.{k}", "expected": x.get(k), "actual": y.get(k)})
                else:
                    walk(x[k], y[k], f"{p}.{k}")
        elif isinstance(x, list) and isinstance(y, list) and len(x) == len(y):
            for i, (u, v) in enumerate(zip(x, y)):
                walk(u, v, f"{p}[{i}]")
        elif x != y:
            out.append({"path": p, "expected": x, "actual": y})

    walk(a, b, path)
    return out
