"""JSON state/channel documents and CSV trajectories."""

import csv
import json
import sys

import numpy as np

from . import channels as ch
from . import states
from .core import GaussianState, tensor_all


class SpecError(ValueError):
    """Document is not valid JSON or does not follow the schema."""


def load_json(path):
    """Read JSON from ``path`` (``-`` for stdin), raising :class:`SpecError` on bad input."""
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as f:
                text = f.read()
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _get(doc, key, default=None, required=True):
    if key in doc:
        return doc[key]
    if required and default is None:
        raise SpecError(f"{doc.get('kind', '?')!r} document is missing {key!r}")
    return default


def _number(doc, key, default=None):
    value = _get(doc, key, default)
    try:
        return float(value)
    except (TypeError, ValueError) as exc:
        raise SpecError(f"{key!r} must be a number, got {value!r}") from exc


def _complex(value):
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float)):
        return complex(value)
    raise SpecError(f"alpha must be a number or a [re, im] pair, got {value!r}")


def _matrix(value, name):
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SpecError(f"{name!r} must be a numeric array") from exc
    return arr


def parse_state(doc, check=True) -> GaussianState:
    """Build a :class:`GaussianState` from a state document.

    With ``check=False`` explicit covariance matrices are accepted without
    physicality validation (for reporting by ``validate``).
    """
    if not isinstance(doc, dict) or "kind" not in doc:
        raise SpecError("state document must be a JSON object with a 'kind' field")
    kind = doc["kind"]
    if kind == "vacuum":
        return states.vacuum(int(doc.get("modes", 1)))
    if kind == "thermal":
        return states.make_thermal(_number(doc, "nbar"))
    if kind == "coherent":
        return states.make_coherent(_complex(_get(doc, "alpha")))
    if kind == "squeezed":
        return states.make_squeezed(_number(doc, "r"), _number(doc, "theta", 0.0))
    if kind == "displaced-squeezed-thermal":
        return states.make_displaced_squeezed_thermal(
            nbar=_number(doc, "nbar", 0.0),
            r=_number(doc, "r", 0.0),
            theta=_number(doc, "theta", 0.0),
            alpha=_complex(doc.get("alpha", 0.0)),
        )
    if kind == "two-mode-squeezed":
        return states.make_two_mode_squeezed(_number(doc, "r"))
    if kind == "explicit":
        V = _matrix(_get(doc, "V"), "V")
        d = _matrix(doc["d"], "d") if "d" in doc else None
        modes = int(doc["modes"]) if "modes" in doc else None
        return GaussianState(V, d, modes, check=check)
    if kind == "tensor":
        parts = _get(doc, "parts")
        if not isinstance(parts, list) or not parts:
            raise SpecError("'parts' must be a non-empty list of state documents")
        return tensor_all(parse_state(p, check=check) for p in parts)
    raise SpecError(f"unknown state kind {kind!r}")


def state_document(state: GaussianState) -> dict:
    """Explicit document that re-parses to ``state`` bit for bit."""
    return {
        "kind": "explicit",
        "modes": state.modes,
        "V": state.V.tolist(),
        "d": state.d.tolist(),
    }


def _modes(doc, fallback):
    value = doc.get("modes", fallback or 1)
    try:
        return int(value)
    except (TypeError, ValueError) as exc:
        raise SpecError(f"'modes' must be an integer, got {value!r}") from exc


def parse_channel(doc, modes=None, check=True) -> ch.GaussianChannel:
    """Build a channel from a channel document.

    Named one-mode channels (``loss``, ``amplifier``, ``rotation``,
    ``identity``) act identically on every mode; their mode count is
    ``doc["modes"]``, else ``modes``, else 1. A JSON list composes its
    entries in order (first entry applied first).
    """
    if isinstance(doc, list):
        if not doc:
            raise SpecError("channel list is empty")
        out = parse_channel(doc[0], modes, check)
        for item in doc[1:]:
            out = ch.compose(parse_channel(item, modes, check), out)
        return out
    if not isinstance(doc, dict) or "kind" not in doc:
        raise SpecError("channel document must be a JSON object with a 'kind' field")
    kind = doc["kind"]
    if kind == "identity":
        return ch.identity_channel(_modes(doc, modes))
    if kind == "loss":
        return ch.loss(_number(doc, "eta"), _modes(doc, modes))
    if kind == "amplifier":
        return ch.amplifier(_number(doc, "gain"), _modes(doc, modes))
    if kind == "rotation":
        return ch.phase_rotation(_number(doc, "theta"), _modes(doc, modes))
    if kind == "displacement":
        return ch.displacement_channel(_matrix(_get(doc, "dbar"), "dbar"))
    if kind == "beamsplitter":
        return ch.beamsplitter(_number(doc, "theta"))
    if kind == "incoherent":
        blocks = _get(doc, "modes")
        if not isinstance(blocks, list) or not blocks:
            raise SpecError("'modes' must be a non-empty list of {t, theta, reflect, w}")
        params = []
        for b in blocks:
            params.append(
                (
                    _number(b, "t"),
                    _number(b, "theta", 0.0),
                    bool(b.get("reflect", False)),
                    _number(b, "w"),
                )
            )
        return ch.make_incoherent_channel(params, doc.get("perm"))
    if kind == "explicit":
        T = _matrix(_get(doc, "T"), "T")
        N = _matrix(doc["N"], "N") if "N" in doc else None
        dbar = _matrix(doc["dbar"], "dbar") if "dbar" in doc else None
        return ch.GaussianChannel(T, N, dbar, check=check)
    raise SpecError(f"unknown channel kind {kind!r}")


def channel_document(channel: ch.GaussianChannel) -> dict:
    return {
        "kind": "explicit",
        "T": channel.T.tolist(),
        "N": channel.N.tolist(),
        "dbar": channel.dbar.tolist(),
    }


def trajectory_header(modes):
    return (
        ["step", "C", "S"]
        + [f"nbar_{i + 1}" for i in range(modes)]
        + [f"nu_{i + 1}" for i in range(modes)]
    )


def write_trajectory(rows, modes, out):
    """Write ``rows`` of ``(step, C, S, nbars, nus)`` as CSV with 17 significant digits."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(trajectory_header(modes))
    for step, C, S, nbars, nus in rows:
        writer.writerow([step] + [f"{x:.17g}" for x in (C, S, *nbars, *nus)])
