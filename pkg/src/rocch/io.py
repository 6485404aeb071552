"""File formats: score CSVs, curve/hull JSON, prediction CSVs, plot TSVs.

Structured artifacts are JSON with numbers at 12 significant digits; scores
in CSVs are written with exact shortest round-trip text so re-serialization
can never merge or split tie groups.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math

from .curves import ClassLabel, CurvePoint, RocCurve, RocPoint, ScoredExample
from .hull import DegenerateRule, HullVertex, Provenance, RocchHull

SCORE_COLUMNS = ("classifier", "example", "label", "score")
SCHEMA_VERSION = 1


class ScoreFileError(ValueError):
    """Malformed score CSV; carries the offending 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class FileFormatError(ValueError):
    """Malformed or inconsistent JSON artifact."""


def _num12(x: float) -> float:
    return float(f"{x:.12g}")


def fmt12(x: float) -> str:
    """Render a number with 12 significant digits, trimmed."""
    return f"{x:.12g}"


def _encode_threshold(threshold: float | None):
    if threshold is None:
        return None
    if threshold == math.inf:
        return "inf"
    if threshold == -math.inf:
        return "-inf"
    return _num12(threshold)


def _decode_threshold(raw):
    if raw is None:
        return None
    if raw == "inf":
        return math.inf
    if raw == "-inf":
        return -math.inf
    if isinstance(raw, (int, float)) and math.isfinite(raw):
        return float(raw)
    raise FileFormatError(f"invalid threshold value {raw!r}")


# ---------------------------------------------------------------------------
# Score CSVs


def parse_scores(data: bytes | str) -> dict[str, list[ScoredExample]]:
    """Parse a score CSV into per-classifier example lists.

    Expected header: ``classifier,example,label,score`` with an optional
    trailing ``weight`` column.  Validation failures name the 1-based line.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    rows = list(csv.reader(_io.StringIO(text)))
    if not rows:
        raise ScoreFileError(1, "empty file, expected a header row")
    header = tuple(cell.strip().lower() for cell in rows[0])
    has_weight = header == SCORE_COLUMNS + ("weight",)
    if not has_weight and header != SCORE_COLUMNS:
        raise ScoreFileError(
            1, f"bad header {rows[0]!r}, expected classifier,example,label,score[,weight]"
        )
    width = 5 if has_weight else 4

    grouped: dict[str, list[ScoredExample]] = {}
    for line, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != width:
            raise ScoreFileError(line, f"expected {width} columns, got {len(row)}")
        classifier, example_id, label_text, score_text = (cell.strip() for cell in row[:4])
        try:
            label = ClassLabel.parse(label_text)
        except ValueError as exc:
            raise ScoreFileError(line, str(exc)) from None
        try:
            score = float(score_text)
        except ValueError:
            raise ScoreFileError(line, f"score {score_text!r} is not a number") from None
        if not math.isfinite(score):
            raise ScoreFileError(line, f"score {score_text!r} is not finite")
        weight = 1.0
        if has_weight:
            try:
                weight = float(row[4].strip())
            except ValueError:
                raise ScoreFileError(line, f"weight {row[4]!r} is not a number") from None
            if not (math.isfinite(weight) and weight > 0):
                raise ScoreFileError(line, f"weight {row[4]!r} must be a positive number")
        grouped.setdefault(classifier, []).append(
            ScoredExample(example_id, label, score, weight)
        )
    return grouped


def write_scores(grouped: dict[str, list[ScoredExample]]) -> str:
    """Serialize per-classifier examples back to the score CSV format."""
    has_weight = any(ex.weight != 1.0 for exs in grouped.values() for ex in exs)
    out = _io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SCORE_COLUMNS + ("weight",) if has_weight else SCORE_COLUMNS)
    for classifier, examples in grouped.items():
        for ex in examples:
            row = [classifier, ex.example_id, ex.label.value, repr(ex.score)]
            if has_weight:
                row.append(repr(ex.weight))
            writer.writerow(row)
    return out.getvalue()


def instance_scores(grouped: dict[str, list[ScoredExample]]) -> list[tuple[str, dict[str, float]]]:
    """Pivot parsed scores to per-example feeds, in first-appearance order."""
    order: list[str] = []
    feeds: dict[str, dict[str, float]] = {}
    for classifier, examples in grouped.items():
        for ex in examples:
            if ex.example_id not in feeds:
                order.append(ex.example_id)
                feeds[ex.example_id] = {}
            feeds[ex.example_id][classifier] = ex.score
    return [(example_id, feeds[example_id]) for example_id in order]


# ---------------------------------------------------------------------------
# Curve JSON


def write_curves(curves) -> str:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "curves": [
            {
                "classifier": c.classifier_id,
                "points": [
                    {
                        "threshold": _encode_threshold(cp.threshold),
                        "fp": _num12(cp.point.fp),
                        "tp": _num12(cp.point.tp),
                    }
                    for cp in c.points
                ],
            }
            for c in curves
        ],
    }
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def read_curves(text: str) -> list[RocCurve]:
    payload = _load_json(text)
    if "curves" not in payload:
        raise FileFormatError("not a curves file: missing 'curves' key")
    curves = []
    try:
        for entry in payload["curves"]:
            points = tuple(
                CurvePoint(
                    _decode_threshold(p["threshold"]),
                    RocPoint(float(p["fp"]), float(p["tp"])),
                )
                for p in entry["points"]
            )
            curves.append(RocCurve(entry["classifier"], points))
    except (KeyError, TypeError, ValueError) as exc:
        raise FileFormatError(f"invalid curves file: {exc}") from exc
    return curves


# ---------------------------------------------------------------------------
# Hull JSON


def _encode_vertex(vertex: HullVertex) -> dict:
    entry = {"fp": _num12(vertex.fp), "tp": _num12(vertex.tp)}
    if isinstance(vertex.provenance, DegenerateRule):
        entry["degenerate"] = vertex.provenance.value
    else:
        entry["classifier"] = vertex.provenance.classifier_id
        entry["threshold"] = _encode_threshold(vertex.provenance.threshold)
    return entry


def _decode_vertex(entry: dict) -> HullVertex:
    point = RocPoint(float(entry["fp"]), float(entry["tp"]))
    if entry.get("degenerate") is not None:
        return HullVertex(point, DegenerateRule(entry["degenerate"]))
    return HullVertex(point, Provenance(entry["classifier"], _decode_threshold(entry.get("threshold"))))


def write_hull(hull: RocchHull) -> str:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "vertices": [_encode_vertex(v) for v in hull.vertices],
        "aux_points": [_encode_vertex(v) for v in hull.aux_points],
        "slopes": ["inf" if math.isinf(s) else _num12(s) for s in hull.slopes],
    }
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def read_hull(text: str) -> RocchHull:
    payload = _load_json(text)
    if "vertices" not in payload:
        raise FileFormatError("not a hull file: missing 'vertices' key")
    try:
        vertices = tuple(_decode_vertex(e) for e in payload["vertices"])
        aux = tuple(_decode_vertex(e) for e in payload.get("aux_points", []))
        stored = [math.inf if s == "inf" else float(s) for s in payload.get("slopes", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise FileFormatError(f"invalid hull file: {exc}") from exc

    slopes = []
    for a, b in zip(vertices, vertices[1:]):
        dx = b.fp - a.fp
        slopes.append(math.inf if dx == 0.0 else (b.tp - a.tp) / dx)
    if len(stored) != len(slopes):
        raise FileFormatError("slope count does not match vertex count")
    for s, t in zip(stored, slopes):
        if s == t:
            continue
        if math.isinf(s) != math.isinf(t) or abs(s - t) > 1e-6 * max(1.0, abs(t)):
            raise FileFormatError(f"stored slope {s!r} disagrees with vertices ({t!r})")
    try:
        return RocchHull(vertices, tuple(slopes), aux)
    except ValueError as exc:
        raise FileFormatError(f"invalid hull file: {exc}") from exc


def _load_json(text: str):
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise FileFormatError("expected a JSON object at the top level")
    return payload


def sniff_artifact(text: str) -> str:
    """Classify input text as 'scores', 'curves', or 'hull'."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        payload = _load_json(text)
        if "curves" in payload:
            return "curves"
        if "vertices" in payload:
            return "hull"
        raise FileFormatError("JSON input is neither a curves nor a hull file")
    return "scores"


# ---------------------------------------------------------------------------
# Prediction CSVs and plot TSVs


def write_predictions(records) -> str:
    """Rows of (example_id, trace) to the predictions CSV."""
    out = _io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(("example", "prediction", "component", "coin"))
    for example_id, trace in records:
        writer.writerow(
            (example_id, trace.prediction.value, trace.component_id, trace.coin or "")
        )
    return out.getvalue()


def write_plot_data(series) -> str:
    """TSV of (series, fp, tp) rows from named point sequences."""
    lines = ["series\tfp\ttp"]
    for name, points in series:
        for point in points:
            lines.append(f"{name}\t{fmt12(point.fp)}\t{fmt12(point.tp)}")
    return "\n".join(lines) + "\n"
