"""Versioned CSV output and key=value configuration files."""
import csv
import math
import os

SCHEMA_LINE = "# vslab-schema v1"


def fmt(value):
    """Deterministic text for a CSV cell; None becomes an empty cell."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return format(value, ".17g")
    if hasattr(value, "item"):
        return fmt(value.item())
    return str(value)


def write_csv(path, columns, rows):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(SCHEMA_LINE + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(row.get(c)) for c in columns])
    return path


def read_csv(path):
    """Rows of a schema-tagged CSV as dicts of strings."""
    with open(path, newline="", encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
        if first != SCHEMA_LINE:
            raise ValueError(f"{path}: missing '{SCHEMA_LINE}' header")
        return list(csv.DictReader(fh))


def to_float(cell):
    return float(cell) if cell not in ("", None) else None


def read_config(path):
    """Parse ``key = value`` lines; ``#`` starts a comment. Keys use the long flag names."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def write_config(path, config):
    with open(path, "w", encoding="utf-8") as fh:
        for key in sorted(config):
            value = config[key]
            if value is None:
                continue
            fh.write(f"{key.replace('_', '-')} = {fmt(value)}\n")
    return path
