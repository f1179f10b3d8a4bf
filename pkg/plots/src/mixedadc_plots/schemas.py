"""Schema-locked access to the simulator's CSV tables.

The column layouts here mirror the simulator CLI's output headers exactly
and the two packages are versioned together. Readers reject anything that
deviates: wrong columns, wrong order, ragged rows, non-numeric cells, or
a table with no data rows.
"""

import csv

__all__ = ["SCHEMAS", "SchemaMismatch", "EmptyTable", "read_table", "column_diff"]

SCHEMAS = {
    "fixed": ("snr_db", "k", "gmi_bits", "conventional_bits", "selection_bits"),
    "outage": ("snr_db", "k", "arch", "rate_bits"),
    "ergodic": ("snr_db", "k", "lower_bits", "upper_bits", "stderr_lower", "stderr_upper"),
    "imperfect": (
        "snr_db", "k", "mse_db", "lower_bits", "upper_bits",
        "stderr_lower", "stderr_upper", "conventional_bits", "conventional_trained_bits",
    ),
    "dither": (
        "snr_db", "k", "t_opt_db", "lower_bits", "stderr_lower",
        "plain_lower_bits", "plain_stderr_lower",
    ),
    "multiuser": (
        "snr_db", "k", "scheme", "lower_bits", "upper_bits",
        "stderr_lower", "stderr_upper", "sum_lower_bits",
    ),
    "energy": ("k", "arch", "norm_rate", "norm_energy"),
    "validate": ("instance", "check", "closed", "estimate", "stderr", "z", "status"),
}

_TEXT_COLUMNS = frozenset({"arch", "scheme", "instance", "check", "status"})


class SchemaMismatch(Exception):
    """The file does not follow the named table schema."""


class EmptyTable(Exception):
    """A header with no data rows; nothing to draw."""


def column_diff(kind: str, found) -> str:
    """Multi-line description of how a header deviates from a schema."""
    expected = SCHEMAS[kind]
    missing = [c for c in expected if c not in found]
    unexpected = [c for c in found if c not in expected]
    lines = [
        f"header does not match the {kind!r} schema",
        f"  expected:   {','.join(expected)}",
        f"  found:      {','.join(found)}",
        f"  missing:    {','.join(missing) if missing else '(none)'}",
        f"  unexpected: {','.join(unexpected) if unexpected else '(none)'}",
    ]
    if not missing and not unexpected:
        lines.append("  (same columns, different order)")
    return "\n".join(lines)


def read_table(path, kind: str) -> dict:
    """Read one CSV into {column name: list of values}.

    Text columns stay strings, everything else becomes float. Raises
    SchemaMismatch or EmptyTable; unknown kinds raise ValueError.
    """
    if kind not in SCHEMAS:
        raise ValueError(f"unknown figure kind {kind!r}; known: {', '.join(sorted(SCHEMAS))}")
    expected = SCHEMAS[kind]
    columns = {name: [] for name in expected}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise SchemaMismatch(f"{path} is empty, expected a {kind!r} table")
        if tuple(cell.strip() for cell in header) != expected:
            raise SchemaMismatch(f"{path}: {column_diff(kind, [c.strip() for c in header])}")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue  # stray blank line
            if len(row) != len(expected):
                raise SchemaMismatch(
                    f"{path}:{lineno}: expected {len(expected)} fields, found {len(row)}"
                )
            for name, cell in zip(expected, row):
                if name in _TEXT_COLUMNS:
                    columns[name].append(cell.strip())
                else:
                    try:
                        columns[name].append(float(cell))
                    except ValueError:
                        raise SchemaMismatch(
                            f"{path}:{lineno}: column {name!r}: {cell!r} is not a number"
                        ) from None
    if not columns[expected[0]]:
        raise EmptyTable(f"{path} has a header but no data rows")
    return columns
