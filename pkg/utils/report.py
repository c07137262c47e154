"""Text and JSON rendering of optima, verdicts and scan reports."""
import orjson
import pandas as pd

JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_NON_STR_KEYS | orjson.OPT_APPEND_NEWLINE
VERDICT_FIELDS = ('theorem_id', 'hypothesis_ok', 'predicted', 'computed', 'abs_error', 'witness')


def fmt(value):
    return f"{value:.12g}"


def to_json(payload):
    return orjson.dumps(payload, option=JSON_OPTIONS).decode('utf-8')


def optimum_record(optimum):
    return optimum.summary()


def verdict_record(verdict):
    record = verdict.model_dump(include=set(VERDICT_FIELDS) | {'details', 'notes'})
    if verdict.witness is not None:
        record['witness'] = optimum_record(verdict.witness)
    return {key: record[key] for key in (*VERDICT_FIELDS, 'details', 'notes') if key in record}


def scan_record(report):
    return report.model_dump()


def format_optimum(optimum):
    lines = [
        f"value: {fmt(optimum.value)}",
        f"weighting: {' '.join(fmt(v) for v in optimum.weighting)}",
        f"support: {' '.join(str(v) for v in optimum.support)}",
        f"kkt_residual: {fmt(optimum.kkt_residual)}",
        f"converged: {str(optimum.converged).lower()}",
    ]
    return '\n'.join(lines) + '\n'


def format_verdicts(verdicts, tol):
    frame = pd.DataFrame([{
        'theorem': v.theorem_id,
        'hypothesis': 'ok' if v.hypothesis_ok else 'failed',
        'predicted': fmt(v.predicted),
        'computed': fmt(v.computed),
        'abs_error': fmt(v.abs_error),
        'pass': v.passed(tol),
    } for v in verdicts])
    lines = [frame.to_string(index=False)]
    for v in verdicts:
        lines.extend(f"note ({v.theorem_id}): {note}" for note in v.notes)
    return '\n'.join(lines) + '\n'


def format_scans(reports):
    frame = pd.DataFrame([{
        'T': ','.join(str(r) for r in report.edge_types),
        'm': report.m,
        'n': report.n,
        'graphs': report.enumerated_count,
        'extremal': fmt(report.extremal_value),
        'colex': fmt(report.colex_value),
        'holds': report.conjecture_holds,
        'complete': report.complete,
    } for report in reports])
    lines = [frame.to_string(index=False)]
    for report in reports:
        lines.append(f"# m={report.m}: {report.vertex_bound_note}")
        for witness in report.witnesses:
            lines.append(f"# witness for m={report.m}")
            lines.append(witness.rstrip('\n'))
    return '\n'.join(lines) + '\n'


def format_consistency(frame):
    shown = frame.copy()
    for column in ('optimize', 'oracle', 'gap'):
        shown[column] = shown[column].map(fmt)
    return shown.to_string(index=False) + '\n'
