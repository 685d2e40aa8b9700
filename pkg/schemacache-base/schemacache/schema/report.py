"""
Run reports: one JSON document per run, and a CSV with one row per query.
"""

import csv
import json

from . types import FORMAT_VERSION

report_columns = [ "config", "position", "query_id", "ttft" ]

def save_report(report, path):

    report = dict(report)
    report.setdefault("format_version", FORMAT_VERSION)

    with open(path, "w") as f:
        json.dump(report, f, indent=2, sort_keys=True)
        f.write("\n")

def load_report(path):
    with open(path) as f:
        return json.load(f)

def save_rows(rows, path):

    with open(path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=report_columns)
        w.writeheader()
        for row in rows:
            w.writerow({ k: row[k] for k in report_columns })

