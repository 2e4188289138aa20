"""
The full golden-number suite, as the ``karokit report`` command prints it.
"""

from karokit import report

rows = report.golden_suite(grid=11)
print(report.table(rows))
print(f"{sum(r.passed for r in rows)}/{len(rows)} rows pass")
