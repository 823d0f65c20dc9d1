"""Acceptance criteria, one test each; every test logs a PASS/FAIL summary line.

The full run takes roughly half an hour on one core, dominated by the
10001-point error table.  Set BO_WORKERS to spread u_exact grids over processes.
"""

from __future__ import annotations

import time

from bozd import verify
from bozd.exact import SolverConfig

MATSUNO_CROSS_SECONDS = 120.0
IDENTITY_SAMPLES = 200


def _record(log, number: int, title: str, cases, extra: str = "") -> bool:
    passed = all(bool(c.passed) for c in cases)
    detail = "; ".join(f"{c.name} = {c.value:.6g} ({c.bound})" for c in cases)
    log.append(f"{'PASS' if passed else 'FAIL'}  criterion {number}: {title}: {detail}{extra}")
    return passed


class TestAcceptance:
    def test_1_error_table(self, acceptance_log):
        cases, report = verify.reference_table_suite(SolverConfig())
        rows = [c for c in cases if c.name.startswith("eps")]
        assert _record(acceptance_log, 1, "sup-norm table, two-pole data, t = 4.5, x in [4, 5]", rows,
                       f"; slope {report.fitted_slope:.4f}")

    def test_2_slopes(self, acceptance_log):
        cases = verify.slope_suite()
        assert _record(acceptance_log, 2, "log-log slope in [0.85, 1.15]", cases)

    def test_3_matsuno_cross(self, acceptance_log):
        start = time.perf_counter()
        cases = verify.matsuno_cross_suite()
        elapsed = time.perf_counter() - start
        ok = _record(acceptance_log, 3, "|u_exact - u_matsuno| < 1e-6", cases,
                     f"; {elapsed:.1f} s (limit {MATSUNO_CROSS_SECONDS:.0f} s)")
        assert ok and elapsed < MATSUNO_CROSS_SECONDS

    def test_4_identities(self, acceptance_log):
        cases = verify.identities_suite(samples=IDENTITY_SAMPLES)
        assert _record(acceptance_log, 4, f"algebraic identities over {IDENTITY_SAMPLES} samples", cases)

    def test_5_contours(self, acceptance_log):
        cases = verify.contour_suite(SolverConfig())
        assert _record(acceptance_log, 5, "contour dominance and node jitter", cases)

    def test_6_l2(self, acceptance_log):
        cases = verify.l2_suite()
        assert _record(acceptance_log, 6, "L^2 norm of u_zd vs u0", cases)

    def test_7_boundedness(self, acceptance_log):
        cases = verify.boundedness_suite()
        assert _record(acceptance_log, 7, "|u_zd| <= 9 sup|u0| where J <= 1", cases)

    def test_8_caustic_count(self, acceptance_log):
        cases = verify.caustic_count_suite()
        assert _record(acceptance_log, 8, "caustic points <= 4N", cases)
