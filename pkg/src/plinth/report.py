"""Structured check records and deterministic verification reports.

A CheckRecord captures one named check: its stable id, a human anchor
naming the fact being verified, the parameters, a four-way status, free
text details (on failure: the serialized counterexample), wall time, and
size telemetry.  A CheckRunner executes check callables one at a time,
converts raised verdicts into statuses, and assembles a report whose
record order is by check id, so identical invocations agree up to the
timing fields.
"""

from __future__ import annotations

import json
import os
import tempfile
import time

from .groebner import BudgetExceeded, NotMember
from .morphism import NotInvariant
from .ring import AmbientMismatch, NotDivisible

STATUSES = ("pass", "fail", "inconclusive", "budget-exceeded")


class Inconclusive(Exception):
    """Raised by a check that does not apply under the given parameters."""


def poly_stats(poly):
    """Size telemetry for one polynomial."""
    return {"degree": poly.degree(), "terms": poly.term_count()}


class CheckRecord:
    __slots__ = ("check_id", "anchor", "params", "status", "details",
                 "elapsed_ms", "telemetry")

    def __init__(self, check_id, anchor, params, status, details,
                 elapsed_ms, telemetry):
        if status not in STATUSES:
            raise ValueError("unknown status %r" % (status,))
        self.check_id = check_id
        self.anchor = anchor
        self.params = dict(params or {})
        self.status = status
        self.details = details
        self.elapsed_ms = elapsed_ms
        self.telemetry = dict(telemetry or {})

    def as_dict(self):
        return {
            "check-id": self.check_id,
            "anchor": self.anchor,
            "params": self.params,
            "status": self.status,
            "details": self.details,
            "elapsed-ms": self.elapsed_ms,
            "telemetry": self.telemetry,
        }

    def __repr__(self):
        return "<%s %s>" % (self.status, self.check_id)


class CheckRunner:
    """Runs selected checks sequentially and collects their records.

    A check callable either returns (pass), returns a telemetry dict
    (pass, recorded), returns a (details, telemetry) pair, raises
    Inconclusive, or raises a verifying exception; BudgetExceeded maps to
    its own status and every other verification error becomes a fail
    whose details carry the offending object.
    """

    def __init__(self, selectors=None):
        self.selectors = selectors
        self.records = []

    def selected(self, check_id):
        if not self.selectors:
            return True
        return any(sel in check_id for sel in self.selectors)

    def run(self, check_id, anchor, fn, params=None):
        if not self.selected(check_id):
            return
        t0 = time.perf_counter()
        details = ""
        telemetry = {}
        try:
            got = fn()
            status = "pass"
            if isinstance(got, tuple):
                details, telemetry = got
            elif isinstance(got, dict):
                telemetry = got
            elif isinstance(got, str):
                details = got
        except Inconclusive as exc:
            status = "inconclusive"
            details = str(exc)
        except BudgetExceeded as exc:
            status = "budget-exceeded"
            details = str(exc)
        except (AssertionError, NotMember, NotInvariant, NotDivisible,
                AmbientMismatch, ValueError, ArithmeticError) as exc:
            status = "fail"
            details = "%s: %s" % (type(exc).__name__, exc)
        elapsed_ms = int(round((time.perf_counter() - t0) * 1000))
        self.records.append(CheckRecord(
            check_id, anchor, params, status, details, elapsed_ms, telemetry))

    def exit_code(self, strict=False):
        """0 iff everything selected passed; inconclusive tolerated unless strict."""
        bad = {"fail", "budget-exceeded"}
        if strict:
            bad.add("inconclusive")
        return 1 if any(r.status in bad for r in self.records) else 0

    def report(self, tool_version, params):
        return {
            "tool-version": tool_version,
            "params": dict(params),
            "records": [r.as_dict()
                        for r in sorted(self.records,
                                        key=lambda r: r.check_id)],
        }

    def write_json(self, path, tool_version, params):
        """Serialize the report to path atomically (write-then-rename)."""
        doc = json.dumps(self.report(tool_version, params),
                         indent=2, sort_keys=True)
        directory = os.path.dirname(os.path.abspath(path))
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(doc + "\n")
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def print_text(self, write):
        for r in sorted(self.records, key=lambda r: r.check_id):
            line = "%-15s %-28s %6d ms  %s" % (
                r.status.upper(), r.check_id, r.elapsed_ms, r.anchor)
            if r.details:
                line += "  [%s]" % r.details
            write(line + "\n")
        counts = {}
        for r in self.records:
            counts[r.status] = counts.get(r.status, 0) + 1
        summary = ", ".join("%d %s" % (counts[s], s)
                            for s in STATUSES if s in counts)
        write("checks: %s\n" % (summary or "none selected"))
