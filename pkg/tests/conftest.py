"""Terminal summary hook: one pass/fail line per acceptance criterion."""

CRITERIA = {
    1: "calculus kernel",
    2: "energy exactness",
    3: "frame equivalence",
    4: "pullback identity",
    5: "invariant quantization",
    6: "flat identity",
    7: "shift law",
    8: "gauge fixing",
    9: "developing map",
    10: "gradient",
    11: "flow",
    12: "command line",
}

_WORDS = {"passed": "PASS", "failed": "FAIL", "error": "ERROR", "skipped": "SKIPPED"}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    seen = {}
    for outcome, word in _WORDS.items():
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid:
                continue
            tail = nodeid.split("test_criterion_")[1]
            num = int(tail.split("_")[0])
            when = getattr(rep, "when", "call")
            if outcome == "passed" and when != "call":
                continue
            if num in seen:
                # a failed teardown must not overwrite the call verdict
                continue
            seen[num] = word
    if not seen:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(seen):
        label = CRITERIA.get(num, "?")
        terminalreporter.write_line(f"criterion {num:2d} ({label}): {seen[num]}")
