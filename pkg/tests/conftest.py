import re

_ACCEPTANCE = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+?)(?:\[|$)")


def pytest_terminal_summary(terminalreporter):
    results: dict = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            m = _ACCEPTANCE.search(getattr(rep, "nodeid", ""))
            if not m or (rep.when != "call" and outcome != "error"):
                continue
            key = (int(m.group(1)), m.group(2).replace("_", " "))
            passed, total = results.get(key, (0, 0))
            results[key] = (passed + (outcome == "passed"), total + 1)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for (k, title), (passed, total) in sorted(results.items()):
        status = "PASS" if passed == total else "FAIL"
        terminalreporter.write_line(f"criterion {k:2d} {status}: {title} ({passed}/{total} cases)")
