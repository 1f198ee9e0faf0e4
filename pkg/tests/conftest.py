import pytest

_ACCEPTANCE_PREFIX = "test_criterion_"
_acceptance_outcomes: dict[str, str] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance" in report.nodeid and name.startswith(_ACCEPTANCE_PREFIX):
        if report.when == "call":
            _acceptance_outcomes[name] = "PASS" if report.passed else "FAIL"
        elif report.when == "setup" and report.failed:
            _acceptance_outcomes[name] = "FAIL (setup)"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_outcomes:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_acceptance_outcomes, key=_criterion_key):
        label = name[len(_ACCEPTANCE_PREFIX):].replace("_", " ")
        terminalreporter.write_line(f"criterion {label}: {_acceptance_outcomes[name]}")


def _criterion_key(name: str):
    tail = name[len(_ACCEPTANCE_PREFIX):]
    head = tail.split("_", 1)[0]
    return (int(head) if head.isdigit() else 99, tail)
