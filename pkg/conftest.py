import os


def pytest_configure(config):
    # Acceptance tests append their PASS/FAIL scorecard here; start each
    # session with a clean slate.
    report = os.path.join(str(config.rootpath), "acceptance_report.txt")
    os.environ["ACCEPTANCE_REPORT"] = report
    try:
        os.remove(report)
    except FileNotFoundError:
        pass
