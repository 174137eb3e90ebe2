import os

# single-threaded FFTs so every run is reproducible
os.environ.setdefault("STRICHARTZ_THREADS", "1")

ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
