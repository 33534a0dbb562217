"""Shared fixtures. The expensive microcanonical preset runs are cached for
the whole session so conservation and backend-equivalence checks reuse them.
"""

from dataclasses import replace

import pytest

from mdbench.bench import preset_config, run_benchmark


def pytest_configure(config):
    config._verdict_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_verdict_lines", [])
    if lines:
        terminalreporter.section("acceptance summary")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def verdict(request):
    """Record and print one PASS/FAIL line per end-to-end check.

    The lines are replayed after the run summary so they stay visible even
    though pytest captures per-test output.
    """
    def report(name, ok, detail):
        line = f"[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'} ({detail})"
        print(line)
        request.config._verdict_lines.append(line)
        assert ok, line

    def skip(name, reason):
        line = f"[ACCEPTANCE] {name}: SKIP ({reason})"
        print(line)
        request.config._verdict_lines.append(line)
        pytest.skip(reason)

    report.skip = skip
    return report


@pytest.fixture(scope="session")
def nve_runs():
    """Lazily run the all-to-all preset per (backend, worker_count), once."""
    cache = {}

    def get(backend: str, workers: int):
        key = (backend, workers)
        if key not in cache:
            cfg = replace(preset_config("all2all-2k"),
                          backend=backend, worker_count=workers)
            cache[key] = run_benchmark(cfg)
        return cache[key]

    return get
