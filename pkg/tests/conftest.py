def pytest_configure(config):
    config.addinivalue_line("markers", "slow: end-to-end runs taking more than a few seconds")
    config._acceptance_rows = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = sorted(getattr(config, "_acceptance_rows", []))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for num, text, ok, detail in rows:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d}: {text} ({detail})")
