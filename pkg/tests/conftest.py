import helpers


def pytest_terminal_summary(terminalreporter):
    if not helpers.ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(helpers.ACCEPTANCE):
        terminalreporter.write_line(helpers.ACCEPTANCE[number])
