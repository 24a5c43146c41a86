import pytest


@pytest.fixture
def criterion_line(request):
    """Emit a line through the terminal reporter so it stays visible even
    when output capture is on."""
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")

    def emit(text):
        if reporter is not None:
            reporter.ensure_newline()
            reporter.write_line(text)
        else:
            print(text)

    return emit
