import pytest

from flagvec import linkspace


@pytest.fixture(scope="session")
def shared_cache(tmp_path_factory):
    return tmp_path_factory.mktemp("linkspace-cache")


@pytest.fixture(autouse=True)
def _store(shared_cache):
    # One on-disk cache for the whole run keeps relation link spaces cheap.
    if linkspace.get_store().cache_dir != shared_cache:
        linkspace.configure(shared_cache)
    yield


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
