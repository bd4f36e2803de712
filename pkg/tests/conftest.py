import pytest

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "ok": True, "ran": False, "detail": ""})
    if rep.when == "call":
        entry["ran"] = True
    if rep.failed:
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        status = "PASS" if entry["ok"] and entry["ran"] else ("SKIP" if entry["ok"] else "FAIL")
        detail = f"  [{entry['detail']}]" if entry["detail"] else ""
        terminalreporter.write_line(f"criterion {number:2d} {status}  {entry['title']}{detail}")


@pytest.fixture
def measured(request):
    """Attach measured values to the criterion line of the running test."""
    marker = request.node.get_closest_marker("criterion")

    def note(text):
        number, title = marker.args
        entry = _CRITERIA.setdefault(number, {"title": title, "ok": True, "ran": False, "detail": ""})
        entry["detail"] = "; ".join(filter(None, [entry["detail"], text]))

    return note


def octahedron_polytope():
    """conv(+-e1, +-e2, +-e3) assembled facet by facet.

    Its four equatorial vertices are coplanar, which the hull routines
    reject as degenerate, so the facets are listed explicitly.
    """
    import itertools

    import numpy as np

    from randpoly.hull import FacetRecord, Polytope
    from randpoly.sampler import PointCloud

    pts = np.vstack([np.eye(3), -np.eye(3)])
    facets = []
    for signs in itertools.product((1, -1), repeat=3):
        ids = tuple(sorted(i if s > 0 else i + 3 for i, s in enumerate(signs)))
        normal = np.array(signs, dtype=float) / np.sqrt(3.0)
        facets.append(FacetRecord(ids, normal, 1.0 / np.sqrt(3.0)))
    return Polytope.from_facets(PointCloud(pts), False, facets)


@pytest.fixture
def octahedron():
    return octahedron_polytope()
