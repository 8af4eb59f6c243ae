import pytest

from sigpair import IndicatorConfig, align_pair, compute_frame, generate_synthetic, load_bars


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    """Print one pass/fail line per acceptance criterion."""
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        label = getattr(item.function, "_criterion", None)
        if label:
            print(f"\n[acceptance] {label}: {'PASS' if rep.passed else 'FAIL'}")


def criterion(label):
    def mark(fn):
        fn._criterion = label
        return fn
    return mark


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory):
    """The seeded synthetic pair at default scale (43 days x 345 minutes)."""
    d = tmp_path_factory.mktemp("fixture")
    generate_synthetic(seed=42, out_dir=str(d))
    return d


@pytest.fixture(scope="session")
def fixture_series(fixture_dir):
    return align_pair(
        load_bars(str(fixture_dir / "SYN1.csv"), "SYN1"),
        load_bars(str(fixture_dir / "SYN2.csv"), "SYN2"),
    )


@pytest.fixture(scope="session")
def fixture_frame(fixture_series):
    return compute_frame(fixture_series, IndicatorConfig())
