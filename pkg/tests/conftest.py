import os

import hypothesis
import pytest

from crmetrics.synth import AccelModel, GpsModel, SynthSpec, write_cohort


hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=300, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

TZ = "America/Chicago"


def cohort_spec(**overrides) -> SynthSpec:
    """Small realistic cohort: fragmented accelerometer, jittered GPS schedule."""
    kw = dict(
        seed=11, n_participants=20, days=7, accel_hz=1 / 60,
        accel=AccelModel(noise_sd=0.02, fragmentation_rate=2.0, mesor_sd=0.05,
                         amplitude_sd=0.03, acrophase_sd=1.0),
        gps=GpsModel(jitter_sd_h=1.5, fix_noise_m=5.0),
    )
    kw.update(overrides)
    return SynthSpec(**kw)


@pytest.fixture(scope="session")
def cohort_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("cohort")
    write_cohort(cohort_spec(), out)
    return out


# one summary line per acceptance criterion -------------------------------

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, text = mark.args
    entry = _criteria.setdefault(number, {"text": text, "ok": True, "ran": False})
    if rep.when == "call":
        entry["ran"] = True
    if rep.failed:
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        e = _criteria[number]
        status = "PASS" if e["ok"] and e["ran"] else ("FAIL" if e["ran"] or not e["ok"] else "SKIP")
        terminalreporter.write_line(f"criterion {number:2d} {status}  {e['text']}")
