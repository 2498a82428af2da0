import logging

import pytest

from app.config import _env_float


def test_env_float_reads_positive_values(monkeypatch):
    monkeypatch.setenv("ISOGEO4_EPS_ZERO", " 1e-6 ")
    assert _env_float("ISOGEO4_EPS_ZERO", 1e-9) == 1e-6
    monkeypatch.setenv("ISOGEO4_EPS_ZERO", "")
    assert _env_float("ISOGEO4_EPS_ZERO", 1e-9) == 1e-9
    monkeypatch.delenv("ISOGEO4_EPS_ZERO")
    assert _env_float("ISOGEO4_EPS_ZERO", 1e-9) == 1e-9


@pytest.mark.parametrize("bad", ["tiny", "0", "-1e-9", "inf", "nan"])
def test_env_float_warns_and_falls_back(monkeypatch, caplog, bad):
    monkeypatch.setenv("ISOGEO4_EPS_NONZERO", bad)
    with caplog.at_level(logging.WARNING, logger="app.config"):
        assert _env_float("ISOGEO4_EPS_NONZERO", 1e-7) == 1e-7
    assert "ISOGEO4_EPS_NONZERO" in caplog.text
