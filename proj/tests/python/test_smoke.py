import math

import pytest

import soen_transmitter as st


def test_forward_voltage_near_one_volt():
    assert st.forward_voltage(10e-6) == pytest.approx(1.0, abs=0.05)


def test_led_target_outputs():
    r = st.evaluate("led", overrides={"diode.C": "10 fF", "diode.eta_qe": "0.1", "led.t_on": "2.9 ns"})
    assert set(st.target_outputs("led")) <= set(r)
    assert r["N_ph"] == pytest.approx(1e4, rel=0.05)


def test_sweep_table_shape_and_nan_policy():
    t = st.sweep(
        "target = led_min_pulse\n"
        "axis diode.eta_qe = 1e-3, 1e-1\n"
        "set led.N_target = 1e5\n"
    )
    assert t["columns"][0] == "diode.eta_qe"
    assert len(t["rows"]) == 2
    assert math.isnan(t["rows"][0][1])
    assert t["errors"][0]
    assert t["csv"].startswith("# soen ")


def test_figure_ids_and_errors():
    assert "fig4c" in st.figure_ids()
    with pytest.raises(st.ConfigError):
        st.figure("fig99")
    with pytest.raises(ValueError):
        st.evaluate("led", overrides={"diode.nope": "1"})


def test_poisson_zero():
    assert st.poisson_zero(5000, 1000) == pytest.approx(math.exp(-5.0), abs=1e-12)
