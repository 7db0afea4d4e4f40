"""Smoke tests for the python bindings: every major operation is reachable
and returns sane values. Heavy statistical validation lives in the C++
suites; here we only confirm the surface works end to end."""

import math

import pytest

import volmix


def total_mass(density):
    mass = sum(
        d * (density.edges[i + 1] - density.edges[i])
        for i, d in enumerate(density.density)
    )
    excluded = density.underflow_count + density.overflow_count
    return mass + excluded / density.total_count


def test_point_mass_matches_the_gaussian_closed_form():
    model = volmix.VolatilityModel.point_mass(0.01)
    f = volmix.ScalingFunction(model)
    assert f(0.0) == pytest.approx(1.0 / (0.01 * math.sqrt(2.0 * math.pi)), rel=1e-12)
    # Diffusive rescaling: sqrt(n) * F_n(r) depends on r / sqrt(n) only.
    for n in (1, 4, 64):
        r = 0.02 * math.sqrt(n)
        assert math.sqrt(n) * f.unscaled_density(r, n) == pytest.approx(
            f(0.02), rel=1e-12
        )


def test_synthetic_volatility_tail_is_recovered():
    spec = volmix.SynthSpec(total_returns=120000, window_length=200, seed=5)
    assert spec.window_length == 200
    assert spec.base_interval == 60  # keyword init keeps the other defaults
    sim = volmix.generate(volmix.VolatilityModel.pareto_tail(3.5, 0.01), spec)
    assert len(sim.returns) == 120000
    vols = volmix.windowed_volatility(sim.returns, 200)
    assert len(vols) == 600
    fit = volmix.fit_power_law(vols.sigmas)
    assert fit.alpha == pytest.approx(3.5, abs=0.5)
    assert fit.tail_size > 50


def test_rescaled_distributions_collapse():
    spec = volmix.SynthSpec()
    spec.total_returns = 120000
    spec.window_length = 300
    spec.seed = 11
    sim = volmix.generate(volmix.VolatilityModel.lognormal(-6.0, 0.4), spec)
    scales = [5, 15, 30, 60]
    rescaled = [
        volmix.rescale_returns(volmix.log_returns(sim.prices, n).values, n)
        for n in scales
    ]
    report = volmix.collapse_metric(rescaled, scales)
    assert report.max_distance < 0.06
    assert len(report.pairwise_distance) == 16

    density = volmix.empirical_density(sim.returns.values)
    assert total_mass(density) == pytest.approx(1.0, abs=1e-9)


def test_stretched_exponential_round_trip():
    lam, beta, c = 61.38, 0.1772, 2.5e3
    edges = [0.002 * (0.3 / 0.002) ** (i / 60) for i in range(61)]
    sigma = [math.sqrt(edges[i] * edges[i + 1]) for i in range(60)]
    dens = [c * math.exp(-lam * s**beta) for s in sigma]
    weights = [dens[i] * (edges[i + 1] - edges[i]) for i in range(60)]
    fit = volmix.fit_stretched_exponential(sigma, dens, weights)
    assert fit.lambda_ == pytest.approx(lam, rel=1e-2)
    assert fit.beta == pytest.approx(beta, rel=1e-2)


def test_asymptote_is_amplitude_matched_at_its_reference():
    model = volmix.VolatilityModel.stretched_exp(61.38, 0.1772, 0.001)
    f = volmix.ScalingFunction(model)
    onset = f.asymptotic_onset()
    asym = f.matched_asymptote(onset)
    assert asym.at(onset) == pytest.approx(f(onset), rel=1e-9)
    z = 5.0 * onset
    assert asym.log_at(z) == pytest.approx(f.log_value(z), abs=0.05)
    assert volmix.asymptotic_tail(z, 61.38, 0.1772) == pytest.approx(
        math.exp(volmix.asymptotic_log_shape(z, 61.38, 0.1772)), rel=1e-12
    )


def test_prices_load_from_csv(tmp_path):
    path = tmp_path / "prices.csv"
    rows = ["timestamp,close"] + [
        f"{946684800 + 60 * i},{100.0 + i}" for i in range(10)
    ]
    path.write_text("\n".join(rows) + "\n")
    series = volmix.load_prices(str(path))
    assert len(series) == 10
    returns = volmix.log_returns(series)
    assert len(returns) == 9
    assert returns.values[0] == pytest.approx(math.log(101.0 / 100.0))
