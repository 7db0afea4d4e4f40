"""Volatility-mixture analysis of financial returns.

Thin python surface over the C++ core: price ingestion, log returns,
windowed volatility, tail fits, the mixture-integral scaling function, and
the synthetic generator.
"""

from ._volmix import (
    CollapseReport,
    Density,
    PowerLawFit,
    PriceSeries,
    ReturnSeries,
    ScalingFunction,
    StretchedExpFit,
    StylizedFactsReport,
    SynthResult,
    SynthSpec,
    TailAsymptote,
    VolatilityModel,
    VolatilitySeries,
    asymptotic_log_shape,
    asymptotic_tail,
    autocorrelation,
    collapse_metric,
    empirical_density,
    evaluate_scaling_function,
    fit_power_law,
    fit_stretched_exponential,
    generate,
    load_prices,
    log_returns,
    predicted_unscaled_density,
    resample,
    rescale_returns,
    stylized_facts_report,
    tail_slope,
    windowed_volatility,
)

__all__ = [
    "CollapseReport",
    "Density",
    "PowerLawFit",
    "PriceSeries",
    "ReturnSeries",
    "ScalingFunction",
    "StretchedExpFit",
    "StylizedFactsReport",
    "SynthResult",
    "SynthSpec",
    "TailAsymptote",
    "VolatilityModel",
    "VolatilitySeries",
    "asymptotic_log_shape",
    "asymptotic_tail",
    "autocorrelation",
    "collapse_metric",
    "empirical_density",
    "evaluate_scaling_function",
    "fit_power_law",
    "fit_stretched_exponential",
    "generate",
    "load_prices",
    "log_returns",
    "predicted_unscaled_density",
    "resample",
    "rescale_returns",
    "stylized_facts_report",
    "tail_slope",
    "windowed_volatility",
]
