#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "volmix/distribution.hpp"
#include "volmix/ingest.hpp"
#include "volmix/mixture.hpp"
#include "volmix/returns.hpp"
#include "volmix/synth.hpp"
#include "volmix/tailfit.hpp"

namespace py = pybind11;
using namespace volmix;

PYBIND11_MODULE(_volmix, m) {
    m.doc() = "volatility-mixture analysis core";

    py::class_<PriceSeries>(m, "PriceSeries")
        .def(py::init<>())
        .def_readwrite("timestamps", &PriceSeries::timestamps)
        .def_readwrite("prices", &PriceSeries::prices)
        .def_readwrite("session_breaks", &PriceSeries::session_breaks)
        .def_readwrite("base_interval", &PriceSeries::base_interval)
        .def("__len__", &PriceSeries::size)
        .def("sessions", &PriceSeries::sessions)
        .def("validate", &PriceSeries::validate);

    py::class_<ReturnSeries>(m, "ReturnSeries")
        .def_readonly("values", &ReturnSeries::values)
        .def_readonly("timestamps", &ReturnSeries::timestamps)
        .def_readonly("session_ids", &ReturnSeries::session_ids)
        .def_readonly("n", &ReturnSeries::n)
        .def("__len__", &ReturnSeries::size);

    py::class_<VolatilitySeries>(m, "VolatilitySeries")
        .def_readonly("sigmas", &VolatilitySeries::sigmas)
        .def_readonly("window_starts", &VolatilitySeries::window_starts)
        .def_readonly("window_length", &VolatilitySeries::window_length)
        .def("__len__", &VolatilitySeries::size);

    py::class_<Density>(m, "Density")
        .def_readonly("edges", &Density::edges)
        .def_readonly("centers", &Density::centers)
        .def_readonly("density", &Density::density)
        .def_readonly("counts", &Density::counts)
        .def_readonly("underflow_count", &Density::underflow_count)
        .def_readonly("overflow_count", &Density::overflow_count)
        .def_readonly("total_count", &Density::total_count);

    py::class_<CollapseReport>(m, "CollapseReport")
        .def_readonly("scales", &CollapseReport::scales)
        .def_readonly("pairwise_distance", &CollapseReport::pairwise_distance)
        .def_readonly("max_distance", &CollapseReport::max_distance);

    py::class_<PowerLawFit>(m, "PowerLawFit")
        .def_readonly("alpha", &PowerLawFit::alpha)
        .def_readonly("x_min", &PowerLawFit::x_min)
        .def_readonly("ks_distance", &PowerLawFit::ks_distance)
        .def_readonly("tail_size", &PowerLawFit::tail_size);

    py::class_<StretchedExpFit>(m, "StretchedExpFit")
        .def_readonly("c", &StretchedExpFit::c)
        .def_readonly("lambda_", &StretchedExpFit::lambda)
        .def_readonly("beta", &StretchedExpFit::beta)
        .def_readonly("log_c", &StretchedExpFit::log_c)
        .def_readonly("fit_lo", &StretchedExpFit::fit_lo)
        .def_readonly("fit_hi", &StretchedExpFit::fit_hi)
        .def_readonly("residual", &StretchedExpFit::residual)
        .def_readonly("bins_used", &StretchedExpFit::bins_used);

    py::class_<VolatilityModel>(m, "VolatilityModel")
        .def_static("point_mass", &VolatilityModel::point_mass, py::arg("sigma0"))
        .def_static("pareto_tail", &VolatilityModel::pareto_tail, py::arg("alpha"),
                    py::arg("sigma_min"))
        .def_static("stretched_exp", &VolatilityModel::stretched_exp, py::arg("lambda_"),
                    py::arg("beta"), py::arg("sigma_lo"))
        .def_static("lognormal", &VolatilityModel::lognormal, py::arg("mu"), py::arg("s"))
        .def_static("empirical", &VolatilityModel::empirical, py::arg("edges"),
                    py::arg("weights"))
        .def("density", &VolatilityModel::density, py::arg("sigma"))
        .def("log_density", &VolatilityModel::log_density, py::arg("sigma"))
        .def("support_lower", &VolatilityModel::support_lower)
        .def("support_upper", &VolatilityModel::support_upper)
        .def("kind_name", &VolatilityModel::kind_name)
        .def("parameters", &VolatilityModel::parameters)
        .def(
            "sample",
            [](const VolatilityModel& model, std::size_t count, std::uint64_t seed) {
                std::mt19937_64 rng(seed);
                std::vector<double> out(count);
                for (double& v : out) v = model.sample(rng);
                return out;
            },
            py::arg("count"), py::arg("seed") = 1);

    py::class_<TailAsymptote>(m, "TailAsymptote")
        .def_readonly("lambda_", &TailAsymptote::lambda)
        .def_readonly("beta", &TailAsymptote::beta)
        .def_readonly("log_amplitude", &TailAsymptote::log_amplitude)
        .def_readonly("z_ref", &TailAsymptote::z_ref)
        .def("log_at", &TailAsymptote::log_at, py::arg("z"))
        .def("at", &TailAsymptote::at, py::arg("z"));

    py::class_<ScalingFunction>(m, "ScalingFunction")
        .def(py::init<VolatilityModel>(), py::arg("model"))
        .def("__call__", &ScalingFunction::operator(), py::arg("z"))
        .def("log_value", &ScalingFunction::log_value, py::arg("z"))
        .def("tail_exponent", &ScalingFunction::tail_exponent)
        .def("matched_asymptote", &ScalingFunction::matched_asymptote, py::arg("z_ref"))
        .def("asymptotic_onset", &ScalingFunction::asymptotic_onset, py::arg("ratio") = 10.0)
        .def("unscaled_density", &ScalingFunction::unscaled_density, py::arg("r"), py::arg("n"));

    py::class_<SynthSpec>(m, "SynthSpec")
        .def(py::init([](std::size_t total_returns, std::size_t window_length,
                         std::uint64_t seed, std::int64_t base_interval, std::int64_t start_time,
                         double initial_price, bool emit_prices) {
                 SynthSpec spec;
                 spec.total_returns = total_returns;
                 spec.window_length = window_length;
                 spec.seed = seed;
                 spec.base_interval = base_interval;
                 spec.start_time = start_time;
                 spec.initial_price = initial_price;
                 spec.emit_prices = emit_prices;
                 return spec;
             }),
             py::arg("total_returns") = 0, py::arg("window_length") = 390, py::arg("seed") = 1,
             py::arg("base_interval") = 60, py::arg("start_time") = 946684800,
             py::arg("initial_price") = 100.0, py::arg("emit_prices") = true)
        .def_readwrite("total_returns", &SynthSpec::total_returns)
        .def_readwrite("window_length", &SynthSpec::window_length)
        .def_readwrite("seed", &SynthSpec::seed)
        .def_readwrite("base_interval", &SynthSpec::base_interval)
        .def_readwrite("start_time", &SynthSpec::start_time)
        .def_readwrite("initial_price", &SynthSpec::initial_price)
        .def_readwrite("emit_prices", &SynthSpec::emit_prices);

    py::class_<SynthResult>(m, "SynthResult")
        .def_readonly("returns", &SynthResult::returns)
        .def_readonly("epoch_sigmas", &SynthResult::epoch_sigmas)
        .def_readonly("prices", &SynthResult::prices);

    py::class_<StylizedFactsReport>(m, "StylizedFactsReport")
        .def_readonly("sample_size", &StylizedFactsReport::sample_size)
        .def_readonly("mean", &StylizedFactsReport::mean)
        .def_readonly("stddev", &StylizedFactsReport::stddev)
        .def_readonly("skewness", &StylizedFactsReport::skewness)
        .def_readonly("excess_kurtosis", &StylizedFactsReport::excess_kurtosis)
        .def_readonly("tail_alpha", &StylizedFactsReport::tail_alpha)
        .def_readonly("tail_x_min", &StylizedFactsReport::tail_x_min)
        .def_readonly("tail_size", &StylizedFactsReport::tail_size)
        .def_readonly("density_tail_slope", &StylizedFactsReport::density_tail_slope)
        .def_readonly("return_acf", &StylizedFactsReport::return_acf)
        .def_readonly("abs_return_acf", &StylizedFactsReport::abs_return_acf)
        .def_readonly("max_abs_return_acf", &StylizedFactsReport::max_abs_return_acf)
        .def_readonly("abs_acf_lag1", &StylizedFactsReport::abs_acf_lag1)
        .def_readonly("collapse", &StylizedFactsReport::collapse);

    m.def(
        "load_prices",
        [](const std::string& path, const std::string& timestamp_column,
           const std::string& price_column, std::int64_t base_interval) {
            CsvFormat format;
            format.timestamp_column = timestamp_column;
            format.price_column = price_column;
            LoadResult r = load_prices(path, format, base_interval);
            return r.series;
        },
        py::arg("path"), py::arg("timestamp_column") = "timestamp",
        py::arg("price_column") = "close", py::arg("base_interval") = 60);
    m.def("resample", &resample, py::arg("series"), py::arg("n"));
    m.def("log_returns", &log_returns, py::arg("prices"), py::arg("n") = 1,
          py::arg("cross_session") = false);
    m.def("windowed_volatility", &windowed_volatility, py::arg("returns"),
          py::arg("window_length"));
    m.def("autocorrelation", &autocorrelation, py::arg("values"), py::arg("max_lag"));
    m.def(
        "empirical_density",
        [](const std::vector<double>& values, std::size_t bins, bool logarithmic) {
            DensityOptions opts;
            opts.bin_count = bins;
            opts.scale = logarithmic ? BinScale::logarithmic : BinScale::uniform;
            return empirical_density(values, opts);
        },
        py::arg("values"), py::arg("bins") = 60, py::arg("logarithmic") = true);
    m.def("rescale_returns", &rescale_returns, py::arg("returns"), py::arg("n"));
    m.def("collapse_metric", &collapse_metric, py::arg("rescaled_samples"), py::arg("scales"));
    m.def(
        "fit_power_law",
        [](const std::vector<double>& values) { return fit_power_law(values); },
        py::arg("values"));
    m.def(
        "fit_stretched_exponential",
        [](const std::vector<double>& sigma, const std::vector<double>& density,
           const std::vector<double>& weights) {
            return fit_stretched_exponential(sigma, density, weights);
        },
        py::arg("sigma"), py::arg("density"), py::arg("weights") = std::vector<double>{});
    m.def(
        "tail_slope",
        [](const std::vector<double>& x, const std::vector<double>& density, double x_lo,
           double x_hi) { return tail_slope(x, density, x_lo, x_hi); },
        py::arg("x"), py::arg("density"), py::arg("x_lo"), py::arg("x_hi"));
    m.def("evaluate_scaling_function",
          [](const VolatilityModel& model, double z) { return evaluate_scaling_function(model, z); },
          py::arg("model"), py::arg("z"));
    m.def("predicted_unscaled_density",
          [](const VolatilityModel& model, std::size_t n, double r) {
              return predicted_unscaled_density(model, n, r);
          },
          py::arg("model"), py::arg("n"), py::arg("r"));
    m.def("asymptotic_tail", &asymptotic_tail, py::arg("z"), py::arg("lambda_"), py::arg("beta"));
    m.def("asymptotic_log_shape", &asymptotic_log_shape, py::arg("z"), py::arg("lambda_"),
          py::arg("beta"));
    m.def("generate", &generate, py::arg("model"), py::arg("spec"));
    m.def("stylized_facts_report", &stylized_facts_report, py::arg("prices"),
          py::arg("max_lag") = 20);
}
