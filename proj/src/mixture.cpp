#include "volmix/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace volmix {

namespace {

constexpr double kLogSqrt2Pi = 0.9189385332046727;  // log(sqrt(2*pi))
constexpr double kInvSqrt2Pi = 0.3989422804014327;  // 1/sqrt(2*pi)

// Mass beyond which the tabulated sampler truncates the stretched
// exponential: lambda * (sigma^beta - sigma_lo^beta) = 40 leaves ~e^-40 of
// relative density behind, far below sampling resolution.
constexpr double kStretchedTruncation = 40.0;
constexpr std::size_t kInverseCdfGridSize = 100000;

}  // namespace

VolatilityModel VolatilityModel::point_mass(double sigma0) {
    if (!(sigma0 > 0.0)) throw std::invalid_argument("point_mass: sigma0 must be > 0");
    VolatilityModel m;
    m.kind_ = VolatilityKind::point_mass;
    m.p1_ = sigma0;
    m.lower_ = sigma0;
    m.upper_ = sigma0;
    return m;
}

VolatilityModel VolatilityModel::pareto_tail(double alpha, double sigma_min) {
    if (!(alpha > 1.0)) throw std::invalid_argument("pareto_tail: alpha must be > 1");
    if (!(sigma_min > 0.0)) throw std::invalid_argument("pareto_tail: sigma_min must be > 0");
    VolatilityModel m;
    m.kind_ = VolatilityKind::pareto_tail;
    m.p1_ = alpha;
    m.p2_ = sigma_min;
    m.lower_ = sigma_min;
    m.upper_ = std::numeric_limits<double>::infinity();
    // h(s) = (alpha-1) sigma_min^(alpha-1) s^-alpha on [sigma_min, inf)
    m.log_norm_ = std::log(alpha - 1.0) + (alpha - 1.0) * std::log(sigma_min);
    return m;
}

VolatilityModel VolatilityModel::stretched_exp(double lambda, double beta, double sigma_lo) {
    if (!(lambda > 0.0)) throw std::invalid_argument("stretched_exp: lambda must be > 0");
    if (!(beta > 0.0 && beta <= 1.0))
        throw std::invalid_argument("stretched_exp: beta must be in (0, 1]");
    if (!(sigma_lo > 0.0)) throw std::invalid_argument("stretched_exp: sigma_lo must be > 0");
    VolatilityModel m;
    m.kind_ = VolatilityKind::stretched_exp;
    m.p1_ = lambda;
    m.p2_ = beta;
    m.p3_ = sigma_lo;
    m.lower_ = sigma_lo;
    m.upper_ = std::numeric_limits<double>::infinity();
    // Normalize with the peak value factored out: the density is written as
    // exp(-lambda (s^beta - sigma_lo^beta)) / J, which keeps both the
    // normalization integral J and log_density well scaled even when
    // lambda * sigma_lo^beta is large.
    const double a0 = std::pow(sigma_lo, beta);
    const double j = integrate_semi_infinite(
        [&](double s) { return std::exp(-lambda * (std::pow(s, beta) - a0)); }, sigma_lo);
    m.log_norm_ = -std::log(j);
    m.build_sampler();
    return m;
}

VolatilityModel VolatilityModel::lognormal(double mu, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("lognormal: s must be > 0");
    VolatilityModel m;
    m.kind_ = VolatilityKind::lognormal;
    m.p1_ = mu;
    m.p2_ = s;
    m.lower_ = 0.0;
    m.upper_ = std::numeric_limits<double>::infinity();
    return m;
}

VolatilityModel VolatilityModel::empirical(std::vector<double> edges,
                                           std::vector<double> weights) {
    if (edges.size() < 2 || weights.size() != edges.size() - 1)
        throw std::invalid_argument("empirical: need k+1 edges for k weights");
    if (!(edges.front() > 0.0))
        throw std::invalid_argument("empirical: support must stay above zero");
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(edges[i + 1] > edges[i]))
            throw std::invalid_argument("empirical: edges must increase strictly");
        if (weights[i] < 0.0) throw std::invalid_argument("empirical: negative weight");
        total += weights[i];
    }
    if (!(total > 0.0)) throw std::invalid_argument("empirical: zero total mass");

    VolatilityModel m;
    m.kind_ = VolatilityKind::empirical;
    m.lower_ = edges.front();
    m.upper_ = edges.back();
    m.edges_ = std::move(edges);
    m.probs_.resize(weights.size());
    m.cum_.resize(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        m.probs_[i] = weights[i] / total;
        acc += m.probs_[i];
        m.cum_[i] = acc;
    }
    m.cum_.back() = 1.0;
    return m;
}

double VolatilityModel::log_density(double sigma) const {
    switch (kind_) {
        case VolatilityKind::point_mass:
            throw std::logic_error("point_mass has no density (degenerate distribution)");
        case VolatilityKind::pareto_tail:
            if (sigma < lower_) return -std::numeric_limits<double>::infinity();
            return log_norm_ - p1_ * std::log(sigma);
        case VolatilityKind::stretched_exp:
            if (sigma < lower_) return -std::numeric_limits<double>::infinity();
            return log_norm_ - p1_ * (std::pow(sigma, p2_) - std::pow(p3_, p2_));
        case VolatilityKind::lognormal: {
            if (!(sigma > 0.0)) return -std::numeric_limits<double>::infinity();
            const double t = (std::log(sigma) - p1_) / p2_;
            return -std::log(sigma) - std::log(p2_) - kLogSqrt2Pi - 0.5 * t * t;
        }
        case VolatilityKind::empirical: {
            if (sigma < edges_.front() || sigma >= edges_.back())
                return -std::numeric_limits<double>::infinity();
            const auto it = std::upper_bound(edges_.begin(), edges_.end(), sigma);
            const std::size_t i = static_cast<std::size_t>(it - edges_.begin()) - 1;
            const double d = probs_[i] / (edges_[i + 1] - edges_[i]);
            return d > 0.0 ? std::log(d) : -std::numeric_limits<double>::infinity();
        }
    }
    throw std::logic_error("unreachable");
}

double VolatilityModel::density(double sigma) const { return std::exp(log_density(sigma)); }

void VolatilityModel::build_sampler() {
    // Tabulated inverse CDF for the stretched exponential on a log-spaced
    // grid over the truncated support.
    const double lambda = p1_, beta = p2_, sigma_lo = p3_;
    const double a0 = std::pow(sigma_lo, beta);
    const double sigma_hi = std::pow(a0 + kStretchedTruncation / lambda, 1.0 / beta);
    const std::size_t n = kInverseCdfGridSize;

    icdf_sigma_.resize(n);
    icdf_u_.resize(n);
    const double log_lo = std::log(sigma_lo);
    const double log_step = (std::log(sigma_hi) - log_lo) / static_cast<double>(n - 1);
    std::vector<double> dens(n);
    for (std::size_t i = 0; i < n; ++i) {
        icdf_sigma_[i] = std::exp(log_lo + static_cast<double>(i) * log_step);
        dens[i] = std::exp(-lambda * (std::pow(icdf_sigma_[i], beta) - a0));
    }
    icdf_sigma_.front() = sigma_lo;
    icdf_sigma_.back() = sigma_hi;

    icdf_u_[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i)
        icdf_u_[i] = icdf_u_[i - 1] + 0.5 * (dens[i] + dens[i - 1]) *
                                          (icdf_sigma_[i] - icdf_sigma_[i - 1]);
    const double total = icdf_u_.back();
    for (double& u : icdf_u_) u /= total;
    icdf_u_.back() = 1.0;
}

double VolatilityModel::sample(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    switch (kind_) {
        case VolatilityKind::point_mass:
            return p1_;
        case VolatilityKind::pareto_tail:
            // Inverse CDF: sigma_min * (1-u)^(-1/(alpha-1)).
            return p2_ * std::pow(1.0 - unif(rng), -1.0 / (p1_ - 1.0));
        case VolatilityKind::lognormal: {
            std::lognormal_distribution<double> ln(p1_, p2_);
            return ln(rng);
        }
        case VolatilityKind::stretched_exp: {
            const double u = unif(rng);
            const auto it = std::upper_bound(icdf_u_.begin(), icdf_u_.end(), u);
            if (it == icdf_u_.begin()) return icdf_sigma_.front();
            if (it == icdf_u_.end()) return icdf_sigma_.back();
            const std::size_t j = static_cast<std::size_t>(it - icdf_u_.begin());
            const double span = icdf_u_[j] - icdf_u_[j - 1];
            const double frac = span > 0.0 ? (u - icdf_u_[j - 1]) / span : 0.0;
            return icdf_sigma_[j - 1] + frac * (icdf_sigma_[j] - icdf_sigma_[j - 1]);
        }
        case VolatilityKind::empirical: {
            const double u = unif(rng);
            const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
            const std::size_t i = std::min<std::size_t>(
                static_cast<std::size_t>(it - cum_.begin()), probs_.size() - 1);
            return edges_[i] + unif(rng) * (edges_[i + 1] - edges_[i]);
        }
    }
    throw std::logic_error("unreachable");
}

std::vector<std::pair<std::string, double>> VolatilityModel::parameters() const {
    switch (kind_) {
        case VolatilityKind::point_mass:
            return {{"sigma0", p1_}};
        case VolatilityKind::pareto_tail:
            return {{"alpha", p1_}, {"sigma_min", p2_}};
        case VolatilityKind::stretched_exp:
            return {{"lambda", p1_}, {"beta", p2_}, {"sigma_lo", p3_}};
        case VolatilityKind::lognormal:
            return {{"mu", p1_}, {"s", p2_}};
        case VolatilityKind::empirical:
            return {{"bins", static_cast<double>(probs_.size())},
                    {"sigma_lo", edges_.front()},
                    {"sigma_hi", edges_.back()}};
    }
    throw std::logic_error("unreachable");
}

std::string VolatilityModel::kind_name() const {
    switch (kind_) {
        case VolatilityKind::point_mass: return "point_mass";
        case VolatilityKind::pareto_tail: return "pareto_tail";
        case VolatilityKind::stretched_exp: return "stretched_exp";
        case VolatilityKind::lognormal: return "lognormal";
        case VolatilityKind::empirical: return "empirical";
    }
    throw std::logic_error("unreachable");
}

double asymptotic_log_shape(double z, double lambda, double beta) {
    if (!(z > 0.0)) throw std::invalid_argument("asymptotic_log_shape: z must be > 0");
    if (!(lambda > 0.0) || !(beta > 0.0 && beta <= 1.0))
        throw std::invalid_argument("asymptotic_log_shape: bad (lambda, beta)");
    const double u = std::pow(lambda * beta * std::pow(z, beta), 2.0 / (beta + 2.0));
    return -(beta / (beta + 2.0)) * std::log(z) - ((beta + 2.0) / (2.0 * beta)) * u;
}

double asymptotic_tail(double z, double lambda, double beta) {
    return std::exp(asymptotic_log_shape(z, lambda, beta));
}

double TailAsymptote::at(double z) const { return std::exp(log_at(z)); }

ScalingFunction::ScalingFunction(VolatilityModel model, QuadratureSpec quadrature)
    : model_(std::move(model)), quad_(quadrature) {}

double ScalingFunction::operator()(double z) const {
    const double zz = std::abs(z);
    if (model_.kind() == VolatilityKind::point_mass) {
        const double s = model_.support_lower();
        const double t = zz / s;
        return kInvSqrt2Pi / s * std::exp(-0.5 * t * t);
    }
    if (model_.kind() == VolatilityKind::pareto_tail) {
        // Substituting t = z^2/(2 sigma^2) reduces the mixture to a lower
        // incomplete gamma:
        //   int_{s}^inf u^{-1-alpha} e^{-z^2/2u^2} du
        //     = 2^{alpha/2-1} z^-alpha gamma(alpha/2, z^2/(2 s^2)).
        // Deep in the tail the integrand peaks far above s, where adaptive
        // subdivision of the warped semi-infinite interval stalls; the closed
        // form is uniformly accurate instead.
        const double alpha = model_.p1_;
        const double s_min = model_.p2_;
        const double t = 0.5 * zz * zz / (s_min * s_min);
        if (t < 1e-12)  // z << s_min limit: gamma(a, t) ~ t^a / a
            return kInvSqrt2Pi * (alpha - 1.0) / (alpha * s_min);
        const double norm = (alpha - 1.0) * std::pow(s_min, alpha - 1.0);
        const double integral = std::pow(2.0, 0.5 * alpha - 1.0) * std::pow(zz, -alpha) *
                                boost::math::tgamma_lower(0.5 * alpha, t);
        return kInvSqrt2Pi * norm * integral;
    }
    if (model_.kind() == VolatilityKind::empirical) {
        // The histogram density is piecewise constant, which defeats adaptive
        // quadrature's error estimate at every bin edge.  Within a bin the
        // kernel integral has a closed form instead:
        //   int s^-1 exp(-z^2/2s^2) ds = (E1(z^2/2s1^2) - E1(z^2/2s0^2)) / 2
        // for s in [s0, s1], degenerating to log(s1/s0) as z -> 0.
        double integral = 0.0;
        for (std::size_t i = 0; i + 1 < model_.edges_.size(); ++i) {
            if (model_.probs_[i] <= 0.0) continue;
            const double s0 = model_.edges_[i];
            const double s1 = model_.edges_[i + 1];
            const double density = model_.probs_[i] / (s1 - s0);
            const double b = 0.5 * zz * zz / (s0 * s0);
            double piece;
            if (b < 1e-12) {
                piece = std::log(s1 / s0);
            } else {
                const double a = 0.5 * zz * zz / (s1 * s1);
                piece = 0.5 * (boost::math::expint(1, a) - boost::math::expint(1, b));
            }
            integral += density * piece;
        }
        return kInvSqrt2Pi * integral;
    }
    // Integrand assembled as one exponential of summed logs so that the far
    // tails (log h -> -inf) flush cleanly to zero instead of producing
    // 0 * inf.
    const auto integrand = [&](double sigma) -> double {
        const double lh = model_.log_density(sigma);
        if (!std::isfinite(lh)) return 0.0;
        const double t = zz / sigma;
        return std::exp(lh - std::log(sigma) - 0.5 * t * t);
    };
    double integral;
    if (std::isfinite(model_.support_upper()))
        integral = integrate(integrand, model_.support_lower(), model_.support_upper(), quad_);
    else
        integral = integrate_semi_infinite(integrand, model_.support_lower(), quad_);
    return kInvSqrt2Pi * integral;
}

double ScalingFunction::log_value(double z) const { return std::log((*this)(z)); }

double ScalingFunction::tail_exponent() const {
    if (model_.kind() == VolatilityKind::pareto_tail) return model_.parameters()[0].second;
    // Bounded support or faster-than-power decay: no power-law tail.
    return std::numeric_limits<double>::infinity();
}

TailAsymptote ScalingFunction::matched_asymptote(double z_ref) const {
    if (model_.kind() != VolatilityKind::stretched_exp)
        throw std::logic_error("matched_asymptote: model is not stretched_exp");
    const auto params = model_.parameters();
    TailAsymptote a;
    a.lambda = params[0].second;
    a.beta = params[1].second;
    a.z_ref = z_ref;
    a.log_amplitude = log_value(z_ref) - asymptotic_log_shape(z_ref, a.lambda, a.beta);
    return a;
}

double ScalingFunction::asymptotic_onset(double ratio) const {
    if (model_.kind() != VolatilityKind::stretched_exp)
        throw std::logic_error("asymptotic_onset: model is not stretched_exp");
    const auto params = model_.parameters();
    const double lambda = params[0].second;
    const double beta = params[1].second;
    const double sigma_lo = params[2].second;
    // Saddle sigma* = (z^2 / (lambda beta))^{1/(beta+2)} = ratio * sigma_lo.
    return std::sqrt(lambda * beta) * std::pow(ratio * sigma_lo, 0.5 * (beta + 2.0));
}

double ScalingFunction::unscaled_density(double r, std::size_t n) const {
    if (n == 0) throw std::invalid_argument("unscaled_density: n must be >= 1");
    const double root_n = std::sqrt(static_cast<double>(n));
    return (*this)(r / root_n) / root_n;
}

double evaluate_scaling_function(const VolatilityModel& model, double z,
                                 const QuadratureSpec& quadrature) {
    return ScalingFunction(model, quadrature)(z);
}

double scaling_function_tail_exponent(const VolatilityModel& model) {
    return ScalingFunction(model).tail_exponent();
}

double predicted_unscaled_density(const VolatilityModel& model, std::size_t n, double r,
                                  const QuadratureSpec& quadrature) {
    return ScalingFunction(model, quadrature).unscaled_density(r, n);
}

}  // namespace volmix
