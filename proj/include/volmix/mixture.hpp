#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "volmix/quadrature.hpp"

namespace volmix {

enum class VolatilityKind {
    point_mass,     // h = delta(sigma - sigma0): plain Gaussian returns
    pareto_tail,    // h ~ sigma^-alpha on [sigma_min, inf), alpha > 1
    stretched_exp,  // h ~ exp(-lambda sigma^beta) on [sigma_lo, inf)
    lognormal,      // log sigma ~ N(mu, s^2)
    empirical,      // histogram over [edges[i], edges[i+1]) with given weights
};

/// Normalized volatility density h(sigma) on (0, inf). Construct via the
/// factory functions below; they validate parameters and normalize. Every
/// kind keeps the 1/sigma moment finite (support bounded away from zero, or
/// density vanishing fast enough at zero), so the mixed return density stays
/// finite at the origin.
class VolatilityModel {
  public:
    static VolatilityModel point_mass(double sigma0);
    static VolatilityModel pareto_tail(double alpha, double sigma_min);
    static VolatilityModel stretched_exp(double lambda, double beta, double sigma_lo);
    static VolatilityModel lognormal(double mu, double s);
    static VolatilityModel empirical(std::vector<double> edges, std::vector<double> weights);

    VolatilityKind kind() const { return kind_; }

    /// log h(sigma); -infinity outside the support. point_mass has no
    /// density (delta); calling this on it throws.
    double log_density(double sigma) const;
    double density(double sigma) const;

    /// Support [lower, upper); upper is +infinity for unbounded kinds.
    double support_lower() const { return lower_; }
    double support_upper() const { return upper_; }

    /// Draw one volatility level.
    double sample(std::mt19937_64& rng) const;

    /// Named parameters in declaration order, e.g. {("alpha",4),("sigma_min",1)}.
    std::vector<std::pair<std::string, double>> parameters() const;
    std::string kind_name() const;

  private:
    VolatilityModel() = default;

    VolatilityKind kind_ = VolatilityKind::point_mass;
    double lower_ = 0.0;
    double upper_ = 0.0;
    double p1_ = 0.0, p2_ = 0.0, p3_ = 0.0;  // meaning depends on kind
    double log_norm_ = 0.0;  // log normalization constant applied to h
    // empirical kind: bin edges, per-bin probability, cumulative probability.
    std::vector<double> edges_;
    std::vector<double> probs_;
    std::vector<double> cum_;
    // stretched_exp sampling: tabulated inverse CDF on a log-spaced grid.
    std::vector<double> icdf_u_;
    std::vector<double> icdf_sigma_;

    void build_sampler();
    friend class ScalingFunction;
};

/// Log of the tail asymptote shape (amplitude left out):
///   -(beta/(beta+2)) log z - ((beta+2)/(2 beta)) (lambda beta z^beta)^{2/(beta+2)}
/// Saddle-point form of the mixture integral for h ~ exp(-lambda sigma^beta);
/// for beta = 1 the exponent reduces to -(3/2)(lambda z)^{2/3}.
double asymptotic_log_shape(double z, double lambda, double beta);

/// The asymptote itself, amplitude 1: exp(asymptotic_log_shape(z, lambda, beta)).
double asymptotic_tail(double z, double lambda, double beta);

/// Stretched-exponential tail asymptote with its amplitude pinned by one
/// quadrature evaluation at a reference point.
struct TailAsymptote {
    double lambda = 0.0;
    double beta = 0.0;
    double log_amplitude = 0.0;
    double z_ref = 0.0;

    double log_at(double z) const { return log_amplitude + asymptotic_log_shape(z, lambda, beta); }
    double at(double z) const;
};

/// The scale-free return density F(z) = (2 pi)^{-1/2} * integral of
/// sigma^{-1} exp(-z^2 / (2 sigma^2)) h(sigma) d sigma. Gaussian returns
/// whose volatility is drawn from h land on this single curve once rescaled
/// by sqrt(n), which is why distributions at different aggregation scales
/// collapse onto it.
class ScalingFunction {
  public:
    explicit ScalingFunction(VolatilityModel model, QuadratureSpec quadrature = {});

    const VolatilityModel& model() const { return model_; }

    /// F(z) by adaptive quadrature at the configured relative tolerance.
    /// Kinds with an analytic kernel integral use it instead: point_mass
    /// (Gaussian), pareto_tail (incomplete gamma), empirical (exponential
    /// integral per bin). Even in z.
    double operator()(double z) const;
    double log_value(double z) const;

    /// Power-law tail exponent of F: a pareto_tail mixing density with
    /// exponent alpha gives F(z) ~ z^-alpha, so this returns alpha. Kinds
    /// with thinner-than-power-law tails return +infinity.
    double tail_exponent() const;

    /// Amplitude-matched tail asymptote (stretched_exp kind only; throws
    /// otherwise): amplitude chosen so at(z_ref) equals the quadrature value.
    TailAsymptote matched_asymptote(double z_ref) const;

    /// Smallest z where the saddle point sigma* = (z^2/(lambda beta))^{1/(beta+2)}
    /// reaches `ratio` times the support's lower edge; the asymptote is
    /// accurate beyond this. stretched_exp kind only.
    double asymptotic_onset(double ratio = 10.0) const;

    /// Unscaled n-step return density F_n(r) = n^{-1/2} F(r / sqrt(n)).
    double unscaled_density(double r, std::size_t n) const;

  private:
    VolatilityModel model_;
    QuadratureSpec quad_;
};

// Free-function forms of the main operations (thin wrappers; convenient for
// bindings and one-off evaluations).
double evaluate_scaling_function(const VolatilityModel& model, double z,
                                 const QuadratureSpec& quadrature = {});
double scaling_function_tail_exponent(const VolatilityModel& model);
double predicted_unscaled_density(const VolatilityModel& model, std::size_t n, double r,
                                  const QuadratureSpec& quadrature = {});

}  // namespace volmix
