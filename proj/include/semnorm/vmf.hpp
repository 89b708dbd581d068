#pragma once

// Directional statistics on the unit hypersphere for the von Mises-Fisher
// model f(x; mu, kappa) ~ exp(kappa mu^T x). The normalization constant is
// never evaluated: every score here depends on x only through mu^T x.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "semnorm/aggregate.hpp"

namespace semnorm {

/// Mean norms are clamped into [kNormFloor, kNormCeiling] before scoring;
/// coverage and the kappa estimate are singular at l = 1.
inline constexpr double kNormFloor = 1e-9;
inline constexpr double kNormCeiling = 1.0 - 1e-6;

/// Accepted slack above 1 for norms that picked up rounding error.
inline constexpr double kNormSlack = 1e-9;

struct ClampedNorm {
    double value;
    /// The norm reached the upper clamp: effectively identical contexts.
    bool degenerate;
};

ClampedNorm clamp_norm(double l);

struct VmfParams {
    std::vector<double> mu;
    double kappa = 0.0;
};

/// Approximate maximum likelihood concentration, l (d - l^2) / (1 - l^2).
/// Only the upper clamp applies, so l = 0 gives exactly 0.
double estimate_kappa(double l, std::uint32_t dim);

/// Mean direction mean / l. Throws when l = 0.
std::vector<double> estimate_mu(const TypeStats& stats);

VmfParams fit_vmf(const TypeStats& stats, std::uint32_t dim);

enum class LogBase { Natural, Ten };

double log_in_base(double x, LogBase base);

struct CoveragePair {
    double l_source;
    double l_target;
    double coverage;
    double log_coverage;
};

/// l_T (1 - l_S^2) / (l_S (1 - l_T^2)) on clamped norms. Large values mean
/// the word covers wider meanings in the source than in the target.
CoveragePair coverage(double l_source, double l_target, LogBase base = LogBase::Natural);

/// kappa_T / kappa_S with the (d - l^2) factors kept.
double kappa_ratio_exact(double l_source, double l_target, std::uint32_t dim);

/// l_T / l_S, the score obtained with the coarse approximation kappa ~ l.
double naive_norm_ratio(double l_source, double l_target);

/// mean_S / (1 - l_S^2) - mean_T / (1 - l_T^2). Dotting a unit vector with
/// this gives its representativeness.
std::vector<double> representativeness_weights(const TypeStats& source, const TypeStats& target);

double representativeness(std::span<const double> x, const TypeStats& source, const TypeStats& target);

/// (d - l_S^2)/(1 - l_S^2) mean_S - (d - l_T^2)/(1 - l_T^2) mean_T, the
/// x-dependent part of the log-likelihood ratio before approximating d >> l.
std::vector<double> llr_weights_exact(const TypeStats& source, const TypeStats& target, std::uint32_t dim);

double dot(std::span<const double> a, std::span<const double> b);

/// Draws unit vectors from vMF(mu, kappa) with Wood's rejection scheme:
/// the component along mu is sampled by rejection, the tangent part is a
/// uniform direction orthogonal to mu.
class VmfSampler {
public:
    VmfSampler(std::span<const double> mu, double kappa);

    std::vector<double> operator()(std::mt19937_64& engine) const;

    std::size_t dim() const noexcept { return mu_.size(); }
    double kappa() const noexcept { return kappa_; }

private:
    double sample_w(std::mt19937_64& engine) const;

    std::vector<double> mu_;
    double kappa_;
    double b_;
    double x0_;
    double c_;
};

std::vector<std::vector<double>> sample_vmf(std::span<const double> mu, double kappa,
                                            std::size_t count, std::uint64_t seed);

/// Uniformly distributed unit vector.
std::vector<double> random_unit_vector(std::size_t dim, std::mt19937_64& engine);

} // namespace semnorm
