#include "semnorm/vmf.hpp"

#include <algorithm>
#include <cmath>

#include <boost/random/beta_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace semnorm {

ClampedNorm clamp_norm(double l) {
    if (!std::isfinite(l)) fail(ErrorKind::InvalidArgument, "mean norm is not finite");
    if (l < 0.0 || l > 1.0 + kNormSlack) {
        fail(ErrorKind::InvalidArgument, "mean norm " + std::to_string(l) + " outside [0, 1]");
    }
    if (l >= kNormCeiling) return {kNormCeiling, true};
    return {std::max(l, kNormFloor), false};
}

double estimate_kappa(double l, std::uint32_t dim) {
    if (dim < 2) fail(ErrorKind::InvalidArgument, "kappa estimate needs dimension >= 2");
    if (!std::isfinite(l) || l < 0.0 || l > 1.0 + kNormSlack) {
        fail(ErrorKind::InvalidArgument, "mean norm " + std::to_string(l) + " outside [0, 1]");
    }
    l = std::min(l, kNormCeiling);
    const double d = dim;
    return l * (d - l * l) / ((1.0 - l) * (1.0 + l));
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) fail(ErrorKind::InvalidArgument, "dot product: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<double> estimate_mu(const TypeStats& stats) {
    if (!(stats.norm > 0.0)) {
        fail(ErrorKind::InvalidArgument,
             "mean direction of '" + stats.word_type + "' is undefined (mean vector is zero)");
    }
    std::vector<double> mu(stats.mean);
    for (double& x : mu) x /= stats.norm;
    return mu;
}

VmfParams fit_vmf(const TypeStats& stats, std::uint32_t dim) {
    return {estimate_mu(stats), estimate_kappa(stats.norm, dim)};
}

double log_in_base(double x, LogBase base) {
    return base == LogBase::Natural ? std::log(x) : std::log10(x);
}

CoveragePair coverage(double l_source, double l_target, LogBase base) {
    const double ls = clamp_norm(l_source).value;
    const double lt = clamp_norm(l_target).value;
    const double c = lt * (1.0 - ls) * (1.0 + ls) / (ls * (1.0 - lt) * (1.0 + lt));
    return {ls, lt, c, log_in_base(c, base)};
}

double kappa_ratio_exact(double l_source, double l_target, std::uint32_t dim) {
    const double ks = estimate_kappa(clamp_norm(l_source).value, dim);
    const double kt = estimate_kappa(clamp_norm(l_target).value, dim);
    if (ks == 0.0) fail(ErrorKind::InvalidArgument, "source concentration is zero");
    return kt / ks;
}

double naive_norm_ratio(double l_source, double l_target) {
    return clamp_norm(l_target).value / clamp_norm(l_source).value;
}

namespace {

void check_pair(const TypeStats& source, const TypeStats& target) {
    if (source.mean.size() != target.mean.size()) {
        fail(ErrorKind::InvalidArgument, "source and target statistics differ in dimension");
    }
}

std::vector<double> weighted_difference(const TypeStats& source, double ws, const TypeStats& target,
                                        double wt) {
    std::vector<double> out(source.mean.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = ws * source.mean[i] - wt * target.mean[i];
        if (!std::isfinite(out[i])) fail(ErrorKind::InvalidArgument, "non-finite score weight");
    }
    return out;
}

} // namespace

std::vector<double> representativeness_weights(const TypeStats& source, const TypeStats& target) {
    check_pair(source, target);
    const double ls = clamp_norm(source.norm).value;
    const double lt = clamp_norm(target.norm).value;
    return weighted_difference(source, 1.0 / ((1.0 - ls) * (1.0 + ls)), target,
                               1.0 / ((1.0 - lt) * (1.0 + lt)));
}

double representativeness(std::span<const double> x, const TypeStats& source, const TypeStats& target) {
    const auto w = representativeness_weights(source, target);
    if (x.size() != w.size()) fail(ErrorKind::InvalidArgument, "instance vector dimension mismatch");
    const double r = dot(w, x);
    if (!std::isfinite(r)) fail(ErrorKind::InvalidArgument, "non-finite representativeness");
    return r;
}

std::vector<double> llr_weights_exact(const TypeStats& source, const TypeStats& target, std::uint32_t dim) {
    check_pair(source, target);
    if (dim < 2) fail(ErrorKind::InvalidArgument, "dimension must be >= 2");
    const double d = dim;
    const double ls = clamp_norm(source.norm).value;
    const double lt = clamp_norm(target.norm).value;
    return weighted_difference(source, (d - ls * ls) / ((1.0 - ls) * (1.0 + ls)), target,
                               (d - lt * lt) / ((1.0 - lt) * (1.0 + lt)));
}

// ---------------------------------------------------------------------------

std::vector<double> random_unit_vector(std::size_t dim, std::mt19937_64& engine) {
    boost::random::normal_distribution<double> normal;
    std::vector<double> v(dim);
    double sq = 0.0;
    do {
        sq = 0.0;
        for (double& x : v) {
            x = normal(engine);
            sq += x * x;
        }
    } while (sq == 0.0);
    const double norm = std::sqrt(sq);
    for (double& x : v) x /= norm;
    return v;
}

VmfSampler::VmfSampler(std::span<const double> mu, double kappa) : kappa_(kappa) {
    if (mu.size() < 2) fail(ErrorKind::InvalidArgument, "vMF sampling needs dimension >= 2");
    if (!std::isfinite(kappa) || kappa < 0.0) {
        fail(ErrorKind::InvalidArgument, "kappa must be finite and non-negative");
    }
    mu_ = normalize(mu);
    const double m = static_cast<double>(mu_.size()) - 1.0;
    b_ = m / (2.0 * kappa_ + std::sqrt(4.0 * kappa_ * kappa_ + m * m));
    x0_ = (1.0 - b_) / (1.0 + b_);
    // log(1 - x0^2) = log(4b / (1+b)^2), written to avoid cancellation.
    c_ = kappa_ * x0_ + m * (std::log(4.0 * b_) - 2.0 * std::log1p(b_));
}

double VmfSampler::sample_w(std::mt19937_64& engine) const {
    const double m = static_cast<double>(mu_.size()) - 1.0;
    boost::random::beta_distribution<double> beta(m / 2.0, m / 2.0);
    boost::random::uniform_01<double> uniform;
    while (true) {
        const double z = beta(engine);
        const double denom = 1.0 - (1.0 - b_) * z;
        const double w = (1.0 - (1.0 + b_) * z) / denom;
        // 1 - x0 w = 2b / ((1+b) denom)
        const double one_minus_x0w = 2.0 * b_ / ((1.0 + b_) * denom);
        const double u = uniform(engine);
        if (kappa_ * w + m * std::log(one_minus_x0w) - c_ >= std::log(u)) return w;
    }
}

std::vector<double> VmfSampler::operator()(std::mt19937_64& engine) const {
    const double w = sample_w(engine);
    const std::size_t d = mu_.size();

    // Tangent direction: uniform, then projected off mu.
    std::vector<double> v;
    double vnorm = 0.0;
    do {
        v = random_unit_vector(d, engine);
        const double along = dot(v, mu_);
        vnorm = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            v[i] -= along * mu_[i];
            vnorm += v[i] * v[i];
        }
        vnorm = std::sqrt(vnorm);
    } while (vnorm < 1e-12);

    const double s = std::sqrt(std::max(0.0, (1.0 - w) * (1.0 + w)));
    std::vector<double> x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = w * mu_[i] + s * v[i] / vnorm;
    return x;
}

std::vector<std::vector<double>> sample_vmf(std::span<const double> mu, double kappa, std::size_t count,
                                            std::uint64_t seed) {
    if (count < 1) fail(ErrorKind::InvalidArgument, "sample count must be >= 1");
    const VmfSampler sampler(mu, kappa);
    std::mt19937_64 engine(seed);
    std::vector<std::vector<double>> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(sampler(engine));
    return out;
}

} // namespace semnorm
