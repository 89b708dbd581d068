#pragma once

// Test-only oracles. Nothing here calls into the library's numeric code:
// scores are recomputed in long double straight from their definitions, and
// random data comes from the standard library's distributions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "semnorm/aggregate.hpp"
#include "semnorm/embstore.hpp"

namespace semnorm::testing {

using Vec = std::vector<double>;

inline Vec random_unit(std::size_t d, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Vec v(d);
    long double sq = 0;
    for (auto& x : v) {
        x = normal(rng);
        sq += static_cast<long double>(x) * x;
    }
    const long double n = std::sqrt(sq);
    for (auto& x : v) x = static_cast<double>(x / n);
    return v;
}

inline long double oracle_norm(const Vec& v) {
    long double sq = 0;
    for (double x : v) sq += static_cast<long double>(x) * x;
    return std::sqrt(sq);
}

/// Mean of unit-normalized inputs, summed naively in long double.
struct OracleMean {
    std::vector<long double> mean;
    long double norm = 0;
    std::uint64_t n = 0;
};

inline OracleMean oracle_mean(const std::vector<Vec>& xs) {
    OracleMean m;
    m.n = xs.size();
    m.mean.assign(xs.front().size(), 0.0L);
    for (const auto& x : xs) {
        const long double nx = oracle_norm(x);
        for (std::size_t i = 0; i < x.size(); ++i) m.mean[i] += x[i] / nx;
    }
    long double sq = 0;
    for (auto& v : m.mean) {
        v /= static_cast<long double>(m.n);
        sq += v * v;
    }
    m.norm = std::sqrt(sq);
    return m;
}

inline long double clamp_l(long double l) {
    return std::clamp(l, 1e-9L, 1.0L - 1e-6L);
}

inline long double oracle_kappa(long double l, long double d) {
    return l * (d - l * l) / (1 - l * l);
}

inline long double oracle_coverage(long double ls, long double lt) {
    ls = clamp_l(ls);
    lt = clamp_l(lt);
    return lt * (1 - ls * ls) / (ls * (1 - lt * lt));
}

inline long double oracle_representativeness(const Vec& x, const std::vector<long double>& ms, long double ls,
                                              const std::vector<long double>& mt, long double lt) {
    ls = clamp_l(ls);
    lt = clamp_l(lt);
    long double r = 0;
    for (std::size_t i = 0; i < x.size(); ++i) r += (ms[i] / (1 - ls * ls) - mt[i] / (1 - lt * lt)) * x[i];
    return r;
}

/// Builds library TypeStats from plain unit vectors.
inline TypeStats stats_of(const std::string& word, const std::vector<Vec>& xs) {
    Vec sum(xs.front().size(), 0.0);
    for (const auto& x : xs)
        for (std::size_t i = 0; i < x.size(); ++i) sum[i] += x[i];
    return TypeStats::from_sum(word, xs.size(), sum);
}

/// Kendall tau-a by enumerating all pairs.
inline double kendall_tau(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    long long concordant = 0, discordant = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = (a[i] - a[j]) * (b[i] - b[j]);
            if (s > 0) ++concordant;
            else if (s < 0) ++discordant;
        }
    }
    return static_cast<double>(concordant - discordant) / (static_cast<double>(n) * (n - 1) / 2.0);
}

inline std::vector<double> average_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return v[i] < v[j]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    return pearson(average_ranks(a), average_ranks(b));
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

/// Least-squares non-increasing fit (pool adjacent violators).
inline std::vector<double> isotonic_nonincreasing(const std::vector<double>& y) {
    struct Block {
        double sum;
        std::size_t count;
    };
    std::vector<Block> blocks;
    for (double v : y) {
        blocks.push_back({v, 1});
        while (blocks.size() > 1) {
            auto& b = blocks[blocks.size() - 1];
            auto& a = blocks[blocks.size() - 2];
            if (a.sum / a.count >= b.sum / b.count) break;
            a.sum += b.sum;
            a.count += b.count;
            blocks.pop_back();
        }
    }
    std::vector<double> fit;
    for (const auto& b : blocks) fit.insert(fit.end(), b.count, b.sum / b.count);
    return fit;
}

inline InstanceRecord make_record(const std::string& word, std::uint64_t id, const Vec& v,
                                  const std::string& sentence = "") {
    InstanceRecord r;
    r.word_type = word;
    r.instance_id = id;
    r.sentence = sentence.empty() ? word + " #" + std::to_string(id) : sentence;
    r.vector.assign(v.begin(), v.end());
    return r;
}

inline StreamHeader make_header(std::uint32_t dim, std::uint64_t count, const std::string& label = "corpus") {
    StreamHeader h;
    h.dim = dim;
    h.model_id = "test-model";
    h.corpus_label = label;
    h.record_count = count;
    return h;
}

/// Unique scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::mt19937_64 rng(std::random_device{}());
        path_ = std::filesystem::temp_directory_path() / ("semnorm-test-" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace semnorm::testing
