#include "semnorm/stability.hpp"

#include <cmath>
#include <ostream>
#include <string>
#include <unordered_map>

#include "text.hpp"

namespace semnorm {

namespace {

struct Prefix {
    std::uint64_t k = 0;
    double last_norm = 0.0;
    std::vector<double> sum;
};

} // namespace

StabilityCurve stability_curve(StreamReader& reader, std::size_t max_n) {
    if (max_n < 2) fail(ErrorKind::InvalidArgument, "max_n must be at least 2");
    const std::size_t dim = reader.header().dim;

    // Differences are summed in stream order per k.
    std::vector<double> total(max_n + 1, 0.0);
    StabilityCurve curve;
    curve.max_n = max_n;
    curve.support.assign(max_n + 1, 0);

    std::unordered_map<std::string, Prefix> prefixes;
    while (auto rec = reader.next()) {
        auto& p = prefixes[rec->word_type];
        if (p.k >= max_n) continue;
        if (p.sum.empty()) p.sum.assign(dim, 0.0);
        const auto unit = normalize(std::span<const float>(rec->vector));
        ++p.k;
        double sq = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            p.sum[i] += unit[i];
            const double m = p.sum[i] / static_cast<double>(p.k);
            sq += m * m;
        }
        const double norm = std::sqrt(sq);
        if (p.k >= 2) {
            total[p.k] += std::abs(norm - p.last_norm);
            ++curve.support[p.k];
        }
        p.last_norm = norm;
        if (p.k == max_n) {
            p.sum.clear();
            p.sum.shrink_to_fit();
        }
    }

    curve.avg_diff.assign(max_n + 1, 0.0);
    for (std::size_t k = 2; k <= max_n; ++k) {
        if (curve.support[k] > 0) curve.avg_diff[k] = total[k] / static_cast<double>(curve.support[k]);
    }
    return curve;
}

void write_stability_tsv(std::ostream& out, const StabilityCurve& curve) {
    out << "k\tavg_diff\tsupport\n";
    for (std::size_t k = 2; k <= curve.max_n; ++k) {
        out << k << '\t' << format_general(curve.avg_diff[k], 15) << '\t' << curve.support[k] << '\n';
    }
}

} // namespace semnorm
