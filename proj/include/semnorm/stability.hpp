#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "semnorm/embstore.hpp"

namespace semnorm {

/// Average absolute change of the mean-vector norm when a word type gains
/// its k-th instance, over all types with at least k instances. Instances are
/// taken in stream order.
struct StabilityCurve {
    std::size_t max_n = 0;
    /// Indexed by k; entries 0 and 1 are unused and zero.
    std::vector<double> avg_diff;
    std::vector<std::uint64_t> support;

    double at(std::size_t k) const { return avg_diff.at(k); }
};

StabilityCurve stability_curve(StreamReader& reader, std::size_t max_n);

/// k, avg_diff, support for k = 2..max_n.
void write_stability_tsv(std::ostream& out, const StabilityCurve& curve);

} // namespace semnorm
