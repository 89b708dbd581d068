#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semnorm/embstore.hpp"

namespace semnorm {

/// Per word type statistics of one corpus: n unit vectors, their sum, the
/// mean vector and the mean norm l.
struct TypeStats {
    std::string word_type;
    std::uint64_t n = 0;
    std::vector<double> sum;
    std::vector<double> mean;
    double norm = 0.0;

    static TypeStats from_sum(std::string word_type, std::uint64_t n, std::vector<double> sum);
};

/// Throws on differing word type or dimension.
TypeStats merge(const TypeStats& a, const TypeStats& b);

/// Pairwise (cascade) summation of equally sized vectors. Partial sums are
/// combined whenever two of them cover the same number of inputs, so the
/// result equals a balanced tree reduction over the insertion order.
class PairwiseSum {
public:
    explicit PairwiseSum(std::size_t dim) : dim_(dim) {}

    void add(std::span<const double> v);
    std::vector<double> total() const;
    std::size_t dim() const noexcept { return dim_; }

private:
    struct Partial {
        unsigned level;
        std::vector<double> sum;
    };
    std::size_t dim_;
    std::vector<Partial> stack_;
};

struct StatsTable {
    std::uint32_t dim = 0;
    std::string model_id;
    std::string corpus_label;
    std::map<std::string, TypeStats, std::less<>> types;

    const TypeStats* find(std::string_view word) const;
};

struct AggregateOptions {
    unsigned threads = 1;
    /// Records per reduction block. Part of the reduction order: results are
    /// identical for any thread count at a fixed block size.
    std::size_t block_records = 4096;
};

/// Single pass over the stream. Vectors are normalized, summed pairwise
/// within fixed-size blocks of records, and block sums are combined pairwise
/// per word type in stream order.
StatsTable accumulate(StreamReader& reader, const AggregateOptions& options = {});
StatsTable accumulate(const StreamHeader& header, std::span<const InstanceRecord> records,
                      const AggregateOptions& options = {});

/// Union of two shards; types present in both are merged.
StatsTable merge(const StatsTable& a, const StatsTable& b);

/// word_type, n, l (15 significant digits), sorted by word type.
void write_stats_tsv(std::ostream& out, const StatsTable& table);

} // namespace semnorm
