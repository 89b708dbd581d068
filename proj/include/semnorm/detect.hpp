#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "semnorm/aggregate.hpp"
#include "semnorm/vmf.hpp"

namespace semnorm {

inline constexpr std::uint64_t kDefaultMinFreq = 10;

struct ScoredType {
    std::string word_type;
    std::uint64_t f_source = 0;
    std::uint64_t f_target = 0;
    double l_source = 0.0;
    double l_target = 0.0;
    double coverage = 0.0;
    double log_coverage = 0.0;
    bool degenerate = false;
};

struct DetectOptions {
    /// A type is scored only if it occurs more than min_freq times in each corpus.
    std::uint64_t min_freq = kDefaultMinFreq;
    std::set<std::string, std::less<>> exclude;
    LogBase log_base = LogBase::Natural;
};

/// Word types shared by both corpora, above threshold and not excluded,
/// sorted by coverage descending with ties broken by word type.
std::vector<ScoredType> detect(const StatsTable& source, const StatsTable& target,
                               const DetectOptions& options = {});

/// One word type per line; blank lines and lines starting with '#' skipped.
std::set<std::string, std::less<>> read_exclude_list(std::istream& in);

/// rank, word_type, log_coverage (6 decimals), f_S, f_T, degenerate_flag.
void write_detect_tsv(std::ostream& out, std::span<const ScoredType> types);

/// Full-precision report.
void write_detect_json(std::ostream& out, std::span<const ScoredType> types, const StatsTable& source,
                       const StatsTable& target, const DetectOptions& options);

} // namespace semnorm
