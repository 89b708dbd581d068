#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "semnorm/aggregate.hpp"
#include "semnorm/detect.hpp"
#include "semnorm/embstore.hpp"

namespace semnorm {

/// Source: rank instances in the source corpus by the meaning missing from
/// the target. Target: the same with the corpora swapped.
enum class Direction { Source, Target };

Direction parse_direction(const std::string& name);

struct ScoredInstance {
    std::uint64_t instance_id = 0;
    std::string sentence;
    std::string corpus_label;
    double score = 0.0;
};

struct InstanceQuery {
    std::string word;
    Direction direction = Direction::Source;
    std::size_t top_k = 10;
    std::uint64_t min_freq = kDefaultMinFreq;
};

/// Scores every instance of `query.word` in `chosen` (the source stream for
/// Direction::Source, the target stream otherwise) by representativeness
/// against the statistics of the two corpora. Sorted by score descending,
/// ties by instance id; at most top_k entries.
std::vector<ScoredInstance> typical_instances(const StatsTable& source, const StatsTable& target,
                                              StreamReader& chosen, const InstanceQuery& query);

/// rank, score (6 decimals), corpus_label, instance_id, sentence. Sentences
/// longer than `sentence_width` code points are cut for display (0 = full).
void write_instances_tsv(std::ostream& out, std::span<const ScoredInstance> instances,
                         std::size_t sentence_width = 0);

} // namespace semnorm
