#include "semnorm/instances.hpp"

#include <algorithm>
#include <ostream>

#include "semnorm/vmf.hpp"
#include "text.hpp"

namespace semnorm {

Direction parse_direction(const std::string& name) {
    if (name == "source") return Direction::Source;
    if (name == "target") return Direction::Target;
    fail(ErrorKind::InvalidArgument, "unknown direction '" + name + "' (expected source or target)");
}

std::vector<ScoredInstance> typical_instances(const StatsTable& source, const StatsTable& target,
                                              StreamReader& chosen, const InstanceQuery& query) {
    if (source.dim != target.dim || chosen.header().dim != source.dim) {
        fail(ErrorKind::Validation, "streams differ in dimension");
    }
    if (query.top_k == 0) fail(ErrorKind::InvalidArgument, "top_k must be at least 1");

    auto lookup = [&](const StatsTable& table, const char* role) -> const TypeStats& {
        const TypeStats* s = table.find(query.word);
        if (s == nullptr) {
            fail(ErrorKind::NotFound, "'" + query.word + "' does not occur in the " + role + " corpus");
        }
        if (s->n <= query.min_freq) {
            fail(ErrorKind::NotFound, "'" + query.word + "' occurs " + std::to_string(s->n) + " times in the " +
                                          role + " corpus, not more than " + std::to_string(query.min_freq));
        }
        return *s;
    };
    const TypeStats& s = lookup(source, "source");
    const TypeStats& t = lookup(target, "target");

    const bool swap = query.direction == Direction::Target;
    const auto weights = swap ? representativeness_weights(t, s) : representativeness_weights(s, t);

    std::vector<ScoredInstance> out;
    const std::string& label = chosen.header().corpus_label;
    while (auto rec = chosen.next()) {
        if (rec->word_type != query.word) continue;
        const auto x = normalize(std::span<const float>(rec->vector));
        out.push_back({rec->instance_id, std::move(rec->sentence), label, dot(weights, x)});
    }
    std::sort(out.begin(), out.end(), [](const ScoredInstance& a, const ScoredInstance& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.instance_id < b.instance_id;
    });
    if (out.size() > query.top_k) out.resize(query.top_k);
    return out;
}

void write_instances_tsv(std::ostream& out, std::span<const ScoredInstance> instances,
                         std::size_t sentence_width) {
    out << "rank\tscore\tcorpus_label\tinstance_id\tsentence\n";
    std::size_t rank = 1;
    for (const auto& i : instances) {
        out << rank++ << '\t' << format_fixed(i.score, 6) << '\t' << tsv_field(i.corpus_label) << '\t'
            << i.instance_id << '\t' << tsv_field(truncate_utf8(i.sentence, sentence_width)) << '\n';
    }
}

} // namespace semnorm
