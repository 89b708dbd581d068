#include "semnorm/detect.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "text.hpp"

namespace semnorm {

std::vector<ScoredType> detect(const StatsTable& source, const StatsTable& target,
                               const DetectOptions& options) {
    if (source.dim != target.dim) {
        fail(ErrorKind::Validation, "corpora differ in dimension: " + std::to_string(source.dim) +
                                        " vs " + std::to_string(target.dim));
    }
    std::vector<ScoredType> out;
    for (const auto& [word, s] : source.types) {
        if (s.n <= options.min_freq || options.exclude.contains(word)) continue;
        const TypeStats* t = target.find(word);
        if (t == nullptr || t->n <= options.min_freq) continue;

        const auto cs = clamp_norm(s.norm);
        const auto ct = clamp_norm(t->norm);
        const auto cov = coverage(s.norm, t->norm, options.log_base);
        out.push_back({word, s.n, t->n, s.norm, t->norm, cov.coverage, cov.log_coverage,
                       cs.degenerate || ct.degenerate});
    }
    std::sort(out.begin(), out.end(), [](const ScoredType& a, const ScoredType& b) {
        if (a.coverage != b.coverage) return a.coverage > b.coverage;
        return a.word_type < b.word_type;
    });
    return out;
}

std::set<std::string, std::less<>> read_exclude_list(std::istream& in) {
    std::set<std::string, std::less<>> words;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t\r");
        words.insert(line.substr(first, last - first + 1));
    }
    return words;
}

void write_detect_tsv(std::ostream& out, std::span<const ScoredType> types) {
    out << "rank\tword_type\tlog_coverage\tf_S\tf_T\tdegenerate\n";
    std::size_t rank = 1;
    for (const auto& t : types) {
        out << rank++ << '\t' << tsv_field(t.word_type) << '\t' << format_fixed(t.log_coverage, 6) << '\t'
            << t.f_source << '\t' << t.f_target << '\t' << (t.degenerate ? 1 : 0) << '\n';
    }
}

void write_detect_json(std::ostream& out, std::span<const ScoredType> types, const StatsTable& source,
                       const StatsTable& target, const DetectOptions& options) {
    nlohmann::ordered_json j;
    j["source"] = source.corpus_label;
    j["target"] = target.corpus_label;
    j["dim"] = source.dim;
    j["min_freq"] = options.min_freq;
    j["log_base"] = options.log_base == LogBase::Natural ? "e" : "10";
    auto list = nlohmann::ordered_json::array();
    std::size_t rank = 1;
    for (const auto& t : types) {
        nlohmann::ordered_json e;
        e["rank"] = rank++;
        e["word_type"] = t.word_type;
        e["f_S"] = t.f_source;
        e["f_T"] = t.f_target;
        e["l_S"] = t.l_source;
        e["l_T"] = t.l_target;
        e["coverage"] = t.coverage;
        e["log_coverage"] = t.log_coverage;
        e["degenerate"] = t.degenerate;
        list.push_back(std::move(e));
    }
    j["types"] = std::move(list);
    out << j.dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::replace) << '\n';
}

} // namespace semnorm
