#include "semnorm/aggregate.hpp"

#include <cmath>
#include <future>
#include <ostream>
#include <unordered_map>

#include "text.hpp"

namespace semnorm {

TypeStats TypeStats::from_sum(std::string word_type, std::uint64_t n, std::vector<double> sum) {
    if (n == 0) fail(ErrorKind::InvalidArgument, "type statistics need at least one instance");
    TypeStats s;
    s.word_type = std::move(word_type);
    s.n = n;
    s.mean.resize(sum.size());
    double sq = 0.0;
    for (std::size_t i = 0; i < sum.size(); ++i) {
        s.mean[i] = sum[i] / static_cast<double>(n);
        sq += s.mean[i] * s.mean[i];
    }
    s.norm = std::sqrt(sq);
    s.sum = std::move(sum);
    return s;
}

TypeStats merge(const TypeStats& a, const TypeStats& b) {
    if (a.word_type != b.word_type) {
        fail(ErrorKind::InvalidArgument, "cannot merge '" + a.word_type + "' with '" + b.word_type + "'");
    }
    if (a.sum.size() != b.sum.size()) {
        fail(ErrorKind::InvalidArgument, "cannot merge statistics of different dimension");
    }
    std::vector<double> sum(a.sum);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += b.sum[i];
    return TypeStats::from_sum(a.word_type, a.n + b.n, std::move(sum));
}

void PairwiseSum::add(std::span<const double> v) {
    if (v.size() != dim_) fail(ErrorKind::InvalidArgument, "pairwise sum: dimension mismatch");
    Partial p{0, std::vector<double>(v.begin(), v.end())};
    while (!stack_.empty() && stack_.back().level == p.level) {
        auto& top = stack_.back().sum;
        for (std::size_t i = 0; i < dim_; ++i) top[i] += p.sum[i];
        p.sum = std::move(top);
        ++p.level;
        stack_.pop_back();
    }
    stack_.push_back(std::move(p));
}

std::vector<double> PairwiseSum::total() const {
    std::vector<double> out(dim_, 0.0);
    // Smallest partials first.
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
        for (std::size_t i = 0; i < dim_; ++i) out[i] += it->sum[i];
    }
    return out;
}

const TypeStats* StatsTable::find(std::string_view word) const {
    auto it = types.find(word);
    return it == types.end() ? nullptr : &it->second;
}

namespace {

struct BlockPartial {
    std::uint64_t n = 0;
    std::vector<double> sum;
};

// Word types in first-appearance order so that combining blocks does not
// depend on hashing.
struct BlockResult {
    std::vector<std::pair<std::string, BlockPartial>> types;
};

BlockResult reduce_block(std::span<const InstanceRecord> records, std::size_t dim) {
    std::unordered_map<std::string_view, std::size_t> index;
    std::vector<std::pair<std::string, PairwiseSum>> sums;
    std::vector<std::uint64_t> counts;
    for (const auto& r : records) {
        auto [it, inserted] = index.try_emplace(r.word_type, sums.size());
        if (inserted) {
            sums.emplace_back(r.word_type, PairwiseSum(dim));
            counts.push_back(0);
        }
        const auto unit = normalize(std::span<const float>(r.vector));
        sums[it->second].second.add(unit);
        ++counts[it->second];
    }
    BlockResult out;
    out.types.reserve(sums.size());
    for (std::size_t i = 0; i < sums.size(); ++i) {
        out.types.emplace_back(std::move(sums[i].first), BlockPartial{counts[i], sums[i].second.total()});
    }
    return out;
}

class TableBuilder {
public:
    explicit TableBuilder(std::size_t dim) : dim_(dim) {}

    void absorb(BlockResult&& block) {
        for (auto& [word, partial] : block.types) {
            auto [it, inserted] = acc_.try_emplace(word, Entry{0, PairwiseSum(dim_)});
            it->second.n += partial.n;
            it->second.sum.add(partial.sum);
        }
    }

    void finish(StatsTable& table) {
        for (auto& [word, entry] : acc_) {
            table.types.emplace(word, TypeStats::from_sum(word, entry.n, entry.sum.total()));
        }
    }

private:
    struct Entry {
        std::uint64_t n;
        PairwiseSum sum;
    };
    std::size_t dim_;
    std::map<std::string, Entry, std::less<>> acc_;
};

template <class NextBlock>
StatsTable run_blocks(const StreamHeader& header, const AggregateOptions& options, NextBlock&& next_block) {
    if (options.block_records == 0) fail(ErrorKind::InvalidArgument, "block size must be positive");
    StatsTable table;
    table.dim = header.dim;
    table.model_id = header.model_id;
    table.corpus_label = header.corpus_label;
    TableBuilder builder(header.dim);
    const unsigned threads = std::max(1u, options.threads);

    while (true) {
        std::vector<std::vector<InstanceRecord>> batch;
        for (unsigned t = 0; t < threads; ++t) {
            auto block = next_block();
            if (block.empty()) break;
            batch.push_back(std::move(block));
        }
        if (batch.empty()) break;
        if (batch.size() == 1) {
            builder.absorb(reduce_block(batch.front(), header.dim));
        } else {
            std::vector<std::future<BlockResult>> pending;
            pending.reserve(batch.size());
            for (const auto& block : batch) {
                pending.push_back(std::async(std::launch::async, [&block, &header] {
                    return reduce_block(block, header.dim);
                }));
            }
            // Absorb in block order regardless of completion order.
            for (auto& f : pending) builder.absorb(f.get());
        }
    }
    builder.finish(table);
    return table;
}

} // namespace

StatsTable accumulate(StreamReader& reader, const AggregateOptions& options) {
    return run_blocks(reader.header(), options, [&] {
        std::vector<InstanceRecord> block;
        block.reserve(options.block_records);
        while (block.size() < options.block_records) {
            auto r = reader.next();
            if (!r) break;
            block.push_back(std::move(*r));
        }
        return block;
    });
}

StatsTable accumulate(const StreamHeader& header, std::span<const InstanceRecord> records,
                      const AggregateOptions& options) {
    for (const auto& r : records) validate_record(r, header.dim);
    std::size_t pos = 0;
    return run_blocks(header, options, [&] {
        const std::size_t take = std::min(options.block_records, records.size() - pos);
        std::vector<InstanceRecord> block(records.begin() + static_cast<std::ptrdiff_t>(pos),
                                          records.begin() + static_cast<std::ptrdiff_t>(pos + take));
        pos += take;
        return block;
    });
}

StatsTable merge(const StatsTable& a, const StatsTable& b) {
    if (a.dim != b.dim) {
        fail(ErrorKind::Validation, "cannot merge tables of dimension " + std::to_string(a.dim) +
                                        " and " + std::to_string(b.dim));
    }
    StatsTable out = a;
    for (const auto& [word, stats] : b.types) {
        auto it = out.types.find(word);
        if (it == out.types.end()) {
            out.types.emplace(word, stats);
        } else {
            it->second = merge(it->second, stats);
        }
    }
    return out;
}

void write_stats_tsv(std::ostream& out, const StatsTable& table) {
    out << "word_type\tn\tl\n";
    for (const auto& [word, s] : table.types) {
        out << tsv_field(word) << '\t' << s.n << '\t' << format_general(s.norm, 15) << '\n';
    }
}

} // namespace semnorm
