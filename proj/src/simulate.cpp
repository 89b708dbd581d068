#include "semnorm/simulate.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <random>

#include <boost/random/uniform_real_distribution.hpp>

#include "semnorm/vmf.hpp"
#include "text.hpp"

namespace semnorm {

std::string synthetic_word(std::size_t index) {
    std::string suffix;
    do {
        suffix.insert(suffix.begin(), static_cast<char>('a' + index % 26));
        index /= 26;
    } while (index > 0);
    while (suffix.size() < 3) suffix.insert(suffix.begin(), 'a');
    return "type" + suffix;
}

Simulation simulate(const SimulationConfig& config) {
    if (config.types == 0 || config.instances == 0) {
        fail(ErrorKind::InvalidArgument, "simulation needs at least one type and one instance");
    }
    if (config.dim < 2) fail(ErrorKind::InvalidArgument, "simulation dimension must be >= 2");
    if (!(config.kappa_min > 0.0) || !(config.kappa_max >= config.kappa_min) || !std::isfinite(config.kappa_max)) {
        fail(ErrorKind::InvalidArgument, "need 0 < kappa_min <= kappa_max");
    }

    std::mt19937_64 engine(config.seed);
    boost::random::uniform_real_distribution<double> log_kappa(std::log(config.kappa_min),
                                                               std::log(config.kappa_max));
    // Raw vectors carry an arbitrary length, as embedder output does.
    boost::random::uniform_real_distribution<double> length(1.0, 10.0);

    Simulation sim;
    std::vector<VmfSampler> source_samplers;
    std::vector<VmfSampler> target_samplers;
    for (std::size_t t = 0; t < config.types; ++t) {
        PlantedType p;
        p.word_type = synthetic_word(t);
        p.kappa_source = std::exp(log_kappa(engine));
        p.kappa_target = std::exp(log_kappa(engine));
        const auto mu = random_unit_vector(config.dim, engine);
        source_samplers.emplace_back(mu, p.kappa_source);
        target_samplers.emplace_back(mu, p.kappa_target);
        sim.truth.push_back(std::move(p));
    }

    auto fill = [&](SimulatedCorpus& corpus, const char* label, const std::vector<VmfSampler>& samplers) {
        corpus.header.dim = config.dim;
        corpus.header.model_id = config.model_id;
        corpus.header.corpus_label = label;
        corpus.header.record_count = static_cast<std::uint64_t>(config.types) * config.instances;
        corpus.records.reserve(corpus.header.record_count);
        std::uint64_t id = 0;
        // Types interleaved round-robin.
        for (std::size_t i = 0; i < config.instances; ++i) {
            for (std::size_t t = 0; t < config.types; ++t) {
                const auto x = samplers[t](engine);
                const double scale = length(engine);
                InstanceRecord r;
                r.word_type = sim.truth[t].word_type;
                r.instance_id = id++;
                r.sentence = "synthetic " + std::string(label) + " context " + std::to_string(i) + " for " +
                             r.word_type;
                r.vector.resize(config.dim);
                for (std::size_t k = 0; k < config.dim; ++k) r.vector[k] = static_cast<float>(scale * x[k]);
                corpus.records.push_back(std::move(r));
            }
        }
    };
    fill(sim.source, "source", source_samplers);
    fill(sim.target, "target", target_samplers);
    return sim;
}

void write_truth_tsv(std::ostream& out, std::span<const PlantedType> truth) {
    out << "word_type\tkappa_S\tkappa_T\tlog_kappa_ratio\n";
    for (const auto& p : truth) {
        out << p.word_type << '\t' << format_general(p.kappa_source, 17) << '\t'
            << format_general(p.kappa_target, 17) << '\t'
            << format_general(std::log(p.kappa_target / p.kappa_source), 17) << '\n';
    }
}

SimulationFiles write_simulation(const Simulation& sim, const std::filesystem::path& dir, StreamFormat format) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(ErrorKind::Io, "cannot create directory '" + dir.string() + "': " + ec.message());
    const std::string ext = format == StreamFormat::Binary ? ".semb" : ".jsonl";
    SimulationFiles files{dir / ("source" + ext), dir / ("target" + ext), dir / "truth.tsv"};

    auto open = [](const std::filesystem::path& path) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
        return out;
    };
    {
        auto out = open(files.source);
        write_stream(out, sim.source.header, sim.source.records, format);
    }
    {
        auto out = open(files.target);
        write_stream(out, sim.target.header, sim.target.records, format);
    }
    auto out = open(files.truth);
    write_truth_tsv(out, sim.truth);
    out.flush();
    if (!out) fail(ErrorKind::Io, "failed writing '" + files.truth.string() + "'");
    return files;
}

} // namespace semnorm
