#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "semnorm/embstore.hpp"

namespace semnorm {

/// Synthetic corpus pair with planted concentrations: every word type gets
/// one random mean direction and a vMF concentration per corpus drawn
/// log-uniformly from [kappa_min, kappa_max].
struct SimulationConfig {
    std::size_t types = 50;
    std::uint32_t dim = 64;
    std::size_t instances = 300;
    double kappa_min = 10.0;
    double kappa_max = 300.0;
    std::uint64_t seed = 1;
    std::string model_id = "synthetic-vmf";
};

struct PlantedType {
    std::string word_type;
    double kappa_source = 0.0;
    double kappa_target = 0.0;
};

struct SimulatedCorpus {
    StreamHeader header;
    std::vector<InstanceRecord> records;
};

struct Simulation {
    SimulatedCorpus source;
    SimulatedCorpus target;
    std::vector<PlantedType> truth;
};

Simulation simulate(const SimulationConfig& config);

/// Lowercase alphabetic name for the i-th synthetic type.
std::string synthetic_word(std::size_t index);

/// word_type, kappa_S, kappa_T, log_kappa_ratio (ln kappa_T / kappa_S).
void write_truth_tsv(std::ostream& out, std::span<const PlantedType> truth);

struct SimulationFiles {
    std::filesystem::path source;
    std::filesystem::path target;
    std::filesystem::path truth;
};

/// Writes source.<ext>, target.<ext> and truth.tsv into `dir` (created if
/// missing); ext is "semb" or "jsonl".
SimulationFiles write_simulation(const Simulation& sim, const std::filesystem::path& dir, StreamFormat format);

} // namespace semnorm
