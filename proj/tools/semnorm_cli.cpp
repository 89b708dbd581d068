// semnorm command line interface.
//
//   semnorm stats     --source S.semb [--out stats.tsv]
//   semnorm detect    --source S --target T [--min-freq 10] [--exclude FILE] [--log-base e|10]
//   semnorm instances --source S --target T --word W [--direction source|target] [--top-k 10]
//   semnorm stability --source S [--max-n 50]
//   semnorm simulate  --out DIR [--seed 1] [--format binary|jsonl] ...
//
// Exit codes: 0 ok, 1 internal, 2 usage, 3 decode, 4 validation, 5 i/o.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "semnorm/semnorm.h"

namespace {

enum Exit : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitUsage = 2,
    kExitDecode = 3,
    kExitValidation = 4,
    kExitIo = 5,
};

struct Failure {
    int code;
    std::string message;
};

int exit_code(semnorm_status status) {
    switch (status) {
    case SEMNORM_OK: return kExitOk;
    case SEMNORM_ERROR_INVALID_ARGUMENT: return kExitUsage;
    case SEMNORM_ERROR_IO: return kExitIo;
    case SEMNORM_ERROR_DECODE: return kExitDecode;
    case SEMNORM_ERROR_VALIDATION:
    case SEMNORM_ERROR_NOT_FOUND: return kExitValidation;
    case SEMNORM_ERROR_INTERNAL: break;
    }
    return kExitInternal;
}

void check(semnorm_status status, const std::string& context = {}) {
    if (status == SEMNORM_OK) return;
    std::string msg = semnorm_last_error();
    if (!context.empty()) msg = context + ": " + msg;
    throw Failure{exit_code(status), msg};
}

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};

using StatsPtr = std::unique_ptr<semnorm_stats, Deleter<semnorm_stats, semnorm_stats_free>>;
using DetectionPtr = std::unique_ptr<semnorm_detection, Deleter<semnorm_detection, semnorm_detection_free>>;
using InstancesPtr =
    std::unique_ptr<semnorm_instance_list, Deleter<semnorm_instance_list, semnorm_instance_list_free>>;
using CurvePtr = std::unique_ptr<semnorm_curve, Deleter<semnorm_curve, semnorm_curve_free>>;

unsigned thread_cap() {
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SEMNORM_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v < 1) throw std::invalid_argument("non-positive");
            threads = std::min<unsigned>(threads, static_cast<unsigned>(v));
        } catch (const std::exception&) {
            throw Failure{kExitUsage, std::string("SEMNORM_THREADS must be a positive integer, got '") + env + "'"};
        }
    }
    return threads;
}

StatsPtr load_stats(const std::string& path, unsigned threads) {
    semnorm_stats* raw = nullptr;
    check(semnorm_stats_from_file(path.c_str(), threads, &raw), path);
    return StatsPtr(raw);
}

std::vector<std::string> read_exclude_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Failure{kExitIo, "cannot open exclude list '" + path + "'"};
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t\r");
        words.push_back(line.substr(first, last - first + 1));
    }
    return words;
}

struct Options {
    std::string source;
    std::string target;
    std::string out = "-";
    std::string json;
    std::string exclude;
    std::string log_base = "e";
    std::string word;
    std::string direction = "source";
    std::string format = "binary";
    uint64_t min_freq = 10;
    size_t top_k = 10;
    size_t width = 0;
    size_t max_n = 50;
    uint64_t seed = 1;
    size_t types = 50;
    uint32_t dim = 64;
    size_t instances = 300;
    double kappa_min = 10.0;
    double kappa_max = 300.0;
};

void run_stats(const Options& o) {
    auto stats = load_stats(o.source, thread_cap());
    check(semnorm_stats_write_tsv(stats.get(), o.out.c_str()), o.out);
}

void run_detect(const Options& o) {
    const unsigned threads = thread_cap();
    auto source = load_stats(o.source, threads);
    auto target = load_stats(o.target, threads);

    std::vector<std::string> exclude;
    if (!o.exclude.empty()) exclude = read_exclude_file(o.exclude);
    std::vector<const char*> exclude_ptrs;
    for (const auto& w : exclude) exclude_ptrs.push_back(w.c_str());

    semnorm_detect_options options;
    semnorm_detect_options_init(&options);
    options.min_freq = o.min_freq;
    options.log_base = o.log_base == "10" ? SEMNORM_LOG_10 : SEMNORM_LOG_E;
    options.exclude = exclude_ptrs.data();
    options.exclude_count = exclude_ptrs.size();

    semnorm_detection* raw = nullptr;
    check(semnorm_detect(source.get(), target.get(), &options, &raw));
    DetectionPtr detection(raw);
    check(semnorm_detection_write_tsv(detection.get(), o.out.c_str()), o.out);
    if (!o.json.empty()) check(semnorm_detection_write_json(detection.get(), o.json.c_str()), o.json);
}

void run_instances(const Options& o) {
    const unsigned threads = thread_cap();
    auto source = load_stats(o.source, threads);
    auto target = load_stats(o.target, threads);

    semnorm_instance_query query;
    semnorm_instance_query_init(&query);
    query.word = o.word.c_str();
    query.direction = o.direction == "target" ? SEMNORM_DIRECTION_TARGET : SEMNORM_DIRECTION_SOURCE;
    query.top_k = o.top_k;
    query.min_freq = o.min_freq;

    semnorm_instance_list* raw = nullptr;
    check(semnorm_typical_instances(source.get(), target.get(), o.source.c_str(), o.target.c_str(), &query, &raw));
    InstancesPtr list(raw);
    check(semnorm_instance_list_write_tsv(list.get(), o.out.c_str(), o.width), o.out);
}

void run_stability(const Options& o) {
    semnorm_curve* raw = nullptr;
    check(semnorm_stability_from_file(o.source.c_str(), o.max_n, &raw), o.source);
    CurvePtr curve(raw);
    check(semnorm_curve_write_tsv(curve.get(), o.out.c_str()), o.out);
}

void run_simulate(const Options& o) {
    semnorm_simulate_options options;
    semnorm_simulate_options_init(&options);
    options.types = o.types;
    options.dim = o.dim;
    options.instances = o.instances;
    options.kappa_min = o.kappa_min;
    options.kappa_max = o.kappa_max;
    options.seed = o.seed;
    options.format = o.format == "jsonl" ? SEMNORM_FORMAT_JSONL : SEMNORM_FORMAT_BINARY;
    check(semnorm_simulate(&options, o.out.c_str()), o.out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Detect semantic differences between two corpora from mean word-vector norms"};
    app.require_subcommand(1);
    app.set_version_flag("--version", semnorm_version());
    Options o;

    auto source_opt = [&](CLI::App* cmd, const char* help) {
        cmd->add_option("--source", o.source, help)->required();
    };
    auto target_opt = [&](CLI::App* cmd) {
        cmd->add_option("--target", o.target, "Target corpus embedding stream")->required();
    };
    auto out_opt = [&](CLI::App* cmd) {
        cmd->add_option("--out", o.out, "Output TSV path ('-' for stdout)")->capture_default_str();
    };
    auto min_freq_opt = [&](CLI::App* cmd) {
        cmd->add_option("--min-freq", o.min_freq, "Keep types occurring more than this often in each corpus")
            ->capture_default_str();
    };

    auto* stats = app.add_subcommand("stats", "Per word type count and mean-vector norm");
    source_opt(stats, "Embedding stream");
    out_opt(stats);

    auto* detect = app.add_subcommand("detect", "Rank word types by coverage");
    source_opt(detect, "Source corpus embedding stream");
    target_opt(detect);
    min_freq_opt(detect);
    detect->add_option("--exclude", o.exclude, "File with word types to skip, one per line");
    detect->add_option("--log-base", o.log_base, "Base of the reported log coverage")
        ->check(CLI::IsMember({"e", "10"}))
        ->capture_default_str();
    detect->add_option("--json", o.json, "Also write a full-precision JSON report");
    out_opt(detect);

    auto* instances = app.add_subcommand("instances", "Rank instances of one word by representativeness");
    source_opt(instances, "Source corpus embedding stream");
    target_opt(instances);
    instances->add_option("--word", o.word, "Word type to examine")->required();
    instances->add_option("--direction", o.direction, "Corpus whose instances are ranked")
        ->check(CLI::IsMember({"source", "target"}))
        ->capture_default_str();
    instances->add_option("--top-k", o.top_k, "Number of instances to report")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    instances->add_option("--width", o.width, "Truncate displayed sentences to this many characters (0 = full)")
        ->capture_default_str();
    min_freq_opt(instances);
    out_opt(instances);

    auto* stability = app.add_subcommand("stability", "Average norm change against occurrence count");
    source_opt(stability, "Embedding stream");
    stability->add_option("--max-n", o.max_n, "Largest occurrence count")->check(CLI::Range(2, 1 << 30))
        ->capture_default_str();
    out_opt(stability);

    auto* simulate = app.add_subcommand("simulate", "Write a synthetic vMF corpus pair with ground truth");
    simulate->add_option("--out", o.out, "Output directory")->required();
    simulate->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    simulate->add_option("--format", o.format, "Stream encoding")
        ->check(CLI::IsMember({"binary", "jsonl"}))
        ->capture_default_str();
    simulate->add_option("--types", o.types, "Number of word types")->check(CLI::PositiveNumber)
        ->capture_default_str();
    simulate->add_option("--dim", o.dim, "Vector dimension")->check(CLI::Range(2u, 1u << 20))
        ->capture_default_str();
    simulate->add_option("--instances", o.instances, "Instances per type and corpus")->check(CLI::PositiveNumber)
        ->capture_default_str();
    simulate->add_option("--kappa-min", o.kappa_min, "Smallest planted concentration")->check(CLI::PositiveNumber)
        ->capture_default_str();
    simulate->add_option("--kappa-max", o.kappa_max, "Largest planted concentration")->check(CLI::PositiveNumber)
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "semnorm: error: " << e.what() << " (run with --help for usage)\n";
        return kExitUsage;
    }

    try {
        if (*stats) run_stats(o);
        else if (*detect) run_detect(o);
        else if (*instances) run_instances(o);
        else if (*stability) run_stability(o);
        else if (*simulate) run_simulate(o);
    } catch (const Failure& f) {
        std::cerr << "semnorm: error: " << f.message << '\n';
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "semnorm: error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitOk;
}
