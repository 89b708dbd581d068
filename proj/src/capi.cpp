#include "semnorm/semnorm.h"

#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <new>
#include <string>

#include "semnorm/aggregate.hpp"
#include "semnorm/detect.hpp"
#include "semnorm/instances.hpp"
#include "semnorm/simulate.hpp"
#include "semnorm/stability.hpp"
#include "semnorm/vmf.hpp"

struct semnorm_stats {
    semnorm::StatsTable table;
};

struct semnorm_detection {
    std::vector<semnorm::ScoredType> types;
    semnorm::StatsTable source_meta;
    semnorm::StatsTable target_meta;
    semnorm::DetectOptions options;
};

struct semnorm_instance_list {
    std::vector<semnorm::ScoredInstance> instances;
};

struct semnorm_curve {
    semnorm::StabilityCurve curve;
};

namespace {

thread_local std::string last_error;
thread_local std::uint64_t last_offset = std::numeric_limits<std::uint64_t>::max();

semnorm_status record(semnorm_status status, const std::string& message,
                      std::uint64_t offset = std::numeric_limits<std::uint64_t>::max()) {
    last_error = message;
    last_offset = offset;
    return status;
}

semnorm_status status_of(semnorm::ErrorKind kind) {
    switch (kind) {
    case semnorm::ErrorKind::InvalidArgument: return SEMNORM_ERROR_INVALID_ARGUMENT;
    case semnorm::ErrorKind::Io: return SEMNORM_ERROR_IO;
    case semnorm::ErrorKind::Decode: return SEMNORM_ERROR_DECODE;
    case semnorm::ErrorKind::Validation: return SEMNORM_ERROR_VALIDATION;
    case semnorm::ErrorKind::NotFound: return SEMNORM_ERROR_NOT_FOUND;
    }
    return SEMNORM_ERROR_INTERNAL;
}

// Runs `f`, translating exceptions into status codes.
template <class F>
semnorm_status try_(F&& f) {
    try {
        last_error.clear();
        last_offset = std::numeric_limits<std::uint64_t>::max();
        f();
        return SEMNORM_OK;
    } catch (const semnorm::DecodeError& e) {
        return record(SEMNORM_ERROR_DECODE, e.what(), e.offset());
    } catch (const semnorm::Error& e) {
        return record(status_of(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return record(SEMNORM_ERROR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return record(SEMNORM_ERROR_INTERNAL, e.what());
    } catch (...) {
        return record(SEMNORM_ERROR_INTERNAL, "unknown error");
    }
}

template <class T>
T& deref(T* p, const char* what) {
    if (p == nullptr) semnorm::fail(semnorm::ErrorKind::InvalidArgument, std::string(what) + " is NULL");
    return *p;
}

const char* require_str(const char* s, const char* what) {
    if (s == nullptr) semnorm::fail(semnorm::ErrorKind::InvalidArgument, std::string(what) + " is NULL");
    return s;
}

void with_output(const char* path, const std::function<void(std::ostream&)>& emit) {
    const std::string p = require_str(path, "output path");
    if (p == "-") {
        emit(std::cout);
        std::cout.flush();
        if (!std::cout) semnorm::fail(semnorm::ErrorKind::Io, "failed writing to standard output");
        return;
    }
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) semnorm::fail(semnorm::ErrorKind::Io, "cannot write '" + p + "'");
    emit(out);
    out.flush();
    if (!out) semnorm::fail(semnorm::ErrorKind::Io, "failed writing '" + p + "'");
}

semnorm::LogBase log_base_of(semnorm_log_base base) {
    switch (base) {
    case SEMNORM_LOG_E: return semnorm::LogBase::Natural;
    case SEMNORM_LOG_10: return semnorm::LogBase::Ten;
    }
    semnorm::fail(semnorm::ErrorKind::InvalidArgument, "unknown log base");
}

// Header-only copy of a table, for report metadata.
semnorm::StatsTable meta_of(const semnorm::StatsTable& t) {
    semnorm::StatsTable m;
    m.dim = t.dim;
    m.model_id = t.model_id;
    m.corpus_label = t.corpus_label;
    return m;
}

} // namespace

extern "C" {

const char* semnorm_version(void) { return "1.0.0"; }

const char* semnorm_status_string(semnorm_status status) {
    switch (status) {
    case SEMNORM_OK: return "ok";
    case SEMNORM_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case SEMNORM_ERROR_IO: return "i/o error";
    case SEMNORM_ERROR_DECODE: return "decode error";
    case SEMNORM_ERROR_VALIDATION: return "validation error";
    case SEMNORM_ERROR_NOT_FOUND: return "not found";
    case SEMNORM_ERROR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* semnorm_last_error(void) { return last_error.c_str(); }

uint64_t semnorm_last_error_offset(void) { return last_offset; }

// ---- stats

semnorm_status semnorm_stats_from_file(const char* path, unsigned threads, semnorm_stats** out) {
    return try_([&] {
        auto& result = deref(out, "out");
        result = nullptr;
        auto reader = semnorm::StreamReader::open(require_str(path, "path"));
        semnorm::AggregateOptions options;
        options.threads = threads == 0 ? 1 : threads;
        result = new semnorm_stats{semnorm::accumulate(reader, options)};
    });
}

void semnorm_stats_free(semnorm_stats* stats) { delete stats; }

semnorm_status semnorm_stats_info(const semnorm_stats* stats, uint32_t* dim, size_t* type_count) {
    return try_([&] {
        const auto& s = deref(stats, "stats");
        if (dim != nullptr) *dim = s.table.dim;
        if (type_count != nullptr) *type_count = s.table.types.size();
    });
}

semnorm_status semnorm_stats_lookup(const semnorm_stats* stats, const char* word, uint64_t* n, double* norm) {
    return try_([&] {
        const auto* t = deref(stats, "stats").table.find(require_str(word, "word"));
        if (t == nullptr) {
            semnorm::fail(semnorm::ErrorKind::NotFound, std::string("'") + word + "' does not occur");
        }
        if (n != nullptr) *n = t->n;
        if (norm != nullptr) *norm = t->norm;
    });
}

semnorm_status semnorm_stats_write_tsv(const semnorm_stats* stats, const char* path) {
    return try_([&] {
        const auto& s = deref(stats, "stats");
        with_output(path, [&](std::ostream& o) { semnorm::write_stats_tsv(o, s.table); });
    });
}

// ---- detect

void semnorm_detect_options_init(semnorm_detect_options* options) {
    if (options == nullptr) return;
    options->min_freq = semnorm::kDefaultMinFreq;
    options->log_base = SEMNORM_LOG_E;
    options->exclude = nullptr;
    options->exclude_count = 0;
}

semnorm_status semnorm_detect(const semnorm_stats* source, const semnorm_stats* target,
                              const semnorm_detect_options* options, semnorm_detection** out) {
    return try_([&] {
        auto& result = deref(out, "out");
        result = nullptr;
        const auto& s = deref(source, "source");
        const auto& t = deref(target, "target");
        semnorm_detect_options opts;
        semnorm_detect_options_init(&opts);
        if (options != nullptr) opts = *options;

        semnorm::DetectOptions detect_options;
        detect_options.min_freq = opts.min_freq;
        detect_options.log_base = log_base_of(opts.log_base);
        if (opts.exclude_count > 0 && opts.exclude == nullptr) {
            semnorm::fail(semnorm::ErrorKind::InvalidArgument, "exclude is NULL but exclude_count > 0");
        }
        for (size_t i = 0; i < opts.exclude_count; ++i) {
            detect_options.exclude.insert(require_str(opts.exclude[i], "exclude entry"));
        }
        auto d = std::make_unique<semnorm_detection>();
        d->types = semnorm::detect(s.table, t.table, detect_options);
        d->source_meta = meta_of(s.table);
        d->target_meta = meta_of(t.table);
        d->options = std::move(detect_options);
        result = d.release();
    });
}

void semnorm_detection_free(semnorm_detection* detection) { delete detection; }

size_t semnorm_detection_size(const semnorm_detection* detection) {
    return detection == nullptr ? 0 : detection->types.size();
}

semnorm_status semnorm_detection_get(const semnorm_detection* detection, size_t index, semnorm_scored_type* out) {
    return try_([&] {
        const auto& d = deref(detection, "detection");
        auto& o = deref(out, "out");
        if (index >= d.types.size()) semnorm::fail(semnorm::ErrorKind::InvalidArgument, "index out of range");
        const auto& t = d.types[index];
        o = {t.word_type.c_str(), t.f_source, t.f_target, t.l_source, t.l_target,
             t.coverage,         t.log_coverage, t.degenerate ? 1 : 0};
    });
}

semnorm_status semnorm_detection_write_tsv(const semnorm_detection* detection, const char* path) {
    return try_([&] {
        const auto& d = deref(detection, "detection");
        with_output(path, [&](std::ostream& o) { semnorm::write_detect_tsv(o, d.types); });
    });
}

semnorm_status semnorm_detection_write_json(const semnorm_detection* detection, const char* path) {
    return try_([&] {
        const auto& d = deref(detection, "detection");
        with_output(path, [&](std::ostream& o) {
            semnorm::write_detect_json(o, d.types, d.source_meta, d.target_meta, d.options);
        });
    });
}

// ---- instances

void semnorm_instance_query_init(semnorm_instance_query* query) {
    if (query == nullptr) return;
    query->word = nullptr;
    query->direction = SEMNORM_DIRECTION_SOURCE;
    query->top_k = 10;
    query->min_freq = semnorm::kDefaultMinFreq;
}

semnorm_status semnorm_typical_instances(const semnorm_stats* source, const semnorm_stats* target,
                                         const char* source_path, const char* target_path,
                                         const semnorm_instance_query* query, semnorm_instance_list** out) {
    return try_([&] {
        auto& result = deref(out, "out");
        result = nullptr;
        const auto& q = deref(query, "query");
        semnorm::InstanceQuery iq;
        iq.word = require_str(q.word, "query word");
        switch (q.direction) {
        case SEMNORM_DIRECTION_SOURCE: iq.direction = semnorm::Direction::Source; break;
        case SEMNORM_DIRECTION_TARGET: iq.direction = semnorm::Direction::Target; break;
        default: semnorm::fail(semnorm::ErrorKind::InvalidArgument, "unknown direction");
        }
        iq.top_k = q.top_k;
        iq.min_freq = q.min_freq;
        const char* chosen = iq.direction == semnorm::Direction::Source ? require_str(source_path, "source_path")
                                                                        : require_str(target_path, "target_path");
        auto reader = semnorm::StreamReader::open(chosen);
        auto list = std::make_unique<semnorm_instance_list>();
        list->instances = semnorm::typical_instances(deref(source, "source").table, deref(target, "target").table,
                                                     reader, iq);
        result = list.release();
    });
}

void semnorm_instance_list_free(semnorm_instance_list* list) { delete list; }

size_t semnorm_instance_list_size(const semnorm_instance_list* list) {
    return list == nullptr ? 0 : list->instances.size();
}

semnorm_status semnorm_instance_list_get(const semnorm_instance_list* list, size_t index,
                                         semnorm_scored_instance* out) {
    return try_([&] {
        const auto& l = deref(list, "list");
        auto& o = deref(out, "out");
        if (index >= l.instances.size()) semnorm::fail(semnorm::ErrorKind::InvalidArgument, "index out of range");
        const auto& i = l.instances[index];
        o = {i.instance_id, i.sentence.c_str(), i.corpus_label.c_str(), i.score};
    });
}

semnorm_status semnorm_instance_list_write_tsv(const semnorm_instance_list* list, const char* path,
                                               size_t sentence_width) {
    return try_([&] {
        const auto& l = deref(list, "list");
        with_output(path, [&](std::ostream& o) { semnorm::write_instances_tsv(o, l.instances, sentence_width); });
    });
}

// ---- stability

semnorm_status semnorm_stability_from_file(const char* path, size_t max_n, semnorm_curve** out) {
    return try_([&] {
        auto& result = deref(out, "out");
        result = nullptr;
        auto reader = semnorm::StreamReader::open(require_str(path, "path"));
        result = new semnorm_curve{semnorm::stability_curve(reader, max_n)};
    });
}

void semnorm_curve_free(semnorm_curve* curve) { delete curve; }

size_t semnorm_curve_max_n(const semnorm_curve* curve) { return curve == nullptr ? 0 : curve->curve.max_n; }

semnorm_status semnorm_curve_get(const semnorm_curve* curve, size_t k, double* avg_diff, uint64_t* support) {
    return try_([&] {
        const auto& c = deref(curve, "curve").curve;
        if (k < 2 || k > c.max_n) semnorm::fail(semnorm::ErrorKind::InvalidArgument, "k out of range");
        if (avg_diff != nullptr) *avg_diff = c.avg_diff[k];
        if (support != nullptr) *support = c.support[k];
    });
}

semnorm_status semnorm_curve_write_tsv(const semnorm_curve* curve, const char* path) {
    return try_([&] {
        const auto& c = deref(curve, "curve").curve;
        with_output(path, [&](std::ostream& o) { semnorm::write_stability_tsv(o, c); });
    });
}

// ---- simulate

void semnorm_simulate_options_init(semnorm_simulate_options* options) {
    if (options == nullptr) return;
    const semnorm::SimulationConfig defaults;
    options->types = defaults.types;
    options->dim = defaults.dim;
    options->instances = defaults.instances;
    options->kappa_min = defaults.kappa_min;
    options->kappa_max = defaults.kappa_max;
    options->seed = defaults.seed;
    options->format = SEMNORM_FORMAT_BINARY;
}

semnorm_status semnorm_simulate(const semnorm_simulate_options* options, const char* out_dir) {
    return try_([&] {
        const auto& o = deref(options, "options");
        semnorm::SimulationConfig config;
        config.types = o.types;
        config.dim = o.dim;
        config.instances = o.instances;
        config.kappa_min = o.kappa_min;
        config.kappa_max = o.kappa_max;
        config.seed = o.seed;
        semnorm::StreamFormat format;
        switch (o.format) {
        case SEMNORM_FORMAT_BINARY: format = semnorm::StreamFormat::Binary; break;
        case SEMNORM_FORMAT_JSONL: format = semnorm::StreamFormat::Jsonl; break;
        default: semnorm::fail(semnorm::ErrorKind::InvalidArgument, "unknown stream format");
        }
        semnorm::write_simulation(semnorm::simulate(config), require_str(out_dir, "out_dir"), format);
    });
}

// ---- scalars

semnorm_status semnorm_coverage(double l_source, double l_target, semnorm_log_base base, double* coverage,
                                double* log_coverage) {
    return try_([&] {
        const auto c = semnorm::coverage(l_source, l_target, log_base_of(base));
        if (coverage != nullptr) *coverage = c.coverage;
        if (log_coverage != nullptr) *log_coverage = c.log_coverage;
    });
}

semnorm_status semnorm_estimate_kappa(double l, uint32_t dim, double* kappa) {
    return try_([&] { deref(kappa, "kappa") = semnorm::estimate_kappa(l, dim); });
}

} // extern "C"
