// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "semnorm/detect.hpp"
#include "semnorm/instances.hpp"
#include "semnorm/semnorm.h"
#include "semnorm/simulate.hpp"
#include "semnorm/stability.hpp"
#include "semnorm/vmf.hpp"
#include "support.hpp"

using namespace semnorm;
using namespace semnorm::testing;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

double norm_of(std::uint32_t dim, const std::vector<Vec>& xs) {
    std::vector<InstanceRecord> rs;
    for (std::size_t i = 0; i < xs.size(); ++i) rs.push_back(make_record("w", i, xs[i]));
    return accumulate(make_header(dim, rs.size()), rs).find("w")->norm;
}

Outcome analytic_norms() {
    double worst = 0.0;
    worst = std::max(worst, std::abs(norm_of(2, {{1, 0}, {0, 1}}) - 0.70710678118654752440));
    worst = std::max(worst, std::abs(norm_of(2, {{1, 0}, {-1, 0}}) - 0.0));
    std::mt19937_64 rng(1);
    for (std::uint32_t d : {2u, 3u, 64u, 1024u}) {
        const auto e0 = Vec([&] { Vec v(d, 0.0); v[0] = 1; return v; }());
        auto e1 = Vec(d, 0.0);
        e1[1] = 3.5;
        worst = std::max(worst, std::abs(norm_of(d, {e0, e1}) - 0.70710678118654752440));
        const auto x = random_unit(d, rng);
        auto neg = x;
        for (auto& c : neg) c = -c;
        worst = std::max(worst, std::abs(norm_of(d, {x, neg})));
        for (std::size_t k : {1u, 2u, 7u, 100u}) {
            std::vector<Vec> same(k, x);
            for (std::size_t i = 0; i < k; ++i)
                for (auto& c : same[i]) c *= static_cast<double>(i + 1);
            worst = std::max(worst, std::abs(norm_of(d, same) - 1.0));
        }
    }
    std::ostringstream s;
    s << "max |l - analytic| = " << worst << " (tol 1e-10)";
    return {worst < 1e-10, s.str()};
}

Outcome kappa_recovery() {
    double worst = 0.0;
    std::string where;
    for (double kappa : {5.0, 50.0, 500.0}) {
        for (std::uint32_t d : {16u, 64u}) {
            for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                std::mt19937_64 rng(seed * 7919 + d);
                const auto xs = sample_vmf(random_unit(d, rng), kappa, 10000, rng());
                const double k = estimate_kappa(norm_of(d, xs), d);
                const double err = std::abs(k - kappa) / kappa;
                if (err > worst) {
                    worst = err;
                    where = "kappa=" + std::to_string(static_cast<int>(kappa)) + " d=" + std::to_string(d) +
                            " seed=" + std::to_string(seed);
                }
            }
        }
    }
    std::ostringstream s;
    s << "30 configurations, worst relative error " << worst << " at " << where << " (tol 0.10)";
    return {worst < 0.10, s.str()};
}

Outcome coverage_vs_exact() {
    double worst = 0.0;
    for (int i = 1; i <= 19; ++i) {
        for (int j = 1; j <= 19; ++j) {
            const double ls = 0.05 * i, lt = 0.05 * j;
            const double exact = kappa_ratio_exact(ls, lt, 1024);
            worst = std::max(worst, std::abs(coverage(ls, lt).coverage - exact) / exact);
        }
    }
    std::ostringstream s;
    s << "19x19 grid, d=1024, max relative gap " << worst << " (tol 1e-3)";
    return {worst < 1e-3, s.str()};
}

std::string scratch_dir() {
    static std::mt19937_64 rng(std::random_device{}());
    const auto p = std::filesystem::temp_directory_path() / ("semnorm-acceptance-" + std::to_string(rng()));
    std::filesystem::create_directories(p);
    return p.string();
}

struct Scratch {
    std::string dir = scratch_dir();
    ~Scratch() {
        std::error_code ec;
        std::filesystem::remove_all(dir, ec);
    }
};

Outcome detection_fidelity() {
    std::vector<double> rhos;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Scratch tmp;
        semnorm_simulate_options so;
        semnorm_simulate_options_init(&so);
        so.types = 50;
        so.dim = 64;
        so.instances = 300;
        so.kappa_min = 10;
        so.kappa_max = 300;
        so.seed = seed;
        if (semnorm_simulate(&so, tmp.dir.c_str()) != SEMNORM_OK) return {false, semnorm_last_error()};

        semnorm_stats *s = nullptr, *t = nullptr;
        semnorm_detection* det = nullptr;
        if (semnorm_stats_from_file((tmp.dir + "/source.semb").c_str(), 4, &s) != SEMNORM_OK ||
            semnorm_stats_from_file((tmp.dir + "/target.semb").c_str(), 4, &t) != SEMNORM_OK ||
            semnorm_detect(s, t, nullptr, &det) != SEMNORM_OK)
            return {false, semnorm_last_error()};

        std::map<std::string, double> truth;
        std::ifstream in(tmp.dir + "/truth.tsv");
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            std::string w, ks, kt, lr;
            std::getline(ls, w, '\t');
            std::getline(ls, ks, '\t');
            std::getline(ls, kt, '\t');
            std::getline(ls, lr, '\t');
            truth[w] = std::log(std::stod(kt) / std::stod(ks));
        }
        std::vector<double> est, planted;
        for (std::size_t i = 0; i < semnorm_detection_size(det); ++i) {
            semnorm_scored_type st{};
            semnorm_detection_get(det, i, &st);
            est.push_back(st.log_coverage);
            planted.push_back(truth.at(st.word_type));
        }
        semnorm_detection_free(det);
        semnorm_stats_free(s);
        semnorm_stats_free(t);
        if (est.size() != 50) return {false, "expected 50 scored types, got " + std::to_string(est.size())};
        rhos.push_back(spearman(est, planted));
    }
    const double m = median(rhos);
    std::ostringstream s;
    s << "median Spearman over 10 seeds " << m << " (min " << *std::min_element(rhos.begin(), rhos.end())
      << ", tol >= 0.95)";
    return {m >= 0.95, s.str()};
}

Outcome extraction_fidelity() {
    int clean_seeds = 0;
    bool orders_match = true;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        std::mt19937_64 rng(seed);
        const std::uint32_t d = 64;
        const auto u = random_unit(d, rng);
        auto v = random_unit(d, rng);
        long double proj = 0;
        for (std::size_t i = 0; i < d; ++i) proj += static_cast<long double>(u[i]) * v[i];
        for (std::size_t i = 0; i < d; ++i) v[i] -= static_cast<double>(proj) * u[i];
        const long double vn = oracle_norm(v);
        for (auto& c : v) c = static_cast<double>(c / vn);

        std::vector<InstanceRecord> src, tgt;
        std::uint64_t id = 0;
        const auto su = sample_vmf(u, 100.0, 50, rng());
        const auto sv = sample_vmf(v, 100.0, 50, rng());
        for (std::size_t i = 0; i < 50; ++i) {
            src.push_back(make_record("bank", id++, su[i], "missing"));
            src.push_back(make_record("bank", id++, sv[i], "shared"));
        }
        for (const auto& x : sample_vmf(v, 100.0, 100, rng())) tgt.push_back(make_record("bank", id++, x, "shared"));

        const auto s = accumulate(make_header(d, src.size(), "source"), src);
        const auto t = accumulate(make_header(d, tgt.size(), "target"), tgt);
        std::stringstream buf;
        write_stream(buf, make_header(d, src.size(), "source"), src, StreamFormat::Binary);
        StreamReader reader(buf);
        const auto out = typical_instances(s, t, reader, {"bank", Direction::Source, src.size(), 10});

        bool clean = out.size() >= 5;
        for (std::size_t i = 0; i < 5 && clean; ++i) clean = out[i].sentence == "missing";
        clean_seeds += clean;

        std::vector<Vec> xs, xt;
        for (const auto& r : src) xs.emplace_back(r.vector.begin(), r.vector.end());
        for (const auto& r : tgt) xt.emplace_back(r.vector.begin(), r.vector.end());
        const auto ms = oracle_mean(xs), mt = oracle_mean(xt);
        std::vector<std::pair<long double, std::uint64_t>> ref;
        for (const auto& r : src) {
            Vec x(r.vector.begin(), r.vector.end());
            const long double n = oracle_norm(x);
            for (auto& c : x) c = static_cast<double>(c / n);
            ref.emplace_back(oracle_representativeness(x, ms.mean, ms.norm, mt.mean, mt.norm), r.instance_id);
        }
        std::sort(ref.begin(), ref.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        if (out.size() != ref.size()) orders_match = false;
        for (std::size_t i = 0; i < out.size() && orders_match; ++i) orders_match = out[i].instance_id == ref[i].second;
    }
    std::ostringstream s;
    s << "top-5 from the missing sense in " << clean_seeds << "/10 seeds; full order "
      << (orders_match ? "matches" : "differs from") << " brute force";
    return {clean_seeds == 10 && orders_match, s.str()};
}

Outcome llr_approximation() {
    const std::uint32_t d = 1024;
    double worst = 1.0;
    for (std::uint64_t trial = 1; trial <= 10; ++trial) {
        std::mt19937_64 rng(trial);
        std::uniform_real_distribution<double> log_kappa(std::log(10.0), std::log(2000.0));
        const auto mu_s = random_unit(d, rng), mu_t = random_unit(d, rng);
        const auto xs = sample_vmf(mu_s, std::exp(log_kappa(rng)), 200, rng());
        const auto xt = sample_vmf(mu_t, std::exp(log_kappa(rng)), 200, rng());
        std::vector<InstanceRecord> rs, rt;
        for (std::size_t i = 0; i < 200; ++i) {
            rs.push_back(make_record("w", i, xs[i]));
            rt.push_back(make_record("w", i, xt[i]));
        }
        const auto s = *accumulate(make_header(d, 200), rs).find("w");
        const auto t = *accumulate(make_header(d, 200), rt).find("w");
        const auto exact = llr_weights_exact(s, t, d);

        // Half the instances from each corpus.
        std::vector<double> a, b;
        for (std::size_t i = 0; i < 200; ++i) {
            const auto& x = i % 2 ? xs[i] : xt[i];
            a.push_back(dot(exact, x));
            b.push_back(representativeness(x, s, t));
        }
        worst = std::min(worst, kendall_tau(a, b));
    }
    std::ostringstream s;
    s << "minimum Kendall tau over 10 trials " << worst << " (tol >= 0.99)";
    return {worst >= 0.99, s.str()};
}

Outcome stability_shape() {
    SimulationConfig config;
    config.types = 200;
    config.instances = 60;
    config.seed = 5;
    const auto sim = simulate(config);
    std::stringstream buf;
    write_stream(buf, sim.source.header, sim.source.records, StreamFormat::Binary);
    StreamReader reader(buf);
    const auto curve = stability_curve(reader, 60);

    const std::vector<double> y(curve.avg_diff.begin() + 2, curve.avg_diff.end());
    const auto fit = isotonic_nonincreasing(y);
    double residual = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) residual = std::max(residual, std::abs(y[i] - fit[i]));
    double tail = 0.0;
    for (std::size_t k = 10; k <= curve.max_n; ++k) tail = std::max(tail, curve.at(k));
    std::ostringstream s;
    s << "max isotonic residual " << residual << " (tol 0.005); max avg_diff for k>=10 " << tail
      << " (tol 0.02); avg_diff[2] " << curve.at(2);
    return {residual < 0.005 && tail < 0.02, s.str()};
}

std::string bytes_of(const std::function<void(std::ostream&)>& f) {
    std::ostringstream out;
    f(out);
    return out.str();
}

Outcome determinism_and_format() {
    std::vector<std::string> problems;

    SimulationConfig config;
    config.types = 30;
    config.instances = 100;
    config.seed = 77;
    const auto a = simulate(config), b = simulate(config);
    for (auto fmt : {StreamFormat::Binary, StreamFormat::Jsonl}) {
        auto enc = [&](const SimulatedCorpus& c) {
            return bytes_of([&](std::ostream& o) { write_stream(o, c.header, c.records, fmt); });
        };
        if (enc(a.source) != enc(b.source) || enc(a.target) != enc(b.target)) problems.push_back("simulate");
    }
    auto detect_tsv = [&](unsigned threads) {
        const AggregateOptions opts{threads, 4096};
        const auto s = accumulate(a.source.header, a.source.records, opts);
        const auto t = accumulate(a.target.header, a.target.records, opts);
        return bytes_of([&](std::ostream& o) {
            write_detect_tsv(o, detect(s, t));
            write_stats_tsv(o, s);
        });
    };
    const auto base = detect_tsv(1);
    if (detect_tsv(1) != base || detect_tsv(3) != base || detect_tsv(8) != base) problems.push_back("detect");

    // 10,000 random records.
    std::mt19937_64 rng(2024);
    const std::uint32_t d = 32;
    std::vector<InstanceRecord> rs;
    const std::vector<std::string> sentences = {"plain ascii", "tab\tand \"quotes\" \\ slash", "日本語の文です",
                                                "emoji \xF0\x9F\x98\x80 and\nnewline", ""};
    std::uniform_real_distribution<float> coord(-1e3f, 1e3f);
    for (std::uint64_t i = 0; i < 10000; ++i) {
        InstanceRecord r;
        r.word_type = "w" + std::to_string(rng() % 300);
        r.instance_id = rng();
        r.sentence = sentences[rng() % sentences.size()];
        r.vector.resize(d);
        for (auto& x : r.vector) x = coord(rng);
        if (i % 97 == 0) r.vector[0] = 1e-30f;
        if (i % 89 == 0) r.vector[1] = -0.0f;
        rs.push_back(std::move(r));
    }
    StreamHeader h = make_header(d, rs.size(), "random");
    const auto bin = bytes_of([&](std::ostream& o) { write_stream(o, h, rs, StreamFormat::Binary); });
    const auto jsonl = bytes_of([&](std::ostream& o) { write_stream(o, h, rs, StreamFormat::Jsonl); });

    auto decode = [&](const std::string& bytes) {
        std::istringstream in(bytes);
        return read_stream(in);
    };
    auto same_bits = [](const std::vector<InstanceRecord>& x, const std::vector<InstanceRecord>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i].word_type != y[i].word_type || x[i].instance_id != y[i].instance_id ||
                x[i].sentence != y[i].sentence || x[i].vector.size() != y[i].vector.size())
                return false;
            if (std::memcmp(x[i].vector.data(), y[i].vector.data(), x[i].vector.size() * sizeof(float)) != 0)
                return false;
        }
        return true;
    };
    const auto from_bin = decode(bin);
    const auto from_jsonl = decode(jsonl);
    if (!(from_bin.first == h) || !same_bits(from_bin.second, rs)) problems.push_back("binary round trip");
    if (!(from_jsonl.first == h) || !same_bits(from_jsonl.second, rs)) problems.push_back("jsonl round trip");
    const auto rebin = bytes_of([&](std::ostream& o) { write_stream(o, h, from_jsonl.second, StreamFormat::Binary); });
    if (rebin != bin) problems.push_back("jsonl to binary re-encode");

    auto stats_of_stream = [&](const std::string& bytes) {
        std::istringstream in(bytes);
        StreamReader reader(in);
        return bytes_of([&](std::ostream& o) { write_stats_tsv(o, accumulate(reader)); });
    };
    if (stats_of_stream(bin) != stats_of_stream(jsonl)) problems.push_back("cross-format statistics");

    std::string detail = "repeated runs, thread counts 1/3/8, 10000-record round trips";
    for (const auto& p : problems) detail += "; mismatch: " + p;
    return {problems.empty(), detail};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
        {"analytic-norms", analytic_norms},
        {"kappa-recovery", kappa_recovery},
        {"coverage-vs-exact-ratio", coverage_vs_exact},
        {"detection-ranking-fidelity", detection_fidelity},
        {"extraction-fidelity", extraction_fidelity},
        {"llr-approximation", llr_approximation},
        {"stability-curve-shape", stability_shape},
        {"determinism-and-format", determinism_and_format},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
