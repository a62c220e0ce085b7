#include "rmep/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmep/alternating.hpp"
#include "rmep/errors.hpp"
#include "rmep/generator.hpp"
#include "rmep/mep.hpp"
#include "rmep/serialize.hpp"
#include "rmep/spectral.hpp"
#include "rmep/tsvd.hpp"

namespace rmep::cli {
namespace {

using nlohmann::json;

const std::vector<std::string> kCommands = {"solve-one", "solve-complete", "bench-random", "ode-sl", "ode-mathieu"};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json complex_json(cd z) { return json::array({z.real(), z.imag()}); }

cd complex_from(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    throw ConfigError("expected a number or [re, im]");
}

cd parse_complex(const std::string& s) {
    std::size_t comma = s.find(',');
    try {
        if (comma == std::string::npos) return {std::stod(s), 0.0};
        return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw ConfigError("cannot parse complex number '" + s + "' (use re or re,im)");
    }
}

bool is_stochastic(const RunConfig& cfg) {
    return cfg.command != "solve-one" || cfg.restarts > 0;
}

void validate(const RunConfig& cfg) {
    if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end())
        throw ConfigError("unknown command '" + cfg.command + "'");
    if ((cfg.command == "solve-one" || cfg.command == "solve-complete") && cfg.input.empty())
        throw ConfigError(cfg.command + " needs an input problem (--input)");
    if (is_stochastic(cfg) && !cfg.seed) throw ConfigError(cfg.command + " needs --seed");
    if (cfg.max_iters < 0 || cfg.restarts < 0 || !(cfg.rel_tol > 0.0))
        throw ConfigError("max_iters and restarts must be nonnegative and rel_tol positive");
    if (cfg.command == "bench-random") {
        if (cfg.m.empty() || cfg.m.size() != cfg.n.size()) throw ConfigError("m and n must list one size per equation");
        if (cfg.trials < 1) throw ConfigError("trials must be positive");
        if (cfg.threads < 1) throw ConfigError("threads must be positive");
        for (std::size_t i = 0; i < cfg.m.size(); ++i)
            if (cfg.n[i] < 1 || cfg.m[i] <= cfg.n[i]) throw ConfigError("bench-random needs m_i > n_i >= 1");
        for (double s : cfg.sigmas)
            if (!(s >= 0.0)) throw ConfigError("sigma values must be nonnegative");
    }
    if (cfg.functions < 0 || cfg.grid_points < 2) throw ConfigError("functions must be >= 0 and grid_points >= 2");
}

std::string timestamp_line(const RunConfig& cfg) {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return "# rmep " + cfg.command + " " + buf + "\n";
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name, bool csv = true) {
    std::filesystem::path p = cfg.out / name;
    std::ofstream f(p);
    if (!f) throw ConfigError("cannot write " + p.string());
    if (csv && cfg.timestamp) f << timestamp_line(cfg);
    return f;
}

json tuple_json(const EigenTuple& t) {
    json j;
    j["gamma"] = t.value.gamma;
    j["alphas"] = json::array();
    for (cd a : t.value.alphas) j["alphas"].push_back(complex_json(a));
    j["vectors"] = json::array();
    for (const auto& x : t.vectors) {
        json v = json::array();
        for (Index r = 0; r < x.size(); ++r) v.push_back(complex_json(x(r)));
        j["vectors"].push_back(std::move(v));
    }
    if (t.residual) j["residual"] = {{"per_block", t.residual->per_block}, {"total", t.residual->total}};
    return j;
}

int run_solve_one(const RunConfig& cfg, std::ostream& log) {
    RmepProblem p = io::load_problem(cfg.input);
    alt::AltConfig ac;
    ac.initial_lambdas = cfg.initial_lambdas;
    ac.max_iters = cfg.max_iters;
    ac.rel_tol = cfg.rel_tol;
    ac.kkt_check = cfg.kkt_check;
    ac.restarts = cfg.restarts;
    ac.seed = cfg.seed.value_or(0);
    alt::AltResult r = alt::solve_one(p, ac);

    {
        std::ofstream f = open_output(cfg, "trace.csv");
        alt::write_trace_csv(f, r.trace);
    }
    json j = tuple_json(r.tuple);
    j["status"] = alt::to_string(r.trace.status);
    j["iterations"] = r.trace.iterations;
    j["theta1"] = r.trace.theta.empty() ? 0.0 : r.trace.theta.back();
    j["eps_kkt"] = r.trace.final_kkt;
    j["non_unique_vectors"] = r.trace.non_unique_vectors;
    j["likely_infimum"] = r.likely_infimum;
    j["perturbation_cost"] = r.perturbation.cost;
    if (r.lambdas) {
        j["lambdas"] = json::array();
        for (cd l : *r.lambdas) j["lambdas"].push_back(complex_json(l));
    } else {
        j["lambdas"] = nullptr;
    }
    if (cfg.timestamp) j["generated"] = timestamp_line(cfg).substr(2, std::string::npos);
    std::ofstream f = open_output(cfg, "tuple.json", false);
    f << j.dump(2) << '\n';

    log << "solve-one: " << alt::to_string(r.trace.status) << " after " << r.trace.iterations
        << " sweeps, theta1 = " << fmt(j["theta1"].get<double>()) << ", eps_kkt = " << fmt(r.trace.final_kkt) << '\n';
    if (r.likely_infimum) log << "solve-one: gamma vanished; theta1 is likely an infimum\n";
    return exit_ok;
}

int run_solve_complete(const RunConfig& cfg, std::ostream& log) {
    RmepProblem p = io::load_problem(cfg.input);
    mep::MepOptions opts;
    opts.seed = *cfg.seed;
    tsvd::CompleteResult r = tsvd::solve_complete(p, opts);
    std::ofstream f = open_output(cfg, "complete.csv");
    tsvd::write_complete_csv(f, r, p.k());
    std::size_t flagged = std::count_if(r.tuples.begin(), r.tuples.end(),
                                        [](const tsvd::ApproxTuple& t) { return t.poorly_separable || t.singular; });
    log << "solve-complete: " << r.tuples.size() << " tuples, " << flagged << " flagged\n";
    return exit_ok;
}

int run_bench(const RunConfig& cfg, std::ostream& log) {
    // Concurrent trials each call into BLAS; keep BLAS itself serial then.
    if (cfg.threads > 1 && !std::getenv("RMEP_BACKEND_THREADS")) linalg::set_backend_threads(1);
    std::vector<BenchRow> rows = bench_random(cfg.m, cfg.n, cfg.sigmas, cfg.trials, *cfg.seed, cfg.threads);
    std::ofstream f = open_output(cfg, "bench.csv");
    write_bench_csv(f, rows, cfg.m.size());
    for (const BenchRow& r : rows)
        log << "sigma " << r.sigma << ": mean relative error (lambda_1) " << fmt(r.average.mean[0]) << '\n';
    return exit_ok;
}

int run_ode(const RunConfig& cfg, std::ostream& log) {
    const bool mathieu = cfg.command == "ode-mathieu";
    spectral::MathieuProblem mp;
    spectral::OdeSpec spec;
    if (mathieu) {
        mp = spectral::builtin_mathieu(cfg.alpha, cfg.beta, cfg.n1, cfg.n2, cfg.oversampling);
        spec = mp.spec;
    } else {
        spec = spectral::builtin_sturm_liouville(cfg.n1, cfg.n2, cfg.oversampling);
    }
    spectral::DiscretizedOde d = spectral::discretize(spec);
    for (const std::string& w : d.warnings) log << "warning: " << w << '\n';
    mep::MepOptions opts;
    opts.seed = *cfg.seed;
    tsvd::CompleteResult r = tsvd::solve_complete(d.problem, opts);

    std::ofstream f = open_output(cfg, "eigenvalues.csv");
    f << "j,lambda_re,lambda_im,mu_re,mu_im,gamma,rho,rho_1,rho_2,varsigma_1,varsigma_2,varsigma";
    if (mathieu) f << ",omega_re,omega_im";
    f << '\n';
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t j = 0; j < r.tuples.size(); ++j) {
        const tsvd::ApproxTuple& t = r.tuples[j];
        std::vector<cd> lam = t.lambdas.value_or(std::vector<cd>(2, cd(nan, nan)));
        spectral::ContinuousResidual s;
        s.per_equation = {nan, nan};
        s.total = nan;
        if (t.lambdas) s = spectral::continuous_residual(spec, t.tuple);
        f << j + 1 << ',' << fmt(lam[0].real()) << ',' << fmt(lam[0].imag()) << ',' << fmt(lam[1].real()) << ','
          << fmt(lam[1].imag()) << ',' << fmt(t.tuple.value.gamma) << ',' << fmt(t.rho);
        for (int i = 0; i < 2; ++i) f << ',' << fmt(t.tuple.residual ? t.tuple.residual->per_block[i] : nan);
        f << ',' << fmt(s.per_equation[0]) << ',' << fmt(s.per_equation[1]) << ',' << fmt(s.total);
        if (mathieu) {
            cd omega = t.lambdas ? mp.frequency(lam[1]) : cd(nan, nan);
            f << ',' << fmt(omega.real()) << ',' << fmt(omega.imag());
        }
        f << '\n';
    }

    const std::size_t shown = std::min<std::size_t>(static_cast<std::size_t>(cfg.functions), r.tuples.size());
    for (std::size_t j = 0; j < shown; ++j) {
        const tsvd::ApproxTuple& t = r.tuples[j];
        if (!t.lambdas) break;
        spectral::ChebExpansion u1 = spectral::reconstruct(d.bases[0], t.tuple.vectors[0]);
        spectral::ChebExpansion u2 = spectral::reconstruct(d.bases[1], t.tuple.vectors[1]);
        std::string tag = std::to_string(j + 1);
        {
            std::ofstream g = open_output(cfg, "u1_" + tag + ".csv");
            spectral::write_function_csv(g, u1, cfg.grid_points);
        }
        {
            std::ofstream g = open_output(cfg, "u2_" + tag + ".csv");
            spectral::write_function_csv(g, u2, cfg.grid_points);
        }
        if (mathieu) {
            std::ofstream g = open_output(cfg, "mode_" + tag + ".csv");
            spectral::write_mathieu_mode_csv(g, mp, u1, u2, cfg.grid_points, std::max(cfg.grid_points / 4, 2));
        }
    }
    log << cfg.command << ": " << r.tuples.size() << " tuples written to " << (cfg.out / "eigenvalues.csv").string()
        << '\n';
    return exit_ok;
}

}  // namespace

void apply_json(RunConfig& cfg, const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& key = it.key();
            const json& v = it.value();
            if (key == "command") cfg.command = v.get<std::string>();
            else if (key == "input") cfg.input = v.get<std::string>();
            else if (key == "out") cfg.out = v.get<std::string>();
            else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
            else if (key == "timestamp") cfg.timestamp = v.get<bool>();
            else if (key == "initial_lambdas") {
                cfg.initial_lambdas.clear();
                for (const json& x : v) cfg.initial_lambdas.push_back(complex_from(x));
            }
            else if (key == "max_iters") cfg.max_iters = v.get<int>();
            else if (key == "rel_tol") cfg.rel_tol = v.get<double>();
            else if (key == "kkt_check") cfg.kkt_check = v.get<bool>();
            else if (key == "restarts") cfg.restarts = v.get<int>();
            else if (key == "m") cfg.m = v.get<std::vector<Index>>();
            else if (key == "n") cfg.n = v.get<std::vector<Index>>();
            else if (key == "sigmas") cfg.sigmas = v.get<std::vector<double>>();
            else if (key == "trials") cfg.trials = v.get<int>();
            else if (key == "threads") cfg.threads = v.get<int>();
            else if (key == "n1") cfg.n1 = v.get<Index>();
            else if (key == "n2") cfg.n2 = v.get<Index>();
            else if (key == "oversampling") cfg.oversampling = v.get<int>();
            else if (key == "alpha") cfg.alpha = v.get<double>();
            else if (key == "beta") cfg.beta = v.get<double>();
            else if (key == "functions") cfg.functions = v.get<int>();
            else if (key == "grid_points") cfg.grid_points = v.get<int>();
            else throw ConfigError("unknown config key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& help_out) {
    CLI::App app{"Rectangular multiparameter eigenvalue solvers", "rmep"};
    RunConfig flags;
    std::string config_path, out, seed_text;
    std::vector<std::string> lambdas;
    std::vector<long> m, n;

    app.add_option("command", flags.command, "solve-one | solve-complete | bench-random | ode-sl | ode-mathieu");
    app.add_option("--config", config_path, "JSON config file");
    auto* seed_opt = app.add_option("--seed", seed_text, "RNG seed (required for stochastic commands)");
    auto* out_opt = app.add_option("--out", out, "output directory");
    auto* no_ts = app.add_flag("--no-timestamp", "omit the timestamp header line");
    auto* input_opt = app.add_option("--input", flags.input, "problem file (.json or .bin)");
    auto* lambda_opt = app.add_option("--lambda", lambdas, "initial lambda, re or re,im (repeat per parameter)");
    auto* iters_opt = app.add_option("--max-iters", flags.max_iters);
    auto* tol_opt = app.add_option("--rel-tol", flags.rel_tol);
    auto* nokkt_opt = app.add_flag("--no-kkt-check", "do not classify stagnation");
    auto* restarts_opt = app.add_option("--restarts", flags.restarts);
    auto* m_opt = app.add_option("--m", m, "row counts per equation");
    auto* n_opt = app.add_option("--n", n, "column counts per equation");
    auto* sig_opt = app.add_option("--sigmas", flags.sigmas);
    auto* trials_opt = app.add_option("--trials", flags.trials);
    auto* threads_opt = app.add_option("--threads", flags.threads);
    auto* n1_opt = app.add_option("--n1", flags.n1);
    auto* n2_opt = app.add_option("--n2", flags.n2);
    auto* os_opt = app.add_option("--oversampling", flags.oversampling);
    auto* alpha_opt = app.add_option("--alpha", flags.alpha);
    auto* beta_opt = app.add_option("--beta", flags.beta);
    auto* fn_opt = app.add_option("--functions", flags.functions);
    auto* grid_opt = app.add_option("--grid-points", flags.grid_points);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        help_out << app.help();
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    RunConfig cfg;
    if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) throw ConfigError("cannot read config " + config_path);
        std::stringstream ss;
        ss << f.rdbuf();
        apply_json(cfg, ss.str());
    }
    if (!flags.command.empty()) cfg.command = flags.command;
    if (*input_opt) cfg.input = flags.input;
    if (*out_opt) cfg.out = out;
    if (*seed_opt) {
        try {
            std::size_t used = 0;
            if (seed_text.empty() || seed_text[0] == '-') throw std::invalid_argument(seed_text);
            cfg.seed = std::stoull(seed_text, &used);
            if (used != seed_text.size()) throw std::invalid_argument(seed_text);
        } catch (const std::exception&) {
            throw ConfigError("--seed must be a nonnegative integer");
        }
    }
    if (*no_ts) cfg.timestamp = false;
    if (*lambda_opt) {
        cfg.initial_lambdas.clear();
        for (const auto& s : lambdas) cfg.initial_lambdas.push_back(parse_complex(s));
    }
    if (*iters_opt) cfg.max_iters = flags.max_iters;
    if (*tol_opt) cfg.rel_tol = flags.rel_tol;
    if (*nokkt_opt) cfg.kkt_check = false;
    if (*restarts_opt) cfg.restarts = flags.restarts;
    if (*m_opt) cfg.m.assign(m.begin(), m.end());
    if (*n_opt) cfg.n.assign(n.begin(), n.end());
    if (*sig_opt) cfg.sigmas = flags.sigmas;
    if (*trials_opt) cfg.trials = flags.trials;
    if (*threads_opt) cfg.threads = flags.threads;
    if (*n1_opt) cfg.n1 = flags.n1;
    if (*n2_opt) cfg.n2 = flags.n2;
    if (*os_opt) cfg.oversampling = flags.oversampling;
    if (*alpha_opt) cfg.alpha = flags.alpha;
    if (*beta_opt) cfg.beta = flags.beta;
    if (*fn_opt) cfg.functions = flags.functions;
    if (*grid_opt) cfg.grid_points = flags.grid_points;
    if (cfg.command.empty()) throw ConfigError("no command given");
    validate(cfg);
    return cfg;
}

int run(const RunConfig& cfg, std::ostream& log) {
    try {
        validate(cfg);
        if (const char* env = std::getenv("RMEP_BACKEND_THREADS")) {
            int t = std::atoi(env);
            if (t < 1) throw ConfigError("RMEP_BACKEND_THREADS must be a positive integer");
            linalg::set_backend_threads(t);
        }
        std::error_code ec;
        std::filesystem::create_directories(cfg.out, ec);
        if (ec) throw ConfigError("cannot create output directory " + cfg.out.string() + ": " + ec.message());

        if (cfg.command == "solve-one") return run_solve_one(cfg, log);
        if (cfg.command == "solve-complete") return run_solve_complete(cfg, log);
        if (cfg.command == "bench-random") return run_bench(cfg, log);
        return run_ode(cfg, log);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const ValidationError& e) {
        log << "invalid input: " << e.what() << '\n';
        return exit_config;
    } catch (const DomainError& e) {
        log << "invalid input: " << e.what() << '\n';
        return exit_config;
    } catch (const CapacityError& e) {
        log << "capacity: " << e.what() << '\n';
        return exit_capacity;
    } catch (const IrregularMep& e) {
        log << "irregular MEP: " << e.what() << '\n';
        return exit_irregular;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

double relative_error(cd a, cd b) {
    const double denom = std::abs(a) + std::abs(b);
    return denom == 0.0 ? 0.0 : std::abs(a - b) / denom;
}

Matching greedy_match(const std::vector<std::vector<cd>>& reference, const std::vector<std::vector<cd>>& computed) {
    struct Candidate {
        double cost;
        std::size_t r, c;
    };
    std::vector<Candidate> all;
    all.reserve(reference.size() * computed.size());
    for (std::size_t r = 0; r < reference.size(); ++r)
        for (std::size_t c = 0; c < computed.size(); ++c) {
            if (reference[r].size() != computed[c].size()) throw ValidationError("greedy_match: parameter count mismatch");
            double cost = 0.0;
            for (std::size_t s = 0; s < reference[r].size(); ++s) cost += relative_error(reference[r][s], computed[c][s]);
            all.push_back({cost, r, c});
        }
    std::stable_sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) { return a.cost < b.cost; });

    Matching m;
    std::vector<bool> used_r(reference.size()), used_c(computed.size());
    for (const Candidate& cand : all) {
        if (used_r[cand.r] || used_c[cand.c]) continue;
        used_r[cand.r] = used_c[cand.c] = true;
        m.pairs.emplace_back(cand.r, cand.c);
    }
    m.unmatched = reference.size() - m.pairs.size();
    return m;
}

ErrorStats match_errors(const std::vector<std::vector<cd>>& reference, const std::vector<std::vector<cd>>& computed,
                        const Matching& m) {
    const std::size_t k = reference.empty() ? 0 : reference.front().size();
    ErrorStats st;
    st.max.assign(k, 0.0);
    st.min.assign(k, m.pairs.empty() ? 0.0 : std::numeric_limits<double>::infinity());
    st.mean.assign(k, 0.0);
    for (const auto& [r, c] : m.pairs)
        for (std::size_t s = 0; s < k; ++s) {
            double e = relative_error(reference[r][s], computed[c][s]);
            st.max[s] = std::max(st.max[s], e);
            st.min[s] = std::min(st.min[s], e);
            st.mean[s] += e;
        }
    if (!m.pairs.empty())
        for (double& v : st.mean) v /= static_cast<double>(m.pairs.size());
    return st;
}

std::vector<BenchRow> bench_random(const std::vector<Index>& m, const std::vector<Index>& n,
                                   const std::vector<double>& sigmas, int trials, std::uint64_t seed, int threads) {
    const std::size_t k = m.size();
    struct TrialOut {
        ErrorStats stats;
        std::size_t unmatched = 0;
    };

    auto one_trial = [&](std::size_t q, int t) {
        std::uint64_t s = splitmix64(splitmix64(seed ^ (0x51ed2701ull * (q + 1))) + static_cast<std::uint64_t>(t));
        PlantedProblem planted = random_planted_problem(m, n, sigmas[q], s);
        mep::MepOptions opts;
        opts.seed = s;
        std::vector<std::vector<cd>> ref, got;
        for (const mep::MepTuple& mt : mep::solve_mep(planted.reference, opts).tuples)
            if (mt.value.is_finite()) ref.push_back(dehomogenize(mt.value));
        for (const tsvd::ApproxTuple& at : tsvd::solve_complete(planted.problem, opts).tuples)
            if (at.lambdas) got.push_back(*at.lambdas);
        Matching match = greedy_match(ref, got);
        return TrialOut{match_errors(ref, got, match), match.unmatched};
    };

    std::vector<BenchRow> rows;
    for (std::size_t q = 0; q < sigmas.size(); ++q) {
        std::vector<TrialOut> outs(static_cast<std::size_t>(trials));
        if (threads <= 1) {
            for (int t = 0; t < trials; ++t) outs[t] = one_trial(q, t);
        } else {
            std::atomic<int> next{0};
            std::exception_ptr failure;
            std::mutex failure_mutex;
            std::vector<std::thread> pool;
            for (int w = 0; w < threads; ++w)
                pool.emplace_back([&] {
                    for (int t = next++; t < trials; t = next++) {
                        try {
                            outs[t] = one_trial(q, t);
                        } catch (...) {
                            std::lock_guard<std::mutex> lock(failure_mutex);
                            if (!failure) failure = std::current_exception();
                        }
                    }
                });
            for (auto& th : pool) th.join();
            if (failure) std::rethrow_exception(failure);
        }

        BenchRow row;
        row.sigma = sigmas[q];
        row.trials = trials;
        row.average.max.assign(k, 0.0);
        row.average.min.assign(k, 0.0);
        row.average.mean.assign(k, 0.0);
        for (const TrialOut& o : outs) {
            for (std::size_t s = 0; s < k; ++s) {
                row.average.max[s] += o.stats.max[s] / trials;
                row.average.min[s] += o.stats.min[s] / trials;
                row.average.mean[s] += o.stats.mean[s] / trials;
            }
            row.unmatched += static_cast<double>(o.unmatched) / trials;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows, std::size_t k) {
    out << "sigma,trials";
    for (std::size_t s = 1; s <= k; ++s)
        out << ",max_err_" << s << ",min_err_" << s << ",mean_err_" << s;
    out << ",unmatched\n";
    for (const BenchRow& r : rows) {
        out << fmt(r.sigma) << ',' << r.trials;
        for (std::size_t s = 0; s < k; ++s)
            out << ',' << fmt(r.average.max[s]) << ',' << fmt(r.average.min[s]) << ',' << fmt(r.average.mean[s]);
        out << ',' << fmt(r.unmatched) << '\n';
    }
}

}  // namespace rmep::cli
