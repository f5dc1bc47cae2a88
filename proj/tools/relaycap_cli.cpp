#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "relaycap/acceptance.hpp"
#include "relaycap/af.hpp"
#include "relaycap/capacity.hpp"
#include "relaycap/concentration.hpp"
#include "relaycap/montecarlo.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using relaycap::NetworkConfig;
using relaycap::Protocol;

struct CommonOpts {
    int M = 2, K = 4, L = 1;
    double sigma2 = 0.01, p_rel = 1.0;
    double e_const = 1.0, p_const = 1.0;
    std::string e_csv, p_csv;
    std::uint64_t seed = 0;
    std::string config_file;
};

std::vector<double> load_csv_matrix(const std::string& path, int rows, int cols) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
    std::vector<double> vals;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    }
    if (vals.size() != static_cast<std::size_t>(rows) * cols)
        throw std::invalid_argument("matrix file " + path + " is not " + std::to_string(rows) +
                                    "x" + std::to_string(cols));
    return vals;
}

// Flat key-value config: `key = value`, `key value`, or `key=value`; '#'
// starts a comment.
void apply_config_file(CommonOpts& o) {
    std::ifstream in(o.config_file);
    if (!in) throw std::invalid_argument("cannot open config file: " + o.config_file);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        for (char& c : line)
            if (c == '=') c = ' ';
        std::stringstream ss(line);
        std::string key, value;
        if (!(ss >> key >> value)) continue;
        if (key == "M")
            o.M = std::stoi(value);
        else if (key == "K")
            o.K = std::stoi(value);
        else if (key == "L")
            o.L = std::stoi(value);
        else if (key == "sigma2")
            o.sigma2 = std::stod(value);
        else if (key == "P_rel")
            o.p_rel = std::stod(value);
        else if (key == "seed")
            o.seed = std::stoull(value);
        else if (key == "E_const")
            o.e_const = std::stod(value);
        else if (key == "P_const")
            o.p_const = std::stod(value);
        else if (key == "E_csv")
            o.e_csv = value;
        else if (key == "P_csv")
            o.p_csv = value;
        else
            throw std::invalid_argument("unknown config key: " + key);
    }
}

NetworkConfig build_config(CommonOpts o) {
    if (!o.config_file.empty()) apply_config_file(o);
    NetworkConfig cfg =
        NetworkConfig::uniform_gains(o.M, o.K, o.sigma2, o.p_rel, o.e_const, o.p_const, o.L, o.seed);
    if (!o.e_csv.empty()) {
        cfg.E = load_csv_matrix(o.e_csv, o.K, o.M);
        cfg.e_lo = 0;
    }
    if (!o.p_csv.empty()) {
        cfg.P = load_csv_matrix(o.p_csv, o.M, o.K);
        cfg.p_lo = 0;
    }
    if (!o.e_csv.empty() || !o.p_csv.empty()) {
        cfg.derive_gain_bounds();
        cfg.validate();
    }
    return cfg;
}

Protocol parse_protocol(const std::string& name) {
    if (name == "P1") return Protocol::P1;
    if (name == "P2") return Protocol::P2;
    if (name == "P1-coop") return Protocol::P1Coop;
    if (name == "P2-coop") return Protocol::P2Coop;
    throw std::invalid_argument("unknown protocol: " + name);
}

// "a:b:step" inclusive range or comma-separated list
std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        std::stringstream ss(spec);
        std::string a, b, st;
        std::getline(ss, a, ':');
        std::getline(ss, b, ':');
        std::getline(ss, st, ':');
        const double lo = std::stod(a), hi = std::stod(b);
        const double step = st.empty() ? 1.0 : std::stod(st);
        if (!(step > 0)) throw std::invalid_argument("grid step must be positive");
        for (double v = lo; v <= hi + 1e-12 * std::max(1.0, std::abs(hi)); v += step)
            out.push_back(v);
    } else {
        std::stringstream ss(spec);
        std::string cell;
        while (std::getline(ss, cell, ','))
            if (!cell.empty()) out.push_back(std::stod(cell));
    }
    if (out.empty()) throw std::invalid_argument("empty grid: " + spec);
    return out;
}

struct Output {
    std::ofstream file;
    std::ostream* os = &std::cout;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file.open(path);
            if (!file) throw std::invalid_argument("cannot open output file: " + path);
            os = &file;
        }
    }
    std::ostream& stream() { return *os; }
    // walltime goes last so data rows stay byte-identical across runs
    void finish() {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                                .count();
        char buf[64];
        std::snprintf(buf, sizeof(buf), "# walltime_s: %.3f", secs);
        *os << buf << "\n";
    }
};

void manifest(std::ostream& os, const std::string& command, const std::string& detail,
              std::uint64_t seed) {
    os << "# relaycap " << kVersion << "\n";
    os << "# command: " << command << "\n";
    if (!detail.empty()) os << "# config: " << detail << "\n";
    os << "# seed: " << seed << "\n";
}

std::string describe(const NetworkConfig& c) {
    std::ostringstream os;
    os << "M=" << c.M << " K=" << c.K << " L=" << c.L << " sigma2=" << c.sigma2
       << " P_rel=" << c.p_rel << " e=[" << c.e_lo << "," << c.e_hi << "] p=[" << c.p_lo << ","
       << c.p_hi << "]";
    return os.str();
}

std::string row(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fading interference relay network capacity toolkit"};
    app.require_subcommand(1);

    std::string full_command;
    for (int i = 0; i < argc; ++i) {
        if (i) full_command += ' ';
        full_command += argv[i];
    }

    CommonOpts common;
    std::string out_path, protocol_name = "P1";
    std::uint64_t trials = 10000;
    int workers = 0;

    auto add_common = [&](CLI::App* cmd, bool with_protocol) {
        cmd->add_option("--config", common.config_file, "flat key-value config file");
        cmd->add_option("--M", common.M, "source-destination pairs");
        cmd->add_option("--K", common.K, "relay count");
        cmd->add_option("--L", common.L, "relays per cooperation group");
        cmd->add_option("--sigma2", common.sigma2, "noise variance (linear)");
        cmd->add_option("--p-rel", common.p_rel, "total relay power");
        cmd->add_option("--e-const", common.e_const, "constant first-hop energy");
        cmd->add_option("--p-const", common.p_const, "constant second-hop energy");
        cmd->add_option("--e-csv", common.e_csv, "K x M first-hop energy matrix (CSV)");
        cmd->add_option("--p-csv", common.p_csv, "M x K second-hop energy matrix (CSV)");
        cmd->add_option("--seed", common.seed, "RNG seed");
        cmd->add_option("--out", out_path, "output path (default: stdout)");
        cmd->add_option("--workers", workers, "worker threads (default: RELAYCAP_WORKERS or hw)");
        if (with_protocol)
            cmd->add_option("--protocol", protocol_name, "P1 | P2 | P1-coop | P2-coop");
    };

    auto* sim_sinr = app.add_subcommand("simulate-sinr", "Monte Carlo SINR CDF");
    add_common(sim_sinr, true);
    sim_sinr->add_option("--trials", trials, "Monte Carlo trials");

    std::string matrix_kind = "mp";
    int esd_n = 400, esd_nprime = 800;
    double af_d = 1.0;
    auto* sim_esd = app.add_subcommand("simulate-esd", "empirical spectral distributions");
    add_common(sim_esd, false);
    sim_esd->add_option("--matrix", matrix_kind, "mp | t | product");
    sim_esd->add_option("--N", esd_n, "rows for the mp matrix");
    sim_esd->add_option("--Nprime", esd_nprime, "columns for the mp matrix");
    sim_esd->add_option("--d", af_d, "relay scale d");
    sim_esd->add_option("--trials", trials, "pooled trials");

    auto* sim_af = app.add_subcommand("simulate-af", "finite-size AF capacity estimate");
    add_common(sim_af, false);
    sim_af->add_option("--d", af_d, "relay scale d");
    sim_af->add_option("--trials", trials, "Monte Carlo trials");

    std::string x_spec = "1:8:1", r_spec = "0:0.5:0.05", beta_spec = "0.25,0.5,1,2,4,8";
    auto* bounds_cmd = app.add_subcommand("bounds", "SINR concentration intervals");
    add_common(bounds_cmd, true);
    bounds_cmd->add_option("--x", x_spec, "deviation grid a:b:step or comma list");

    auto* outage_cmd = app.add_subcommand("outage", "outage probability bound for P1");
    add_common(outage_cmd, false);
    outage_cmd->add_option("--R", r_spec, "rate grid a:b:step or comma list");

    double eps = 0.1, delta = 0.5;
    auto* ergodic_cmd = app.add_subcommand("ergodic", "ergodic capacity interval + MC estimate");
    add_common(ergodic_cmd, true);
    ergodic_cmd->add_option("--eps", eps, "epsilon slack");
    ergodic_cmd->add_option("--delta", delta, "delta exponent slack");
    ergodic_cmd->add_option("--trials", trials, "Monte Carlo trials");

    double beta = 0.5, y_eps = -1.0;
    int points = 400;
    auto* afd = app.add_subcommand("af-density", "limiting AF eigenvalue density");
    afd->add_option("--beta", beta, "K/M ratio")->required();
    afd->add_option("--d", af_d, "relay scale d");
    afd->add_option("--points", points, "grid points");
    afd->add_option("--y-eps", y_eps, "inversion smoothing (default 1e-6 x_max)");
    afd->add_option("--out", out_path, "output path");

    double af_sigma2 = 0.01;
    auto* afc = app.add_subcommand("af-capacity", "asymptotic AF capacity over beta grid");
    afc->add_option("--beta-grid", beta_spec, "beta grid a:b:step or comma list");
    afc->add_option("--d", af_d, "relay scale d");
    afc->add_option("--sigma2", af_sigma2, "noise variance");
    afc->add_option("--out", out_path, "output path");

    std::string suite = "primary";
    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite");
    verify_cmd->add_option("--suite", suite, "suite name (primary)");
    verify_cmd->add_option("--workers", workers, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (sim_sinr->parsed()) {
            const NetworkConfig cfg = build_config(common);
            const Protocol proto = parse_protocol(protocol_name);
            const auto cdf = relaycap::mc::sinr_cdf(cfg, proto, trials, workers);
            Output out(out_path);
            manifest(out.stream(), full_command, describe(cfg), cfg.seed);
            out.stream() << "sinr,cdf\n";
            for (std::size_t i = 0; i < cdf.samples.size(); ++i)
                out.stream() << row(cdf.samples[i]) << ','
                             << row(static_cast<double>(i + 1) / cdf.samples.size()) << "\n";
            out.finish();
        } else if (sim_esd->parsed()) {
            std::vector<double> eig;
            std::string detail;
            if (matrix_kind == "mp") {
                eig = relaycap::mc::esd_mp_samples(esd_n, esd_nprime, af_d, trials, common.seed,
                                                   workers);
                detail = "N=" + std::to_string(esd_n) + " Nprime=" + std::to_string(esd_nprime);
            } else if (matrix_kind == "t") {
                eig = relaycap::mc::esd_t_samples(common.M, common.K, af_d, trials, common.seed,
                                                  workers);
                detail = "M=" + std::to_string(common.M) + " K=" + std::to_string(common.K);
            } else if (matrix_kind == "product") {
                eig = relaycap::mc::esd_product_samples(common.M, common.K, af_d, trials,
                                                        common.seed, workers);
                detail = "M=" + std::to_string(common.M) + " K=" + std::to_string(common.K);
            } else {
                throw std::invalid_argument("unknown matrix kind: " + matrix_kind);
            }
            Output out(out_path);
            manifest(out.stream(), full_command, detail + " d=" + row(af_d), common.seed);
            out.stream() << "eigenvalue,cdf\n";
            for (std::size_t i = 0; i < eig.size(); ++i)
                out.stream() << row(eig[i]) << ','
                             << row(static_cast<double>(i + 1) / eig.size()) << "\n";
            out.finish();
        } else if (sim_af->parsed()) {
            const auto est = relaycap::mc::af_capacity_mc(common.M, common.K, af_d, common.sigma2,
                                                          trials, common.seed, workers);
            Output out(out_path);
            nlohmann::json j;
            j["command"] = full_command;
            j["M"] = common.M;
            j["K"] = common.K;
            j["d"] = af_d;
            j["sigma2"] = common.sigma2;
            j["trials"] = trials;
            j["seed"] = common.seed;
            j["capacity_mean_bits"] = est.value;
            j["capacity_stderr"] = est.stderr_;
            out.stream() << j.dump(2) << "\n";
        } else if (bounds_cmd->parsed()) {
            const NetworkConfig cfg = build_config(common);
            const relaycap::GainBounds g = relaycap::derive_constants(cfg);
            const Protocol proto = parse_protocol(protocol_name);
            Output out(out_path);
            manifest(out.stream(), full_command, describe(cfg), cfg.seed);
            out.stream() << "x,lower,upper,fail_bound\n";
            for (double x : parse_grid(x_spec)) {
                const auto iv = relaycap::sinr_interval(proto, cfg.M, cfg.K, x, g, cfg.sigma2);
                out.stream() << row(x) << ',' << row(iv.lower) << ',' << row(iv.upper) << ','
                             << row(iv.fail_prob_bound) << "\n";
            }
            out.finish();
        } else if (outage_cmd->parsed()) {
            const NetworkConfig cfg = build_config(common);
            const relaycap::GainBounds g = relaycap::derive_constants(cfg);
            Output out(out_path);
            manifest(out.stream(), full_command, describe(cfg), cfg.seed);
            out.stream() << "R,x_of_R,bound\n";
            for (double r : parse_grid(r_spec)) {
                const auto ob = relaycap::outage_bound_p1(cfg.M, cfg.K, r, g, cfg.sigma2);
                out.stream() << row(r) << ',' << row(ob.x_of_r) << ','
                             << (ob.in_regime ? row(ob.p_out_bound) : std::string("nan")) << "\n";
            }
            out.finish();
        } else if (ergodic_cmd->parsed()) {
            const NetworkConfig cfg = build_config(common);
            const relaycap::GainBounds g = relaycap::derive_constants(cfg);
            const Protocol proto = parse_protocol(protocol_name);
            const auto iv = relaycap::ergodic_interval(
                proto, cfg.M, relaycap::is_cooperative(proto) ? cfg.Q : cfg.K, cfg.L, eps, delta,
                g, cfg.sigma2);
            const auto est = relaycap::mc::ergodic_estimate(cfg, proto, trials, workers);
            Output out(out_path);
            manifest(out.stream(), full_command, describe(cfg), cfg.seed);
            out.stream() << "M,K,lower,upper,mc_estimate\n";
            out.stream() << cfg.M << ',' << cfg.K << ',' << row(iv.lower) << ',' << row(iv.upper)
                         << ',' << row(est.value) << "\n";
            out.finish();
        } else if (afd->parsed()) {
            const relaycap::af::AfParams params{beta, af_d, 0.01};
            const auto curve = relaycap::af::limiting_density(params, y_eps, points);
            Output out(out_path);
            manifest(out.stream(), full_command,
                     "beta=" + row(beta) + " d=" + row(af_d) + " atom=" + row(curve.atom_at_zero) +
                         " x_max=" + row(curve.support.second),
                     0);
            out.stream() << "x,f\n";
            for (std::size_t i = 0; i < curve.grid.size(); ++i)
                out.stream() << row(curve.grid[i]) << ',' << row(curve.values[i]) << "\n";
            out.finish();
        } else if (afc->parsed()) {
            Output out(out_path);
            manifest(out.stream(), full_command, "d=" + row(af_d) + " sigma2=" + row(af_sigma2),
                     0);
            out.stream() << "beta,capacity_bits\n";
            for (double b : parse_grid(beta_spec)) {
                const double c = relaycap::af::capacity_beta({b, af_d, af_sigma2});
                out.stream() << row(b) << ',' << row(c) << "\n";
            }
            out.finish();
        } else if (verify_cmd->parsed()) {
            if (suite != "primary") throw std::invalid_argument("unknown suite: " + suite);
            const int failures = relaycap::acceptance::run_all(std::cout, workers);
            return failures == 0 ? 0 : 3;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
