#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "detquas/config.hpp"
#include "detquas/dpp.hpp"
#include "detquas/equivalence.hpp"
#include "detquas/fock.hpp"
#include "detquas/functionals.hpp"
#include "detquas/kernels.hpp"
#include "detquas/orthopoly.hpp"
#include "detquas/suites.hpp"

namespace {

using detquas::config::json;

std::string fmt(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw detquas::config::ConfigError("cannot write output file '" + path + "'");
    out << text;
}

std::vector<long> parse_long_list(const std::string& csv) {
    std::vector<long> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            long v = std::stol(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw detquas::config::ConfigError("invalid integer list entry '" + item + "'");
        }
    }
    if (out.empty()) throw detquas::config::ConfigError("empty integer list");
    return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw detquas::config::ConfigError("invalid number list entry '" + item + "'");
        }
    }
    if (out.empty()) throw detquas::config::ConfigError("empty number list");
    return out;
}

struct Tolerances {
    double eps_reg = detquas::kRegularityEps;
    double cauchy_eps = 1e-3;
    double divergence_factor = 10.0;
    long norm_window = 512;
    double sv_threshold_rel = 1e-8;

    std::string describe() const {
        std::ostringstream s;
        s << "eps_reg=" << eps_reg << " cauchy_eps=" << cauchy_eps
          << " divergence_factor=" << divergence_factor << " norm_window=" << norm_window
          << " sv_threshold_rel=" << sv_threshold_rel;
        return s.str();
    }
};

std::string csv_header(const json& cfg, const Tolerances& tol) {
    std::ostringstream s;
    s << "# config_hash: " << detquas::config::config_hash_hex(cfg) << "\n";
    s << "# policy: " << tol.describe() << "\n";
    return s.str();
}

detquas::KernelMatrix load_matrix(const std::string& kernel_path, const std::string& window_path,
                                  json& combined_cfg) {
    json kj = detquas::config::load_json_file(kernel_path);
    combined_cfg["kernel"] = kj;
    if (!window_path.empty()) {
        json wj = detquas::config::load_json_file(window_path);
        combined_cfg["window"] = wj;
        return detquas::config::parse_kernel_matrix(kj, &wj);
    }
    return detquas::config::parse_kernel_matrix(kj, nullptr);
}

int run_verify(const std::string& suite, std::size_t max_sites, std::size_t max_n,
               std::size_t instances, std::uint64_t seed, const std::string& out_path,
               const Tolerances& tol) {
    std::vector<detquas::SuiteReport> reports;
    auto want = [&](const char* name) { return suite == name || suite == "all"; };
    if (want("car")) reports.push_back(detquas::suite_car(std::min<std::size_t>(max_sites, 5)));
    if (want("ideal")) reports.push_back(detquas::suite_ideal(std::min<std::size_t>(max_sites, 5)));
    if (want("perfect")) reports.push_back(detquas::suite_perfect(max_sites, max_n, seed));
    if (want("functionals")) reports.push_back(detquas::suite_functionals(instances, seed));
    if (suite == "all") {
        reports.push_back(detquas::suite_strahov_fyodorov(instances, seed));
        reports.push_back(detquas::suite_conditioning(instances, seed));
        reports.push_back(detquas::suite_particle_hole(std::min<std::size_t>(max_sites, 8), seed));
        reports.push_back(detquas::suite_product_counterexample());
    }
    if (reports.empty())
        throw detquas::config::ConfigError(
            "unknown verify suite '" + suite + "' (car, ideal, perfect, functionals, all)");

    bool pass = true;
    json out;
    out["suite"] = suite;
    out["policy"] = tol.describe();
    out["reports"] = json::array();
    for (const auto& r : reports) {
        pass = pass && r.pass;
        json jr;
        jr["name"] = r.name;
        jr["pass"] = r.pass;
        jr["max_residual"] = r.max_residual;
        jr["tolerance"] = r.tolerance;
        jr["cases"] = r.cases;
        if (!r.detail.empty()) jr["detail"] = r.detail;
        out["reports"].push_back(jr);
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << ": max residual "
                  << fmt(r.max_residual) << " (tolerance " << fmt(r.tolerance) << ", "
                  << r.cases << " cases)" << (r.detail.empty() ? "" : "; " + r.detail)
                  << "\n";
    }
    out["pass"] = pass;
    write_text(out_path, out.dump(2) + "\n");
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"determinantal measures and fermion quasifree states toolkit"};
    app.require_subcommand(1);

    Tolerances tol;

    // kernel
    auto* cmd_kernel = app.add_subcommand("kernel", "materialize a kernel on a window as CSV");
    std::string k_kernel, k_window, k_out;
    cmd_kernel->add_option("--kernel", k_kernel, "kernel config JSON")->required();
    cmd_kernel->add_option("--window", k_window, "window config JSON");
    cmd_kernel->add_option("--out", k_out, "output CSV path (default stdout)");

    // correlations
    auto* cmd_corr = app.add_subcommand("correlations", "correlation minor at a point tuple");
    std::string c_kernel, c_window, c_points, c_out;
    cmd_corr->add_option("--kernel", c_kernel, "kernel config JSON")->required();
    cmd_corr->add_option("--window", c_window, "window config JSON");
    cmd_corr->add_option("--points", c_points, "comma-separated sites")->required();
    cmd_corr->add_option("--out", c_out, "output CSV path (default stdout)");

    // sample
    auto* cmd_sample = app.add_subcommand("sample", "draw projection-DPP samples");
    std::string s_kernel, s_window, s_out;
    std::size_t s_n = 1;
    std::uint64_t s_seed = 0;
    cmd_sample->add_option("--kernel", s_kernel, "kernel config JSON")->required();
    cmd_sample->add_option("--window", s_window, "window config JSON");
    cmd_sample->add_option("--n", s_n, "number of samples")->required();
    cmd_sample->add_option("--seed", s_seed, "RNG seed")->required();
    cmd_sample->add_option("--out", s_out, "output CSV path (default stdout)");

    // reduce
    auto* cmd_reduce = app.add_subcommand("reduce", "condition a kernel on occupancy/vacancy");
    std::string r_kernel, r_window, r_occ, r_vac, r_out;
    cmd_reduce->add_option("--kernel", r_kernel, "kernel config JSON")->required();
    cmd_reduce->add_option("--window", r_window, "window config JSON");
    cmd_reduce->add_option("--occupied", r_occ, "comma-separated occupied sites");
    cmd_reduce->add_option("--vacant", r_vac, "comma-separated vacant sites");
    cmd_reduce->add_option("--out", r_out, "output CSV path (default stdout)");
    cmd_reduce->add_option("--eps-reg", tol.eps_reg, "regularity pivot gate");

    // verify
    auto* cmd_verify = app.add_subcommand("verify", "run a verification suite");
    std::string v_suite, v_out;
    std::size_t v_max_sites = 8, v_max_n = 3, v_instances = 100;
    std::uint64_t v_seed = 20240901;
    cmd_verify->add_option("suite", v_suite, "car | ideal | perfect | functionals | all")
        ->required();
    cmd_verify->add_option("--max-sites", v_max_sites, "largest window size");
    cmd_verify->add_option("--max-n", v_max_n, "largest monomial order");
    cmd_verify->add_option("--instances", v_instances, "random instances");
    cmd_verify->add_option("--seed", v_seed, "RNG seed");
    cmd_verify->add_option("--out", v_out, "JSON report path (default stdout)");

    // equivalence
    auto* cmd_equiv = app.add_subcommand("equivalence", "equivalence / disjointness verdict");
    std::string e_k1, e_k2, e_cutoffs = "256,1024,4096", e_out;
    bool e_path = false;
    cmd_equiv->add_option("--k1", e_k1, "first kernel config")->required();
    cmd_equiv->add_option("--k2", e_k2, "second kernel config")->required();
    cmd_equiv->add_option("--cutoffs", e_cutoffs, "comma-separated partial-sum cutoffs");
    cmd_equiv->add_option("--out", e_out, "verdict JSON path (default stdout)");
    cmd_equiv->add_flag("--declare-path", e_path,
                        "declare a norm-continuous parameter path between the kernels");
    cmd_equiv->add_option("--cauchy-eps", tol.cauchy_eps, "Cauchy gate");
    cmd_equiv->add_option("--divergence-factor", tol.divergence_factor, "divergence gate factor");
    cmd_equiv->add_option("--norm-window", tol.norm_window, "window for the norm-gap estimate");

    // limits
    auto* cmd_limits = app.add_subcommand("limits", "limit-kernel convergence tables");
    std::string l_which, l_ns = "100,200,400", l_out;
    double l_phi = M_PI / 2.0;
    cmd_limits->add_option("which", l_which, "charlier-to-sine")->required();
    cmd_limits->add_option("--phi", l_phi, "sine kernel parameter in (0, pi)");
    cmd_limits->add_option("--N", l_ns, "comma-separated particle counts");
    cmd_limits->add_option("--out", l_out, "output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*cmd_kernel) {
            json cfg;
            detquas::KernelMatrix K = load_matrix(k_kernel, k_window, cfg);
            std::ostringstream out;
            out << csv_header(cfg, tol) << "row_site,col_site,value\n";
            for (std::size_t i = 0; i < K.size(); ++i)
                for (std::size_t j = 0; j < K.size(); ++j)
                    out << fmt(K.window()->site(i)) << ',' << fmt(K.window()->site(j)) << ','
                        << fmt(K.entry(i, j)) << "\n";
            write_text(k_out, out.str());
            return 0;
        }
        if (*cmd_corr) {
            json cfg;
            detquas::KernelMatrix K = load_matrix(c_kernel, c_window, cfg);
            std::vector<double> pts;
            for (long p : parse_long_list(c_points)) pts.push_back(static_cast<double>(p));
            cfg["points"] = pts;
            double rho = detquas::correlation(K, pts);
            std::ostringstream out;
            out << csv_header(cfg, tol) << "points,value\n";
            for (std::size_t i = 0; i < pts.size(); ++i)
                out << (i ? ";" : "") << fmt(pts[i]);
            out << ',' << fmt(rho) << "\n";
            write_text(c_out, out.str());
            return 0;
        }
        if (*cmd_sample) {
            json cfg;
            detquas::KernelMatrix K = load_matrix(s_kernel, s_window, cfg);
            cfg["n"] = s_n;
            cfg["seed"] = s_seed;
            detquas::DeterminantalMeasure measure(std::move(K));
            std::mt19937_64 rng(s_seed);
            std::ostringstream out;
            out << csv_header(cfg, tol) << "sample";
            const auto& win = measure.kernel().window();
            for (std::size_t i = 0; i < win->size(); ++i) out << ",x" << fmt(win->site(i));
            out << "\n";
            for (std::size_t s = 0; s < s_n; ++s) {
                detquas::Configuration c = measure.sample(rng);
                out << s;
                for (std::size_t i = 0; i < win->size(); ++i)
                    out << ',' << (c.contains_index(i) ? 1 : 0);
                out << "\n";
            }
            write_text(s_out, out.str());
            return 0;
        }
        if (*cmd_reduce) {
            json cfg;
            detquas::KernelMatrix K = load_matrix(r_kernel, r_window, cfg);
            std::vector<double> occ, vac;
            if (!r_occ.empty())
                for (long p : parse_long_list(r_occ)) occ.push_back(static_cast<double>(p));
            if (!r_vac.empty())
                for (long p : parse_long_list(r_vac)) vac.push_back(static_cast<double>(p));
            cfg["occupied"] = occ;
            cfg["vacant"] = vac;
            auto [reduced, trace] = detquas::reduce(K, occ, vac, tol.eps_reg);
            std::ostringstream out;
            out << csv_header(cfg, tol);
            for (const auto& step : trace.steps)
                out << "# step: site " << fmt(step.site) << ' '
                    << (step.occupied ? "occupied" : "vacant") << " pivot " << fmt(step.pivot)
                    << "\n";
            out << "row_site,col_site,value\n";
            for (std::size_t i = 0; i < reduced.size(); ++i)
                for (std::size_t j = 0; j < reduced.size(); ++j)
                    out << fmt(reduced.window()->site(i)) << ',' << fmt(reduced.window()->site(j))
                        << ',' << fmt(reduced.entry(i, j)) << "\n";
            write_text(r_out, out.str());
            return 0;
        }
        if (*cmd_verify)
            return run_verify(v_suite, v_max_sites, v_max_n, v_instances, v_seed, v_out, tol);
        if (*cmd_equiv) {
            json cfg;
            json k1j = detquas::config::load_json_file(e_k1);
            json k2j = detquas::config::load_json_file(e_k2);
            cfg["k1"] = k1j;
            cfg["k2"] = k2j;
            auto K1 = detquas::config::parse_kernel_function(k1j);
            auto K2 = detquas::config::parse_kernel_function(k2j);
            std::vector<long> cutoffs = parse_long_list(e_cutoffs);
            detquas::VerdictPolicy policy;
            policy.cauchy_eps = tol.cauchy_eps;
            policy.divergence_factor = tol.divergence_factor;
            policy.norm_window = tol.norm_window;
            policy.sv_threshold_rel = tol.sv_threshold_rel;
            policy.continuous_path_declared = e_path;
            detquas::EquivalenceVerdict v = detquas::verdict(*K1, *K2, cutoffs, policy);

            json out;
            out["verdict"] = v.verdict == detquas::VerdictKind::Equivalent ? "equivalent"
                             : v.verdict == detquas::VerdictKind::Disjoint ? "disjoint"
                                                                           : "inconclusive";
            out["S"] = v.sums.partial_sums;
            out["cauchy_gap"] = v.cauchy_gap;
            if (v.index)
                out["index"] = *v.index;
            else
                out["index"] = nullptr;
            out["policy"] = {{"cauchy_eps", policy.cauchy_eps},
                             {"divergence_factor", policy.divergence_factor},
                             {"norm_window", policy.norm_window},
                             {"sv_threshold_rel", policy.sv_threshold_rel},
                             {"continuous_path_declared", policy.continuous_path_declared},
                             {"cutoffs", cutoffs}};
            out["norm_gap"] = v.norm_gap;
            out["diagnostics"] = v.diagnostics;
            out["config_hash"] = detquas::config::config_hash_hex(cfg);
            write_text(e_out, out.dump(2) + "\n");
            return 0;
        }
        if (*cmd_limits) {
            if (l_which != "charlier-to-sine")
                throw detquas::config::ConfigError("unknown limits table '" + l_which + "'");
            json cfg;
            cfg["which"] = l_which;
            cfg["phi"] = l_phi;
            auto Ns = parse_long_list(l_ns);
            cfg["N"] = Ns;
            auto win = detquas::GroundWindow::integer_interval(detquas::AmbientModel::FullLine,
                                                               -5, 5);
            detquas::KernelMatrix sine =
                detquas::materialize(*detquas::sine_kernel(l_phi), win);
            std::ostringstream out;
            out << csv_header(cfg, tol) << "N,max_entry_error\n";
            for (long N : Ns) {
                if (N <= 0) throw detquas::config::ConfigError("N must be positive");
                detquas::KernelMatrix approx = detquas::charlier_scaled_kernel(
                    static_cast<std::size_t>(N), l_phi, win);
                double err = (approx.entries() - sine.entries()).cwiseAbs().maxCoeff();
                out << N << ',' << fmt(err) << "\n";
            }
            write_text(l_out, out.str());
            return 0;
        }
    } catch (const detquas::config::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
