// Command-line front end: figure-data CSV generation and simulation drivers.
// Subcommands: sens, op-point, mi, maxchi, vp-ber.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "sumrate/capacity.hpp"
#include "sumrate/closed_form.hpp"
#include "sumrate/csv.hpp"
#include "sumrate/maxchi.hpp"
#include "sumrate/precoder.hpp"
#include "sumrate/rng.hpp"

namespace {

using sumrate::format_g9;

std::vector<double> make_grid(double start, double stop, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("rho step must be positive");
    if (stop < start) throw std::invalid_argument("rho range is empty");
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = start + static_cast<double>(i) * step;
    return grid;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

struct KeyValues {
    std::vector<std::pair<std::string, std::string>> items;
    void add(const std::string& k, const std::string& v) { items.emplace_back(k, v); }
    void add(const std::string& k, double v) { add(k, format_g9(v)); }
    void add(const std::string& k, std::uint64_t v) { add(k, std::to_string(v)); }
    void print() const {
        for (const auto& [k, v] : items) std::cout << k << " = " << v << "\n";
    }
};

struct CommonOpts {
    std::uint64_t seed = 12345;
    std::uint64_t trials = 10000;
    std::string out;
    double rho_start_db = 0.0;
    double rho_stop_db = 0.0;
    double rho_step_db = 1.0;
    bool gnuplot = false;
    bool show_config = false;

    void attach(CLI::App* cmd, const std::string& default_out, double start, double stop,
                double step) {
        out = default_out;
        rho_start_db = start;
        rho_stop_db = stop;
        rho_step_db = step;
        cmd->add_option("--seed", seed, "master seed")->capture_default_str();
        cmd->add_option("--trials", trials, "Monte Carlo trials")->capture_default_str();
        cmd->add_option("--out", out, "output CSV path")->capture_default_str();
        cmd->add_option("--rho-start-db", rho_start_db, "SNR grid start (dB)")->capture_default_str();
        cmd->add_option("--rho-stop-db", rho_stop_db, "SNR grid stop (dB)")->capture_default_str();
        cmd->add_option("--rho-step-db", rho_step_db, "SNR grid step (dB)")->capture_default_str();
        cmd->add_flag("--gnuplot", gnuplot, "also write a gnuplot script next to the CSV");
        cmd->add_flag("--show-config", show_config, "print the effective configuration and exit");
    }

    void fill(KeyValues& kv) const {
        kv.add("seed", seed);
        kv.add("trials", trials);
        kv.add("out", out);
        kv.add("rho_start_db", rho_start_db);
        kv.add("rho_stop_db", rho_stop_db);
        kv.add("rho_step_db", rho_step_db);
    }
};

void emit_gnuplot(const std::string& csv_path, const std::string& title,
                  const std::vector<std::string>& plots) {
    std::string s;
    s += "set datafile separator ','\n";
    s += "set key autotitle columnhead\n";
    s += "set title '" + title + "'\n";
    s += "set xlabel 'rho (dB)'\n";
    s += "plot ";
    for (std::size_t i = 0; i < plots.size(); ++i) {
        if (i) s += ", \\\n     ";
        s += plots[i];
    }
    s += "\n";
    write_file(csv_path + ".gp", s);
}

// ---- sens ---------------------------------------------------------------

struct SensOpts {
    CommonOpts common;
    std::vector<double> betas{1.0, 2.0, 4.0, 8.0};
};

int cmd_sens(const SensOpts& o) {
    if (o.common.show_config) {
        KeyValues kv;
        o.common.fill(kv);
        std::string bs;
        for (double b : o.betas) bs += (bs.empty() ? "" : ",") + format_g9(b);
        kv.add("betas", bs);
        kv.print();
        return 0;
    }
    const std::vector<double> grid =
        make_grid(o.common.rho_start_db, o.common.rho_stop_db, o.common.rho_step_db);
    std::string csv = sumrate::csv_line({"beta", "rho_db", "sensitivity", "low_asymptote",
                                         "high_asymptote"});
    for (double beta : o.betas) {
        for (double db : grid) {
            const double rho = std::pow(10.0, db / 10.0);
            const auto s = sumrate::sensitivity(beta, rho);
            const auto lo = sumrate::sensitivity_asymptote(beta, rho, sumrate::SnrRegime::low);
            const auto hi = sumrate::sensitivity_asymptote(beta, rho, sumrate::SnrRegime::high);
            csv += sumrate::csv_line({format_g9(beta), format_g9(db), format_g9(s.value),
                                      format_g9(lo.value), format_g9(hi.value)});
        }
    }
    write_file(o.common.out, csv);
    if (o.common.gnuplot)
        emit_gnuplot(o.common.out, "sensitivity vs SNR",
                     {"'" + o.common.out + "' using 2:3 with lines"});
    return 0;
}

// ---- op-point -----------------------------------------------------------

struct OpPointOpts {
    CommonOpts common;
    double target_delta = 0.3;
    double beta_from = 1.0;
    std::vector<double> beta_to{2.0, 4.0, 8.0};
};

int cmd_op_point(const OpPointOpts& o) {
    if (o.common.show_config) {
        KeyValues kv;
        o.common.fill(kv);
        kv.add("target_delta", o.target_delta);
        kv.add("beta_from", o.beta_from);
        std::string bs;
        for (double b : o.beta_to) bs += (bs.empty() ? "" : ",") + format_g9(b);
        kv.add("beta_to", bs);
        kv.print();
        return 0;
    }
    std::string csv = sumrate::csv_line({"beta_from", "beta_to", "epsilon",
                                         "required_sensitivity", "rho_db", "penalty_db"});
    const double penalty = sumrate::db_penalty(o.target_delta);
    for (double bt : o.beta_to) {
        const double eps = sumrate::complexity_reduction(o.beta_from, bt);
        if (eps == 0.0) {
            csv += sumrate::csv_line({format_g9(o.beta_from), format_g9(bt), "0", "inf", "nan",
                                      format_g9(0.0)});
            std::cout << "beta " << format_g9(o.beta_from) << " -> " << format_g9(bt)
                      << ": no reduction, penalty 0 dB\n";
            continue;
        }
        const double required = o.target_delta / eps;
        const double rho = sumrate::solve_operating_point(o.beta_from, required);
        const double rho_db = 10.0 * std::log10(rho);
        csv += sumrate::csv_line({format_g9(o.beta_from), format_g9(bt), format_g9(eps),
                                  format_g9(required), format_g9(rho_db), format_g9(penalty)});
        std::cout << "beta " << format_g9(o.beta_from) << " -> " << format_g9(bt)
                  << ": epsilon = " << format_g9(eps) << ", required sensitivity = "
                  << format_g9(required) << ", rho = " << format_g9(rho_db)
                  << " dB, predicted penalty = " << format_g9(penalty) << " dB\n";
    }
    write_file(o.common.out, csv);
    return 0;
}

// ---- mi -----------------------------------------------------------------

struct MiOpts {
    CommonOpts common;
    std::size_t antennas = 8;
    std::vector<std::size_t> users{8, 4, 2, 1};
    std::uint64_t opt_trials = 1000;
};

int cmd_mi(const MiOpts& o) {
    if (o.common.show_config) {
        KeyValues kv;
        o.common.fill(kv);
        kv.add("M", static_cast<std::uint64_t>(o.antennas));
        std::string ks;
        for (std::size_t k : o.users) ks += (ks.empty() ? "" : ",") + std::to_string(k);
        kv.add("K", ks);
        kv.add("opt_trials", o.opt_trials);
        kv.print();
        return 0;
    }
    const std::vector<double> grid =
        make_grid(o.common.rho_start_db, o.common.rho_stop_db, o.common.rho_step_db);
    std::string csv = sumrate::csv_line({"M", "K", "rho_db", "I_eq_mc", "I_eq_stderr",
                                         "I_eq_closed", "I_opt_mc", "I_opt_stderr"});
    for (std::size_t k : o.users) {
        if (k == 0 || k > o.antennas) throw std::invalid_argument("mi: need 1 <= K <= M");
        const double beta = static_cast<double>(o.antennas) / static_cast<double>(k);
        for (std::size_t gi = 0; gi < grid.size(); ++gi) {
            const double db = grid[gi];
            const double rho = std::pow(10.0, db / 10.0);
            const std::uint64_t stream =
                sumrate::derive_stream(o.common.seed, (k << 20) + gi);
            const auto eq = sumrate::estimate_equal_power_rate(o.antennas, k, rho,
                                                               o.common.trials, stream);
            const auto opt = sumrate::estimate_optimized_rate(o.antennas, k, rho, o.opt_trials,
                                                              stream);
            const double closed = static_cast<double>(k) * sumrate::mp_rate(beta, rho);
            csv += sumrate::csv_line({std::to_string(o.antennas), std::to_string(k),
                                      format_g9(db), format_g9(eq.mean), format_g9(eq.std_error),
                                      format_g9(closed), format_g9(opt.mean),
                                      format_g9(opt.std_error)});
        }
    }
    write_file(o.common.out, csv);
    if (o.common.gnuplot)
        emit_gnuplot(o.common.out, "achievable sum-rate",
                     {"'" + o.common.out + "' using 3:4 with lines",
                      "'" + o.common.out + "' using 3:6 with lines",
                      "'" + o.common.out + "' using 3:7 with lines"});
    return 0;
}

// ---- maxchi -------------------------------------------------------------

struct MaxChiOpts {
    CommonOpts common;
    std::vector<int> ms{8, 16, 32, 64};
    std::vector<double> zetas{0.1, 0.5, 1.0};
};

int cmd_maxchi(const MaxChiOpts& o) {
    if (o.common.show_config) {
        KeyValues kv;
        o.common.fill(kv);
        std::string msr, zs;
        for (int m : o.ms) msr += (msr.empty() ? "" : ",") + std::to_string(m);
        for (double z : o.zetas) zs += (zs.empty() ? "" : ",") + format_g9(z);
        kv.add("M", msr);
        kv.add("zeta", zs);
        kv.print();
        return 0;
    }
    std::string csv = sumrate::csv_line({"M", "zeta", "analytic_prob", "empirical_prob",
                                         "mean_max_over_M"});
    for (int m : o.ms) {
        const auto stats = sumrate::empirical_max_stats(
            m, o.common.trials, sumrate::derive_stream(o.common.seed, static_cast<std::uint64_t>(m)),
            o.zetas);
        for (std::size_t zi = 0; zi < o.zetas.size(); ++zi) {
            const double z = o.zetas[zi];
            const double analytic = sumrate::cdf_max_chisq(m, static_cast<double>(m) * (1.0 + z));
            csv += sumrate::csv_line({std::to_string(m), format_g9(z), format_g9(analytic),
                                      format_g9(stats.prob_below[zi]),
                                      format_g9(stats.mean_max / static_cast<double>(m))});
        }
    }
    write_file(o.common.out, csv);
    return 0;
}

// ---- vp-ber -------------------------------------------------------------

struct VpBerOpts {
    CommonOpts common;
    std::size_t antennas = 8;
    std::size_t pool = 8;
    std::uint64_t symbols = 100000;
    double alpha = -1.0;
    double tau_factor = 2.5;
    std::uint64_t coherence = 1;
    std::vector<std::string> curves{"8:qpsk", "4:16qam"};
};

sumrate::Constellation constellation_by_name(const std::string& name) {
    if (name == "qpsk") return sumrate::Constellation::qpsk();
    if (name == "16qam") return sumrate::Constellation::qam16();
    throw std::invalid_argument("unknown constellation: " + name + " (use qpsk or 16qam)");
}

int cmd_vp_ber(const VpBerOpts& o) {
    if (o.common.show_config) {
        KeyValues kv;
        o.common.fill(kv);
        kv.add("M", static_cast<std::uint64_t>(o.antennas));
        kv.add("pool", static_cast<std::uint64_t>(o.pool));
        kv.add("symbols", o.symbols);
        kv.add("alpha", o.alpha);
        kv.add("tau_factor", o.tau_factor);
        kv.add("coherence", o.coherence);
        std::string cs;
        for (const auto& c : o.curves) cs += (cs.empty() ? "" : " ") + c;
        kv.add("curves", cs);
        kv.print();
        return 0;
    }
    const std::vector<double> grid =
        make_grid(o.common.rho_start_db, o.common.rho_stop_db, o.common.rho_step_db);
    std::string csv = sumrate::csv_line({"K", "constellation", "rho_db", "ber", "bits"});
    std::size_t curve_index = 0;
    for (const auto& spec_str : o.curves) {
        const auto colon = spec_str.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("curve must look like K:constellation, got " + spec_str);
        sumrate::PrecoderConfig cfg;
        cfg.num_users = std::stoul(spec_str.substr(0, colon));
        cfg.constellation = constellation_by_name(spec_str.substr(colon + 1));
        cfg.num_antennas = o.antennas;
        cfg.pool_users = o.pool;
        cfg.alpha = o.alpha;
        cfg.tau_factor = o.tau_factor;
        cfg.coherence_uses = o.coherence;
        cfg.seed = sumrate::derive_stream(o.common.seed, 0xbe5000 + curve_index);
        const auto points = sumrate::simulate_ber(cfg, grid, o.symbols);
        for (const auto& pt : points)
            csv += sumrate::csv_line({std::to_string(cfg.num_users), cfg.constellation.name,
                                      format_g9(pt.rho_db), format_g9(pt.ber),
                                      std::to_string(pt.bits_sent)});
        ++curve_index;
    }
    write_file(o.common.out, csv);
    if (o.common.gnuplot)
        emit_gnuplot(o.common.out, "uncoded vector-perturbation BER",
                     {"'" + o.common.out + "' using 3:4 with linespoints"});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sum-rate sensitivity toolkit for the multi-antenna multi-user downlink"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value configuration file (# comments, [subcommand] sections)");
    int threads = 0;
    app.add_option("--threads", threads, "worker thread count (0 = runtime default)");

    SensOpts sens;
    CLI::App* c_sens = app.add_subcommand("sens", "sensitivity curves over an SNR grid");
    sens.common.attach(c_sens, "sens.csv", -40.0, 40.0, 1.0);
    c_sens->add_option("--beta", sens.betas, "antennas-per-user ratios (>= 1)")
        ->delimiter(',')
        ->capture_default_str();

    OpPointOpts op;
    CLI::App* c_op = app.add_subcommand("op-point", "operating points for target power penalty");
    op.common.attach(c_op, "op_point.csv", -40.0, 40.0, 1.0);
    c_op->add_option("--target-delta", op.target_delta, "power penalty coefficient delta")
        ->capture_default_str();
    c_op->add_option("--beta-from", op.beta_from, "starting ratio")->capture_default_str();
    c_op->add_option("--beta-to", op.beta_to, "target ratios")->delimiter(',')->capture_default_str();

    MiOpts mi;
    CLI::App* c_mi = app.add_subcommand("mi", "Monte Carlo and closed-form rate curves");
    mi.common.attach(c_mi, "mi.csv", -10.0, 30.0, 0.5);
    c_mi->add_option("--M", mi.antennas, "transmit antennas")->capture_default_str();
    c_mi->add_option("--K", mi.users, "served-user counts")->delimiter(',')->capture_default_str();
    c_mi->add_option("--opt-trials", mi.opt_trials, "trials for the optimized-power column")
        ->capture_default_str();

    MaxChiOpts mx;
    CLI::App* c_mx = app.add_subcommand("maxchi", "max chi-square concentration table");
    mx.common.attach(c_mx, "maxchi.csv", -40.0, 40.0, 1.0);
    mx.common.trials = 100000;
    c_mx->add_option("--M", mx.ms, "variable counts")->delimiter(',')->capture_default_str();
    c_mx->add_option("--zeta", mx.zetas, "slack values")->delimiter(',')->capture_default_str();

    VpBerOpts vp;
    CLI::App* c_vp = app.add_subcommand("vp-ber", "uncoded vector-perturbation BER curves");
    vp.common.attach(c_vp, "vp_ber.csv", 0.0, 30.0, 2.0);
    c_vp->add_option("--M", vp.antennas, "transmit antennas")->capture_default_str();
    c_vp->add_option("--pool", vp.pool, "user pool size L")->capture_default_str();
    c_vp->add_option("--symbols", vp.symbols, "user-symbols per SNR point")->capture_default_str();
    c_vp->add_option("--alpha", vp.alpha, "regularization (< 0 selects K)")->capture_default_str();
    c_vp->add_option("--tau-factor", vp.tau_factor, "modulo spacing factor")->capture_default_str();
    c_vp->add_option("--coherence", vp.coherence, "channel uses per fading block")
        ->capture_default_str();
    c_vp->add_option("--curve", vp.curves, "K:constellation pairs")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
#ifdef _OPENMP
        if (threads > 0) omp_set_num_threads(threads);
#endif
        if (*c_sens) return cmd_sens(sens);
        if (*c_op) return cmd_op_point(op);
        if (*c_mi) return cmd_mi(mi);
        if (*c_mx) return cmd_maxchi(mx);
        if (*c_vp) return cmd_vp_ber(vp);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
