#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "shockcop/checks.hpp"
#include "shockcop/copulas.hpp"
#include "shockcop/csv.hpp"
#include "shockcop/descriptors.hpp"
#include "shockcop/errors.hpp"
#include "shockcop/generators.hpp"
#include "shockcop/sampling.hpp"
#include "shockcop/shock_models.hpp"

namespace sc = shockcop;
namespace ds = shockcop::descriptors;
using sc::io::format_significant;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

std::string num(double x) { return format_significant(x, 15); }

void emit(const std::string& out, const std::string& content) {
    if (out.empty() || out == "-") {
        std::cout << content;
        std::cout.flush();
    } else {
        sc::io::write_file_atomically(out, content);
    }
}

struct Common {
    std::string out;
    std::string format = "text";
};

void add_format(CLI::App* cmd, Common& c) {
    cmd->add_option("--out,-o", c.out, "Output path (default stdout)");
    cmd->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"csv", "text"}));
}

std::string render(const sc::CheckSuiteReport& r, const Common& c, const std::string& descriptor,
                   std::optional<std::uint64_t> seed = std::nullopt) {
    return sc::io::header_line(descriptor, seed) + (c.format == "csv" ? r.to_csv() : r.to_text());
}

void check_unit(double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) throw sc::ParseError(std::string(name) + " must lie in [0,1]");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shock-model copulas: evaluation, validation, sampling, reconstruction"};
    app.require_subcommand(1);
    app.set_version_flag("--version", sc::io::version());

    // eval
    std::string e_desc;
    double e_u = 0, e_v = 0;
    auto* eval = app.add_subcommand("eval", "Evaluate a copula at (u,v)");
    eval->add_option("copula", e_desc, "Copula descriptor")->required();
    eval->add_option("u", e_u)->required();
    eval->add_option("v", e_v)->required();

    // grid
    std::string g_desc;
    std::size_t g_n = 100;
    Common g_c;
    auto* grid = app.add_subcommand("grid", "Write C on an (n+1)x(n+1) grid as CSV u,v,C");
    grid->add_option("copula", g_desc, "Copula descriptor")->required();
    grid->add_option("--n,-n", g_n, "Grid cells per axis")->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
    grid->add_option("--out,-o", g_c.out, "Output path (default stdout)");

    // validate-gen
    std::string v_desc, v_class;
    std::size_t v_grid = 1001;
    std::optional<double> v_tol;
    Common v_c;
    auto* vgen = app.add_subcommand("validate-gen", "Check a generator against its condition class");
    vgen->add_option("generator", v_desc, "Generator descriptor")->required();
    vgen->add_option("--class", v_class, "marshall, maxmin-psi, rmm or smm")->required();
    vgen->add_option("--grid", v_grid, "Grid points")->check(CLI::Range(std::size_t{3}, std::size_t{10000000}));
    vgen->add_option("--tol", v_tol, "Monotonicity slack");
    add_format(vgen, v_c);

    // check
    std::string c_desc;
    std::size_t c_grid = 101, c_rect = 10000, c_n = 200000;
    double c_tol = 1e-12;
    std::optional<double> c_eps;
    std::uint64_t c_seed = 1;
    bool c_model = false;
    Common c_c;
    auto* check = app.add_subcommand("check", "Copula axiom suite, or model theorem suite with --model");
    check->add_option("descriptor", c_desc, "Copula (or model with --model) descriptor")->required();
    check->add_flag("--model", c_model, "Treat the descriptor as a shock model");
    check->add_option("--grid", c_grid, "Grid points per axis");
    check->add_option("--rectangles", c_rect, "Random rectangles");
    check->add_option("--tol", c_tol, "Tolerance");
    check->add_option("--n,-n", c_n, "Monte Carlo sample size (--model)");
    check->add_option("--eps", c_eps, "Monte Carlo bound (--model; default 4.4/sqrt(n))");
    check->add_option("--seed", c_seed, "Seed");
    add_format(check, c_c);

    // sample
    std::string s_desc, s_out, s_combiner, s_coupling;
    std::size_t s_n = 1000;
    std::uint64_t s_seed = 1;
    unsigned s_workers = 0;
    bool s_ranks = false;
    auto* sample = app.add_subcommand("sample", "Draw (U,V) pairs from a shock model");
    sample->add_option("model", s_desc, "Model descriptor")->required();
    sample->add_option("--n,-n", s_n, "Number of pairs")->check(CLI::PositiveNumber);
    sample->add_option("--seed", s_seed, "Seed");
    sample->add_option("--out,-o", s_out, "Output path (default stdout)");
    sample->add_option("--combiner", s_combiner, "Override combiner: maxmax, minmin, maxmin");
    sample->add_option("--coupling", s_coupling, "Override coupling: comonotonic, countermonotonic, shared");
    sample->add_option("--workers", s_workers, "Threads (0 = all cores)");
    sample->add_flag("--ranks", s_ranks, "Write normalised ranks ru,rv");

    // check-empirical
    std::string ce_in, ce_against;
    std::optional<double> ce_eps;
    std::size_t ce_grid = 21;
    Common ce_c;
    auto* cemp = app.add_subcommand("check-empirical", "Sup distance between a sample's empirical copula and a copula");
    cemp->add_option("--in", ce_in, "Sample CSV (default stdin)");
    cemp->add_option("--against", ce_against, "Copula descriptor")->required();
    cemp->add_option("--eps", ce_eps, "Bound (default 4.4/sqrt(n))");
    cemp->add_option("--grid", ce_grid, "Grid points per axis")->check(CLI::Range(std::size_t{2}, std::size_t{10000}));
    add_format(cemp, ce_c);

    // reconstruct
    std::string r_desc, r_fu, r_fv;
    std::size_t r_grid = 1001, r_points = 21;
    double r_tol = 1e-10;
    Common r_c;
    auto* recon = app.add_subcommand("reconstruct", "Shock model realising a copula with given margins");
    recon->add_option("copula", r_desc, "Copula descriptor (Marshall, RMM or SMM family)")->required();
    recon->add_option("--fu", r_fu, "Distribution of U")->required();
    recon->add_option("--fv", r_fv, "Distribution of V")->required();
    recon->add_option("--grid", r_grid, "Check grid points")->check(CLI::Range(std::size_t{3}, std::size_t{1000000}));
    recon->add_option("--points", r_points, "Rows of reconstructed CDF values")->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
    recon->add_option("--tol", r_tol, "Tolerance");
    add_format(recon, r_c);

    // roundtrip
    std::string rt_desc, rt_kind = "copula";
    auto* rtrip = app.add_subcommand("roundtrip", "Parse a descriptor, print its canonical form and re-parse it");
    rtrip->add_option("descriptor", rt_desc)->required();
    rtrip->add_option("--kind", rt_kind)->check(CLI::IsMember({"copula", "generator", "distribution", "model"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (*eval) {
            check_unit(e_u, "u");
            check_unit(e_v, "v");
            const auto c = ds::parse_copula(e_desc);
            std::cout << num(c(e_u, e_v)) << "\n";
            return kPass;
        }
        if (*grid) {
            const auto c = ds::parse_copula(g_desc);
            std::string s = sc::io::header_line(c.describe());
            s += "u,v,C\n";
            for (std::size_t i = 0; i <= g_n; ++i) {
                const double u = static_cast<double>(i) / static_cast<double>(g_n);
                for (std::size_t j = 0; j <= g_n; ++j) {
                    const double v = static_cast<double>(j) / static_cast<double>(g_n);
                    s += num(u) + "," + num(v) + "," + num(c(u, v)) + "\n";
                }
            }
            try {
                emit(g_c.out, s);
            } catch (const sc::Error& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kFail;
            }
            return kPass;
        }
        if (*vgen) {
            const auto cls = sc::generator_class_from_string(v_class);
            const auto g = ds::parse_generator(v_desc, cls);
            const auto rep = sc::validate(g, v_grid, v_tol);
            std::string s = sc::io::header_line(g.descriptor());
            if (v_c.format == "csv") {
                s += "condition,u,observed,threshold\n";
                for (const auto& v : rep.violations) {
                    s += v.condition + "," + num(v.u) + "," + num(v.observed) + "," + num(v.threshold) + "\n";
                }
            } else {
                s += "class " + sc::to_string(cls) + ": " + rep.summary() + "\n";
            }
            emit(v_c.out, s);
            return rep.passed ? kPass : kFail;
        }
        if (*check) {
            if (c_model) {
                const auto m = ds::parse_model(c_desc);
                sc::ModelCheckOptions o;
                o.n = c_n;
                o.grid = c_grid == 101 ? 21 : c_grid;
                o.eps = c_eps;
                o.seed = c_seed;
                const auto rep = sc::check_model_theorem(m, o);
                emit(c_c.out, render(rep, c_c, m.describe(), c_seed));
                return rep.passed() ? kPass : kFail;
            }
            const auto c = ds::parse_copula(c_desc);
            sc::AxiomOptions o;
            o.grid = c_grid;
            o.rectangles = c_rect;
            o.tol = c_tol;
            o.seed = c_seed;
            const auto rep = sc::check_copula_axioms(c, o);
            emit(c_c.out, render(rep, c_c, c.describe(), c_seed));
            return rep.passed() ? kPass : kFail;
        }
        if (*sample) {
            auto m = ds::parse_model(s_desc);
            if (!s_combiner.empty()) m.combiner = ds::parse_combiner(s_combiner);
            if (!s_coupling.empty()) m.coupling = ds::parse_coupling(s_coupling);
            if (!s_combiner.empty() || !s_coupling.empty()) m.descriptor.clear();
            sc::check_legal(m);
            const auto pairs = sc::sample_model(m, s_n, s_seed, s_workers);
            emit(s_out, sc::to_csv(pairs, s_ranks));
            return kPass;
        }
        if (*cemp) {
            sc::SamplePairs pairs;
            if (ce_in.empty() || ce_in == "-") {
                pairs = sc::parse_pairs_csv(std::cin);
            } else {
                std::ifstream in(ce_in);
                if (!in) throw sc::ParseError("cannot open '" + ce_in + "'");
                pairs = sc::parse_pairs_csv(in);
            }
            const auto c = ds::parse_copula(ce_against);
            const sc::EmpiricalCopula emp(pairs);
            const double d = sc::sup_distance(emp.as_copula(), c, ce_grid);
            const double eps = ce_eps.value_or(4.4 / std::sqrt(static_cast<double>(pairs.size())));
            const bool ok = d <= eps;
            std::string s = sc::io::header_line(c.describe(), pairs.seed);
            if (ce_c.format == "csv") {
                s += "n,sup_distance,eps,status\n" + std::to_string(pairs.size()) + "," + num(d) + "," + num(eps) +
                     "," + (ok ? "pass" : "fail") + "\n";
            } else {
                s += "n=" + std::to_string(pairs.size()) + " sup_distance=" + num(d) + " eps=" + num(eps) + " " +
                     (ok ? "PASSED" : "FAILED") + "\n";
            }
            emit(ce_c.out, s);
            return ok ? kPass : kFail;
        }
        if (*recon) {
            const auto c = ds::parse_copula(r_desc);
            const auto fu = ds::parse_distribution(r_fu);
            const auto fv = ds::parse_distribution(r_fv);
            sc::ReconstructOptions o;
            o.grid = r_grid;
            o.tol = r_tol;
            std::string s = sc::io::header_line(c.describe() + " fu=" + fu.describe() + " fv=" + fv.describe());
            try {
                const auto rec = sc::reconstruct(c, fu, fv, o);
                sc::CheckSuiteReport rep{"reconstruction", {}};
                for (const auto& k : rec.conditions) rep.add({k.id, k.passed, k.magnitude, k.x, k.y});
                if (r_c.format == "csv") {
                    s += "# model " + sc::to_string(rec.model.combiner) + " " + sc::to_string(rec.model.coupling) + "\n";
                    s += rep.to_csv();
                    s += "x,F_X,F_Y,G_1,G_2\n";
                } else {
                    s += "model: " + sc::to_string(rec.model.combiner) + " + " + sc::to_string(rec.model.coupling) + "\n";
                    s += rep.to_text();
                    s += "x,F_X,F_Y,G_1,G_2\n";
                }
                const auto& xs = rec.grid;
                for (std::size_t i = 0; i < r_points; ++i) {
                    const double x = xs[i * (xs.size() - 1) / (r_points - 1)];
                    const auto& m = rec.model;
                    s += num(x) + "," + num(m.fx.cdf(x)) + "," + num(m.fy.cdf(x)) + "," + num(m.g1.cdf(x)) + "," +
                         num(m.g2.cdf(x)) + "\n";
                }
                emit(r_c.out, s);
                return rep.passed() ? kPass : kFail;
            } catch (const sc::ContractViolation& e) {
                sc::CheckSuiteReport rep{"reconstruction", {}};
                rep.add({e.condition(), false, INFINITY, e.witness(), 0.0});
                emit(r_c.out, s + (r_c.format == "csv" ? rep.to_csv() : rep.to_text()));
                std::cerr << "error: " << e.what() << "\n";
                return kFail;
            }
        }
        if (*rtrip) {
            std::string first, second;
            if (rt_kind == "copula") {
                first = ds::parse_copula(rt_desc).describe();
                second = ds::parse_copula(first).describe();
            } else if (rt_kind == "generator") {
                first = ds::parse_generator(rt_desc).descriptor();
                second = ds::parse_generator(first).descriptor();
            } else if (rt_kind == "distribution") {
                first = ds::parse_distribution(rt_desc).describe();
                second = ds::parse_distribution(first).describe();
            } else {
                first = ds::parse_model(rt_desc).describe();
                second = ds::parse_model(first).describe();
            }
            std::cout << first << "\n";
            if (first != second) {
                std::cerr << "not stable: re-parsed as " << second << "\n";
                return kFail;
            }
            return kPass;
        }
    } catch (const sc::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const sc::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const sc::IllegalConfiguration& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const sc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    return kUsage;
}
