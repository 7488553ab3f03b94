#include "shockcop/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shockcop/csv.hpp"
#include "shockcop/errors.hpp"
#include "shockcop/sampling.hpp"

namespace shockcop {

using io::format_number;

bool CheckSuiteReport::passed() const {
    return std::all_of(entries.begin(), entries.end(), [](const CheckEntry& e) { return e.passed; });
}

CheckSuiteReport& CheckSuiteReport::merge(const CheckSuiteReport& other) {
    if (suite.empty()) {
        suite = other.suite;
    } else if (!other.suite.empty()) {
        suite += "+" + other.suite;
    }
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
    return *this;
}

std::string CheckSuiteReport::to_text() const {
    std::string s;
    for (const auto& e : entries) {
        s += (e.passed ? "PASS " : "FAIL ") + e.id + "  magnitude=" + format_number(e.magnitude) + "  at (" +
             format_number(e.u) + ", " + format_number(e.v) + ")\n";
    }
    s += suite + ": " + (passed() ? "PASSED" : "FAILED") + "\n";
    return s;
}

std::string CheckSuiteReport::to_csv() const {
    std::string s = "check_id,status,magnitude,u,v\n";
    for (const auto& e : entries) {
        s += e.id + "," + (e.passed ? "pass" : "fail") + "," + format_number(e.magnitude) + "," +
             format_number(e.u) + "," + format_number(e.v) + "\n";
    }
    return s;
}

namespace {

class Worst {
public:
    Worst(std::string id, double tol) : e_{std::move(id), true, 0.0, 0.0, 0.0}, tol_(tol) {}
    void see(double violation, double u, double v) {
        if (std::isnan(violation)) violation = std::numeric_limits<double>::infinity();
        if (violation > e_.magnitude) {
            e_.magnitude = violation;
            e_.u = u;
            e_.v = v;
        }
    }
    CheckEntry entry() const {
        auto e = e_;
        e.passed = e.magnitude <= tol_;
        return e;
    }

private:
    CheckEntry e_;
    double tol_;
};

}  // namespace

CheckSuiteReport check_copula_axioms(const Copula& c, const AxiomOptions& opts) {
    if (opts.grid < 3) throw DomainError("axiom grid must have at least 3 points");
    CheckSuiteReport r{"axioms", {}};
    const std::size_t g = opts.grid;
    std::vector<double> pts(g);
    for (std::size_t i = 0; i < g; ++i) pts[i] = static_cast<double>(i) / static_cast<double>(g - 1);

    Worst grounded("grounded", opts.tol), neutral("neutral", opts.tol);
    for (double t : pts) {
        grounded.see(std::abs(c(t, 0.0)), t, 0.0);
        grounded.see(std::abs(c(0.0, t)), 0.0, t);
        neutral.see(std::abs(c(t, 1.0) - t), t, 1.0);
        neutral.see(std::abs(c(1.0, t) - t), 1.0, t);
    }

    Worst sandwich("frechet", opts.tol), increasing("2-increasing", opts.tol);
    std::vector<double> prev(g), cur(g);
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < g; ++j) {
            const double u = pts[i], v = pts[j];
            const double val = c(u, v);
            cur[j] = val;
            sandwich.see(std::max(0.0, u + v - 1.0) - val, u, v);
            sandwich.see(val - std::min(u, v), u, v);
            if (i && j) increasing.see(-(val - prev[j] - cur[j - 1] + prev[j - 1]), pts[i - 1], pts[j - 1]);
        }
        std::swap(prev, cur);
    }
    for (std::size_t k = 0; k < opts.rectangles; ++k) {
        double a = rng::uniform(opts.seed, 10, k), b = rng::uniform(opts.seed, 11, k);
        double p = rng::uniform(opts.seed, 12, k), q = rng::uniform(opts.seed, 13, k);
        if (a > b) std::swap(a, b);
        if (p > q) std::swap(p, q);
        increasing.see(-volume(c, {a, b, p, q}), a, p);
    }
    for (const auto* w : {&grounded, &neutral, &increasing, &sandwich}) r.add(w->entry());
    return r;
}

CheckSuiteReport check_model_theorem(const ShockModel& m, const ModelCheckOptions& opts,
                                     const std::optional<Copula>& claimed) {
    check_legal(m);
    CheckSuiteReport r{"model", {}};
    const Copula c = claimed ? *claimed : induced_copula(m);
    const auto [fu, fv] = margins(m);

    Worst analytic("joint-identity", opts.analytic_tol);
    for (std::size_t i = 0; i < opts.grid; ++i) {
        const double p = static_cast<double>(i + 1) / static_cast<double>(opts.grid + 1);
        const auto x = fu.quantile(p);
        for (std::size_t j = 0; j < opts.grid; ++j) {
            const double q = static_cast<double>(j + 1) / static_cast<double>(opts.grid + 1);
            const auto y = fv.quantile(q);
            const double d = std::abs(joint_cdf(m, x, y) - c(fu.cdf(x), fv.cdf(y)));
            analytic.see(d, x.to_double(), y.to_double());
        }
    }
    r.add(analytic.entry());

    if (opts.n >= 2) {
        const double eps = opts.eps.value_or(4.4 / std::sqrt(static_cast<double>(opts.n)));
        const auto sample = sample_model(m, opts.n, opts.seed, opts.workers);
        const EmpiricalCopula emp(sample);
        Worst mc("monte-carlo", eps);
        const std::size_t g = std::max<std::size_t>(opts.grid, 2);
        for (std::size_t i = 0; i < g; ++i) {
            const double u = static_cast<double>(i) / static_cast<double>(g - 1);
            for (std::size_t j = 0; j < g; ++j) {
                const double v = static_cast<double>(j) / static_cast<double>(g - 1);
                mc.see(std::abs(emp(u, v) - c(u, v)), u, v);
            }
        }
        r.add(mc.entry());
    }
    return r;
}

CheckSuiteReport check_reconstruction(const Copula& c, const Distribution& fu, const Distribution& fv,
                                      const ReconstructionCheckOptions& opts) {
    CheckSuiteReport r{"reconstruction", {}};
    ReconstructOptions ro;
    ro.grid = opts.grid;
    ro.tol = opts.tol;
    ro.chi = opts.chi;
    try {
        const auto rec = reconstruct(c, fu, fv, ro);
        for (const auto& k : rec.conditions) r.add({k.id, k.passed, k.magnitude, k.x, k.y});
    } catch (const ContractViolation& e) {
        r.add({e.condition(), false, std::numeric_limits<double>::infinity(), e.witness(), 0.0});
    }
    return r;
}

}  // namespace shockcop
