#include "shockcop/shock_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shockcop/csv.hpp"
#include "shockcop/errors.hpp"
#include "shockcop/generators.hpp"

namespace shockcop {

using io::format_number;

std::string to_string(Coupling c) {
    switch (c) {
        case Coupling::Comonotonic: return "comonotonic";
        case Coupling::Countermonotonic: return "countermonotonic";
        case Coupling::SharedZ: return "shared";
    }
    return "?";
}

std::string to_string(Combiner c) {
    switch (c) {
        case Combiner::MaxMax: return "maxmax";
        case Combiner::MinMin: return "minmin";
        case Combiner::MaxMin: return "maxmin";
    }
    return "?";
}

ShockModel ShockModel::marshall(Distribution fx, Distribution fy, Distribution g1, Distribution g2) {
    return {std::move(fx), std::move(fy), std::move(g1), std::move(g2), Coupling::Comonotonic, Combiner::MaxMax, {}};
}

ShockModel ShockModel::rmm(Distribution fx, Distribution fy, Distribution g1, Distribution g2) {
    return {std::move(fx), std::move(fy), std::move(g1), std::move(g2), Coupling::Countermonotonic,
            Combiner::MaxMax, {}};
}

ShockModel ShockModel::smm(Distribution fx, Distribution fy, Distribution g1, Distribution g2) {
    return {std::move(fx), std::move(fy), std::move(g1), std::move(g2), Coupling::Countermonotonic,
            Combiner::MinMin, {}};
}

ShockModel ShockModel::maxmin(Distribution fx, Distribution fy, Distribution g) {
    return {std::move(fx), std::move(fy), g, g, Coupling::SharedZ, Combiner::MaxMin, {}};
}

std::string ShockModel::describe() const {
    if (!descriptor.empty()) return descriptor;
    if (coupling == Coupling::SharedZ) {
        return "maxmin:Fx=" + fx.describe() + ",Fy=" + fy.describe() + ",G=" + g1.describe();
    }
    std::string head;
    if (combiner == Combiner::MaxMax && coupling == Coupling::Comonotonic) {
        head = "marshall-max";
    } else if (combiner == Combiner::MaxMax && coupling == Coupling::Countermonotonic) {
        head = "rmm-max";
    } else if (combiner == Combiner::MinMin && coupling == Coupling::Countermonotonic) {
        head = "smm-min";
    } else {
        head = "model";
    }
    std::string s = head + ":Fx=" + fx.describe() + ",Fy=" + fy.describe() + ",G1=" + g1.describe() +
                    ",G2=" + g2.describe();
    if (head == "model") s += ",coupling=" + to_string(coupling) + ",combiner=" + to_string(combiner);
    return s;
}

bool is_legal(Coupling c, Combiner k) {
    return (k == Combiner::MaxMax && (c == Coupling::Comonotonic || c == Coupling::Countermonotonic)) ||
           (k == Combiner::MinMin && c == Coupling::Countermonotonic) ||
           (k == Combiner::MaxMin && c == Coupling::SharedZ);
}

void check_legal(const ShockModel& m) {
    if (!is_legal(m.coupling, m.combiner)) {
        throw IllegalConfiguration("no copula family for " + to_string(m.combiner) + " with " +
                                   to_string(m.coupling) + " systemic shocks");
    }
}

std::pair<Distribution, Distribution> margins(const ShockModel& m) {
    check_legal(m);
    switch (m.combiner) {
        case Combiner::MaxMax:
            return {Distribution::product(m.fx, m.g1), Distribution::product(m.fy, m.g2)};
        case Combiner::MinMin:
            return {Distribution::minimum(m.fx, m.g1), Distribution::minimum(m.fy, m.g2)};
        case Combiner::MaxMin:
            return {Distribution::product(m.fx, m.g1), Distribution::minimum(m.fy, m.g1)};
    }
    throw IllegalConfiguration("unknown combiner");
}

double joint_cdf(const ShockModel& m, ExtendedReal x, ExtendedReal y) {
    check_legal(m);
    const double fx = m.fx.cdf(x);
    const double fy = m.fy.cdf(y);
    const double g1 = m.g1.cdf(x);
    const double g2 = m.g2.cdf(y);
    if (m.combiner == Combiner::MaxMax && m.coupling == Coupling::Comonotonic) {
        return fx * fy * std::min(g1, g2);
    }
    if (m.combiner == Combiner::MaxMax) {
        return fx * fy * std::max(0.0, g1 + g2 - 1.0);
    }
    if (m.combiner == Combiner::MinMin) {
        const double fu = 1.0 - (1.0 - fx) * (1.0 - g1);
        const double fv = 1.0 - (1.0 - fy) * (1.0 - g2);
        return fu + fv - 1.0 + (1.0 - fx) * (1.0 - fy) * std::max(0.0, 1.0 - g1 - g2);
    }
    // U = max{X,Z}, V = min{Y,Z}
    return fx * (g1 - (1.0 - fy) * std::max(0.0, g1 - g2));
}

Copula induced_copula(const ShockModel& m) {
    check_legal(m);
    const auto [fu, fv] = margins(m);
    ShockGeneratorOptions opts;
    if (m.combiner == Combiner::MaxMax && m.coupling == Coupling::Comonotonic) {
        return Copula::marshall(generator_from_shocks(m.fx, fu, opts), generator_from_shocks(m.fy, fv, opts));
    }
    if (m.combiner == Combiner::MaxMax) {
        return Copula::rmm(hat_to_f(generator_from_shocks(m.fx, fu, opts)),
                           hat_to_f(generator_from_shocks(m.fy, fv, opts)));
    }
    if (m.combiner == Combiner::MinMin) {
        auto neg = ShockModel::rmm(Distribution::negated(m.fx), Distribution::negated(m.fy),
                                   Distribution::negated(m.g1), Distribution::negated(m.g2));
        return normalize(survival(induced_copula(neg)));
    }
    auto phi = generator_from_shocks(m.fx, fu, opts);
    ShockGeneratorOptions psi_opts;
    psi_opts.relation = MarginRelation::Min;
    psi_opts.cls = GeneratorClass::MaxminPsi;
    return Copula::maxmin(phi, generator_from_shocks(m.fy, fv, psi_opts));
}

// -- reconstruction -------------------------------------------------------------

ChiMap ChiMap::identity() {
    return {[](double x) { return x; }, [](double x) { return x; }, "identity"};
}

ChiMap ChiMap::affine(double a, double b) {
    if (!(a > 0.0 && std::isfinite(a) && std::isfinite(b))) throw DomainError("chi: need a > 0");
    return {[a, b](double x) { return a * x + b; }, [a, b](double x) { return (x - b) / a; },
            "affine:a=" + format_number(a) + ",b=" + format_number(b)};
}

bool Reconstruction::passed() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const ConditionResult& c) { return c.passed; });
}

std::vector<double> check_grid(const Distribution& fu, const Distribution& fv, std::size_t n) {
    if (n < 2) throw DomainError("check grid needs at least two points");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto* d : {&fu, &fv}) {
        for (double p : {1e-6, 1.0 - 1e-6}) {
            const auto q = d->quantile(p);
            if (!q.is_finite()) continue;
            lo = std::min(lo, q.value());
            hi = std::max(hi, q.value());
        }
    }
    if (!std::isfinite(lo)) throw DomainError("margins have no finite quantiles to build a grid on");
    const double pad = hi > lo ? 0.05 * (hi - lo) : 1.0;
    lo -= pad;
    hi += pad;
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return xs;
}

namespace {

class Tracker {
public:
    Tracker(std::string id, double tol) : r_{std::move(id), true, 0.0, 0.0, 0.0}, tol_(tol) {}
    void see(double deviation, double x, double y = 0.0) {
        if (std::isnan(deviation)) deviation = std::numeric_limits<double>::infinity();
        if (deviation > r_.magnitude || (r_.magnitude == 0.0 && deviation > 0.0)) {
            r_.magnitude = deviation;
            r_.x = x;
            r_.y = y;
        }
    }
    ConditionResult result() const {
        auto r = r_;
        r.passed = r.magnitude <= tol_;
        return r;
    }

private:
    ConditionResult r_;
    double tol_;
};

std::vector<double> subsample(const std::vector<double>& xs, std::size_t n) {
    if (n >= xs.size() || n < 2) return xs;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = xs[i * (xs.size() - 1) / (n - 1)];
    return out;
}

// conditions shared by the max/max reconstructions
void verify_maxmax(Reconstruction& r, const Copula& c, const Distribution& fu, const Distribution& fv,
                   const ReconstructOptions& opts) {
    const auto& m = r.model;
    const double tol = opts.tol;
    Tracker fac_u("factor.U", tol), fac_v("factor.V", tol);
    Tracker mono_fx("FX.monotone", tol), mono_fy("FY.monotone", tol);
    Tracker mono_g1("G1.monotone", tol), mono_g2("G2.monotone", tol);
    Tracker lem_u("bound.U", tol), lem_v("bound.V", tol);
    double pfx = 0, pfy = 0, pg1 = 0, pg2 = 0;
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
        const double x = r.grid[i];
        const double u = fu.cdf(x), v = fv.cdf(x);
        const double fx = m.fx.cdf(x), fy = m.fy.cdf(x), g1 = m.g1.cdf(x), g2 = m.g2.cdf(x);
        fac_u.see(std::abs(fx * g1 - u), x);
        fac_v.see(std::abs(fy * g2 - v), x);
        lem_u.see(u - std::min(fx, g1), x);
        lem_v.see(v - std::min(fy, g2), x);
        if (i) {
            mono_fx.see(pfx - fx, x);
            mono_fy.see(pfy - fy, x);
            mono_g1.see(pg1 - g1, x);
            mono_g2.see(pg2 - g2, x);
        }
        pfx = fx, pfy = fy, pg1 = g1, pg2 = g2;
    }
    Tracker joint("joint", tol);
    const auto pts = subsample(r.grid, opts.joint_grid);
    for (double x : pts) {
        for (double y : pts) joint.see(std::abs(joint_cdf(m, x, y) - c(fu.cdf(x), fv.cdf(y))), x, y);
    }
    for (const auto* t : {&fac_u, &fac_v, &mono_fx, &mono_fy, &mono_g1, &mono_g2, &lem_u, &lem_v, &joint}) {
        r.conditions.push_back(t->result());
    }
}

Copula require_family(const Copula& c, Copula::Family fam, const char* what) {
    auto n = normalize(c);
    if (n.family() != fam) {
        throw DomainError(std::string(what) + " needs a " + to_string(fam) + " copula, got " + c.describe());
    }
    return n;
}

double ratio_or_one(const ExtendedReal& s) {
    if (s.is_pos_inf()) return 1.0;
    const double t = s.value();
    return t / (1.0 + t);
}

}  // namespace

Reconstruction reconstruct_marshall(const Copula& c_in, const Distribution& fu, const Distribution& fv,
                                    const ReconstructOptions& opts) {
    const Copula c = require_family(c_in, Copula::Family::Marshall, "reconstruct_marshall");
    const auto gens = c.generators();
    const Generator phi = gens[0], psi = gens[1];
    const ChiMap chi = opts.chi;
    Reconstruction r{ShockModel::marshall(fu, fv, fu, fv), {}, check_grid(fu, fv, opts.grid)};

    // (a) phi*(F_U(chi(x))) = psi*(F_V(x)) where both arguments are positive
    for (double x : r.grid) {
        const double a = fu.cdf(chi.forward(x));
        const double b = fv.cdf(x);
        if (!(a > 0.0 && b > 0.0)) continue;
        const auto s1 = phi.derived(DerivedKind::Star, a);
        const auto s2 = psi.derived(DerivedKind::Star, b);
        const double d = std::abs(s1.to_double() - s2.to_double());
        if (d > opts.tol * std::max(1.0, std::abs(s1.to_double()))) {
            throw ContractViolation("assumption-a", x,
                                    "phi*(F_U(chi(x)))=" + format_number(s1.to_double()) +
                                        " but psi*(F_V(x))=" + format_number(s2.to_double()));
        }
    }
    // (b) generator continuous at 0, or an atom at the left end of the support
    // (c) star diverges at 0, or the margin vanishes somewhere
    const auto left_end_checks = [&](const Generator& g, const Distribution& d, const char* name) {
        const auto xl = d.upper_quantile(0.0);
        const bool continuous = g(1e-10) <= 1e-3;
        const bool atom = xl.is_finite() && d.cdf(xl) > d.cdf_left(xl);
        if (!continuous && !atom) {
            throw ContractViolation("assumption-b", xl.to_double(),
                                    std::string(name) + " jumps at 0 but the margin has no atom at its left end");
        }
        const bool diverges = g.derived(DerivedKind::Star, 0.0).is_pos_inf();
        if (!diverges && !xl.is_finite()) {
            throw ContractViolation("assumption-c", xl.to_double(),
                                    std::string(name) + "*(0+) is finite and the margin is positive everywhere");
        }
    };
    left_end_checks(phi, fu, "phi");
    left_end_checks(psi, fv, "psi");

    auto g2_fn = [phi, psi, fu, fv, chi](double x) {
        const double a = fu.cdf(chi.forward(x));
        const double b = fv.cdf(x);
        if (a == 0.0 && b == 0.0) return 0.0;
        if (a == 0.0) {
            const double p = psi(b);
            if (p == 0.0) throw ContractViolation("division", x, "psi(F_V(x)) = 0 with F_V(x) > 0");
            return b / p;
        }
        const double p = phi(a);
        if (p == 0.0) throw ContractViolation("division", x, "phi(F_U(chi(x))) = 0 with F_U(chi(x)) > 0");
        return a / p;
    };
    auto g1_fn = [g2_fn, chi](double x) { return g2_fn(chi.inverse(x)); };
    // fail early on division problems, with a grid witness
    for (double x : r.grid) {
        (void)g2_fn(x);
        (void)g1_fn(x);
    }

    r.model = ShockModel::marshall(
        Distribution::custom("marshall-fx", [phi, fu](double x) { return phi(fu.cdf(x)); }),
        Distribution::custom("marshall-fy", [psi, fv](double x) { return psi(fv.cdf(x)); }),
        Distribution::custom("marshall-g1", g1_fn), Distribution::custom("marshall-g2", g2_fn));
    if (opts.verify) verify_maxmax(r, c, fu, fv, opts);
    return r;
}

Reconstruction reconstruct_rmm(const Copula& c_in, const Distribution& fu, const Distribution& fv,
                               const ReconstructOptions& opts) {
    const Copula c = require_family(c_in, Copula::Family::Rmm, "reconstruct_rmm");
    const auto gens = c.generators();
    const Generator f = gens[0], g = gens[1];
    Reconstruction r{ShockModel::rmm(fu, fv, fu, fv), {}, check_grid(fu, fv, opts.grid)};

    const bool x0 = std::any_of(r.grid.begin(), r.grid.end(), [&](double x) {
        const double a = fu.cdf(x), b = fv.cdf(x);
        return a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0;
    });
    if (!x0) {
        throw ContractViolation("x0-hypothesis", r.grid[r.grid.size() / 2],
                                "no x with F_U(x) and F_V(x) both in (0,1)");
    }

    auto fhat = [f](double u) { return f(u) + u; };
    auto ghat = [g](double v) { return g(v) + v; };
    // G1 from the pair (F_U(x), F_V(x)) taken at the same side of x
    auto g1_at = [f, g, fhat](double a, double b) {
        if (a == 0.0) return ratio_or_one(g.derived(DerivedKind::Star, 1.0 - b));
        return a / fhat(a);
    };
    auto g2_at = [f, g, ghat](double a, double b) {
        if (b == 0.0) return ratio_or_one(f.derived(DerivedKind::Star, 1.0 - a));
        return b / ghat(b);
    };

    r.model = ShockModel::rmm(
        Distribution::custom(
            "rmm-fx", [fhat, fu](double x) { return fhat(fu.cdf(x)); },
            [fhat, fu](double x) { return fhat(fu.cdf_left(x)); }),
        Distribution::custom(
            "rmm-fy", [ghat, fv](double x) { return ghat(fv.cdf(x)); },
            [ghat, fv](double x) { return ghat(fv.cdf_left(x)); }),
        Distribution::custom(
            "rmm-g1", [g1_at, fu, fv](double x) { return g1_at(fu.cdf(x), fv.cdf(x)); },
            [g1_at, fu, fv](double x) { return g1_at(fu.cdf_left(x), fv.cdf_left(x)); }),
        Distribution::custom(
            "rmm-g2", [g2_at, fu, fv](double x) { return g2_at(fu.cdf(x), fv.cdf(x)); },
            [g2_at, fu, fv](double x) { return g2_at(fu.cdf_left(x), fv.cdf_left(x)); }));
    if (opts.verify) verify_maxmax(r, c, fu, fv, opts);
    return r;
}

Reconstruction reconstruct_smm(const Copula& c_in, const Distribution& fu, const Distribution& fv,
                               const ReconstructOptions& opts) {
    const Copula c = require_family(c_in, Copula::Family::Smm, "reconstruct_smm");
    const auto gens = c.generators();
    const Copula mirrored = Copula::rmm(smm_to_rmm(gens[0]), smm_to_rmm(gens[1]));
    const auto nu = Distribution::negated(fu);
    const auto nv = Distribution::negated(fv);
    ReconstructOptions inner = opts;
    inner.verify = false;
    const auto neg = reconstruct_rmm(mirrored, nu, nv, inner);

    Reconstruction r{ShockModel::smm(Distribution::negated(neg.model.fx), Distribution::negated(neg.model.fy),
                                     Distribution::negated(neg.model.g1), Distribution::negated(neg.model.g2)),
                     {},
                     check_grid(fu, fv, opts.grid)};
    if (!opts.verify) return r;

    const auto& m = r.model;
    const double tol = opts.tol;
    Tracker fac_u("factor.U", tol), fac_v("factor.V", tol);
    Tracker mono_fx("FX.monotone", tol), mono_fy("FY.monotone", tol);
    Tracker mono_g1("G1.monotone", tol), mono_g2("G2.monotone", tol);
    Tracker lem_u("bound.U", tol), lem_v("bound.V", tol);
    double pfx = 0, pfy = 0, pg1 = 0, pg2 = 0;
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
        const double x = r.grid[i];
        const double u = fu.cdf(x), v = fv.cdf(x);
        const double fx = m.fx.cdf(x), fy = m.fy.cdf(x), g1 = m.g1.cdf(x), g2 = m.g2.cdf(x);
        // 1 - F_U = (1 - F_X)(1 - G_1)
        fac_u.see(std::abs((1.0 - fx) * (1.0 - g1) - (1.0 - u)), x);
        fac_v.see(std::abs((1.0 - fy) * (1.0 - g2) - (1.0 - v)), x);
        lem_u.see(std::max(fx, g1) - u, x);
        lem_v.see(std::max(fy, g2) - v, x);
        if (i) {
            mono_fx.see(pfx - fx, x);
            mono_fy.see(pfy - fy, x);
            mono_g1.see(pg1 - g1, x);
            mono_g2.see(pg2 - g2, x);
        }
        pfx = fx, pfy = fy, pg1 = g1, pg2 = g2;
    }
    Tracker joint("joint", tol);
    const auto pts = subsample(r.grid, opts.joint_grid);
    for (double x : pts) {
        for (double y : pts) joint.see(std::abs(joint_cdf(m, x, y) - c(fu.cdf(x), fv.cdf(y))), x, y);
    }
    for (const auto* t : {&fac_u, &fac_v, &mono_fx, &mono_fy, &mono_g1, &mono_g2, &lem_u, &lem_v, &joint}) {
        r.conditions.push_back(t->result());
    }
    return r;
}

Reconstruction reconstruct(const Copula& c, const Distribution& fu, const Distribution& fv,
                           const ReconstructOptions& opts) {
    const auto n = normalize(c);
    switch (n.family()) {
        case Copula::Family::Marshall: return reconstruct_marshall(n, fu, fv, opts);
        case Copula::Family::Rmm: return reconstruct_rmm(n, fu, fv, opts);
        case Copula::Family::Smm: return reconstruct_smm(n, fu, fv, opts);
        default:
            throw DomainError("no reconstruction for a " + to_string(n.family()) + " copula (" + c.describe() +
                              ")");
    }
}

}  // namespace shockcop
