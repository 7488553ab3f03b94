#include "shockcop/generators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "shockcop/csv.hpp"
#include "shockcop/errors.hpp"

namespace shockcop {

using io::format_number;

std::string to_string(GeneratorClass c) {
    switch (c) {
        case GeneratorClass::MarshallF: return "marshall";
        case GeneratorClass::MaxminPsi: return "maxmin-psi";
        case GeneratorClass::RmmF: return "rmm";
        case GeneratorClass::SmmH: return "smm";
    }
    return "?";
}

GeneratorClass generator_class_from_string(const std::string& s) {
    if (s == "marshall" || s == "marshallf" || s == "phi") return GeneratorClass::MarshallF;
    if (s == "maxmin-psi" || s == "maxminpsi" || s == "psi") return GeneratorClass::MaxminPsi;
    if (s == "rmm" || s == "rmmf") return GeneratorClass::RmmF;
    if (s == "smm" || s == "smmh") return GeneratorClass::SmmH;
    throw ParseError("unknown generator class '" + s + "' (marshall, maxmin-psi, rmm, smm)");
}

namespace detail {

struct GeneratorImpl {
    virtual ~GeneratorImpl() = default;
    virtual double eval(double u) const = 0;
    virtual Generator::Representation representation() const = 0;
    virtual std::string family() const { return {}; }
    virtual std::vector<std::pair<std::string, double>> params() const { return {}; }
    virtual std::string descriptor() const = 0;
    virtual const std::vector<std::pair<double, double>>* knots() const { return nullptr; }
};

}  // namespace detail

namespace {

using detail::GeneratorImpl;
using Params = std::vector<std::pair<std::string, double>>;

std::string params_string(const Params& ps) {
    std::string s;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (i) s += ',';
        s += ps[i].first + "=" + format_number(ps[i].second);
    }
    return s;
}

struct ClosedFormImpl : GeneratorImpl {
    Generator::Representation representation() const override {
        return Generator::Representation::ClosedForm;
    }
    std::string descriptor() const override {
        auto ps = params();
        return ps.empty() ? family() : family() + ":" + params_string(ps);
    }
};

struct IdentityImpl final : ClosedFormImpl {
    double eval(double u) const override { return u; }
    std::string family() const override { return "identity"; }
};

struct ConstantOneImpl final : ClosedFormImpl {
    double eval(double u) const override { return u > 0.0 ? 1.0 : 0.0; }
    std::string family() const override { return "one"; }
};

struct PowerImpl final : ClosedFormImpl {
    double alpha;
    explicit PowerImpl(double a) : alpha(a) {}
    double eval(double u) const override { return std::pow(u, alpha) - u; }
    std::string family() const override { return "power"; }
    Params params() const override { return {{"alpha", alpha}}; }
};

struct TwoParamImpl final : ClosedFormImpl {
    double alpha, beta;
    TwoParamImpl(double a, double b) : alpha(a), beta(b) {}
    double eval(double u) const override { return std::pow(u, alpha) * (1.0 - std::pow(u, beta)); }
    std::string family() const override { return "twoparam"; }
    Params params() const override { return {{"alpha", alpha}, {"beta", beta}}; }
};

struct EfgmHatImpl final : ClosedFormImpl {
    double a;
    explicit EfgmHatImpl(double a_) : a(a_) {}
    double eval(double u) const override { return (a + 1.0) * u - a * u * u; }
    std::string family() const override { return "efgm-hat"; }
    Params params() const override { return {{"a", a}}; }
};

struct EfgmImpl final : ClosedFormImpl {
    double a;
    explicit EfgmImpl(double a_) : a(a_) {}
    double eval(double u) const override { return a * u * (1.0 - u); }
    std::string family() const override { return "efgm"; }
    Params params() const override { return {{"a", a}}; }
};

struct RampImpl final : ClosedFormImpl {
    double slope;
    explicit RampImpl(double s) : slope(s) {}
    double eval(double u) const override { return std::min(slope * u, 1.0); }
    std::string family() const override { return "ramp"; }
    Params params() const override { return {{"slope", slope}}; }
};

struct PolynomialImpl final : ClosedFormImpl {
    std::vector<double> c;
    explicit PolynomialImpl(std::vector<double> coeffs) : c(std::move(coeffs)) {}
    double eval(double u) const override {
        double acc = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
        return acc;
    }
    std::string family() const override { return "poly"; }
    Params params() const override {
        Params ps;
        for (std::size_t i = 0; i < c.size(); ++i) ps.emplace_back("c" + std::to_string(i), c[i]);
        return ps;
    }
};

struct TabulatedImpl final : GeneratorImpl {
    std::vector<std::pair<double, double>> pts;
    explicit TabulatedImpl(std::vector<std::pair<double, double>> k) : pts(std::move(k)) {}
    Generator::Representation representation() const override {
        return Generator::Representation::TabulatedPL;
    }
    const std::vector<std::pair<double, double>>* knots() const override { return &pts; }
    double eval(double u) const override {
        auto it = std::upper_bound(pts.begin(), pts.end(), u,
                                   [](double v, const auto& k) { return v < k.first; });
        if (it == pts.begin()) return pts.front().second;
        const auto& lo = *std::prev(it);
        if (it == pts.end() || u == lo.first) return lo.second;
        const auto& hi = *it;
        return lo.second + (u - lo.first) / (hi.first - lo.first) * (hi.second - lo.second);
    }
    std::string descriptor() const override {
        std::string s = "pl:knots=";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) s += ';';
            s += format_number(pts[i].first) + "/" + format_number(pts[i].second);
        }
        return s;
    }
};

struct AffineImpl final : GeneratorImpl {
    Generator inner;
    bool reflect;
    double scale, slope, offset;
    AffineImpl(Generator g, bool r, double a, double b, double c)
        : inner(std::move(g)), reflect(r), scale(a), slope(b), offset(c) {}
    Generator::Representation representation() const override {
        return Generator::Representation::Composite;
    }
    double eval(double u) const override {
        const double x = reflect ? 1.0 - u : u;
        return scale * inner(x) + slope * u + offset;
    }
    bool pure_reflection() const { return reflect && scale == 1.0 && slope == 0.0 && offset == 0.0; }
    std::string descriptor() const override {
        if (pure_reflection()) return "reflect(" + inner.descriptor() + ")";
        if (!reflect && scale == 1.0 && slope == -1.0 && offset == 0.0) {
            return "hat-to-f(" + inner.descriptor() + ")";
        }
        return "affine(" + inner.descriptor() + "):reflect=" + (reflect ? "1" : "0") +
               ",scale=" + format_number(scale) + ",slope=" + format_number(slope) +
               ",offset=" + format_number(offset);
    }
};

struct ShockInducedImpl final : GeneratorImpl {
    Distribution comp, margin;
    ShockInducedImpl(Distribution c, Distribution m) : comp(std::move(c)), margin(std::move(m)) {}
    Generator::Representation representation() const override {
        return Generator::Representation::ShockInduced;
    }

    // lim_{s -> under-} F_comp(F_margin^{-1}(s)); the generalised inverse is
    // left-continuous, so the limit sits at q = F_margin^{-1}(under) and is
    // attained there exactly when an atom of F_margin at q reaches below under.
    double left_value(double under) const {
        if (under <= 0.0) return 0.0;
        const auto q = margin.quantile(under);
        if (margin.cdf_left(q) < under) return comp.cdf(q);
        return comp.cdf_left(q);
    }

    double top_value(double over, const ExtendedReal& q) const {
        return over >= 1.0 ? 1.0 : comp.cdf(q);
    }

    double eval(double u) const override {
        if (u <= 0.0) return 0.0;
        if (u >= 1.0) return 1.0;
        const auto q = margin.quantile(u);
        const double over = margin.cdf(q);
        const double under = margin.cdf_left(q);
        if (over == u || under == over) return comp.cdf(q);
        const double top = top_value(over, q);
        const double bottom = left_value(under);
        return (top - bottom) / (over - under) * (u - under) + bottom;
    }

    std::string descriptor() const override {
        return "shock(comp=" + comp.describe() + ",margin=" + margin.describe() + ")";
    }
};

void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

bool in_unit(double a) { return a > 0.0 && a <= 1.0; }

}  // namespace

// -- construction -----------------------------------------------------------

Generator Generator::identity(GeneratorClass cls) {
    Generator g(std::make_shared<IdentityImpl>());
    g.cls_ = cls;
    return g;
}

Generator Generator::constant_one() { return Generator(std::make_shared<ConstantOneImpl>()); }

Generator Generator::power(double alpha) {
    require(in_unit(alpha), "power generator needs alpha in (0,1]");
    Generator g(std::make_shared<PowerImpl>(alpha));
    g.cls_ = GeneratorClass::RmmF;
    return g;
}

Generator Generator::two_param(double alpha, double beta) {
    require(in_unit(alpha), "twoparam generator needs alpha in (0,1]");
    require(std::isfinite(beta) && beta > 0.0, "twoparam generator needs beta > 0");
    Generator g(std::make_shared<TwoParamImpl>(alpha, beta));
    g.cls_ = GeneratorClass::RmmF;
    return g;
}

Generator Generator::efgm_hat(double a) {
    require(in_unit(a), "efgm-hat generator needs a in (0,1]");
    return Generator(std::make_shared<EfgmHatImpl>(a));
}

Generator Generator::efgm(double a) {
    require(in_unit(a), "efgm generator needs a in (0,1]");
    Generator g(std::make_shared<EfgmImpl>(a));
    g.cls_ = GeneratorClass::RmmF;
    return g;
}

Generator Generator::ramp(double slope) {
    require(std::isfinite(slope) && slope >= 1.0, "ramp generator needs slope >= 1");
    return Generator(std::make_shared<RampImpl>(slope));
}

Generator Generator::polynomial(std::vector<double> coefficients, GeneratorClass cls) {
    require(!coefficients.empty(), "polynomial generator needs coefficients");
    for (double c : coefficients) require(std::isfinite(c), "polynomial coefficients must be finite");
    Generator g(std::make_shared<PolynomialImpl>(std::move(coefficients)));
    g.cls_ = cls;
    return g;
}

Generator Generator::tabulated(std::vector<std::pair<double, double>> knots, GeneratorClass cls) {
    require(knots.size() >= 2, "tabulated generator needs at least two knots");
    require(knots.front().first == 0.0 && knots.back().first == 1.0,
            "tabulated generator knots must span [0,1]");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        require(std::isfinite(knots[i].second), "tabulated generator values must be finite");
        if (i) require(knots[i].first > knots[i - 1].first, "tabulated generator knots must increase");
    }
    Generator g(std::make_shared<TabulatedImpl>(std::move(knots)));
    g.cls_ = cls;
    return g;
}

Generator Generator::affine(Generator inner, bool reflect, double scale, double slope, double offset,
                            GeneratorClass cls) {
    const bool pure = reflect && scale == 1.0 && slope == 0.0 && offset == 0.0;
    if (pure) {
        // reflecting a reflection gives back the original function exactly
        if (auto parts = inner.affine_parts(); parts && parts->reflect && parts->scale == 1.0 &&
                                               parts->slope == 0.0 && parts->offset == 0.0) {
            return parts->inner->with_class(cls);
        }
    }
    Generator g(std::make_shared<AffineImpl>(std::move(inner), reflect, scale, slope, offset));
    g.cls_ = cls;
    return g;
}

Generator Generator::shock_induced(Distribution comp, Distribution margin, GeneratorClass cls) {
    Generator g(std::make_shared<ShockInducedImpl>(std::move(comp), std::move(margin)));
    g.cls_ = cls;
    return g;
}

Generator Generator::parse_csv(std::istream& in, GeneratorClass cls) {
    auto csv = io::read_numeric_csv(in);
    if (csv.header.size() != 2 || csv.header[0] != "u" || csv.header[1] != "value") {
        throw ParseError("generator CSV header must be 'u,value'");
    }
    std::vector<std::pair<double, double>> knots;
    knots.reserve(csv.rows.size());
    for (const auto& r : csv.rows) knots.emplace_back(r[0], r[1]);
    try {
        return tabulated(std::move(knots), cls);
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
}

Generator Generator::load_csv(const std::string& path, GeneratorClass cls) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open generator file '" + path + "'");
    return parse_csv(in, cls);
}

// -- evaluation ---------------------------------------------------------------

double Generator::operator()(double u) const { return impl_->eval(u); }

GeneratorClass Generator::declared_class() const { return cls_; }

Generator Generator::with_class(GeneratorClass cls) const {
    Generator g = *this;
    g.cls_ = cls;
    return g;
}

Generator::Representation Generator::representation() const { return impl_->representation(); }

double Generator::default_tolerance() const {
    if (auto parts = affine_parts()) return parts->inner->default_tolerance();
    return representation() == Representation::ClosedForm ? 1e-12 : 1e-9;
}

std::string Generator::family_name() const { return impl_->family(); }

std::vector<std::pair<std::string, double>> Generator::parameters() const { return impl_->params(); }

std::string Generator::descriptor() const { return impl_->descriptor(); }

std::string Generator::describe() const {
    if (representation() == Representation::ClosedForm) {
        return "family=" + impl_->family() + ";params=" + params_string(impl_->params());
    }
    return impl_->descriptor();
}

const std::vector<std::pair<double, double>>& Generator::knots() const {
    static const std::vector<std::pair<double, double>> none;
    const auto* k = impl_->knots();
    return k ? *k : none;
}

std::string Generator::to_csv() const {
    if (representation() != Representation::TabulatedPL) {
        throw DomainError("only tabulated generators serialise to CSV; tabulate() first");
    }
    std::string s = "u,value\n";
    for (const auto& [u, v] : knots()) s += format_number(u) + "," + format_number(v) + "\n";
    return s;
}

std::optional<Generator::AffineParts> Generator::affine_parts() const {
    const auto* a = dynamic_cast<const AffineImpl*>(impl_.get());
    if (!a) return std::nullopt;
    return AffineParts{&a->inner, a->reflect, a->scale, a->slope, a->offset};
}

namespace {

bool star_allowed(GeneratorClass c) {
    return c == GeneratorClass::MarshallF || c == GeneratorClass::RmmF;
}

ExtendedReal capped(double v, double cap) {
    if (std::isnan(v)) return ExtendedReal::pos_inf();
    if (std::isinf(v) || std::abs(v) > cap) return v > 0 ? ExtendedReal::pos_inf() : ExtendedReal::neg_inf();
    return v;
}

ExtendedReal star_value(const Generator& g, double u, const DerivedOptions& opts) {
    if (u == 0.0) return capped(g(opts.limit_probe) / opts.limit_probe, opts.divergence_cap);
    return g(u) / u;
}

}  // namespace

ExtendedReal Generator::derived(DerivedKind kind, double u, const DerivedOptions& opts) const {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("derived: u must lie in [0,1]");
    const auto cls = declared_class();
    switch (kind) {
        case DerivedKind::Star:
            if (!star_allowed(cls)) throw DomainError("star is defined for marshall and rmm generators");
            return star_value(*this, u, opts);
        case DerivedKind::Hat:
            if (cls != GeneratorClass::RmmF) throw DomainError("hat is defined for rmm generators");
            return (*this)(u) + u;
        case DerivedKind::PsiStar: {
            if (cls != GeneratorClass::MaxminPsi) throw DomainError("psi_star is defined for maxmin psi generators");
            const double p = (*this)(u);
            if (p == u) return ExtendedReal::pos_inf();
            return (1.0 - p) / (u - p);
        }
        case DerivedKind::Dagger: {
            if (cls != GeneratorClass::SmmH) throw DomainError("dagger is defined for smm generators");
            if (u < 1.0) return (*this)(u) / (1.0 - u);
            // h(u) = f(1-u) gives h_dagger(1-) = f*(0+)
            if (auto parts = affine_parts(); parts && parts->reflect && parts->scale == 1.0 &&
                                             parts->slope == 0.0 && parts->offset == 0.0) {
                return star_value(*parts->inner, 0.0, opts);
            }
            constexpr double eps = 0x1p-53;
            return capped((*this)(1.0 - eps) / eps, opts.divergence_cap);
        }
        case DerivedKind::HatDagger:
            if (cls != GeneratorClass::SmmH) throw DomainError("hat_dagger is defined for smm generators");
            return u - (*this)(u);
    }
    throw DomainError("unknown derived kind");
}

// -- validation ---------------------------------------------------------------

std::string ValidationReport::summary() const {
    std::ostringstream os;
    os << (passed ? "passed" : "FAILED");
    if (!passed) {
        os << " (" << violations.size() << " violation" << (violations.size() == 1 ? "" : "s") << ")";
        std::map<std::string, std::size_t> counts;
        for (const auto& v : violations) ++counts[v.condition];
        for (const auto& [cond, n] : counts) {
            const auto it = std::find_if(violations.begin(), violations.end(),
                                         [&](const Violation& v) { return v.condition == cond; });
            os << "\n  " << cond << ": " << n << " point(s), first at u=" << format_number(it->u)
               << " observed=" << format_number(it->observed)
               << " threshold=" << format_number(it->threshold);
        }
    }
    for (const auto& u : unenforced) os << "\n  not enforced: " << u;
    return os.str();
}

namespace {

class Validator {
public:
    Validator(const Generator& g, std::size_t n, double tol) : g_(g), tol_(tol) {
        grid_.resize(n);
        for (std::size_t i = 0; i < n; ++i) grid_[i] = static_cast<double>(i) / static_cast<double>(n - 1);
        values_.resize(n);
        for (std::size_t i = 0; i < n; ++i) values_[i] = g(grid_[i]);
    }

    void finite() {
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            if (!std::isfinite(values_[i])) add("finite", grid_[i], values_[i], 0.0);
        }
    }

    void boundary(const std::string& id, double u, double expected) {
        const double v = g_(u);
        if (v != expected) add(id, u, v, expected);
    }

    // direction +1: nondecreasing, -1: nonincreasing; indices [first, last)
    template <class F>
    void monotone(const std::string& id, int direction, std::size_t first, std::size_t last, F&& fn) {
        if (last <= first + 1) return;
        ExtendedReal prev = fn(first);
        for (std::size_t i = first + 1; i < last; ++i) {
            ExtendedReal cur = fn(i);
            double step = 0.0;  // size of the move against the required direction
            const auto& lo = direction > 0 ? cur : prev;
            const auto& hi = direction > 0 ? prev : cur;
            // violation when hi - lo > tol
            if (hi.is_pos_inf() && !lo.is_pos_inf()) {
                step = std::numeric_limits<double>::infinity();
            } else if (lo.is_neg_inf() && !hi.is_neg_inf()) {
                step = std::numeric_limits<double>::infinity();
            } else if (hi.is_finite() && lo.is_finite()) {
                step = hi.value() - lo.value();
            }
            if (step > tol_) add(id, grid_[i], step, tol_);
            prev = cur;
        }
    }

    double u(std::size_t i) const { return grid_[i]; }
    double value(std::size_t i) const { return values_[i]; }
    std::size_t size() const { return grid_.size(); }

    void add(const std::string& id, double u, double observed, double threshold) {
        report_.violations.push_back({id, u, observed, threshold});
    }

    ValidationReport finish() {
        report_.passed = report_.violations.empty();
        return std::move(report_);
    }

    ValidationReport& report() { return report_; }

private:
    const Generator& g_;
    double tol_;
    std::vector<double> grid_;
    std::vector<double> values_;
    ValidationReport report_;
};

}  // namespace

ValidationReport validate(const Generator& g, std::size_t grid_size, std::optional<double> tol) {
    if (grid_size < 3) throw DomainError("validate: grid_size must be at least 3");
    Validator v(g, grid_size, tol.value_or(g.default_tolerance()));
    const std::size_t n = v.size();
    v.finite();
    switch (g.declared_class()) {
        case GeneratorClass::MarshallF:
            v.boundary("M1.f(0)", 0.0, 0.0);
            v.boundary("M1.f(1)", 1.0, 1.0);
            v.monotone("M2", +1, 0, n, [&](std::size_t i) { return ExtendedReal(v.value(i)); });
            v.monotone("M3", -1, 1, n, [&](std::size_t i) { return ExtendedReal(v.value(i) / v.u(i)); });
            break;
        case GeneratorClass::MaxminPsi:
            v.boundary("F1.psi(0)", 0.0, 0.0);
            v.boundary("F1.psi(1)", 1.0, 1.0);
            v.monotone("F2", +1, 0, n, [&](std::size_t i) { return ExtendedReal(v.value(i)); });
            v.monotone("F3", -1, 0, n - 1, [&](std::size_t i) {
                const double p = v.value(i);
                if (p == v.u(i)) return ExtendedReal::pos_inf();
                return ExtendedReal((1.0 - p) / (v.u(i) - p));
            });
            break;
        case GeneratorClass::RmmF:
            v.boundary("G1.f(0)", 0.0, 0.0);
            v.boundary("G1.f(1)", 1.0, 0.0);
            v.monotone("G2", +1, 0, n, [&](std::size_t i) { return ExtendedReal(v.value(i) + v.u(i)); });
            v.monotone("G3", -1, 1, n, [&](std::size_t i) { return ExtendedReal(v.value(i) / v.u(i)); });
            if (g.family_name() == "twoparam") {
                const auto ps = g.parameters();
                const double alpha = ps[0].second;
                const double beta = ps[1].second;
                if (alpha < 1.0 && beta < 1.0 - alpha) v.add("G.twoparam-domain", 0.0, beta, 1.0 - alpha);
                if (alpha == 1.0 && beta > 1.0) v.add("G.twoparam-domain", 0.0, beta, 1.0);
            }
            v.report().unenforced.emplace_back("G1: f*(0)=0");
            break;
        case GeneratorClass::SmmH:
            v.boundary("S1.h(0)", 0.0, 0.0);
            v.boundary("S1.h(1)", 1.0, 0.0);
            v.monotone("S2", +1, 0, n, [&](std::size_t i) { return ExtendedReal(v.u(i) - v.value(i)); });
            v.monotone("S3", +1, 0, n - 1,
                       [&](std::size_t i) { return ExtendedReal(v.value(i) / (1.0 - v.u(i))); });
            v.report().unenforced.emplace_back("S1: hat_dagger(1)=0");
            break;
    }
    return v.finish();
}

// -- conversions --------------------------------------------------------------

namespace {

void require_valid(const Generator& g, GeneratorClass expected, const char* what) {
    if (g.declared_class() != expected) {
        throw DomainError(std::string(what) + ": expected a " + to_string(expected) + " generator, got " +
                          to_string(g.declared_class()));
    }
    auto report = validate(g);
    if (!report.passed) {
        const auto& first = report.violations.front();
        throw ContractViolation(first.condition, first.u,
                                std::string(what) + ": input is not a valid " + to_string(expected) +
                                    " generator (" + report.summary() + ")");
    }
}

}  // namespace

Generator rmm_to_smm(const Generator& f) {
    require_valid(f, GeneratorClass::RmmF, "rmm_to_smm");
    return Generator::affine(f, true, 1.0, 0.0, 0.0, GeneratorClass::SmmH);
}

Generator smm_to_rmm(const Generator& h) {
    require_valid(h, GeneratorClass::SmmH, "smm_to_rmm");
    return Generator::affine(h, true, 1.0, 0.0, 0.0, GeneratorClass::RmmF);
}

Generator hat_to_f(const Generator& hat) {
    if (hat(0.0) != 0.0) throw ContractViolation("hat(0)=0", 0.0, "hat generator must vanish at 0");
    if (hat(1.0) != 1.0) throw ContractViolation("hat(1)=1", 1.0, "hat generator must equal 1 at 1");
    return Generator::affine(hat, false, 1.0, -1.0, 0.0, GeneratorClass::RmmF);
}

// -- construction from shocks ---------------------------------------------------

namespace {

std::vector<double> quantile_grid(const Distribution& a, const Distribution& b, std::size_t n) {
    std::vector<double> xs;
    xs.reserve(2 * n);
    for (const auto* d : {&a, &b}) {
        for (std::size_t i = 0; i < n; ++i) {
            const double p = 1e-6 + (1.0 - 2e-6) * static_cast<double>(i) / static_cast<double>(n - 1);
            const auto q = d->quantile(p);
            if (q.is_finite()) xs.push_back(q.value());
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

}  // namespace

Generator generator_from_shocks(const Distribution& comp, const Distribution& margin,
                                const ShockGeneratorOptions& opts) {
    if (opts.check_points >= 2) {
        for (double x : quantile_grid(margin, comp, opts.check_points)) {
            const double fm = margin.cdf(x);
            const double fc = comp.cdf(x);
            if (opts.relation == MarginRelation::Max && fm > fc + opts.check_tol) {
                throw ContractViolation("F_margin<=F_comp", x,
                                        "margin " + format_number(fm) + " exceeds component " + format_number(fc));
            }
            if (opts.relation == MarginRelation::Min && fm < fc - opts.check_tol) {
                throw ContractViolation("F_margin>=F_comp", x,
                                        "margin " + format_number(fm) + " below component " + format_number(fc));
            }
        }
    }
    return Generator::shock_induced(comp, margin, opts.cls);
}

std::vector<std::pair<double, double>> image_gaps(const Distribution& margin, std::size_t resolution) {
    std::vector<std::pair<double, double>> gaps;
    for (std::size_t i = 1; i < resolution; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(resolution);
        const auto b = margin.image_brackets(u);
        if (b.in_image) continue;
        if (gaps.empty() || gaps.back() != std::make_pair(b.u_under, b.u_over)) {
            gaps.emplace_back(b.u_under, b.u_over);
        }
    }
    return gaps;
}

Generator tabulate(const Generator& g, std::size_t resolution) {
    if (resolution < 1) throw DomainError("tabulate: resolution must be positive");
    std::map<double, double> pts;
    for (std::size_t i = 0; i <= resolution; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(resolution);
        pts[u] = g(u);
    }
    if (const auto* s = dynamic_cast<const ShockInducedImpl*>(g.impl_.get())) {
        for (const auto& [under, over] : image_gaps(s->margin, resolution)) {
            pts[under] = s->left_value(under);
            pts[over] = g(over);
        }
    }
    return Generator::tabulated({pts.begin(), pts.end()}, g.declared_class());
}

}  // namespace shockcop
