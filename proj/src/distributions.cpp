#include "shockcop/distributions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

#include "shockcop/csv.hpp"

namespace shockcop {

std::string ExtendedReal::to_string() const {
    switch (kind_) {
        case Kind::NegInf: return "-inf";
        case Kind::PosInf: return "+inf";
        case Kind::Finite: break;
    }
    return io::format_number(value_);
}

std::ostream& operator<<(std::ostream& os, const ExtendedReal& x) { return os << x.to_string(); }

namespace {

constexpr double kMax = std::numeric_limits<double>::max();

// Monotone map from doubles onto int64 so that bisection over keys visits
// every representable value in order.
std::int64_t to_key(double x) {
    auto i = std::bit_cast<std::int64_t>(x);
    return i >= 0 ? i : std::numeric_limits<std::int64_t>::min() - i;
}

double from_key(std::int64_t k) {
    return std::bit_cast<double>(k >= 0 ? k : std::numeric_limits<std::int64_t>::min() - k);
}

}  // namespace

ExtendedReal bisect_threshold(const std::function<bool(double)>& pred) {
    if (pred(-kMax)) return ExtendedReal::neg_inf();
    if (!pred(kMax)) return ExtendedReal::pos_inf();
    std::int64_t lo = to_key(-kMax);
    std::int64_t hi = to_key(kMax);
    while (true) {
        auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
        if (span <= 1) break;
        std::int64_t mid = lo + static_cast<std::int64_t>(span / 2);
        if (pred(from_key(mid))) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return ExtendedReal(from_key(hi));
}

namespace detail {

struct DistributionImpl {
    virtual ~DistributionImpl() = default;
    virtual Distribution::Family family() const = 0;
    virtual double cdf(double x) const = 0;
    virtual double cdf_left(double x) const { return cdf(x); }
    // u in (0,1]
    virtual ExtendedReal quantile(double u) const {
        return bisect_threshold([&](double x) { return cdf(x) >= u; });
    }
    // u in [0,1)
    virtual ExtendedReal upper_quantile(double u) const {
        return bisect_threshold([&](double x) { return cdf(x) > u; });
    }
    virtual std::string describe() const = 0;
    virtual std::vector<Distribution> operands() const { return {}; }
    virtual const std::vector<Knot>* knots() const { return nullptr; }
};

}  // namespace detail

namespace {

using detail::DistributionImpl;
using io::format_number;

struct UniformImpl final : DistributionImpl {
    double a, b;
    UniformImpl(double a_, double b_) : a(a_), b(b_) {}
    Distribution::Family family() const override { return Distribution::Family::Uniform; }
    double cdf(double x) const override {
        if (x < a) return 0.0;
        if (x >= b) return 1.0;
        return (x - a) / (b - a);
    }
    ExtendedReal quantile(double u) const override { return u >= 1.0 ? b : a + u * (b - a); }
    ExtendedReal upper_quantile(double u) const override { return a + u * (b - a); }
    std::string describe() const override {
        return "uniform:a=" + format_number(a) + ",b=" + format_number(b);
    }
};

struct ExponentialImpl final : DistributionImpl {
    double rate;
    explicit ExponentialImpl(double r) : rate(r) {}
    Distribution::Family family() const override { return Distribution::Family::Exponential; }
    double cdf(double x) const override { return x <= 0.0 ? 0.0 : -std::expm1(-rate * x); }
    ExtendedReal quantile(double u) const override {
        if (u >= 1.0) return ExtendedReal::pos_inf();
        return -std::log1p(-u) / rate;
    }
    ExtendedReal upper_quantile(double u) const override {
        if (u <= 0.0) return 0.0;
        return -std::log1p(-u) / rate;
    }
    std::string describe() const override { return "exp:rate=" + format_number(rate); }
};

struct PowerFunctionImpl final : DistributionImpl {
    double k;
    explicit PowerFunctionImpl(double k_) : k(k_) {}
    Distribution::Family family() const override { return Distribution::Family::PowerFunction; }
    double cdf(double x) const override {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return std::pow(x, k);
    }
    ExtendedReal quantile(double u) const override { return u >= 1.0 ? 1.0 : std::pow(u, 1.0 / k); }
    ExtendedReal upper_quantile(double u) const override { return u <= 0.0 ? 0.0 : std::pow(u, 1.0 / k); }
    std::string describe() const override { return "powerfn:k=" + format_number(k); }
};

struct TabulatedImpl final : DistributionImpl {
    std::vector<Knot> pts;
    Interpolation mode;
    TabulatedImpl(std::vector<Knot> k, Interpolation m) : pts(std::move(k)), mode(m) {}

    Distribution::Family family() const override { return Distribution::Family::Tabulated; }
    const std::vector<Knot>* knots() const override { return &pts; }

    // index of last knot with x_i <= x, or -1
    std::ptrdiff_t last_at_or_below(double x) const {
        auto it = std::upper_bound(pts.begin(), pts.end(), x,
                                   [](double v, const Knot& k) { return v < k.x; });
        return (it - pts.begin()) - 1;
    }

    double cdf(double x) const override {
        auto i = last_at_or_below(x);
        if (i < 0) return 0.0;
        const auto& k = pts[static_cast<std::size_t>(i)];
        if (mode == Interpolation::Step || x == k.x ||
            static_cast<std::size_t>(i) + 1 == pts.size()) {
            return k.p;
        }
        const auto& n = pts[static_cast<std::size_t>(i) + 1];
        return k.p + (x - k.x) / (n.x - k.x) * (n.p - k.p);
    }

    double cdf_left(double x) const override {
        if (mode == Interpolation::Linear) return x <= pts.front().x ? 0.0 : cdf(x);
        auto it = std::lower_bound(pts.begin(), pts.end(), x,
                                   [](const Knot& k, double v) { return k.x < v; });
        if (it == pts.begin()) return 0.0;
        return std::prev(it)->p;
    }

    ExtendedReal invert(std::size_t j, double u) const {
        if (j == 0 || mode == Interpolation::Step) return pts[j].x;
        const auto& a = pts[j - 1];
        const auto& b = pts[j];
        if (u == b.p) return b.x;
        if (u == a.p) return a.x;
        return a.x + (u - a.p) / (b.p - a.p) * (b.x - a.x);
    }

    ExtendedReal quantile(double u) const override {
        auto it = std::lower_bound(pts.begin(), pts.end(), u,
                                   [](const Knot& k, double v) { return k.p < v; });
        if (it == pts.end()) return ExtendedReal::pos_inf();
        return invert(static_cast<std::size_t>(it - pts.begin()), u);
    }

    ExtendedReal upper_quantile(double u) const override {
        auto it = std::upper_bound(pts.begin(), pts.end(), u,
                                   [](double v, const Knot& k) { return v < k.p; });
        if (it == pts.end()) return ExtendedReal::pos_inf();
        return invert(static_cast<std::size_t>(it - pts.begin()), u);
    }

    std::string describe() const override {
        std::string s = std::string("table:mode=") + (mode == Interpolation::Step ? "step" : "linear") +
                        ",knots=";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) s += ';';
            s += format_number(pts[i].x) + "/" + format_number(pts[i].p);
        }
        return s;
    }
};

struct EfgmMarginImpl final : DistributionImpl {
    double a;
    explicit EfgmMarginImpl(double a_) : a(a_) {}
    Distribution::Family family() const override { return Distribution::Family::EfgmMargin; }
    double cdf(double x) const override {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        const double b = a + 1.0;
        return (b - std::sqrt(b * b - 4.0 * a * x)) / (2.0 * a);
    }
    // inverse of the margin is the EFGM hat generator (a+1)t - a t^2
    ExtendedReal quantile(double u) const override { return (a + 1.0) * u - a * u * u; }
    ExtendedReal upper_quantile(double u) const override { return (a + 1.0) * u - a * u * u; }
    std::string describe() const override { return "efgm-fu:a=" + format_number(a); }
};

struct EfgmShockImpl final : DistributionImpl {
    double a;
    explicit EfgmShockImpl(double a_) : a(a_) {}
    Distribution::Family family() const override { return Distribution::Family::EfgmShock; }
    double cdf(double x) const override {
        if (x >= 1.0) return 1.0;
        const double b = a + 1.0;
        return 2.0 / (b + std::sqrt(b * b - 4.0 * a * x));
    }
    ExtendedReal quantile(double u) const override {
        const double b = a + 1.0;
        const double s = 2.0 / u - b;
        return (b * b - s * s) / (4.0 * a);
    }
    ExtendedReal upper_quantile(double u) const override {
        if (u <= 0.0) return ExtendedReal::neg_inf();
        return quantile(u);
    }
    std::string describe() const override { return "efgm-g1:a=" + format_number(a); }
};

struct ProductImpl final : DistributionImpl {
    Distribution d1, d2;
    ProductImpl(Distribution a, Distribution b) : d1(std::move(a)), d2(std::move(b)) {}
    Distribution::Family family() const override { return Distribution::Family::Product; }
    double cdf(double x) const override { return d1.cdf(x) * d2.cdf(x); }
    double cdf_left(double x) const override { return d1.cdf_left(x) * d2.cdf_left(x); }
    std::string describe() const override {
        return "product(" + d1.describe() + "," + d2.describe() + ")";
    }
    std::vector<Distribution> operands() const override { return {d1, d2}; }
};

struct MinimumImpl final : DistributionImpl {
    Distribution d1, d2;
    MinimumImpl(Distribution a, Distribution b) : d1(std::move(a)), d2(std::move(b)) {}
    Distribution::Family family() const override { return Distribution::Family::Minimum; }
    double cdf(double x) const override { return 1.0 - (1.0 - d1.cdf(x)) * (1.0 - d2.cdf(x)); }
    double cdf_left(double x) const override {
        return 1.0 - (1.0 - d1.cdf_left(x)) * (1.0 - d2.cdf_left(x));
    }
    std::string describe() const override {
        return "minimum(" + d1.describe() + "," + d2.describe() + ")";
    }
    std::vector<Distribution> operands() const override { return {d1, d2}; }
};

// P[-A <= x] = 1 - F((-x)-)
struct NegatedImpl final : DistributionImpl {
    Distribution d;
    explicit NegatedImpl(Distribution inner) : d(std::move(inner)) {}
    Distribution::Family family() const override { return Distribution::Family::Negated; }
    double cdf(double x) const override { return 1.0 - d.cdf_left(-x); }
    double cdf_left(double x) const override { return 1.0 - d.cdf(-x); }
    ExtendedReal quantile(double u) const override { return d.upper_quantile(1.0 - u).negated(); }
    ExtendedReal upper_quantile(double u) const override { return d.quantile(1.0 - u).negated(); }
    std::string describe() const override { return "negated(" + d.describe() + ")"; }
    std::vector<Distribution> operands() const override { return {d}; }
};

struct CustomImpl final : DistributionImpl {
    std::string name;
    Distribution::RealFn fn, left;
    CustomImpl(std::string n, Distribution::RealFn f, Distribution::RealFn l)
        : name(std::move(n)), fn(std::move(f)), left(std::move(l)) {}
    Distribution::Family family() const override { return Distribution::Family::Custom; }
    double cdf(double x) const override { return fn(x); }
    double cdf_left(double x) const override {
        if (left) return left(x);
        return fn(std::nextafter(x, -std::numeric_limits<double>::infinity()));
    }
    std::string describe() const override { return "custom:name=" + name; }
};

void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

void validate_knots(const std::vector<Knot>& knots) {
    require(!knots.empty(), "tabulated distribution needs at least one knot");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const auto& k = knots[i];
        require(std::isfinite(k.x), "tabulated knot x must be finite");
        require(k.p >= 0.0 && k.p <= 1.0, "tabulated knot p must lie in [0,1]");
        if (i > 0) {
            require(k.x > knots[i - 1].x, "tabulated knots must have strictly increasing x");
            require(k.p >= knots[i - 1].p, "tabulated knots must have nondecreasing p");
        }
    }
    require(knots.back().p == 1.0, "tabulated distribution must reach p = 1 at its last knot");
}

}  // namespace

Distribution Distribution::uniform(double a, double b) {
    require(std::isfinite(a) && std::isfinite(b) && a < b, "uniform requires finite a < b");
    return Distribution(std::make_shared<UniformImpl>(a, b));
}

Distribution Distribution::exponential(double rate) {
    require(finite_positive(rate), "exponential rate must be positive");
    return Distribution(std::make_shared<ExponentialImpl>(rate));
}

Distribution Distribution::power_function(double k) {
    require(finite_positive(k), "power-function exponent must be positive");
    return Distribution(std::make_shared<PowerFunctionImpl>(k));
}

Distribution Distribution::tabulated(std::vector<Knot> knots, Interpolation mode) {
    validate_knots(knots);
    return Distribution(std::make_shared<TabulatedImpl>(std::move(knots), mode));
}

Distribution Distribution::efgm_margin(double a) {
    require(a > 0.0 && a <= 1.0, "EFGM parameter a must lie in (0,1]");
    return Distribution(std::make_shared<EfgmMarginImpl>(a));
}

Distribution Distribution::efgm_shock(double a) {
    require(a > 0.0 && a <= 1.0, "EFGM parameter a must lie in (0,1]");
    return Distribution(std::make_shared<EfgmShockImpl>(a));
}

Distribution Distribution::product(Distribution d1, Distribution d2) {
    return Distribution(std::make_shared<ProductImpl>(std::move(d1), std::move(d2)));
}

Distribution Distribution::minimum(Distribution d1, Distribution d2) {
    return Distribution(std::make_shared<MinimumImpl>(std::move(d1), std::move(d2)));
}

Distribution Distribution::negated(Distribution d) {
    if (d.family() == Family::Negated) return d.operands().front();
    return Distribution(std::make_shared<NegatedImpl>(std::move(d)));
}

Distribution Distribution::custom(std::string name, RealFn cdf, RealFn left) {
    require(static_cast<bool>(cdf), "custom distribution needs a cdf");
    return Distribution(std::make_shared<CustomImpl>(std::move(name), std::move(cdf), std::move(left)));
}

Distribution Distribution::parse_csv(std::istream& in, Interpolation mode) {
    auto csv = io::read_numeric_csv(in);
    if (csv.header.size() != 2 || csv.header[0] != "x" || csv.header[1] != "p") {
        throw ParseError("distribution CSV header must be 'x,p'");
    }
    std::vector<Knot> knots;
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        const double x = csv.rows[i][0];
        const double p = csv.rows[i][1];
        const auto where = "line " + std::to_string(csv.line_numbers[i]) + ": ";
        if (!std::isfinite(x)) throw ParseError(where + "x must be finite");
        if (!(p >= 0.0 && p <= 1.0)) throw ParseError(where + "p out of range [0,1]");
        if (!knots.empty() && x <= knots.back().x) throw ParseError(where + "rows not sorted by x");
        if (!knots.empty() && p < knots.back().p) throw ParseError(where + "p decreases");
        knots.push_back({x, p});
    }
    try {
        return tabulated(std::move(knots), mode);
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
}

Distribution Distribution::load_csv(const std::string& path, Interpolation mode) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open distribution file '" + path + "'");
    return parse_csv(in, mode);
}

double Distribution::cdf(ExtendedReal x) const {
    if (x.is_neg_inf()) return 0.0;
    if (x.is_pos_inf()) return 1.0;
    return impl_->cdf(x.value());
}

double Distribution::cdf_left(ExtendedReal x) const {
    if (x.is_neg_inf()) return 0.0;
    if (x.is_pos_inf()) return 1.0;
    return impl_->cdf_left(x.value());
}

ExtendedReal Distribution::quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile level must lie in [0,1]");
    if (u == 0.0) return ExtendedReal::neg_inf();
    return impl_->quantile(u);
}

ExtendedReal Distribution::upper_quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile level must lie in [0,1]");
    if (u == 1.0) return ExtendedReal::pos_inf();
    return impl_->upper_quantile(u);
}

ImageBrackets Distribution::image_brackets(double u) const {
    const auto q = quantile(u);
    const double over = cdf(q);
    const double under = cdf_left(q);
    return {under, over, over == u || under == over};
}

Distribution::Family Distribution::family() const { return impl_->family(); }
std::string Distribution::describe() const { return impl_->describe(); }
std::vector<Distribution> Distribution::operands() const { return impl_->operands(); }

const std::vector<Knot>& Distribution::knots() const {
    static const std::vector<Knot> none;
    const auto* k = impl_->knots();
    return k ? *k : none;
}

double efgm_margin_density(double a, double x) {
    if (!(x >= 0.0 && x < 1.0)) return 0.0;
    const double b = a + 1.0;
    return 1.0 / std::sqrt(b * b - 4.0 * a * x);
}

double efgm_shock_density(double a, double x) {
    if (!(x < 1.0)) return 0.0;
    const double b = a + 1.0;
    const double s = std::sqrt(b * b - 4.0 * a * x);
    return 2.0 * a / ((b * b - 2.0 * a * x) * s + b * b * b - 4.0 * b * a * x);
}

}  // namespace shockcop
