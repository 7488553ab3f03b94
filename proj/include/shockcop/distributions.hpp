#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "shockcop/extended_real.hpp"

namespace shockcop {

namespace detail {
struct DistributionImpl;
}

enum class Interpolation { Step, Linear };

struct Knot {
    double x;
    double p;
};

/// u_under = F(F^{-1}(u)-), u_over = F(F^{-1}(u)); u lies in the image of F
/// when it is attained (no jump brackets it).
struct ImageBrackets {
    double u_under;
    double u_over;
    bool in_image;
};

/// Univariate distribution function on the extended real line.
///
/// Cheap to copy (shared immutable state). All evaluation is pure and safe
/// to call concurrently.
class Distribution {
public:
    enum class Family {
        Uniform,
        Exponential,
        PowerFunction,
        Tabulated,
        EfgmMargin,
        EfgmShock,
        Product,
        Minimum,
        Negated,
        Custom
    };

    static Distribution uniform(double a = 0.0, double b = 1.0);
    static Distribution exponential(double rate);
    /// F(x) = x^k on [0,1]: the law of exp(-T) for T ~ Exp(k).
    static Distribution power_function(double k);
    static Distribution tabulated(std::vector<Knot> knots, Interpolation mode);
    /// F_U(a)(x) = (a+1 - sqrt((a+1)^2 - 4ax)) / (2a) on [0,1], a in (0,1].
    static Distribution efgm_margin(double a);
    /// G_1(a)(x) = 2 / ((a+1) + sqrt((a+1)^2 - 4ax)) for x <= 1, a in (0,1].
    static Distribution efgm_shock(double a);
    /// Law of max{A,B} for independent A ~ d1, B ~ d2.
    static Distribution product(Distribution d1, Distribution d2);
    /// Law of min{A,B} for independent A ~ d1, B ~ d2.
    static Distribution minimum(Distribution d1, Distribution d2);
    /// Law of -A. negated(negated(d)) returns d itself.
    static Distribution negated(Distribution d);

    using RealFn = std::function<double(double)>;
    /// Arbitrary right-continuous CDF. Without `left`, left limits are taken
    /// at the preceding double; quantiles are found by bisection.
    static Distribution custom(std::string name, RealFn cdf, RealFn left = {});

    static Distribution load_csv(const std::string& path, Interpolation mode);
    static Distribution parse_csv(std::istream& in, Interpolation mode);

    double cdf(ExtendedReal x) const;
    /// F(x-); equals cdf at continuity points.
    double cdf_left(ExtendedReal x) const;
    /// Generalised inverse inf{x : F(x) >= u}; quantile(0) = -inf.
    ExtendedReal quantile(double u) const;
    /// inf{x : F(x) > u}; upper_quantile(1) = +inf.
    ExtendedReal upper_quantile(double u) const;
    ImageBrackets image_brackets(double u) const;

    Family family() const;
    std::string describe() const;
    /// Operands of Product/Minimum (two) or Negated (one); empty otherwise.
    std::vector<Distribution> operands() const;
    const std::vector<Knot>& knots() const;

private:
    explicit Distribution(std::shared_ptr<const detail::DistributionImpl> impl)
        : impl_(std::move(impl)) {}

    std::shared_ptr<const detail::DistributionImpl> impl_;
};

inline Distribution product_cdf(Distribution d1, Distribution d2) {
    return Distribution::product(std::move(d1), std::move(d2));
}

/// Density of the EFGM margin F_U(a) on (0,1).
double efgm_margin_density(double a, double x);
/// Density of the EFGM shock G_1(a) on (-inf,1).
double efgm_shock_density(double a, double x);

/// Smallest finite x with pred(x) true, searching the ordered doubles by
/// bisection; -inf if pred holds everywhere, +inf if nowhere. pred must be
/// monotone (false...false true...true).
ExtendedReal bisect_threshold(const std::function<bool(double)>& pred);

}  // namespace shockcop
