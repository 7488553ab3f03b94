#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shockcop/distributions.hpp"
#include "shockcop/extended_real.hpp"

namespace shockcop {

namespace detail {
struct GeneratorImpl;
}

/// Condition set a generator is meant to satisfy.
///   MarshallF : M1-M3 (Marshall f, g and maxmin phi; also every hat f^ = f + id)
///   MaxminPsi : F1-F3
///   RmmF      : G1-G3
///   SmmH      : S1-S3
enum class GeneratorClass { MarshallF, MaxminPsi, RmmF, SmmH };

std::string to_string(GeneratorClass c);
GeneratorClass generator_class_from_string(const std::string& s);

enum class DerivedKind {
    Star,       // f(u)/u
    Hat,        // f(u)+u
    PsiStar,    // (1-psi(v))/(v-psi(v)), +inf where psi(v) = v
    Dagger,     // h(u)/(1-u)
    HatDagger,  // u-h(u)
};

struct DerivedOptions {
    /// Point used in place of 0 (Star) when estimating the right limit.
    double limit_probe = 1e-300;
    /// Limits whose magnitude exceeds this are reported as +inf.
    double divergence_cap = 1e12;
};

/// Function on [0,1] with a declared condition class.
///
/// Value type over shared immutable state; evaluation is pure.
class Generator;
Generator tabulate(const Generator& g, std::size_t resolution);

class Generator {
public:
    enum class Representation { ClosedForm, TabulatedPL, Composite, ShockInduced };

    static Generator identity(GeneratorClass cls = GeneratorClass::MarshallF);
    /// f(0) = 0, f(u) = 1 for u > 0 (the Marshall generator of M).
    static Generator constant_one();
    /// t^alpha - t, alpha in (0,1].
    static Generator power(double alpha);
    /// t^alpha (1 - t^beta), alpha in (0,1], beta > 0.
    static Generator two_param(double alpha, double beta);
    /// (a+1) t - a t^2, a in (0,1].
    static Generator efgm_hat(double a);
    /// a t (1 - t): RMM generator of the EFGM family, a in (0,1].
    static Generator efgm(double a);
    /// min{slope * t, 1}, slope >= 1.
    static Generator ramp(double slope);
    /// sum_i c_i t^i.
    static Generator polynomial(std::vector<double> coefficients, GeneratorClass cls);
    /// Piecewise linear through (u, value) knots; first knot at 0, last at 1.
    static Generator tabulated(std::vector<std::pair<double, double>> knots, GeneratorClass cls);
    /// scale * inner(r(u)) + slope * u + offset with r(u) = 1-u when `reflect`.
    static Generator affine(Generator inner, bool reflect, double scale, double slope, double offset,
                            GeneratorClass cls);
    /// u -> F_comp(F_margin^{-1}(u)) on the image of F_margin, linear across
    /// gaps of the image, 0 at 0 and 1 at 1.
    static Generator shock_induced(Distribution comp, Distribution margin, GeneratorClass cls);

    static Generator load_csv(const std::string& path, GeneratorClass cls);
    static Generator parse_csv(std::istream& in, GeneratorClass cls);

    double operator()(double u) const;
    double eval(double u) const { return (*this)(u); }

    ExtendedReal derived(DerivedKind kind, double u, const DerivedOptions& opts = {}) const;

    GeneratorClass declared_class() const;
    Generator with_class(GeneratorClass cls) const;
    Representation representation() const;
    /// Default monotonicity slack: 1e-12 for closed forms, 1e-9 otherwise.
    double default_tolerance() const;
    /// `family=<name>;params=<k=v,...>` for closed forms, a descriptor otherwise.
    std::string describe() const;
    /// Short descriptor form, e.g. `power:alpha=0.5`.
    std::string descriptor() const;
    /// Closed-form family name ("power", "twoparam", ...), or "" for other representations.
    std::string family_name() const;
    std::vector<std::pair<std::string, double>> parameters() const;
    /// Knots of a TabulatedPL generator; empty otherwise.
    const std::vector<std::pair<double, double>>& knots() const;
    /// Serialises a TabulatedPL generator as CSV `u,value`.
    std::string to_csv() const;

    /// Inner generator and affine coefficients of a Composite generator.
    struct AffineParts {
        const Generator* inner;
        bool reflect;
        double scale, slope, offset;
    };
    std::optional<AffineParts> affine_parts() const;

private:
    friend Generator tabulate(const Generator& g, std::size_t resolution);
    explicit Generator(std::shared_ptr<const detail::GeneratorImpl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const detail::GeneratorImpl> impl_;
    GeneratorClass cls_ = GeneratorClass::MarshallF;
};

struct Violation {
    std::string condition;  // e.g. "G2", "M1.f(1)"
    double u;
    double observed;
    double threshold;
};

struct ValidationReport {
    bool passed = true;
    std::vector<Violation> violations;
    /// Conditions that the literal statement contains but that are not checked.
    std::vector<std::string> unenforced;

    std::string summary() const;
};

/// Checks the declared class's conditions on a uniform grid of `grid_size`
/// points: boundary values exactly, monotonicity with additive slack `tol`
/// between consecutive grid points (default: the generator's own tolerance).
ValidationReport validate(const Generator& g, std::size_t grid_size = 1001,
                          std::optional<double> tol = std::nullopt);

/// h(u) = f(1-u). Throws ContractViolation unless f validates as RmmF.
Generator rmm_to_smm(const Generator& f);
/// f(u) = h(1-u). Throws ContractViolation unless h validates as SmmH.
Generator smm_to_rmm(const Generator& h);
/// f(u) = hat(u) - u. Throws ContractViolation unless hat(0)=0, hat(1)=1.
Generator hat_to_f(const Generator& hat);

enum class MarginRelation {
    Max,  // margin of max{A,Z}: F_margin <= F_comp
    Min,  // margin of min{A,Z}: F_margin >= F_comp
};

struct ShockGeneratorOptions {
    MarginRelation relation = MarginRelation::Max;
    std::size_t check_points = 1001;
    /// slack allowed in the F_margin vs F_comp ordering check
    double check_tol = 1e-12;
    GeneratorClass cls = GeneratorClass::MarshallF;
};

/// The construction u -> F_comp(F_margin^{-1}(u)) with interpolation across
/// gaps in the image of F_margin. The result is evaluated exactly on demand;
/// use tabulate() to materialise it. Throws ContractViolation with a witness
/// x if the margin is not ordered against the component as `relation` demands.
Generator generator_from_shocks(const Distribution& comp, const Distribution& margin,
                                const ShockGeneratorOptions& opts = {});

/// Piecewise-linear materialisation on `resolution` uniform cells, plus the
/// jump brackets of a shock-induced generator as extra knots.
Generator tabulate(const Generator& g, std::size_t resolution = 4096);

/// Gap brackets (u_under, u_over) of the image of `margin` found on a uniform
/// grid of `resolution` cells.
std::vector<std::pair<double, double>> image_gaps(const Distribution& margin, std::size_t resolution);

}  // namespace shockcop
