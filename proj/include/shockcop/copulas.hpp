#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "shockcop/distributions.hpp"
#include "shockcop/generators.hpp"

namespace shockcop {

namespace detail {
struct CopulaImpl;
}

struct Rectangle {
    double u1, u2, v1, v2;
};

/// Bivariate copula. Cheap to copy; evaluation is pure.
class Copula {
public:
    enum class Family {
        FrechetW,
        FrechetM,
        Independence,
        Marshall,
        Maxmin,
        Rmm,
        Smm,
        Survival,
        Sigma1,
        Sigma2,
        Empirical,
        Custom
    };

    static Copula frechet_w();
    static Copula frechet_m();
    static Copula independence();

    /// min{u psi(v), v phi(u)}; phi, psi validated as MarshallF.
    static Copula marshall(const Generator& phi, const Generator& psi);
    /// min{u, phi(u)(v - psi(v)) + u psi(v)}; phi as MarshallF, psi as MaxminPsi.
    static Copula maxmin(const Generator& phi, const Generator& psi);
    /// max{0, uv - f(u) g(v)}; f, g validated as RmmF.
    static Copula rmm(const Generator& f, const Generator& g);
    /// max{u+v-1, uv - h(u) k(v)}; h, k validated as SmmH.
    static Copula smm(const Generator& h, const Generator& k);

    /// uv - a^2 uv(1-u)(1-v) as RMM with f = g = a t(1-t), a in (0,1].
    static Copula efgm(double a);
    /// RMM with f = t^alpha - t, g = t^beta - t, alpha = l1/(l1+m1), beta = l2/(l2+m2).
    static Copula exponential_rmm(double l1, double l2, double m1, double m2);
    static Copula exponential_rmm_ab(double alpha, double beta);

    using Fn = std::function<double(double, double)>;
    /// Arbitrary function of (u,v); not checked. `family` lets samplers tag
    /// estimators as Empirical.
    static Copula custom(std::string name, Fn fn, Family family = Family::Custom);

    /// Raw formula, unclamped.
    double operator()(double u, double v) const;
    double eval(double u, double v) const { return (*this)(u, v); }
    /// Result clamped into [0,1].
    double eval_clamped(double u, double v) const;

    Family family() const;
    /// Descriptor string that parses back to an equal copula.
    std::string describe() const;
    /// Generators (phi,psi), (f,g) or (h,k) for the generator families; empty otherwise.
    std::vector<Generator> generators() const;
    /// Wrapped copula of Survival / Sigma1 / Sigma2.
    const Copula* inner() const;

private:
    explicit Copula(std::shared_ptr<const detail::CopulaImpl> impl) : impl_(std::move(impl)) {}
    friend Copula survival(const Copula& c);
    friend Copula reflect(const Copula& c, int which);
    friend Copula with_descriptor(const Copula& c, std::string descriptor);

    std::shared_ptr<const detail::CopulaImpl> impl_;
    std::string descriptor_;  // overrides the structural descriptor when set
};

std::string to_string(Copula::Family f);

/// C(u2,v2) - C(u1,v2) - C(u2,v1) + C(u1,v1).
double volume(const Copula& c, const Rectangle& r);

/// u + v - 1 + C(1-u, 1-v).
Copula survival(const Copula& c);
/// which = 1: v - C(1-u, v); which = 2: u - C(u, 1-v).
Copula reflect(const Copula& c, int which);
inline Copula sigma1(const Copula& c) { return reflect(c, 1); }
inline Copula sigma2(const Copula& c) { return reflect(c, 2); }

/// Same copula, reported under a different descriptor.
Copula with_descriptor(const Copula& c, std::string descriptor);

/// Rewrites transforms into generator families where an identity is known:
/// sigma2(maxmin) -> RMM, sigma1(maxmin) -> SMM, survival(RMM) -> SMM,
/// survival(SMM) -> RMM. Anything else is returned unchanged.
Copula normalize(const Copula& c);

/// H(x,y) = C(F_U(x), F_V(y)).
class JointCdf {
public:
    JointCdf(Copula c, Distribution fu, Distribution fv)
        : c_(std::move(c)), fu_(std::move(fu)), fv_(std::move(fv)) {}
    double operator()(ExtendedReal x, ExtendedReal y) const { return c_(fu_.cdf(x), fv_.cdf(y)); }
    const Copula& copula() const { return c_; }
    const Distribution& fu() const { return fu_; }
    const Distribution& fv() const { return fv_; }

private:
    Copula c_;
    Distribution fu_, fv_;
};

inline JointCdf sklar_join(Copula c, Distribution fu, Distribution fv) {
    return JointCdf(std::move(c), std::move(fu), std::move(fv));
}

}  // namespace shockcop
