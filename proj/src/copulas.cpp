#include "shockcop/copulas.hpp"

#include <algorithm>
#include <cmath>

#include "shockcop/csv.hpp"
#include "shockcop/errors.hpp"

namespace shockcop {

using io::format_number;

std::string to_string(Copula::Family f) {
    switch (f) {
        case Copula::Family::FrechetW: return "frechet-w";
        case Copula::Family::FrechetM: return "frechet-m";
        case Copula::Family::Independence: return "independence";
        case Copula::Family::Marshall: return "marshall";
        case Copula::Family::Maxmin: return "maxmin";
        case Copula::Family::Rmm: return "rmm";
        case Copula::Family::Smm: return "smm";
        case Copula::Family::Survival: return "survival";
        case Copula::Family::Sigma1: return "sigma1";
        case Copula::Family::Sigma2: return "sigma2";
        case Copula::Family::Empirical: return "empirical";
        case Copula::Family::Custom: return "custom";
    }
    return "?";
}

namespace detail {

struct CopulaImpl {
    virtual ~CopulaImpl() = default;
    virtual double eval(double u, double v) const = 0;
    virtual Copula::Family family() const = 0;
    virtual std::string describe() const = 0;
    virtual std::vector<Generator> generators() const { return {}; }
    virtual const Copula* inner() const { return nullptr; }
};

}  // namespace detail

namespace {

using detail::CopulaImpl;

struct WImpl final : CopulaImpl {
    double eval(double u, double v) const override { return std::max(0.0, u + v - 1.0); }
    Copula::Family family() const override { return Copula::Family::FrechetW; }
    std::string describe() const override { return "frechet-w"; }
};

struct MImpl final : CopulaImpl {
    double eval(double u, double v) const override { return std::min(u, v); }
    Copula::Family family() const override { return Copula::Family::FrechetM; }
    std::string describe() const override { return "frechet-m"; }
};

struct PiImpl final : CopulaImpl {
    double eval(double u, double v) const override { return u * v; }
    Copula::Family family() const override { return Copula::Family::Independence; }
    std::string describe() const override { return "independence"; }
};

struct PairImpl : CopulaImpl {
    Generator a, b;
    PairImpl(Generator x, Generator y) : a(std::move(x)), b(std::move(y)) {}
    std::vector<Generator> generators() const override { return {a, b}; }
    std::string pair_descriptor(const char* name, const char* ka, const char* kb) const {
        return std::string(name) + ":" + ka + "=" + a.descriptor() + "," + kb + "=" + b.descriptor();
    }
};

struct MarshallImpl final : PairImpl {
    using PairImpl::PairImpl;
    double eval(double u, double v) const override { return std::min(u * b(v), v * a(u)); }
    Copula::Family family() const override { return Copula::Family::Marshall; }
    std::string describe() const override { return pair_descriptor("marshall", "phi", "psi"); }
};

struct MaxminImpl final : PairImpl {
    using PairImpl::PairImpl;
    double eval(double u, double v) const override {
        const double p = b(v);
        return std::min(u, a(u) * (v - p) + u * p);
    }
    Copula::Family family() const override { return Copula::Family::Maxmin; }
    std::string describe() const override { return pair_descriptor("maxmin", "phi", "psi"); }
};

struct RmmImpl final : PairImpl {
    using PairImpl::PairImpl;
    double eval(double u, double v) const override { return std::max(0.0, u * v - a(u) * b(v)); }
    Copula::Family family() const override { return Copula::Family::Rmm; }
    std::string describe() const override { return pair_descriptor("rmm", "f", "g"); }
};

struct SmmImpl final : PairImpl {
    using PairImpl::PairImpl;
    double eval(double u, double v) const override { return std::max(u + v - 1.0, u * v - a(u) * b(v)); }
    Copula::Family family() const override { return Copula::Family::Smm; }
    std::string describe() const override { return pair_descriptor("smm", "h", "k"); }
};

struct SurvivalImpl final : CopulaImpl {
    Copula c;
    explicit SurvivalImpl(Copula x) : c(std::move(x)) {}
    double eval(double u, double v) const override { return u + v - 1.0 + c(1.0 - u, 1.0 - v); }
    Copula::Family family() const override { return Copula::Family::Survival; }
    std::string describe() const override { return "survival(" + c.describe() + ")"; }
    const Copula* inner() const override { return &c; }
};

struct Sigma1Impl final : CopulaImpl {
    Copula c;
    explicit Sigma1Impl(Copula x) : c(std::move(x)) {}
    double eval(double u, double v) const override { return v - c(1.0 - u, v); }
    Copula::Family family() const override { return Copula::Family::Sigma1; }
    std::string describe() const override { return "sigma1(" + c.describe() + ")"; }
    const Copula* inner() const override { return &c; }
};

struct Sigma2Impl final : CopulaImpl {
    Copula c;
    explicit Sigma2Impl(Copula x) : c(std::move(x)) {}
    double eval(double u, double v) const override { return u - c(u, 1.0 - v); }
    Copula::Family family() const override { return Copula::Family::Sigma2; }
    std::string describe() const override { return "sigma2(" + c.describe() + ")"; }
    const Copula* inner() const override { return &c; }
};

struct CustomImpl final : CopulaImpl {
    std::string name;
    Copula::Fn fn;
    Copula::Family fam;
    CustomImpl(std::string n, Copula::Fn f, Copula::Family k) : name(std::move(n)), fn(std::move(f)), fam(k) {}
    double eval(double u, double v) const override { return fn(u, v); }
    Copula::Family family() const override { return fam; }
    std::string describe() const override {
        return (fam == Copula::Family::Empirical ? "empirical:name=" : "custom:name=") + name;
    }
};

Generator checked(const Generator& g, GeneratorClass cls, const char* role) {
    Generator t = g.declared_class() == cls ? g : g.with_class(cls);
    auto report = validate(t);
    if (!report.passed) {
        const auto& v = report.violations.front();
        throw ContractViolation(v.condition, v.u,
                                std::string(role) + " is not a valid " + to_string(cls) + " generator: " +
                                    report.summary());
    }
    return t;
}

}  // namespace

Copula Copula::frechet_w() { return Copula(std::make_shared<WImpl>()); }
Copula Copula::frechet_m() { return Copula(std::make_shared<MImpl>()); }
Copula Copula::independence() { return Copula(std::make_shared<PiImpl>()); }

Copula Copula::marshall(const Generator& phi, const Generator& psi) {
    return Copula(std::make_shared<MarshallImpl>(checked(phi, GeneratorClass::MarshallF, "phi"),
                                                 checked(psi, GeneratorClass::MarshallF, "psi")));
}

Copula Copula::maxmin(const Generator& phi, const Generator& psi) {
    return Copula(std::make_shared<MaxminImpl>(checked(phi, GeneratorClass::MarshallF, "phi"),
                                               checked(psi, GeneratorClass::MaxminPsi, "psi")));
}

Copula Copula::rmm(const Generator& f, const Generator& g) {
    return Copula(std::make_shared<RmmImpl>(checked(f, GeneratorClass::RmmF, "f"),
                                            checked(g, GeneratorClass::RmmF, "g")));
}

Copula Copula::smm(const Generator& h, const Generator& k) {
    return Copula(std::make_shared<SmmImpl>(checked(h, GeneratorClass::SmmH, "h"),
                                            checked(k, GeneratorClass::SmmH, "k")));
}

Copula Copula::efgm(double a) {
    if (!(a > 0.0 && a <= 1.0)) throw DomainError("efgm needs a in (0,1], got " + format_number(a));
    const auto f = Generator::efgm(a);
    return with_descriptor(rmm(f, f), "efgm:a=" + format_number(a));
}

Copula Copula::exponential_rmm(double l1, double l2, double m1, double m2) {
    for (double r : {l1, l2, m1, m2}) {
        if (!(r > 0.0 && std::isfinite(r))) throw DomainError("exprmm rates must be positive and finite");
    }
    const double alpha = l1 / (l1 + m1);
    const double beta = l2 / (l2 + m2);
    auto c = rmm(Generator::power(alpha), Generator::power(beta));
    return with_descriptor(c, "exprmm:l1=" + format_number(l1) + ",l2=" + format_number(l2) +
                                  ",m1=" + format_number(m1) + ",m2=" + format_number(m2));
}

Copula Copula::exponential_rmm_ab(double alpha, double beta) {
    auto c = rmm(Generator::power(alpha), Generator::power(beta));
    return with_descriptor(c, "exprmm-ab:alpha=" + format_number(alpha) + ",beta=" + format_number(beta));
}

Copula Copula::custom(std::string name, Fn fn, Family family) {
    return Copula(std::make_shared<CustomImpl>(std::move(name), std::move(fn), family));
}

double Copula::operator()(double u, double v) const { return impl_->eval(u, v); }

double Copula::eval_clamped(double u, double v) const { return std::clamp(impl_->eval(u, v), 0.0, 1.0); }

Copula::Family Copula::family() const { return impl_->family(); }

std::string Copula::describe() const { return descriptor_.empty() ? impl_->describe() : descriptor_; }

std::vector<Generator> Copula::generators() const { return impl_->generators(); }

const Copula* Copula::inner() const { return impl_->inner(); }

double volume(const Copula& c, const Rectangle& r) {
    return c(r.u2, r.v2) - c(r.u1, r.v2) - c(r.u2, r.v1) + c(r.u1, r.v1);
}

Copula survival(const Copula& c) { return Copula(std::make_shared<SurvivalImpl>(c)); }

Copula reflect(const Copula& c, int which) {
    if (which == 1) return Copula(std::make_shared<Sigma1Impl>(c));
    if (which == 2) return Copula(std::make_shared<Sigma2Impl>(c));
    throw DomainError("reflect: which must be 1 or 2");
}

Copula with_descriptor(const Copula& c, std::string descriptor) {
    Copula out = c;
    out.descriptor_ = std::move(descriptor);
    return out;
}

Copula normalize(const Copula& c) {
    const Copula* in = c.inner();
    if (!in) return c;
    const Copula base = normalize(*in);
    const auto gens = base.generators();
    switch (c.family()) {
        case Copula::Family::Sigma2:
            if (base.family() == Copula::Family::Maxmin) {
                // f(u) = phi(u) - u, g(v) = 1 - v - psi(1-v)
                auto f = Generator::affine(gens[0], false, 1.0, -1.0, 0.0, GeneratorClass::RmmF);
                auto g = Generator::affine(gens[1], true, -1.0, -1.0, 1.0, GeneratorClass::RmmF);
                return Copula::rmm(f, g);
            }
            return sigma2(base);
        case Copula::Family::Sigma1:
            if (base.family() == Copula::Family::Maxmin) {
                // h(u) = phi(1-u) - (1-u), k(v) = v - psi(v)
                auto h = Generator::affine(gens[0], true, 1.0, 1.0, -1.0, GeneratorClass::SmmH);
                auto k = Generator::affine(gens[1], false, -1.0, 1.0, 0.0, GeneratorClass::SmmH);
                return Copula::smm(h, k);
            }
            return sigma1(base);
        case Copula::Family::Survival:
            if (base.family() == Copula::Family::Rmm) {
                return Copula::smm(rmm_to_smm(gens[0]), rmm_to_smm(gens[1]));
            }
            if (base.family() == Copula::Family::Smm) {
                return Copula::rmm(smm_to_rmm(gens[0]), smm_to_rmm(gens[1]));
            }
            return survival(base);
        default:
            return c;
    }
}

}  // namespace shockcop
