#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "shockcop/copulas.hpp"
#include "shockcop/errors.hpp"

using namespace shockcop;

namespace {

template <class A, class B>
double grid_gap(const A& a, const B& b, int n = 101) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double u = double(i) / (n - 1), v = double(j) / (n - 1);
            worst = std::max(worst, std::abs(a(u, v) - b(u, v)));
        }
    }
    return worst;
}

Generator psi_sq() { return Generator::polynomial({0.0, 0.0, 1.0}, GeneratorClass::MaxminPsi); }

}  // namespace

TEST_CASE("basic values") {
    CHECK(Copula::frechet_m()(0.3, 0.4) == 0.3);
    CHECK(Copula::frechet_w()(0.3, 0.4) == 0.0);
    CHECK(Copula::independence()(0.3, 0.4) == doctest::Approx(0.12));
    auto zero = Generator::power(1.0);
    CHECK(Copula::rmm(zero, zero)(0.3, 0.4) == doctest::Approx(0.12).epsilon(1e-15));
    CHECK(Copula::efgm(1.0)(0.5, 0.5) == 0.1875);
    CHECK(Copula::efgm(0.95)(0.5, 0.5) == doctest::Approx(0.19359375).epsilon(1e-15));
    CHECK(Copula::exponential_rmm_ab(0.5, 0.5)(0.25, 0.25) == 0.0);
    CHECK_THROWS_AS(Copula::efgm(0.0), DomainError);
}

TEST_CASE("exponential RMM parameters") {
    auto c = Copula::exponential_rmm(1, 1, 1, 1);
    auto gens = c.generators();
    REQUIRE(gens.size() == 2);
    CHECK(gens[0](0.25) == doctest::Approx(0.25));
    CHECK(grid_gap(c, Copula::exponential_rmm_ab(0.5, 0.5)) == 0.0);
    // direct formula
    for (double a : {0.1, 0.4, 0.9}) {
        for (double b : {0.1, 0.5, 0.9}) {
            auto raw = [&](double u, double v) {
                return std::max(0.0, u * v - (std::pow(u, a) - u) * (std::pow(v, b) - v));
            };
            CHECK(grid_gap(Copula::exponential_rmm_ab(a, b), raw, 21) <= 1e-15);
        }
    }
}

TEST_CASE("generator families evaluate their formulas") {
    auto phi = Generator::ramp(2.0);
    auto m = Copula::marshall(phi, phi);
    auto marshall = [](double u, double v) {
        return std::min(u * std::min(2 * v, 1.0), v * std::min(2 * u, 1.0));
    };
    CHECK(grid_gap(m, marshall) <= 1e-15);

    auto mm = Copula::maxmin(phi, psi_sq());
    auto maxmin = [](double u, double v) {
        return std::min(u, std::min(2 * u, 1.0) * (v - v * v) + u * v * v);
    };
    CHECK(grid_gap(mm, maxmin) <= 1e-15);

    auto e = Copula::efgm(0.7);
    auto efgm = [](double u, double v) { return u * v - 0.49 * u * v * (1 - u) * (1 - v); };
    CHECK(grid_gap(e, efgm) <= 1e-15);
}

TEST_CASE("invalid generators are refused") {
    auto bad = Generator::polynomial({0.0, 2.0}, GeneratorClass::RmmF);
    CHECK_THROWS_AS(Copula::rmm(bad, bad), ContractViolation);
    CHECK_THROWS_AS(Copula::marshall(Generator::polynomial({0.0, 0.0, 1.0}, GeneratorClass::MarshallF),
                                     Generator::identity()),
                    ContractViolation);
    auto sq = Generator::affine(Generator::power(0.5), false, 1.0, 1.0, 0.0, GeneratorClass::MaxminPsi);
    CHECK_THROWS_AS(Copula::maxmin(Generator::identity(), sq), ContractViolation);
}

TEST_CASE("volume") {
    auto e = Copula::efgm(1.0);
    CHECK(volume(e, {0.3, 0.3, 0.1, 0.9}) == 0.0);
    CHECK(volume(Copula::independence(), {0.0, 0.5, 0.0, 0.5}) == doctest::Approx(0.25));
    CHECK(volume(e, {0.0, 0.5, 0.5, 1.0}) == doctest::Approx(0.3125));
}

TEST_CASE("survival and reflections") {
    auto pi = Copula::independence();
    CHECK(survival(pi)(0.3, 0.7) == doctest::Approx(0.21));
    CHECK(sigma2(pi)(0.3, 0.7) == doctest::Approx(0.21));

    auto e = Copula::efgm(0.95);
    CHECK(grid_gap(survival(survival(e)), e, 11) <= 1e-15);
    CHECK(grid_gap(sigma1(sigma1(e)), e) <= 1e-12);
    CHECK(grid_gap(sigma2(sigma2(e)), e) <= 1e-12);

    // survival(RMM(f,g)) = max{u+v-1, uv - f(1-u) g(1-v)}
    auto f = Generator::two_param(0.3, 0.8);
    auto g = Generator::power(0.6);
    auto r = Copula::rmm(f, g);
    auto direct = [&](double u, double v) { return std::max(u + v - 1, u * v - f(1 - u) * g(1 - v)); };
    CHECK(grid_gap(survival(r), direct) <= 1e-12);
    CHECK(grid_gap(Copula::smm(rmm_to_smm(f), rmm_to_smm(g)), direct) <= 1e-15);

    CHECK(survival(e).family() == Copula::Family::Survival);
    CHECK(survival(e).inner() != nullptr);
    CHECK_THROWS_AS(reflect(e, 3), DomainError);
}

TEST_CASE("normalize rewrites transforms into generator families") {
    auto phi = Generator::ramp(2.0);
    auto psi = psi_sq();
    auto mm = Copula::maxmin(phi, psi);

    auto r = normalize(sigma2(mm));
    CHECK(r.family() == Copula::Family::Rmm);
    auto f = [&](double u) { return phi(u) - u; };
    auto g = [&](double v) { return 1 - v - psi(1 - v); };
    auto rmm_direct = [&](double u, double v) { return std::max(0.0, u * v - f(u) * g(v)); };
    CHECK(grid_gap(r, rmm_direct) <= 1e-12);
    CHECK(grid_gap(r, sigma2(mm)) <= 1e-12);

    auto s = normalize(sigma1(mm));
    CHECK(s.family() == Copula::Family::Smm);
    auto h = [&](double u) { return phi(1 - u) - (1 - u); };
    auto k = [&](double v) { return v - psi(v); };
    auto smm_direct = [&](double u, double v) { return std::max(u + v - 1, u * v - h(u) * k(v)); };
    CHECK(grid_gap(s, smm_direct) <= 1e-12);
    CHECK(grid_gap(s, sigma1(mm)) <= 1e-12);

    auto e = Copula::efgm(0.95);
    auto se = normalize(survival(e));
    CHECK(se.family() == Copula::Family::Smm);
    CHECK(grid_gap(se, survival(e)) <= 1e-12);
    auto back = normalize(survival(se));
    CHECK(back.family() == Copula::Family::Rmm);
    CHECK(grid_gap(back, e) <= 1e-12);

    CHECK(normalize(e).family() == Copula::Family::Rmm);
    CHECK(normalize(survival(Copula::independence())).family() == Copula::Family::Survival);
}

TEST_CASE("radial symmetry of EFGM") {
    auto e = Copula::efgm(1.0);
    CHECK(survival(e)(0.5, 0.5) == doctest::Approx(0.1875).epsilon(1e-15));
    CHECK(grid_gap(survival(e), e) <= 1e-15);
}

TEST_CASE("Frechet bounds and 2-increasing on transforms") {
    auto mm = Copula::maxmin(Generator::ramp(2.0), psi_sq());
    for (const auto& c : {mm, survival(mm), sigma1(mm), sigma2(mm), Copula::efgm(0.5)}) {
        for (int i = 0; i <= 20; ++i) {
            for (int j = 0; j <= 20; ++j) {
                const double u = i / 20.0, v = j / 20.0;
                CHECK(c(u, v) >= std::max(0.0, u + v - 1) - 1e-12);
                CHECK(c(u, v) <= std::min(u, v) + 1e-12);
                if (i < 20 && j < 20) CHECK(volume(c, {u, u + 0.05, v, v + 0.05}) >= -1e-12);
            }
        }
    }
}

TEST_CASE("sklar join") {
    auto h = sklar_join(Copula::frechet_m(), Distribution::uniform(), Distribution::uniform());
    CHECK(h(0.3, 0.8) == doctest::Approx(0.3));
    auto fu = Distribution::exponential(2.0);
    auto j = sklar_join(Copula::efgm(0.6), fu, Distribution::uniform());
    for (int i = 0; i <= 20; ++i) {
        const double x = i / 10.0;
        CHECK(j(x, ExtendedReal::pos_inf()) == doctest::Approx(fu.cdf(x)).epsilon(1e-15));
        CHECK(j(ExtendedReal::neg_inf(), x) == 0.0);
    }
}

TEST_CASE("descriptions and custom copulas") {
    CHECK(Copula::efgm(0.95).describe() == "efgm:a=0.95");
    CHECK(Copula::frechet_m().describe() == "frechet-m");
    CHECK(survival(Copula::efgm(1.0)).describe() == "survival(efgm:a=1)");
    CHECK(to_string(Copula::Family::Smm) == "smm");
    auto raw = Copula::custom("raw", [](double u, double v) { return u * v + 2.0; });
    CHECK(raw(0.5, 0.5) == 2.25);
    CHECK(raw.eval_clamped(0.5, 0.5) == 1.0);
    CHECK(raw.family() == Copula::Family::Custom);
    CHECK(with_descriptor(raw, "other").describe() == "other");
}
