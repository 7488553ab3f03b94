#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "shockcop/errors.hpp"
#include "shockcop/shock_models.hpp"

using namespace shockcop;

namespace {

double grid_gap(const Copula& a, const Copula& b, int n = 11) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double u = double(i) / (n - 1), v = double(j) / (n - 1);
            worst = std::max(worst, std::abs(a(u, v) - b(u, v)));
        }
    }
    return worst;
}

bool condition_passed(const Reconstruction& r, const std::string& id) {
    for (const auto& c : r.conditions) {
        if (c.id == id) return c.passed;
    }
    return false;
}

const auto U = Distribution::uniform();
const auto E = Distribution::exponential(1.0);

}  // namespace

TEST_CASE("legal configurations") {
    CHECK(is_legal(Coupling::Comonotonic, Combiner::MaxMax));
    CHECK(is_legal(Coupling::Countermonotonic, Combiner::MaxMax));
    CHECK(is_legal(Coupling::Countermonotonic, Combiner::MinMin));
    CHECK(is_legal(Coupling::SharedZ, Combiner::MaxMin));
    CHECK_FALSE(is_legal(Coupling::Comonotonic, Combiner::MinMin));
    CHECK_FALSE(is_legal(Coupling::SharedZ, Combiner::MaxMax));
    auto m = ShockModel::marshall(U, U, U, U);
    m.combiner = Combiner::MinMin;
    CHECK_THROWS_AS(check_legal(m), IllegalConfiguration);
    CHECK_THROWS_AS(induced_copula(m), IllegalConfiguration);
}

TEST_CASE("margins") {
    auto [fu, fv] = margins(ShockModel::rmm(U, U, U, U));
    CHECK(fu.cdf(0.5) == doctest::Approx(0.25));
    auto [eu, ev] = margins(ShockModel::rmm(E, E, E, E));
    CHECK(eu.cdf(1.0) == doctest::Approx(0.399576).epsilon(1e-6));
    auto [mu, mv] = margins(ShockModel::smm(U, U, U, U));
    CHECK(mu.cdf(0.5) == doctest::Approx(0.75));
    // U = max{X,Z}, V = min{Y,Z}
    auto [xu, xv] = margins(ShockModel::maxmin(U, U, U));
    CHECK(xu.cdf(0.5) == doctest::Approx(0.25));
    CHECK(xv.cdf(0.5) == doctest::Approx(0.75));
}

TEST_CASE("joint CDF closed forms") {
    CHECK(joint_cdf(ShockModel::marshall(U, U, U, U), 0.5, 0.5) == doctest::Approx(0.125));
    CHECK(joint_cdf(ShockModel::rmm(U, U, U, U), 0.5, 0.5) == 0.0);
    CHECK(joint_cdf(ShockModel::smm(U, U, U, U), 0.5, 0.5) == doctest::Approx(0.5));
    // P[max{X,Z} <= x, min{Y,Z} <= y] = P[X<=x, Z<=x] - P[X<=x, y<Z<=x, Y>y]
    const double x = 0.7, y = 0.4;
    CHECK(joint_cdf(ShockModel::maxmin(U, U, U), x, y) == doctest::Approx(x * x - x * (x - y) * (1 - y)));
    CHECK(joint_cdf(ShockModel::rmm(E, E, E, E), ExtendedReal::pos_inf(), 1.0) ==
          doctest::Approx(margins(ShockModel::rmm(E, E, E, E)).second.cdf(1.0)));
}

TEST_CASE("joint CDF agrees with the induced copula") {
    auto e2 = Distribution::exponential(2.0);
    for (const auto& m : {ShockModel::marshall(E, e2, e2, E), ShockModel::rmm(E, e2, e2, E),
                          ShockModel::smm(E, e2, e2, E), ShockModel::maxmin(E, e2, U)}) {
        auto c = induced_copula(m);
        auto [fu, fv] = margins(m);
        for (double x : {0.1, 0.5, 1.0, 2.0}) {
            for (double y : {0.2, 0.7, 1.5}) {
                CHECK(std::abs(joint_cdf(m, x, y) - c(fu.cdf(x), fv.cdf(y))) <= 1e-12);
            }
        }
    }
}

TEST_CASE("induced copulas match closed forms") {
    CHECK(grid_gap(induced_copula(ShockModel::rmm(E, E, E, E)), Copula::exponential_rmm(1, 1, 1, 1)) <= 1e-6);
    // power-function shocks give the power generators for unequal rates
    auto l1 = Distribution::power_function(1.0), l2 = Distribution::power_function(4.0);
    auto m1 = Distribution::power_function(9.0), m2 = Distribution::power_function(0.5);
    CHECK(grid_gap(induced_copula(ShockModel::rmm(l1, l2, m1, m2)), Copula::exponential_rmm(1, 4, 9, 0.5)) <=
          1e-6);
    CHECK(grid_gap(induced_copula(ShockModel::smm(E, E, E, E)), survival(Copula::exponential_rmm(1, 1, 1, 1))) <=
          1e-6);
    // no systemic effect: G degenerate at the left end
    auto pt = Distribution::tabulated({{0.0, 1.0}}, Interpolation::Step);
    auto ind = induced_copula(ShockModel::marshall(U, U, pt, pt));
    CHECK(grid_gap(ind, Copula::independence()) <= 1e-12);
    // EFGM forward model
    for (double a : {0.5, 1.0}) {
        auto g = Distribution::efgm_shock(a);
        CHECK(grid_gap(induced_copula(ShockModel::rmm(U, U, g, g)), Copula::efgm(a)) <= 1e-6);
    }
}

TEST_CASE("Marshall reconstruction") {
    auto id = Generator::identity();
    auto r0 = reconstruct_marshall(Copula::marshall(id, id), U, U);
    CHECK(r0.passed());
    CHECK(r0.model.g1.cdf(0.3) == 1.0);
    CHECK(r0.model.fx.cdf(0.3) == doctest::Approx(0.3));

    auto ramp = Generator::ramp(2.0);
    auto r = reconstruct_marshall(Copula::marshall(ramp, ramp), U, U);
    CHECK(r.passed());
    CHECK(r.model.g2.cdf(0.25) == doctest::Approx(0.5));
    CHECK(r.model.g1.cdf(0.75) == doctest::Approx(0.75));
    CHECK(r.model.fx.cdf(0.25) == doctest::Approx(0.5));
    for (double x : {0.1, 0.3, 0.6, 0.9}) CHECK(r.model.fx.cdf(x) * r.model.g1.cdf(x) == doctest::Approx(x));

    try {
        reconstruct_marshall(Copula::marshall(ramp, id), U, U);
        FAIL("expected assumption-a");
    } catch (const ContractViolation& e) {
        CHECK(e.condition() == "assumption-a");
        const double x = e.witness();
        CHECK(ramp.derived(DerivedKind::Star, x).value() != id.derived(DerivedKind::Star, x).value());
    }
    // phi*(0) finite and the margin positive everywhere
    CHECK_THROWS_AS(reconstruct_marshall(Copula::marshall(ramp, ramp), Distribution::negated(E),
                                         Distribution::negated(E)),
                    ContractViolation);
}

TEST_CASE("Marshall reconstruction with an affine alignment") {
    auto ramp = Generator::ramp(2.0);
    auto fu = Distribution::uniform(0.0, 2.0);
    ReconstructOptions o;
    o.chi = ChiMap::affine(2.0, 0.0);
    auto r = reconstruct_marshall(Copula::marshall(ramp, ramp), fu, U, o);
    CHECK(r.passed());
}

TEST_CASE("RMM reconstruction") {
    auto r0 = reconstruct_rmm(Copula::rmm(Generator::power(1.0), Generator::power(1.0)), U, U);
    CHECK(r0.passed());
    CHECK(r0.model.fx.cdf(0.4) == doctest::Approx(0.4));
    CHECK(r0.model.g1.cdf(0.4) == 1.0);

    for (double a : {0.5, 1.0}) {
        auto r = reconstruct_rmm(Copula::efgm(a), U, U);
        CHECK(r.passed());
        for (double x : {0.1, 0.5, 0.9}) {
            CHECK(r.model.fx.cdf(x) == doctest::Approx((a + 1) * x - a * x * x).epsilon(1e-14));
            CHECK(r.model.g1.cdf(x) == doctest::Approx(1.0 / (a + 1 - a * x)).epsilon(1e-14));
        }
    }
    auto r = reconstruct_rmm(Copula::efgm(1.0), U, U);
    CHECK(r.model.fx.cdf(0.5) == doctest::Approx(0.75));
    CHECK(r.model.g1.cdf(0.5) == doctest::Approx(2.0 / 3.0));

    // model-native margins of the exponential model give back Exp(1)
    auto [fu, fv] = margins(ShockModel::rmm(E, E, E, E));
    auto re = reconstruct_rmm(Copula::exponential_rmm(1, 1, 1, 1), fu, fv);
    CHECK(re.passed());
    for (int i = 1; i <= 21; ++i) {
        const double x = i * 0.25;
        CHECK(std::abs(re.model.fx.cdf(x) - E.cdf(x)) <= 1e-6);
        CHECK(std::abs(re.model.g1.cdf(x) - E.cdf(x)) <= 1e-6);
    }
}

TEST_CASE("RMM reconstruction needs an interior point") {
    auto atom = Distribution::tabulated({{0.0, 1.0}}, Interpolation::Step);
    try {
        reconstruct_rmm(Copula::efgm(1.0), atom, atom);
        FAIL("expected x0-hypothesis");
    } catch (const ContractViolation& e) {
        CHECK(e.condition() == "x0-hypothesis");
    }
}

TEST_CASE("SMM reconstruction") {
    auto c = normalize(survival(Copula::efgm(0.95)));
    REQUIRE(c.family() == Copula::Family::Smm);
    auto r = reconstruct_smm(c, U, U);
    CHECK(r.passed());
    CHECK(condition_passed(r, "joint"));
    CHECK(condition_passed(r, "factor.U"));
    CHECK(grid_gap(induced_copula(r.model), c) <= 1e-6);

    auto mm = Copula::maxmin(Generator::ramp(2.0), Generator::polynomial({0, 0, 1}, GeneratorClass::MaxminPsi));
    ReconstructOptions o;
    o.tol = 1e-9;
    auto rs = reconstruct(sigma1(mm), U, U, o);
    CHECK(rs.passed());

    auto h0 = rmm_to_smm(Generator::power(1.0));
    CHECK(reconstruct_smm(Copula::smm(h0, h0), U, U).passed());
}

TEST_CASE("round trip through the reconstructed model") {
    auto [fu, fv] = margins(ShockModel::rmm(E, E, E, E));
    for (const auto& c : {Copula::efgm(0.5), Copula::efgm(1.0), Copula::exponential_rmm(1, 1, 1, 1)}) {
        for (bool native : {false, true}) {
            auto r = native ? reconstruct(c, fu, fv) : reconstruct(c, U, U);
            CHECK(r.passed());
            CHECK(grid_gap(induced_copula(r.model), c) <= 1e-6);
        }
    }
}

TEST_CASE("reconstruction dispatch and descriptions") {
    CHECK_THROWS_AS(reconstruct(Copula::independence(), U, U), DomainError);
    CHECK(ShockModel::rmm(E, E, E, E).describe().rfind("rmm-max:", 0) == 0);
    CHECK(to_string(Coupling::Countermonotonic) == "countermonotonic");
    CHECK(to_string(Combiner::MinMin) == "minmin");
    auto g = check_grid(U, U, 11);
    CHECK(g.size() == 11);
    CHECK(g.front() < 0.0);
    CHECK(g.back() > 1.0);
}
