#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "shockcop/errors.hpp"
#include "shockcop/sampling.hpp"

using namespace shockcop;

namespace {

const auto U = Distribution::uniform();
const auto E = Distribution::exponential(1.0);

}  // namespace

TEST_CASE("counter-based uniforms") {
    CHECK(rng::splitmix64(0) == 0xe220a8397b1dcdafULL);
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const double w = rng::uniform(42, rng::Z, i);
        CHECK(w > 0.0);
        CHECK(w < 1.0);
        CHECK((1.0 - w) + w == 1.0);
        CHECK(w == rng::uniform(42, rng::Z, i));
    }
    CHECK(rng::uniform(1, rng::X, 0) != rng::uniform(1, rng::Y, 0));
    CHECK(rng::uniform(1, rng::X, 0) != rng::uniform(2, rng::X, 0));
}

TEST_CASE("sample sizes and determinism") {
    auto m = ShockModel::rmm(E, E, E, E);
    CHECK(sample_model(m, 1, 3).size() == 1);
    auto a = sample_model(m, 10000, 7, 1);
    auto b = sample_model(m, 10000, 7, 4);
    auto c = sample_model(m, 10000, 7, 0);
    CHECK(a.u == b.u);
    CHECK(a.v == b.v);
    CHECK(a.u == c.u);
    CHECK(to_csv(a) == to_csv(b));
    CHECK(sample_model(m, 100, 8).u != sample_model(m, 100, 7).u);
    CHECK_THROWS_AS(sample_model(m, 0, 1), DomainError);
    auto bad = m;
    bad.combiner = Combiner::MaxMin;
    CHECK_THROWS_AS(sample_model(bad, 10, 1), IllegalConfiguration);
}

TEST_CASE("comonotonic shocks share the uniform") {
    auto m = ShockModel::marshall(U, U, E, E);
    for (std::uint64_t i = 0; i < 2000; ++i) {
        const auto d = draw_shocks(m, 5, i);
        CHECK(d.z1 == d.z2);
        const double w = rng::uniform(5, rng::Z, i);
        CHECK(E.cdf_left(d.z1) <= w + 1e-15);
        CHECK(w <= E.cdf(d.z1) + 1e-15);
    }
}

TEST_CASE("countermonotonic shocks use the reflected uniform") {
    auto m = ShockModel::rmm(U, U, U, U);
    const std::size_t n = 100000;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    bool exact = true;
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto d = draw_shocks(m, 11, i);
        exact = exact && (d.z1 + d.z2 == 1.0);
        sx += d.z1, sy += d.z2, sxx += d.z1 * d.z1, syy += d.z2 * d.z2, sxy += d.z1 * d.z2;
    }
    CHECK(exact);
    const double cov = sxy / n - sx / n * sy / n;
    const double corr = cov / std::sqrt((sxx / n - sx * sx / n / n) * (syy / n - sy * sy / n / n));
    CHECK(corr >= -1.0 - 1e-12);
    CHECK(corr <= -0.99);

    // the empirical copula of (Z1, Z2) is close to W
    std::vector<double> z1(n), z2(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto d = draw_shocks(m, 11, i);
        z1[i] = d.z1, z2[i] = d.z2;
    }
    CHECK(sup_distance(EmpiricalCopula(z1, z2).as_copula(), Copula::frechet_w(), 21) <= 0.02);
}

TEST_CASE("sampled margins follow the closed forms") {
    auto m = ShockModel::smm(U, U, U, U);
    auto s = sample_model(m, 50000, 3);
    const auto fu = margins(m).first;
    for (double x : {0.2, 0.5, 0.8}) {
        const double p = std::count_if(s.u.begin(), s.u.end(), [x](double u) { return u <= x; }) / 50000.0;
        CHECK(std::abs(p - fu.cdf(x)) <= 0.01);
    }
}

TEST_CASE("normalized ranks use average ties") {
    auto r = normalized_ranks({3.0, 1.0, 3.0, 2.0});
    CHECK(r == std::vector<double>{0.875, 0.25, 0.875, 0.5});
}

TEST_CASE("empirical copula examples") {
    EmpiricalCopula c({1, 2}, {1, 2});
    CHECK(c(0.5, 0.5) == 0.5);
    CHECK(c(1, 1) == 1.0);
    EmpiricalCopula d({1, 2}, {2, 1});
    CHECK(d(0.5, 0.5) == 0.0);
    CHECK(d(1, 1) == 1.0);
    auto s = sample_model(ShockModel::rmm(E, E, E, E), 1000, 1);
    EmpiricalCopula e(s);
    CHECK(e(0.9, 0.0) == 0.0);
    CHECK(e(0.0009, 1.0) == 0.0);
    CHECK(e(1, 1) == 1.0);
    // grounded within 1/n and monotone
    for (int i = 0; i <= 20; ++i) {
        CHECK(std::abs(e(i / 20.0, 1.0) - i / 20.0) <= 1.0 / 1000 + 1e-12);
        if (i) CHECK(e(i / 20.0, 0.5) >= e((i - 1) / 20.0, 0.5));
    }
    CHECK_THROWS_AS(EmpiricalCopula({1.0}, {1.0}), DomainError);
    CHECK_THROWS_AS(EmpiricalCopula({1.0, 2.0}, {1.0}), DomainError);
}

TEST_CASE("sup distance") {
    CHECK(sup_distance(Copula::independence(), Copula::independence(), 21) == 0.0);
    CHECK(sup_distance(Copula::frechet_w(), Copula::frechet_m(), 3) == 0.5);
    auto e = Copula::efgm(0.5);
    CHECK(sup_distance(e, Copula::independence(), 11) == sup_distance(Copula::independence(), e, 11));
    CHECK_THROWS_AS(sup_distance(e, e, 1), DomainError);
}

TEST_CASE("EFGM forward model sample") {
    auto g = Distribution::efgm_shock(0.95);
    auto s = sample_model(ShockModel::rmm(U, U, g, g), 200000, 1);
    CHECK(sup_distance(EmpiricalCopula(s).as_copula(), Copula::efgm(0.95), 21) <= 0.01);
}

TEST_CASE("CSV export and import") {
    auto m = ShockModel::rmm(E, E, E, E);
    auto s = sample_model(m, 50, 9);
    const auto csv = to_csv(s);
    CHECK(csv.rfind("# shockcop ", 0) == 0);
    CHECK(csv.find("seed=9") != std::string::npos);
    std::istringstream in(csv);
    auto back = parse_pairs_csv(in);
    CHECK(back.seed == 9);
    CHECK(back.descriptor == s.descriptor);
    REQUIRE(back.size() == 50);
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(back.u[i] == doctest::Approx(s.u[i]).epsilon(1e-14));
        CHECK(back.v[i] == doctest::Approx(s.v[i]).epsilon(1e-14));
    }
    std::istringstream ranks(to_csv(s, true));
    auto rb = parse_pairs_csv(ranks);
    CHECK(EmpiricalCopula(rb)(0.5, 0.5) == EmpiricalCopula(s)(0.5, 0.5));
    std::istringstream bad("u,v\n0.1,abc\n");
    CHECK_THROWS_AS(parse_pairs_csv(bad), ParseError);
}
