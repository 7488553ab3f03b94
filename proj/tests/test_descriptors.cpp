#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "shockcop/descriptors.hpp"
#include "shockcop/errors.hpp"

using namespace shockcop;
using namespace shockcop::descriptors;

namespace {

double gap(const Copula& a, const Copula& b) {
    double worst = 0.0;
    for (int i = 0; i <= 10; ++i) {
        for (int j = 0; j <= 10; ++j) worst = std::max(worst, std::abs(a(i / 10.0, j / 10.0) - b(i / 10.0, j / 10.0)));
    }
    return worst;
}

}  // namespace

TEST_CASE("split at top level") {
    CHECK(split_top("a,b(c,d),e", ',') == std::vector<std::string>{"a", "b(c,d)", "e"});
    CHECK(split_top("", ',') == std::vector<std::string>{""});
    CHECK_THROWS_AS(split_top("a(b", ','), ParseError);
}

TEST_CASE("distributions") {
    CHECK(parse_distribution("uniform").cdf(0.3) == doctest::Approx(0.3));
    CHECK(parse_distribution("uniform:a=0,b=2").cdf(1.0) == doctest::Approx(0.5));
    CHECK(parse_distribution("exp:rate=2").cdf(std::log(2.0) / 2) == doctest::Approx(0.5));
    CHECK(parse_distribution("exp:2").cdf(std::log(2.0) / 2) == doctest::Approx(0.5));
    CHECK(parse_distribution("efgm-fu:a=1").cdf(0.5) == doctest::Approx((2 - std::sqrt(2.0)) / 2).epsilon(1e-12));
    CHECK(parse_distribution("product(uniform,uniform)").cdf(0.5) == doctest::Approx(0.25));
    CHECK(parse_distribution("minimum(uniform,uniform)").cdf(0.5) == doctest::Approx(0.75));
    CHECK(parse_distribution("negated(exp:rate=1)").cdf(-1.0) == doctest::Approx(std::exp(-1.0)));
    auto t = parse_distribution("table:mode=step,knots=0/0.4;1/1");
    CHECK(t.cdf_left(1.0) == 0.4);
    CHECK(t.quantile(0.4).value() == 0.0);
    CHECK_THROWS_AS(parse_distribution("gamma:k=2"), ParseError);
    CHECK_THROWS_AS(parse_distribution("exp:rate=abc"), ParseError);
    CHECK_THROWS_AS(parse_distribution("exp:rate=-1"), DomainError);
}

TEST_CASE("distribution descriptors round trip") {
    for (std::string s : {"uniform", "exp:rate=2", "powerfn:k=3", "efgm-fu:a=0.95", "efgm-g1:a=0.5",
                          "product(exp:rate=1,exp:rate=9)", "negated(uniform)"}) {
        auto d = parse_distribution(s);
        auto back = parse_distribution(d.describe());
        for (double x : {-0.5, 0.1, 0.5, 0.9, 2.0}) CHECK(back.cdf(x) == d.cdf(x));
    }
}

TEST_CASE("generators") {
    CHECK(parse_generator("power:alpha=0.5")(0.25) == doctest::Approx(0.25));
    CHECK(parse_generator("power:alpha=0.5").declared_class() == GeneratorClass::RmmF);
    CHECK(parse_generator("ramp:slope=2").declared_class() == GeneratorClass::MarshallF);
    CHECK(parse_generator("poly:c0=0,c1=0,c2=1", GeneratorClass::MaxminPsi).declared_class() ==
          GeneratorClass::MaxminPsi);
    CHECK(parse_generator("efgm-hat:a=0.95")(0.5) == doctest::Approx(0.7375));
    CHECK(parse_generator("reflect(power:alpha=0.5)")(0.75) == doctest::Approx(0.25));
    CHECK(parse_generator("hat-to-f(efgm-hat:a=1)")(0.5) == doctest::Approx(0.25));
    auto s = parse_generator("shock(comp=uniform,margin=efgm-fu:a=1)");
    CHECK(s(0.5) == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(parse_generator("family=power;params=alpha=0.5")(0.25) == doctest::Approx(0.25));
    CHECK_THROWS_AS(parse_generator("power:beta=0.5"), ParseError);
    CHECK_THROWS_AS(parse_generator("nope"), ParseError);
}

TEST_CASE("generator descriptors round trip") {
    for (std::string s : {"identity", "one", "power:alpha=0.3", "twoparam:alpha=0.4,beta=0.9", "efgm:a=0.7",
                          "ramp:slope=2", "reflect(efgm:a=1)", "affine(power:alpha=0.5):reflect=1,scale=1,slope=-1,offset=1"}) {
        auto g = parse_generator(s);
        auto back = parse_generator(g.descriptor(), g.declared_class());
        CHECK(back.descriptor() == g.descriptor());
        for (int i = 0; i <= 20; ++i) CHECK(back(i / 20.0) == g(i / 20.0));
    }
}

TEST_CASE("copulas") {
    CHECK(parse_copula("efgm:a=1")(0.5, 0.5) == 0.1875);
    CHECK(parse_copula("frechet-m")(0.3, 0.4) == 0.3);
    CHECK(parse_copula("survival(efgm:a=1)")(0.5, 0.5) == doctest::Approx(0.1875).epsilon(1e-15));
    CHECK(parse_copula("exprmm:l1=1,l2=1,m1=1,m2=1")(0.25, 0.25) == 0.0);
    CHECK(parse_copula("exprmm-ab:alpha=0.1,beta=0.1").family() == Copula::Family::Rmm);
    auto mm = parse_copula("maxmin:phi=ramp:slope=2,psi=poly:c0=0,c1=0,c2=1");
    CHECK(mm.family() == Copula::Family::Maxmin);
    CHECK(mm(0.2, 0.5) == doctest::Approx(std::min(0.2, 0.4 * 0.25 + 0.2 * 0.25)));
    CHECK(parse_copula("rmm(sigma2(maxmin:phi=ramp:slope=2,psi=poly:c0=0,c1=0,c2=1))").family() ==
          Copula::Family::Rmm);
    CHECK(parse_copula("smm(survival(efgm:a=0.95))").family() == Copula::Family::Smm);
    CHECK_THROWS_AS(parse_copula("rmm(independence)"), ParseError);
    CHECK_THROWS_AS(parse_copula("efgm:a=1.5"), DomainError);
    CHECK_THROWS_AS(parse_copula("rmm:f=power:alpha=0.5"), ParseError);
    CHECK_THROWS_AS(parse_copula("rmm:f=twoparam:alpha=0.5,beta=0.3,g=identity"), ContractViolation);
}

TEST_CASE("copula descriptors round trip") {
    for (std::string s : {"frechet-w", "independence", "efgm:a=0.95", "exprmm-ab:alpha=0.4,beta=0.9",
                          "exprmm:l1=1,l2=4,m1=9,m2=0.5", "marshall:phi=ramp:slope=2,psi=identity",
                          "rmm:f=power:alpha=0.5,g=efgm:a=1", "smm:h=reflect(power:alpha=0.5),k=reflect(efgm:a=1)",
                          "sigma1(efgm:a=0.5)", "survival(survival(efgm:a=0.95))",
                          "smm(survival(efgm:a=0.95))"}) {
        auto c = parse_copula(s);
        auto back = parse_copula(c.describe());
        CHECK(back.describe() == c.describe());
        CHECK(gap(back, c) == 0.0);
    }
}

TEST_CASE("models") {
    auto m = parse_model("rmm-max:Fx=exp:rate=1,Fy=exp:rate=1,G1=exp:rate=1,G2=exp:rate=1");
    CHECK(m.coupling == Coupling::Countermonotonic);
    CHECK(m.combiner == Combiner::MaxMax);
    CHECK(parse_model("smm-min:Fx=uniform,Fy=uniform,G1=uniform,G2=uniform").combiner == Combiner::MinMin);
    CHECK(parse_model("marshall-max:Fx=uniform,Fy=uniform,G1=uniform,G2=uniform").coupling == Coupling::Comonotonic);
    CHECK(parse_model("maxmin:Fx=uniform,Fy=uniform,G=uniform").coupling == Coupling::SharedZ);
    auto e = parse_model("exp-rmm:l1=1,l2=1,m1=9,m2=9");
    CHECK(gap(induced_copula(e), parse_copula("exprmm-ab:alpha=0.1,beta=0.1")) <= 1e-6);
    auto f = parse_model("efgm-model:a=0.95");
    CHECK(gap(induced_copula(f), Copula::efgm(0.95)) <= 1e-6);
    auto g = parse_model("model:Fx=uniform,Fy=uniform,G1=uniform,G2=uniform,coupling=comonotonic,combiner=minmin");
    CHECK(g.combiner == Combiner::MinMin);
    CHECK_THROWS_AS(check_legal(g), IllegalConfiguration);
    CHECK(parse_coupling("countermonotonic") == Coupling::Countermonotonic);
    CHECK(parse_combiner("maxmin") == Combiner::MaxMin);
    CHECK_THROWS_AS(parse_combiner("sum"), ParseError);
    CHECK_THROWS_AS(parse_model("rmm-max:Fx=uniform"), ParseError);
}

TEST_CASE("model descriptors round trip") {
    for (std::string s : {"rmm-max:Fx=exp:rate=1,Fy=exp:rate=2,G1=exp:rate=3,G2=exp:rate=4",
                          "maxmin:Fx=uniform,Fy=uniform,G=exp:rate=1", "exp-rmm:l1=1,l2=1,m1=9,m2=9",
                          "efgm-model:a=0.95"}) {
        auto m = parse_model(s);
        auto back = parse_model(m.describe());
        CHECK(back.describe() == m.describe());
        for (double x : {0.1, 0.5, 1.5}) CHECK(joint_cdf(back, x, 0.7) == joint_cdf(m, x, 0.7));
    }
}
