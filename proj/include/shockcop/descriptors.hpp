#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shockcop/copulas.hpp"
#include "shockcop/distributions.hpp"
#include "shockcop/generators.hpp"
#include "shockcop/shock_models.hpp"

namespace shockcop::descriptors {

// Textual forms used by the CLI and the Python module.
//
// distributions: uniform[:a=,b=]  exp:rate=  powerfn:k=  efgm-fu:a=  efgm-g1:a=
//                table:mode=step|linear,file=<csv>|knots=x/p;x/p
//                product(d,d)  minimum(d,d)  negated(d)
// generators:    identity  one  power:alpha=  twoparam:alpha=,beta=  efgm-hat:a=  efgm:a=
//                ramp:slope=  poly:c0=,c1=,...  pl:file=<csv>|knots=u/v;u/v
//                reflect(g)  hat-to-f(g)  affine(g):reflect=,scale=,slope=,offset=
//                shock(comp=d,margin=d[,relation=max|min])
//                family=<name>;params=<k=v,...>
// copulas:       frechet-w  frechet-m  independence  efgm:a=  exprmm:l1=,l2=,m1=,m2=
//                exprmm-ab:alpha=,beta=  marshall:phi=,psi=  maxmin:phi=,psi=
//                rmm:f=,g=  smm:h=,k=  survival(c)  sigma1(c)  sigma2(c)
//                rmm(c)  smm(c)  (rewrite c into that family)
// models:        marshall-max:Fx=,Fy=,G1=,G2=  rmm-max:...  smm-min:...  maxmin:Fx=,Fy=,G=
//                exp-rmm:l1=,l2=,m1=,m2=  efgm-model:a=
//                model:Fx=,Fy=,G1=,G2=,coupling=,combiner=
//
// A value may itself contain ',' and ':'; a segment whose key is not one the
// enclosing form expects continues the previous value.

Distribution parse_distribution(std::string_view s);
Generator parse_generator(std::string_view s, std::optional<GeneratorClass> cls = std::nullopt);
Copula parse_copula(std::string_view s);
ShockModel parse_model(std::string_view s);

Coupling parse_coupling(std::string_view s);
Combiner parse_combiner(std::string_view s);

/// Splits at `sep` outside parentheses.
std::vector<std::string> split_top(std::string_view s, char sep);

}  // namespace shockcop::descriptors
