#include "shockcop/descriptors.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "shockcop/csv.hpp"
#include "shockcop/errors.hpp"

namespace shockcop::descriptors {

using io::parse_number;
using io::trim;

std::vector<std::string> split_top(std::string_view s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '(') {
            ++depth;
        } else if (c == ')') {
            if (--depth < 0) throw ParseError("unbalanced ')' in '" + std::string(s) + "'");
        } else if (c == sep && depth == 0) {
            out.emplace_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    if (depth != 0) throw ParseError("unbalanced '(' in '" + std::string(s) + "'");
    out.emplace_back(trim(s.substr(start)));
    return out;
}

namespace {

struct Head {
    std::string name;
    std::optional<std::string> arg;  // text inside name(...)
    std::string params;              // text after ':'
};

Head split_head(std::string_view raw) {
    const auto s = trim(raw);
    if (s.empty()) throw ParseError("empty descriptor");
    const auto paren = s.find('(');
    const auto colon = s.find(':');
    Head h;
    if (paren != std::string_view::npos && (colon == std::string_view::npos || paren < colon)) {
        h.name = std::string(trim(s.substr(0, paren)));
        int depth = 0;
        std::size_t close = std::string_view::npos;
        for (std::size_t i = paren; i < s.size(); ++i) {
            if (s[i] == '(') ++depth;
            if (s[i] == ')' && --depth == 0) {
                close = i;
                break;
            }
        }
        if (close == std::string_view::npos) throw ParseError("missing ')' in '" + std::string(s) + "'");
        h.arg = std::string(trim(s.substr(paren + 1, close - paren - 1)));
        auto rest = trim(s.substr(close + 1));
        if (!rest.empty()) {
            if (rest.front() != ':') throw ParseError("unexpected text after ')' in '" + std::string(s) + "'");
            h.params = std::string(trim(rest.substr(1)));
        }
    } else if (colon != std::string_view::npos) {
        h.name = std::string(trim(s.substr(0, colon)));
        h.params = std::string(trim(s.substr(colon + 1)));
    } else {
        h.name = std::string(s);
    }
    std::transform(h.name.begin(), h.name.end(), h.name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return h;
}

using KeyValues = std::vector<std::pair<std::string, std::string>>;

std::optional<std::string> top_key(const std::string& seg) {
    int depth = 0;
    for (std::size_t i = 0; i < seg.size(); ++i) {
        if (seg[i] == '(') ++depth;
        if (seg[i] == ')') --depth;
        if (depth == 0 && seg[i] == ':') return std::nullopt;
        if (depth == 0 && seg[i] == '=') return std::string(trim(std::string_view(seg).substr(0, i)));
    }
    return std::nullopt;
}

// Keyed parameters where values may contain nested descriptors.
KeyValues keyed(const std::string& params, const std::set<std::string>& keys, const std::string& what) {
    KeyValues kv;
    if (params.empty()) return kv;
    for (const auto& seg : split_top(params, ',')) {
        const auto key = top_key(seg);
        if (key && keys.count(*key)) {
            kv.emplace_back(*key, std::string(trim(std::string_view(seg).substr(seg.find('=') + 1))));
        } else if (!kv.empty()) {
            kv.back().second += "," + seg;
        } else {
            throw ParseError(what + ": unexpected parameter '" + seg + "'");
        }
    }
    return kv;
}

std::string require_key(const KeyValues& kv, const std::string& key, const std::string& what) {
    for (const auto& [k, v] : kv) {
        if (k == key) return v;
    }
    throw ParseError(what + ": missing parameter '" + key + "'");
}

std::optional<std::string> find_key(const KeyValues& kv, const std::string& key) {
    for (const auto& [k, v] : kv) {
        if (k == key) return v;
    }
    return std::nullopt;
}

// Numeric parameters; bare numbers are taken positionally in `order`.
std::map<std::string, double> numeric(const std::string& params, const std::vector<std::string>& order,
                                      const std::string& what) {
    std::map<std::string, double> out;
    if (params.empty()) return out;
    std::size_t pos = 0;
    for (const auto& seg : split_top(params, ',')) {
        const auto eq = seg.find('=');
        std::string key;
        std::string value;
        if (eq == std::string::npos) {
            if (pos >= order.size()) throw ParseError(what + ": too many parameters");
            key = order[pos++];
            value = seg;
        } else {
            key = std::string(trim(std::string_view(seg).substr(0, eq)));
            value = std::string(trim(std::string_view(seg).substr(eq + 1)));
            if (std::find(order.begin(), order.end(), key) == order.end()) {
                throw ParseError(what + ": unknown parameter '" + key + "'");
            }
        }
        if (out.count(key)) throw ParseError(what + ": parameter '" + key + "' given twice");
        try {
            out[key] = parse_number(value);
        } catch (const ParseError& e) {
            throw ParseError(what + ": parameter '" + key + "': " + e.what());
        }
    }
    return out;
}

double get(const std::map<std::string, double>& m, const std::string& key, const std::string& what,
           std::optional<double> fallback = std::nullopt) {
    auto it = m.find(key);
    if (it != m.end()) return it->second;
    if (fallback) return *fallback;
    throw ParseError(what + ": missing parameter '" + key + "'");
}

void no_params(const Head& h) {
    if (!h.params.empty()) throw ParseError(h.name + " takes no parameters");
}

template <class T>
std::vector<std::pair<double, T>> inline_pairs(const std::string& text, const std::string& what) {
    std::vector<std::pair<double, T>> out;
    for (const auto& item : io::split(text, ';')) {
        const auto slash = item.find('/');
        if (slash == std::string::npos) throw ParseError(what + ": knot '" + item + "' is not a/b");
        out.emplace_back(parse_number(std::string_view(item).substr(0, slash)),
                         parse_number(std::string_view(item).substr(slash + 1)));
    }
    return out;
}

// operands of product/minimum: a segment with ':' or '(' or without '=' starts a new one
std::vector<std::string> operands(const std::string& arg) {
    std::vector<std::string> out;
    for (const auto& seg : split_top(arg, ',')) {
        const bool starts = seg.find(':') != std::string::npos || seg.find('(') != std::string::npos ||
                            seg.find('=') == std::string::npos;
        if (starts || out.empty()) {
            out.push_back(seg);
        } else {
            out.back() += "," + seg;
        }
    }
    return out;
}

}  // namespace

// -- distributions --------------------------------------------------------------

Distribution parse_distribution(std::string_view s) {
    const auto h = split_head(s);
    const auto& n = h.name;
    if (h.arg) {
        if (n == "negated") return Distribution::negated(parse_distribution(*h.arg));
        if (n == "product" || n == "minimum" || n == "max" || n == "min") {
            const auto ops = operands(*h.arg);
            if (ops.size() != 2) throw ParseError(n + "(...) needs exactly two distributions");
            auto a = parse_distribution(ops[0]);
            auto b = parse_distribution(ops[1]);
            return (n == "product" || n == "max") ? Distribution::product(a, b) : Distribution::minimum(a, b);
        }
        throw ParseError("unknown distribution '" + n + "(...)'");
    }
    if (n == "uniform") {
        const auto p = numeric(h.params, {"a", "b"}, n);
        return Distribution::uniform(get(p, "a", n, 0.0), get(p, "b", n, 1.0));
    }
    if (n == "exp" || n == "exponential") {
        const auto p = numeric(h.params, {"rate"}, n);
        return Distribution::exponential(get(p, "rate", n));
    }
    if (n == "powerfn") {
        const auto p = numeric(h.params, {"k"}, n);
        return Distribution::power_function(get(p, "k", n));
    }
    if (n == "efgm-fu") {
        const auto p = numeric(h.params, {"a"}, n);
        return Distribution::efgm_margin(get(p, "a", n));
    }
    if (n == "efgm-g1") {
        const auto p = numeric(h.params, {"a"}, n);
        return Distribution::efgm_shock(get(p, "a", n));
    }
    if (n == "table") {
        const auto kv = keyed(h.params, {"mode", "file", "knots"}, n);
        const auto mode_s = find_key(kv, "mode").value_or("step");
        Interpolation mode;
        if (mode_s == "step") {
            mode = Interpolation::Step;
        } else if (mode_s == "linear") {
            mode = Interpolation::Linear;
        } else {
            throw ParseError("table: mode must be step or linear");
        }
        if (auto f = find_key(kv, "file")) return Distribution::load_csv(*f, mode);
        if (auto k = find_key(kv, "knots")) {
            std::vector<Knot> knots;
            for (const auto& [x, p] : inline_pairs<double>(*k, n)) knots.push_back({x, p});
            return Distribution::tabulated(std::move(knots), mode);
        }
        throw ParseError("table: needs file= or knots=");
    }
    if (n == "custom") throw ParseError("custom distributions have no textual form");
    throw ParseError("unknown distribution '" + n + "'");
}

// -- generators -----------------------------------------------------------------

namespace {

Generator parse_generator_raw(std::string_view s, GeneratorClass cls);

Generator parse_long_form(std::string_view s, GeneratorClass cls) {
    // family=<name>;params=<k=v,...>
    const auto semi = s.find(';');
    auto fam = trim(s.substr(7, semi == std::string_view::npos ? std::string_view::npos : semi - 7));
    std::string params;
    if (semi != std::string_view::npos) {
        auto rest = trim(s.substr(semi + 1));
        if (rest.substr(0, 7) != "params=") throw ParseError("expected 'params=' after family");
        params = std::string(trim(rest.substr(7)));
    }
    std::string shortform(fam);
    if (!params.empty()) shortform += ":" + params;
    return parse_generator_raw(shortform, cls);
}

Generator parse_generator_raw(std::string_view s, GeneratorClass cls) {
    const auto t = trim(s);
    if (t.substr(0, 7) == "family=") return parse_long_form(t, cls);
    const auto h = split_head(t);
    const auto& n = h.name;
    if (h.arg) {
        if (n == "reflect") {
            no_params(h);
            return Generator::affine(parse_generator_raw(*h.arg, cls), true, 1.0, 0.0, 0.0, cls);
        }
        if (n == "hat-to-f") {
            no_params(h);
            return hat_to_f(parse_generator_raw(*h.arg, GeneratorClass::MarshallF)).with_class(cls);
        }
        if (n == "affine") {
            const auto p = numeric(h.params, {"reflect", "scale", "slope", "offset"}, n);
            return Generator::affine(parse_generator_raw(*h.arg, cls), get(p, "reflect", n, 0.0) != 0.0,
                                     get(p, "scale", n, 1.0), get(p, "slope", n, 0.0), get(p, "offset", n, 0.0),
                                     cls);
        }
        if (n == "shock") {
            const auto kv = keyed(*h.arg, {"comp", "margin", "relation"}, n);
            ShockGeneratorOptions o;
            o.cls = cls;
            const auto rel = find_key(kv, "relation").value_or("max");
            if (rel == "max") {
                o.relation = MarginRelation::Max;
            } else if (rel == "min") {
                o.relation = MarginRelation::Min;
            } else {
                throw ParseError("shock: relation must be max or min");
            }
            return generator_from_shocks(parse_distribution(require_key(kv, "comp", n)),
                                         parse_distribution(require_key(kv, "margin", n)), o);
        }
        throw ParseError("unknown generator '" + n + "(...)'");
    }
    if (n == "identity" || n == "id") {
        no_params(h);
        return Generator::identity(cls);
    }
    if (n == "one") {
        no_params(h);
        return Generator::constant_one().with_class(cls);
    }
    if (n == "power") {
        const auto p = numeric(h.params, {"alpha"}, n);
        return Generator::power(get(p, "alpha", n)).with_class(cls);
    }
    if (n == "twoparam") {
        const auto p = numeric(h.params, {"alpha", "beta"}, n);
        return Generator::two_param(get(p, "alpha", n), get(p, "beta", n)).with_class(cls);
    }
    if (n == "efgm-hat") {
        const auto p = numeric(h.params, {"a"}, n);
        return Generator::efgm_hat(get(p, "a", n)).with_class(cls);
    }
    if (n == "efgm") {
        const auto p = numeric(h.params, {"a"}, n);
        return Generator::efgm(get(p, "a", n)).with_class(cls);
    }
    if (n == "ramp") {
        const auto p = numeric(h.params, {"slope"}, n);
        return Generator::ramp(get(p, "slope", n)).with_class(cls);
    }
    if (n == "poly") {
        std::vector<std::string> keys;
        for (int i = 0; i < 32; ++i) keys.push_back("c" + std::to_string(i));
        const auto p = numeric(h.params, keys, n);
        if (p.empty()) throw ParseError("poly: needs coefficients c0=..,c1=..");
        std::size_t degree = 0;
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (p.count(keys[i])) degree = i;
        }
        std::vector<double> c(degree + 1, 0.0);
        for (std::size_t i = 0; i <= degree; ++i) c[i] = get(p, keys[i], n, 0.0);
        return Generator::polynomial(std::move(c), cls);
    }
    if (n == "pl") {
        const auto kv = keyed(h.params, {"file", "knots"}, n);
        if (auto f = find_key(kv, "file")) return Generator::load_csv(*f, cls);
        if (auto k = find_key(kv, "knots")) return Generator::tabulated(inline_pairs<double>(*k, n), cls);
        throw ParseError("pl: needs file= or knots=");
    }
    throw ParseError("unknown generator '" + n + "'");
}

GeneratorClass natural_class(std::string_view s) {
    const auto t = trim(s);
    std::string name;
    if (t.substr(0, 7) == "family=") {
        const auto semi = t.find(';');
        name = std::string(trim(t.substr(7, semi == std::string_view::npos ? std::string_view::npos : semi - 7)));
    } else {
        name = split_head(t).name;
    }
    if (name == "power" || name == "twoparam" || name == "efgm" || name == "hat-to-f") return GeneratorClass::RmmF;
    return GeneratorClass::MarshallF;
}

}  // namespace

Generator parse_generator(std::string_view s, std::optional<GeneratorClass> cls) {
    return parse_generator_raw(s, cls.value_or(natural_class(s)));
}

// -- copulas ----------------------------------------------------------------------

Copula parse_copula(std::string_view s) {
    const auto h = split_head(s);
    const auto& n = h.name;
    if (h.arg) {
        no_params(h);
        const auto inner = parse_copula(*h.arg);
        if (n == "survival") return survival(inner);
        if (n == "sigma1") return sigma1(inner);
        if (n == "sigma2") return sigma2(inner);
        if (n == "rmm" || n == "smm" || n == "normalize") {
            auto c = normalize(inner);
            const auto want = n == "rmm" ? Copula::Family::Rmm : Copula::Family::Smm;
            if (n != "normalize" && c.family() != want) {
                throw ParseError(n + "(...): " + inner.describe() + " has no " + n + " form");
            }
            return c;
        }
        throw ParseError("unknown copula transform '" + n + "'");
    }
    if (n == "frechet-w" || n == "w") {
        no_params(h);
        return Copula::frechet_w();
    }
    if (n == "frechet-m" || n == "m") {
        no_params(h);
        return Copula::frechet_m();
    }
    if (n == "independence" || n == "pi") {
        no_params(h);
        return Copula::independence();
    }
    if (n == "efgm") {
        const auto p = numeric(h.params, {"a"}, n);
        return Copula::efgm(get(p, "a", n));
    }
    if (n == "exprmm") {
        const auto p = numeric(h.params, {"l1", "l2", "m1", "m2"}, n);
        return Copula::exponential_rmm(get(p, "l1", n), get(p, "l2", n), get(p, "m1", n), get(p, "m2", n));
    }
    if (n == "exprmm-ab") {
        const auto p = numeric(h.params, {"alpha", "beta"}, n);
        return Copula::exponential_rmm_ab(get(p, "alpha", n), get(p, "beta", n));
    }
    struct PairForm {
        const char* a;
        const char* b;
        GeneratorClass ca, cb;
    };
    static const std::map<std::string, PairForm> forms{
        {"marshall", {"phi", "psi", GeneratorClass::MarshallF, GeneratorClass::MarshallF}},
        {"maxmin", {"phi", "psi", GeneratorClass::MarshallF, GeneratorClass::MaxminPsi}},
        {"rmm", {"f", "g", GeneratorClass::RmmF, GeneratorClass::RmmF}},
        {"smm", {"h", "k", GeneratorClass::SmmH, GeneratorClass::SmmH}},
    };
    if (auto it = forms.find(n); it != forms.end()) {
        const auto& f = it->second;
        const auto kv = keyed(h.params, {f.a, f.b}, n);
        const auto ga = parse_generator(require_key(kv, f.a, n), f.ca);
        const auto gb = parse_generator(require_key(kv, f.b, n), f.cb);
        if (n == "marshall") return Copula::marshall(ga, gb);
        if (n == "maxmin") return Copula::maxmin(ga, gb);
        if (n == "rmm") return Copula::rmm(ga, gb);
        return Copula::smm(ga, gb);
    }
    throw ParseError("unknown copula '" + n + "'");
}

// -- models -----------------------------------------------------------------------

Coupling parse_coupling(std::string_view s) {
    const auto t = trim(s);
    if (t == "comonotonic" || t == "como") return Coupling::Comonotonic;
    if (t == "countermonotonic" || t == "counter") return Coupling::Countermonotonic;
    if (t == "shared" || t == "sharedz") return Coupling::SharedZ;
    throw ParseError("unknown coupling '" + std::string(t) + "' (comonotonic, countermonotonic, shared)");
}

Combiner parse_combiner(std::string_view s) {
    const auto t = trim(s);
    if (t == "maxmax") return Combiner::MaxMax;
    if (t == "minmin") return Combiner::MinMin;
    if (t == "maxmin") return Combiner::MaxMin;
    throw ParseError("unknown combiner '" + std::string(t) + "' (maxmax, minmin, maxmin)");
}

ShockModel parse_model(std::string_view s) {
    const auto h = split_head(s);
    const auto& n = h.name;
    const std::string text(trim(s));
    if (h.arg) throw ParseError("unknown model '" + n + "(...)'");
    if (n == "exp-rmm") {
        const auto p = numeric(h.params, {"l1", "l2", "m1", "m2"}, n);
        auto m = ShockModel::rmm(Distribution::power_function(get(p, "l1", n)),
                                 Distribution::power_function(get(p, "l2", n)),
                                 Distribution::power_function(get(p, "m1", n)),
                                 Distribution::power_function(get(p, "m2", n)));
        m.descriptor = text;
        return m;
    }
    if (n == "efgm-model") {
        const auto p = numeric(h.params, {"a"}, n);
        const double a = get(p, "a", n);
        auto fx = Distribution::uniform();
        auto g = Distribution::efgm_shock(a);
        auto m = ShockModel::rmm(fx, fx, g, g);
        m.descriptor = text;
        return m;
    }
    if (n == "maxmin") {
        const auto kv = keyed(h.params, {"Fx", "Fy", "G"}, n);
        return ShockModel::maxmin(parse_distribution(require_key(kv, "Fx", n)),
                                  parse_distribution(require_key(kv, "Fy", n)),
                                  parse_distribution(require_key(kv, "G", n)));
    }
    if (n == "marshall-max" || n == "rmm-max" || n == "smm-min" || n == "model") {
        const auto kv = keyed(h.params, {"Fx", "Fy", "G1", "G2", "coupling", "combiner"}, n);
        auto fx = parse_distribution(require_key(kv, "Fx", n));
        auto fy = parse_distribution(require_key(kv, "Fy", n));
        auto g1 = parse_distribution(require_key(kv, "G1", n));
        auto g2 = parse_distribution(require_key(kv, "G2", n));
        ShockModel m = n == "marshall-max" ? ShockModel::marshall(fx, fy, g1, g2)
                       : n == "smm-min"    ? ShockModel::smm(fx, fy, g1, g2)
                                           : ShockModel::rmm(fx, fy, g1, g2);
        if (auto c = find_key(kv, "coupling")) m.coupling = parse_coupling(*c);
        if (auto c = find_key(kv, "combiner")) m.combiner = parse_combiner(*c);
        return m;
    }
    throw ParseError("unknown model '" + n + "'");
}

}  // namespace shockcop::descriptors
