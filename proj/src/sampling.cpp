#include "shockcop/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <istream>
#include <memory>
#include <numeric>
#include <thread>

#include "shockcop/csv.hpp"
#include "shockcop/errors.hpp"

namespace shockcop {

namespace rng {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const std::uint64_t h = splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
    const std::uint64_t k = h >> 12;
    return (static_cast<double>(k) + 0.5) * 0x1p-52;
}

}  // namespace rng

namespace {

double finite_quantile(const Distribution& d, double w, const char* which) {
    const auto q = d.quantile(w);
    if (!q.is_finite()) {
        throw DomainError(std::string("quantile of ") + which + " is infinite at interior level " +
                          io::format_number(w) + " (malformed CDF: " + d.describe() + ")");
    }
    return q.value();
}

}  // namespace

ShockDraw draw_shocks(const ShockModel& m, std::uint64_t seed, std::uint64_t index) {
    check_legal(m);
    const double wx = rng::uniform(seed, rng::X, index);
    const double wy = rng::uniform(seed, rng::Y, index);
    const double w = rng::uniform(seed, rng::Z, index);
    ShockDraw d{};
    d.x = finite_quantile(m.fx, wx, "F_X");
    d.y = finite_quantile(m.fy, wy, "F_Y");
    d.z1 = finite_quantile(m.g1, w, "G_1");
    switch (m.coupling) {
        case Coupling::Comonotonic: d.z2 = finite_quantile(m.g2, w, "G_2"); break;
        case Coupling::Countermonotonic: d.z2 = finite_quantile(m.g2, 1.0 - w, "G_2"); break;
        case Coupling::SharedZ: d.z2 = d.z1; break;
    }
    return d;
}

SamplePairs sample_model(const ShockModel& m, std::size_t n, std::uint64_t seed, unsigned workers) {
    check_legal(m);
    if (n < 1) throw DomainError("sample size must be at least 1");
    SamplePairs s;
    s.u.resize(n);
    s.v.resize(n);
    s.seed = seed;
    s.descriptor = m.describe();

    auto fill = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const auto d = draw_shocks(m, seed, i);
            switch (m.combiner) {
                case Combiner::MaxMax:
                    s.u[i] = std::max(d.x, d.z1);
                    s.v[i] = std::max(d.y, d.z2);
                    break;
                case Combiner::MinMin:
                    s.u[i] = std::min(d.x, d.z1);
                    s.v[i] = std::min(d.y, d.z2);
                    break;
                case Combiner::MaxMin:
                    s.u[i] = std::max(d.x, d.z1);
                    s.v[i] = std::min(d.y, d.z1);
                    break;
            }
        }
    };

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, (n + 4095) / 4096));
    if (workers <= 1) {
        fill(0, n);
        return s;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t lo = n * w / workers;
            const std::size_t hi = n * (w + 1) / workers;
            pool.emplace_back([&, lo, hi, w] {
                try {
                    fill(lo, hi);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return s;
}

std::vector<double> normalized_ranks(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && xs[idx[j + 1]] == xs[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg / static_cast<double>(n);
        i = j + 1;
    }
    return r;
}

EmpiricalCopula::EmpiricalCopula(const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size()) throw DomainError("empirical copula: u and v differ in length");
    if (u.size() < 2) throw DomainError("empirical copula needs at least two pairs");
    ru_ = normalized_ranks(u);
    rv_ = normalized_ranks(v);
}

double EmpiricalCopula::operator()(double u, double v) const {
    std::size_t count = 0;
    for (std::size_t i = 0; i < ru_.size(); ++i) count += (ru_[i] <= u && rv_[i] <= v);
    return static_cast<double>(count) / static_cast<double>(ru_.size());
}

Copula EmpiricalCopula::as_copula(std::string name) const {
    auto self = std::make_shared<const EmpiricalCopula>(*this);
    return Copula::custom(
        std::move(name), [self](double u, double v) { return (*self)(u, v); }, Copula::Family::Empirical);
}

double sup_distance(const Copula& a, const Copula& b, std::size_t grid) {
    if (grid < 2) throw DomainError("sup_distance needs grid >= 2");
    double worst = 0.0;
    for (std::size_t i = 0; i < grid; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(grid - 1);
        for (std::size_t j = 0; j < grid; ++j) {
            const double v = static_cast<double>(j) / static_cast<double>(grid - 1);
            worst = std::max(worst, std::abs(a(u, v) - b(u, v)));
        }
    }
    return worst;
}

std::string to_csv(const SamplePairs& s, bool ranks) {
    std::string out = io::header_line(s.descriptor, s.seed);
    if (ranks) {
        const auto ru = normalized_ranks(s.u);
        const auto rv = normalized_ranks(s.v);
        out += "ru,rv\n";
        for (std::size_t i = 0; i < ru.size(); ++i) {
            out += io::format_number(ru[i]) + "," + io::format_number(rv[i]) + "\n";
        }
    } else {
        out += "u,v\n";
        for (std::size_t i = 0; i < s.size(); ++i) {
            out += io::format_number(s.u[i]) + "," + io::format_number(s.v[i]) + "\n";
        }
    }
    return out;
}

SamplePairs parse_pairs_csv(std::istream& in) {
    auto csv = io::read_numeric_csv(in);
    const auto& h = csv.header;
    if (h.size() != 2 || !((h[0] == "u" && h[1] == "v") || (h[0] == "ru" && h[1] == "rv"))) {
        throw ParseError("sample CSV header must be 'u,v' or 'ru,rv'");
    }
    SamplePairs s;
    for (const auto& r : csv.rows) {
        s.u.push_back(r[0]);
        s.v.push_back(r[1]);
    }
    for (const auto& c : csv.comments) {
        auto pos = c.find("descriptor=");
        if (pos == std::string::npos) continue;
        auto rest = c.substr(pos + 11);
        auto sp = rest.find(" seed=");
        s.descriptor = rest.substr(0, sp);
        if (sp != std::string::npos) s.seed = std::stoull(rest.substr(sp + 6));
    }
    return s;
}

}  // namespace shockcop
