#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "shockcop/copulas.hpp"
#include "shockcop/shock_models.hpp"

namespace shockcop {

namespace rng {

enum Stream : std::uint64_t { X = 0, Y = 1, Z = 2 };

std::uint64_t splitmix64(std::uint64_t x);
/// Uniform on (0,1) as an odd multiple of 2^-53, a pure function of
/// (seed, stream, index); 1 - w is exact.
double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

}  // namespace rng

struct ShockDraw {
    double x, y, z1, z2;
};

/// Shocks of draw `index`: X, Y by quantile transforms of streams X and Y;
/// Z1 = G1^{-1}(w), Z2 = G2^{-1}(w) (comonotonic) or G2^{-1}(1-w)
/// (countermonotonic), w from stream Z.
ShockDraw draw_shocks(const ShockModel& m, std::uint64_t seed, std::uint64_t index);

struct SamplePairs {
    std::vector<double> u, v;
    std::uint64_t seed = 0;
    std::string descriptor;

    std::size_t size() const { return u.size(); }
};

/// n draws of (U,V). Index ranges are split across `workers` threads
/// (0 = hardware concurrency); the result does not depend on the split.
SamplePairs sample_model(const ShockModel& m, std::size_t n, std::uint64_t seed, unsigned workers = 0);

/// Average ranks divided by n.
std::vector<double> normalized_ranks(const std::vector<double>& xs);

/// Rank-based estimator: fraction of pairs whose normalised ranks are both
/// at most (u,v).
class EmpiricalCopula {
public:
    EmpiricalCopula(const std::vector<double>& u, const std::vector<double>& v);
    explicit EmpiricalCopula(const SamplePairs& s) : EmpiricalCopula(s.u, s.v) {}

    double operator()(double u, double v) const;
    std::size_t size() const { return ru_.size(); }
    const std::vector<double>& ru() const { return ru_; }
    const std::vector<double>& rv() const { return rv_; }
    Copula as_copula(std::string name = "sample") const;

private:
    std::vector<double> ru_, rv_;
};

/// max over the grid x grid points (i/(grid-1), j/(grid-1)) of |A - B|.
double sup_distance(const Copula& a, const Copula& b, std::size_t grid);

/// CSV with header comment; columns `u,v` (raw) or `ru,rv` (normalised ranks).
std::string to_csv(const SamplePairs& s, bool ranks = false);

/// Reads pairs from a `u,v` or `ru,rv` CSV.
SamplePairs parse_pairs_csv(std::istream& in);

}  // namespace shockcop
