#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "shockcop/copulas.hpp"
#include "shockcop/distributions.hpp"

namespace shockcop {

enum class Coupling { Comonotonic, Countermonotonic, SharedZ };
enum class Combiner { MaxMax, MinMin, MaxMin };

std::string to_string(Coupling c);
std::string to_string(Combiner c);

/// Idiosyncratic shocks X ~ fx, Y ~ fy and systemic shocks Z1 ~ g1, Z2 ~ g2
/// (for SharedZ both hold the law G of the single shock Z).
///
///   MaxMax + Comonotonic      -> Marshall
///   MaxMax + Countermonotonic -> RMM
///   MinMin + Countermonotonic -> SMM
///   MaxMin + SharedZ          -> maxmin (U = max{X,Z}, V = min{Y,Z})
struct ShockModel {
    Distribution fx, fy, g1, g2;
    Coupling coupling;
    Combiner combiner;
    std::string descriptor;  // optional; describe() builds one when empty

    static ShockModel marshall(Distribution fx, Distribution fy, Distribution g1, Distribution g2);
    static ShockModel rmm(Distribution fx, Distribution fy, Distribution g1, Distribution g2);
    static ShockModel smm(Distribution fx, Distribution fy, Distribution g1, Distribution g2);
    static ShockModel maxmin(Distribution fx, Distribution fy, Distribution g);

    std::string describe() const;
};

bool is_legal(Coupling c, Combiner k);
/// Throws IllegalConfiguration for combinations without a copula family.
void check_legal(const ShockModel& m);

/// (F_U, F_V).
std::pair<Distribution, Distribution> margins(const ShockModel& m);

/// P[U <= x, V <= y] in closed form.
double joint_cdf(const ShockModel& m, ExtendedReal x, ExtendedReal y);

/// Copula of (U,V), built from generators induced by the shocks.
Copula induced_copula(const ShockModel& m);

/// Increasing map used to align the two margins in the Marshall reconstruction.
struct ChiMap {
    std::function<double(double)> forward;
    std::function<double(double)> inverse;
    std::string name;

    static ChiMap identity();
    /// x -> a x + b, a > 0.
    static ChiMap affine(double a, double b);
};

struct ReconstructOptions {
    std::size_t grid = 1001;
    /// points per axis of the joint-CDF identity check (subsampled from grid)
    std::size_t joint_grid = 101;
    double tol = 1e-10;
    bool verify = true;
    ChiMap chi = ChiMap::identity();
};

struct ConditionResult {
    std::string id;
    bool passed;
    double magnitude;  // worst deviation seen
    double x;          // witness
    double y;
};

struct Reconstruction {
    ShockModel model;
    std::vector<ConditionResult> conditions;
    std::vector<double> grid;

    bool passed() const;
};

/// Grid of `n` points spanning quantiles 1e-6 .. 1-1e-6 of both margins,
/// padded by 5% on each side.
std::vector<double> check_grid(const Distribution& fu, const Distribution& fv, std::size_t n);

/// Max/max comonotonic model realising a Marshall copula with margins F_U,
/// F_V. Throws ContractViolation naming the failed assumption ("assumption-a",
/// "assumption-b", "assumption-c", "division") with a witness x.
Reconstruction reconstruct_marshall(const Copula& c, const Distribution& fu, const Distribution& fv,
                                    const ReconstructOptions& opts = {});

/// Max/max countermonotonic model realising an RMM copula. Throws
/// ContractViolation("x0-hypothesis") when no grid x has F_U(x), F_V(x) in (0,1).
Reconstruction reconstruct_rmm(const Copula& c, const Distribution& fu, const Distribution& fv,
                               const ReconstructOptions& opts = {});

/// Min/min countermonotonic model realising an SMM copula, through the RMM
/// reconstruction of (-U,-V).
Reconstruction reconstruct_smm(const Copula& c, const Distribution& fu, const Distribution& fv,
                               const ReconstructOptions& opts = {});

/// Dispatches on the (normalised) family of `c`.
Reconstruction reconstruct(const Copula& c, const Distribution& fu, const Distribution& fv,
                           const ReconstructOptions& opts = {});

}  // namespace shockcop
