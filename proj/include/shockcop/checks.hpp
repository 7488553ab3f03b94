#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shockcop/copulas.hpp"
#include "shockcop/distributions.hpp"
#include "shockcop/shock_models.hpp"

namespace shockcop {

struct CheckEntry {
    std::string id;
    bool passed;
    double magnitude;  // worst violation
    double u;          // witness
    double v;
};

struct CheckSuiteReport {
    std::string suite;
    std::vector<CheckEntry> entries;

    bool passed() const;
    void add(CheckEntry e) { entries.push_back(std::move(e)); }
    /// Concatenates entries; suite names joined with '+'.
    CheckSuiteReport& merge(const CheckSuiteReport& other);

    std::string to_text() const;
    /// `check_id,status,magnitude,u,v`
    std::string to_csv() const;
};

struct AxiomOptions {
    std::size_t grid = 101;
    std::size_t rectangles = 10000;
    double tol = 1e-12;
    std::uint64_t seed = 1;
};

/// Groundedness, neutral element, 2-increasingness on random rectangles and
/// the Frechet sandwich.
CheckSuiteReport check_copula_axioms(const Copula& c, const AxiomOptions& opts = {});

struct ModelCheckOptions {
    std::size_t n = 200000;
    std::size_t grid = 21;
    /// Monte Carlo bound; default 4.4 / sqrt(n)
    std::optional<double> eps;
    std::uint64_t seed = 1;
    double analytic_tol = 1e-9;
    unsigned workers = 0;
};

/// (i) joint_cdf = sklar_join(copula, margins) on a grid of margin quantiles,
/// (ii) sup distance between the empirical copula of a sample and the copula.
/// The copula defaults to induced_copula(m); pass `claimed` to test another.
CheckSuiteReport check_model_theorem(const ShockModel& m, const ModelCheckOptions& opts = {},
                                     const std::optional<Copula>& claimed = std::nullopt);

struct ReconstructionCheckOptions {
    std::size_t grid = 1001;
    double tol = 1e-10;
    ChiMap chi = ChiMap::identity();
};

/// Runs the matching reconstruction and reports its conditions; failed
/// preconditions become failing entries.
CheckSuiteReport check_reconstruction(const Copula& c, const Distribution& fu, const Distribution& fv,
                                      const ReconstructionCheckOptions& opts = {});

}  // namespace shockcop
