#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

#include "shockcop/errors.hpp"

namespace shockcop {

/// A real number or one of the sentinels -inf / +inf.
///
/// The sentinels only take part in comparisons. Reading `value()` of a
/// sentinel throws, so no arithmetic can silently produce inf - inf.
class ExtendedReal {
public:
    enum class Kind : std::uint8_t { NegInf, Finite, PosInf };

    // Implicit from double so that finite arguments read naturally. IEEE
    // infinities are mapped onto the sentinels; NaN is rejected.
    ExtendedReal(double v) {  // NOLINT(google-explicit-constructor)
        if (std::isnan(v)) throw DomainError("ExtendedReal: NaN is not an extended real");
        if (std::isinf(v)) {
            kind_ = v > 0 ? Kind::PosInf : Kind::NegInf;
        } else {
            value_ = v;
        }
    }

    static ExtendedReal neg_inf() { return ExtendedReal(Kind::NegInf); }
    static ExtendedReal pos_inf() { return ExtendedReal(Kind::PosInf); }

    Kind kind() const noexcept { return kind_; }
    bool is_finite() const noexcept { return kind_ == Kind::Finite; }
    bool is_neg_inf() const noexcept { return kind_ == Kind::NegInf; }
    bool is_pos_inf() const noexcept { return kind_ == Kind::PosInf; }

    double value() const {
        if (kind_ != Kind::Finite) throw DomainError("ExtendedReal: value() of an infinite sentinel");
        return value_;
    }

    /// IEEE representation, for output and plotting only.
    double to_double() const noexcept {
        switch (kind_) {
            case Kind::NegInf: return -std::numeric_limits<double>::infinity();
            case Kind::PosInf: return std::numeric_limits<double>::infinity();
            case Kind::Finite: break;
        }
        return value_;
    }

    /// Additive inverse; maps -inf <-> +inf.
    ExtendedReal negated() const noexcept {
        switch (kind_) {
            case Kind::NegInf: return pos_inf();
            case Kind::PosInf: return neg_inf();
            case Kind::Finite: break;
        }
        return ExtendedReal(-value_);
    }

    friend std::strong_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b) noexcept {
        if (a.kind_ != b.kind_) return rank(a.kind_) <=> rank(b.kind_);
        if (a.kind_ != Kind::Finite) return std::strong_ordering::equal;
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (a.value_ > b.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) noexcept {
        return (a <=> b) == std::strong_ordering::equal;
    }

    std::string to_string() const;

private:
    explicit ExtendedReal(Kind k) : kind_(k) {}
    static int rank(Kind k) noexcept { return static_cast<int>(k); }

    Kind kind_ = Kind::Finite;
    double value_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, const ExtendedReal& x);

}  // namespace shockcop
