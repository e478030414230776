#pragma once

#include <compare>
#include <limits>

namespace lavlab {

/// Values above this magnitude are reported as +inf.
inline constexpr double infinity_threshold = 1e300;

/// Non-negative extended real used for energies. A single infinity value
/// absorbs every sum (x + inf = inf); NaN is never produced.
class ExtendedReal {
public:
    constexpr ExtendedReal() = default;

    constexpr explicit ExtendedReal(double value)
        : value_(value > infinity_threshold ? std::numeric_limits<double>::infinity() : value) {}

    [[nodiscard]] static constexpr ExtendedReal infinity() {
        return ExtendedReal(std::numeric_limits<double>::infinity());
    }

    [[nodiscard]] constexpr bool is_finite() const noexcept {
        return value_ <= infinity_threshold;
    }
    [[nodiscard]] constexpr double value() const noexcept { return value_; }

    constexpr ExtendedReal& operator+=(ExtendedReal other) noexcept {
        if (!is_finite() || !other.is_finite()) {
            value_ = std::numeric_limits<double>::infinity();
        } else {
            value_ = ExtendedReal(value_ + other.value_).value_;
        }
        return *this;
    }

    friend constexpr ExtendedReal operator+(ExtendedReal lhs, ExtendedReal rhs) noexcept {
        lhs += rhs;
        return lhs;
    }

    friend constexpr auto operator<=>(ExtendedReal lhs, ExtendedReal rhs) noexcept {
        return lhs.value_ <=> rhs.value_;
    }
    friend constexpr bool operator==(ExtendedReal lhs, ExtendedReal rhs) noexcept {
        return lhs.value_ == rhs.value_;
    }

private:
    double value_ = 0.0;
};

}  // namespace lavlab
