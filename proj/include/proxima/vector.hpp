#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "proxima/errors.hpp"
#include "proxima/real.hpp"

namespace proxima {

/// Point of R^n with value semantics. Arithmetic between vectors of
/// different length throws InputError.
template <Scalar Real>
class BasicVector {
 public:
  BasicVector() = default;
  explicit BasicVector(std::size_t dim) : coords_(dim, Real(0)) {}
  explicit BasicVector(std::vector<Real> coords) : coords_(std::move(coords)) {}
  BasicVector(std::initializer_list<Real> coords) : coords_(coords) {}

  /// Converting constructor between scalar types (double <-> HighPrecision).
  template <Scalar Other>
    requires(!std::is_same_v<Other, Real>)
  explicit BasicVector(const BasicVector<Other>& other) {
    coords_.reserve(other.size());
    for (const auto& c : other.coords()) {
      if constexpr (std::is_same_v<Real, double>) {
        coords_.push_back(to_double(c));
      } else {
        coords_.push_back(Real(c));
      }
    }
  }

  std::size_t size() const { return coords_.size(); }
  const Real& operator[](std::size_t i) const { return coords_[i]; }
  Real& operator[](std::size_t i) { return coords_[i]; }
  std::span<const Real> coords() const { return coords_; }

  BasicVector& operator+=(const BasicVector& rhs) {
    check_same_size(rhs);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += rhs.coords_[i];
    return *this;
  }
  BasicVector& operator-=(const BasicVector& rhs) {
    check_same_size(rhs);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= rhs.coords_[i];
    return *this;
  }
  BasicVector& operator*=(const Real& s) {
    for (auto& c : coords_) c *= s;
    return *this;
  }

  friend BasicVector operator+(BasicVector lhs, const BasicVector& rhs) { return lhs += rhs; }
  friend BasicVector operator-(BasicVector lhs, const BasicVector& rhs) { return lhs -= rhs; }
  friend BasicVector operator*(const Real& s, BasicVector v) { return v *= s; }
  friend bool operator==(const BasicVector&, const BasicVector&) = default;

 private:
  void check_same_size(const BasicVector& rhs) const {
    if (rhs.size() != size()) {
      throw InputError("vector dimension mismatch: " + std::to_string(size()) + " vs " +
                       std::to_string(rhs.size()));
    }
  }

  std::vector<Real> coords_;
};

using Vector = BasicVector<double>;

}  // namespace proxima
