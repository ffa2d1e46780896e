// Copyright 2026 The AWES-OCP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Forward-mode dual numbers for exact first and second derivatives of the
// model functions. A Dual<T, N> carries a value and N directional
// derivatives; nesting Dual<Dual<double, N>, 1> yields second derivatives.

#ifndef AWES_DUAL_HPP_
#define AWES_DUAL_HPP_

#include <array>
#include <cmath>
#include <type_traits>

#include <Eigen/Core>

namespace awes {

template <typename T, int N>
struct Dual {
  using value_type = T;
  static constexpr int kSize = N;

  T v{};
  std::array<T, N> d{};

  Dual() : v(0.0) { d.fill(T(0.0)); }
  Dual(double x) : v(x) { d.fill(T(0.0)); }  // NOLINT: implicit by design of AD
  Dual(const T& x, const std::array<T, N>& g) : v(x), d(g) {}

  template <typename U = T, typename = std::enable_if_t<!std::is_same_v<U, double>>>
  explicit Dual(const T& x) : v(x) {
    d.fill(T(0.0));
  }

  // Seeds the i-th derivative direction.
  static Dual variable(const T& x, int i) {
    Dual r(x, zero_grad());
    r.d[static_cast<std::size_t>(i)] = T(1.0);
    return r;
  }

  static std::array<T, N> zero_grad() {
    std::array<T, N> g;
    g.fill(T(0.0));
    return g;
  }

  Dual& operator+=(const Dual& b) {
    v += b.v;
    for (int i = 0; i < N; ++i) d[i] += b.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& b) {
    v -= b.v;
    for (int i = 0; i < N; ++i) d[i] -= b.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& b) {
    for (int i = 0; i < N; ++i) d[i] = d[i] * b.v + v * b.d[i];
    v *= b.v;
    return *this;
  }
  Dual& operator/=(const Dual& b) {
    *this = *this / b;
    return *this;
  }
  Dual& operator+=(double b) {
    v += b;
    return *this;
  }
  Dual& operator-=(double b) {
    v -= b;
    return *this;
  }
  Dual& operator*=(double b) {
    v *= b;
    for (int i = 0; i < N; ++i) d[i] *= b;
    return *this;
  }
  Dual& operator/=(double b) { return *this *= (1.0 / b); }

  friend Dual operator-(const Dual& a) {
    Dual r(a);
    r.v = -r.v;
    for (int i = 0; i < N; ++i) r.d[i] = -r.d[i];
    return r;
  }
  friend Dual operator+(const Dual& a) { return a; }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(const Dual& a, const Dual& b) {
    Dual r(a.v * b.v, zero_grad());
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    return r;
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    const T inv = T(1.0) / b.v;
    const T q = a.v * inv;
    Dual r(q, zero_grad());
    for (int i = 0; i < N; ++i) r.d[i] = (a.d[i] - q * b.d[i]) * inv;
    return r;
  }

  friend Dual operator+(Dual a, double b) { return a += b; }
  friend Dual operator+(double b, Dual a) { return a += b; }
  friend Dual operator-(Dual a, double b) { return a -= b; }
  friend Dual operator-(double b, const Dual& a) {
    Dual r = -a;
    r.v += b;
    return r;
  }
  friend Dual operator*(Dual a, double b) { return a *= b; }
  friend Dual operator*(double b, Dual a) { return a *= b; }
  friend Dual operator/(Dual a, double b) { return a *= (1.0 / b); }
  friend Dual operator/(double b, const Dual& a) {
    const T inv = T(1.0) / a.v;
    const T q = b * inv;
    Dual r(q, zero_grad());
    for (int i = 0; i < N; ++i) r.d[i] = -q * inv * a.d[i];
    return r;
  }

  friend bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
  friend bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
  friend bool operator<=(const Dual& a, const Dual& b) { return a.v <= b.v; }
  friend bool operator>=(const Dual& a, const Dual& b) { return a.v >= b.v; }
  friend bool operator==(const Dual& a, const Dual& b) { return a.v == b.v; }
  friend bool operator!=(const Dual& a, const Dual& b) { return a.v != b.v; }
  friend bool operator<(const Dual& a, double b) { return a.v < b; }
  friend bool operator>(const Dual& a, double b) { return a.v > b; }
  friend bool operator<=(const Dual& a, double b) { return a.v <= b; }
  friend bool operator>=(const Dual& a, double b) { return a.v >= b; }
  friend bool operator<(double a, const Dual& b) { return a < b.v; }
  friend bool operator>(double a, const Dual& b) { return a > b.v; }
};

template <typename T>
struct is_dual : std::false_type {};
template <typename T, int N>
struct is_dual<Dual<T, N>> : std::true_type {};

// Innermost real value of a (possibly nested) dual number.
inline double value_of(double x) { return x; }
template <typename T, int N>
double value_of(const Dual<T, N>& x) {
  return value_of(x.v);
}

namespace detail {
// f(a) with f(a.v) = value, f'(a.v) = slope.
template <typename T, int N>
Dual<T, N> chain(const Dual<T, N>& a, const T& value, const T& slope) {
  Dual<T, N> r(value, Dual<T, N>::zero_grad());
  for (int i = 0; i < N; ++i) r.d[i] = slope * a.d[i];
  return r;
}
}  // namespace detail

template <typename T, int N>
Dual<T, N> sin(const Dual<T, N>& a) {
  using std::cos;
  using std::sin;
  return detail::chain(a, T(sin(a.v)), T(cos(a.v)));
}
template <typename T, int N>
Dual<T, N> cos(const Dual<T, N>& a) {
  using std::cos;
  using std::sin;
  return detail::chain(a, T(cos(a.v)), T(-sin(a.v)));
}
template <typename T, int N>
Dual<T, N> tan(const Dual<T, N>& a) {
  using std::tan;
  const T t = tan(a.v);
  return detail::chain(a, t, T(1.0 + t * t));
}
template <typename T, int N>
Dual<T, N> exp(const Dual<T, N>& a) {
  using std::exp;
  const T e = exp(a.v);
  return detail::chain(a, e, e);
}
template <typename T, int N>
Dual<T, N> log(const Dual<T, N>& a) {
  using std::log;
  return detail::chain(a, T(log(a.v)), T(1.0 / a.v));
}
template <typename T, int N>
Dual<T, N> sqrt(const Dual<T, N>& a) {
  using std::sqrt;
  const T s = sqrt(a.v);
  return detail::chain(a, s, T(0.5 / s));
}
template <typename T, int N>
Dual<T, N> atan(const Dual<T, N>& a) {
  using std::atan;
  return detail::chain(a, T(atan(a.v)), T(1.0 / (1.0 + a.v * a.v)));
}
template <typename T, int N>
Dual<T, N> asin(const Dual<T, N>& a) {
  using std::asin;
  using std::sqrt;
  return detail::chain(a, T(asin(a.v)), T(1.0 / sqrt(1.0 - a.v * a.v)));
}
template <typename T, int N>
Dual<T, N> acos(const Dual<T, N>& a) {
  using std::acos;
  using std::sqrt;
  return detail::chain(a, T(acos(a.v)), T(-1.0 / sqrt(1.0 - a.v * a.v)));
}
template <typename T, int N>
Dual<T, N> atan2(const Dual<T, N>& y, const Dual<T, N>& x) {
  using std::atan2;
  const T inv = T(1.0) / (x.v * x.v + y.v * y.v);
  Dual<T, N> r(T(atan2(y.v, x.v)), Dual<T, N>::zero_grad());
  for (int i = 0; i < N; ++i) r.d[i] = (x.v * y.d[i] - y.v * x.d[i]) * inv;
  return r;
}
template <typename T, int N>
Dual<T, N> abs(const Dual<T, N>& a) {
  return a.v < 0.0 ? -a : a;
}
template <typename T, int N>
Dual<T, N> pow(const Dual<T, N>& a, double p) {
  using std::pow;
  return detail::chain(a, T(pow(a.v, p)), T(p * pow(a.v, p - 1.0)));
}
template <typename T, int N>
bool isfinite(const Dual<T, N>& a) {
  using std::isfinite;
  return isfinite(a.v);
}

}  // namespace awes

namespace Eigen {

template <typename T, int N>
struct NumTraits<awes::Dual<T, N>> : NumTraits<double> {
  using Real = awes::Dual<T, N>;
  using NonInteger = awes::Dual<T, N>;
  using Nested = awes::Dual<T, N>;
  using Literal = awes::Dual<T, N>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1 + N,
    AddCost = 1 + N,
    MulCost = 1 + 2 * N,
  };
};

template <typename T, int N, typename BinaryOp>
struct ScalarBinaryOpTraits<awes::Dual<T, N>, double, BinaryOp> {
  using ReturnType = awes::Dual<T, N>;
};
template <typename T, int N, typename BinaryOp>
struct ScalarBinaryOpTraits<double, awes::Dual<T, N>, BinaryOp> {
  using ReturnType = awes::Dual<T, N>;
};

}  // namespace Eigen

#endif  // AWES_DUAL_HPP_
