#pragma once

#include <cmath>

namespace confham {

/// Forward-mode scalar: a value plus one directional derivative.
/// Nesting (Dual<Dual<double>>) yields second directional derivatives.
template <typename T>
struct Dual {
    T v{};  ///< value
    T d{};  ///< derivative along the seeded direction

    Dual() = default;
    Dual(double value) : v(value), d(0.0) {}  // NOLINT: constants promote implicitly
    Dual(T value, T deriv) : v(std::move(value)), d(std::move(deriv)) {}
};

using Dual1 = Dual<double>;
using Dual2 = Dual<Dual<double>>;

/// Innermost double of a (possibly nested) dual.
inline double value(double x) { return x; }
template <typename T>
double value(const Dual<T>& x) { return value(x.v); }

template <typename T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <typename T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <typename T>
Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }
template <typename T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
    return {a.v * b.v, a.d * b.v + a.v * b.d};
}
template <typename T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
    T q = a.v / b.v;
    return {q, (a.d - q * b.d) / b.v};
}

template <typename T> Dual<T> operator+(const Dual<T>& a, double b) { return a + Dual<T>(b); }
template <typename T> Dual<T> operator+(double a, const Dual<T>& b) { return Dual<T>(a) + b; }
template <typename T> Dual<T> operator-(const Dual<T>& a, double b) { return a - Dual<T>(b); }
template <typename T> Dual<T> operator-(double a, const Dual<T>& b) { return Dual<T>(a) - b; }
template <typename T> Dual<T> operator*(const Dual<T>& a, double b) { return a * Dual<T>(b); }
template <typename T> Dual<T> operator*(double a, const Dual<T>& b) { return Dual<T>(a) * b; }
template <typename T> Dual<T> operator/(const Dual<T>& a, double b) { return a / Dual<T>(b); }
template <typename T> Dual<T> operator/(double a, const Dual<T>& b) { return Dual<T>(a) / b; }

template <typename T>
Dual<T>& operator+=(Dual<T>& a, const Dual<T>& b) { a = a + b; return a; }
template <typename T>
Dual<T>& operator-=(Dual<T>& a, const Dual<T>& b) { a = a - b; return a; }
template <typename T>
Dual<T>& operator*=(Dual<T>& a, const Dual<T>& b) { a = a * b; return a; }

using std::atan2;
using std::cos;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;

template <typename T>
Dual<T> sqrt(const Dual<T>& a) {
    T r = sqrt(a.v);
    return {r, a.d / (2.0 * r)};
}

template <typename T>
Dual<T> sin(const Dual<T>& a) { return {sin(a.v), cos(a.v) * a.d}; }
template <typename T>
Dual<T> cos(const Dual<T>& a) { return {cos(a.v), -sin(a.v) * a.d}; }
template <typename T>
Dual<T> exp(const Dual<T>& a) { T e = exp(a.v); return {e, e * a.d}; }
template <typename T>
Dual<T> log(const Dual<T>& a) { return {log(a.v), a.d / a.v}; }

/// Power with a constant real exponent (the only power the family needs).
template <typename T>
Dual<T> pow(const Dual<T>& a, double e) {
    return {pow(a.v, e), e * pow(a.v, e - 1.0) * a.d};
}

/// Two-argument arctangent; derivative of atan2(y, x).
template <typename T>
Dual<T> atan2(const Dual<T>& y, const Dual<T>& x) {
    T den = x.v * x.v + y.v * y.v;
    return {atan2(y.v, x.v), (x.v * y.d - y.v * x.d) / den};
}

}  // namespace confham
