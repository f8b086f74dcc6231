#include "mmheat/csv.hpp"
#include "mmheat/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mmheat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double table_tail_exponent(const TableProfile& t) {
    const std::size_t n = t.s.size();
    return -std::log(t.v[n - 1] / t.v[n - 2]) / std::log(t.s[n - 1] / t.s[n - 2]);
}

double table_value(const TableProfile& t, double s) {
    const std::size_t n = t.s.size();
    if (s >= t.s.back()) {
        if (s == t.s.back()) return t.v.back();
        return t.v.back() * std::pow(s / t.s.back(), -table_tail_exponent(t));
    }
    const auto it = std::upper_bound(t.s.begin(), t.s.end(), s);
    const std::size_t hi = static_cast<std::size_t>(it - t.s.begin());
    const std::size_t lo = hi - 1;
    (void)n;
    const double w = (s - t.s[lo]) / (t.s[hi] - t.s[lo]);
    return t.v[lo] + w * (t.v[hi] - t.v[lo]);
}

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

}  // namespace

Profile Profile::gauss(double C, double c, double gamma) {
    if (!positive_finite(C) || !positive_finite(c) || !positive_finite(gamma))
        throw std::invalid_argument("gauss profile: C, c, gamma must be positive");
    return Profile(GaussType{C, c, gamma});
}

Profile Profile::cauchy(double C, double gamma) {
    if (!positive_finite(C) || !positive_finite(gamma))
        throw std::invalid_argument("cauchy profile: C, gamma must be positive");
    return Profile(CauchyType{C, gamma});
}

Profile Profile::table(std::vector<double> s, std::vector<double> v) {
    if (s.size() != v.size()) throw std::invalid_argument("table profile: size mismatch");
    if (s.size() < 3) throw std::invalid_argument("table profile: need at least 3 samples");
    if (s.front() != 0.0) throw std::invalid_argument("table profile: first sample must be at s = 0");
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!std::isfinite(s[i])) throw std::invalid_argument("table profile: non-finite abscissa");
        if (!positive_finite(v[i])) throw std::invalid_argument("table profile: values must be positive");
        if (i > 0 && !(s[i] > s[i - 1])) throw std::invalid_argument("table profile: abscissae must increase");
        if (i > 0 && v[i] > v[i - 1]) throw std::invalid_argument("table profile: values must be non-increasing");
    }
    return Profile(TableProfile{std::move(s), std::move(v)});
}

double Profile::operator()(double s) const {
    if (!(s >= 0.0)) throw std::invalid_argument("profile: s must be nonnegative");
    return std::visit(overloaded{
                          [s](const GaussType& g) { return g.C * std::exp(-g.c * std::pow(s, g.gamma)); },
                          [s](const CauchyType& c) { return c.C * std::pow(1.0 + s, -c.gamma); },
                          [s](const TableProfile& t) { return table_value(t, s); },
                      },
                      family_);
}

double Profile::log_value(double s) const {
    if (!(s >= 0.0)) throw std::invalid_argument("profile: s must be nonnegative");
    return std::visit(overloaded{
                          [s](const GaussType& g) { return std::log(g.C) - g.c * std::pow(s, g.gamma); },
                          [s](const CauchyType& c) { return std::log(c.C) - c.gamma * std::log1p(s); },
                          [s](const TableProfile& t) {
                              if (s > t.s.back())
                                  return std::log(t.v.back()) - table_tail_exponent(t) * std::log(s / t.s.back());
                              return std::log(table_value(t, s));
                          },
                      },
                      family_);
}

std::string Profile::describe() const {
    return std::visit(overloaded{
                          [](const GaussType& g) {
                              return "gauss(C=" + csv::fmt(g.C) + ";c=" + csv::fmt(g.c) + ";gamma=" + csv::fmt(g.gamma) +
                                     ")";
                          },
                          [](const CauchyType& c) {
                              return "cauchy(C=" + csv::fmt(c.C) + ";gamma=" + csv::fmt(c.gamma) + ")";
                          },
                          [](const TableProfile& t) { return "table(" + std::to_string(t.s.size()) + " samples)"; },
                      },
                      family_);
}

Profile Profile::scaled(double factor) const {
    if (!positive_finite(factor)) throw std::invalid_argument("profile: scale factor must be positive");
    return std::visit(overloaded{
                          [factor](const GaussType& g) { return Profile::gauss(g.C * factor, g.c, g.gamma); },
                          [factor](const CauchyType& c) { return Profile::cauchy(c.C * factor, c.gamma); },
                          [factor](const TableProfile& t) {
                              auto v = t.v;
                              for (auto& x : v) x *= factor;
                              return Profile::table(t.s, std::move(v));
                          },
                      },
                      family_);
}

TailClass Profile::tail() const {
    return std::visit(overloaded{
                          [](const GaussType& g) { return TailClass{TailClass::Kind::Gauss, g.c, g.gamma, 0.0}; },
                          [](const CauchyType& c) { return TailClass{TailClass::Kind::Power, 0.0, 0.0, c.gamma}; },
                          [](const TableProfile& t) {
                              return TailClass{TailClass::Kind::Power, 0.0, 0.0, table_tail_exponent(t)};
                          },
                      },
                      family_);
}

double Profile::moment(double k) const {
    if (!(k > 0.0)) throw std::invalid_argument("profile moment: order must be positive");
    return std::visit(overloaded{
                          [k](const GaussType& g) {
                              return g.C * std::exp(std::lgamma(k / g.gamma)) / (g.gamma * std::pow(g.c, k / g.gamma));
                          },
                          [k](const CauchyType& c) {
                              if (!(c.gamma > k)) return kInf;
                              return c.C * std::exp(log_beta(k, c.gamma - k));
                          },
                          [k](const TableProfile& t) {
                              const double q = table_tail_exponent(t);
                              if (!(q > k)) return kInf;
                              double sum = 0.0;
                              for (std::size_t i = 0; i + 1 < t.s.size(); ++i) {
                                  const double s0 = t.s[i], s1 = t.s[i + 1];
                                  const double b = (t.v[i + 1] - t.v[i]) / (s1 - s0);
                                  const double a = t.v[i] - b * s0;
                                  sum += a * (std::pow(s1, k) - std::pow(s0, k)) / k +
                                         b * (std::pow(s1, k + 1.0) - std::pow(s0, k + 1.0)) / (k + 1.0);
                              }
                              const double S = t.s.back();
                              sum += t.v.back() * std::pow(S, k) / (q - k);
                              return sum;
                          },
                      },
                      family_);
}

double profile_eval(const Profile& profile, double s) { return profile(s); }

}  // namespace mmheat
