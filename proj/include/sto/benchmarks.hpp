#pragma once

#include "sto/core.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

namespace sto::benchmarks {

// Raw cost expressions. They assume the caller has already checked the
// domain; go through sto::evaluate or the registry objects for that.

inline double eggholder(std::span<const double> x)
{
  const double x1 = x[0];
  const double x2 = x[1];
  return -(x2 + 47.0) * std::sin(std::sqrt(std::abs(x2 + x1 / 2.0 + 47.0))) -
         x1 * std::sin(std::sqrt(std::abs(x1 - (x2 + 47.0))));
}

inline double ripple25(std::span<const double> x)
{
  double f = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    const double u = (x[i] - 0.1) / 0.8;
    const double s = std::sin(5.0 * std::numbers::pi * x[i]);
    const double s2 = s * s;
    f -= std::exp(-2.0 * std::numbers::ln2 * u * u) * s2 * s2 * s2;
  }
  return f;
}

inline double beale(std::span<const double> x)
{
  const double x1 = x[0];
  const double x2 = x[1];
  const double a = 1.5 - x1 + x1 * x2;
  const double b = 2.25 - x1 + x1 * x2 * x2;
  const double c = 2.625 - x1 + x1 * x2 * x2 * x2;
  return a * a + b * b + c * c;
}

/// Rosenbrock valley plus a narrow Gaussian well near (-1, -1).
inline double rosenbrock_modified(std::span<const double> x)
{
  const double x1 = x[0];
  const double x2 = x[1];
  const double valley = x2 - x1 * x1;
  const double r2 = (x1 + 1.0) * (x1 + 1.0) + (x2 + 1.0) * (x2 + 1.0);
  return 74.0 + 100.0 * valley * valley + (1.0 - x1) * (1.0 - x1) - 400.0 * std::exp(-r2 / 0.1);
}

inline double styblinski_tang(std::span<const double> x)
{
  double s = 0.0;
  for (double v : x) {
    const double v2 = v * v;
    s += v2 * v2 - 16.0 * v2 + 5.0 * v;
  }
  return 0.5 * s;
}

/// Carries a 1/2 prefactor relative to the textbook Rastrigin.
inline double rastrigin(std::span<const double> x)
{
  double s = 0.0;
  for (double v : x)
    s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v) + 10.0;
  return 0.5 * s;
}

inline constexpr double styblinski_tang_argmin = -2.903534;
inline constexpr double styblinski_tang_min_per_dim = -39.1661657037;

inline ObjectiveFunction make_eggholder()
{
  return {"eggholder", 2, Bounds::uniform(2, -512.0, 512.0), Vector{512.0, 404.2319},
          -959.64, eggholder};
}

inline ObjectiveFunction make_ripple25()
{
  return {"ripple25", 2, Bounds::uniform(2, 0.0, 1.0), Vector{0.1, 0.1}, -2.0, ripple25};
}

inline ObjectiveFunction make_beale()
{
  return {"beale", 2, Bounds::uniform(2, -4.5, 4.5), Vector{3.0, 0.5}, 0.0, beale};
}

inline ObjectiveFunction make_rosenbrock_modified()
{
  return {"rosenbrock_modified", 2, Bounds::uniform(2, -2.0, 2.0), Vector{-0.9, -0.95}, 34.37,
          rosenbrock_modified};
}

inline ObjectiveFunction make_styblinski_tang(std::size_t n)
{
  if (n < 1)
    throw config_error("styblinski_tang: dimension must be >= 1");
  return {"styblinski_tang", n, Bounds::uniform(n, -5.0, 5.0), Vector(n, styblinski_tang_argmin),
          styblinski_tang_min_per_dim * static_cast<double>(n), styblinski_tang};
}

inline ObjectiveFunction make_rastrigin(std::size_t n)
{
  if (n < 1)
    throw config_error("rastrigin: dimension must be >= 1");
  return {"rastrigin", n, Bounds::uniform(n, -5.12, 5.12), Vector(n, 0.0), 0.0, rastrigin};
}

inline constexpr std::array<std::string_view, 6> names = {
    "eggholder", "ripple25", "beale", "rosenbrock_modified", "styblinski_tang", "rastrigin"};

inline bool is_fixed_2d(std::string_view name)
{
  return name == "eggholder" || name == "ripple25" || name == "beale" ||
         name == "rosenbrock_modified";
}

inline std::string names_list()
{
  std::string out;
  for (auto n : names) {
    if (!out.empty())
      out += ", ";
    out += n;
  }
  return out;
}

/// Registry lookup. `dim` = 0 means the function's default (2).
/// Throws config_error for unknown names or a dimension the function
/// does not support.
inline ObjectiveFunction make(std::string_view name, std::size_t dim = 0)
{
  if (is_fixed_2d(name) && dim != 0 && dim != 2)
    throw config_error(std::string(name) + " is fixed at dimension 2");
  if (name == "eggholder")
    return make_eggholder();
  if (name == "ripple25")
    return make_ripple25();
  if (name == "beale")
    return make_beale();
  if (name == "rosenbrock_modified")
    return make_rosenbrock_modified();
  if (name == "styblinski_tang")
    return make_styblinski_tang(dim == 0 ? 2 : dim);
  if (name == "rastrigin")
    return make_rastrigin(dim == 0 ? 2 : dim);
  throw config_error("unknown function '" + std::string(name) + "'; valid: " + names_list());
}

/// Tolerance to which a registered function reproduces its printed minimum
/// at its printed optimum (both are quoted to a few decimals only).
inline double optimum_tolerance(const ObjectiveFunction& f)
{
  if (f.name == "eggholder" || f.name == "rosenbrock_modified")
    return 1e-2;
  if (f.name == "styblinski_tang")
    return 1e-5 * static_cast<double>(f.dimension);
  return 1e-10;
}

} // namespace sto::benchmarks
