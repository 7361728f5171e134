// Copyright 2026 The stratburden Authors
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

// Serializable scalar maps [0, 1] -> R used as building blocks of separable
// and shift-invariant costs.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <variant>
#include <vector>

#include "stratburden/error.hpp"

namespace stratburden {

namespace scalar {

// scale * x^exponent for x >= 0.
struct Power {
  double exponent = 1.0;
  double scale = 1.0;
  bool operator==(const Power&) const = default;
};

// sum_k coefficients[k] * x^k.
struct Polynomial {
  std::vector<double> coefficients;
  bool operator==(const Polynomial&) const = default;
};

// Piecewise linear interpolation through (knots, values). Extrapolates with
// the first and last segments.
struct Table {
  std::vector<double> knots;
  std::vector<double> values;
  bool operator==(const Table&) const = default;
};

}  // namespace scalar

class ScalarMap {
 public:
  using Form = std::variant<scalar::Power, scalar::Polynomial, scalar::Table>;

  // analytic_derivative = false forces the finite-difference path in callers
  // that need a derivative.
  explicit ScalarMap(Form form, bool analytic_derivative = true)
      : form_(std::move(form)), analytic_derivative_(analytic_derivative) {
    validate();
  }

  static ScalarMap power(double exponent, double scale = 1.0) {
    return ScalarMap(scalar::Power{exponent, scale});
  }
  static ScalarMap polynomial(std::vector<double> coefficients) {
    return ScalarMap(scalar::Polynomial{std::move(coefficients)});
  }
  static ScalarMap table(std::vector<double> knots, std::vector<double> values) {
    return ScalarMap(scalar::Table{std::move(knots), std::move(values)});
  }

  bool operator==(const ScalarMap&) const = default;

  double operator()(double x) const {
    return std::visit([x](const auto& f) { return eval(f, x); }, form_);
  }

  double derivative(double x) const {
    return std::visit([x](const auto& f) { return slope(f, x); }, form_);
  }

  bool has_analytic_derivative() const { return analytic_derivative_; }
  const Form& form() const { return form_; }

 private:
  static double eval(const scalar::Power& f, double x) {
    return x <= 0.0 ? 0.0 : f.scale * std::pow(x, f.exponent);
  }
  static double slope(const scalar::Power& f, double x) {
    if (f.exponent == 1.0) return f.scale;
    if (x <= 0.0) {
      return f.exponent > 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return f.scale * f.exponent * std::pow(x, f.exponent - 1.0);
  }

  static double eval(const scalar::Polynomial& f, double x) {
    double acc = 0.0;
    for (auto it = f.coefficients.rbegin(); it != f.coefficients.rend(); ++it) {
      acc = acc * x + *it;
    }
    return acc;
  }
  static double slope(const scalar::Polynomial& f, double x) {
    double acc = 0.0;
    for (std::size_t k = f.coefficients.size(); k-- > 1;) {
      acc = acc * x + static_cast<double>(k) * f.coefficients[k];
    }
    return acc;
  }

  // Index of the segment [knots[i], knots[i+1]] used for x. Knots belong to
  // the segment on their right, except the last one.
  static std::size_t segment(const scalar::Table& f, double x) {
    auto it = std::upper_bound(f.knots.begin(), f.knots.end(), x);
    std::size_t i = it == f.knots.begin()
                        ? 0
                        : static_cast<std::size_t>(it - f.knots.begin()) - 1;
    return std::min(i, f.knots.size() - 2);
  }
  static double eval(const scalar::Table& f, double x) {
    const std::size_t i = segment(f, x);
    const double t = (x - f.knots[i]) / (f.knots[i + 1] - f.knots[i]);
    return f.values[i] + t * (f.values[i + 1] - f.values[i]);
  }
  static double slope(const scalar::Table& f, double x) {
    const std::size_t i = segment(f, x);
    return (f.values[i + 1] - f.values[i]) / (f.knots[i + 1] - f.knots[i]);
  }

  void validate() const {
    if (const auto* p = std::get_if<scalar::Power>(&form_)) {
      if (!(p->exponent > 0.0) || !std::isfinite(p->exponent) ||
          !std::isfinite(p->scale)) {
        throw ValidationError("power map needs a finite positive exponent");
      }
    } else if (const auto* poly = std::get_if<scalar::Polynomial>(&form_)) {
      if (poly->coefficients.empty()) {
        throw ValidationError("polynomial map needs coefficients");
      }
    } else {
      const auto& t = std::get<scalar::Table>(form_);
      if (t.knots.size() < 2 || t.knots.size() != t.values.size()) {
        throw ValidationError("table map needs >= 2 aligned knots and values");
      }
      for (std::size_t i = 1; i < t.knots.size(); ++i) {
        if (!(t.knots[i - 1] < t.knots[i])) {
          throw ValidationError("table knots must be strictly increasing");
        }
      }
    }
  }

  Form form_;
  bool analytic_derivative_;
};

}  // namespace stratburden
