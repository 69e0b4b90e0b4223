#pragma once

// Dense two-phase primal simplex with Bland's rule. Templated on the scalar so
// the same code runs in double precision or exact rational arithmetic.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "swnet/scalar.hpp"

namespace swnet {

enum class RowSense { less_equal, equal, greater_equal };

template <typename Scalar>
struct LpVariable {
  std::string name;
  std::optional<Scalar> lower;  // nullopt = -infinity
  std::optional<Scalar> upper;  // nullopt = +infinity
  Scalar cost{0};
};

template <typename Scalar>
struct LpRow {
  std::string name;
  std::vector<std::pair<int, Scalar>> terms;
  RowSense sense = RowSense::less_equal;
  Scalar rhs{0};
};

template <typename Scalar>
class LpModel {
 public:
  explicit LpModel(OptSense sense = OptSense::minimize);

  int add_variable(std::string name, std::optional<Scalar> lower, std::optional<Scalar> upper, Scalar cost = Scalar(0));
  int add_row(std::string name, std::vector<std::pair<int, Scalar>> terms, RowSense sense, Scalar rhs);

  int variable_count() const { return static_cast<int>(variables_.size()); }
  int row_count() const { return static_cast<int>(rows_.size()); }
  const LpVariable<Scalar>& variable(int j) const { return variables_.at(j); }
  const LpRow<Scalar>& row(int i) const { return rows_.at(i); }
  const std::vector<LpVariable<Scalar>>& variables() const { return variables_; }
  const std::vector<LpRow<Scalar>>& rows() const { return rows_; }
  OptSense sense() const { return sense_; }
  void set_cost(int j, Scalar c) { variables_.at(j).cost = std::move(c); }

  // Row activity a_i^T x.
  Scalar activity(int i, const Vector<Scalar>& x) const;
  Scalar objective_value(const Vector<Scalar>& x) const;

 private:
  OptSense sense_;
  std::vector<LpVariable<Scalar>> variables_;
  std::vector<LpRow<Scalar>> rows_;
};

enum class LpStatus { optimal, infeasible, unbounded };

const char* to_string(LpStatus status);

template <typename Scalar>
struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Vector<Scalar> primal;
  // duals[i] = d(optimal objective)/d(rhs_i). For a minimization this is >= 0
  // on >= rows and <= 0 on <= rows.
  Vector<Scalar> duals;
  Scalar objective{0};
  int iterations = 0;
};

struct LpOptions {
  int max_iterations = 200000;
  // Float mode: primal residual above this after solving is a numerical failure.
  double residual_tolerance = 1e-7;
};

// Throws NumericalError if the float solve drifts past residual_tolerance or
// the iteration cap is hit.
template <typename Scalar>
LpSolution<Scalar> lp_solve(const LpModel<Scalar>& model, const LpOptions& options = {});

// Largest violation of rows and bounds at x.
template <typename Scalar>
Scalar primal_violation(const LpModel<Scalar>& model, const Vector<Scalar>& x);

}  // namespace swnet
