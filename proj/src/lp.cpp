#include "swnet/lp.hpp"

#include <algorithm>
#include <stdexcept>

#include "swnet/errors.hpp"

namespace swnet {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal:
      return "optimal";
    case LpStatus::infeasible:
      return "infeasible";
    case LpStatus::unbounded:
      return "unbounded";
  }
  return "unknown";
}

template <typename Scalar>
LpModel<Scalar>::LpModel(OptSense sense) : sense_(sense) {}

template <typename Scalar>
int LpModel<Scalar>::add_variable(std::string name, std::optional<Scalar> lower, std::optional<Scalar> upper,
                                  Scalar cost) {
  if (lower && upper && *upper < *lower) throw std::invalid_argument("variable bounds are inverted: " + name);
  variables_.push_back(LpVariable<Scalar>{std::move(name), std::move(lower), std::move(upper), std::move(cost)});
  return variable_count() - 1;
}

template <typename Scalar>
int LpModel<Scalar>::add_row(std::string name, std::vector<std::pair<int, Scalar>> terms, RowSense sense, Scalar rhs) {
  for (const auto& [j, coef] : terms)
    if (j < 0 || j >= variable_count()) throw std::invalid_argument("row references an unknown variable: " + name);
  rows_.push_back(LpRow<Scalar>{std::move(name), std::move(terms), sense, std::move(rhs)});
  return row_count() - 1;
}

template <typename Scalar>
Scalar LpModel<Scalar>::activity(int i, const Vector<Scalar>& x) const {
  Scalar total(0);
  for (const auto& [j, coef] : rows_.at(i).terms) total += coef * x[j];
  return total;
}

template <typename Scalar>
Scalar LpModel<Scalar>::objective_value(const Vector<Scalar>& x) const {
  Scalar total(0);
  for (int j = 0; j < variable_count(); ++j) total += variables_[j].cost * x[j];
  return total;
}

template <typename Scalar>
Scalar primal_violation(const LpModel<Scalar>& model, const Vector<Scalar>& x) {
  Scalar worst(0);
  auto note = [&](const Scalar& v) {
    if (v > worst) worst = v;
  };
  for (int j = 0; j < model.variable_count(); ++j) {
    const auto& var = model.variable(j);
    if (var.lower) note(*var.lower - x[j]);
    if (var.upper) note(x[j] - *var.upper);
  }
  for (int i = 0; i < model.row_count(); ++i) {
    const auto& row = model.row(i);
    const Scalar act = model.activity(i, x);
    if (row.sense != RowSense::greater_equal) note(act - row.rhs);
    if (row.sense != RowSense::less_equal) note(row.rhs - act);
  }
  return worst;
}

namespace {

template <typename Scalar>
class Simplex {
 public:
  Simplex(const LpModel<Scalar>& model, const LpOptions& options) : model_(model), options_(options) { build(); }

  LpSolution<Scalar> solve() {
    LpSolution<Scalar> out;
    // Phase 1.
    load_phase_one_objective();
    if (!iterate(/*allow_artificial=*/false, out.iterations)) {
      // The phase-one objective is bounded below by zero.
      throw NumericalError("simplex: phase one reported unbounded");
    }
    if (-tableau_(m_, ncols_) > eps_feasible()) {
      out.status = LpStatus::infeasible;
      return out;
    }
    drive_out_artificials();
    // Phase 2.
    load_phase_two_objective();
    if (!iterate(false, out.iterations)) {
      out.status = LpStatus::unbounded;
      return out;
    }
    out.status = LpStatus::optimal;
    out.primal = recover_primal();
    out.duals = recover_duals();
    out.objective = model_.objective_value(out.primal);
    if constexpr (!is_exact_v<Scalar>) {
      double scale = 1.0;
      for (const auto& row : model_.rows()) scale = std::max(scale, std::abs(to_double(row.rhs)));
      const double viol = to_double(primal_violation(model_, out.primal));
      if (viol > options_.residual_tolerance * scale)
        throw NumericalError("simplex: primal residual " + format_scalar(viol) + " exceeds tolerance");
    }
    return out;
  }

 private:
  struct VarMap {
    int column = -1;
    int negative_column = -1;  // free variables only
    Scalar shift{0};
    int sign = 1;
  };

  Scalar eps() const { return tolerance<Scalar>(); }
  Scalar eps_feasible() const {
    if constexpr (is_exact_v<Scalar>) {
      return Scalar(0);
    } else {
      return Scalar(1e-9) * rhs_scale_;
    }
  }

  void build() {
    const int n = model_.variable_count();
    std::vector<std::vector<std::pair<int, Scalar>>> rows;
    std::vector<RowSense> senses;
    std::vector<Scalar> rhs;
    maps_.resize(n);
    int structural = 0;
    std::vector<std::pair<int, Scalar>> bound_rows;  // (column, upper - lower)
    for (int j = 0; j < n; ++j) {
      const auto& var = model_.variable(j);
      auto& map = maps_[j];
      if (var.lower) {
        map.column = structural++;
        map.shift = *var.lower;
        map.sign = 1;
        if (var.upper) bound_rows.emplace_back(map.column, *var.upper - *var.lower);
      } else if (var.upper) {
        map.column = structural++;
        map.shift = *var.upper;
        map.sign = -1;
      } else {
        map.column = structural++;
        map.negative_column = structural++;
      }
    }
    for (int i = 0; i < model_.row_count(); ++i) {
      const auto& row = model_.row(i);
      std::vector<std::pair<int, Scalar>> terms;
      Scalar b = row.rhs;
      for (const auto& [j, coef] : row.terms) {
        const auto& map = maps_[j];
        b -= coef * map.shift;
        terms.emplace_back(map.column, map.sign > 0 ? coef : Scalar(-coef));
        if (map.negative_column >= 0) terms.emplace_back(map.negative_column, -coef);
      }
      rows.push_back(std::move(terms));
      senses.push_back(row.sense);
      rhs.push_back(std::move(b));
    }
    for (auto& [col, width] : bound_rows) {
      rows.push_back({{col, Scalar(1)}});
      senses.push_back(RowSense::less_equal);
      rhs.push_back(width);
    }

    m_ = static_cast<int>(rows.size());
    user_rows_ = model_.row_count();
    structural_ = structural;
    int slacks = 0;
    for (auto s : senses)
      if (s != RowSense::equal) ++slacks;
    // Worst case every row needs an artificial.
    ncols_ = structural_ + slacks + m_;
    tableau_ = Matrix<Scalar>::Zero(m_ + 1, ncols_ + 1);
    basis_.assign(m_, -1);
    unit_column_.assign(m_, -1);
    row_sign_.assign(m_, 1);
    artificial_begin_ = structural_ + slacks;

    rhs_scale_ = Scalar(1);
    int slack_col = structural_;
    int art_col = artificial_begin_;
    for (int i = 0; i < m_; ++i) {
      for (const auto& [col, coef] : rows[i]) tableau_(i, col) += coef;
      int slack = -1;
      if (senses[i] != RowSense::equal) {
        slack = slack_col++;
        tableau_(i, slack) = senses[i] == RowSense::less_equal ? Scalar(1) : Scalar(-1);
      }
      tableau_(i, ncols_) = rhs[i];
      if (rhs[i] < Scalar(0)) {
        for (int c = 0; c <= ncols_; ++c) tableau_(i, c) = -tableau_(i, c);
        row_sign_[i] = -1;
      }
      if (tableau_(i, ncols_) > rhs_scale_) rhs_scale_ = tableau_(i, ncols_);
      if (slack >= 0 && tableau_(i, slack) == Scalar(1)) {
        basis_[i] = slack;
      } else {
        basis_[i] = art_col;
        tableau_(i, art_col) = Scalar(1);
        ++art_col;
      }
      unit_column_[i] = basis_[i];
    }
    artificial_end_ = art_col;
    costs_ = Vector<Scalar>::Zero(ncols_);
    const bool maximize = model_.sense() == OptSense::maximize;
    for (int j = 0; j < n; ++j) {
      const Scalar c = maximize ? Scalar(-model_.variable(j).cost) : model_.variable(j).cost;
      const auto& map = maps_[j];
      costs_[map.column] = map.sign > 0 ? c : Scalar(-c);
      if (map.negative_column >= 0) costs_[map.negative_column] = -c;
    }
  }

  bool is_artificial(int col) const { return col >= artificial_begin_ && col < artificial_end_; }

  void load_phase_one_objective() {
    for (int c = 0; c <= ncols_; ++c) tableau_(m_, c) = Scalar(0);
    for (int i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      for (int c = 0; c <= ncols_; ++c)
        if (!is_artificial(c)) tableau_(m_, c) -= tableau_(i, c);
    }
  }

  void load_phase_two_objective() {
    for (int c = 0; c < ncols_; ++c) tableau_(m_, c) = costs_[c];
    tableau_(m_, ncols_) = Scalar(0);
    for (int i = 0; i < m_; ++i) {
      const Scalar cb = costs_[basis_[i]];
      if (cb == Scalar(0)) continue;
      for (int c = 0; c <= ncols_; ++c) tableau_(m_, c) -= cb * tableau_(i, c);
    }
  }

  void pivot(int r, int col) {
    const Scalar p = tableau_(r, col);
    std::vector<int> nz;
    for (int c = 0; c <= ncols_; ++c) {
      if (tableau_(r, c) == Scalar(0)) continue;
      tableau_(r, c) /= p;
      nz.push_back(c);
    }
    tableau_(r, col) = Scalar(1);
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const Scalar factor = tableau_(i, col);
      if (factor == Scalar(0)) continue;
      for (int c : nz) {
        tableau_(i, c) -= factor * tableau_(r, c);
        if constexpr (!is_exact_v<Scalar>) {
          if (std::abs(tableau_(i, c)) < 1e-14) tableau_(i, c) = 0.0;
        }
      }
      tableau_(i, col) = Scalar(0);
    }
    basis_[r] = col;
  }

  // Bland's rule. Returns false on unboundedness.
  bool iterate(bool allow_artificial, int& iterations) {
    const Scalar e = eps();
    while (true) {
      int enter = -1;
      for (int c = 0; c < ncols_; ++c) {
        if (!allow_artificial && is_artificial(c)) continue;
        if (tableau_(m_, c) < -e) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      Scalar best_ratio(0);
      for (int i = 0; i < m_; ++i) {
        if (!(tableau_(i, enter) > e)) continue;
        Scalar ratio = tableau_(i, ncols_) / tableau_(i, enter);
        if (leave < 0 || ratio < best_ratio - e ||
            (!(ratio > best_ratio + e) && basis_[i] < basis_[leave])) {
          if (leave < 0 || ratio < best_ratio) best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      if (++iterations > options_.max_iterations) throw NumericalError("simplex: iteration limit reached");
    }
  }

  void drive_out_artificials() {
    const Scalar e = eps();
    for (int i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      for (int c = 0; c < artificial_begin_; ++c) {
        if (tableau_(i, c) > e || tableau_(i, c) < -e) {
          pivot(i, c);
          break;
        }
      }
      // Otherwise the row is redundant and the artificial stays basic at zero.
    }
  }

  Vector<Scalar> recover_primal() const {
    Vector<Scalar> col_values = Vector<Scalar>::Zero(ncols_);
    for (int i = 0; i < m_; ++i) col_values[basis_[i]] = tableau_(i, ncols_);
    Vector<Scalar> x(model_.variable_count());
    for (int j = 0; j < model_.variable_count(); ++j) {
      const auto& map = maps_[j];
      if (map.negative_column >= 0) {
        x[j] = col_values[map.column] - col_values[map.negative_column];
      } else {
        x[j] = map.shift + (map.sign > 0 ? col_values[map.column] : Scalar(-col_values[map.column]));
      }
    }
    return x;
  }

  Vector<Scalar> recover_duals() const {
    const bool maximize = model_.sense() == OptSense::maximize;
    Vector<Scalar> y(user_rows_);
    for (int i = 0; i < user_rows_; ++i) {
      // The unit column of row i has zero phase-two cost, so its reduced cost is -y_i.
      Scalar yi = -tableau_(m_, unit_column_[i]);
      if (row_sign_[i] < 0) yi = -yi;
      if (maximize) yi = -yi;
      y[i] = yi;
    }
    return y;
  }

  const LpModel<Scalar>& model_;
  LpOptions options_;
  std::vector<VarMap> maps_;
  Matrix<Scalar> tableau_;
  Vector<Scalar> costs_;
  std::vector<int> basis_;
  std::vector<int> unit_column_;
  std::vector<int> row_sign_;
  int m_ = 0;
  int user_rows_ = 0;
  int structural_ = 0;
  int ncols_ = 0;
  int artificial_begin_ = 0;
  int artificial_end_ = 0;
  Scalar rhs_scale_{1};
};

}  // namespace

template <typename Scalar>
LpSolution<Scalar> lp_solve(const LpModel<Scalar>& model, const LpOptions& options) {
  Simplex<Scalar> simplex(model, options);
  return simplex.solve();
}

template class LpModel<double>;
template class LpModel<Rational>;
template LpSolution<double> lp_solve(const LpModel<double>&, const LpOptions&);
template LpSolution<Rational> lp_solve(const LpModel<Rational>&, const LpOptions&);
template double primal_violation(const LpModel<double>&, const Vector<double>&);
template Rational primal_violation(const LpModel<Rational>&, const Vector<Rational>&);

}  // namespace swnet
