#include "imdp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "imdp/model.hpp"

namespace imdp {

namespace {

constexpr double kTol = 1e-9;
constexpr double kPivotTol = 1e-7;

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows, std::vector<double>(cols + 1, 0.0)), basis_(rows, -1) {}

    std::vector<double>& row(std::size_t i) { return a_[i]; }
    double& rhs(std::size_t i) { return a_[i][cols_]; }
    int& basis(std::size_t i) { return basis_[i]; }

    void set_costs(const std::vector<double>& c) {
        d_.assign(cols_ + 1, 0.0);
        for (std::size_t j = 0; j < cols_; ++j) d_[j] = c[j];
        for (std::size_t i = 0; i < rows_; ++i) {
            const double cb = c[basis_[i]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) d_[j] -= cb * a_[i][j];
        }
    }

    double value() const { return -d_[cols_]; }

    void pivot(std::size_t r, std::size_t c) {
        const double p = a_[r][c];
        for (double& v : a_[r]) v /= p;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == r) continue;
            const double f = a_[i][c];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) a_[i][j] -= f * a_[r][j];
            a_[i][c] = 0.0;
        }
        const double f = d_[c];
        if (f != 0.0) {
            for (std::size_t j = 0; j <= cols_; ++j) d_[j] -= f * a_[r][j];
            d_[c] = 0.0;
        }
        basis_[r] = static_cast<int>(c);
    }

    /// Runs Bland-rule iterations over columns < allowed. Returns false if unbounded.
    /// With `bounded` set, columns without a well-conditioned pivot row are rounding noise and are skipped.
    bool optimize(std::size_t allowed, bool bounded = false) {
        std::vector<bool> skip(allowed, false);
        for (;;) {
            std::size_t enter = allowed;
            for (std::size_t j = 0; j < allowed; ++j) {
                if (!skip[j] && d_[j] > kTol) {
                    enter = j;
                    break;
                }
            }
            if (enter == allowed) return true;
            std::size_t leave = ratio_test(enter, kPivotTol);
            if (leave == rows_ && !bounded) leave = ratio_test(enter, kTol);
            if (leave == rows_) {
                if (!bounded) return false;
                skip[enter] = true;
                continue;
            }
            std::fill(skip.begin(), skip.end(), false);
            pivot(leave, enter);
        }
    }

    std::size_t rows() const { return rows_; }

private:
    /// Bland ratio test over rows whose pivot element exceeds `min_pivot`; rows_ if none.
    std::size_t ratio_test(std::size_t enter, double min_pivot) const {
        std::size_t leave = rows_;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < rows_; ++i) {
            const double aij = a_[i][enter];
            if (aij <= min_pivot) continue;
            const double ratio = a_[i][cols_] / aij;
            if (leave == rows_ || ratio < best - kTol) {
                best = ratio;
                leave = i;
            } else if (ratio <= best + kTol && basis_[i] < basis_[leave]) {
                best = std::min(best, ratio);
                leave = i;
            }
        }
        return leave;
    }

    std::size_t rows_, cols_;
    std::vector<std::vector<double>> a_;
    std::vector<int> basis_;
    std::vector<double> d_;
};

}  // namespace

LpResult solve_lp(const LpProblem& prob) {
    const std::size_t n = prob.objective.size();
    if (!prob.nonneg.empty() && prob.nonneg.size() != n) throw ContractError("nonneg flags dimension mismatch");
    for (const auto& c : prob.constraints) {
        if (c.coeffs.size() != n) throw ContractError("constraint dimension mismatch");
    }
    auto is_nonneg = [&](std::size_t j) { return prob.nonneg.empty() || prob.nonneg[j]; };

    std::vector<int> pos(n), neg(n, -1);
    std::size_t cols = 0;
    for (std::size_t j = 0; j < n; ++j) {
        pos[j] = static_cast<int>(cols++);
        if (!is_nonneg(j)) neg[j] = static_cast<int>(cols++);
    }
    const std::size_t structural = cols;
    const std::size_t m = prob.constraints.size();

    std::vector<Relation> rel(m);
    std::vector<double> sign(m, 1.0);
    std::size_t slack_count = 0, art_count = 0;
    for (std::size_t i = 0; i < m; ++i) {
        rel[i] = prob.constraints[i].rel;
        if (prob.constraints[i].rhs < 0.0) {
            sign[i] = -1.0;
            if (rel[i] == Relation::LessEq) rel[i] = Relation::GreaterEq;
            else if (rel[i] == Relation::GreaterEq) rel[i] = Relation::LessEq;
        }
        if (rel[i] != Relation::Equal) ++slack_count;
        if (rel[i] != Relation::LessEq) ++art_count;
    }
    const std::size_t art_begin = structural + slack_count;
    const std::size_t total = art_begin + art_count;

    Tableau t(m, total);
    std::size_t next_slack = structural, next_art = art_begin;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& c = prob.constraints[i];
        auto& r = t.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            r[pos[j]] = sign[i] * c.coeffs[j];
            if (neg[j] >= 0) r[neg[j]] = -sign[i] * c.coeffs[j];
        }
        t.rhs(i) = sign[i] * c.rhs;
        if (rel[i] == Relation::LessEq) {
            r[next_slack] = 1.0;
            t.basis(i) = static_cast<int>(next_slack++);
        } else {
            if (rel[i] == Relation::GreaterEq) r[next_slack++] = -1.0;
            r[next_art] = 1.0;
            t.basis(i) = static_cast<int>(next_art++);
        }
    }

    LpResult res;
    if (art_count > 0) {
        std::vector<double> c1(total, 0.0);
        for (std::size_t j = art_begin; j < total; ++j) c1[j] = -1.0;
        t.set_costs(c1);
        t.optimize(total, true);
        if (t.value() < -kTol * (1.0 + static_cast<double>(m))) {
            res.status = LpStatus::Infeasible;
            return res;
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (static_cast<std::size_t>(t.basis(i)) < art_begin) continue;
            for (std::size_t j = 0; j < art_begin; ++j) {
                if (std::fabs(t.row(i)[j]) > kTol) {
                    t.pivot(i, j);
                    break;
                }
            }
        }
    }

    std::vector<double> c2(total, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        c2[pos[j]] = prob.objective[j];
        if (neg[j] >= 0) c2[neg[j]] = -prob.objective[j];
    }
    t.set_costs(c2);
    if (!t.optimize(art_begin)) {
        res.status = LpStatus::Unbounded;
        return res;
    }

    std::vector<double> col(total, 0.0);
    for (std::size_t i = 0; i < m; ++i) col[t.basis(i)] = t.rhs(i);
    res.status = LpStatus::Optimal;
    res.x.assign(n, 0.0);
    res.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        res.x[j] = col[pos[j]] - (neg[j] >= 0 ? col[neg[j]] : 0.0);
        res.objective += prob.objective[j] * res.x[j];
    }
    return res;
}

}  // namespace imdp
