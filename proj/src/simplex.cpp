#include "spoofgrid/simplex.hpp"

#include "spoofgrid/errors.hpp"

#include <cmath>
#include <limits>

namespace spoofgrid::lp {

namespace {

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_((rows + 1) * (cols + 1), 0.0) {}

    double& at(std::size_t r, std::size_t c) { return cells_[r * (cols_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, cols_); }
    double& obj(std::size_t c) { return at(rows_, c); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double inv = 1.0 / at(pr, pc);
        for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
        at(pr, pc) = 1.0;
        for (std::size_t r = 0; r <= rows_; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
            at(r, pc) = 0.0;
        }
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> cells_;
};

// Primal simplex on the current objective row. Dantzig pricing with a
// largest-pivot tie-break in the ratio test; after a run of degenerate pivots
// it switches to Bland's rule, which cannot cycle. Columns at or beyond
// `allowed_cols` never enter. Returns false when unbounded.
bool iterate(Tableau& t, std::vector<std::size_t>& basis, std::size_t allowed_cols, double tol) {
    constexpr std::size_t kDegenerateLimit = 50;
    std::size_t degenerate_run = 0;
    for (std::size_t guard = 0; guard < 100000; ++guard) {
        const bool bland = degenerate_run >= kDegenerateLimit;
        std::size_t enter = allowed_cols;
        double most_negative = -tol;
        for (std::size_t c = 0; c < allowed_cols; ++c) {
            if (t.obj(c) >= most_negative) continue;
            enter = c;
            if (bland) break;
            most_negative = t.obj(c);
        }
        if (enter == allowed_cols) return true;

        std::size_t leave = t.rows();
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < t.rows(); ++r) {
            const double a = t.at(r, enter);
            if (a <= tol) continue;
            const double ratio = std::max(t.rhs(r), 0.0) / a;
            if (leave == t.rows() || ratio < best_ratio - tol) {
                best_ratio = ratio;
                leave = r;
            } else if (std::abs(ratio - best_ratio) <= tol) {
                const bool better = bland ? basis[r] < basis[leave] : a > t.at(leave, enter);
                if (better) {
                    best_ratio = std::min(best_ratio, ratio);
                    leave = r;
                }
            }
        }
        if (leave == t.rows()) return false;
        degenerate_run = best_ratio <= tol ? degenerate_run + 1 : 0;
        t.pivot(leave, enter);
        basis[leave] = enter;
    }
    throw InvariantViolation("simplex failed to terminate");
}

}  // namespace

Result maximize(const std::vector<double>& objective, const std::vector<Constraint>& constraints, double tolerance) {
    const std::size_t n = objective.size();
    const std::size_t m = constraints.size();

    std::size_t n_slack = 0;
    std::size_t n_art = 0;
    for (const auto& c : constraints) {
        if (c.coefficients.size() != n) throw ContractViolation("constraint width does not match the objective");
        const bool flip = c.rhs < 0.0;
        Relation rel = c.relation;
        if (flip && rel != Relation::Equal) rel = rel == Relation::LessEqual ? Relation::GreaterEqual : Relation::LessEqual;
        if (rel != Relation::Equal) ++n_slack;
        if (rel != Relation::LessEqual) ++n_art;
    }

    const std::size_t art_begin = n + n_slack;
    Tableau t(m, art_begin + n_art);
    std::vector<std::size_t> basis(m + 1, std::numeric_limits<std::size_t>::max());

    std::size_t next_slack = n;
    std::size_t next_art = art_begin;
    for (std::size_t r = 0; r < m; ++r) {
        const auto& c = constraints[r];
        const double sign = c.rhs < 0.0 ? -1.0 : 1.0;
        Relation rel = c.relation;
        if (sign < 0.0 && rel != Relation::Equal)
            rel = rel == Relation::LessEqual ? Relation::GreaterEqual : Relation::LessEqual;
        for (std::size_t j = 0; j < n; ++j) t.at(r, j) = sign * c.coefficients[j];
        t.rhs(r) = sign * c.rhs;
        if (rel == Relation::LessEqual) {
            t.at(r, next_slack) = 1.0;
            basis[r] = next_slack++;
        } else {
            if (rel == Relation::GreaterEqual) t.at(r, next_slack++) = -1.0;
            t.at(r, next_art) = 1.0;
            basis[r] = next_art++;
        }
    }

    // Phase 1: maximise -sum(artificials).
    if (n_art > 0) {
        for (std::size_t c = art_begin; c < t.cols(); ++c) t.obj(c) = 1.0;
        for (std::size_t r = 0; r < m; ++r)
            if (basis[r] >= art_begin)
                for (std::size_t c = 0; c <= t.cols(); ++c) t.at(m, c) -= t.at(r, c);
        iterate(t, basis, t.cols(), tolerance);
        if (t.rhs(m) < -1e-9) return {Status::Infeasible, 0.0, {}};

        // Drive zero-level artificials out of the basis where possible.
        for (std::size_t r = 0; r < m; ++r) {
            if (basis[r] < art_begin) continue;
            for (std::size_t c = 0; c < art_begin; ++c)
                if (std::abs(t.at(r, c)) > tolerance) {
                    t.pivot(r, c);
                    basis[r] = c;
                    break;
                }
        }
    }

    // Phase 2.
    for (std::size_t c = 0; c <= t.cols(); ++c) t.obj(c) = 0.0;
    for (std::size_t j = 0; j < n; ++j) t.obj(j) = -objective[j];
    for (std::size_t r = 0; r < m; ++r) {
        const double f = t.obj(basis[r]);
        if (f != 0.0)
            for (std::size_t c = 0; c <= t.cols(); ++c) t.at(m, c) -= f * t.at(r, c);
    }
    if (!iterate(t, basis, art_begin, tolerance)) return {Status::Unbounded, 0.0, {}};

    Result result{Status::Optimal, t.rhs(m), std::vector<double>(n, 0.0)};
    for (std::size_t r = 0; r < m; ++r)
        if (basis[r] < n) result.x[basis[r]] = t.rhs(r);
    return result;
}

}  // namespace spoofgrid::lp
