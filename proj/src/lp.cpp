#include "deacs/lp.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "deacs/error.hpp"

namespace deacs::lp {

LinearProgram::LinearProgram(std::vector<double> objective) : objective_(std::move(objective)) {
    for (auto c : objective_)
        if (!std::isfinite(c)) throw ConfigError("objective coefficient is not finite");
}

void LinearProgram::add_constraint(std::vector<double> coefficients, Relation relation, double rhs) {
    if (coefficients.size() != objective_.size())
        throw ConfigError("constraint has " + std::to_string(coefficients.size()) + " coefficients, expected " +
                          std::to_string(objective_.size()));
    if (!std::isfinite(rhs)) throw ConfigError("constraint right-hand side is not finite");
    for (auto a : coefficients)
        if (!std::isfinite(a)) throw ConfigError("constraint coefficient is not finite");
    constraints_.push_back({std::move(coefficients), relation, rhs});
}

const char* to_string(Status status) {
    switch (status) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
    }
    return "unknown";
}

namespace {

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, cols_); }
    double rhs(std::size_t r) const { return at(r, cols_); }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double inv = 1.0 / at(pr, pc);
        for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
        at(pr, pc) = 1.0;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == pr) continue;
            const double factor = at(r, pc);
            if (factor == 0.0) continue;
            for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= factor * at(pr, c);
            at(r, pc) = 0.0;
        }
    }

    void drop_row(std::size_t r) {
        data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(r * (cols_ + 1)),
                    data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * (cols_ + 1)));
        --rows_;
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

struct Simplex {
    Tableau tab;
    std::vector<std::size_t> basis;
    std::vector<bool> allowed;  // columns eligible to enter
    const SimplexOptions& opt;
    std::size_t iterations = 0;

    std::vector<double> reduced_costs(const std::vector<double>& cost) const {
        std::vector<double> d(cost);
        for (std::size_t r = 0; r < tab.rows(); ++r) {
            const double cb = cost[basis[r]];
            if (cb == 0.0) continue;
            for (std::size_t c = 0; c < tab.cols(); ++c) d[c] -= cb * tab.at(r, c);
        }
        return d;
    }

    // Returns false when the problem is unbounded along an entering column.
    bool optimize(const std::vector<double>& cost) {
        for (;;) {
            const auto d = reduced_costs(cost);
            std::size_t enter = tab.cols();
            for (std::size_t c = 0; c < tab.cols(); ++c) {
                if (allowed[c] && d[c] < -opt.pivot_tolerance) {
                    enter = c;
                    break;
                }
            }
            if (enter == tab.cols()) return true;

            std::size_t leave = tab.rows();
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < tab.rows(); ++r) {
                const double a = tab.at(r, enter);
                if (a <= opt.pivot_tolerance) continue;
                const double ratio = tab.rhs(r) / a;
                if (ratio < best_ratio || (ratio == best_ratio && basis[r] < basis[leave])) {
                    best_ratio = ratio;
                    leave = r;
                }
            }
            if (leave == tab.rows()) return false;

            tab.pivot(leave, enter);
            basis[leave] = enter;
            for (std::size_t r = 0; r < tab.rows(); ++r)
                if (tab.rhs(r) < 0.0 && tab.rhs(r) > -opt.feasibility_tolerance) tab.rhs(r) = 0.0;
            if (++iterations > opt.max_iterations) throw InternalError("simplex iteration limit exceeded");
        }
    }
};

}  // namespace

Solution solve(const LinearProgram& lp, const SimplexOptions& options) {
    const std::size_t n = lp.n_variables();
    const auto& cons = lp.constraints();
    const std::size_t m = cons.size();

    // Column layout: structural | slack/surplus | artificial.
    std::size_t n_slack = 0;
    std::size_t n_art = 0;
    for (const auto& c : cons) {
        Relation rel = c.relation;
        if (c.rhs < 0.0 && rel != Relation::Equal)
            rel = rel == Relation::LessEqual ? Relation::GreaterEqual : Relation::LessEqual;
        if (rel != Relation::Equal) ++n_slack;
        if (rel != Relation::LessEqual) ++n_art;
    }
    const std::size_t first_slack = n;
    const std::size_t first_art = n + n_slack;
    const std::size_t cols = first_art + n_art;

    Simplex sx{Tableau(m, cols), std::vector<std::size_t>(m), std::vector<bool>(cols, true), options};
    std::size_t slack = first_slack;
    std::size_t art = first_art;
    for (std::size_t r = 0; r < m; ++r) {
        const auto& c = cons[r];
        const double sign = c.rhs < 0.0 ? -1.0 : 1.0;
        Relation rel = c.relation;
        if (sign < 0.0 && rel != Relation::Equal)
            rel = rel == Relation::LessEqual ? Relation::GreaterEqual : Relation::LessEqual;
        for (std::size_t j = 0; j < n; ++j) sx.tab.at(r, j) = sign * c.coefficients[j];
        sx.tab.rhs(r) = sign * c.rhs;
        if (rel == Relation::LessEqual) {
            sx.tab.at(r, slack) = 1.0;
            sx.basis[r] = slack++;
        } else {
            if (rel == Relation::GreaterEqual) sx.tab.at(r, slack++) = -1.0;
            sx.tab.at(r, art) = 1.0;
            sx.basis[r] = art++;
        }
    }

    Solution sol;
    if (n_art > 0) {
        std::vector<double> phase1(cols, 0.0);
        for (std::size_t c = first_art; c < cols; ++c) phase1[c] = 1.0;
        sx.optimize(phase1);  // bounded below by zero
        double infeasibility = 0.0;
        for (std::size_t r = 0; r < sx.tab.rows(); ++r)
            if (sx.basis[r] >= first_art) infeasibility += sx.tab.rhs(r);
        if (infeasibility > options.feasibility_tolerance) {
            sol.status = Status::Infeasible;
            sol.iterations = sx.iterations;
            return sol;
        }
        // Pivot zero-level artificials out of the basis; drop redundant rows.
        for (std::size_t r = 0; r < sx.tab.rows();) {
            if (sx.basis[r] < first_art) {
                ++r;
                continue;
            }
            std::size_t col = first_art;
            for (std::size_t c = 0; c < first_art; ++c) {
                if (std::abs(sx.tab.at(r, c)) > options.pivot_tolerance) {
                    col = c;
                    break;
                }
            }
            if (col == first_art) {
                sx.tab.drop_row(r);
                sx.basis.erase(sx.basis.begin() + static_cast<std::ptrdiff_t>(r));
                continue;
            }
            sx.tab.pivot(r, col);
            sx.basis[r] = col;
            ++r;
        }
        for (std::size_t c = first_art; c < cols; ++c) sx.allowed[c] = false;
    }

    std::vector<double> cost(cols, 0.0);
    for (std::size_t j = 0; j < n; ++j) cost[j] = lp.objective()[j];
    const bool bounded = sx.optimize(cost);
    sol.iterations = sx.iterations;
    if (!bounded) {
        sol.status = Status::Unbounded;
        return sol;
    }

    sol.status = Status::Optimal;
    sol.primal.assign(n, 0.0);
    for (std::size_t r = 0; r < sx.tab.rows(); ++r)
        if (sx.basis[r] < n) sol.primal[sx.basis[r]] = std::max(0.0, sx.tab.rhs(r));
    sol.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) sol.objective += lp.objective()[j] * sol.primal[j];
    auto d = sx.reduced_costs(cost);
    d.resize(first_art);
    sol.reduced_costs = std::move(d);
    return sol;
}

void write_text(std::ostream& out, const LinearProgram& lp) {
    const auto old_flags = out.flags();
    const auto old_precision = out.precision();
    out << std::setprecision(17);
    out << "min";
    for (auto c : lp.objective()) out << ' ' << c;
    out << '\n';
    for (const auto& con : lp.constraints()) {
        for (std::size_t j = 0; j < con.coefficients.size(); ++j) out << (j ? " " : "") << con.coefficients[j];
        switch (con.relation) {
            case Relation::LessEqual: out << " <= "; break;
            case Relation::GreaterEqual: out << " >= "; break;
            case Relation::Equal: out << " = "; break;
        }
        out << con.rhs << '\n';
    }
    out.flags(old_flags);
    out.precision(old_precision);
}

std::string to_text(const LinearProgram& lp) {
    std::ostringstream out;
    write_text(out, lp);
    return out.str();
}

LinearProgram parse_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::optional<LinearProgram> lp;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        if (!lp) {
            std::string head;
            row >> head;
            if (head != "min") throw ParseError("line " + std::to_string(line_no) + ": expected 'min'");
            std::vector<double> c;
            for (double v; row >> v;) c.push_back(v);
            lp.emplace(std::move(c));
            continue;
        }
        std::vector<double> a;
        std::string token;
        std::optional<Relation> rel;
        double rhs = 0.0;
        try {
            while (row >> token) {
                if (token == "<=") rel = Relation::LessEqual;
                else if (token == ">=") rel = Relation::GreaterEqual;
                else if (token == "=") rel = Relation::Equal;
                else if (rel) rhs = std::stod(token);
                else a.push_back(std::stod(token));
            }
        } catch (const std::logic_error&) {
            throw ParseError("line " + std::to_string(line_no) + ": bad number '" + token + "'");
        }
        if (!rel) throw ParseError("line " + std::to_string(line_no) + ": missing relation");
        try {
            lp->add_constraint(std::move(a), *rel, rhs);
        } catch (const ConfigError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!lp) throw ParseError("empty linear program");
    return std::move(*lp);
}

}  // namespace deacs::lp
