#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace deacs::lp {

enum class Relation { LessEqual, GreaterEqual, Equal };

struct Constraint {
    std::vector<double> coefficients;
    Relation relation = Relation::LessEqual;
    double rhs = 0.0;
};

/// min c.x subject to the constraints, with every variable implicitly >= 0.
/// Dimension mismatches and non-finite data are rejected at construction.
class LinearProgram {
public:
    explicit LinearProgram(std::vector<double> objective);

    void add_constraint(std::vector<double> coefficients, Relation relation, double rhs);

    std::size_t n_variables() const { return objective_.size(); }
    const std::vector<double>& objective() const { return objective_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }

private:
    std::vector<double> objective_;
    std::vector<Constraint> constraints_;
};

enum class Status { Optimal, Infeasible, Unbounded };

const char* to_string(Status status);

struct Solution {
    Status status = Status::Infeasible;
    double objective = 0.0;       // Optimal only
    std::vector<double> primal;   // Optimal only; one entry per variable
    /// Phase-2 reduced costs of the structural and slack columns at the
    /// final basis; all >= -pivot_tolerance certifies optimality.
    std::vector<double> reduced_costs;
    std::size_t iterations = 0;
};

struct SimplexOptions {
    double pivot_tolerance = 1e-9;
    double feasibility_tolerance = 1e-7;
    std::size_t max_iterations = 1'000'000;
};

/// Dense two-phase primal simplex with Bland's rule for both the entering
/// and the leaving variable, so degenerate problems cannot cycle.
Solution solve(const LinearProgram& lp, const SimplexOptions& options = {});

/// Plain-text dump used to reproduce solver issues:
///   min <c_1> ... <c_n>
///   <a_1> ... <a_n> <= | >= | = <rhs>
void write_text(std::ostream& out, const LinearProgram& lp);
std::string to_text(const LinearProgram& lp);

/// Inverse of write_text; throws ParseError on malformed input.
LinearProgram parse_text(const std::string& text);

}  // namespace deacs::lp
