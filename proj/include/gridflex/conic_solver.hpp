#pragma once

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace gridflex {

enum class SolveStatus { Optimal, Infeasible, Unbounded, NumericFailure };

std::string to_string(SolveStatus s);

/// Rotated second-order cone membership on four variables:
/// x[v] * x[l] >= x[p]^2 + x[q]^2, x[v] >= 0, x[l] >= 0.
struct RotatedCone {
    int v = -1;
    int l = -1;
    int p = -1;
    int q = -1;
    bool operator==(const RotatedCone&) const = default;
};

/// Linear objective, linear equality/inequality rows, variable bounds and
/// rotated-cone memberships. LPs are just the cone-free case.
struct ConicProgram {
    int n = 0;
    Eigen::VectorXd c;
    Eigen::MatrixXd a_eq;  // a_eq x = b_eq
    Eigen::VectorXd b_eq;
    Eigen::MatrixXd a_in;  // a_in x <= b_in
    Eigen::VectorXd b_in;
    Eigen::VectorXd lb, ub;  // +-inf for free
    std::vector<RotatedCone> cones;
    std::vector<std::string> var_names;

    int var_index(const std::string& name) const;
};

class ProgramError : public std::runtime_error {
public:
    explicit ProgramError(const std::string& what) : std::runtime_error(what) {}
};

/// Incremental construction; rows are sparse term lists, storage is dense.
class ProgramBuilder {
public:
    int add_var(const std::string& name, double lb = -std::numeric_limits<double>::infinity(),
                double ub = std::numeric_limits<double>::infinity(), double cost = 0.0);
    void add_cost(int var, double coeff);
    void add_eq(const std::vector<std::pair<int, double>>& terms, double rhs);
    void add_ineq(const std::vector<std::pair<int, double>>& terms, double rhs);
    void add_cone(int v, int l, int p, int q);
    void tighten_bounds(int var, double lb, double ub);
    int num_vars() const { return static_cast<int>(names_.size()); }
    int num_eqs() const { return static_cast<int>(eqs_.size()); }
    ConicProgram build() const;

private:
    std::vector<std::string> names_;
    std::vector<double> lb_, ub_, cost_;
    std::vector<std::pair<std::vector<std::pair<int, double>>, double>> eqs_, ineqs_;
    std::vector<RotatedCone> cones_;
};

struct SolveResult {
    SolveStatus status = SolveStatus::NumericFailure;
    Eigen::VectorXd x;
    double objective = 0.0;
    double primal_residual = 0.0;  // max constraint violation of x
    double gap_bound = 0.0;        // certified bound on objective suboptimality
    int iterations = 0;            // Newton steps total
    std::string message;
};

/// Path-following barrier method with a phase-I feasibility stage.
/// status == Optimal guarantees primal_residual <= tol_feas and
/// gap_bound <= tol_gap * max(1, |objective|).
SolveResult solve(const ConicProgram& prog, double tol_feas = 1e-8, double tol_gap = 1e-9);

/// Independent feasibility re-check by direct substitution; returns the
/// max violation across equalities, inequalities, bounds and cones.
double verify_feasibility(const ConicProgram& prog, const Eigen::VectorXd& x);

/// Line-oriented text dump for external cross-checks.
std::string dump_program(const ConicProgram& prog);

}  // namespace gridflex
