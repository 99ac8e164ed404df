#include "gridflex/conic_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

namespace gridflex {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::NumericFailure: return "numeric_failure";
    }
    return "?";
}

int ConicProgram::var_index(const std::string& name) const {
    for (int j = 0; j < n; ++j)
        if (var_names[j] == name) return j;
    throw ProgramError("unknown variable '" + name + "'");
}

int ProgramBuilder::add_var(const std::string& name, double lb, double ub, double cost) {
    if (lb > ub) throw ProgramError("variable '" + name + "': lb > ub");
    names_.push_back(name);
    lb_.push_back(lb);
    ub_.push_back(ub);
    cost_.push_back(cost);
    return static_cast<int>(names_.size()) - 1;
}

void ProgramBuilder::add_cost(int var, double coeff) { cost_.at(var) += coeff; }

void ProgramBuilder::add_eq(const std::vector<std::pair<int, double>>& terms, double rhs) {
    eqs_.push_back({terms, rhs});
}

void ProgramBuilder::add_ineq(const std::vector<std::pair<int, double>>& terms, double rhs) {
    ineqs_.push_back({terms, rhs});
}

void ProgramBuilder::add_cone(int v, int l, int p, int q) {
    RotatedCone cone{v, l, p, q};
    for (const auto& c : cones_)
        if (c == cone) throw ProgramError("duplicate cone membership");
    cones_.push_back(cone);
}

void ProgramBuilder::tighten_bounds(int var, double lb, double ub) {
    lb_.at(var) = std::max(lb_.at(var), lb);
    ub_.at(var) = std::min(ub_.at(var), ub);
    if (lb_[var] > ub_[var])
        throw ProgramError("variable '" + names_[var] + "': bound tightening left lb > ub");
}

ConicProgram ProgramBuilder::build() const {
    ConicProgram p;
    p.n = num_vars();
    p.var_names = names_;
    p.c = Eigen::Map<const VectorXd>(cost_.data(), p.n);
    p.lb = Eigen::Map<const VectorXd>(lb_.data(), p.n);
    p.ub = Eigen::Map<const VectorXd>(ub_.data(), p.n);
    p.a_eq.setZero(eqs_.size(), p.n);
    p.b_eq.setZero(eqs_.size());
    for (size_t r = 0; r < eqs_.size(); ++r) {
        for (auto [j, a] : eqs_[r].first) p.a_eq(r, j) += a;
        p.b_eq(r) = eqs_[r].second;
    }
    p.a_in.setZero(ineqs_.size(), p.n);
    p.b_in.setZero(ineqs_.size());
    for (size_t r = 0; r < ineqs_.size(); ++r) {
        for (auto [j, a] : ineqs_[r].first) p.a_in(r, j) += a;
        p.b_in(r) = ineqs_[r].second;
    }
    p.cones = cones_;
    return p;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const ConicProgram& p) {
    if (p.n < 0) throw ProgramError("negative variable count");
    if (p.c.size() != p.n || p.lb.size() != p.n || p.ub.size() != p.n)
        throw ProgramError("objective/bounds size mismatch");
    if (p.a_eq.rows() != p.b_eq.size() || p.a_in.rows() != p.b_in.size())
        throw ProgramError("constraint row/rhs count mismatch");
    if (p.a_eq.cols() != p.n && p.a_eq.rows() > 0) throw ProgramError("a_eq column mismatch");
    if (p.a_in.cols() != p.n && p.a_in.rows() > 0) throw ProgramError("a_in column mismatch");
    for (int j = 0; j < p.n; ++j)
        if (p.lb(j) > p.ub(j)) throw ProgramError("variable " + std::to_string(j) + ": lb > ub");
    for (size_t k = 0; k < p.cones.size(); ++k) {
        const auto& c = p.cones[k];
        for (int idx : {c.v, c.l, c.p, c.q})
            if (idx < 0 || idx >= p.n) throw ProgramError("cone references invalid variable index");
        for (size_t k2 = k + 1; k2 < p.cones.size(); ++k2)
            if (p.cones[k2] == c) throw ProgramError("duplicate cone membership");
    }
}

// Internal flattened form: equalities E x = f (a_eq plus pinned variables),
// inequalities C x <= d (a_in plus finite bounds), cones as-is.
struct Flat {
    MatrixXd E, C;
    VectorXd f, d;
    std::vector<RotatedCone> cones;
    int n = 0;
};

Flat flatten(const ConicProgram& p) {
    Flat fl;
    fl.n = p.n;
    fl.cones = p.cones;
    std::vector<int> pinned;
    std::vector<std::pair<int, double>> bound_rows;  // (var, +1/-1) sign
    constexpr double kBig = 1e20;                    // treated as unbounded
    for (int j = 0; j < p.n; ++j) {
        if (p.lb(j) == p.ub(j)) {
            pinned.push_back(j);
            continue;
        }
        if (p.ub(j) < kBig) bound_rows.push_back({j, +1});
        if (p.lb(j) > -kBig) bound_rows.push_back({j, -1});
    }
    const int me = static_cast<int>(p.a_eq.rows() + pinned.size());
    fl.E.setZero(me, p.n);
    fl.f.setZero(me);
    fl.E.topRows(p.a_eq.rows()) = p.a_eq;
    fl.f.head(p.b_eq.size()) = p.b_eq;
    for (size_t k = 0; k < pinned.size(); ++k) {
        fl.E(p.a_eq.rows() + k, pinned[k]) = 1.0;
        fl.f(p.a_eq.rows() + k) = p.lb(pinned[k]);
    }
    const int mi = static_cast<int>(p.a_in.rows() + bound_rows.size());
    fl.C.setZero(mi, p.n);
    fl.d.setZero(mi);
    fl.C.topRows(p.a_in.rows()) = p.a_in;
    fl.d.head(p.b_in.size()) = p.b_in;
    for (size_t k = 0; k < bound_rows.size(); ++k) {
        auto [j, sgn] = bound_rows[k];
        fl.C(p.a_in.rows() + k, j) = sgn;
        fl.d(p.a_in.rows() + k) = sgn > 0 ? p.ub(j) : -p.lb(j);
    }
    return fl;
}

// Smoothed norm of the cone's SOC image u = (v-l, 2p, 2q).
double cone_socdist(const Flat& fl, const RotatedCone& c, const VectorXd& x, VectorXd* grad,
                    MatrixXd* hess) {
    const double u1 = x(c.v) - x(c.l), u2 = 2 * x(c.p), u3 = 2 * x(c.q);
    const double nrm = std::sqrt(u1 * u1 + u2 * u2 + u3 * u3 + 1e-30);
    const double f = nrm - (x(c.v) + x(c.l));
    if (grad) {
        grad->setZero(fl.n);
        (*grad)(c.v) = u1 / nrm - 1.0;
        (*grad)(c.l) = -u1 / nrm - 1.0;
        (*grad)(c.p) = 2 * u2 / nrm;
        (*grad)(c.q) = 2 * u3 / nrm;
    }
    if (hess) {
        // U is the 3x4 jacobian of u wrt (v,l,p,q); hess = U' (I - uu'/n^2) U / n.
        Eigen::Matrix<double, 3, 4> U;
        U << 1, -1, 0, 0, 0, 0, 2, 0, 0, 0, 0, 2;
        Eigen::Vector3d uh(u1 / nrm, u2 / nrm, u3 / nrm);
        Eigen::Matrix3d P = (Eigen::Matrix3d::Identity() - uh * uh.transpose()) / nrm;
        Eigen::Matrix4d Hb = U.transpose() * P * U;
        hess->setZero(fl.n, fl.n);
        const int idx[4] = {c.v, c.l, c.p, c.q};
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) (*hess)(idx[a], idx[b]) += Hb(a, b);
    }
    return f;
}

struct BarrierEval {
    bool feasible = false;
    double phi = 0.0;
    VectorXd grad;
    MatrixXd hess;
    double min_slack = kInf;
};

// Phase-2 barrier over the flattened inequalities and cone products.
BarrierEval eval_barrier(const Flat& fl, const VectorXd& x, bool derivs) {
    BarrierEval ev;
    ev.phi = 0.0;
    if (derivs) {
        ev.grad.setZero(fl.n);
        ev.hess.setZero(fl.n, fl.n);
    }
    const VectorXd slack = fl.d - fl.C * x;
    for (int r = 0; r < slack.size(); ++r) {
        ev.min_slack = std::min(ev.min_slack, slack(r));
        if (slack(r) <= 0) return ev;
        ev.phi -= std::log(slack(r));
        if (derivs) {
            const VectorXd row = fl.C.row(r).transpose();
            ev.grad += row / slack(r);
            ev.hess += (row * row.transpose()) / (slack(r) * slack(r));
        }
    }
    for (const auto& c : fl.cones) {
        const double g = x(c.v) * x(c.l) - x(c.p) * x(c.p) - x(c.q) * x(c.q);
        ev.min_slack = std::min(ev.min_slack, g);
        if (g <= 0 || x(c.v) <= 0 || x(c.l) <= 0) {
            ev.min_slack = std::min(ev.min_slack, std::min(x(c.v), x(c.l)));
            return ev;
        }
        ev.phi -= std::log(g);
        if (derivs) {
            VectorXd dg = VectorXd::Zero(fl.n);
            dg(c.v) = x(c.l);
            dg(c.l) = x(c.v);
            dg(c.p) = -2 * x(c.p);
            dg(c.q) = -2 * x(c.q);
            ev.grad -= dg / g;
            ev.hess += (dg * dg.transpose()) / (g * g);
            // -hess(g)/g: cross terms on (v,l), diagonal on (p,q).
            ev.hess(c.v, c.l) -= 1.0 / g;
            ev.hess(c.l, c.v) -= 1.0 / g;
            ev.hess(c.p, c.p) += 2.0 / g;
            ev.hess(c.q, c.q) += 2.0 / g;
        }
    }
    ev.feasible = true;
    return ev;
}

// Nullspace basis of E (orthonormal columns); identity when E is empty.
MatrixXd nullspace(const MatrixXd& E, int n) {
    if (E.rows() == 0) return MatrixXd::Identity(n, n);
    Eigen::FullPivLU<MatrixXd> lu(E);
    lu.setThreshold(1e-11);
    MatrixXd K = lu.kernel();
    if (K.cols() == 1 && K.isZero(0)) return MatrixXd(n, 0);
    // Orthonormalize for numerical sanity.
    Eigen::HouseholderQR<MatrixXd> qr(K);
    MatrixXd Q = qr.householderQ() * MatrixXd::Identity(n, K.cols());
    return Q;
}

struct CenterOutcome {
    bool converged = false;
    bool stalled = false;
    int newton_steps = 0;
};

// Newton centering of F(x) = t_bar * c'x + phi(x) over x = x + Z u.
CenterOutcome center(const Flat& fl, const VectorXd& c_eff, double t_bar, const MatrixXd& Z,
                     VectorXd& x, int max_newton = 200) {
    CenterOutcome out;
    if (Z.cols() == 0) {
        out.converged = true;
        return out;
    }
    for (int it = 0; it < max_newton; ++it) {
        BarrierEval ev = eval_barrier(fl, x, true);
        if (!ev.feasible) return out;  // should not happen; caller keeps iterates interior
        VectorXd g = t_bar * c_eff + ev.grad;
        VectorXd gu = Z.transpose() * g;
        MatrixXd Hu = Z.transpose() * ev.hess * Z;
        const double reg0 = 1e-12 * (1.0 + Hu.diagonal().cwiseAbs().maxCoeff());
        VectorXd du;
        double reg = reg0;
        for (int attempt = 0;; ++attempt) {
            MatrixXd Hr = Hu;
            Hr.diagonal().array() += reg;
            Eigen::LLT<MatrixXd> llt(Hr);
            if (llt.info() == Eigen::Success) {
                du = llt.solve(-gu);
                break;
            }
            reg *= 100.0;
            if (attempt > 10) {
                out.stalled = true;
                return out;
            }
        }
        const double lambda2 = -gu.dot(du);
        ++out.newton_steps;
        if (lambda2 / 2.0 <= 1e-10) {
            out.converged = true;
            return out;
        }
        // Backtracking line search keeping strict interiority.
        const double f0 = t_bar * c_eff.dot(x) + ev.phi;
        const double slope = gu.dot(du);
        double alpha = 1.0;
        bool stepped = false;
        const VectorXd dx = Z * du;
        while (alpha > 1e-14) {
            VectorXd xn = x + alpha * dx;
            BarrierEval en = eval_barrier(fl, xn, false);
            if (en.feasible && t_bar * c_eff.dot(xn) + en.phi <= f0 + 0.25 * alpha * slope) {
                x = xn;
                stepped = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!stepped) {
            // Armijo can fail in floating point near a boundary even though
            // the direction descends; the damped Newton step 1/(1+lambda)
            // of a self-concordant barrier still guarantees decrease, so
            // accept any strictly better feasible point along it.
            double a = 1.0 / (1.0 + std::sqrt(std::max(lambda2, 0.0)));
            while (a > 1e-16) {
                VectorXd xn = x + a * dx;
                BarrierEval en = eval_barrier(fl, xn, false);
                if (en.feasible && t_bar * c_eff.dot(xn) + en.phi < f0) {
                    x = xn;
                    stepped = true;
                    break;
                }
                a *= 0.5;
            }
        }
        if (!stepped) {
            out.stalled = true;
            out.converged = lambda2 / 2.0 <= 1e-6;
            return out;
        }
    }
    out.stalled = true;
    return out;
}

}  // namespace

double verify_feasibility(const ConicProgram& p, const VectorXd& x) {
    double worst = 0.0;
    if (p.a_eq.rows() > 0) worst = (p.a_eq * x - p.b_eq).cwiseAbs().maxCoeff();
    if (p.a_in.rows() > 0) worst = std::max(worst, (p.a_in * x - p.b_in).maxCoeff());
    for (int j = 0; j < p.n; ++j) {
        if (p.lb(j) > -kInf) worst = std::max(worst, p.lb(j) - x(j));
        if (p.ub(j) < kInf) worst = std::max(worst, x(j) - p.ub(j));
    }
    for (const auto& c : p.cones)
        worst = std::max({worst, x(c.p) * x(c.p) + x(c.q) * x(c.q) - x(c.v) * x(c.l), -x(c.v),
                          -x(c.l)});
    return worst;
}

SolveResult solve(const ConicProgram& p, double tol_feas, double tol_gap) {
    validate(p);
    SolveResult res;
    if (p.n == 0) {
        res.status = (p.b_eq.size() == 0 || p.b_eq.isZero(tol_feas)) &&
                             (p.b_in.size() == 0 || (p.b_in.array() >= -tol_feas).all())
                         ? SolveStatus::Optimal
                         : SolveStatus::Infeasible;
        res.x.resize(0);
        return res;
    }

    const Flat fl = flatten(p);
    const double rhs_scale = 1.0 + std::max(fl.f.size() ? fl.f.cwiseAbs().maxCoeff() : 0.0,
                                            fl.d.size() ? fl.d.cwiseAbs().maxCoeff() : 0.0);

    // Equality-feasible starting point (least norm).
    VectorXd x0 = VectorXd::Zero(p.n);
    if (fl.E.rows() > 0) {
        Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(fl.E);
        cod.setThreshold(1e-11);
        x0 = cod.solve(fl.f);
        const double eq_res = (fl.E * x0 - fl.f).cwiseAbs().maxCoeff();
        if (eq_res > 1e-8 * rhs_scale) {
            res.status = SolveStatus::Infeasible;
            res.message = "equality constraints are inconsistent";
            return res;
        }
    }
    const MatrixXd Z = nullspace(fl.E, p.n);

    // Barrier degree: one per inequality row, two per cone.
    const double nu = static_cast<double>(fl.d.size()) + 2.0 * fl.cones.size();
    if (nu == 0.0) {
        // Pure equality LP: optimal iff c is orthogonal to the nullspace.
        VectorXd gz = Z.transpose() * p.c;
        res.x = x0;
        res.objective = p.c.dot(x0);
        res.primal_residual = verify_feasibility(p, x0);
        if (gz.size() > 0 && gz.cwiseAbs().maxCoeff() > 1e-10) {
            res.status = SolveStatus::Unbounded;
            return res;
        }
        res.status = SolveStatus::Optimal;
        return res;
    }

    // ---- Phase I: find a strictly interior point. -------------------------
    VectorXd x = x0;
    {
        BarrierEval ev0 = eval_barrier(fl, x0, false);
        bool interior = ev0.feasible && ev0.min_slack > 1e-8 * rhs_scale;
        if (!interior) {
            // Augmented problem over (x, t): C x - d <= t, f_cone(x) <= t,
            // minimize t.
            Flat f1;
            f1.n = p.n + 1;
            f1.E.setZero(fl.E.rows(), f1.n);
            f1.E.leftCols(p.n) = fl.E;
            f1.f = fl.f;
            const int mi = static_cast<int>(fl.d.size());
            f1.C.setZero(mi, f1.n);
            f1.C.leftCols(p.n) = fl.C;
            f1.C.col(p.n).setConstant(-1.0);
            f1.d = fl.d;
            // Cones become norm constraints folded into eval via a wrapper:
            // handled below by explicit margin rows is not possible (nonlinear),
            // so phase I evaluates them through cone_socdist.
            MatrixXd Z1(f1.n, Z.cols() + 1);
            Z1.setZero();
            Z1.topLeftCorner(p.n, Z.cols()) = Z;
            Z1(p.n, Z.cols()) = 1.0;

            // Initial t strictly above all violations.
            double worst = 0.0;
            {
                VectorXd s = fl.d - fl.C * x0;
                if (s.size() > 0) worst = std::max(worst, -s.minCoeff());
                for (const auto& c : fl.cones)
                    worst = std::max(worst, cone_socdist(fl, c, x0, nullptr, nullptr));
            }
            VectorXd x1(f1.n);
            x1.head(p.n) = x0;
            x1(p.n) = worst + 1.0 + 0.1 * rhs_scale;

            VectorXd c1 = VectorXd::Zero(f1.n);
            c1(p.n) = 1.0;
            const double nu1 = static_cast<double>(f1.d.size()) + fl.cones.size();

            // Custom centering loop: the cone margins are nonlinear in (x,t),
            // so phase I carries its own evaluation closure.
            auto eval1 = [&](const VectorXd& xt, bool derivs) {
                BarrierEval ev;
                const VectorXd xs = xt.head(p.n);
                const double t = xt(p.n);
                if (derivs) {
                    ev.grad.setZero(f1.n);
                    ev.hess.setZero(f1.n, f1.n);
                }
                const VectorXd slack = f1.d - f1.C * xt;
                for (int r = 0; r < slack.size(); ++r) {
                    ev.min_slack = std::min(ev.min_slack, slack(r));
                    if (slack(r) <= 0) return ev;
                    ev.phi -= std::log(slack(r));
                    if (derivs) {
                        const VectorXd row = f1.C.row(r).transpose();
                        ev.grad += row / slack(r);
                        ev.hess += (row * row.transpose()) / (slack(r) * slack(r));
                    }
                }
                for (const auto& c : fl.cones) {
                    VectorXd gf;
                    MatrixXd hf;
                    const double fc =
                        cone_socdist(fl, c, xs, derivs ? &gf : nullptr, derivs ? &hf : nullptr);
                    const double s = t - fc;
                    ev.min_slack = std::min(ev.min_slack, s);
                    if (s <= 0) return ev;
                    ev.phi -= std::log(s);
                    if (derivs) {
                        VectorXd ds = VectorXd::Zero(f1.n);
                        ds.head(p.n) = -gf;
                        ds(p.n) = 1.0;
                        ev.grad += -ds / s;
                        ev.hess += (ds * ds.transpose()) / (s * s);
                        ev.hess.topLeftCorner(p.n, p.n) += hf / s;
                    }
                }
                ev.feasible = true;
                return ev;
            };

            double t_bar = 1.0;
            bool found = false, infeasible = false;
            for (int outer = 0; outer < 40; ++outer) {
                for (int it = 0; it < 60; ++it) {
                    BarrierEval ev = eval1(x1, true);
                    if (!ev.feasible) break;
                    VectorXd g = t_bar * c1 + ev.grad;
                    VectorXd gu = Z1.transpose() * g;
                    MatrixXd Hu = Z1.transpose() * ev.hess * Z1;
                    Hu.diagonal().array() += 1e-12 * (1.0 + Hu.diagonal().cwiseAbs().maxCoeff());
                    Eigen::LDLT<MatrixXd> ldlt(Hu);
                    VectorXd du = ldlt.solve(-gu);
                    const double lambda2 = -gu.dot(du);
                    ++res.iterations;
                    if (lambda2 / 2.0 <= 1e-9) break;
                    const double f0 = t_bar * c1.dot(x1) + ev.phi;
                    double alpha = 1.0;
                    const VectorXd dx = Z1 * du;
                    bool stepped = false;
                    while (alpha > 1e-14) {
                        VectorXd xn = x1 + alpha * dx;
                        BarrierEval en = eval1(xn, false);
                        if (en.feasible &&
                            t_bar * c1.dot(xn) + en.phi <= f0 + 0.25 * alpha * gu.dot(du)) {
                            x1 = xn;
                            stepped = true;
                            break;
                        }
                        alpha *= 0.5;
                    }
                    if (!stepped) break;
                    // Early exit as soon as a comfortable interior point shows up.
                    if (x1(p.n) < -1e-3 * rhs_scale) break;
                }
                const double t = x1(p.n);
                const double gap1 = nu1 / t_bar;
                if (t < -1e-3 * rhs_scale || (t < 0 && std::abs(t) > 10 * gap1)) {
                    found = true;
                    break;
                }
                if (t - gap1 > 0 && gap1 <= 1e-6 * rhs_scale) {
                    infeasible = true;
                    break;
                }
                t_bar *= 10.0;
            }
            if (infeasible) {
                res.status = SolveStatus::Infeasible;
                res.message = "phase I certified an empty interior";
                return res;
            }
            if (!found) {
                res.status = SolveStatus::NumericFailure;
                res.message = "phase I could not find a strictly interior point";
                return res;
            }
            x = x1.head(p.n);
        }
    }

    // ---- Phase II: follow the central path. -------------------------------
    const double obj_scale = std::max(1.0, std::abs(p.c.dot(x)));
    const double t_bar0 = std::max(1.0, nu / obj_scale);
    const VectorXd x_start = x;
    double gap = nu;
    // Best iterate with a certified gap bound (only a converged centering
    // certifies nu / t_bar); attempts must not overwrite it with worse ones.
    VectorXd best_x;
    double best_gap = kInf;
    // A phase-I endpoint can sit far off-center; if path following stalls,
    // restart from it with a smaller initial barrier weight, which pulls the
    // first iterate toward the analytic center before the cost takes over.
    for (int attempt = 0; attempt < 3; ++attempt) {
        if (attempt > 0) x = x_start;
        double t_bar = t_bar0 * std::pow(1e-3, attempt);
        int stalls = 0;
        bool done = false;
        for (int outer = 0; outer < 70; ++outer) {
            CenterOutcome co = center(fl, p.c, t_bar, Z, x);
            res.iterations += co.newton_steps;
            gap = nu / t_bar;
            const double obj = p.c.dot(x);
            if (obj < -1e13 * obj_scale) {
                res.status = SolveStatus::Unbounded;
                res.x = x;
                res.objective = obj;
                return res;
            }
            // A stalled centering that still made Newton progress is not
            // fatal: push mu onward and retry; give up only on dead stops.
            if (co.converged) {
                stalls = 0;
                if (gap < best_gap) {
                    best_gap = gap;
                    best_x = x;
                }
            } else if (co.stalled && (++stalls >= 2 || co.newton_steps == 0)) {
                break;
            }
            if (co.converged && gap <= tol_gap * std::max(1.0, std::abs(obj))) {
                done = true;
                break;
            }
            t_bar *= 10.0;
        }
        if (done) break;
    }
    if (best_gap < kInf) {
        x = best_x;
        gap = best_gap;
    }

    res.x = x;
    res.objective = p.c.dot(x);
    res.gap_bound = gap;
    res.primal_residual = verify_feasibility(p, x);
    if (res.primal_residual <= tol_feas && gap <= 1e-5 * std::max(1.0, std::abs(res.objective)))
        res.status = SolveStatus::Optimal;
    else {
        res.status = SolveStatus::NumericFailure;
        std::ostringstream os;
        os << "barrier stalled: residual " << res.primal_residual << ", gap bound " << gap;
        res.message = os.str();
    }
    return res;
}

std::string dump_program(const ConicProgram& p) {
    std::ostringstream os;
    os.precision(17);
    os << "vars " << p.n << "\n";
    for (int j = 0; j < p.n; ++j)
        os << "var " << p.var_names[j] << " lb " << p.lb(j) << " ub " << p.ub(j) << " cost "
           << p.c(j) << "\n";
    for (int r = 0; r < p.a_eq.rows(); ++r) {
        os << "eq";
        for (int j = 0; j < p.n; ++j)
            if (p.a_eq(r, j) != 0) os << " " << j << ":" << p.a_eq(r, j);
        os << " = " << p.b_eq(r) << "\n";
    }
    for (int r = 0; r < p.a_in.rows(); ++r) {
        os << "le";
        for (int j = 0; j < p.n; ++j)
            if (p.a_in(r, j) != 0) os << " " << j << ":" << p.a_in(r, j);
        os << " <= " << p.b_in(r) << "\n";
    }
    for (const auto& c : p.cones)
        os << "cone " << c.v << " " << c.l << " " << c.p << " " << c.q << "\n";
    return os.str();
}

}  // namespace gridflex
