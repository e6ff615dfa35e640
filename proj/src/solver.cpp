#include "maob/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace maob {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Lower clamp for second differences when forming policy weights, relative
// to the n-th root of the right-hand side.
constexpr double kEta = 1e-8;
constexpr std::size_t kDirectLimit = 60000;

double data_scale(const Discretization& d, const std::vector<double>& v) {
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (d.mask().inside[i] && !d.is_unknown(i)) s = std::max(s, std::abs(v[i]));
  return s > 0 ? s : 1.0;
}

struct Coeffs {
  double plus, minus, center;  // Delta = plus*v+ + minus*v- + center*u
};

Coeffs coeffs(const Arm& p, const Arm& m) {
  const double a = p.length, b = m.length;
  return {2.0 / (a * (a + b)), 2.0 / (b * (a + b)), -2.0 / (a * b)};
}

double arm_value(const Arm& a, const std::vector<double>& v) { return a.node >= 0 ? v[a.node] : a.value; }

// Pointwise solution u of MA_h = f at one node, neighbours frozen.
double local_solve(const Discretization& d, const std::vector<double>& v, std::size_t node, double f,
                   std::vector<double>& mval, std::vector<double>& bval) {
  const int m = d.direction_count();
  const int n = d.grid().dim();
  for (int j = 0; j < m; ++j) {
    Arm p, q;
    d.arms(node, j, p, q);
    const Coeffs c = coeffs(p, q);
    const double A = c.plus * arm_value(p, v) + c.minus * arm_value(q, v);
    bval[j] = -c.center;
    mval[j] = A / bval[j];
  }
  if (f <= 0) return *std::min_element(mval.begin(), mval.begin() + m);
  double best = kInf;
  double dj[8];
  for (const auto& fr : d.stencil().frames) {
    double mmin = kInf, bprod = 1.0;
    for (int j : fr) {
      mmin = std::min(mmin, mval[j]);
      bprod *= bval[j];
    }
    for (int i = 0; i < n; ++i) dj[i] = mval[fr[i]] - mmin;
    const double P = f / bprod;
    double s = std::pow(P, 1.0 / n);
    for (int it = 0; it < 100; ++it) {
      double prod = 1.0, dprod = 0.0;
      for (int i = 0; i < n; ++i) {
        dprod = dprod * (dj[i] + s) + prod;
        prod *= dj[i] + s;
      }
      const double step = (prod - P) / dprod;
      s -= step;
      if (std::abs(step) <= 1e-15 * s) break;
    }
    best = std::min(best, mmin - s);
  }
  return best;
}

long jacobi_inner(const Discretization& d, const std::vector<double>& f, std::vector<double>& v, double damping,
                  double tol, int max_sweeps) {
  const auto& unk = d.unknowns();
  const int m = d.direction_count();
  std::vector<double> next = v, mval(m), bval(m);
  long sweeps = 0;
  for (int s = 0; s < max_sweeps; ++s) {
    double change = 0;
    for (std::size_t k = 0; k < unk.size(); ++k) {
      const std::size_t i = unk[k];
      const double u = local_solve(d, v, i, f[i], mval, bval);
      const double nv = std::max(v[i] + damping * (u - v[i]), 0.0);
      change = std::max(change, std::abs(nv - v[i]));
      next[i] = nv;
    }
    v.swap(next);
    ++sweeps;
    if (change < tol) break;
  }
  return sweeps;
}

// Pointwise solution u >= 0 of MA_h = g (u^+)^q (q > 0) or MA_h = g with the
// obstacle u >= 0 (q = 0), neighbours frozen.
double local_solve_coupled(const Discretization& d, const std::vector<double>& v, std::size_t node, double g,
                           double q, std::vector<double>& mval, std::vector<double>& bval) {
  const int m = d.direction_count();
  const int n = d.grid().dim();
  for (int j = 0; j < m; ++j) {
    Arm p, r;
    d.arms(node, j, p, r);
    const Coeffs c = coeffs(p, r);
    bval[j] = -c.center;
    mval[j] = (c.plus * arm_value(p, v) + c.minus * arm_value(r, v)) / bval[j];
  }
  double best = kInf;
  double dj[8];
  for (const auto& fr : d.stencil().frames) {
    double mmin = kInf, bprod = 1.0;
    for (int j : fr) {
      mmin = std::min(mmin, mval[j]);
      bprod *= bval[j];
    }
    if (mmin <= 0) return 0.0;
    for (int i = 0; i < n; ++i) dj[i] = mval[fr[i]] - mmin;
    const double P = g / bprod;
    // psi(s) = prod (d_i + s) - P (mmin - s)^q is increasing on [0, mmin].
    double lo = 0.0, hi = mmin;
    double s = std::min(std::pow(P * std::pow(mmin, q), 1.0 / n), 0.5 * mmin);
    for (int it = 0; it < 200; ++it) {
      double prod = 1.0, dprod = 0.0;
      for (int i = 0; i < n; ++i) {
        dprod = dprod * (dj[i] + s) + prod;
        prod *= dj[i] + s;
      }
      const double rest = mmin - s;
      const double psi = prod - P * (q > 0 ? std::pow(rest, q) : 1.0);
      const double dpsi = dprod + (q > 0 ? P * q * std::pow(rest, q - 1) : 0.0);
      if (psi > 0) hi = s;
      else lo = s;
      double next = s - psi / dpsi;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - s) <= 1e-15 * mmin) {
        s = next;
        break;
      }
      s = next;
    }
    best = std::min(best, mmin - s);
  }
  return std::max(best, 0.0);
}

long jacobi_coupled(const Discretization& d, const ProblemSpec& p, std::vector<double>& v, double damping,
                    double tol, int max_sweeps, std::vector<double>& changes) {
  const auto& unk = d.unknowns();
  const int m = d.direction_count();
  std::vector<double> gval(unk.size());
  for (std::size_t k = 0; k < unk.size(); ++k) gval[k] = p.g_at(d.grid().point(unk[k]));
  std::vector<double> next = v, mval(m), bval(m);
  long sweeps = 0;
  for (int s = 0; s < max_sweeps; ++s) {
    double change = 0;
    for (std::size_t k = 0; k < unk.size(); ++k) {
      const std::size_t i = unk[k];
      const double u = local_solve_coupled(d, v, i, gval[k], p.q, mval, bval);
      const double nv = std::max(v[i] + damping * (u - v[i]), 0.0);
      change = std::max(change, std::abs(nv - v[i]));
      next[i] = nv;
    }
    v.swap(next);
    ++sweeps;
    changes.push_back(change);
    if (change < tol) break;
  }
  return sweeps;
}

// Per-node right-hand side in n-th root form, T_i(v) = target + slope (v_i - at).
// Frozen: T = f^{1/n}. Coupled: T = g^{1/n} (v^+)^{q/n}, or g^{1/n} when q = 0.
struct RootRhs {
  const std::vector<double>* frozen = nullptr;
  std::vector<double> groot;  // g^{1/n} per node (coupled)
  double p = 0.0;             // q / n
  double delta = 0.0;         // slope cap point for (v^+)^p near 0

  void at(std::size_t i, double vi, int n, double& target, double& slope, double& at_v) const {
    if (frozen) {
      target = (*frozen)[i] > 0 ? std::pow((*frozen)[i], 1.0 / n) : 0.0;
      slope = 0.0;
      at_v = 0.0;
      return;
    }
    if (p == 0) {
      target = groot[i];
      slope = 0.0;
      at_v = 0.0;
      return;
    }
    const double vk = std::max(vi, 0.0);
    target = groot[i] * std::pow(vk, p);
    slope = groot[i] * p * std::pow(std::max(vk, delta), p - 1.0);
    at_v = vk;
  }
};

// Policy iteration on  max(min_policy (L_policy v - T(v)), -kappa v) = 0.
// A policy is the obstacle row v = 0, a frame with AM-GM weights (T > 0) or a
// single direction (T = 0).
class PolicySolver {
 public:
  // Without the obstacle the problem is a pure min over policies, for which
  // the iteration is monotone.
  explicit PolicySolver(const Discretization& d, bool obstacle = true) : d_(d), obstacle_(obstacle) {
    const auto& unk = d.unknowns();
    index_.assign(d.grid().node_count(), -1);
    for (std::size_t k = 0; k < unk.size(); ++k) index_[unk[k]] = static_cast<std::int64_t>(k);
    const double h = d.grid().max_h();
    kappa_ = 1.0 / (h * h);
  }

  // Returns the number of linear solves. `changes` receives the sup update of each.
  long solve(const RootRhs& rhs, std::vector<double>& v, double tol, int max_iter,
             std::vector<double>* changes = nullptr) {
    long iters = 0;
    std::vector<int> policy, last;
    for (int it = 0; it < max_iter; ++it) {
      assemble(rhs, v, policy);
      const Eigen::VectorXd x = linear_solve();
      double change = 0;
      const auto& unk = d_.unknowns();
      for (std::size_t k = 0; k < unk.size(); ++k) {
        change = std::max(change, std::abs(x[k] - v[unk[k]]));
        v[unk[k]] = x[k];
      }
      ++iters;
      if (changes) changes->push_back(change);
      if (change < tol) break;
      last = policy;
    }
    return iters;
  }

 private:
  void assemble(const RootRhs& model, const std::vector<double>& v, std::vector<int>& policy) {
    const auto& unk = d_.unknowns();
    const int m = d_.direction_count();
    const int n = d_.grid().dim();
    const auto& frames = d_.stencil().frames;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(unk.size() * (2 * n + 1));
    rhs_.resize(static_cast<Eigen::Index>(unk.size()));
    policy.assign(unk.size(), 0);
    std::vector<double> delta(m), weight(m);
    std::vector<int> active;
    for (std::size_t k = 0; k < unk.size(); ++k) {
      const std::size_t i = unk[k];
      for (int j = 0; j < m; ++j) delta[j] = d_.second_difference(v, i, j);
      active.clear();
      double target = 0.0, slope = 0.0, at_v = 0.0;
      model.at(i, v[i], n, target, slope, at_v);
      double pde = 0.0;  // value of the PDE branch at v
      if (target <= 0) {
        const int j = static_cast<int>(std::min_element(delta.begin(), delta.end()) - delta.begin());
        active.push_back(j);
        weight[j] = 1.0;
        policy[k] = -1 - j;
        pde = delta[j];
      } else {
        const double floor = kEta * target;
        int best = 0;
        double best_plain = kInf, best_clamped = kInf;
        for (std::size_t fi = 0; fi < frames.size(); ++fi) {
          double plain = 1.0, clamped = 1.0;
          for (int j : frames[fi]) {
            plain *= std::max(delta[j], 0.0);
            clamped *= std::max(delta[j], floor);
          }
          if (plain < best_plain || (plain == best_plain && clamped < best_clamped)) {
            best = static_cast<int>(fi);
            best_plain = plain;
            best_clamped = clamped;
          }
        }
        const double G = std::pow(best_clamped, 1.0 / n);
        for (int j : frames[best]) {
          active.push_back(j);
          weight[j] = G / std::max(delta[j], floor) / n;
        }
        policy[k] = best;
        pde = std::pow(best_plain, 1.0 / n) - target;
      }
      // Obstacle branch of max(PDE, -kappa v) = 0.
      if (obstacle_ && -kappa_ * v[i] >= pde) {
        trips.emplace_back(static_cast<int>(k), static_cast<int>(k), 1.0);
        rhs_[static_cast<Eigen::Index>(k)] = 0.0;
        policy[k] = std::numeric_limits<int>::min();
        continue;
      }
      double diag = -slope, rhs = target - slope * at_v;
      const std::size_t row_start = trips.size();
      for (int j : active) {
        Arm p, q;
        d_.arms(i, j, p, q);
        const Coeffs c = coeffs(p, q);
        const double w = weight[j];
        diag += w * c.center;
        for (const auto& [arm, coef] : {std::pair{p, c.plus}, std::pair{q, c.minus}}) {
          if (arm.node >= 0 && index_[arm.node] >= 0) {
            trips.emplace_back(static_cast<int>(k), static_cast<int>(index_[arm.node]), w * coef);
          } else {
            rhs -= w * coef * arm_value(arm, v);
          }
        }
      }
      trips.emplace_back(static_cast<int>(k), static_cast<int>(k), diag);
      // Row scaling by the diagonal keeps the iterative solver well conditioned.
      const double inv = 1.0 / diag;
      for (std::size_t t = row_start; t < trips.size(); ++t) {
        trips[t] = Eigen::Triplet<double>(trips[t].row(), trips[t].col(), trips[t].value() * inv);
      }
      rhs_[static_cast<Eigen::Index>(k)] = rhs * inv;
    }
    A_.resize(static_cast<Eigen::Index>(unk.size()), static_cast<Eigen::Index>(unk.size()));
    A_.setFromTriplets(trips.begin(), trips.end());
    A_.makeCompressed();
    guess_.resize(static_cast<Eigen::Index>(unk.size()));
    for (std::size_t k = 0; k < unk.size(); ++k) guess_[static_cast<Eigen::Index>(k)] = v[unk[k]];
  }

  Eigen::VectorXd linear_solve() {
    if (A_.rows() == 0) return Eigen::VectorXd();
    if (d_.grid().dim() <= 2 && static_cast<std::size_t>(A_.rows()) <= kDirectLimit) {
      Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
      lu.compute(A_);
      if (lu.info() == Eigen::Success) return lu.solve(rhs_);
    }
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::DiagonalPreconditioner<double>> it;
    it.setTolerance(1e-13);
    it.setMaxIterations(20000);
    it.compute(A_);
    Eigen::VectorXd x = it.solveWithGuess(rhs_, guess_);
    return x;
  }

  const Discretization& d_;
  double kappa_ = 1.0;
  bool obstacle_ = true;
  std::vector<std::int64_t> index_;
  Eigen::SparseMatrix<double> A_;
  Eigen::VectorXd rhs_, guess_;
};

std::vector<double> boundary_filled(const Discretization& d) {
  const Grid& g = d.grid();
  std::vector<double> v(g.node_count(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (!d.mask().inside[i]) continue;
    v[i] = d.is_unknown(i) ? 0.0 : d.dirichlet(g.point(i));
  }
  return v;
}

double default_eps_pos(const Discretization& d, double eps) {
  if (eps > 0) return eps;
  const double h = d.grid().max_h();
  return h * h;
}

}  // namespace

void ProblemSpec::validate() const {
  if (n < 1) throw SpecError("dimension must be positive");
  if (domain.dim() != n) throw SpecError("domain dimension does not match n");
  if (!(q >= 0 && q < n)) throw SpecError("q must lie in [0, n)");
  if (!(g_min > 0 && g_min <= g_max && std::isfinite(g_max))) throw SpecError("g bounds must satisfy 0 < g_min <= g_max < inf");
  if (!dirichlet) throw SpecError("missing boundary data");
  if (max_outer < 1 || max_inner < 1) throw SpecError("iteration limits must be positive");
}

std::vector<double> rhs_values(const Discretization& d, const ProblemSpec& p, const std::vector<double>& v,
                               double eps_pos) {
  const Grid& g = d.grid();
  std::vector<double> f(g.node_count(), 0.0);
  eps_pos = default_eps_pos(d, eps_pos);
  for (auto i : d.unknowns()) {
    const double gi = p.g_at(g.point(i));
    if (p.q > 0) f[i] = gi * std::pow(std::max(v[i], 0.0), p.q);
    else f[i] = v[i] > eps_pos ? gi : 0.0;
  }
  return f;
}

Discretization discretize(const ProblemSpec& p, std::span<const int> res_cells, int width) {
  p.validate();
  GridMask gm = make_grid(p.domain, res_cells);
  const int cells = *std::max_element(res_cells.begin(), res_cells.end());
  StencilSet st = StencilSet::make(p.n, width > 0 ? width : StencilSet::width_for(p.n, cells));
  return Discretization(std::move(gm), p.domain, std::move(st), p.dirichlet);
}

Discretization discretize(const ProblemSpec& p, int res_cells, int width) {
  std::vector<int> r(p.n, res_cells);
  return discretize(p, r, width);
}

ScalarField convex_envelope(const Discretization& d, int max_sweeps, double tol) {
  std::vector<double> v = boundary_filled(d);
  const double top = data_scale(d, v);
  double hi = -kInf;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (d.mask().inside[i] && !d.is_unknown(i)) hi = std::max(hi, v[i]);
  for (auto i : d.unknowns()) v[i] = hi;
  std::vector<double> zero(v.size(), 0.0);
  RootRhs rhs;
  rhs.frozen = &zero;
  // Nonnegative data keeps the envelope nonnegative, so no obstacle is needed.
  PolicySolver ps(d, false);
  ps.solve(rhs, v, tol * top, std::max(1, std::min(max_sweeps, 200)));
  ScalarField out(d.grid(), d.mask().inside);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (d.mask().inside[i]) out.values[i] = v[i];
  return out;
}

SolveResult solve_dirichlet(const ProblemSpec& p, const Discretization& d, const SolverOptions& opts) {
  p.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const Grid& g = d.grid();
  if (g.dim() != p.n) throw SpecError("grid dimension does not match n");

  std::vector<double> v = boundary_filled(d);
  const double scale = data_scale(d, v);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (d.mask().inside[i] && !d.is_unknown(i) && v[i] < -1e-14 * scale) throw SpecError("negative boundary data");

  if (opts.init == InitialGuess::given) {
    if (!opts.initial || !(opts.initial->grid == g)) throw SpecError("initial field missing or on another grid");
    for (auto i : d.unknowns()) v[i] = std::max(opts.initial->values[i], 0.0);
  } else if (opts.init == InitialGuess::envelope) {
    const ScalarField env = convex_envelope(d);
    for (auto i : d.unknowns()) v[i] = env.values[i];
  }

  const double tol_outer = p.tol_outer > 0 ? p.tol_outer : 1e-7 * scale;
  const double tol_inner = p.tol_inner > 0 ? p.tol_inner : tol_outer / 10;
  const double eps_pos = default_eps_pos(d, opts.eps_pos);
  const double omega = opts.relaxation > 0 ? opts.relaxation : p.n / (p.n + p.q);

  SolveReport rep;
  auto record = [&](double update) {
    ++rep.outer_iters;
    rep.update_history.push_back(update);
    ScalarField cur(g, d.mask().inside);
    for (std::size_t i = 0; i < v.size(); ++i)
      if (d.mask().inside[i]) cur.values[i] = v[i];
    rep.residual_history.push_back(residual_norm(cur, p, d, eps_pos));
  };

  if (opts.outer == OuterMethod::coupled && opts.inner == InnerMethod::policy) {
    RootRhs rhs;
    rhs.groot.assign(g.node_count(), 0.0);
    for (auto i : d.unknowns()) rhs.groot[i] = std::pow(p.g_at(g.point(i)), 1.0 / p.n);
    rhs.p = p.q / p.n;
    rhs.delta = 1e-12 * scale;
    PolicySolver policy(d);
    for (int m = 0; m < p.max_outer; ++m) {
      std::vector<double> ch;
      rep.inner_iters += policy.solve(rhs, v, tol_outer, 1, &ch);
      for (auto i : d.unknowns()) v[i] = std::max(v[i], 0.0);
      record(ch.empty() ? 0.0 : ch.back());
      // A step from a degenerate start can be tiny without being converged,
      // so two consecutive small updates are required.
      const auto& u = rep.update_history;
      if (u.size() >= 2 && u[u.size() - 1] < tol_outer && u[u.size() - 2] < tol_outer) {
        rep.converged = true;
        break;
      }
    }
  } else if (opts.outer == OuterMethod::coupled) {
    std::vector<double> ch;
    rep.inner_iters = jacobi_coupled(d, p, v, opts.damping, tol_inner, p.max_inner, ch);
    record(ch.empty() ? 0.0 : ch.back());
    rep.converged = !ch.empty() && ch.back() < tol_inner;
  } else {
    PolicySolver policy(d);
    std::vector<double> w;
    for (int m = 0; m < p.max_outer; ++m) {
      const std::vector<double> f = rhs_values(d, p, v, eps_pos);
      w = v;
      if (opts.inner == InnerMethod::jacobi) {
        rep.inner_iters += jacobi_inner(d, f, w, opts.damping, tol_inner, p.max_inner);
      } else {
        RootRhs rhs;
        rhs.frozen = &f;
        rep.inner_iters += policy.solve(rhs, w, tol_inner, std::min(p.max_inner, 200));
      }
      double update = 0;
      for (auto i : d.unknowns()) {
        update = std::max(update, std::abs(w[i] - v[i]));
        v[i] = std::max(v[i] + omega * (w[i] - v[i]), 0.0);
      }
      record(update);
      if (update < tol_outer) {
        rep.converged = true;
        break;
      }
    }
  }

  SolveResult out{ScalarField(g, d.mask().inside), {}};
  for (std::size_t i = 0; i < v.size(); ++i)
    if (d.mask().inside[i]) out.v.values[i] = v[i];
  rep.final_residual = rep.residual_history.empty() ? 0.0 : rep.residual_history.back();
  rep.min_value = out.v.min_value();
  rep.K_cells.grid = g;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (d.mask().inside[i] && v[i] <= eps_pos) rep.K_cells.members.push_back(i);
  if (!rep.converged) rep.flags.push_back("non-converged");
  for (std::size_t m = 3; m < rep.residual_history.size(); ++m) {
    if (rep.residual_history[m] > rep.residual_history[m - 1] * (1 + 1e-6) + 1e-14 * scale) {
      rep.flags.push_back("residual-increase");
      break;
    }
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.report = std::move(rep);
  return out;
}

double residual_norm(const ScalarField& v, const ProblemSpec& p, const Discretization& d, double eps_pos) {
  if (!(v.grid == d.grid())) throw SpecError("field grid does not match discretization");
  eps_pos = default_eps_pos(d, eps_pos);
  const Grid& g = d.grid();
  double r = 0;
  for (auto i : d.unknowns()) {
    const double ma = ma_operator(d, v.values, i);
    const double gi = p.g_at(g.point(i));
    double e;
    if (p.q > 0) e = std::abs(ma - gi * std::pow(std::max(v.values[i], 0.0), p.q));
    else if (v.values[i] > eps_pos) e = std::abs(ma - gi);
    else e = std::max(ma - gi, 0.0);
    r = std::max(r, e);
  }
  return r;
}

namespace {

// sign +1: sup of (rhs - MA_h)^+, the failure to be a subsolution.
// sign -1: sup of (MA_h - rhs)^+, the failure to be a supersolution.
// For q = 0 the right-hand side is the graph {g} above eps_pos and [0, g] below.
double one_sided_residual(const ScalarField& v, const ProblemSpec& p, const Discretization& d, int sign) {
  const double eps_pos = default_eps_pos(d, 0.0);
  const Grid& g = d.grid();
  double r = 0;
  for (auto i : d.unknowns()) {
    const double ma = ma_operator(d, v.values, i);
    const double gi = p.g_at(g.point(i));
    const double vi = std::max(v.values[i], 0.0);
    double lo, hi;
    if (p.q > 0) lo = hi = gi * std::pow(vi, p.q);
    else if (vi > eps_pos) lo = hi = gi;
    else lo = 0.0, hi = gi;
    r = std::max(r, sign > 0 ? lo - ma : ma - hi);
  }
  return r;
}

}  // namespace

ComparisonReport check_comparison(const ScalarField& sub, const ScalarField& sup, const ProblemSpec& p_sub,
                                  const ProblemSpec& p_sup, const Discretization& d_sub,
                                  const Discretization& d_sup) {
  if (!(sub.grid == sup.grid) || !(sub.grid == d_sub.grid()) || !(sup.grid == d_sup.grid()))
    throw SpecError("hypotheses not met");
  double scale = 0;
  for (std::size_t i = 0; i < sub.size(); ++i)
    if (sub.inside(i)) scale = std::max({scale, std::abs(sub.values[i]), std::abs(sup.values[i])});
  const double tol = 1e-12 * std::max(scale, 1.0);
  for (std::size_t i = 0; i < sub.size(); ++i) {
    if (!sub.inside(i) || d_sub.is_unknown(i)) continue;
    if (sub.values[i] > sup.values[i] + tol) throw SpecError("hypotheses not met");
  }
  ComparisonReport rep;
  rep.residual_sub = one_sided_residual(sub, p_sub, d_sub, +1);
  rep.residual_sup = one_sided_residual(sup, p_sup, d_sup, -1);
  const double diam = d_sub.grid().dim() > 0 ? [&] {
    double s = 0;
    for (int a = 0; a < sub.grid.dim(); ++a) s += std::pow(sub.grid.hi()[a] - sub.grid.lo()[a], 2);
    return std::sqrt(s);
  }() : 0.0;
  rep.slack = 5.0 * std::max(rep.residual_sub, rep.residual_sup) * diam * diam;
  rep.max_violation = -kInf;
  for (auto i : d_sub.unknowns()) rep.max_violation = std::max(rep.max_violation, sub.values[i] - sup.values[i]);
  if (d_sub.unknowns().empty()) rep.max_violation = 0;
  rep.holds = rep.max_violation <= rep.slack + tol;
  return rep;
}

ComparisonReport check_comparison(const ScalarField& sub, const ScalarField& sup, const ProblemSpec& p,
                                  const Discretization& d) {
  return check_comparison(sub, sup, p, p, d, d);
}

ScalarField sample_field(const GridMask& gm, const ScalarFn& f) {
  ScalarField out(gm.grid, gm.inside);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (gm.inside[i]) out.values[i] = f(gm.grid.point(i));
  return out;
}

double sup_difference(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid == b.grid)) throw GeometryError("fields on different grids");
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.inside(i) && b.inside(i)) s = std::max(s, std::abs(a.values[i] - b.values[i]));
  return s;
}

}  // namespace maob
