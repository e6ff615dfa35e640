#include "maob/free_boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace maob {

namespace {

double median(std::vector<double> a) {
  const std::size_t m = a.size() / 2;
  std::nth_element(a.begin(), a.begin() + m, a.end());
  double hi = a[m];
  if (a.size() % 2 == 1) return hi;
  const double lo = *std::max_element(a.begin(), a.begin() + m);
  return 0.5 * (lo + hi);
}

}  // namespace

void FitReport::judge() {
  pass = lower_bound ? estimate >= theory - tolerance : std::abs(estimate - theory) <= tolerance;
}

FitReport fit_loglog(const std::vector<double>& x, const std::vector<double>& y, double theory, double tolerance,
                     bool lower_bound) {
  FitReport r;
  r.theory = theory;
  r.tolerance = tolerance;
  r.lower_bound = lower_bound;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    r.log_x.push_back(std::log(x[i]));
    r.log_y.push_back(std::log(y[i]));
  }
  const std::size_t m = r.log_x.size();
  if (m < 4) throw AnalysisError("insufficient dynamic range");
  const double mx = std::accumulate(r.log_x.begin(), r.log_x.end(), 0.0) / m;
  const double my = std::accumulate(r.log_y.begin(), r.log_y.end(), 0.0) / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (r.log_x[i] - mx) * (r.log_x[i] - mx);
    sxy += (r.log_x[i] - mx) * (r.log_y[i] - my);
    syy += (r.log_y[i] - my) * (r.log_y[i] - my);
  }
  if (sxx <= 0) throw AnalysisError("insufficient dynamic range");
  r.estimate = sxy / sxx;
  r.intercept = my - r.estimate * mx;
  r.r_squared = syy > 0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  r.window_lo = std::exp(*std::min_element(r.log_x.begin(), r.log_x.end()));
  r.window_hi = std::exp(*std::max_element(r.log_x.begin(), r.log_x.end()));
  r.judge();
  return r;
}

double default_eps_K(const Grid& grid, double q, double final_residual) {
  const int n = grid.dim();
  const double h = grid.max_h();
  const double from_res = final_residual > 0 ? 10.0 * std::pow(final_residual, 2.0 / (n - q)) : 0.0;
  return std::max(from_res, 0.01 * std::pow(h, 2.0 * n / (n - q)));
}

CellSet coincidence_set(const ScalarField& v, double eps_K) {
  CellSet K;
  K.grid = v.grid;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v.inside(i) && v.values[i] < eps_K) K.members.push_back(i);
  return K;
}

FaceDecomposition classify_gamma(const CellSet& K, const ConvexDomain& domain, FaceOptions opts) {
  return exposed_faces(K, domain, opts);
}

int flat_dimension(const Face& face) { return face.affine_dim; }

int flat_dimension(const Grid& grid, const std::vector<std::size_t>& nodes, const Vec& normal, double tol) {
  std::vector<Vec> pts;
  pts.reserve(nodes.size());
  for (auto m : nodes) pts.push_back(grid.point(m));
  if (pts.size() < 2) return 0;
  return std::min(flat_rank(pts, normal, tol), grid.dim() - 1);
}

int gamma_nsc_dimension(const FaceDecomposition& fd) {
  const std::vector<std::size_t> nodes = fd.nsc_nodes();
  if (nodes.empty()) return 0;
  return local_dimension(fd.grid, nodes, 4.0 * fd.grid.max_h());
}

FitReport growth_exponent(const ScalarField& v, const CellSet& K, const GrowthOptions& opts) {
  if (K.empty()) throw AnalysisError("no coincidence set");
  const Grid& g = v.grid;
  std::vector<std::uint8_t> seed(g.node_count(), 0);
  for (auto m : K.members) seed[m] = 1;
  const std::vector<double> dist = distance_transform(g, seed);
  const double h = g.max_h();
  double diam = 0;
  for (int a = 0; a < g.dim(); ++a) diam += std::pow(g.hi()[a] - g.lo()[a], 2);
  diam = std::sqrt(diam);

  std::vector<double> shells = opts.shells;
  if (shells.empty()) {
    const double lo = 3 * h, hi = diam / 4;
    for (int i = 0; i <= 10; ++i) shells.push_back(lo * std::pow(hi / lo, i / 10.0));
  }
  std::vector<std::vector<double>> sv(shells.size()), sd(shells.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v.inside(i) || seed[i]) continue;
    const double d = dist[i];
    if (d < 3 * h || d > diam / 4) continue;
    if (opts.domain && opts.domain->boundary_distance(g.point(i)) < opts.core_margin) continue;
    const auto it = std::upper_bound(shells.begin(), shells.end(), d);
    if (it == shells.begin() || it == shells.end()) continue;
    const std::size_t s = static_cast<std::size_t>(it - shells.begin()) - 1;
    sv[s].push_back(v.values[i]);
    sd[s].push_back(d);
  }
  std::vector<double> x, y;
  for (std::size_t s = 0; s < shells.size(); ++s) {
    if (sv[s].size() < 3) continue;
    x.push_back(median(sd[s]));
    y.push_back(median(sv[s]));
  }
  return fit_loglog(x, y, opts.theory, opts.tolerance, false);
}

FitReport section_scaling(const ScalarField& v, const std::vector<double>& levels, double theory, double tolerance,
                          const std::optional<Halfspace>& keep) {
  std::vector<double> vol;
  for (double h : levels) vol.push_back(sublevel_volume(v, h, keep));
  FitReport r = fit_loglog(levels, vol, theory, tolerance, true);
  if (r.window_hi < 9.5 * r.window_lo) throw AnalysisError("insufficient dynamic range");
  return r;
}

std::vector<double> default_levels(const ScalarField& v, int count, double top_fraction,
                                   const std::optional<Halfspace>& keep) {
  double top = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v.inside(i)) continue;
    if (keep && keep->value(v.grid.point(i)) > 0) continue;
    top = std::max(top, v.values[i]);
  }
  if (!(top > 0) || count < 2) throw AnalysisError("insufficient dynamic range");
  std::vector<double> out;
  const double hi = top_fraction * top;
  for (int i = count - 1; i >= 0; --i) out.push_back(hi * std::pow(0.1, static_cast<double>(i) / (count - 1)));
  return out;
}

Halfspace beyond_support(const CellSet& K, const Vec& nu) {
  if (K.empty()) throw AnalysisError("no coincidence set");
  const Vec u = nu.normalized();
  double c = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < K.size(); ++k) c = std::max(c, u.dot(K.center(k)));
  return Halfspace{-u, -c - 0.5 * K.grid.max_h()};
}

std::vector<double> collar_integral(const ScalarField& v, const std::vector<std::size_t>& face,
                                    const std::vector<double>& deltas) {
  const Grid& g = v.grid;
  const int n = g.dim();
  const double h = g.max_h();
  for (double d : deltas)
    if (d < 3 * h * (1 - 1e-12)) throw AnalysisError("below resolution");
  if (face.empty()) throw AnalysisError("empty face");
  std::vector<std::uint8_t> seed(g.node_count(), 0);
  for (auto m : face) seed[m] = 1;
  const std::vector<double> dist = distance_transform(g, seed);

  std::vector<double> lap(g.node_count(), std::numeric_limits<double>::quiet_NaN());
  std::vector<int> ijk(n);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (!v.inside(i)) continue;
    g.unravel(i, ijk);
    double s = 0;
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) {
      if (ijk[a] == 0 || ijk[a] == g.res()[a]) {
        ok = false;
        break;
      }
      const std::size_t p = i + g.stride(a), m = i - g.stride(a);
      if (!v.inside(p) || !v.inside(m)) {
        ok = false;
        break;
      }
      s += (v.values[p] + v.values[m] - 2 * v.values[i]) / (g.h()[a] * g.h()[a]);
    }
    if (ok) lap[i] = std::abs(s);
  }
  std::vector<double> out;
  for (double d : deltas) {
    double sum = 0;
    for (std::size_t i = 0; i < g.node_count(); ++i)
      if (std::isfinite(lap[i]) && dist[i] < d) sum += lap[i];
    out.push_back(sum * g.cell_volume());
  }
  return out;
}

}  // namespace maob
