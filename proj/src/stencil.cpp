#include "maob/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace maob {

namespace {

int gcd_all(const std::vector<int>& e) {
  int g = 0;
  for (int c : e) g = std::gcd(g, std::abs(c));
  return g;
}

bool canonical(const std::vector<int>& e) {
  for (int c : e)
    if (c != 0) return c > 0;
  return false;
}

int dot(const std::vector<int>& a, const std::vector<int>& b) {
  int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

int norm2(const std::vector<int>& a) { return dot(a, a); }

}  // namespace

int StencilSet::default_width(int n) { return n == 2 ? 2 : 1; }

int StencilSet::width_for(int n, int cells) {
  const int cap = n <= 2 ? 4 : 2;
  const int w = static_cast<int>(std::lround(std::sqrt(cells / 8.0)));
  return std::clamp(w, 1, cap);
}

StencilSet StencilSet::make(int n, int width) {
  if (n < 1) throw GeometryError("stencil dimension must be positive");
  if (width < 1) throw GeometryError("stencil width must be >= 1");
  StencilSet st;
  st.dim = n;
  st.width = width;
  std::vector<int> e(n, -width);
  while (true) {
    if (canonical(e) && gcd_all(e) == 1) st.directions.push_back(e);
    int a = 0;
    while (a < n && e[a] == width) {
      e[a] = -width;
      ++a;
    }
    if (a == n) break;
    ++e[a];
  }
  // Coordinate axes first (e_1, ..., e_n), then by length.
  std::stable_sort(st.directions.begin(), st.directions.end(), [](const auto& a, const auto& b) {
    if (norm2(a) != norm2(b)) return norm2(a) < norm2(b);
    return a > b;
  });

  const int m = static_cast<int>(st.directions.size());
  if (n == 1) {
    st.frames.push_back({0});
    return st;
  }
  std::vector<int> cur;
  // Depth-first enumeration of mutually orthogonal index sets.
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == n) {
      st.frames.push_back(cur);
      return;
    }
    for (int i = start; i < m; ++i) {
      bool ok = true;
      for (int j : cur) ok = ok && dot(st.directions[i], st.directions[j]) == 0;
      if (!ok) continue;
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return st;
}

Discretization::Discretization(GridMask gm, const ConvexDomain& domain, StencilSet stencil,
                               std::function<double(const Vec&)> dirichlet)
    : gm_(std::move(gm)), st_(std::move(stencil)), phi_(std::move(dirichlet)) {
  const Grid& g = gm_.grid;
  const int n = g.dim();
  if (st_.dim != n) throw GeometryError("stencil dimension does not match grid");
  const int m = direction_count();
  offset_.resize(m);
  step_.resize(m);
  for (int j = 0; j < m; ++j) {
    std::int64_t off = 0;
    double len2 = 0;
    for (int a = 0; a < n; ++a) {
      off += static_cast<std::int64_t>(st_.directions[j][a]) * static_cast<std::int64_t>(g.stride(a));
      const double c = st_.directions[j][a] * g.h()[a];
      len2 += c * c;
    }
    offset_[j] = off;
    step_[j] = std::sqrt(len2);
  }

  special_.assign(g.node_count(), -1);
  std::vector<int> ijk(n), t(n);
  std::vector<Arm> local(2 * m);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (!is_unknown(i)) continue;
    unknowns_.push_back(i);
    g.unravel(i, ijk);
    bool regular = true;
    const Vec x = g.point(i);
    for (int j = 0; j < m; ++j) {
      for (int sgn = 0; sgn < 2; ++sgn) {
        const int s = sgn == 0 ? 1 : -1;
        bool in_grid = true;
        for (int a = 0; a < n; ++a) {
          t[a] = ijk[a] + s * st_.directions[j][a];
          if (t[a] < 0 || t[a] > g.res()[a]) in_grid = false;
        }
        Arm arm;
        if (in_grid && gm_.inside[g.index(t)]) {
          arm.node = static_cast<std::int64_t>(g.index(t));
          arm.length = step_[j];
        } else {
          regular = false;
          Vec d(n);
          for (int a = 0; a < n; ++a) d[a] = s * st_.directions[j][a] * g.h()[a];
          double tt = std::clamp(domain.exit_length(x, d), 1e-3, 1.0);
          const Vec p = x + tt * d;
          arm.node = -1;
          arm.length = tt * step_[j];
          arm.value = phi_(p);
        }
        local[2 * j + sgn] = arm;
      }
    }
    if (!regular) {
      special_[i] = static_cast<std::int32_t>(cut_.size() / (2 * m));
      cut_.insert(cut_.end(), local.begin(), local.end());
    }
  }
}

void Discretization::arms(std::size_t node, int dir, Arm& plus, Arm& minus) const {
  const std::int32_t s = special_[node];
  if (s >= 0) {
    const std::size_t base = static_cast<std::size_t>(s) * 2 * direction_count();
    plus = cut_[base + 2 * dir];
    minus = cut_[base + 2 * dir + 1];
    return;
  }
  plus = Arm{static_cast<std::int64_t>(node) + offset_[dir], step_[dir], 0.0};
  minus = Arm{static_cast<std::int64_t>(node) - offset_[dir], step_[dir], 0.0};
}

double Discretization::second_difference(const std::vector<double>& v, std::size_t node, int dir) const {
  const std::int32_t s = special_[node];
  const double u = v[node];
  if (s < 0) {
    const double h = step_[dir];
    return (v[node + offset_[dir]] + v[node - offset_[dir]] - 2 * u) / (h * h);
  }
  Arm p, m;
  arms(node, dir, p, m);
  const double vp = p.node >= 0 ? v[p.node] : p.value;
  const double vm = m.node >= 0 ? v[m.node] : m.value;
  return 2.0 / (p.length + m.length) * ((vp - u) / p.length + (vm - u) / m.length);
}

double ma_operator(const Discretization& d, const std::vector<double>& v, std::size_t node) {
  const int m = d.direction_count();
  double delta[64];
  std::vector<double> big;
  double* dd = delta;
  if (m > 64) {
    big.resize(m);
    dd = big.data();
  }
  for (int j = 0; j < m; ++j) dd[j] = std::max(d.second_difference(v, node, j), 0.0);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : d.stencil().frames) {
    double p = 1.0;
    for (int j : f) p *= dd[j];
    best = std::min(best, p);
  }
  return best;
}

double ma_operator(const Discretization& d, const ScalarField& v, std::size_t node) {
  if (!(v.grid == d.grid())) throw GeometryError("field grid does not match discretization");
  return ma_operator(d, v.values, node);
}

}  // namespace maob
