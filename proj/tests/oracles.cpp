#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>

#include "capflow/mincut.hpp"
#include "capflow/stepper.hpp"

namespace oracle {

using capflow::GridSpec;
using capflow::IndicatorSet;

std::vector<double> all_pairs_signed_distance(const IndicatorSet& f) {
  const GridSpec& g = f.grid();
  const std::size_t n = g.cell_count();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = g.cell(i);
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (std::size_t j = 0; j < n; ++j) {
      if (f.contains(j) == f.contains(i)) continue;
      const auto b = g.cell(j);
      const std::int64_t dx = a.ix - b.ix, dy = a.iy - b.iy, dz = a.iz - b.iz;
      best = std::min(best, dx * dx + dy * dy + dz * dz);
    }
    const double d = std::sqrt(static_cast<double>(best)) * g.dx() - 0.5 * g.dx();
    out[i] = f.contains(i) ? -d : d;
  }
  return out;
}

namespace {

struct Dinic {
  struct E {
    int to;
    std::int64_t cap;
  };
  std::vector<E> es;
  std::vector<std::vector<int>> adj;
  std::vector<int> level, it;
  explicit Dinic(int n) : adj(n), level(n), it(n) {}
  void add(int a, int b, std::int64_t c, std::int64_t rc) {
    adj[a].push_back(static_cast<int>(es.size()));
    es.push_back({b, c});
    adj[b].push_back(static_cast<int>(es.size()));
    es.push_back({a, rc});
  }
  bool bfs(int s, int t) {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    level[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int id : adj[v])
        if (es[id].cap > 0 && level[es[id].to] < 0) {
          level[es[id].to] = level[v] + 1;
          q.push(es[id].to);
        }
    }
    return level[t] >= 0;
  }
  std::int64_t dfs(int v, int t, std::int64_t f) {
    if (v == t) return f;
    for (int& k = it[v]; k < static_cast<int>(adj[v].size()); ++k) {
      const int id = adj[v][k];
      E& e = es[id];
      if (e.cap > 0 && level[e.to] == level[v] + 1) {
        const std::int64_t got = dfs(e.to, t, std::min(f, e.cap));
        if (got > 0) {
          e.cap -= got;
          es[id ^ 1].cap += got;
          return got;
        }
      }
    }
    return 0;
  }
};

}  // namespace

FlowResult dinic(const FlowInstance& inst) {
  const int s = inst.n;
  const int t = inst.n + 1;
  Dinic d(inst.n + 2);
  for (int i = 0; i < inst.n; ++i) {
    if (inst.source[i] > 0) d.add(s, i, inst.source[i], 0);
    if (inst.sink[i] > 0) d.add(i, t, inst.sink[i], 0);
  }
  for (const auto& e : inst.edges) d.add(e.i, e.j, e.cap_ij, e.cap_ji);
  FlowResult r;
  while (d.bfs(s, t)) {
    std::fill(d.it.begin(), d.it.end(), 0);
    while (const std::int64_t f = d.dfs(s, t, std::numeric_limits<std::int64_t>::max()))
      r.value += f;
  }
  d.bfs(s, t);
  r.source_side.resize(inst.n);
  for (int i = 0; i < inst.n; ++i) r.source_side[i] = d.level[i] >= 0;
  return r;
}

IndicatorSet from_mask(const GridSpec& g, std::uint64_t mask) {
  IndicatorSet e(g);
  for (std::size_t i = 0; i < g.cell_count(); ++i) e.set(i, (mask >> i) & 1u);
  return e;
}

std::uint64_t to_mask(const IndicatorSet& e) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < e.grid().cell_count(); ++i)
    if (e.contains(i)) m |= std::uint64_t{1} << i;
  return m;
}

namespace {

// Visits every stencil pair (i, j) with j possibly outside the grid (j < 0
// meaning a vacuum wall cell). Pairs below the boundary plane are skipped.
template <class Fn>
void for_each_pair(const GridSpec& g, const capflow::PerimeterStencil& s, Fn fn) {
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    const auto c = g.cell(i);
    for (std::size_t k = 0; k < s.directions().size(); ++k) {
      const auto& o = s.directions()[k].offset;
      const double w = s.directions()[k].weight;
      const int x = c.ix + o[0], y = c.iy + o[1], z = c.iz + o[2];
      if (g.in_grid(x, y, z)) {
        fn(static_cast<int>(i), static_cast<int>(g.index(x, y, z)), w);
      } else if (z >= 0) {
        fn(static_cast<int>(i), -1, w);
      }
      const int bx = c.ix - o[0], by = c.iy - o[1], bz = c.iz - o[2];
      if (!g.in_grid(bx, by, bz) && bz >= 0) fn(static_cast<int>(i), -1, w);
    }
  }
}

}  // namespace

double mask_perimeter(const GridSpec& g, const capflow::PerimeterStencil& s,
                      std::uint64_t mask) {
  double p = 0.0;
  for_each_pair(g, s, [&](int i, int j, double w) {
    const bool a = (mask >> i) & 1u;
    const bool b = j >= 0 && ((mask >> j) & 1u);
    if (a != b) p += w;
  });
  return p;
}

QuantizedModel quantized_model(const IndicatorSet& f, double h,
                               const capflow::BetaField& beta,
                               const capflow::PerimeterStencil& s, double q) {
  const GridSpec& g = f.grid();
  const auto sd = all_pairs_signed_distance(f);
  std::vector<double> a(g.cell_count());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = sd[i] * g.cell_volume() / h;
    if (g.cell(i).iz == 0) a[i] += beta.at_bottom(i) * g.face_area();
  }
  QuantizedModel m;
  for_each_pair(g, s, [&](int i, int j, double w) {
    if (j < 0)
      a[i] += w;
    else
      m.pairs.push_back({i, j, std::llround(w / q)});
  });
  for (double v : a) m.unary.push_back(std::llround(v / q));
  return m;
}

std::int64_t quantized_energy(const QuantizedModel& m, std::uint64_t mask,
                              std::int64_t units) {
  std::int64_t e = 0;
  for (std::size_t i = 0; i < m.unary.size(); ++i)
    if ((mask >> i) & 1u) e += m.unary[i] + units;
  for (const auto& p : m.pairs)
    if (((mask >> p.i) & 1u) != ((mask >> p.j) & 1u)) e += p.w;
  return e;
}

std::int64_t exhaustive_min_quantized(const QuantizedModel& m, int cells,
                                      std::int64_t units) {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask)
    best = std::min(best, quantized_energy(m, mask, units));
  return best;
}

double step_energy(const IndicatorSet& f, const std::vector<double>& sd_f, double h,
                   double m0, const capflow::BetaField& beta,
                   const capflow::PerimeterStencil& s, std::uint64_t mask) {
  const GridSpec& g = f.grid();
  double wet = 0.0;
  double diss = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    const bool in = (mask >> i) & 1u;
    count += in ? 1 : 0;
    if (in && g.cell(i).iz == 0) wet += beta.at_bottom(i);
    if (in != f.contains(i)) diss += std::abs(sd_f[i]);
  }
  const double vol = count * g.cell_volume();
  return mask_perimeter(g, s, mask) + wet * g.face_area() + diss * g.cell_volume() / h +
         std::abs(vol - m0) / std::sqrt(h);
}

StepMin exhaustive_min_step(const IndicatorSet& f, double h, double m0,
                            const capflow::BetaField& beta,
                            const capflow::PerimeterStencil& s) {
  const auto sd = all_pairs_signed_distance(f);
  const int cells = static_cast<int>(f.grid().cell_count());
  StepMin best{std::numeric_limits<double>::infinity(), 0};
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) {
    const double v = step_energy(f, sd, h, m0, beta, s, mask);
    if (v < best.value) best = {v, mask};
  }
  return best;
}

IndicatorSet random_set(const GridSpec& g, std::mt19937_64& rng, double p) {
  std::bernoulli_distribution coin(p);
  for (;;) {
    IndicatorSet e(g);
    for (std::size_t i = 0; i < g.cell_count(); ++i) e.set(i, coin(rng));
    if (!e.empty() && !e.is_full()) return e;
  }
}

}  // namespace oracle

namespace oracle {

using capflow::BetaField;
using capflow::CutOptions;
using capflow::LinearizedProblem;
using capflow::Neighborhood;
using capflow::PerimeterStencil;
using capflow::StepOptions;

namespace {

struct Instance {
  GridSpec grid;
  IndicatorSet f;
  BetaField beta;
  double h = 0.0;
  double mu = 0.0;
  double m0 = 0.0;
  Neighborhood order = Neighborhood::N8;
};

Instance random_instance(int size, std::mt19937_64& rng) {
  Instance in;
  in.grid = GridSpec::make(1, 1.0 / size, size, size, {0, 0});
  in.f = random_set(in.grid, rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double kappa = 0.05 + 0.45 * u(rng);
  const double bound = 1.0 - 2.0 * kappa;
  std::vector<double> b(in.grid.bottom_count());
  for (auto& v : b) v = bound * (2.0 * u(rng) - 1.0);
  in.beta = BetaField(in.grid, kappa, b);
  in.h = 0.005 + 0.3 * u(rng);
  in.mu = (2.0 * u(rng) - 1.0) / std::sqrt(in.h);
  const double cv = in.grid.cell_volume();
  const auto cells = static_cast<double>(in.grid.cell_count());
  in.m0 = cv * (1 + std::floor((cells - 2) * u(rng))) + (rng() % 3 == 0 ? 0.5 * cv * u(rng) : 0.0);
  const Neighborhood orders[] = {Neighborhood::N4, Neighborhood::N8, Neighborhood::N16};
  in.order = orders[rng() % 3];
  return in;
}

void check_size(int size) {
  if (size < 2 || size > 5) throw std::invalid_argument("oracle: size must lie in [2, 5]");
}

}  // namespace

SuiteResult mincut_suite(int size, int trials, std::uint64_t seed, bool corrupt) {
  check_size(size);
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  SuiteResult r;
  for (int t = 0; t < trials; ++t) {
    const auto in = random_instance(size, rng);
    const auto s = PerimeterStencil::make(in.grid, in.order);
    CutOptions opts;
    opts.corrupt_for_testing = corrupt;
    const LinearizedProblem p(in.f, signed_distance(in.f), in.h, in.beta, s, std::abs(in.mu),
                              opts);
    const auto units = p.slope_units(in.mu);
    const auto e = p.solve(units);
    const auto model = quantized_model(in.f, in.h, in.beta, s, p.quantum());
    const auto best =
        exhaustive_min_quantized(model, static_cast<int>(in.grid.cell_count()), units);
    const bool ok = quantized_energy(model, to_mask(e), units) == best;
    ++r.trials;
    r.exact += ok;
    r.within += ok;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

SuiteResult step_suite(int size, int trials, std::uint64_t seed, bool corrupt) {
  check_size(size);
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  SuiteResult r;
  StepOptions opts;
  opts.allow_degenerate = true;
  opts.cut.corrupt_for_testing = corrupt;
  for (int t = 0; t < trials; ++t) {
    const auto in = random_instance(size, rng);
    const auto s = PerimeterStencil::make(in.grid, in.order);
    const auto res = step(in.f, in.h, in.m0, in.beta, s, opts);
    const auto sd = all_pairs_signed_distance(in.f);
    const double got = step_energy(in.f, sd, in.h, in.m0, in.beta, s, to_mask(res.set));
    const auto best = exhaustive_min_step(in.f, in.h, in.m0, in.beta, s);
    const double tol = 1e-9 * std::max(1.0, std::abs(best.value));
    ++r.trials;
    r.exact += got <= best.value + tol;
    r.within += got <= best.value + in.grid.cell_volume() / std::sqrt(in.h) + tol;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace oracle
