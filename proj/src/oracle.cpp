#include "ibd/oracle.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace ibd {

// G7/K15 abscissae and weights on [-1, 1] (QUADPACK values).
static const double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0000000000000000};
static const double kWgk[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
static const double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

namespace {

struct CellEval {
  double k15 = 0.0;
  double err = 0.0;
};

CellEval g7k15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  // order: pairs around center, center last
  double g7 = 0.0, k15 = 0.0;
  for (int i = 0; i < 7; ++i) {
    double x = h * kXgk[i];
    fv[2 * i] = f(c - x);
    fv[2 * i + 1] = f(c + x);
    k15 += kWgk[i] * (fv[2 * i] + fv[2 * i + 1]);
  }
  fv[14] = f(c);
  k15 += kWgk[7] * fv[14];
  // Gauss points are the odd-indexed Kronrod abscissae (i = 1,3,5) + center.
  for (int j = 0; j < 3; ++j) {
    int i = 2 * j + 1;
    g7 += kWg[j] * (fv[2 * i] + fv[2 * i + 1]);
  }
  g7 += kWg[3] * fv[14];
  k15 *= h;
  g7 *= h;
  // QUADPACK-style error estimate based on deviation from the cell mean.
  double mean = k15 / (b - a);
  double resasc = 0.0, resabs = 0.0;
  for (int i = 0; i < 7; ++i) {
    resasc += kWgk[i] * (std::abs(fv[2 * i] - mean) + std::abs(fv[2 * i + 1] - mean));
    resabs += kWgk[i] * (std::abs(fv[2 * i]) + std::abs(fv[2 * i + 1]));
  }
  resasc += kWgk[7] * std::abs(fv[14] - mean);
  resabs += kWgk[7] * std::abs(fv[14]);
  resasc *= h;
  resabs *= h;
  double err = std::abs(k15 - g7);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  // roundoff floor: summation noise never drops below ~50 eps of the mass
  err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * resabs);
  CellEval out;
  out.k15 = k15;
  out.err = err;
  return out;
}

struct Cell {
  double a, b, value, err;
  int idx;
};

}  // namespace

QuadResult quad_1d(const std::function<double(double)>& f, double a, double b,
                   double tol, int max_subdiv) {
  std::function<double(double)> g = f;
  if (std::isinf(b)) {
    // t = s/(1-s) maps [0,1) onto [a, inf)
    double lo = a;
    g = [f, lo](double s) {
      double om = 1.0 - s;
      double t = lo + s / om;
      return f(t) / (om * om);
    };
    a = 0.0;
    b = 1.0;
  }
  if (!(a < b)) throw std::invalid_argument("quad_1d requires a < b");

  std::vector<Cell> cells;
  auto push = [&](double lo, double hi) {
    CellEval e = g7k15(g, lo, hi);
    Cell c{lo, hi, e.k15, e.err, (int)cells.size()};
    cells.push_back(c);
  };
  push(a, b);

  // max-heap on (err, older first on ties) over live cell indices
  auto worse = [&](int x, int y) {
    if (cells[x].err != cells[y].err) return cells[x].err < cells[y].err;
    return cells[x].idx > cells[y].idx;
  };
  std::priority_queue<int, std::vector<int>, decltype(worse)> heap(worse);
  heap.push(0);
  std::vector<bool> live(1, true);

  double total_err = cells[0].err;
  int splits = 0;
  while (total_err > tol && splits < max_subdiv && !heap.empty()) {
    int i = heap.top();
    heap.pop();
    double mid = 0.5 * (cells[i].a + cells[i].b);
    if (mid <= cells[i].a || mid >= cells[i].b) break;  // interval exhausted
    live[i] = false;
    total_err -= cells[i].err;
    int j0 = (int)cells.size();
    push(cells[i].a, mid);
    push(mid, cells[i].b);
    live.push_back(true);
    live.push_back(true);
    heap.push(j0);
    heap.push(j0 + 1);
    total_err += cells[j0].err + cells[j0 + 1].err;
    ++splits;
  }

  // Deterministic final accumulation: live cells sorted by left endpoint.
  std::vector<int> order;
  for (int i = 0; i < (int)cells.size(); ++i)
    if (i < (int)live.size() && live[i]) order.push_back(i);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return cells[x].a < cells[y].a; });
  QuadResult out;
  double err = 0.0;
  for (int i : order) {
    out.value += cells[i].value;
    err += cells[i].err;
  }
  out.error_estimate = err;
  out.subdivisions = splits;
  out.converged = err <= tol;
  return out;
}

EulerResult euler_transform(std::vector<double> s) {
  EulerResult out;
  if (s.empty()) return out;
  if (s.size() == 1) {
    out.value = s[0];
    return out;
  }
  double prev = s.back();
  double best = std::numeric_limits<double>::infinity();
  out.value = prev;
  int depth = 0;
  while (s.size() > 1) {
    for (size_t i = 0; i + 1 < s.size(); ++i) s[i] = 0.5 * (s[i] + s[i + 1]);
    s.pop_back();
    ++depth;
    double cur = s.back();
    double d = std::abs(cur - prev);
    if (depth >= 2 && d <= best) {
      best = d;
      out.value = cur;
      out.stability = d;
      out.depth = depth;
    }
    prev = cur;
  }
  if (out.depth == 0) {
    out.value = prev;
    out.stability = best;
    out.depth = depth;
  }
  return out;
}

QuadResult quad_oscillatory(const std::function<double(double)>& f, double tol,
                            double first_zero, int max_slabs) {
  const double pi = 3.14159265358979323846;
  double slab_tol = std::max(tol / (8.0 * max_slabs), 1e-15);
  QuadResult head = quad_1d(f, 0.0, first_zero, std::max(tol / 8.0, 1e-14), 2000);
  std::vector<double> slab(max_slabs);
  double quad_err = head.error_estimate;
  double abs_tail2 = 0.0;
  for (int k = 0; k < max_slabs; ++k) {
    QuadResult r =
        quad_1d(f, first_zero + k * pi, first_zero + (k + 1) * pi, slab_tol, 400);
    slab[k] = r.value;
    quad_err += r.error_estimate;
    abs_tail2 = (k > 0) ? std::abs(slab[k]) + std::abs(slab[k - 1]) : std::abs(slab[k]);
  }

  QuadResult out;
  out.subdivisions = max_slabs;

  // Absolutely convergent case: direct summation already settled.
  if (abs_tail2 <= tol / 4.0) {
    double v = head.value;
    for (int k = 0; k < max_slabs; ++k) v += slab[k];
    out.value = v;
    out.error_estimate = quad_err + abs_tail2;
    out.converged = out.error_estimate <= tol;
    return out;
  }

  // Locate the suffix on which slab sums strictly alternate in sign.
  int j0 = max_slabs - 1;
  while (j0 > 0 && slab[j0 - 1] * slab[j0] < 0.0) --j0;
  double base = head.value;
  for (int k = 0; k < j0; ++k) base += slab[k];
  std::vector<double> partial;
  partial.reserve(max_slabs - j0);
  double run = 0.0;
  for (int k = j0; k < max_slabs; ++k) {
    run += slab[k];
    partial.push_back(run);
  }
  EulerResult acc = euler_transform(partial);
  out.value = base + acc.value;
  out.error_estimate = quad_err + acc.stability;
  out.converged = out.error_estimate <= tol;
  return out;
}

QuadResult quad_2d_orthant(const std::function<double(double, double)>& f,
                           double tol) {
  double inner_tol = tol / 50.0;
  int bad_inner = 0;
  auto outer = [&](double y) {
    QuadResult r = quad_1d([&](double x) { return f(x, y); }, 0.0, INFINITY,
                           inner_tol, 2000);
    if (!r.converged) ++bad_inner;
    return r.value;
  };
  QuadResult out = quad_1d(outer, 0.0, INFINITY, tol, 2000);
  out.error_estimate += inner_tol * 50.0;
  if (bad_inner > 0) out.converged = false;
  return out;
}

McResult mc_simplex(const std::function<double(const std::vector<double>&)>& f,
                    int n, uint64_t samples, uint64_t seed) {
  if (n < 1) throw std::invalid_argument("mc_simplex requires n >= 1");
  Rng rng(seed);
  std::vector<double> e(n), x(n);
  double sum = 0.0, sumsq = 0.0;
  for (uint64_t it = 0; it < samples; ++it) {
    double tot = 0.0;
    for (int i = 0; i < n; ++i) {
      e[i] = rng.next_exp();
      tot += e[i];
    }
    double r = std::pow(rng.next_unit(), 1.0 / n);
    for (int i = 0; i < n; ++i) x[i] = r * e[i] / tot;
    double v = f(x);
    sum += v;
    sumsq += v * v;
  }
  double inv_vol = 1.0;
  for (int i = 2; i <= n; ++i) inv_vol *= i;
  double vol = 1.0 / inv_vol;
  double mean = sum / (double)samples;
  double var = std::max(0.0, (sumsq - (double)samples * mean * mean) /
                                 ((double)samples - 1.0));
  McResult out;
  out.estimate = vol * mean;
  out.standard_error = vol * std::sqrt(var / (double)samples);
  out.samples = samples;
  out.seed = seed;
  return out;
}

McResult mc_orthant_exp(const std::function<double(const std::vector<double>&)>& f,
                        const std::vector<double>& rates, uint64_t samples,
                        uint64_t seed) {
  int n = (int)rates.size();
  if (n < 1) throw std::invalid_argument("mc_orthant_exp requires rates");
  Rng rng(seed);
  std::vector<double> x(n);
  double sum = 0.0, sumsq = 0.0;
  for (uint64_t it = 0; it < samples; ++it) {
    for (int i = 0; i < n; ++i) x[i] = rng.next_exp(rates[i]);
    double v = f(x);
    sum += v;
    sumsq += v * v;
  }
  double scale = 1.0;
  for (double r : rates) scale /= r;
  double mean = sum / (double)samples;
  double var = std::max(0.0, (sumsq - (double)samples * mean * mean) /
                                 ((double)samples - 1.0));
  McResult out;
  out.estimate = scale * mean;
  out.standard_error = scale * std::sqrt(var / (double)samples);
  out.samples = samples;
  out.seed = seed;
  return out;
}

}  // namespace ibd
