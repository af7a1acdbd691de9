#include "ibd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ibd/special.hpp"

namespace ibd {

namespace {

constexpr double kMergeTol = 1e-12;

bool cplx_near(cplx a, cplx b) {
  return std::abs(a - b) <= kMergeTol * std::max({1.0, std::abs(a), std::abs(b)});
}

// strict weak order on (s, m, l, w, h); h-less terms sort first
bool term_less(const KernelTerm& a, const KernelTerm& b) {
  if (a.s.real() != b.s.real()) return a.s.real() < b.s.real();
  if (a.s.imag() != b.s.imag()) return a.s.imag() < b.s.imag();
  if (a.m != b.m) return a.m < b.m;
  if (a.l != b.l) return a.l < b.l;
  if (a.w.real() != b.w.real()) return a.w.real() < b.w.real();
  if (a.w.imag() != b.w.imag()) return a.w.imag() < b.w.imag();
  if (a.h.has_value() != b.h.has_value()) return !a.h.has_value();
  if (a.h && b.h && *a.h != *b.h) return *a.h < *b.h;
  return false;
}

bool term_mergeable(const KernelTerm& a, const KernelTerm& b) {
  if (a.m != b.m || a.l != b.l) return false;
  if (!cplx_near(a.s, b.s) || !cplx_near(a.w, b.w)) return false;
  if (a.h.has_value() != b.h.has_value()) return false;
  if (a.h && std::abs(*a.h - *b.h) > kMergeTol * std::max(1.0, std::abs(*a.h)))
    return false;
  return true;
}

}  // namespace

std::vector<Kernel> elementary_laplace_kernel(const Domain& d) {
  struct Visitor {
    std::vector<Kernel> operator()(const SemiInfinite&) const {
      return {one_over_x()};
    }
    std::vector<Kernel> operator()(const Interval& iv) const {
      if (!(iv.a < iv.b)) throw KernelError("interval requires a < b");
      Kernel k;
      k.terms.push_back({cplx(1, 0), cplx(0, 0), -1, 0, cplx(-iv.a, 0), {}});
      k.terms.push_back({cplx(-1, 0), cplx(0, 0), -1, 0, cplx(-iv.b, 0), {}});
      return {k};
    }
    std::vector<Kernel> operator()(const Orthant& o) const {
      if (o.n < 1) throw KernelError("orthant dimension must be positive");
      return std::vector<Kernel>((size_t)o.n, one_over_x());
    }
    std::vector<Kernel> operator()(const Radial& r) const {
      if (r.n < 1) throw KernelError("radial dimension must be positive");
      // surface-area assembly: 2 pi^{n/2} Gamma(n) / Gamma(n/2) * u^{-n}
      double coef = 2.0 * std::pow(M_PI, 0.5 * r.n) * std::tgamma((double)r.n) /
                    std::tgamma(0.5 * r.n);
      Kernel k;
      k.terms.push_back({cplx(coef, 0), cplx(0, 0), -r.n, 0, cplx(0, 0), {}});
      return {k};
    }
  };
  return std::visit(Visitor{}, d);
}

Kernel shift(const Kernel& k, cplx a) {
  Kernel out;
  out.terms.reserve(k.terms.size());
  for (const auto& t : k.terms) {
    KernelTerm n = t;
    n.s = t.s + a;
    if (t.w != cplx(0.0, 0.0)) n.c = t.c * std::exp(t.w * a);
    if (t.h) {
      if (a.imag() != 0.0)
        throw KernelError("Heaviside threshold cannot be shifted by a non-real amount");
      n.h = *t.h + a.real();
    }
    out.terms.push_back(n);
  }
  return out;
}

Kernel derivative(const Kernel& k) {
  Kernel out;
  for (const auto& t : k.terms) {
    if (t.h)
      throw KernelError("derivative of a Heaviside term is distributional");
    if (t.m != 0)
      out.terms.push_back({t.c * (double)t.m, t.s, t.m - 1, t.l, t.w, {}});
    if (t.l == 1)
      out.terms.push_back({t.c, t.s, t.m - 1, 0, t.w, {}});
    if (t.w != cplx(0.0, 0.0))
      out.terms.push_back({t.c * t.w, t.s, t.m, t.l, t.w, {}});
  }
  return canonicalize(out);
}

Kernel derivative_n(const Kernel& k, int n) {
  if (n < 0) throw KernelError("derivative order must be nonnegative");
  Kernel out = k;
  for (int i = 0; i < n; ++i) out = derivative(out);
  return out;
}

Kernel antiderivative(const Kernel& k) {
  Kernel out;
  for (const auto& t : k.terms) {
    if (t.h)
      throw KernelError("antiderivative of a Heaviside term is not in the family");
    if (t.l == 0) {
      if (t.w == cplx(0.0, 0.0)) {
        if (t.m != -1) {
          out.terms.push_back({t.c / double(t.m + 1), t.s, t.m + 1, 0, t.w, {}});
        } else {
          out.terms.push_back({t.c, t.s, 0, 1, cplx(0, 0), {}});
        }
      } else if (t.m == 0) {
        out.terms.push_back({t.c / t.w, t.s, 0, 0, t.w, {}});
      } else if (t.m > 0) {
        // repeated integration by parts lowers the power to zero
        cplx c = t.c;
        for (int mm = t.m; mm >= 0; --mm) {
          out.terms.push_back({c / t.w, t.s, mm, 0, t.w, {}});
          c *= -double(mm) / t.w;
        }
      } else {
        throw KernelError("exponential-integral term is outside the family");
      }
    } else {
      if (t.w != cplx(0.0, 0.0))
        throw KernelError("log times exponential is outside the family");
      if (t.m == -1) throw KernelError("log squared is outside the family");
      cplx c1 = t.c / double(t.m + 1);
      out.terms.push_back({c1, t.s, t.m + 1, 1, cplx(0, 0), {}});
      out.terms.push_back({-c1 / double(t.m + 1), t.s, t.m + 1, 0, cplx(0, 0), {}});
    }
  }
  return canonicalize(out);
}

Kernel scale(const Kernel& k, cplx factor) {
  Kernel out = k;
  for (auto& t : out.terms) t.c *= factor;
  return out;
}

Kernel add(const Kernel& a, const Kernel& b) {
  Kernel out = a;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  return canonicalize(out);
}

Kernel canonicalize(const Kernel& k) {
  std::vector<KernelTerm> ts = k.terms;
  std::stable_sort(ts.begin(), ts.end(), term_less);
  Kernel out;
  for (const auto& t : ts) {
    if (!out.terms.empty() && term_mergeable(out.terms.back(), t)) {
      out.terms.back().c += t.c;
    } else {
      out.terms.push_back(t);
    }
  }
  out.terms.erase(std::remove_if(out.terms.begin(), out.terms.end(),
                                 [](const KernelTerm& t) {
                                   return t.c == cplx(0.0, 0.0);
                                 }),
                  out.terms.end());
  return out;
}

cplx eval(const Kernel& k, double x, H0 h0) {
  cplx sum = 0.0;
  for (const auto& t : k.terms) {
    if (t.h && heaviside(x + *t.h, h0) == 0.0) continue;
    cplx v = t.c;
    if (t.m != 0) v *= ipow(cplx(x, 0) + t.s, t.m);
    if (t.l == 1) v *= std::log(cplx(x, 0) + t.s);
    if (t.w != cplx(0.0, 0.0)) v *= std::exp(t.w * x);
    if (t.h) v *= heaviside(x + *t.h, h0);
    sum += v;
  }
  return sum;
}

std::optional<cplx> limit_at_zero(const Kernel& k) {
  cplx finite = 0.0;
  // divergent contributions keyed by (power order, log flag); each must
  // cancel to within 1e-10 of its largest member or the limit diverges
  std::map<std::pair<int, int>, std::pair<cplx, double>> buckets;
  for (const auto& t : k.terms) {
    if (t.h && *t.h < 0.0) continue;  // H(x+h) vanishes just right of zero
    if (t.s == cplx(0.0, 0.0)) {
      // expand e^{wx} x^m log^l; only orders <= 0 survive the limit
      cplx wj = 1.0;  // w^j / j!
      for (int j = 0; t.m + j <= 0; ++j) {
        if (j > 0) wj *= t.w / double(j);
        cplx contrib = t.c * wj;
        int order = t.m + j;
        if (order == 0 && t.l == 0) {
          finite += contrib;
        } else {
          auto& b = buckets[{order, t.l}];
          b.first += contrib;
          b.second = std::max(b.second, std::abs(contrib));
        }
        if (t.w == cplx(0.0, 0.0)) break;
      }
    } else {
      cplx v = t.c * ipow(t.s, t.m);
      if (t.l == 1) v *= std::log(t.s);
      finite += v;
    }
  }
  for (const auto& [key, b] : buckets) {
    (void)key;
    if (std::abs(b.first) > 1e-10 * std::max(1.0, b.second)) return std::nullopt;
  }
  return finite;
}

ExprPtr kernel_to_expr(const Kernel& k, const std::string& v) {
  if (k.terms.empty()) return rat(0);
  ExprPtr acc;
  for (const auto& t : k.terms) {
    ExprPtr base = t.s == cplx(0.0, 0.0) ? var(v) : add(var(v), cplx_expr(t.s));
    std::vector<ExprPtr> factors;
    if (t.m == 1)
      factors.push_back(base);
    else if (t.m != 0)
      factors.push_back(pow(base, rat(t.m)));
    if (t.l == 1) factors.push_back(call(Fn::Log, {base}));
    if (t.w != cplx(0.0, 0.0))
      factors.push_back(call(Fn::Exp, {mul(cplx_expr(t.w), var(v))}));
    if (t.h)
      factors.push_back(call(Fn::Heaviside,
                             {*t.h == 0.0 ? var(v) : add(var(v), num_expr(*t.h))}));
    ExprPtr piece;
    for (const auto& f : factors) piece = piece ? mul(piece, f) : f;
    if (!piece)
      piece = cplx_expr(t.c);
    else if (!(t.c == cplx(1.0, 0.0)))
      piece = mul(cplx_expr(t.c), piece);
    acc = acc ? add(acc, piece) : piece;
  }
  return acc;
}

}  // namespace ibd
