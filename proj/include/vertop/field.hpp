#pragma once

// Fields on filtered model spaces: lazy mode families k -> a_(k) with a
// deep-image certificate K(N) (Im a_(-k) in U_N for k >= K(N)) and per-mode
// continuity/precision transfer. Includes the lazy n-th normal product and
// the formal-series derivative.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>

#include "vertop/series.hpp"

namespace vertop {

/// Binomial C(n, i) for arbitrary integer n and i >= 0.
inline Scalar binomial(int n, int i) {
  if (i < 0) return Scalar(0);
  Rational r(1);
  for (int k = 0; k < i; ++k) {
    r *= Rational(n - k);
    r /= Rational(k + 1);
  }
  return Scalar(r);
}

/// A single mode a_(k) as an opaque continuous operator with certificates.
struct ModeOp {
  std::function<FilteredVector(const FilteredVector&, int N)> apply;
  std::function<int(int N)> required;    // input precision for output N
  std::function<int(int N)> continuity;  // U_{continuity(N)} maps into U_N

  static ModeOp zero() {
    ModeOp op;
    op.apply = [](const FilteredVector&, int N) {
      FilteredVector v;
      v.set_precision(N);
      return v;
    };
    op.required = [](int N) { return N; };
    op.continuity = [](int N) { return N; };
    return op;
  }

  static ModeOp from_series(OperatorSeries s, ModelSpace space) {
    auto sp = std::make_shared<OperatorSeries>(std::move(s));
    ModeOp op;
    op.apply = [sp, space](const FilteredVector& v, int N) {
      return sp->apply(v, space, N);
    };
    op.required = [sp](int N) { return sp->required(N); };
    op.continuity = [sp](int N) { return sp->continuity(N); };
    return op;
  }

  ModeOp scaled(const Scalar& c) const {
    if (c.is_zero()) return ModeOp::zero();
    ModeOp op = *this;
    auto inner = apply;
    op.apply = [inner, c](const FilteredVector& v, int N) {
      return inner(v, N).scaled(c);
    };
    return op;
  }
};

struct Field {
  std::string name;
  ModelSpace space;
  std::function<ModeOp(int k)> mode;
  /// Deep-image certificate: Im mode(-k) in U_N for all k >= deep_K(N).
  std::function<int(int N)> deep_K;
};

inline FilteredVector apply_mode(const Field& f, int k, const FilteredVector& v, int N) {
  return f.mode(k).apply(v, N);
}

/// Y(1, z) = Id: the identity sits at mode -1, all other modes vanish.
inline Field identity_field(const ModelSpace& space) {
  Field f;
  f.name = "id";
  f.space = space;
  f.mode = [space](int k) {
    if (k == -1) return ModeOp::from_series(OperatorSeries::identity(), space);
    return ModeOp::zero();
  };
  f.deep_K = [](int) { return 2; };
  return f;
}

inline Field zero_field(const ModelSpace& space) {
  Field f;
  f.name = "0";
  f.space = space;
  f.mode = [](int) { return ModeOp::zero(); };
  f.deep_K = [](int) { return 1; };
  return f;
}

inline Field scaled_field(const Scalar& c, const Field& a) {
  Field f = a;
  f.name = "(" + c.str() + ")*" + a.name;
  auto mode = a.mode;
  f.mode = [mode, c](int k) { return mode(k).scaled(c); };
  return f;
}

/// Pointwise combination sum_i c_i * a_i on a shared model space.
inline Field sum_fields(const std::vector<std::pair<Scalar, Field>>& parts,
                        const ModelSpace& space) {
  for (const auto& [c, a] : parts)
    if (!(a.space == space)) throw model_error("sum_fields: mismatched model spaces");
  if (parts.empty()) return zero_field(space);
  auto data = std::make_shared<std::vector<std::pair<Scalar, Field>>>(parts);
  Field f;
  f.name = "sum";
  f.space = space;
  f.mode = [data](int k) {
    ModeOp op;
    op.apply = [data, k](const FilteredVector& v, int N) {
      std::vector<std::pair<Scalar, FilteredVector>> pieces;
      for (const auto& [c, a] : *data) pieces.emplace_back(c, a.mode(k).apply(v, N));
      return linear_combine(pieces);
    };
    op.required = [data, k](int N) {
      int r = N;
      for (const auto& [c, a] : *data) r = std::max(r, a.mode(k).required(N));
      return r;
    };
    op.continuity = [data, k](int N) {
      int p = N;
      for (const auto& [c, a] : *data) p = std::max(p, a.mode(k).continuity(N));
      return p;
    };
    return op;
  };
  f.deep_K = [data](int N) {
    int K = 1;
    for (const auto& [c, a] : *data) K = std::max(K, a.deep_K(N));
    return K;
  };
  return f;
}

/// d/dz: mode k of the result is -k * a_(k-1).
inline Field derivative(const Field& a) {
  Field f;
  f.name = "d(" + a.name + ")";
  f.space = a.space;
  auto mode = a.mode;
  f.mode = [mode](int k) {
    if (k == 0) return ModeOp::zero();
    return mode(k - 1).scaled(Scalar(-k));
  };
  auto K = a.deep_K;
  f.deep_K = [K](int N) { return std::max(1, K(N) - 1); };
  return f;
}

/// Wrapper caching mode images per (mode, basis monomial). Sound for fields
/// satisfying the mode-family conditions: the image mod U_N depends only on
/// the input mod required(N), and the image at a deeper output precision
/// truncates to the image at a shallower one. The cache is shared by copies
/// of the returned field, so repeated inner applications (normal products,
/// reconstruction) across many checks hit it.
inline Field memoized_field(const Field& a) {
  struct Cache {
    std::mutex mutex;
    // mode, monomial -> deepest output precision computed so far, image.
    std::map<std::pair<int, Monomial>, std::pair<int, FilteredVector>> images;
  };
  auto cache = std::make_shared<Cache>();
  Field f = a;
  auto mode = a.mode;
  f.mode = [cache, mode](int k) {
    ModeOp op = mode(k);
    auto base_apply = op.apply;
    auto required = op.required;
    op.apply = [cache, base_apply, required, k](const FilteredVector& v, int N) {
      const int req = required(N);
      if (precision_of(v) < req) return base_apply(v, N);
      FilteredVector out;
      out.set_precision(N);
      for (const auto& [m, c] : v.terms()) {
        if (m.max_depth() > req) continue;
        FilteredVector img;
        {
          std::lock_guard<std::mutex> lock(cache->mutex);
          auto key = std::make_pair(k, m);
          auto it = cache->images.find(key);
          if (it == cache->images.end() || it->second.first < N) {
            FilteredVector fresh = base_apply(FilteredVector::basis(m), N);
            it = cache->images.insert_or_assign(key, std::make_pair(N, std::move(fresh)))
                     .first;
          }
          img = it->second.first == N ? it->second.second : it->second.second.truncated(N);
        }
        for (const auto& [mm, cc] : img.terms()) out.add_term(mm, cc * c);
      }
      return out;
    };
    return op;
  };
  return f;
}

// ---------------------------------------------------------------------------
// Lazy n-th normal product.
// ---------------------------------------------------------------------------

namespace detail {

struct NproductState {
  Field a, b;
  int n;
  std::mutex memo_mutex;
  // Memo keyed by (mode, precision, canonical probe rendering).
  std::map<std::tuple<int, int, std::string>, FilteredVector> memo;
};

/// Term bound for the a-side sum of c_(j): indices i >= this only contribute
/// inside U_N. extra widens the bound for soundness tests.
inline int nproduct_cutoff_a(const NproductState& st, int N, int extra) {
  int bound = std::max(0, st.n + st.a.deep_K(N)) + extra;
  if (st.n >= 0) bound = std::min(bound, st.n + 1);
  return bound;
}
inline int nproduct_cutoff_b(const NproductState& st, int j, int N, int extra) {
  int bound = std::max(0, st.n + j + st.b.deep_K(N)) + extra;
  if (st.n >= 0) bound = std::min(bound, st.n + 1);
  return bound;
}

inline FilteredVector nproduct_mode_apply(const std::shared_ptr<NproductState>& st, int j,
                                          const FilteredVector& v, int N, int extra) {
  //   c_(j) = sum_i (-1)^i C(n,i) a_(n-i) b_(i+j)
  //         - sum_i (-1)^{n+i} C(n,i) b_(n+j-i) a_(i)
  const int n = st->n;
  FilteredVector out;
  out.set_precision(N);
  auto accumulate = [&](const FilteredVector& piece) {
    for (const auto& [m, c] : piece.terms()) {
      if (m.max_depth() > N) continue;
      out.add_term(m, c);
    }
  };
  int Ba = nproduct_cutoff_a(*st, N, extra);
  for (int i = 0; i < Ba; ++i) {
    Scalar coeff = binomial(n, i) * Scalar(i % 2 == 0 ? 1 : -1);
    if (coeff.is_zero()) continue;
    ModeOp am = st->a.mode(n - i);
    int inner_prec = am.required(N);
    FilteredVector w = st->b.mode(i + j).apply(v, inner_prec);
    accumulate(am.apply(w, N).scaled(coeff));
  }
  int Bb = nproduct_cutoff_b(*st, j, N, extra);
  for (int i = 0; i < Bb; ++i) {
    Scalar coeff = binomial(n, i) * Scalar((n + i) % 2 == 0 ? -1 : 1);
    if (coeff.is_zero()) continue;
    ModeOp bm = st->b.mode(n + j - i);
    int inner_prec = bm.required(N);
    FilteredVector w = st->a.mode(i).apply(v, inner_prec);
    accumulate(bm.apply(w, N).scaled(coeff));
  }
  return out;
}

}  // namespace detail

/// The n-th normal product a(z)_(n) b(z) as a lazy field. Modes are evaluated
/// on demand at a requested precision; results are memoised per (mode,
/// precision, probe).
inline Field nproduct(const Field& a, const Field& b, int n) {
  if (!(a.space == b.space))
    throw model_error("nproduct: fields live on different model spaces");
  auto st = std::make_shared<detail::NproductState>();
  st->a = a;
  st->b = b;
  st->n = n;

  Field f;
  f.name = "nprod(" + a.name + "," + b.name + "," + std::to_string(n) + ")";
  f.space = a.space;
  f.mode = [st](int j) {
    ModeOp op;
    op.apply = [st, j](const FilteredVector& v, int N) {
      auto key = std::make_tuple(j, N, v.str());
      {
        std::lock_guard<std::mutex> lock(st->memo_mutex);
        auto it = st->memo.find(key);
        if (it != st->memo.end()) return it->second;
      }
      FilteredVector r = detail::nproduct_mode_apply(st, j, v, N, 0);
      std::lock_guard<std::mutex> lock(st->memo_mutex);
      st->memo.emplace(std::move(key), r);
      return r;
    };
    op.required = [st, j](int N) {
      const int n = st->n;
      int need = N;
      int Ba = detail::nproduct_cutoff_a(*st, N, 0);
      for (int i = 0; i < Ba; ++i) {
        int inner = st->a.mode(n - i).required(N);
        need = std::max(need, st->b.mode(i + j).required(inner));
      }
      int Bb = detail::nproduct_cutoff_b(*st, j, N, 0);
      for (int i = 0; i < Bb; ++i) {
        int inner = st->b.mode(n + j - i).required(N);
        need = std::max(need, st->a.mode(i).required(inner));
      }
      return need;
    };
    op.continuity = [st, j](int N) {
      const int n = st->n;
      int p = N;
      int Ba = detail::nproduct_cutoff_a(*st, N, 0);
      for (int i = 0; i < Ba; ++i)
        p = std::max(p, st->b.mode(i + j).continuity(st->a.mode(n - i).continuity(N)));
      int Bb = detail::nproduct_cutoff_b(*st, j, N, 0);
      for (int i = 0; i < Bb; ++i)
        p = std::max(p, st->a.mode(i).continuity(st->b.mode(n + j - i).continuity(N)));
      return p;
    };
    return op;
  };
  f.deep_K = [st](int N) {
    const int n = st->n;
    // Modes c_(-j): the b-side sum is deep once j >= n + K_b(N); the a-side
    // head needs b_(i-j)'s image inside the continuity modulus of a_(n-i).
    int K = std::max(1, n + st->b.deep_K(N));
    int Ba = detail::nproduct_cutoff_a(*st, N, 0);
    for (int i = 0; i < Ba; ++i) {
      int mod = st->a.mode(n - i).continuity(N);
      K = std::max(K, i + st->b.deep_K(mod));
    }
    return K;
  };
  return f;
}

/// Mode evaluation with the term cutoffs widened by `extra`; agreement with
/// the default evaluation is the cutoff-soundness property.
inline FilteredVector nproduct_mode_extended(const Field& a, const Field& b, int n, int j,
                                             const FilteredVector& v, int N, int extra) {
  auto st = std::make_shared<detail::NproductState>();
  st->a = a;
  st->b = b;
  st->n = n;
  return detail::nproduct_mode_apply(st, j, v, N, extra);
}

}  // namespace vertop
