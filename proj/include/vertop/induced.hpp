#pragma once

// Induced modules over affine and Heisenberg mode algebras: PBW straightening
// modulo a subalgebra character, the depth filtration on normal-ordered words,
// state normal products inside the vacuum module, state-to-field
// reconstruction, the Borcherds-identity checker, and the comparison between
// the Gaussian-annihilator induced module and the twist-1/2 model.

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vertop/affine.hpp"
#include "vertop/betagamma.hpp"
#include "vertop/field.hpp"
#include "vertop/linalg.hpp"
#include "vertop/report.hpp"

namespace vertop {

// ---------------------------------------------------------------------------
// Mode algebras: finite Lie algebra basis, mode-additive brackets, center.
// ---------------------------------------------------------------------------

struct ModeLetter {
  int elem = 0;  // index into the finite basis
  int mode = 0;  // power of t

  bool operator==(const ModeLetter&) const = default;
  /// Deepest mode first; ties broken by basis index.
  std::strong_ordering operator<=>(const ModeLetter& o) const {
    if (auto c = mode <=> o.mode; c != 0) return c;
    return elem <=> o.elem;
  }
};

using Word = std::vector<ModeLetter>;  // leftmost letter acts last

inline int word_max_depth(const Word& w) {
  int d = 0;
  for (const auto& l : w) d = std::max(d, -l.mode);
  return d;
}
inline int word_weight(const Word& w) {
  int t = 0;
  for (const auto& l : w) t += -l.mode;
  return t;
}
inline std::string word_str(const std::vector<std::string>& names, const Word& w) {
  if (w.empty()) return "vac";
  std::string out;
  for (const auto& l : w)
    out += names[static_cast<std::size_t>(l.elem)] + "(" + std::to_string(l.mode) + ")";
  return out + "vac";
}

/// Element of the mode algebra: finite combination of single modes plus a
/// multiple of the center K.
struct AlgElement {
  std::vector<std::tuple<Scalar, int, int>> terms;  // (coeff, elem, mode)
  Scalar central{0};

  static AlgElement single(const Scalar& c, int elem, int mode) {
    AlgElement a;
    a.terms.emplace_back(c, elem, mode);
    return a;
  }

  /// Canonical (elem, mode) -> coeff map with zeros dropped.
  std::map<std::pair<int, int>, Scalar> collected() const {
    std::map<std::pair<int, int>, Scalar> out;
    for (const auto& [c, e, m] : terms) {
      auto [it, inserted] = out.emplace(std::make_pair(e, m), c);
      if (!inserted) it->second += c;
    }
    for (auto it = out.begin(); it != out.end();)
      it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
  }
  bool is_zero() const { return central.is_zero() && collected().empty(); }
};

struct ModeAlgebra {
  int dim = 0;
  std::vector<std::string> names;
  // structure[a][b][c]: coefficient of g_c in the finite part of [g_a, g_b];
  // modes are additive, [g_a t^m, g_b t^l] lands at t^{m+l}.
  std::vector<std::vector<std::vector<Scalar>>> structure;
  // Coefficient of K in [g_a(m), g_b(l)].
  std::function<Scalar(int a, int b, int m, int l)> central;

  AlgElement bracket(int a, int m, int b, int l) const {
    AlgElement out;
    const auto& row = structure[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    for (int c = 0; c < dim; ++c) {
      if (row[static_cast<std::size_t>(c)].is_zero()) continue;
      out.terms.emplace_back(row[static_cast<std::size_t>(c)], c, m + l);
    }
    out.central = central(a, b, m, l);
    return out;
  }

  AlgElement bracket(const AlgElement& x, const AlgElement& y) const {
    AlgElement out;
    for (const auto& [cx, ex, mx] : x.terms) {
      for (const auto& [cy, ey, my] : y.terms) {
        AlgElement b = bracket(ex, mx, ey, my);
        for (const auto& [c, e, m] : b.terms) out.terms.emplace_back(cx * cy * c, e, m);
        out.central += cx * cy * b.central;
      }
    }
    return out;
  }

  /// Antisymmetry and Jacobi on basis triples with modes in [-window, window];
  /// run once by the factories.
  void validate(int window) const {
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        for (int m = -window; m <= window; ++m) {
          for (int l = -window; l <= window; ++l) {
            AlgElement ab = bracket(a, m, b, l);
            AlgElement ba = bracket(b, l, a, m);
            for (const auto& [c, e, mm] : ba.terms) ab.terms.emplace_back(c, e, mm);
            ab.central += ba.central;
            if (!ab.is_zero())
              throw model_error("ModeAlgebra: bracket not antisymmetric at (" +
                                names[static_cast<std::size_t>(a)] + "," +
                                names[static_cast<std::size_t>(b)] + ")");
          }
        }
      }
    }
    auto outer = [&](int a, int m, const AlgElement& inner) {
      AlgElement out;
      for (const auto& [c, e, l] : inner.terms) {
        AlgElement b = bracket(a, m, e, l);
        for (const auto& [cc, ee, mm] : b.terms) out.terms.emplace_back(c * cc, ee, mm);
        out.central += c * b.central;
      }
      return out;
    };
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        for (int c = 0; c < dim; ++c) {
          for (int m = -window; m <= window; ++m) {
            for (int l = -window; l <= window; ++l) {
              const int p = 0;
              AlgElement j1 = outer(a, m, bracket(b, l, c, p));
              AlgElement j2 = outer(b, l, bracket(c, p, a, m));
              AlgElement j3 = outer(c, p, bracket(a, m, b, l));
              AlgElement sum = j1;
              for (const auto& t : j2.terms) sum.terms.push_back(t);
              for (const auto& t : j3.terms) sum.terms.push_back(t);
              sum.central += j2.central + j3.central;
              if (!sum.is_zero()) throw model_error("ModeAlgebra: Jacobi identity fails");
            }
          }
        }
      }
    }
  }

  static ModeAlgebra sln(int n);
  static ModeAlgebra heisenberg(int g);
};

inline ModeAlgebra ModeAlgebra::sln(int n) {
  std::vector<SlnElement> basis = sln_basis(n);
  ModeAlgebra alg;
  alg.dim = static_cast<int>(basis.size());
  for (const auto& b : basis) alg.names.push_back(b.name);
  alg.structure.assign(
      static_cast<std::size_t>(alg.dim),
      std::vector<std::vector<Scalar>>(static_cast<std::size_t>(alg.dim)));
  for (int a = 0; a < alg.dim; ++a)
    for (int b = 0; b < alg.dim; ++b)
      alg.structure[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          detail::sln_expand(matrix_bracket(basis[static_cast<std::size_t>(a)],
                                            basis[static_cast<std::size_t>(b)]));
  auto shared = std::make_shared<std::vector<SlnElement>>(std::move(basis));
  alg.central = [shared](int a, int b, int m, int l) {
    if (m + l != 0) return Scalar(0);
    return Scalar(m) * trace_form((*shared)[static_cast<std::size_t>(a)],
                                  (*shared)[static_cast<std::size_t>(b)]);
  };
  alg.validate(2);
  return alg;
}

/// Generators b_1..b_g then c_1..c_g; [b_j(m), c_k(l)] = tau delta_{jk}
/// delta_{m+l+1,0} K, all other brackets zero.
inline ModeAlgebra ModeAlgebra::heisenberg(int g) {
  ModeAlgebra alg;
  alg.dim = 2 * g;
  for (int i = 1; i <= g; ++i) alg.names.push_back("b[" + std::to_string(i) + "]");
  for (int i = 1; i <= g; ++i) alg.names.push_back("c[" + std::to_string(i) + "]");
  alg.structure.assign(
      static_cast<std::size_t>(alg.dim),
      std::vector<std::vector<Scalar>>(
          static_cast<std::size_t>(alg.dim),
          std::vector<Scalar>(static_cast<std::size_t>(alg.dim), Scalar(0))));
  alg.central = [g](int a, int b, int m, int l) {
    if (m + l + 1 != 0) return Scalar(0);
    if (a < g && b == a + g) return Scalar::tau();
    if (b < g && a == b + g) return -Scalar::tau();
    return Scalar(0);
  };
  alg.validate(2);
  return alg;
}

// ---------------------------------------------------------------------------
// Subalgebra characters and PBW straightening.
// ---------------------------------------------------------------------------

/// Finitely presented induction data: the character kills the annihilators
/// and sends K to `level`. Straightening only consumes `vacuum_image`, the
/// action of a nonnegative mode on the highest-weight vector expressed in
/// negative modes plus a multiple of the vector itself (its central slot).
struct SubalgebraSpec {
  Scalar level{0};
  int depth_gap = 1;
  std::function<std::vector<AlgElement>(int bound)> annihilators;
  std::function<AlgElement(int elem, int mode)> vacuum_image;

  /// s = g[[t]] + CK: nonnegative modes act as zero on vac.
  static SubalgebraSpec vacuum(const ModeAlgebra& alg, Scalar lev) {
    SubalgebraSpec spec;
    spec.level = std::move(lev);
    spec.depth_gap = 1;
    int dim = alg.dim;
    spec.annihilators = [dim](int bound) {
      std::vector<AlgElement> out;
      for (int e = 0; e < dim; ++e)
        for (int m = 0; m < bound; ++m) out.push_back(AlgElement::single(Scalar(1), e, m));
      return out;
    };
    spec.vacuum_image = [](int, int) { return AlgElement{}; };
    return spec;
  }

  /// Heisenberg annihilators of the Gaussian vector, sign-corrected:
  /// x_{j,-n} + d/dx_{j,-n}, rendered in b/c modes. Level 1 so brackets match
  /// the beta-gamma commutators.
  static SubalgebraSpec gaussian(int g) {
    SubalgebraSpec spec;
    spec.level = Scalar(1);
    spec.depth_gap = 1;
    Scalar ti = Scalar::tau().inverse();
    spec.annihilators = [g, ti](int bound) {
      std::vector<AlgElement> out;
      for (int i = 0; i < g; ++i) {
        for (int n = 1; n <= bound; ++n) {
          AlgElement a;  // x_{i+1,-n} + d: -tau^{-1} b_i(-n) + c_i(n-1)
          a.terms.emplace_back(-ti, i, -n);
          a.terms.emplace_back(Scalar(1), g + i, n - 1);
          out.push_back(std::move(a));
          AlgElement ap;  // x_{g+i+1,-n} + d: tau^{-1} c_i(-n) + b_i(n-1)
          ap.terms.emplace_back(ti, g + i, -n);
          ap.terms.emplace_back(Scalar(1), i, n - 1);
          out.push_back(std::move(ap));
        }
      }
      return out;
    };
    spec.vacuum_image = [g, ti](int elem, int mode) {
      AlgElement out;
      if (elem < g) {
        out.terms.emplace_back(-ti, g + elem, -(mode + 1));
      } else {
        out.terms.emplace_back(ti, elem - g, -(mode + 1));
      }
      return out;
    };
    return spec;
  }
};

/// Normal-ordered combination: words of negative modes, letters weakly
/// increasing by (mode, elem), deepest first. Words containing a mode of
/// depth > precision are unspecified.
struct PBWState {
  std::map<Word, Scalar> terms;
  std::optional<int> precision;

  static PBWState vacuum() {
    PBWState st;
    st.terms.emplace(Word{}, Scalar(1));
    return st;
  }

  void add(const Word& w, const Scalar& c) {
    auto [it, inserted] = terms.emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    } else if (c.is_zero()) {
      terms.erase(it);
    }
  }

  bool is_zero() const { return terms.empty(); }
  Scalar coefficient(const Word& w) const {
    auto it = terms.find(w);
    return it == terms.end() ? Scalar(0) : it->second;
  }
  int max_weight() const {
    int t = 0;
    for (const auto& [w, c] : terms) t = std::max(t, word_weight(w));
    return t;
  }
  PBWState scaled(const Scalar& s) const {
    PBWState out;
    out.precision = precision;
    if (s.is_zero()) return out;
    for (const auto& [w, c] : terms) out.terms.emplace(w, c * s);
    return out;
  }
  bool operator==(const PBWState& o) const {
    return precision == o.precision && terms == o.terms;
  }
  std::string str(const std::vector<std::string>& names) const {
    if (terms.empty()) return "0";
    std::string out;
    for (const auto& [w, c] : terms) {
      if (!out.empty()) out += " + ";
      std::string cs = c.str();
      bool parens = cs.find('+') != std::string::npos || cs.find('-') != std::string::npos;
      out += (parens ? "(" + cs + ")" : cs) + "*" + word_str(names, w);
    }
    return out;
  }
};

enum class StraightenStrategy { RightmostFirst, NegativePairsFirst };

namespace detail {

/// Rewrite one word into normal form mod U_N, accumulating into `out`.
/// Nonnegative letters migrate rightward (bracket corrections shorten the
/// word) and die on the vacuum via the character; negative letters are then
/// bubble-sorted, their corrections strictly deeper. The step budget guards
/// against an inconsistent spec.
inline void straighten_word(const ModeAlgebra& alg, const SubalgebraSpec& spec, Word w,
                            Scalar coeff, std::optional<int> N, StraightenStrategy strat,
                            PBWState& out, long long& budget) {
  // Coefficients of identical intermediate words are merged eagerly; without
  // this the rewrite tree duplicates subtrees exponentially.
  std::map<Word, Scalar> work;
  work.emplace(std::move(w), std::move(coeff));
  auto push = [&work](Word nw, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = work.emplace(std::move(nw), c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) work.erase(it);
    }
  };
  while (!work.empty()) {
    if (--budget < 0) throw model_error("straighten: rewrite budget exhausted");
    auto node = work.extract(work.begin());
    Word word = std::move(node.key());
    Scalar c = std::move(node.mapped());
    const int len = static_cast<int>(word.size());

    // Swap positions q, q+1 and emit the bracket correction terms.
    auto swap_at = [&](int q) {
      ModeLetter x = word[static_cast<std::size_t>(q)];
      ModeLetter y = word[static_cast<std::size_t>(q + 1)];
      Word swapped = word;
      std::swap(swapped[static_cast<std::size_t>(q)],
                swapped[static_cast<std::size_t>(q + 1)]);
      push(std::move(swapped), c);
      AlgElement br = alg.bracket(x.elem, x.mode, y.elem, y.mode);
      Word shorter;
      shorter.reserve(word.size() - 1);
      for (int i = 0; i < len; ++i)
        if (i != q && i != q + 1) shorter.push_back(word[static_cast<std::size_t>(i)]);
      for (const auto& [bc, be, bm] : br.terms) {
        Word nw = shorter;
        nw.insert(nw.begin() + q, ModeLetter{be, bm});
        push(std::move(nw), c * bc);
      }
      if (!br.central.is_zero()) push(shorter, c * br.central * spec.level);
    };

    // The alternative order settles adjacent negative-pair inversions before
    // touching annihilation letters.
    if (strat == StraightenStrategy::NegativePairsFirst) {
      int q = -1;
      for (int i = len - 2; i >= 0; --i) {
        if (word[static_cast<std::size_t>(i)].mode < 0 &&
            word[static_cast<std::size_t>(i + 1)].mode < 0 &&
            word[static_cast<std::size_t>(i + 1)] < word[static_cast<std::size_t>(i)]) {
          q = i;
          break;
        }
      }
      if (q >= 0) {
        swap_at(q);
        continue;
      }
    }

    // Migrate the rightmost annihilation letter; it dies on the vacuum via
    // the character.
    int p = -1;
    for (int i = len - 1; i >= 0; --i)
      if (word[static_cast<std::size_t>(i)].mode >= 0) {
        p = i;
        break;
      }
    if (p >= 0) {
      ModeLetter x = word[static_cast<std::size_t>(p)];
      if (p == len - 1) {
        AlgElement img = spec.vacuum_image(x.elem, x.mode);
        Word prefix(word.begin(), word.end() - 1);
        for (const auto& [ic, ie, im] : img.terms) {
          Word nw = prefix;
          nw.push_back({ie, im});
          push(std::move(nw), c * ic);
        }
        if (!img.central.is_zero()) push(prefix, c * img.central);
      } else {
        swap_at(p);
      }
      continue;
    }

    // All letters negative: corrections only deepen, so the word can be
    // dropped as soon as its own depth exceeds the target.
    if (N && word_max_depth(word) > *N) continue;
    int q = -1;
    for (int i = 0; i + 1 < len; ++i)
      if (word[static_cast<std::size_t>(i + 1)] < word[static_cast<std::size_t>(i)]) {
        q = i;
        break;
      }
    if (q < 0) {
      out.add(word, c);
      continue;
    }
    swap_at(q);
  }
}

}  // namespace detail

inline PBWState straighten(const ModeAlgebra& alg, const SubalgebraSpec& spec, const Word& w,
                           const Scalar& coeff = Scalar(1),
                           std::optional<int> N = std::nullopt,
                           StraightenStrategy strat = StraightenStrategy::RightmostFirst) {
  PBWState out;
  out.precision = N;
  long long budget = 1 << 22;
  detail::straighten_word(alg, spec, w, coeff, N, strat, out, budget);
  return out;
}

// ---------------------------------------------------------------------------
// Induced modules.
// ---------------------------------------------------------------------------

struct InducedModule {
  ModeAlgebra algebra;
  SubalgebraSpec spec;

  /// Checks at construction: annihilators are not purely creation-mode
  /// combinations (the depth-gap condition), they are killed by the
  /// character, and their pairwise brackets are killed too.
  static InducedModule make(ModeAlgebra alg, SubalgebraSpec sp, int check_bound = 3) {
    InducedModule mod{std::move(alg), std::move(sp)};
    std::vector<AlgElement> anns = mod.spec.annihilators(check_bound);
    for (const auto& a : anns) {
      bool has_nonneg = false;
      for (const auto& [c, e, m] : a.terms) has_nonneg = has_nonneg || m >= 0;
      if (!has_nonneg && !a.collected().empty())
        throw model_error("InducedModule: annihilator lies in g[t^-1]t^-1, depth gap violated");
      if (!mod.apply_element(a, PBWState::vacuum()).is_zero())
        throw model_error("InducedModule: annihilator not killed by the character");
    }
    for (const auto& a : anns) {
      for (const auto& b : anns) {
        PBWState ab = mod.apply_element(a, mod.apply_element(b, PBWState::vacuum()));
        PBWState ba = mod.apply_element(b, mod.apply_element(a, PBWState::vacuum()));
        PBWState diff = ab;
        for (const auto& [w, c] : ba.terms) diff.add(w, -c);
        if (!diff.is_zero())
          throw model_error("InducedModule: annihilator bracket escapes the character");
      }
    }
    return mod;
  }

  /// g_elem(mode) applied to a state. A nonnegative mode shallows unknown
  /// words by `mode` depths, so the precision drops accordingly.
  PBWState apply(int elem, int mode, const PBWState& st) const {
    std::optional<int> prec = st.precision;
    if (prec && mode > 0) {
      prec = *prec - mode;
      if (*prec < 0) throw precision_error(mode, *st.precision, "InducedModule::apply");
    }
    PBWState out;
    out.precision = prec;
    long long budget = 1 << 22;
    for (const auto& [w, c] : st.terms) {
      Word nw;
      nw.reserve(w.size() + 1);
      nw.push_back({elem, mode});
      nw.insert(nw.end(), w.begin(), w.end());
      detail::straighten_word(algebra, spec, std::move(nw), c, prec,
                              StraightenStrategy::RightmostFirst, out, budget);
    }
    return out;
  }

  PBWState apply_element(const AlgElement& x, const PBWState& st) const {
    PBWState out;
    out.precision = st.precision;
    for (const auto& [c, e, m] : x.terms) {
      PBWState part = apply(e, m, st);
      if (part.precision && (!out.precision || *part.precision < *out.precision))
        out.precision = part.precision;
      for (const auto& [w, cc] : part.terms) out.add(w, cc * c);
    }
    if (!x.central.is_zero()) {
      Scalar k = x.central * spec.level;
      for (const auto& [w, c] : st.terms) out.add(w, c * k);
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// State normal products inside the vacuum module.
// ---------------------------------------------------------------------------

namespace detail {

/// Mode n of the field of the vacuum-module word w, applied to state b.
/// Empty word: identity at mode -1. Otherwise w = x(-m) rest and
///   (x_(-m) rest)_(n) = sum_i (-1)^i C(-m,i) x(-m-i) rest_(n+i)
///                     - sum_i (-1)^{m+i} C(-m,i) rest_(-m+n-i) x(i),
/// with both sums cut off by the weight grading of the vacuum module.
inline PBWState state_word_mode(const InducedModule& V, const Word& w, int n,
                                const PBWState& b) {
  if (w.empty()) {
    if (n == -1) return b;
    PBWState z;
    z.precision = b.precision;
    return z;
  }
  ModeLetter x = w.front();
  if (x.mode >= 0)
    throw model_error("state_word_mode: not an iterated negative-mode word");
  const int m = -x.mode;
  Word rest(w.begin() + 1, w.end());
  PBWState out;
  out.precision = b.precision;
  auto merge = [&out](const PBWState& part, const Scalar& s) {
    if (s.is_zero()) return;
    for (const auto& [ww, c] : part.terms) out.add(ww, c * s);
  };
  const int wb = b.max_weight();
  const int B1 = word_weight(rest) + wb - n;
  for (int i = 0; i < B1; ++i) {
    Scalar coeff = binomial(-m, i) * Scalar(i % 2 == 0 ? 1 : -1);
    PBWState inner = state_word_mode(V, rest, n + i, b);
    if (inner.is_zero()) continue;
    merge(V.apply(x.elem, -m - i, inner), coeff);
  }
  const int B2 = wb + 1;
  for (int i = 0; i < B2; ++i) {
    Scalar coeff = binomial(-m, i) * Scalar((m + i) % 2 == 0 ? -1 : 1);
    PBWState xb = V.apply(x.elem, i, b);
    if (xb.is_zero()) continue;
    merge(state_word_mode(V, rest, -m + n - i, xb), coeff);
  }
  return out;
}

}  // namespace detail

/// a_(l) b computed inside the vacuum module V.
inline PBWState state_nproduct(const InducedModule& V, const PBWState& a, const PBWState& b,
                               int l) {
  PBWState out;
  out.precision = b.precision;
  for (const auto& [w, c] : a.terms) {
    PBWState part = detail::state_word_mode(V, w, l, b);
    for (const auto& [ww, cc] : part.terms) out.add(ww, cc * c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reconstruction: vacuum states to fields on a realized module.
// ---------------------------------------------------------------------------

/// Generator states map to generator fields, x(-m) rest to the (-m)-th normal
/// product, the vacuum to the identity, extended linearly.
inline Field reconstruct_field(const PBWState& a, const std::vector<Field>& realization,
                               const ModelSpace& space) {
  std::function<Field(const Word&, std::size_t)> of_word = [&](const Word& w,
                                                               std::size_t pos) -> Field {
    if (pos == w.size()) return identity_field(space);
    ModeLetter x = w[pos];
    if (x.mode >= 0)
      throw model_error("reconstruct_field: not an iterated negative-mode word");
    return nproduct(realization[static_cast<std::size_t>(x.elem)], of_word(w, pos + 1),
                    x.mode);
  };
  std::vector<std::pair<Scalar, Field>> parts;
  for (const auto& [w, c] : a.terms) parts.emplace_back(c, of_word(w, 0));
  return sum_fields(parts, space);
}

/// Reconstruction compatibility of the realization: the field of a_(l)b equals the
/// l-th normal product of the fields of a and b, mode by mode on the probes.
inline ReportEntry borcherds_check(const InducedModule& V, const PBWState& a,
                                   const PBWState& b, int l,
                                   const std::vector<Field>& realization,
                                   const ModelSpace& space,
                                   const std::vector<FilteredVector>& probes, int window,
                                   int N) {
  ReportEntry entry;
  entry.name = "borcherds";
  entry.params = {{"a", a.str(V.algebra.names)},
                  {"b", b.str(V.algebra.names)},
                  {"l", std::to_string(l)},
                  {"window", std::to_string(window)},
                  {"N", std::to_string(N)}};
  PBWState ab = state_nproduct(V, a, b, l);
  Field lhs = reconstruct_field(ab, realization, space);
  Field rhs = nproduct(reconstruct_field(a, realization, space),
                       reconstruct_field(b, realization, space), l);
  long long compared = 0;
  for (int n = -window; n <= window; ++n) {
    ModeOp lm = lhs.mode(n), rm = rhs.mode(n);
    int need = std::max(lm.required(N), rm.required(N));
    for (const auto& v : probes) {
      if (precision_of(v) < need) continue;
      // Each image mod U_N depends only on the probe mod that side's
      // required precision; truncating first keeps deep probes cheap.
      FilteredVector lv = v.truncated(lm.required(N));
      FilteredVector rv = v.truncated(rm.required(N));
      FilteredVector left = lm.apply(lv, N);
      FilteredVector right = rm.apply(rv, N);
      ++compared;
      if (!(left == right)) {
        entry.status = CheckStatus::Fail;
        entry.witness = "mode " + std::to_string(n) + " probe " + v.str() + ": Y(a_(l)b) " +
                        left.str() + " vs Y(a)_(l)Y(b) " + right.str();
        return entry;
      }
    }
  }
  if (compared == 0) {
    entry.status = CheckStatus::Error;
    entry.witness = "no probe had enough precision";
    return entry;
  }
  entry.status = CheckStatus::Pass;
  return entry;
}

// ---------------------------------------------------------------------------
// Structural property checks.
// ---------------------------------------------------------------------------

inline ReportEntry check_straighten_confluence(const InducedModule& mod, int count,
                                               int max_len, int max_depth,
                                               unsigned int seed) {
  ReportEntry entry;
  entry.name = "straighten_confluence";
  entry.params = {{"count", std::to_string(count)},
                  {"max_len", std::to_string(max_len)},
                  {"max_depth", std::to_string(max_depth)},
                  {"seed", std::to_string(seed)}};
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> len_dist(1, max_len);
  std::uniform_int_distribution<int> elem_dist(0, mod.algebra.dim - 1);
  std::uniform_int_distribution<int> mode_dist(-max_depth, max_depth);
  for (int t = 0; t < count; ++t) {
    Word w;
    int len = len_dist(rng);
    for (int i = 0; i < len; ++i) w.push_back({elem_dist(rng), mode_dist(rng)});
    PBWState r1 = straighten(mod.algebra, mod.spec, w, Scalar(1), std::nullopt,
                             StraightenStrategy::RightmostFirst);
    PBWState r2 = straighten(mod.algebra, mod.spec, w, Scalar(1), std::nullopt,
                             StraightenStrategy::NegativePairsFirst);
    if (!(r1 == r2)) {
      entry.status = CheckStatus::Fail;
      entry.witness = "word " + word_str(mod.algebra.names, w) + ": " +
                      r1.str(mod.algebra.names) + " vs " + r2.str(mod.algebra.names);
      return entry;
    }
  }
  entry.status = CheckStatus::Pass;
  return entry;
}

namespace detail {

inline void enumerate_normal_words(const ModeAlgebra& alg, int max_len, int max_depth,
                                   std::vector<Word>& out) {
  out.push_back({});
  std::vector<ModeLetter> letters;
  for (int m = -max_depth; m <= -1; ++m)
    for (int e = 0; e < alg.dim; ++e) letters.push_back({e, m});
  Word current;
  auto rec = [&](auto&& self, std::size_t idx) -> void {
    if (static_cast<int>(current.size()) >= max_len) return;
    for (std::size_t i = idx; i < letters.size(); ++i) {
      current.push_back(letters[i]);
      out.push_back(current);
      self(self, i);
      current.pop_back();
    }
  };
  rec(rec, 0);
}

}  // namespace detail

/// Straightened images of distinct normal-ordered words stay linearly
/// independent in the truncated span.
inline ReportEntry check_pbw_independence(const InducedModule& mod, int max_len,
                                          int max_depth) {
  ReportEntry entry;
  entry.name = "pbw_independence";
  entry.params = {{"max_len", std::to_string(max_len)},
                  {"max_depth", std::to_string(max_depth)}};
  std::vector<Word> words;
  detail::enumerate_normal_words(mod.algebra, max_len, max_depth, words);
  std::map<Word, int> column;
  std::vector<PBWState> images;
  for (const auto& w : words) {
    PBWState st = straighten(mod.algebra, mod.spec, w);
    for (const auto& [ww, c] : st.terms) column.emplace(ww, 0);
    images.push_back(std::move(st));
  }
  int cols = 0;
  for (auto& [w, idx] : column) idx = cols++;
  std::vector<std::vector<Scalar>> rows;
  for (const auto& st : images) {
    std::vector<Scalar> row(static_cast<std::size_t>(cols), Scalar(0));
    for (const auto& [w, c] : st.terms) row[static_cast<std::size_t>(column[w])] = c;
    rows.push_back(std::move(row));
  }
  int rank = matrix_rank(rows);
  if (rank != static_cast<int>(words.size())) {
    entry.status = CheckStatus::Fail;
    entry.witness = "rank " + std::to_string(rank) + " over " +
                    std::to_string(words.size()) + " words";
    return entry;
  }
  entry.status = CheckStatus::Pass;
  return entry;
}

/// Straightening an all-negative word never shallows it, and on the vacuum
/// module the depth and weight filtrations are mutually cofinal: a normal
/// word with a letter of depth >= n has weight >= n, and a word of length
/// <= L needs weight > L(n-1) to force a letter of depth >= n.
inline ReportEntry check_depth_filtration(const InducedModule& mod, int max_len,
                                          int max_depth, unsigned int seed) {
  ReportEntry entry;
  entry.name = "depth_filtration";
  entry.params = {{"max_len", std::to_string(max_len)},
                  {"max_depth", std::to_string(max_depth)},
                  {"seed", std::to_string(seed)}};
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> len_dist(1, max_len);
  std::uniform_int_distribution<int> elem_dist(0, mod.algebra.dim - 1);
  std::uniform_int_distribution<int> depth_dist(1, max_depth);
  for (int t = 0; t < 100; ++t) {
    Word w;
    int len = len_dist(rng);
    for (int i = 0; i < len; ++i) w.push_back({elem_dist(rng), -depth_dist(rng)});
    int d = word_max_depth(w);
    PBWState st = straighten(mod.algebra, mod.spec, w);
    for (const auto& [ww, c] : st.terms) {
      if (!ww.empty() && word_max_depth(ww) < d) {
        entry.status = CheckStatus::Fail;
        entry.witness = "word " + word_str(mod.algebra.names, w) +
                        " straightens to the shallower " + word_str(mod.algebra.names, ww);
        return entry;
      }
    }
  }
  std::vector<Word> words;
  detail::enumerate_normal_words(mod.algebra, max_len, max_depth, words);
  for (const auto& w : words) {
    if (w.empty()) continue;
    if (word_max_depth(w) >= 2 && word_weight(w) < 2) {
      entry.status = CheckStatus::Fail;
      entry.witness = "depth does not bound weight on " + word_str(mod.algebra.names, w);
      return entry;
    }
    if (word_weight(w) > max_len && word_max_depth(w) < 2) {
      entry.status = CheckStatus::Fail;
      entry.witness = "weight does not force depth on " + word_str(mod.algebra.names, w);
      return entry;
    }
  }
  entry.status = CheckStatus::Pass;
  return entry;
}

// ---------------------------------------------------------------------------
// Comparison with the twist-1/2 model.
// ---------------------------------------------------------------------------

/// The canonical map word * vac -> word * (Gaussian vector): checks that the
/// sign-corrected annihilators kill the Gaussian, measures the level from the
/// central commutator, and verifies the map intertwines all generator modes
/// on normal words of bounded length.
inline ReportEntry compare_induced_heisenberg(int g, int N, int max_len = 3,
                                              int mode_window = 2) {
  ReportEntry entry;
  entry.name = "induced_heisenberg";
  entry.params = {{"g", std::to_string(g)},
                  {"N", std::to_string(N)},
                  {"max_len", std::to_string(max_len)}};
  SymplecticConfig cfg = SymplecticConfig::schwartz(g);
  std::vector<Field> gens;
  for (int i = 1; i <= g; ++i) gens.push_back(beta_field(cfg, i));
  for (int i = 1; i <= g; ++i) gens.push_back(gamma_field(cfg, i));
  const int deep = N * (max_len + 2) + mode_window + 2;  // exact workspace bound

  // The Gaussian vector is the basis vector 1 of the twisted model; the
  // annihilators x + d/dx must kill it.
  for (int j = 1; j <= 2 * g; ++j) {
    for (int n = 1; n <= N; ++n) {
      FilteredVector one = FilteredVector::one();
      FilteredVector img = linear_combine(
          {{Scalar(1), apply_primitive(PrimitiveOp::mult(j, n), one, cfg.model)},
           {Scalar(1), apply_primitive(PrimitiveOp::deriv(j, n), one, cfg.model)}});
      if (!img.is_zero()) {
        entry.status = CheckStatus::Fail;
        entry.witness = "annihilator x[" + std::to_string(j) + ",-" + std::to_string(n) +
                        "] + d does not kill the Gaussian: " + img.str();
        return entry;
      }
    }
  }

  // Level measured from [beta_1(0), gamma_1(-1)] = tau K on the model side.
  const Field& b1 = gens[0];
  const Field& c1 = gens[static_cast<std::size_t>(g)];
  FilteredVector comm = mode_commutator(b1, 0, c1, -1, FilteredVector::one(), deep);
  Scalar level = comm.coefficient(Monomial{}) * Scalar::tau().inverse();
  entry.params["measured_level"] = level.str();

  ModeAlgebra alg = ModeAlgebra::heisenberg(g);
  SubalgebraSpec spec = SubalgebraSpec::gaussian(g);
  spec.level = level;
  InducedModule mod = InducedModule::make(alg, spec, N);

  auto to_model = [&](const PBWState& st) {
    FilteredVector out;
    for (const auto& [w, c] : st.terms) {
      FilteredVector v = FilteredVector::one();
      for (auto it = w.rbegin(); it != w.rend(); ++it)
        v = gens[static_cast<std::size_t>(it->elem)].mode(it->mode).apply(v, deep);
      for (const auto& [m, cc] : v.terms()) out.add_term(m, cc * c);
    }
    return out;
  };

  std::vector<Word> words;
  detail::enumerate_normal_words(alg, max_len, N, words);
  for (const auto& w : words) {
    FilteredVector base = to_model(straighten(alg, spec, w));
    for (int e = 0; e < alg.dim; ++e) {
      for (int m = -mode_window; m <= mode_window; ++m) {
        Word nw;
        nw.push_back({e, m});
        nw.insert(nw.end(), w.begin(), w.end());
        FilteredVector abstract_side = to_model(straighten(alg, spec, nw));
        FilteredVector model_side = gens[static_cast<std::size_t>(e)].mode(m).apply(base, deep);
        FilteredVector diff =
            linear_combine({{Scalar(1), abstract_side}, {Scalar(-1), model_side}});
        if (!diff.is_zero()) {
          entry.status = CheckStatus::Fail;
          entry.witness = alg.names[static_cast<std::size_t>(e)] + "(" + std::to_string(m) +
                          ") fails to intertwine on " + word_str(alg.names, w) + ": " +
                          diff.str();
          return entry;
        }
      }
    }
  }

  // Central element: tau K acts as tau * level on the induced side and the
  // center acts as tau Id on the model side.
  AlgElement center;
  center.central = Scalar(1);
  PBWState kv = mod.apply_element(center, PBWState::vacuum());
  FilteredVector induced_side = to_model(kv).scaled(Scalar::tau());
  FilteredVector model_center =
      heisenberg_action(cfg, HeisenbergElement::center(Scalar(1)))
          .apply(FilteredVector::one(), cfg.model, deep);
  FilteredVector cd =
      linear_combine({{Scalar(1), induced_side}, {Scalar(-1), model_center}});
  if (!cd.is_zero()) {
    entry.status = CheckStatus::Fail;
    entry.witness = "central actions disagree: " + cd.str();
    return entry;
  }
  entry.status = CheckStatus::Pass;
  return entry;
}

}  // namespace vertop
