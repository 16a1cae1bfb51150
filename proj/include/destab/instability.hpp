#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "destab/convex.hpp"
#include "destab/errors.hpp"
#include "destab/group.hpp"
#include "destab/matrix.hpp"
#include "destab/parallel.hpp"
#include "destab/polynomial.hpp"
#include "destab/representation.hpp"
#include "destab/rparabolic.hpp"

namespace destab {

namespace detail {

// Whether f lies in the linear span of basis, comparing coefficient vectors
// over the monomials that occur.
inline bool span_contains(const std::vector<Polynomial>& basis, const Polynomial& f) {
  std::map<Monomial, std::size_t> index;
  for (const auto& p : basis)
    for (const auto& [m, c] : p.terms()) index.emplace(m, index.size());
  for (const auto& [m, c] : f.terms())
    if (!index.contains(m)) return false;
  auto vec = [&](const Polynomial& p) {
    Vector v(index.size());
    for (const auto& [m, c] : p.terms()) v[index.at(m)] = c;
    return v;
  };
  RowSpace s(index.size());
  for (const auto& p : basis) s.insert(vec(p));
  return s.contains(vec(f));
}

}  // namespace detail

// A G-stable closed subvariety S ⊆ V cut out by explicit generators.
class SubvarietySpec {
 public:
  enum class Kind { ZeroLocus, IdentityTuple, Custom };

  // S = {0}: every coordinate function.
  static SubvarietySpec zero_locus(const Representation& rep) {
    std::vector<Polynomial> gens;
    for (std::size_t b = 0; b < rep.dim(); ++b) gens.push_back(Polynomial::variable(static_cast<std::uint32_t>(b)));
    return SubvarietySpec(Kind::ZeroLocus, rep, std::move(gens), true);
  }

  // The single point (1, ..., 1) of a tuple representation: x_kij − δ_ij.
  static SubvarietySpec identity_tuple(const Representation& rep) {
    if (rep.kind() != Representation::Kind::ConjugationTuples)
      throw UnsupportedError("the identity tuple is only defined for conjugation-tuple representations");
    const auto m = rep.group_dim();
    std::vector<Polynomial> gens;
    for (std::size_t k = 0; k < rep.count(); ++k)
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
          auto p = Polynomial::variable(static_cast<std::uint32_t>(k * m * m + i * m + j));
          if (i == j) p -= Polynomial::constant(1);
          gens.push_back(std::move(p));
        }
    return SubvarietySpec(Kind::IdentityTuple, rep, std::move(gens), true);
  }

  // User-supplied generators; G-stability is the caller's assertion.
  static SubvarietySpec custom(const Representation& rep, std::vector<Polynomial> gens, bool g_stable_asserted) {
    for (const auto& g : gens)
      if (g.max_variable() > rep.dim()) throw DimensionError("generator uses a variable outside the representation");
    return SubvarietySpec(Kind::Custom, rep, std::move(gens), g_stable_asserted);
  }

  Kind kind() const { return kind_; }
  const std::vector<Polynomial>& generators() const { return gens_; }
  bool g_stable_asserted() const { return asserted_; }
  // Identity-frame isotypic decomposition of each generator.
  const std::vector<IsotypicComponents>& components() const { return components_; }

  bool contains(const Point& x) const {
    return std::all_of(gens_.begin(), gens_.end(), [&](const Polynomial& f) { return sgn(f.evaluate(x.coords)) == 0; });
  }

  // Spot check of G-stability: f∘g must stay in the span of the generators
  // for every supplied g. Built-in kinds are stable by construction.
  void check_stability(const Representation& rep, const std::vector<Matrix>& elements) const {
    if (kind_ != Kind::Custom) return;
    for (std::size_t k = 0; k < elements.size(); ++k) {
      Matrix a = rep.action_matrix(elements[k]);
      for (std::size_t j = 0; j < gens_.size(); ++j)
        if (!detail::span_contains(gens_, gens_[j].compose_linear(a)))
          throw PreconditionError("subvariety is not stable: generator " + std::to_string(j) +
                                  " leaves the generator span under family element " + std::to_string(k));
    }
  }

  // g·S, cut out by f∘g⁻¹.
  SubvarietySpec transformed(const Representation& rep, const Matrix& g) const {
    if (kind_ != Kind::Custom) return *this;
    Matrix a = rep.action_matrix(inverse(g), g);
    std::vector<Polynomial> gens;
    for (const auto& f : gens_) gens.push_back(f.compose_linear(a));
    return custom(rep, std::move(gens), asserted_);
  }

 private:
  SubvarietySpec(Kind kind, const Representation& rep, std::vector<Polynomial> gens, bool asserted)
      : kind_(kind), gens_(std::move(gens)), asserted_(asserted) {
    for (const auto& f : gens_) {
      components_.push_back(isotypic_decompose(rep, f));
      Polynomial sum;
      for (const auto& [chi, part] : components_.back()) sum += part;
      if (sum != f) throw InvariantError("isotypic components do not reconstruct the generator");
    }
  }

  Kind kind_;
  std::vector<Polynomial> gens_;
  bool asserted_;
  std::vector<IsotypicComponents> components_;
};

// a_{S,x}(λ) ∈ ℕ ∪ {∞}.
struct VanishingOrder {
  std::optional<std::int64_t> value;  // nullopt encodes ∞ (x ∈ S)

  bool infinite() const { return !value.has_value(); }
  bool positive() const { return infinite() || *value > 0; }
  std::string str() const { return value ? std::to_string(*value) : "inf"; }
  friend bool operator==(const VanishingOrder&, const VanishingOrder&) = default;
};

namespace detail {

struct FramePoint {
  Point w;                       // the point in the frame: frame⁻¹·x
  std::set<Character> support;   // supp_T(w)
  std::set<Character> active;    // χ with some generator component F_χ(w) ≠ 0
  bool in_s = false;
};

// Everything the torus problem needs about X in the frame g: the orbit curve
// of x along g·λ_d·g⁻¹ is g·λ_d(a)·w, and f(g·λ_d(a)·w) = Σ_χ a^⟨d,χ⟩ F_χ(w)
// with F = f∘g split by weight.
inline std::vector<FramePoint> analyze_frame(const Representation& rep, const std::vector<Point>& xs,
                                             const SubvarietySpec& s, const Matrix& frame, const Matrix& frame_inv) {
  std::vector<IsotypicComponents> comps;
  for (const auto& f : s.generators()) comps.push_back(isotypic_decompose(rep, f, frame, frame_inv));
  std::vector<FramePoint> out;
  for (const auto& x : xs) {
    FramePoint fp;
    fp.w = rep.act(frame_inv, frame, x);
    for (std::size_t b = 0; b < rep.dim(); ++b)
      if (sgn(fp.w.coords[b]) != 0) fp.support.insert(rep.weight(b));
    for (const auto& gen : comps)
      for (const auto& [chi, part] : gen)
        if (!fp.active.contains(chi) && sgn(part.evaluate(fp.w.coords)) != 0) fp.active.insert(chi);
    fp.in_s = fp.active.empty();
    out.push_back(std::move(fp));
  }
  return out;
}

// Integer basis of the cocharacter lattice {d : SL block sums are zero}.
inline Matrix lattice_basis(const GroupSpec& group) {
  const auto m = group.dimension();
  std::vector<Vector> cols;
  for (std::size_t b = 0; b < group.factors().size(); ++b) {
    const auto& f = group.factors()[b];
    const auto o = group.block_offset(b);
    if (f.family == Family::GL) {
      for (std::size_t i = 0; i < f.rank; ++i) {
        Vector c(m);
        c[o + i] = 1;
        cols.push_back(std::move(c));
      }
    } else {
      for (std::size_t i = 0; i + 1 < f.rank; ++i) {
        Vector c(m);
        c[o + i] = 1;
        c[o + i + 1] = -1;
        cols.push_back(std::move(c));
      }
    }
  }
  Matrix basis(m, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < m; ++r) basis(r, c) = cols[c][r];
  return basis;
}

inline Vector to_vector(const Character& chi) {
  Vector v(chi.size());
  for (std::size_t i = 0; i < chi.size(); ++i) v[i] = Rational(static_cast<long>(chi[i]));
  return v;
}

inline Vector transpose_times(const Matrix& b, const Vector& v) {
  Vector out(b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c)
    for (std::size_t r = 0; r < b.rows(); ++r)
      if (sgn(v[r]) != 0 && sgn(b(r, c)) != 0) out[c] += b(r, c) * v[r];
  return out;
}

// min over points not in S of min over active χ of ⟨d,χ⟩; nullopt when every
// point lies in S.
inline std::optional<std::int64_t> order_from_frame(const std::vector<FramePoint>& pts, const TorusCocharacter& d) {
  std::optional<std::int64_t> best;
  for (const auto& fp : pts) {
    if (fp.in_s) continue;
    for (const auto& chi : fp.active) {
      auto n = pairing(d, chi);
      if (!best || n < *best) best = n;
    }
  }
  return best;
}

inline bool admissible_in_frame(const std::vector<FramePoint>& pts, const TorusCocharacter& d) {
  for (const auto& fp : pts)
    for (const auto& sigma : fp.support)
      if (pairing(d, sigma) < 0) return false;
  return true;
}

}  // namespace detail

// a_{S,x}(λ), computed from isotypic components of the generators in the
// frame of λ. Requires λ ∈ Λ(x).
inline VanishingOrder vanishing_order(const GroupSpec& group, const Representation& rep, const Point& x,
                                      const Cocharacter& lambda, const SubvarietySpec& s) {
  rep.check_compatible(group);
  rep.check_point(x);
  auto pts = detail::analyze_frame(rep, {x}, s, lambda.base(), lambda.base_inverse());
  if (!detail::admissible_in_frame(pts, lambda.torus()))
    throw PreconditionError("vanishing order: the cocharacter is not in Lambda(x) (no limit exists)");
  if (pts[0].in_s) return {};
  return {detail::order_from_frame(pts, lambda.torus())};
}

inline bool admits_limit_set(const Representation& rep, const std::vector<Point>& xs, const Cocharacter& lambda) {
  return std::all_of(xs.begin(), xs.end(), [&](const Point& x) { return limit(rep, x, lambda).has_value(); });
}

struct TorusOptimum {
  TorusCocharacter lambda;  // primitive; zero in the trivial case
  Rational value_sq;        // a²/‖λ‖²; zero in the trivial case
  bool trivial = false;     // X ⊆ S
  // Active constraints at the optimum: characters χ with ⟨λ,χ⟩ = a and
  // support weights σ with ⟨λ,σ⟩ = 0 that bind.
  std::vector<Character> active_orders;
  std::vector<Character> active_supports;
  bool dual_checked = false;  // value confirmed by the nearest-point route
};

// Kempf's torus problem in one frame. With C the active characters and Σ the
// supports, the maximum of a/‖λ‖ is 1/‖d*‖ for
//   d* = argmin ‖d‖²  subject to  ⟨d,χ⟩ ≥ 1 (χ ∈ C),  ⟨d,σ⟩ ≥ 0 (σ ∈ Σ),
// solved over the cocharacter lattice's real span.
inline std::optional<TorusOptimum> optimize_torus(const GroupSpec& group, const Representation& rep,
                                                  const std::vector<Point>& xs, const SubvarietySpec& s,
                                                  const Matrix& frame, const Matrix& frame_inv) {
  if (xs.empty()) throw PreconditionError("optimize_torus needs a nonempty set of points");
  rep.check_compatible(group);
  for (const auto& x : xs) rep.check_point(x);
  const auto m = group.dimension();
  auto pts = detail::analyze_frame(rep, xs, s, frame, frame_inv);

  if (std::all_of(pts.begin(), pts.end(), [](const auto& p) { return p.in_s; })) {
    TorusOptimum t;
    t.lambda = TorusCocharacter::zero(m);
    t.trivial = true;
    return t;
  }

  std::set<Character> orders, supports;
  for (const auto& fp : pts) {
    supports.insert(fp.support.begin(), fp.support.end());
    if (!fp.in_s) orders.insert(fp.active.begin(), fp.active.end());
  }
  if (orders.contains(Character::zero(m))) return std::nullopt;  // a limit misses S
  for (auto it = supports.begin(); it != supports.end();)
    it = (it->is_zero() || orders.contains(*it)) ? supports.erase(it) : std::next(it);

  const Matrix basis = detail::lattice_basis(group);
  if (basis.cols() == 0) return std::nullopt;
  const Matrix gram = basis.transpose() * group.norm().gram() * basis;

  std::vector<Character> labels;
  std::vector<Vector> rows;
  Vector rhs;
  for (const auto& chi : orders) {
    labels.push_back(chi);
    rows.push_back(detail::transpose_times(basis, detail::to_vector(chi)));
    rhs.push_back(1);
  }
  const std::size_t n_orders = rows.size();
  for (const auto& sigma : supports) {
    labels.push_back(sigma);
    rows.push_back(detail::transpose_times(basis, detail::to_vector(sigma)));
    rhs.push_back(0);
  }

  auto sol = solve_inequality_qp(gram, rows, rhs);
  if (!sol) return std::nullopt;
  const Rational norm_t = detail::form(gram, sol->x, sol->x);
  if (sgn(norm_t) <= 0) throw InvariantError("torus optimum has zero norm");

  TorusOptimum t;
  t.value_sq = 1 / norm_t;
  const Vector d_real = basis * sol->x;
  t.lambda = TorusCocharacter(primitive_integer_direction(d_real));

  bool support_active = false;
  for (auto a : sol->active) {
    if (a < n_orders)
      t.active_orders.push_back(labels[a]);
    else {
      t.active_supports.push_back(labels[a]);
      support_active = true;
    }
  }

  // Recompute from the integral direction.
  if (!detail::admissible_in_frame(pts, t.lambda)) throw InvariantError("torus optimum is not in Lambda(X)");
  auto a = detail::order_from_frame(pts, t.lambda);
  if (!a || Rational(*a) * Rational(*a) / norm_sq(group, t.lambda) != t.value_sq)
    throw InvariantError("torus optimum value does not match its recomputation from the primitive direction");

  // With no binding support constraint the value is the squared
  // Q'⁻¹-distance from the origin to conv(C), where Q' is the reduced Gram.
  if (!support_active) {
    std::vector<Vector> points(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_orders));
    const Matrix gram_inv = inverse(gram);
    Vector p = nearest_point_interior(points, gram_inv);
    if (detail::form(gram_inv, p, p) != t.value_sq)
      throw InvariantError("torus optimum disagrees with the nearest-point dual");
    t.dual_checked = true;
  }
  return t;
}

inline std::optional<TorusOptimum> optimize_torus(const GroupSpec& group, const Representation& rep,
                                                  const std::vector<Point>& xs, const SubvarietySpec& s,
                                                  const Matrix& frame) {
  return optimize_torus(group, rep, xs, s, frame, inverse(frame));
}

struct SearchConfig {
  std::int64_t exponent_box = 4;
  std::vector<Matrix> family;  // frames; must contain the identity
  bool oracle_mode = false;
  std::vector<Matrix> normalizer_samples;
  unsigned threads = 1;
  std::int64_t shear_bound = 0;  // recorded for reports when built by weyl_shear

  // Weyl representatives composed with lower unitriangular shears whose
  // in-block entries lie in [−s, s]; identity first.
  static SearchConfig weyl_shear(const GroupSpec& group, std::int64_t box, std::int64_t shear_bound) {
    if (shear_bound < 0) throw DomainError("shear bound must be nonnegative");
    SearchConfig cfg;
    cfg.exponent_box = box;
    cfg.shear_bound = shear_bound;
    const auto m = group.dimension();
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (group.same_block(i, j)) slots.emplace_back(i, j);
    std::vector<Matrix> shears;
    std::vector<std::int64_t> digits(slots.size(), 0);
    // Odometer over [−s, s]^slots; each digit cycles 0, 1, ..., s, −s, ..., −1.
    for (;;) {
      Matrix l = Matrix::identity(m);
      for (std::size_t k = 0; k < slots.size(); ++k) l(slots[k].first, slots[k].second) = Rational(static_cast<long>(digits[k]));
      shears.push_back(std::move(l));
      std::size_t k = 0;
      for (; k < digits.size(); ++k) {
        digits[k] = digits[k] == shear_bound ? -shear_bound : digits[k] + 1;
        if (digits[k] != 0) break;
      }
      if (k == digits.size()) break;
    }
    const auto weyl = group.weyl_group();
    for (const auto& l : shears)
      for (const auto& w : weyl) cfg.family.push_back(group.weyl_representative(w) * l);
    return cfg;
  }

  void validate(const GroupSpec& group) const {
    if (exponent_box < 1) throw DomainError("exponent box must be at least 1");
    if (std::none_of(family.begin(), family.end(), [](const Matrix& f) { return f.is_identity(); }))
      throw DomainError("search family must contain the identity");
    for (std::size_t i = 0; i < family.size(); ++i)
      if (!group.contains(family[i])) throw DomainError("family element " + std::to_string(i) + " is not in the group");
    for (std::size_t i = 0; i < normalizer_samples.size(); ++i)
      if (!group.contains(normalizer_samples[i]))
        throw DomainError("normalizer sample " + std::to_string(i) + " is not in the group");
  }

  // The family transported by g: frames g·f, so the search for g·X mirrors
  // the search for X frame by frame. Normalizer samples are conjugated too.
  // The result still needs the identity, i.e. g⁻¹ must be a frame.
  SearchConfig transported(const Matrix& g) const {
    SearchConfig c = *this;
    const Matrix g_inv = inverse(g);
    for (auto& f : c.family) f = g * f;
    for (auto& n : c.normalizer_samples) n = g * n * g_inv;
    return c;
  }
};

enum class OptimizationStatus { Trivial, Destabilized, NotWitnessed };

inline const char* to_string(OptimizationStatus s) {
  switch (s) {
    case OptimizationStatus::Trivial: return "trivial";
    case OptimizationStatus::Destabilized: return "destabilized";
    case OptimizationStatus::NotWitnessed: return "uniformly_unstable_not_witnessed";
  }
  return "?";
}

struct SearchCertificate {
  std::size_t tori_examined = 0;
  std::size_t frame_index = 0;
  std::vector<Character> active_orders;
  std::vector<Character> active_supports;
  bool dual_checked = false;
  std::vector<std::size_t> tied_frames;
  bool ties_share_parabolic = true;
  std::optional<Rational> oracle_value;
  std::size_t oracle_tori = 0;
  std::vector<std::size_t> normalizer_outside;  // sample indices not in P
};

struct OptimizationResult {
  OptimizationStatus status = OptimizationStatus::NotWitnessed;
  std::optional<Cocharacter> lambda;
  Rational value_sq;
  std::optional<ParabolicDescriptor> parabolic;
  SearchCertificate certificate;
  bool global_verified = false;
  // Recorded because independence of these choices is not assumed.
  std::size_t tuple_length = 0;
  Matrix norm_gram;
};

namespace detail {

// Laurent polynomial in the cocharacter parameter a.
using Laurent = std::map<std::int64_t, Rational>;

inline void laurent_add(Laurent& acc, std::int64_t e, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = acc.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) acc.erase(it);
  }
}

inline Laurent laurent_mul(const Laurent& a, const Laurent& b) {
  Laurent out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) laurent_add(out, ea + eb, ca * cb);
  return out;
}

// Order at a = 0 of f(λ(a)·x), evaluated directly as Laurent polynomials in
// a without any weight decomposition of f.
inline std::optional<std::int64_t> laurent_order(const std::vector<Polynomial>& gens, const std::vector<Laurent>& curve) {
  std::optional<std::int64_t> best;
  for (const auto& f : gens) {
    Laurent total;
    for (const auto& [mono, c] : f.terms()) {
      Laurent t{{0, c}};
      for (const auto& [v, e] : mono.factors())
        for (std::uint32_t k = 0; k < e && !t.empty(); ++k) t = laurent_mul(t, curve.at(v));
      for (const auto& [e, cc] : t) laurent_add(total, e, cc);
    }
    if (!total.empty() && (!best || total.begin()->first < *best)) best = total.begin()->first;
  }
  return best;
}

// Nonzero lattice points of [−B,B]^m, in odometer order.
template <class Fn>
void for_each_box_point(const GroupSpec& group, std::int64_t box, Fn&& fn) {
  const auto m = group.dimension();
  std::vector<std::int64_t> d(m, -box);
  for (;;) {
    TorusCocharacter t(d);
    if (!t.is_zero() && group.in_lattice(t)) fn(t);
    std::size_t k = 0;
    for (; k < m; ++k) {
      if (d[k] < box) {
        ++d[k];
        break;
      }
      d[k] = -box;
    }
    if (k == m) return;
  }
}

// Exhaustive maximum of a²/‖d‖² over primitive d in the box, every frame,
// using Laurent orders of the generators along the orbit curves.
inline std::pair<Rational, std::size_t> brute_force_value(const GroupSpec& group, const Representation& rep,
                                                          const std::vector<Point>& xs, const SubvarietySpec& s,
                                                          const SearchConfig& cfg) {
  std::vector<Rational> best(cfg.family.size());
  std::vector<std::size_t> count(cfg.family.size());
  parallel_for(cfg.family.size(), cfg.threads, [&](std::size_t fi) {
    const Matrix& f = cfg.family[fi];
    const Matrix f_inv = inverse(f);
    const Matrix a = rep.action_matrix(f, f_inv);
    std::vector<Point> ws;
    for (const auto& x : xs) ws.push_back(rep.act(f_inv, f, x));
    for_each_box_point(group, cfg.exponent_box, [&](const TorusCocharacter& d) {
      if (!d.is_primitive()) return;
      ++count[fi];
      std::optional<std::int64_t> order;
      for (const auto& w : ws) {
        std::vector<Laurent> curve(rep.dim());
        for (std::size_t b = 0; b < rep.dim(); ++b) {
          if (sgn(w.coords[b]) == 0) continue;
          const auto n = pairing(d, rep.weight(b));
          if (n < 0) return;  // no limit
          for (std::size_t i = 0; i < rep.dim(); ++i)
            if (sgn(a(i, b)) != 0) laurent_add(curve[i], n, a(i, b) * w.coords[b]);
        }
        auto o = laurent_order(s.generators(), curve);
        if (o && (!order || *o < *order)) order = o;
      }
      if (!order || *order <= 0) return;
      Rational v = Rational(*order) * Rational(*order) / norm_sq(group, d);
      if (v > best[fi]) best[fi] = v;
    });
  });
  Rational top = 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < best.size(); ++i) {
    if (best[i] > top) top = best[i];
    total += count[i];
  }
  return {top, total};
}

// When frame·λ_d·frame⁻¹ is a cocharacter of the standard torus, its
// exponent vector there: each exponent level's eigenspace must be a
// coordinate subspace.
inline std::optional<TorusCocharacter> standard_form(const Matrix& frame, const TorusCocharacter& d) {
  const auto m = d.size();
  std::vector<std::int64_t> out(m, 0);
  std::set<std::int64_t> levels(d.exponents().begin(), d.exponents().end());
  for (auto c : levels) {
    std::size_t cols = 0;
    std::vector<std::size_t> rows;
    for (std::size_t j = 0; j < m; ++j) {
      if (d[j] != c) continue;
      ++cols;
      for (std::size_t i = 0; i < m; ++i)
        if (sgn(frame(i, j)) != 0 && std::find(rows.begin(), rows.end(), i) == rows.end()) rows.push_back(i);
    }
    if (rows.size() != cols) return std::nullopt;
    for (auto i : rows) out[i] = c;
  }
  return TorusCocharacter(std::move(out));
}

inline bool stabilizes_set(const Representation& rep, const Matrix& g, const std::vector<Point>& xs) {
  const Matrix g_inv = inverse(g);
  for (const auto& x : xs) {
    Point y = rep.act(g, g_inv, x);
    if (std::find(xs.begin(), xs.end(), y) == xs.end()) return false;
  }
  return true;
}

inline bool stabilizes_subvariety(const Representation& rep, const Matrix& g, const SubvarietySpec& s) {
  if (s.kind() != SubvarietySpec::Kind::Custom) return true;
  Matrix a = rep.action_matrix(g);
  for (const auto& f : s.generators())
    if (!span_contains(s.generators(), f.compose_linear(a))) return false;
  return true;
}

}  // namespace detail

// Best torus optimum over the configured family of frames, with the runtime
// checks: every limit lands in S, the value recomputes exactly, tied
// maximizers share the parabolic, and normalizer samples lie in it.
inline OptimizationResult optimize(const GroupSpec& group, const Representation& rep, const std::vector<Point>& xs,
                                   const SubvarietySpec& s, const SearchConfig& cfg) {
  if (xs.empty()) throw PreconditionError("optimize needs a nonempty set of points");
  if (!s.g_stable_asserted()) throw PreconditionError("subvariety must be asserted G-stable");
  rep.check_compatible(group);
  for (const auto& x : xs) rep.check_point(x);
  cfg.validate(group);
  s.check_stability(rep, cfg.family);

  const auto m = group.dimension();
  OptimizationResult res;
  res.tuple_length = rep.is_conjugation() ? rep.count() : 0;
  res.norm_gram = group.norm().gram();

  std::vector<std::optional<TorusOptimum>> per_frame(cfg.family.size());
  parallel_for(cfg.family.size(), cfg.threads, [&](std::size_t i) {
    per_frame[i] = optimize_torus(group, rep, xs, s, cfg.family[i]);
  });
  res.certificate.tori_examined = per_frame.size();

  if (per_frame[0] && per_frame[0]->trivial) {
    res.status = OptimizationStatus::Trivial;
    res.lambda = Cocharacter::standard(group, TorusCocharacter::zero(m));
    res.value_sq = 0;
    res.parabolic.emplace(group, *res.lambda);
    res.global_verified = cfg.oracle_mode;
    return res;
  }

  // Candidates that are standard-torus cocharacters are rewritten in the
  // identity frame. Ties go to standard ones, then the lexicographically
  // smallest exponent vector, then the earliest frame.
  struct Candidate {
    std::size_t frame;
    Matrix base;
    TorusCocharacter d;
    bool standard;
  };
  std::vector<std::optional<Candidate>> cands(per_frame.size());
  for (std::size_t i = 0; i < per_frame.size(); ++i) {
    if (!per_frame[i]) continue;
    if (auto sf = detail::standard_form(cfg.family[i], per_frame[i]->lambda))
      cands[i] = Candidate{i, Matrix::identity(m), *sf, true};
    else
      cands[i] = Candidate{i, cfg.family[i], per_frame[i]->lambda, false};
  }
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < per_frame.size(); ++i) {
    if (!per_frame[i]) continue;
    if (!best) {
      best = i;
      continue;
    }
    const auto& a = *cands[i];
    const auto& b = *cands[*best];
    const Rational& va = per_frame[i]->value_sq;
    const Rational& vb = per_frame[*best]->value_sq;
    if (va != vb) {
      if (va > vb) best = i;
      continue;
    }
    if (a.standard != b.standard) {
      if (a.standard) best = i;
      continue;
    }
    if (a.d < b.d) best = i;
  }

  if (best) {
    const auto& opt = *per_frame[*best];
    res.status = OptimizationStatus::Destabilized;
    res.lambda = Cocharacter(group, cands[*best]->base, cands[*best]->d);
    res.value_sq = opt.value_sq;
    res.parabolic.emplace(group, *res.lambda);
    res.certificate.frame_index = *best;
    res.certificate.active_orders = opt.active_orders;
    res.certificate.active_supports = opt.active_supports;
    res.certificate.dual_checked = opt.dual_checked;

    if (!res.lambda->torus().is_primitive()) throw InvariantError("optimal cocharacter is not primitive");

    // (i) and the value, recomputed through the public vanishing order.
    std::optional<std::int64_t> a;
    for (const auto& x : xs) {
      auto o = vanishing_order(group, rep, x, *res.lambda, s);
      if (!o.positive()) throw InvariantError("optimal cocharacter does not move every point into S");
      if (o.value && (!a || *o.value < *a)) a = o.value;
    }
    if (!a || Rational(*a) * Rational(*a) / norm_sq(group, *res.lambda) != res.value_sq)
      throw InvariantError("optimal value does not match a^2/|lambda|^2");

    for (std::size_t i = 0; i < per_frame.size(); ++i) {
      if (i == *best || !per_frame[i] || per_frame[i]->value_sq != res.value_sq) continue;
      res.certificate.tied_frames.push_back(i);
      ParabolicDescriptor other(group, Cocharacter(group, cfg.family[i], per_frame[i]->lambda));
      if (!other.same_subgroup(*res.parabolic)) res.certificate.ties_share_parabolic = false;
    }
  } else {
    res.status = OptimizationStatus::NotWitnessed;
    res.value_sq = 0;
  }

  if (cfg.oracle_mode) {
    auto [brute, tori] = detail::brute_force_value(group, rep, xs, s, cfg);
    res.certificate.oracle_value = brute;
    res.certificate.oracle_tori = tori;
    if (brute > res.value_sq) throw InvariantError("exhaustive search beats the optimizer");
    res.global_verified = brute == res.value_sq;
  }

  if (res.status == OptimizationStatus::Destabilized) {
    for (std::size_t k = 0; k < cfg.normalizer_samples.size(); ++k) {
      const auto& g = cfg.normalizer_samples[k];
      if (!detail::stabilizes_set(rep, g, xs) || !detail::stabilizes_subvariety(rep, g, s))
        throw PreconditionError("normalizer sample " + std::to_string(k) + " does not stabilize X and S");
      if (classify(group, g, *res.lambda) == MembershipClass::NotInP) res.certificate.normalizer_outside.push_back(k);
    }
    // Only a verified optimum is covered by the uniqueness theorem.
    if (res.global_verified && !res.certificate.ties_share_parabolic)
      throw InvariantError("tied optimal cocharacters define different parabolics");
    if (res.global_verified && !res.certificate.normalizer_outside.empty())
      throw InvariantError("a normalizer sample lies outside the optimal parabolic");
  }
  return res;
}

struct ClosednessVerdict {
  bool closed = true;
  std::optional<Cocharacter> witness;
  std::optional<Point> witness_limit;
  std::size_t examined = 0;    // (frame, pattern) pairs tried
  std::size_t admissible = 0;  // of those, with an existing non-trivial limit
  std::int64_t bound = 0;
  std::size_t family_size = 0;
};

namespace detail {

// One exponent vector per weak ordering of the exponents within each block:
// for conjugation modules the limit, P_λ and R_u(P_λ) depend on nothing else.
// Central orderings are skipped. The representative prefers zero block sums,
// then the smallest norm, then the lexicographically smallest vector.
inline std::vector<TorusCocharacter> ordering_representatives(const GroupSpec& group, std::int64_t box) {
  auto pattern_of = [&](const TorusCocharacter& d) {
    std::vector<std::size_t> key(d.size());
    for (std::size_t b = 0; b < group.factors().size(); ++b) {
      const auto o = group.block_offset(b), n = group.factors()[b].rank;
      std::vector<std::int64_t> vals(d.exponents().begin() + o, d.exponents().begin() + o + n);
      std::sort(vals.begin(), vals.end());
      vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
      for (std::size_t i = 0; i < n; ++i)
        key[o + i] = static_cast<std::size_t>(std::lower_bound(vals.begin(), vals.end(), d[o + i]) - vals.begin());
    }
    return key;
  };
  auto block_sums_zero = [&](const TorusCocharacter& d) {
    for (std::size_t b = 0; b < group.factors().size(); ++b) {
      std::int64_t s = 0;
      for (std::size_t i = 0; i < group.factors()[b].rank; ++i) s += d[group.block_offset(b) + i];
      if (s != 0) return false;
    }
    return true;
  };
  auto better = [&](const TorusCocharacter& a, const TorusCocharacter& b) {
    const bool za = block_sums_zero(a), zb = block_sums_zero(b);
    if (za != zb) return za;
    const Rational na = norm_sq(group, a), nb = norm_sq(group, b);
    if (na != nb) return na < nb;
    return a < b;
  };
  std::map<std::vector<std::size_t>, TorusCocharacter> reps;
  for_each_box_point(group, box, [&](const TorusCocharacter& d) {
    auto key = pattern_of(d);
    if (std::all_of(key.begin(), key.end(), [](auto k) { return k == 0; })) return;
    auto it = reps.find(key);
    if (it == reps.end())
      reps.emplace(std::move(key), d);
    else if (better(d, it->second))
      it->second = d;
  });
  std::vector<TorusCocharacter> out;
  for (auto& [k, d] : reps) out.push_back(d);
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    const Rational na = norm_sq(group, a), nb = norm_sq(group, b);
    if (na != nb) return na < nb;
    return a < b;
  });
  return out;
}

}  // namespace detail

// Bounded semi-decision of cocharacter-closedness for a tuple under
// conjugation: v is not closed as soon as some searched λ has a limit v′ that
// is not R_u(P_λ)-conjugate to v.
inline ClosednessVerdict is_cochar_closed(const GroupSpec& group, const Representation& rep, const Point& v,
                                          const SearchConfig& cfg) {
  if (!rep.is_conjugation())
    throw UnsupportedError("cocharacter-closedness search needs a conjugation representation");
  rep.check_compatible(group);
  rep.check_point(v);
  cfg.validate(group);

  ClosednessVerdict out;
  out.bound = cfg.exponent_box;
  out.family_size = cfg.family.size();
  const auto patterns = detail::ordering_representatives(group, cfg.exponent_box);

  for (const auto& frame : cfg.family) {
    const Cocharacter base(group, frame, TorusCocharacter::zero(group.dimension()));
    const Point w = to_frame(rep, base, v);
    for (const auto& d : patterns) {
      ++out.examined;
      Point w0 = Point::zero(rep.dim());
      bool exists = true;
      for (std::size_t b = 0; b < rep.dim() && exists; ++b) {
        if (sgn(w.coords[b]) == 0) continue;
        const auto n = pairing(d, rep.weight(b));
        if (n < 0) exists = false;
        if (n == 0) w0.coords[b] = w.coords[b];
      }
      if (!exists) continue;
      if (w0 == w) continue;  // λ fixes v
      ++out.admissible;
      const Cocharacter lambda = base.with_torus(d);
      Point lim = from_frame(rep, lambda, w0);
      if (!find_ru_conjugator(group, rep, v, lim, lambda)) {
        out.closed = false;
        out.witness = lambda;
        out.witness_limit = std::move(lim);
        return out;
      }
    }
  }
  return out;
}

}  // namespace destab
