#include "catdim/preorder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "catdim/errors.hpp"
#include "catdim/linalg.hpp"
#include "catdim/random.hpp"

namespace catdim {

namespace {

// Largest prime below 2^31; used to screen integer matrices for invertibility.
constexpr std::uint64_t kScreenPrime = 2147483647ULL;

Vector unit_vector(std::size_t n, std::size_t i) {
  Vector v(n);
  v[i] = Scalar(1);
  return v;
}

}  // namespace

const FactorSetMember* FactorSet::find(ArrowId s) const {
  auto it = std::lower_bound(members.begin(), members.end(), s,
                             [](const FactorSetMember& m, ArrowId id) { return m.s < id; });
  return it != members.end() && it->s == s ? &*it : nullptr;
}

std::vector<ArrowId> FactorSet::arrows() const {
  std::vector<ArrowId> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.s);
  return out;
}

FactorSet factor_set(const Category& c, ObjectId x, ObjectId y, bool all_witnesses) {
  FactorSet fs{x, y, {}};
  auto ends = c.hom(x, x);
  std::vector<std::optional<FactorSetMember>> slots(ends.size());
  for (ArrowId p : c.hom(x, y))
    for (ArrowId q : c.hom(y, x)) {
      ArrowId s = c.compose(p, q);
      auto& slot = slots[c.hom_index(s)];
      if (!slot) {
        slot = FactorSetMember{s, {{p, q}}};
      } else if (all_witnesses) {
        slot->witnesses.push_back({p, q});
      }
    }
  for (auto& slot : slots)
    if (slot) fs.members.push_back(std::move(*slot));
  return fs;
}

Matrix action_matrix(const Category& c, ObjectId d, ArrowId s, const RingSpec& ring) {
  const Arrow& a = c.arrow(s);
  if (a.src != a.tgt) throw InputError("action_matrix needs an endomorphism");
  auto basis = c.hom(d, a.src);
  Matrix m(basis.size(), basis.size(), ring);
  for (std::size_t col = 0; col < basis.size(); ++col) m(c.hom_index(c.compose(basis[col], s)), col) = Scalar(1);
  return m;
}

bool recheck(const Category& c, const PreorderCertificate& cert) {
  const auto n_obj = c.num_objects();
  if (cert.d >= n_obj || cert.x >= n_obj || cert.y >= n_obj) return false;
  FactorSet fs = factor_set(c, cert.x, cert.y, false);
  for (std::size_t i = 0; i < cert.coeffs.size(); ++i) {
    const auto& [s, coef] = cert.coeffs[i];
    if (s >= c.num_arrows() || !fs.find(s)) return false;
    if (i > 0 && cert.coeffs[i - 1].first >= s) return false;
    if (!cert.ring.contains(coef)) return false;
  }
  auto basis = c.hom(cert.d, cert.x);
  const std::size_t n = basis.size();
  Vector column(n);
  std::vector<char> marked(n, 0);
  std::vector<std::size_t> touched;
  for (std::size_t col = 0; col < n; ++col) {
    touched.clear();
    for (const auto& [s, coef] : cert.coeffs) {
      std::size_t row = c.hom_index(c.compose(basis[col], s));
      if (!marked[row]) {
        marked[row] = 1;
        touched.push_back(row);
      }
      column[row] = cert.ring.add(column[row], coef);
    }
    bool ok = column[col].is_one();
    for (std::size_t row : touched) {
      if (row != col && !column[row].is_zero()) ok = false;
      column[row] = Scalar(0);
      marked[row] = 0;
    }
    if (!ok) return false;
  }
  return true;
}

std::vector<ArrowId> precomposition_generators(const Category& c, ObjectId d, ObjectId x) {
  auto homs = c.hom(d, x);
  auto ends = c.hom(d, d);
  std::vector<std::vector<std::size_t>> orbit(homs.size());
  for (std::size_t i = 0; i < homs.size(); ++i) {
    for (ArrowId e : ends) orbit[i].push_back(c.hom_index(c.compose(e, homs[i])));
    std::sort(orbit[i].begin(), orbit[i].end());
    orbit[i].erase(std::unique(orbit[i].begin(), orbit[i].end()), orbit[i].end());
  }
  std::vector<std::size_t> order(homs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return orbit[a].size() > orbit[b].size(); });
  std::vector<bool> covered(homs.size(), false);
  std::vector<ArrowId> gens;
  for (std::size_t i : order) {
    if (covered[i]) continue;
    gens.push_back(homs[i]);
    for (std::size_t j : orbit[i]) covered[j] = true;
  }
  std::sort(gens.begin(), gens.end());
  return gens;
}

std::optional<PreorderCertificate> leq(const Category& c, ObjectId d, ObjectId x, ObjectId y, const RingSpec& ring) {
  PreorderCertificate cert{d, x, y, ring, {}, std::nullopt};
  const std::size_t n = c.hom(d, x).size();
  if (n > 0) {
    std::vector<ArrowId> s_list = factor_set(c, x, y, false).arrows();
    if (s_list.empty()) return std::nullopt;
    const ArrowId one = c.identity(x);
    if (std::binary_search(s_list.begin(), s_list.end(), one)) {
      // x is a retract of y
      cert.coeffs.emplace_back(one, Scalar(1));
      if (!recheck(c, cert)) throw SoundnessError("retract certificate failed its recheck");
      return cert;
    }
    std::vector<ArrowId> gens = precomposition_generators(c, d, x);
    // One equation per (generator g, arrow d -> x): sum_s c_s [s o g = f] = [g = f].
    Matrix a(gens.size() * n, s_list.size(), ring);
    Vector b(gens.size() * n);
    for (std::size_t k = 0; k < gens.size(); ++k) {
      b[k * n + c.hom_index(gens[k])] = Scalar(1);
      for (std::size_t j = 0; j < s_list.size(); ++j) a(k * n + c.hom_index(c.compose(gens[k], s_list[j])), j) = Scalar(1);
    }
    auto sol = solve_linear(a, b);
    if (!sol) return std::nullopt;
    for (std::size_t j = 0; j < s_list.size(); ++j)
      if (!(*sol)[j].is_zero()) cert.coeffs.emplace_back(s_list[j], (*sol)[j]);
  }
  if (!recheck(c, cert)) {
    throw SoundnessError("preorder certificate failed its recheck at (d, x, y) = (" + c.object_label(d) + ", " +
                         c.object_label(x) + ", " + c.object_label(y) + ")");
  }
  return cert;
}

std::optional<PreorderCertificate> leq_op(const Category& c, ObjectId d, ObjectId x, ObjectId y,
                                          const RingSpec& ring) {
  return leq(opposite(c), d, x, y, ring);
}

bool leq_alt(const Category& c, ObjectId d, ObjectId x, ObjectId y, const RingSpec& ring) {
  auto ends = c.hom(x, x);
  const std::size_t m = ends.size();
  const std::size_t n = c.hom(d, x).size();
  if (n == 0) return true;  // the annihilator is everything
  std::vector<ArrowId> gens = precomposition_generators(c, d, x);
  Matrix action(gens.size() * n, m, ring);
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (std::size_t j = 0; j < m; ++j) action(k * n + c.hom_index(c.compose(gens[k], ends[j])), j) = Scalar(1);
  std::vector<Vector> span = kernel_basis(action);
  for (ArrowId s : factor_set(c, x, y, false).arrows()) span.push_back(unit_vector(m, c.hom_index(s)));
  return spans_everything(span, m, ring);
}

ProbabilisticVerdict leq_probabilistic(const Category& c, ObjectId d, ObjectId x, ObjectId y, const RingSpec& ring,
                                       std::uint64_t sample_bound, std::size_t trials, std::uint64_t seed) {
  if (!ring.is_field()) throw InputError("leq_probabilistic requires Q or F_p; use exact leq over Z");
  if (sample_bound == 0) throw InputError("sample bound must be positive");
  ProbabilisticVerdict out;
  out.seed = seed;
  auto basis = c.hom(d, x);
  const std::size_t n = basis.size();
  if (n == 0) {
    out.verdict = true;
    return out;
  }
  std::vector<ArrowId> s_list = factor_set(c, x, y, false).arrows();
  if (s_list.empty()) return out;

  std::uint64_t bound = sample_bound;
  if (ring.kind() == RingKind::PrimeField) bound = std::min<std::uint64_t>(bound, ring.modulus());
  out.false_negative_bound =
      std::min(1.0, std::pow(static_cast<double>(n) / static_cast<double>(bound), static_cast<double>(trials)));

  // Over Q the combination has small nonnegative integer entries, so full
  // rank modulo a large prime already proves invertibility.
  const RingSpec screen =
      ring.kind() == RingKind::PrimeField ? ring : RingSpec::prime_field(kScreenPrime);
  // rows of s o f for each (s, f), reused across trials
  std::vector<std::vector<std::size_t>> target(s_list.size(), std::vector<std::size_t>(n));
  for (std::size_t j = 0; j < s_list.size(); ++j)
    for (std::size_t col = 0; col < n; ++col) target[j][col] = c.hom_index(c.compose(basis[col], s_list[j]));

  Rng rng(seed);
  std::vector<std::int64_t> coef(s_list.size());
  for (std::size_t t = 0; t < trials; ++t) {
    out.trials_used = t + 1;
    for (auto& v : coef) v = static_cast<std::int64_t>(rng.below(bound));
    std::vector<std::int64_t> entries(n * n, 0);
    for (std::size_t j = 0; j < s_list.size(); ++j) {
      if (coef[j] == 0) continue;
      for (std::size_t col = 0; col < n; ++col) entries[target[j][col] * n + col] += coef[j];
    }
    Matrix m(n, n, screen);
    for (std::size_t i = 0; i < n * n; ++i)
      if (entries[i] != 0) m.set(i / n, i % n, Rational(entries[i]));
    bool invertible = rank(m) == n;
    if (!invertible && ring.kind() == RingKind::Rationals) {
      Matrix exact(n, n, ring);
      for (std::size_t i = 0; i < n * n; ++i)
        if (entries[i] != 0) exact(i / n, i % n) = Scalar(entries[i]);
      invertible = rank(exact) == n;
    }
    if (invertible) {
      out.verdict = true;
      return out;
    }
  }
  return out;
}

AnnihilatorBasis right_annihilator(const Category& c, ObjectId d, ObjectId x, ObjectId y, const RingSpec& ring) {
  AnnihilatorBasis out{x, y, Side::Right, d, ring, {}};
  auto arrows = c.hom(x, y);
  const std::size_t m = arrows.size();
  const std::size_t n = c.hom(d, y).size();
  std::vector<ArrowId> gens = c.hom(d, x).empty() ? std::vector<ArrowId>{} : precomposition_generators(c, d, x);
  if (gens.empty()) {
    for (std::size_t i = 0; i < m; ++i) out.vectors.push_back(unit_vector(m, i));
    return out;
  }
  Matrix action(gens.size() * n, m, ring);
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (std::size_t j = 0; j < m; ++j) action(k * n + c.hom_index(c.compose(gens[k], arrows[j])), j) = Scalar(1);
  out.vectors = kernel_basis(action);
  return out;
}

AnnihilatorBasis left_annihilator(const Category& c, ObjectId x, ObjectId y, ObjectId d, const RingSpec& ring) {
  // h o f in C is f o h in the opposite category, where Hom(y, x) lists the
  // same arrows as Hom_C(x, y).
  AnnihilatorBasis out = right_annihilator(opposite(c), d, y, x, ring);
  out.x = x;
  out.y = y;
  out.side = Side::Left;
  return out;
}

bool annihilator_holds(const Category& c, const AnnihilatorBasis& ann) {
  auto arrows = c.hom(ann.x, ann.y);
  const RingSpec& ring = ann.ring;
  for (const auto& v : ann.vectors) {
    if (v.size() != arrows.size()) return false;
    if (ann.side == Side::Right) {
      for (ArrowId h : c.hom(ann.anchor, ann.x)) {
        Vector acc(c.hom(ann.anchor, ann.y).size());
        for (std::size_t j = 0; j < arrows.size(); ++j) {
          if (v[j].is_zero()) continue;
          auto& slot = acc[c.hom_index(c.compose(h, arrows[j]))];
          slot = ring.add(slot, v[j]);
        }
        for (const auto& e : acc)
          if (!e.is_zero()) return false;
      }
    } else {
      for (ArrowId h : c.hom(ann.y, ann.anchor)) {
        Vector acc(c.hom(ann.x, ann.anchor).size());
        for (std::size_t j = 0; j < arrows.size(); ++j) {
          if (v[j].is_zero()) continue;
          auto& slot = acc[c.hom_index(c.compose(arrows[j], h))];
          slot = ring.add(slot, v[j]);
        }
        for (const auto& e : acc)
          if (!e.is_zero()) return false;
      }
    }
  }
  return true;
}

}  // namespace catdim
