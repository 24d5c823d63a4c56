// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "catdim/catalog.hpp"
#include "catdim/errors.hpp"
#include "catdim/modulus.hpp"
#include "catdim/preorder.hpp"
#include "catdim/reconstruction.hpp"
#include "catdim/representation.hpp"
#include "oracles.hpp"

using namespace catdim;

namespace {

const RingSpec kQ = RingSpec::rationals();
const RingSpec kZ = RingSpec::integers();
const RingSpec kF5 = RingSpec::prime_field(5);

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  std::string first_failure;

  void check(bool cond, const std::string& what) {
    if (!cond && ok) first_failure = what;
    ok = ok && cond;
  }
};

using QMat = std::vector<std::vector<mpq_class>>;

QMat to_q(const Matrix& m) {
  QMat out(m.rows(), std::vector<mpq_class>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m(r, c).to_mpq();
  return out;
}

// Product of a (n x inner) and b (inner x m), reduced mod p when p > 0.
QMat mul(const QMat& a, const QMat& b, std::size_t inner, std::size_t cols, std::uint32_t p) {
  QMat out(a.size(), std::vector<mpq_class>(cols));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      mpq_class s = 0;
      for (std::size_t k = 0; k < inner; ++k) s += a[i][k] * b[k][j];
      if (p) {
        mpz_class z = s.get_num() % p;
        if (z < 0) z += p;
        s = z;
      }
      out[i][j] = s;
    }
  return out;
}

QMat mul(const Matrix& a, const Matrix& b) { return mul(to_q(a), to_q(b), a.cols(), b.cols(), a.ring().modulus()); }

bool is_identity(const QMat& m, std::size_t n) {
  if (m.size() != n) return false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (m[i][j] != (i == j ? 1 : 0)) return false;
  return true;
}

bool certificate_ok(const Category& c, const PreorderCertificate& cert) {
  std::vector<std::pair<ArrowId, mpq_class>> coeffs;
  for (const auto& [s, v] : cert.coeffs) coeffs.emplace_back(s, v.to_mpq());
  std::int64_t p = cert.ring.kind() == RingKind::PrimeField ? cert.ring.modulus() : 0;
  if (cert.ring.kind() == RingKind::Integers)
    for (const auto& [s, v] : coeffs)
      if (v.get_den() != 1) return false;
  return oracle::certificate_holds(c, cert.d, cert.x, cert.y, coeffs, p);
}

// For every f: d -> x, the combination sum_i sum_{p,q} alpha_i(p) beta_i(q) [q p f]
// must be exactly the basis vector f.
bool kronecker_oracle(const Category& c, const ContextEntry& e) {
  for (ArrowId f : oracle::hom(c, e.d, e.x)) {
    std::map<ArrowId, mpq_class> total;
    for (std::size_t i = 0; i < e.kappa(); ++i)
      for (const auto& [p, a] : e.alpha[i])
        for (const auto& [q, b] : e.beta[i]) total[c.compose(c.compose(f, p), q)] += a.to_mpq() * b.to_mpq();
    for (const auto& [g, v] : total)
      if (v != (g == f ? 1 : 0)) return false;
    if (total.find(f) == total.end()) return false;
  }
  return true;
}

int image(const Category& c, ArrowId f, int i) { return catalog::label_values(c.arrow(f).label).at(i - 1); }

// ---------------------------------------------------------------------------

void delta_witness_criterion(Outcome& out) {
  Category c = catalog::gen_delta(6);
  for (int n = 1; n <= 3; ++n) {
    catalog::DeltaWitness w = catalog::delta_witness(c, n);
    const std::string tag = "n=" + std::to_string(n) + ": ";
    ObjectId big = c.object(std::to_string(n + 2)), small = c.object(std::to_string(n + 1));
    ObjectId source = c.object(std::to_string(n));
    out.check(w.big == big && w.small == small && w.source == source, tag + "objects");
    // H and rho straight from the defining inequalities
    std::map<ArrowId, int> expected;
    for (ArrowId h : oracle::hom(c, big, big)) {
      bool in = true;
      int sign = 1;
      for (int i = 1; i <= n + 2; ++i) {
        int v = image(c, h, i);
        if (v < i || v > i + 1) in = false;
        if (v - i == 1) sign = -sign;
      }
      if (in) expected[h] = sign;
    }
    std::map<ArrowId, int> got;
    for (std::size_t k = 0; k < w.h.size(); ++k) got[w.h[k]] = w.rho[k];
    out.check(got == expected, tag + "H and rho");
    out.check(w.involution_ok, tag + "involutions");
    // (a) sum rho(h) M_h = 0 over Z, entry by entry
    bool vanishes = true;
    for (ArrowId f : oracle::hom(c, source, big)) {
      std::map<ArrowId, long> col;
      for (const auto& [h, r] : expected) col[c.compose(f, h)] += r;
      for (const auto& [g, v] : col) vanishes = vanishes && v == 0;
    }
    out.check(vanishes && w.signed_sum_vanishes, tag + "signed sum");
    // (b) every h != 1 factors through n+1
    auto through = oracle::factor_set(c, big, small);
    bool factors = true;
    for (const auto& [h, r] : expected)
      if (h != c.identity(big)) factors = factors && std::binary_search(through.begin(), through.end(), h);
    out.check(factors && w.factors_through_smaller, tag + "factorization");
    // (c) derived certificate
    const PreorderCertificate& cert = w.certificate;
    out.check(cert.d == source && cert.x == big && cert.y == small && cert.ring == kZ, tag + "certificate shape");
    out.check(recheck(c, cert) && certificate_ok(c, cert), tag + "certificate");
    // (d) independent decision
    auto direct = leq(c, source, big, small, kZ);
    out.check(direct.has_value() && certificate_ok(c, *direct) && oracle::leq_q(c, source, big, small),
              tag + "independent leq");
    out.detail << (n > 1 ? ", " : "") << "|H|=" << expected.size();
  }
}

void modulus_criterion(Outcome& out) {
  Category delta = catalog::gen_delta(5);
  ModulusCandidate mu;
  for (int d = 1; d <= 4; ++d) mu.mu[delta.object(std::to_string(d))] = {delta.object(std::to_string(d + 1))};
  ModulusReport r = verify_modulus(delta, mu, kZ);
  out.check(r.passed() && r.cells.size() == 20, "delta modulus");
  for (const auto& cell : r.cells)
    out.check(cell.certificate && certificate_ok(delta, *cell.certificate), "delta certificate");

  Category fs = catalog::gen_finset_star(4);
  ModulusCandidate prefix;
  for (ObjectId d = 0; d < 5; ++d)
    for (ObjectId y = 0; y <= d; ++y) prefix.mu[d].push_back(y);
  ModulusReport rf = verify_modulus(fs, prefix, kZ);
  out.check(rf.passed() && rf.cells.size() == 25, "finset modulus");
  for (const auto& cell : rf.cells)
    out.check(cell.certificate && certificate_ok(fs, *cell.certificate), "finset certificate");
  out.detail << r.cells.size() << " + " << rf.cells.size() << " cells verified over Z";
}

void pointed_context_criterion(Outcome& out) {
  std::size_t entries = 0;
  for (Category c : {catalog::gen_finset_star(5), catalog::gen_fi_sharp(5)}) {
    EffectiveContext ctx = pointed_set_context(c, kZ, 3);
    out.check(ctx.entries.size() == 4 * 6, "entry count");
    for (const auto& [key, e] : ctx.entries) {
      int d = catalog::pointed_size(c.object_label(e.d)), n = catalog::pointed_size(c.object_label(e.x));
      std::uint64_t kappa = 0;
      for (int i = 0; i <= d; ++i) kappa += oracle::choose(n, i);
      out.check(e.kappa() == kappa, "kappa");
      for (std::size_t i = 0; i < e.kappa(); ++i) {
        int p = catalog::pointed_size(c.object_label(e.m[i]));
        bool shape = p <= d && e.alpha[i].size() == 1 && e.beta[i].size() == 1;
        out.check(shape, "term shape");
        if (!shape) continue;
        out.check(e.alpha[i][0].second == Rational((d - p) % 2 ? -1 : 1), "alpha value");
        // C(n-p-1, d-p), with C(-1, k) = (-1)^k when p = n
        mpz_class b = 0;
        if (n - p - 1 >= 0) {
          if (d - p <= n - p - 1) b = static_cast<unsigned long>(oracle::choose(n - p - 1, d - p));
        } else {
          b = (d - p) % 2 ? -1 : 1;
        }
        out.check(e.beta[i][0].second.to_mpq() == b, "beta value");
        out.check(c.compose(e.beta[i][0].first, e.alpha[i][0].first) == c.identity(e.m[i]), "beta then alpha");
      }
      out.check(kronecker_oracle(c, e), "identity oracle at " + c.object_label(e.d) + "," + c.object_label(e.x));
      out.check(check_context(c, ctx, key.first, key.second), "check_context");
      ++entries;
    }
    out.check(check_all(c, ctx).empty(), "check_all");
  }
  out.detail << entries << " entries (FinSet_* and FI#, d <= 3, n <= 5)";
}

void roundtrip_criterion(Outcome& out) {
  Category c = catalog::gen_finset_star(4);
  std::size_t instances = 0, total_dim = 0, sampled_arrows = 0, skipped = 0;
  for (RingSpec ring : {kQ, kF5}) {
    EffectiveContext ctx = pointed_set_context(c, ring, 2);
    std::size_t done = 0;
    for (std::uint64_t seed = 0; done < 50 && seed < 200; ++seed) {
      std::vector<ObjectId> gens;
      const std::uint64_t mask = 1 + seed % 7;
      for (ObjectId g = 0; g < 3; ++g)
        if (mask & (1u << g)) gens.push_back(g);
      Rng rng(seed);
      RandomRepOptions options;
      options.relations = 1;
      options.max_nonzero = 2;
      options.max_dim = 12;
      options.min_total_dim = 1;
      std::optional<Representation> drawn;
      try {
        drawn = random_representation(c, gens, ring, rng, options);
      } catch (const InputError&) {
        ++skipped;  // no draw met the dimension bounds
        continue;
      }
      const Representation& v = *drawn;
      const std::string tag = ring.str() + " seed " + std::to_string(seed) + ": ";
      RoundtripReport report = verify_roundtrip(v, gens, ctx);
      out.check(report.ok(), tag + "roundtrip" + (report.failures.empty() ? "" : " " + report.failures[0]));
      // independent products on the side
      CompressionData data = build_AB(v, gens, ctx);
      for (ObjectId z = 0; z < c.num_objects(); ++z) {
        out.check(is_identity(mul(data.b[z], data.a[z]), v.dim(z)), tag + "B A = 1");
        const Matrix& x = report.compressed.x_identity[z];
        out.check(mul(x, x) == to_q(x), tag + "X(1) idempotent");
        out.check(report.compressed.y.dim(z) == v.dim(z), tag + "dims");
      }
      RepView view(v);
      CompressionInput in{view, c, gens, ctx};
      for (ArrowId f = seed % 97; f < c.num_arrows(); f += 97) {
        const Arrow& a = c.arrow(f);
        QMat avb = mul(to_q(data.a[a.tgt]), mul(v.mat(f), data.b[a.src]), v.dim(a.tgt), data.b[a.src].cols(),
                       ring.modulus());
        out.check(to_q(assemble_X(in, f)) == avb, tag + "X(f) = A V(f) B");
        const Matrix& yf = report.compressed.y.mat(f);
        out.check(mul(report.iso_result.phi[a.tgt], v.mat(f)) == mul(yf, report.iso_result.phi[a.src]),
                  tag + "naturality");
        ++sampled_arrows;
      }
      for (ObjectId z = 0; z < c.num_objects(); ++z) total_dim += v.dim(z);
      ++done;
    }
    out.check(done >= 50, ring.str() + ": fewer than 50 instances");
    instances += done;
  }
  out.detail << instances << " instances, total dim " << total_dim << ", " << sampled_arrows
             << " arrows re-multiplied, " << skipped
             << " seeds skipped";
}

void preorder_laws_criterion(Outcome& out) {
  std::size_t triples = 0, chains = 0, retracts = 0, annihilators = 0;
  Rng rng(2024);
  std::vector<std::pair<std::string, Category>> windows{{"delta", catalog::gen_delta(5)},
                                                        {"finset", catalog::gen_finset_star(4)},
                                                        {"fi", catalog::gen_fi_sharp(4)},
                                                        {"vect", catalog::gen_vect_fq(2, 2)}};
  for (const auto& [name, c] : windows) {
    const std::size_t n = c.num_objects();
    std::vector<std::vector<std::vector<bool>>> t(n, std::vector<std::vector<bool>>(n, std::vector<bool>(n)));
    for (ObjectId d = 0; d < n; ++d)
      for (ObjectId x = 0; x < n; ++x)
        for (ObjectId y = 0; y < n; ++y) {
          auto cert = leq(c, d, x, y, kQ);
          t[d][x][y] = cert.has_value();
          if (cert) out.check(certificate_ok(c, *cert), name + " certificate");
          out.check(leq_alt(c, d, x, y, kQ) == t[d][x][y], name + " leq_alt");
          ++triples;
        }
    for (ObjectId d = 0; d < n; ++d)
      for (ObjectId x = 0; x < n; ++x) {
        out.check(t[d][x][x], name + " reflexivity");
        for (ObjectId y = 0; y < n; ++y)
          for (ObjectId z = 0; z < n; ++z)
            if (t[d][x][y] && t[d][y][z]) {
              out.check(t[d][x][z], name + " transitivity");
              ++chains;
            }
      }
    for (ObjectId x = 0; x < n; ++x)
      for (ObjectId y = 0; y < n; ++y) {
        bool retract = false;
        for (ArrowId p : oracle::hom(c, x, y))
          for (ArrowId q : oracle::hom(c, y, x))
            if (!retract && c.compose(p, q) == c.identity(x)) retract = true;
        if (!retract) continue;
        ++retracts;
        for (ObjectId d = 0; d < n; ++d) out.check(t[d][x][y], name + " retract law");
      }
    // c <=^x d implies r_d((x,y)) inside r_c((x,y)); membership checked from the definition
    std::size_t sampled = 0;
    for (int attempt = 0; attempt < 400 && sampled < 40; ++attempt) {
      ObjectId cc = rng.below(n), d = rng.below(n), x = rng.below(n), y = rng.below(n);
      if (oracle::hom(c, x, y).size() * oracle::hom(c, d, x).size() > 4096) continue;
      if (!leq_op(c, x, cc, d, kQ)) continue;
      AnnihilatorBasis rd = right_annihilator(c, d, x, y, kQ);
      out.check(annihilator_holds(c, rd), name + " annihilator");
      auto fs = oracle::hom(c, x, y);
      for (const Vector& v : rd.vectors)
        for (ArrowId h : oracle::hom(c, cc, x)) {
          std::map<ArrowId, mpq_class> image;
          for (std::size_t k = 0; k < fs.size(); ++k) image[c.compose(h, fs[k])] += v[k].to_mpq();
          for (const auto& [g, coeff] : image) out.check(coeff == 0, name + " annihilator containment");
        }
      ++sampled;
    }
    annihilators += sampled;
  }
  out.detail << triples << " triples, " << chains << " chains, " << retracts << " retract pairs, " << annihilators
             << " annihilator samples";
}

void probabilistic_criterion(Outcome& out) {
  struct Setting {
    std::uint64_t bound;
    std::size_t trials;
  };
  const std::vector<Setting> settings{{1000, 3}, {20, 1}, {10, 2}, {4, 2}, {3, 3}, {2, 1}};
  std::size_t queries = 0, true_queries = 0, false_negatives = 0, false_positives = 0;
  double expected = 0;
  std::uint64_t seed = 0;
  for (Category c : {catalog::gen_delta(4), catalog::gen_finset_star(3), catalog::gen_fi_sharp(3),
                     catalog::gen_vect_fq(2, 2)}) {
    const std::size_t n = c.num_objects();
    for (ObjectId d = 0; d < n; ++d)
      for (ObjectId x = 0; x < n; ++x)
        for (ObjectId y = 0; y < n; ++y) {
          const bool exact = leq(c, d, x, y, kQ).has_value();
          const double hom = static_cast<double>(oracle::hom(c, d, x).size());
          // nothing is sampled when Hom(d, x) or S(x, y) is empty
          const bool sampled = hom > 0 && !oracle::factor_set(c, x, y).empty();
          for (const Setting& s : settings) {
            ProbabilisticVerdict v = leq_probabilistic(c, d, x, y, kQ, s.bound, s.trials, ++seed);
            ++queries;
            double bound = sampled ? std::min(1.0, std::pow(hom / static_cast<double>(s.bound),
                                                            static_cast<double>(s.trials)))
                                   : 0.0;
            out.check(std::abs(v.false_negative_bound - bound) <= 1e-12, "reported bound");
            if (v.verdict && !exact) ++false_positives;
            if (exact) {
              ++true_queries;
              expected += bound;
              if (!v.verdict) ++false_negatives;
            }
          }
        }
  }
  out.check(queries >= 1000, "fewer than 1000 queries");
  out.check(false_positives == 0, "probabilistic true on a false instance");
  out.check(static_cast<double>(false_negatives) <= 3 * expected, "false negative rate above 3x bound");
  out.detail << queries << " queries, " << true_queries << " true, " << false_negatives
             << " false negatives (bound total " << expected << "), " << false_positives << " false positives";
}

void vect_criterion(Outcome& out) {
  Category c = catalog::gen_vect_fq(2, 2);
  ObjectId one = c.object("1"), two = c.object("2");
  auto cert = leq(c, one, two, one, kQ);
  out.check(cert.has_value(), "leq(1, 2, 1)");
  if (cert) out.check(recheck(c, *cert) && certificate_ok(c, *cert), "certificate");
  out.check(oracle::leq_q(c, one, two, one), "rank oracle");
  if (cert) out.detail << cert->coeffs.size() << " terms in the certificate";
}

// Span mod p kept in reduced echelon form.
struct SpanModP {
  std::int64_t p;
  std::vector<std::pair<std::size_t, std::vector<std::int64_t>>> rows;  // (pivot, row)

  static std::int64_t inv(std::int64_t a, std::int64_t p) {
    std::int64_t r = 1, e = p - 2;
    a %= p;
    while (e) {
      if (e & 1) r = r * a % p;
      a = a * a % p;
      e >>= 1;
    }
    return r;
  }

  bool add(std::vector<std::int64_t> v) {
    for (auto& x : v) x = ((x % p) + p) % p;
    for (const auto& [piv, row] : rows)
      if (v[piv]) {
        std::int64_t f = v[piv];
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = ((v[k] - f * row[k]) % p + p) % p;
      }
    std::size_t piv = 0;
    while (piv < v.size() && v[piv] == 0) ++piv;
    if (piv == v.size()) return false;
    std::int64_t s = inv(v[piv], p);
    for (auto& x : v) x = x * s % p;
    rows.emplace_back(piv, std::move(v));
    return true;
  }
};

// Dimensions of the subrepresentation of v generated by all of v at `degrees`.
std::vector<std::size_t> generated_dims_mod_p(const Representation& v, const std::vector<ObjectId>& degrees,
                                              std::int64_t p) {
  const Category& c = v.category();
  std::vector<SpanModP> span(c.num_objects(), SpanModP{p, {}});
  std::vector<std::vector<std::vector<std::int64_t>>> members(c.num_objects());
  auto push = [&](ObjectId z, std::vector<std::int64_t> w) {
    if (span[z].add(w)) {
      members[z].push_back(std::move(w));
      return true;
    }
    return false;
  };
  for (ObjectId d : degrees)
    for (std::size_t i = 0; i < v.dim(d); ++i) {
      std::vector<std::int64_t> e(v.dim(d), 0);
      e[i] = 1;
      push(d, e);
    }
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& a : c.arrows()) {
      if (span[a.tgt].rows.size() == v.dim(a.tgt)) continue;
      const Matrix& m = v.mat(a.id);
      for (std::size_t k = 0; k < members[a.src].size(); ++k) {
        const auto& w = members[a.src][k];
        std::vector<std::int64_t> img(v.dim(a.tgt), 0);
        for (std::size_t i = 0; i < img.size(); ++i)
          for (std::size_t j = 0; j < w.size(); ++j) img[i] += m(i, j).to_mpq().get_num().get_si() * w[j];
        if (push(a.tgt, img)) changed = true;
      }
    }
  }
  std::vector<std::size_t> dims;
  for (const auto& s : span) dims.push_back(s.rows.size());
  return dims;
}

void subrep_generation_criterion(Outcome& out) {
  Category c = catalog::gen_finset_star(4);
  EffectiveContext ctx = pointed_set_context(c, kF5, 2);
  std::vector<ObjectId> mu2 = ctx.mu.mu.at(c.object("2_*"));
  out.check(mu2 == std::vector<ObjectId>{0, 1, 2}, "mu(2_*)");
  Representation p = basic_projective(c, c.object("2_*"), kF5);
  std::size_t total = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    std::vector<std::pair<ObjectId, Vector>> seeds;
    ObjectId z = static_cast<ObjectId>(1 + rng.below(4));
    Vector vec(p.dim(z), Rational(0));
    for (int k = 0; k < 2; ++k) vec[rng.below(vec.size())] = Rational(static_cast<std::int64_t>(1 + rng.below(4)));
    seeds.emplace_back(z, vec);
    Subrepresentation w = generated_subrepresentation(p, seeds);
    const std::string tag = "seed " + std::to_string(seed) + ": ";
    out.check(is_generated(w.rep, mu2), tag + "is_generated");
    out.check(generated_dims_mod_p(w.rep, mu2, 5) == w.rep.dims(), tag + "closure oracle");
    RepView view(w.rep);
    CompressionData data = build_AB_blocks({view, c, mu2, ctx});
    for (ObjectId x = 0; x < c.num_objects(); ++x)
      out.check(is_identity(mul(data.b[x], data.a[x]), w.rep.dim(x)), tag + "B' A' = 1");
    for (ObjectId x = 0; x < c.num_objects(); ++x) total += w.rep.dim(x);
  }
  out.detail << "20 subrepresentations, total dim " << total;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"delta witness for n = 1, 2, 3 in Delta(6) over Z", delta_witness_criterion},
      {"moduli on Delta(5) and FinSet_*(4) over Z", modulus_criterion},
      {"closed-form pointed-set context, d <= 3, n <= 5, also on FI#", pointed_context_criterion},
      {"compression roundtrip, 50 + 50 random reps on FinSet_*(4)", roundtrip_criterion},
      {"preorder laws on Delta(5), FinSet_*(4), FI#(4), Vect_F2(2)", preorder_laws_criterion},
      {"probabilistic screen soundness", probabilistic_criterion},
      {"Vect_F2: 2 <=_1 1 over Q", vect_criterion},
      {"subrepresentations of P^{2_*} generated in mu(2_*) over F_5", subrep_generation_criterion},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(out);
    } catch (const std::exception& e) {
      out.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %zu %s [%s] (%.1fs)%s%s\n", out.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                out.detail.str().c_str(), secs, out.ok ? "" : " first failure: ", out.first_failure.c_str());
    std::fflush(stdout);
    if (!out.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
