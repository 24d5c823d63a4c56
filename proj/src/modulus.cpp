#include "catdim/modulus.hpp"

#include <algorithm>
#include <string>

#include "catdim/catalog.hpp"
#include "catdim/errors.hpp"
#include "catdim/parallel.hpp"

namespace catdim {

const char* to_string(CellStatus s) {
  switch (s) {
    case CellStatus::Verified:
      return "verified";
    case CellStatus::WindowTooSmall:
      return "window_too_small";
    case CellStatus::Failed:
    default:
      return "failed";
  }
}

bool ModulusReport::passed() const { return failures() == 0; }

std::size_t ModulusReport::failures() const {
  std::size_t n = 0;
  for (const auto& cell : cells)
    if (cell.status != CellStatus::Verified) ++n;
  return n;
}

namespace {

ModulusCell verify_cell(const Category& c, const ModulusCandidate& mu, const RingSpec& ring, ObjectId d, ObjectId x,
                        const VerifyOptions& options) {
  ModulusCell cell;
  cell.d = d;
  cell.x = x;
  std::vector<ObjectId> order;
  if (auto it = mu.mu.find(d); it != mu.mu.end()) order = it->second;
  if (auto it = mu.outside.find(d); it != mu.outside.end()) cell.outside = it->second;

  if (options.fast && order.size() > 1) {
    // Probable successes first; the exact pass below still decides.
    const RingSpec screen = ring.is_field() ? ring : RingSpec::rationals();
    std::vector<ObjectId> likely, rest;
    for (ObjectId y : order) {
      auto v = leq_probabilistic(c, d, x, y, screen, options.sample_bound, options.trials,
                                 options.seed ^ (static_cast<std::uint64_t>(d) << 32) ^ (static_cast<std::uint64_t>(x) << 16) ^ y);
      (v.verdict ? likely : rest).push_back(y);
    }
    order = likely;
    order.insert(order.end(), rest.begin(), rest.end());
  }

  for (ObjectId y : order) {
    auto cert = leq(c, d, x, y, ring);
    if (cert) {
      cell.status = CellStatus::Verified;
      cell.y = y;
      cell.certificate = std::move(cert);
      return cell;
    }
    cell.rejected.push_back(y);
  }
  cell.status = cell.outside.empty() ? CellStatus::Failed : CellStatus::WindowTooSmall;
  return cell;
}

}  // namespace

ModulusReport verify_modulus(const Category& c, const ModulusCandidate& mu, const RingSpec& ring,
                             const std::vector<ObjectId>& window, const VerifyOptions& options) {
  ModulusReport report;
  report.ring = ring;
  report.mu = mu;
  report.window = window;
  if (report.window.empty())
    for (ObjectId x = 0; x < c.num_objects(); ++x) report.window.push_back(x);
  for (ObjectId x : report.window)
    if (x >= c.num_objects()) throw InputError("window object out of range");

  std::vector<std::pair<ObjectId, ObjectId>> todo;
  for (ObjectId d : report.window) {
    if (!mu.defined_at(d)) {
      report.unverified.push_back(d);
      continue;
    }
    for (ObjectId x : report.window) todo.emplace_back(d, x);
  }
  report.cells.resize(todo.size());
  parallel_for(todo.size(), options.threads, [&](std::size_t i) {
    report.cells[i] = verify_cell(c, mu, ring, todo[i].first, todo[i].second, options);
  });
  return report;
}

const ContextEntry& EffectiveContext::at(ObjectId d, ObjectId x) const {
  auto it = entries.find({d, x});
  if (it == entries.end())
    throw InputError("effective context has no entry for (" + std::to_string(d) + ", " + std::to_string(x) + ")");
  return it->second;
}

EffectiveContext build_context(const Category& c, const ModulusReport& report) {
  if (!report.passed()) throw InputError("build_context needs a passing modulus report");
  EffectiveContext ctx;
  ctx.ring = report.ring;
  ctx.mu = report.mu;
  for (const auto& cell : report.cells) {
    if (!cell.certificate || !cell.y) throw InputError("modulus report cell lacks a certificate");
    const PreorderCertificate& cert = *cell.certificate;
    if (!recheck(c, cert)) throw SoundnessError("certificate in modulus report fails its recheck");
    ContextEntry entry;
    entry.d = cell.d;
    entry.x = cell.x;
    FactorSet fs = factor_set(c, cell.x, *cell.y, false);
    for (const auto& [s, rho] : cert.coeffs) {
      if (rho.is_zero()) continue;
      const FactorSetMember* member = fs.find(s);
      if (!member) throw SoundnessError("certificate uses an endomorphism that does not factor");
      const Factorization& w = member->witnesses.front();
      entry.m.push_back(*cell.y);
      entry.alpha.push_back({{w.p, rho}});
      entry.beta.push_back({{w.q, Scalar(1)}});
    }
    if (!check_entry(c, entry, ctx.ring, &ctx.mu)) {
      throw SoundnessError("built context entry violates the Kronecker identity at (" + c.object_label(cell.d) + ", " +
                           c.object_label(cell.x) + ")");
    }
    ctx.entries.emplace(std::make_pair(cell.d, cell.x), std::move(entry));
  }
  return ctx;
}

bool check_entry(const Category& c, const ContextEntry& entry, const RingSpec& ring, const ModulusCandidate* mu) {
  const auto n_obj = c.num_objects();
  if (entry.d >= n_obj || entry.x >= n_obj) return false;
  const std::size_t kappa = entry.m.size();
  if (entry.alpha.size() != kappa || entry.beta.size() != kappa) return false;
  for (std::size_t i = 0; i < kappa; ++i) {
    const ObjectId mi = entry.m[i];
    if (mi >= n_obj) return false;
    if (mu) {
      auto it = mu->mu.find(entry.d);
      if (it != mu->mu.end() && std::find(it->second.begin(), it->second.end(), mi) == it->second.end()) return false;
    }
    for (const auto& [p, a] : entry.alpha[i]) {
      if (p >= c.num_arrows() || c.arrow(p).src != entry.x || c.arrow(p).tgt != mi || !ring.contains(a)) return false;
    }
    for (const auto& [q, b] : entry.beta[i]) {
      if (q >= c.num_arrows() || c.arrow(q).src != mi || c.arrow(q).tgt != entry.x || !ring.contains(b)) return false;
    }
  }
  auto homs = c.hom(entry.d, entry.x);
  Vector acc(homs.size());
  for (std::size_t col = 0; col < homs.size(); ++col) {
    std::fill(acc.begin(), acc.end(), Scalar(0));
    for (std::size_t i = 0; i < kappa; ++i)
      for (const auto& [p, a] : entry.alpha[i]) {
        if (a.is_zero()) continue;
        const ArrowId pf = c.compose(homs[col], p);
        for (const auto& [q, b] : entry.beta[i]) {
          if (b.is_zero()) continue;
          auto& slot = acc[c.hom_index(c.compose(pf, q))];
          slot = ring.add(slot, ring.mul(a, b));
        }
      }
    for (std::size_t row = 0; row < homs.size(); ++row) {
      if (row == col ? !acc[row].is_one() : !acc[row].is_zero()) return false;
    }
  }
  return true;
}

bool check_context(const Category& c, const EffectiveContext& ctx, ObjectId d, ObjectId x) {
  return check_entry(c, ctx.at(d, x), ctx.ring, &ctx.mu);
}

std::vector<std::pair<ObjectId, ObjectId>> check_all(const Category& c, const EffectiveContext& ctx,
                                                     std::size_t threads) {
  std::vector<const ContextEntry*> list;
  for (const auto& [key, entry] : ctx.entries) list.push_back(&entry);
  std::vector<char> ok(list.size(), 0);
  parallel_for(list.size(), threads, [&](std::size_t i) { ok[i] = check_entry(c, *list[i], ctx.ring, &ctx.mu); });
  std::vector<std::pair<ObjectId, ObjectId>> bad;
  for (std::size_t i = 0; i < list.size(); ++i)
    if (!ok[i]) bad.emplace_back(list[i]->d, list[i]->x);
  return bad;
}

Rational binomial(std::int64_t a, std::int64_t k) {
  if (k < 0) return Rational(0);
  if (a == -1) return Rational(k % 2 == 0 ? 1 : -1);
  if (a < -1) throw InputError("binomial: unsupported negative upper index");
  if (k > a) return Rational(0);
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(k));
  return Rational(r);
}

EffectiveContext pointed_set_context(const Category& c, const RingSpec& ring, int max_d) {
  if (c.family() != catalog::kFinSetStar && c.family() != catalog::kFiSharp)
    throw InputError("the pointed-set context needs a finset_star or fi_sharp window");
  EffectiveContext ctx;
  ctx.ring = ring;
  const auto n_obj = static_cast<ObjectId>(c.num_objects());
  std::vector<int> size(n_obj);
  std::map<int, ObjectId> by_size;
  for (ObjectId o = 0; o < n_obj; ++o) {
    size[o] = catalog::pointed_size(c.object_label(o));
    by_size[size[o]] = o;
  }
  for (ObjectId d = 0; d < n_obj; ++d) {
    if (max_d >= 0 && size[d] > max_d) continue;
    auto& mu_d = ctx.mu.mu[d];
    for (int p = 0; p <= size[d]; ++p) {
      auto it = by_size.find(p);
      if (it == by_size.end()) throw InputError("window lacks " + std::to_string(p) + "_*");
      mu_d.push_back(it->second);
    }
    for (ObjectId x = 0; x < n_obj; ++x) {
      const int n = size[x];
      const int dd = size[d];
      ContextEntry entry;
      entry.d = d;
      entry.x = x;
      // pointed subsets by size, then lexicographically
      for (int p = 0; p <= std::min(dd, n); ++p) {
        std::vector<int> subset(static_cast<std::size_t>(p));
        for (int t = 0; t < p; ++t) subset[static_cast<std::size_t>(t)] = t + 1;
        for (;;) {
          std::vector<int> collapse(static_cast<std::size_t>(n), 0);
          for (int t = 0; t < p; ++t) collapse[static_cast<std::size_t>(subset[static_cast<std::size_t>(t)] - 1)] = t + 1;
          const ObjectId mp = by_size.at(p);
          auto surj = c.find_arrow(x, mp, catalog::function_label(collapse));
          auto inj = c.find_arrow(mp, x, catalog::function_label(subset));
          if (!surj || !inj) throw InputError("window lacks a collapse or inclusion map");
          entry.m.push_back(mp);
          entry.alpha.push_back({{*surj, ring.from_rational(Rational((dd - p) % 2 == 0 ? 1 : -1))}});
          entry.beta.push_back({{*inj, ring.from_rational(binomial(n - p - 1, dd - p))}});
          // next subset
          int t = p - 1;
          while (t >= 0 && subset[static_cast<std::size_t>(t)] == n - (p - 1 - t)) --t;
          if (t < 0) break;
          ++subset[static_cast<std::size_t>(t)];
          for (int u = t + 1; u < p; ++u) subset[static_cast<std::size_t>(u)] = subset[static_cast<std::size_t>(u - 1)] + 1;
        }
      }
      ctx.entries.emplace(std::make_pair(d, x), std::move(entry));
    }
  }
  return ctx;
}

}  // namespace catdim
