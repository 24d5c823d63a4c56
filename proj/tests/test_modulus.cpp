#include <gtest/gtest.h>

#include "catdim/catalog.hpp"
#include "catdim/errors.hpp"
#include "catdim/modulus.hpp"
#include "oracles.hpp"

using namespace catdim;

namespace {

const RingSpec kZ = RingSpec::integers();
const RingSpec kQ = RingSpec::rationals();

// The Kronecker identity evaluated directly from its definition.
bool ecc_oracle(const Category& c, const ContextEntry& e) {
  auto hs = oracle::hom(c, e.d, e.x);
  for (ArrowId f : hs)
    for (ArrowId g : hs) {
      mpq_class total = 0;
      for (std::size_t i = 0; i < e.kappa(); ++i)
        for (const auto& [p, a] : e.alpha[i])
          for (const auto& [q, b] : e.beta[i])
            if (c.compose(c.compose(f, p), q) == g) total += a.to_mpq() * b.to_mpq();
      if (total != (f == g ? 1 : 0)) return false;
    }
  return true;
}

ModulusCandidate successor_modulus(const Category& c, int max_d) {
  ModulusCandidate mu;
  for (int d = 1; d <= max_d; ++d) {
    auto y = c.find_object(std::to_string(d + 1));
    if (y) mu.mu[c.object(std::to_string(d))] = {*y};
    else mu.outside[c.object(std::to_string(d))] = {std::to_string(d + 1)};
  }
  return mu;
}

ModulusCandidate prefix_modulus(const Category& c) {
  ModulusCandidate mu;
  for (ObjectId d = 0; d < c.num_objects(); ++d)
    for (ObjectId y = 0; y <= d; ++y) mu.mu[d].push_back(y);
  return mu;
}

}  // namespace

TEST(Modulus, GeneralizedBinomial) {
  for (std::int64_t a = 0; a < 12; ++a)
    for (std::int64_t k = -2; k < 14; ++k)
      EXPECT_EQ(binomial(a, k), Rational(k < 0 ? 0 : static_cast<std::int64_t>(oracle::choose(a, k))));
  for (std::int64_t k = 0; k < 6; ++k) EXPECT_EQ(binomial(-1, k), Rational(k % 2 ? -1 : 1));
  EXPECT_EQ(binomial(-1, -1), Rational(0));
}

TEST(Modulus, DeltaSuccessorModulusPassesOverZ) {
  Category c = catalog::gen_delta(5);
  ModulusReport r = verify_modulus(c, successor_modulus(c, 4), kZ);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.cells.size(), 20u);
  EXPECT_EQ(r.unverified, std::vector<ObjectId>{c.object("5")});
  for (const auto& cell : r.cells) {
    ASSERT_EQ(cell.status, CellStatus::Verified);
    ASSERT_TRUE(cell.certificate.has_value());
    EXPECT_TRUE(recheck(c, *cell.certificate));
    EXPECT_EQ(*cell.y, cell.d + 1);
  }
}

TEST(Modulus, WindowTooSmallIsReported) {
  Category c = catalog::gen_delta(4);
  ModulusReport r = verify_modulus(c, successor_modulus(c, 4), kZ);
  EXPECT_FALSE(r.passed());
  std::size_t too_small = 0;
  for (const auto& cell : r.cells)
    if (cell.status == CellStatus::WindowTooSmall) {
      ++too_small;
      EXPECT_EQ(cell.d, c.object("4"));
      EXPECT_EQ(cell.outside, std::vector<std::string>{"5"});
    }
  EXPECT_EQ(too_small, 4u);
}

TEST(Modulus, InsufficientModulusFails) {
  Category c = catalog::gen_finset_star(3);
  ModulusCandidate mu;
  for (ObjectId d = 0; d < 4; ++d) mu.mu[d] = {0};
  ModulusReport r = verify_modulus(c, mu, kQ);
  EXPECT_FALSE(r.passed());
  for (const auto& cell : r.cells) {
    bool expected = oracle::leq_q(c, cell.d, cell.x, 0);
    EXPECT_EQ(cell.status == CellStatus::Verified, expected);
    if (!expected) EXPECT_EQ(cell.rejected, std::vector<ObjectId>{0});
  }
  ModulusCandidate empty;
  empty.mu[0] = {};
  ModulusReport e = verify_modulus(c, empty, kQ);
  EXPECT_FALSE(e.passed());
}

TEST(Modulus, FinSetStarPrefixModulusPassesOverZ) {
  Category c = catalog::gen_finset_star(3);
  ModulusReport r = verify_modulus(c, prefix_modulus(c), kZ);
  EXPECT_TRUE(r.passed());
  for (const auto& cell : r.cells) EXPECT_TRUE(oracle::leq_q(c, cell.d, cell.x, *cell.y));
}

TEST(Modulus, FastModeAndThreadsKeepVerdicts) {
  Category c = catalog::gen_finset_star(3);
  ModulusReport plain = verify_modulus(c, prefix_modulus(c), kQ);
  VerifyOptions fast;
  fast.fast = true;
  fast.seed = 9;
  ModulusReport f = verify_modulus(c, prefix_modulus(c), kQ, {}, fast);
  EXPECT_EQ(f.passed(), plain.passed());
  for (const auto& cell : f.cells) EXPECT_TRUE(recheck(c, *cell.certificate));
  VerifyOptions threaded;
  threaded.threads = 3;
  ModulusReport t = verify_modulus(c, prefix_modulus(c), kQ, {}, threaded);
  ASSERT_EQ(t.cells.size(), plain.cells.size());
  for (std::size_t i = 0; i < t.cells.size(); ++i) {
    EXPECT_EQ(t.cells[i].y, plain.cells[i].y);
    EXPECT_EQ(t.cells[i].certificate->coeffs, plain.cells[i].certificate->coeffs);
  }
}

TEST(Modulus, BuildContextSatisfiesKroneckerIdentity) {
  Category c = catalog::gen_delta(5);
  ModulusReport r = verify_modulus(c, successor_modulus(c, 4), kZ);
  EffectiveContext ctx = build_context(c, r);
  EXPECT_EQ(ctx.entries.size(), 20u);
  for (const auto& [key, e] : ctx.entries) {
    EXPECT_TRUE(ecc_oracle(c, e));
    EXPECT_TRUE(check_context(c, ctx, key.first, key.second));
    for (ObjectId m : e.m) EXPECT_EQ(m, e.d + 1);
  }
  EXPECT_TRUE(check_all(c, ctx).empty());
}

TEST(Modulus, RetractModulusGivesIdentityEntries) {
  Category c = catalog::gen_finset_star(3);
  ModulusCandidate mu;
  for (ObjectId d = 0; d < 4; ++d)
    for (ObjectId y = 0; y < 4; ++y) mu.mu[d].push_back(y);  // x itself always present
  ModulusReport r = verify_modulus(c, mu, kQ);
  ASSERT_TRUE(r.passed());
  EffectiveContext ctx = build_context(c, r);
  for (const auto& [key, e] : ctx.entries) {
    EXPECT_TRUE(ecc_oracle(c, e));
    if (c.hom(e.d, e.x).empty()) continue;
    // a retract of x gives a single term whose composite is the identity
    if (e.m == std::vector<ObjectId>{e.x}) {
      ASSERT_EQ(e.kappa(), 1u);
      ASSERT_EQ(e.alpha[0].size(), 1u);
      EXPECT_EQ(c.compose(e.alpha[0][0].first, e.beta[0][0].first), c.identity(e.x));
    }
  }
}

TEST(Modulus, DistinctCertificatesGiveValidEntries) {
  // (d, x) = (1, 3) through each of y = 2, 3, 4
  Category c = catalog::gen_delta(5);
  for (const char* y : {"2", "3", "4"}) {
    ModulusCandidate mu;
    mu.mu[c.object("1")] = {c.object(y)};
    ModulusReport r = verify_modulus(c, mu, kQ, {c.object("1"), c.object("3")});
    ASSERT_TRUE(r.cells[1].certificate.has_value()) << y;
    ModulusReport only;
    only.ring = kQ;
    only.mu = mu;
    only.cells = {r.cells[1]};
    EffectiveContext ctx = build_context(c, only);
    EXPECT_TRUE(ecc_oracle(c, ctx.at(c.object("1"), c.object("3"))));
  }
}

TEST(Modulus, ClosedFormContextKappaAndValues) {
  Category c = catalog::gen_finset_star(4);
  EffectiveContext ctx = pointed_set_context(c, kZ);
  for (const auto& [key, e] : ctx.entries) {
    int d = catalog::pointed_size(c.object_label(e.d)), n = catalog::pointed_size(c.object_label(e.x));
    std::uint64_t kappa = 0;
    for (int i = 0; i <= d; ++i) kappa += oracle::choose(n, i);
    EXPECT_EQ(e.kappa(), kappa);
    for (std::size_t i = 0; i < e.kappa(); ++i) {
      int p = catalog::pointed_size(c.object_label(e.m[i]));
      EXPECT_LE(p, d);
      ASSERT_EQ(e.alpha[i].size(), 1u);
      ASSERT_EQ(e.beta[i].size(), 1u);
      EXPECT_EQ(e.alpha[i][0].second, Rational((d - p) % 2 ? -1 : 1));
      EXPECT_EQ(e.beta[i][0].second, binomial(n - p - 1, d - p));
      // alpha on a surjection n_* -> p_*, beta on an injection p_* -> n_*, with
      // beta then alpha the identity of p_*
      EXPECT_EQ(c.compose(e.beta[i][0].first, e.alpha[i][0].first), c.identity(e.m[i]));
    }
    EXPECT_TRUE(ecc_oracle(c, e));
  }
  EXPECT_EQ(ctx.at(c.object("2_*"), c.object("3_*")).kappa(), 7u);
  EXPECT_EQ(ctx.at(c.object("0_*"), c.object("4_*")).kappa(), 1u);
  EXPECT_TRUE(check_all(c, ctx).empty());
  EXPECT_THROW(pointed_set_context(catalog::gen_delta(3), kZ), InputError);
}

TEST(Modulus, PerturbedContextFails) {
  Category c = catalog::gen_finset_star(3);
  EffectiveContext ctx = pointed_set_context(c, kQ);
  auto key = std::make_pair(c.object("2_*"), c.object("3_*"));
  ctx.entries[key].beta[2][0].second = ctx.entries[key].beta[2][0].second + Rational(1);
  EXPECT_FALSE(check_context(c, ctx, key.first, key.second));
  EXPECT_FALSE(ecc_oracle(c, ctx.entries[key]));
  EXPECT_EQ(check_all(c, ctx).size(), 1u);
  EXPECT_THROW((void)ctx.at(c.object("3_*"), 17), InputError);
}

TEST(Modulus, ClosedFormContextWorksInFiSharp) {
  Category c = catalog::gen_fi_sharp(4);
  EffectiveContext ctx = pointed_set_context(c, kZ);
  for (const auto& [key, e] : ctx.entries) EXPECT_TRUE(ecc_oracle(c, e));
  EXPECT_TRUE(check_all(c, ctx).empty());
}
