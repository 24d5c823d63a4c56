#include <gtest/gtest.h>

#include "catdim/catalog.hpp"
#include "catdim/errors.hpp"
#include "catdim/representation.hpp"
#include "oracles.hpp"

using namespace catdim;

namespace {

using QVec = std::vector<mpq_class>;

std::size_t rank_of(const std::vector<QVec>& vs) { return vs.empty() ? 0 : oracle::rank_q(vs); }

QVec to_q(const Vector& v) {
  QVec out;
  for (const auto& x : v) out.push_back(x.to_mpq());
  return out;
}

// Dimensions over Q of the subrepresentation generated by `seeds`, by
// closing the spans under every arrow until nothing changes.
std::vector<std::size_t> closure_dims(const Representation& v, const std::vector<std::pair<ObjectId, Vector>>& seeds) {
  const Category& c = v.category();
  // span[z] is kept linearly independent, so its size is its rank
  std::vector<std::vector<QVec>> span(c.num_objects());
  auto grow = [&](ObjectId z, QVec w) {
    auto grown = span[z];
    grown.push_back(std::move(w));
    if (rank_of(grown) == grown.size()) {
      span[z] = std::move(grown);
      return true;
    }
    return false;
  };
  for (const auto& [z, vec] : seeds) grow(z, to_q(vec));
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& a : c.arrows()) {
      for (const auto& w : std::vector<QVec>(span[a.src])) {
        QVec image(v.dim(a.tgt), 0);
        for (std::size_t i = 0; i < image.size(); ++i)
          for (std::size_t j = 0; j < w.size(); ++j) image[i] += v.mat(a.id)(i, j).to_mpq() * w[j];
        if (span[a.tgt].size() < v.dim(a.tgt) && grow(a.tgt, std::move(image))) changed = true;
      }
    }
  }
  std::vector<std::size_t> dims;
  for (const auto& s : span) dims.push_back(s.size());
  return dims;
}

std::vector<std::pair<ObjectId, Vector>> unit_seeds(const Representation& v, const std::vector<ObjectId>& degrees) {
  std::vector<std::pair<ObjectId, Vector>> seeds;
  for (ObjectId d : degrees)
    for (std::size_t i = 0; i < v.dim(d); ++i) {
      Vector e(v.dim(d), Rational(0));
      e[i] = Rational(1);
      seeds.emplace_back(d, e);
    }
  return seeds;
}

bool generated_oracle(const Representation& v, const std::vector<ObjectId>& degrees) {
  return closure_dims(v, unit_seeds(v, degrees)) == v.dims();
}

}  // namespace

TEST(Representation, BasicProjectiveIsComposition) {
  Category c = catalog::gen_finset_star(3);
  for (ObjectId d = 0; d < 4; ++d) {
    Representation p = basic_projective(c, d, RingSpec::rationals());
    EXPECT_TRUE(check_functoriality(p).ok());
    for (ObjectId x = 0; x < 4; ++x) EXPECT_EQ(p.dim(x), c.hom(d, x).size());
    for (const auto& a : c.arrows()) {
      auto src = oracle::hom(c, d, a.src), tgt = oracle::hom(c, d, a.tgt);
      const Matrix& m = p.mat(a.id);
      for (std::size_t col = 0; col < src.size(); ++col)
        for (std::size_t row = 0; row < tgt.size(); ++row)
          EXPECT_EQ(m(row, col).is_one(), c.compose(src[col], a.id) == tgt[row]);
    }
    EXPECT_TRUE(is_generated(p, {d}));
  }
}

TEST(Representation, GenerationMatchesClosureOracle) {
  for (Category c : {catalog::gen_finset_star(2), catalog::gen_delta(3)}) {
    for (ObjectId d = 0; d < 3; ++d) {
      Representation p = basic_projective(c, d, RingSpec::rationals());
      for (ObjectId g = 0; g < 3; ++g)
        EXPECT_EQ(is_generated(p, {g}), generated_oracle(p, {g})) << "d=" << d << " g=" << g;
    }
  }
  Category c = catalog::gen_finset_star(3);
  for (ObjectId d = 0; d < 4; ++d) {
    Representation p = basic_projective(c, d, RingSpec::rationals());
    for (ObjectId g = d; g <= d + 1 && g < 4; ++g) {
      EXPECT_EQ(is_generated(p, {g}), generated_oracle(p, {g})) << "d=" << d << " g=" << g;
    }
  }
  // P^{2_*} is not generated in degree 1_* alone but is in {1_*, 2_*}
  Representation p2 = basic_projective(c, 2, RingSpec::rationals());
  EXPECT_FALSE(is_generated(p2, {1}));
  EXPECT_FALSE(generation_failures(p2, {1}).empty());
  EXPECT_TRUE(is_generated(p2, {1, 2}));
}

TEST(Representation, GenerationOverZIsLatticeGeneration) {
  std::vector<Arrow> arrows{{0, 0, 0, "1a"}, {1, 1, 1, "1b"}, {2, 0, 1, "f"}};
  Category c = Category::from_table({"a", "b"}, arrows, {0, 1}, {{0, 0, 0}, {1, 1, 1}, {0, 2, 2}, {2, 1, 2}});
  auto rep = [&](RingSpec ring, int k) {
    return Representation(c, ring, {1, 1},
                          {Matrix::identity(1, ring), Matrix::identity(1, ring), Matrix::from_rows({{k}}, ring)});
  };
  EXPECT_FALSE(is_generated(rep(RingSpec::integers(), 2), {0}));
  EXPECT_TRUE(is_generated(rep(RingSpec::rationals(), 2), {0}));
  EXPECT_TRUE(is_generated(rep(RingSpec::integers(), -1), {0}));
  EXPECT_FALSE(is_generated(rep(RingSpec::prime_field(2), 2), {0}));
}

TEST(Representation, ShapeErrors) {
  Category c = catalog::gen_delta(2);
  RingSpec q = RingSpec::rationals();
  Representation p = basic_projective(c, 0, q);
  auto mats = p.mats();
  mats[2] = Matrix(5, 5, q);
  EXPECT_THROW(Representation(c, q, p.dims(), mats), InputError);
  EXPECT_THROW(Representation(c, q, {1}, p.mats()), InputError);
  EXPECT_THROW(Representation(c, RingSpec::prime_field(3), p.dims(), p.mats()), InputError);
}

TEST(Representation, FunctorialityCatchesMutation) {
  Category c = catalog::gen_finset_star(2);
  Representation p = basic_projective(c, 1, RingSpec::rationals());
  auto mats = p.mats();
  ArrowId f = c.hom(1, 2)[1];
  mats[f](0, 0) = mats[f](0, 0) + Rational(1);
  Representation bad(c, p.ring(), p.dims(), mats);
  EXPECT_FALSE(check_functoriality(bad).ok());
}

TEST(Representation, DirectSumAndRestrict) {
  Category c = catalog::gen_delta(3);
  RingSpec q = RingSpec::rationals();
  Representation a = basic_projective(c, 0, q), b = basic_projective(c, 1, q);
  Representation s = direct_sum({a, b});
  EXPECT_TRUE(check_functoriality(s).ok());
  for (ObjectId x = 0; x < 3; ++x) EXPECT_EQ(s.dim(x), a.dim(x) + b.dim(x));
  EXPECT_TRUE(is_generated(s, {0, 1}));
  Subcategory sub = full_subcategory(c, {2, 0});
  Representation r = restrict(s, sub);
  EXPECT_TRUE(check_functoriality(r).ok());
  for (ArrowId f = 0; f < sub.category.num_arrows(); ++f) EXPECT_EQ(r.mat(f), s.mat(sub.arrow_to_parent[f]));
}

TEST(Representation, GeneratedSubrepresentationMatchesClosure) {
  Category c = catalog::gen_finset_star(3);
  RingSpec q = RingSpec::rationals();
  Representation p = basic_projective(c, 2, q);
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    std::vector<std::pair<ObjectId, Vector>> seeds;
    for (int k = 0; k < 2; ++k) {
      ObjectId z = static_cast<ObjectId>(rng.below(4));
      Vector v(p.dim(z), Rational(0));
      for (int nz = 0; nz < 2 && !v.empty(); ++nz) v[rng.below(v.size())] = Rational(rng.between(-2, 2));
      seeds.emplace_back(z, v);
    }
    Subrepresentation w = generated_subrepresentation(p, seeds);
    EXPECT_EQ(w.rep.dims(), closure_dims(p, seeds));
    EXPECT_TRUE(check_functoriality(w.rep).ok());
    for (const auto& a : c.arrows())
      EXPECT_EQ(p.mat(a.id) * w.inclusion(a.src), w.inclusion(a.tgt) * w.rep.mat(a.id));
    Representation quo = quotient(p, w);
    EXPECT_TRUE(check_functoriality(quo).ok());
    for (ObjectId z = 0; z < 4; ++z) EXPECT_EQ(quo.dim(z) + w.rep.dim(z), p.dim(z));
  }
}

TEST(Representation, RandomRepresentationsAreGeneratedAndDeterministic) {
  Category c = catalog::gen_finset_star(3);
  for (RingSpec ring : {RingSpec::rationals(), RingSpec::prime_field(5)}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      std::vector<ObjectId> degrees{static_cast<ObjectId>(seed % 3), 2};
      Rng a(seed), b(seed);
      RandomRepOptions options;
      options.max_dim = 10;
      Representation v = random_representation(c, degrees, ring, a, options);
      Representation w = random_representation(c, degrees, ring, b, options);
      EXPECT_EQ(v.mats(), w.mats());
      EXPECT_TRUE(check_functoriality(v).ok());
      EXPECT_TRUE(is_generated(v, degrees));
      if (ring == RingSpec::rationals()) {
        EXPECT_TRUE(generated_oracle(v, degrees));
      }
      for (auto d : v.dims()) EXPECT_LE(d, 10u);
    }
  }
  Rng r(0);
  EXPECT_THROW(random_representation(c, {0}, RingSpec::integers(), r), InputError);
}
