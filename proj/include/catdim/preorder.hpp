#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "catdim/category.hpp"
#include "catdim/matrix.hpp"

namespace catdim {

struct Factorization {
  ArrowId p = 0;  // x -> y
  ArrowId q = 0;  // y -> x
};

struct FactorSetMember {
  ArrowId s = 0;
  std::vector<Factorization> witnesses;  // lexicographic in (p, q)
};

/// S(x, y): endomorphisms of x that factor through y, ascending by id.
struct FactorSet {
  ObjectId x = 0;
  ObjectId y = 0;
  std::vector<FactorSetMember> members;

  [[nodiscard]] const FactorSetMember* find(ArrowId s) const;
  [[nodiscard]] std::vector<ArrowId> arrows() const;
};

/// With all_witnesses == false only the least witness of each member is kept.
FactorSet factor_set(const Category& c, ObjectId x, ObjectId y, bool all_witnesses = true);

/// Square 0-1 matrix over Hom(d, x): column f has its 1 in row s o f.
Matrix action_matrix(const Category& c, ObjectId d, ArrowId s, const RingSpec& ring);

/// Proof object for x <=_d y: sum_s coeffs(s) M_s = 1.
struct PreorderCertificate {
  ObjectId d = 0;
  ObjectId x = 0;
  ObjectId y = 0;
  RingSpec ring;
  std::vector<std::pair<ArrowId, Scalar>> coeffs;  // ascending arrow id, nonzero
  std::optional<std::uint64_t> seed;
};

/// Exact recheck: every s is an endomorphism of x factoring through y, every
/// coefficient lies in the ring, and the combination is the identity.
bool recheck(const Category& c, const PreorderCertificate& cert);

/// A generating set of Hom(d, x) under precomposition by End(d) (greedy by
/// orbit size, ties by id). Identities of the form sum_s c_s (s o f) = f
/// only need checking on these f.
std::vector<ArrowId> precomposition_generators(const Category& c, ObjectId d, ObjectId x);

/// Decides x <=_d y exactly. The certificate is rechecked before return;
/// a failing recheck throws SoundnessError.
std::optional<PreorderCertificate> leq(const Category& c, ObjectId d, ObjectId x, ObjectId y, const RingSpec& ring);

/// x <=^d y, i.e. x <=_d y in the opposite category.
std::optional<PreorderCertificate> leq_op(const Category& c, ObjectId d, ObjectId x, ObjectId y,
                                          const RingSpec& ring);

/// Independent decision: r_d((x,x)) + (x,y,x) = (x,x) as submodules of
/// ring . End(x).
bool leq_alt(const Category& c, ObjectId d, ObjectId x, ObjectId y, const RingSpec& ring);

struct ProbabilisticVerdict {
  bool verdict = false;
  std::uint64_t seed = 0;
  std::size_t trials_used = 0;
  /// (|Hom(d,x)| / effective sample bound)^trials, the false negative bound.
  double false_negative_bound = 0.0;
};

/// Fields only. Tries `trials` random combinations with coefficients in
/// [0, sample_bound) (capped at p over F_p) and reports true as soon as one
/// is invertible. Never true unless x <=_d y.
ProbabilisticVerdict leq_probabilistic(const Category& c, ObjectId d, ObjectId x, ObjectId y, const RingSpec& ring,
                                       std::uint64_t sample_bound, std::size_t trials, std::uint64_t seed);

enum class Side { Left, Right };

/// Submodule of ring . Hom(x, y) given by spanning vectors over the basis
/// hom(x, y).
struct AnnihilatorBasis {
  ObjectId x = 0;
  ObjectId y = 0;
  Side side = Side::Right;
  ObjectId anchor = 0;
  RingSpec ring;
  std::vector<Vector> vectors;
};

/// r_d((x,y)): combinations f of arrows x -> y with f o h = 0 for all h: d -> x.
AnnihilatorBasis right_annihilator(const Category& c, ObjectId d, ObjectId x, ObjectId y, const RingSpec& ring);

/// l_d((x,y)): combinations f of arrows x -> y with h o f = 0 for all h: y -> d.
AnnihilatorBasis left_annihilator(const Category& c, ObjectId x, ObjectId y, ObjectId d, const RingSpec& ring);

/// Does every listed vector satisfy the defining condition?
bool annihilator_holds(const Category& c, const AnnihilatorBasis& ann);

}  // namespace catdim
