#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "catdim/category.hpp"
#include "catdim/linalg.hpp"
#include "catdim/matrix.hpp"
#include "catdim/random.hpp"

namespace catdim {

/// A functor from a finite category to free modules of finite rank:
/// dims indexed by ObjectId, one matrix (dims(tgt) x dims(src)) per ArrowId.
class Representation {
 public:
  Representation() = default;
  /// Throws InputError on size or shape mismatches. Functoriality is not
  /// checked here; see check_functoriality.
  Representation(Category category, RingSpec ring, std::vector<std::size_t> dims, std::vector<Matrix> mats);

  [[nodiscard]] const Category& category() const { return category_; }
  [[nodiscard]] const RingSpec& ring() const { return ring_; }
  [[nodiscard]] std::size_t dim(ObjectId x) const { return dims_[x]; }
  [[nodiscard]] const std::vector<std::size_t>& dims() const { return dims_; }
  [[nodiscard]] const Matrix& mat(ArrowId f) const { return mats_[f]; }
  [[nodiscard]] const std::vector<Matrix>& mats() const { return mats_; }
  [[nodiscard]] std::size_t total_dim() const;

 private:
  Category category_;
  RingSpec ring_;
  std::vector<std::size_t> dims_;
  std::vector<Matrix> mats_;
};

/// Identity arrows go to identities and every composable pair (f, g)
/// satisfies mats(g o f) = mats(g) * mats(f).
ValidationReport check_functoriality(const Representation& v);

/// P^d(x) = ring . Hom(d, x), with the basis ordered as hom(d, x).
Representation basic_projective(const Category& c, ObjectId d, const RingSpec& ring);

/// For every object z of the window, do the columns of V(h), h: g -> z with
/// g in `degrees`, span V(z)? Over Z the span must be the whole lattice.
bool is_generated(const Representation& v, const std::vector<ObjectId>& degrees);

/// The objects z (in id order) where generation by `degrees` fails.
std::vector<ObjectId> generation_failures(const Representation& v, const std::vector<ObjectId>& degrees);

Representation direct_sum(const std::vector<Representation>& parts);

/// Restriction along a full subcategory inclusion.
Representation restrict(const Representation& v, const Subcategory& sub);

/// A subrepresentation W of V over a field. basis[z] is the reduced echelon
/// basis of W(z) inside V(z) (rows of basis[z].reduced), and rep is W itself
/// in those coordinates.
struct Subrepresentation {
  std::vector<Echelon> basis;
  Representation rep;

  /// dims(V, z) x dims(W, z) matrix of the inclusion W(z) -> V(z).
  [[nodiscard]] Matrix inclusion(ObjectId z) const;
};

/// The smallest subrepresentation containing each (object, vector) seed.
Subrepresentation generated_subrepresentation(const Representation& v,
                                              const std::vector<std::pair<ObjectId, Vector>>& seeds);

/// V / W over a field. Coordinates of the quotient at z are the non-pivot
/// positions of W's echelon basis.
Representation quotient(const Representation& v, const Subrepresentation& w);

/// Ring element for random tests: residues over F_p, small fractions over
/// Q, small integers over Z.
Scalar random_scalar(const RingSpec& ring, Rng& rng);

struct RandomRepOptions {
  std::size_t relations = 2;     // seeds of the random subrepresentation
  std::size_t max_nonzero = 3;   // nonzero entries per seed, drawn in [1, max_nonzero]
  std::size_t max_dim = 0;       // redraw while some dimension exceeds this (0: no cap)
  std::size_t min_total_dim = 0; // redraw while the total dimension is below this
  std::size_t attempts = 200;
};

/// A random representation generated in `degrees` (repeats allowed): the
/// quotient of the sum of the P^d by the subrepresentation generated by a
/// few random sparse vectors. Fields only. Throws InputError when no draw
/// within options.attempts meets the dimension bounds.
Representation random_representation(const Category& c, const std::vector<ObjectId>& degrees, const RingSpec& ring,
                                     Rng& rng, const RandomRepOptions& options = {});

}  // namespace catdim
