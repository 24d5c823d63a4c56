#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "catdim/category.hpp"
#include "catdim/matrix.hpp"
#include "catdim/modulus.hpp"
#include "catdim/representation.hpp"

namespace catdim {

/// Dimension and matrix lookup in terms of a category's ids, backed either
/// by a full representation or by one on a full subcategory. Asking a
/// restricted view for data it does not have throws InputError.
class RepView {
 public:
  explicit RepView(const Representation& full);
  RepView(const Representation& restricted, const Subcategory& sub);

  [[nodiscard]] std::size_t dim(ObjectId x) const;
  [[nodiscard]] const Matrix& mat(ArrowId f) const;
  [[nodiscard]] const RingSpec& ring() const { return rep_->ring(); }

 private:
  const Representation* rep_;
  const Subcategory* sub_ = nullptr;
};

/// Everything the block formulas read: V (through a view), the category,
/// the generating degrees in order, and an effective context with entries
/// (d_i, z) for every generator d_i and object z.
struct CompressionInput {
  const RepView& v;
  const Category& c;
  const std::vector<ObjectId>& gens;
  const EffectiveContext& ctx;
};

/// Row layout of X at z: gens-major, then kappa index, each block of height
/// dim V(m_r). offsets[i][r] is the first row of block (i, r).
struct BlockLayout {
  std::vector<std::vector<std::size_t>> offsets;
  std::vector<std::size_t> gen_offset;  // first row of generator i
  std::vector<std::size_t> gen_size;
  std::size_t total = 0;
};

BlockLayout block_layout(const CompressionInput& in, ObjectId z);

/// T^{ij} for f: x -> y (kappa^{i,y} x kappa^{j,x} blocks).
Matrix block_T(const CompressionInput& in, std::size_t i, std::size_t j, ArrowId f);

/// U^{ij} at x, for i < j.
Matrix block_U(const CompressionInput& in, std::size_t i, std::size_t j, ObjectId x);

/// The block matrix X(f), first block column T^{i1}, later columns by
/// X_{ij} = T^{ij} - sum_{n<j} X_{in} U^{nj}.
Matrix assemble_X(const CompressionInput& in, ArrowId f);

/// A(z), B(z) and their C^i / D^j pieces, for every object z.
struct CompressionData {
  std::vector<ObjectId> gens;
  std::vector<Matrix> a;                // per object: R(z) x dim V(z)
  std::vector<Matrix> b;                // per object: dim V(z) x R(z)
  std::vector<std::vector<Matrix>> c;   // c[i][z] = C^i(z)
  std::vector<std::vector<Matrix>> d;   // d[j][z] = D^j(z)
};

/// Builds A, B from the full V. Requires a field and V generated in gens
/// (InputError otherwise); B(z) A(z) = 1 is verified (SoundnessError).
CompressionData build_AB(const Representation& v, const std::vector<ObjectId>& gens, const EffectiveContext& ctx);

/// The same blocks with no precondition or postcondition checks.
CompressionData build_AB_blocks(const CompressionInput& in);

/// The reconstructed representation Y together with the factorizations
/// X(1_z) = A_V(z) B_V(z).
struct CompressedRep {
  std::vector<ObjectId> gens;
  std::vector<Matrix> x_identity;  // X(1_z) per object
  std::vector<Matrix> a_v;         // injections
  std::vector<Matrix> b_v;         // surjections
  Representation y;

  [[nodiscard]] std::vector<std::size_t> ranks() const { return y.dims(); }
};

struct ReconstructOptions {
  /// Called with every X(f) as it is produced (X is not kept).
  std::function<void(ArrowId, const Matrix&)> inspect_x;
};

/// Y(f) = B_V(y) X(f) A_V(x) for every arrow of the category in `in`.
/// Fields only.
CompressedRep reconstruct(const CompressionInput& in, const ReconstructOptions& options = {});

/// Restriction of V to the full subcategory on mu(gens), the data the
/// restricted reconstruction path is allowed to see.
struct RestrictedRep {
  Subcategory sub;
  Representation rep;
};

std::vector<ObjectId> mu_of(const EffectiveContext& ctx, const std::vector<ObjectId>& gens);
RestrictedRep restrict_to_mu(const Representation& v, const std::vector<ObjectId>& gens, const EffectiveContext& ctx);

/// Natural isomorphism V -> Y: phi_z = B_V(z) A(z), psi_z = B(z) A_V(z).
struct IsoResult {
  bool ok = false;
  std::vector<Matrix> phi;
  std::vector<Matrix> psi;
  std::vector<std::string> failures;
};

IsoResult iso_check(const Representation& v, const CompressedRep& compressed, const CompressionData& data);

/// The full pipeline on one representation, with every identity checked:
/// B A = 1, X(f) = A V(f) B, X(1_z) idempotent, Y a functor, V iso Y, and
/// Y rebuilt from the mu(gens) restriction equal to Y from the full V.
struct RoundtripReport {
  bool ba_identity = false;
  bool x_matches = false;
  bool x_idempotent = false;
  bool y_functor = false;
  bool iso = false;
  bool restricted_match = false;
  CompressedRep compressed;
  IsoResult iso_result;
  std::vector<std::string> failures;

  [[nodiscard]] bool ok() const {
    return ba_identity && x_matches && x_idempotent && y_functor && iso && restricted_match;
  }
};

RoundtripReport verify_roundtrip(const Representation& v, const std::vector<ObjectId>& gens,
                                 const EffectiveContext& ctx);

}  // namespace catdim
