#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catdim/category.hpp"
#include "catdim/preorder.hpp"

namespace catdim {

/// A candidate homological modulus on a window. Objects named by the
/// candidate but missing from the window are kept by label in `outside`.
struct ModulusCandidate {
  std::map<ObjectId, std::vector<ObjectId>> mu;
  std::map<ObjectId, std::vector<std::string>> outside;

  [[nodiscard]] bool defined_at(ObjectId d) const { return mu.count(d) || outside.count(d); }
};

enum class CellStatus { Verified, Failed, WindowTooSmall };

const char* to_string(CellStatus s);

/// Verdict for one (d, x): the chosen y with its certificate, or the list of
/// rejected candidates.
struct ModulusCell {
  ObjectId d = 0;
  ObjectId x = 0;
  CellStatus status = CellStatus::Failed;
  std::optional<ObjectId> y;
  std::optional<PreorderCertificate> certificate;
  std::vector<ObjectId> rejected;
  std::vector<std::string> outside;  // candidates that could not be tested
};

struct ModulusReport {
  RingSpec ring;
  std::vector<ObjectId> window;
  ModulusCandidate mu;
  std::vector<ModulusCell> cells;        // d-major, then x, in window order
  std::vector<ObjectId> unverified;      // window objects where mu is undefined

  [[nodiscard]] bool passed() const;
  [[nodiscard]] std::size_t failures() const;
};

struct VerifyOptions {
  bool fast = false;  // probabilistic pre-screen to order the candidates
  std::uint64_t seed = 0;
  std::uint64_t sample_bound = 1000;
  std::size_t trials = 3;
  std::size_t threads = 1;
};

/// For each d in the window where mu is defined and each x in the window,
/// the first y in mu(d) (canonical order, or pre-screen order with fast)
/// with x <=_d y. An empty window means every object.
ModulusReport verify_modulus(const Category& c, const ModulusCandidate& mu, const RingSpec& ring,
                             const std::vector<ObjectId>& window = {}, const VerifyOptions& options = {});

using Coefficients = std::vector<std::pair<ArrowId, Scalar>>;

/// Effective context data for one (d, x).
struct ContextEntry {
  ObjectId d = 0;
  ObjectId x = 0;
  std::vector<ObjectId> m;
  std::vector<Coefficients> alpha;  // alpha[i]: arrows x -> m[i]
  std::vector<Coefficients> beta;   // beta[i]: arrows m[i] -> x

  [[nodiscard]] std::size_t kappa() const { return m.size(); }
};

struct EffectiveContext {
  RingSpec ring;
  ModulusCandidate mu;
  std::map<std::pair<ObjectId, ObjectId>, ContextEntry> entries;

  [[nodiscard]] bool has(ObjectId d, ObjectId x) const { return entries.count({d, x}) > 0; }
  /// Throws InputError when the entry is missing.
  [[nodiscard]] const ContextEntry& at(ObjectId d, ObjectId x) const;
};

/// Refines a passing report: one term per nonzero certificate coefficient,
/// supported on the least factorization of that endomorphism. Every entry is
/// checked before return (SoundnessError otherwise).
EffectiveContext build_context(const Category& c, const ModulusReport& report);

/// Exact evaluation of the Kronecker identity for every pair f, g: d -> x,
/// plus shape checks (arrow endpoints, m_i in mu(d) when mu is known).
bool check_entry(const Category& c, const ContextEntry& entry, const RingSpec& ring,
                 const ModulusCandidate* mu = nullptr);

/// check_entry on the stored (d, x) entry; InputError if it is missing.
bool check_context(const Category& c, const EffectiveContext& ctx, ObjectId d, ObjectId x);

/// The (d, x) pairs whose entries fail.
std::vector<std::pair<ObjectId, ObjectId>> check_all(const Category& c, const EffectiveContext& ctx,
                                                     std::size_t threads = 1);

/// Binomial coefficient extended to a = -1 (C(-1, k) = (-1)^k) and to k > a
/// or k < 0 (zero).
Rational binomial(std::int64_t a, std::int64_t k);

/// The explicit context on pointed finite sets refining mu(d_*) = {0_*..d_*}:
/// subsets P of n_* with at most d points, alpha = (-1)^(d-p) on the collapse
/// n_* -> p_*, beta = C(n-p-1, d-p) on the inclusion p_* -> n_*. Entries for
/// every d_* with d <= max_d (all objects when max_d < 0) and every n_*.
/// Works on finset_star and fi_sharp windows.
EffectiveContext pointed_set_context(const Category& c, const RingSpec& ring, int max_d = -1);

}  // namespace catdim
