#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace catdim {

using ObjectId = std::uint32_t;
using ArrowId = std::uint32_t;

inline constexpr ArrowId kNoArrow = std::numeric_limits<ArrowId>::max();

struct Arrow {
  ArrowId id = 0;
  ObjectId src = 0;
  ObjectId tgt = 0;
  std::string label;

  friend bool operator==(const Arrow&, const Arrow&) = default;
};

/// One entry of a composition table: first `first`, then `then`, giving
/// `result` (result = then o first).
struct ComposeTriple {
  ArrowId first = 0;
  ArrowId then = 0;
  ArrowId result = 0;
};

/// A finite category: objects, arrows, identities and a total composition
/// law on composable pairs. Immutable and cheap to copy (shared state).
///
/// Composition is either a dense table indexed by arrow-id pairs (categories
/// read from files) or a function supplied by a concrete generator (catalog
/// windows whose tables would not fit in memory).
class Category {
 public:
  /// Returns kNoArrow when undefined. Arguments are in "first, then" order.
  using ComposeFn = std::function<ArrowId(ArrowId first, ArrowId then)>;

  Category();

  /// Builds a table-backed category. Structural problems (duplicate triples,
  /// out-of-range ids) do not throw; they are recorded and surface in
  /// validate().
  static Category from_table(std::vector<std::string> objects, std::vector<Arrow> arrows,
                             std::vector<ArrowId> identities, const std::vector<ComposeTriple>& triples,
                             std::string family = {});

  static Category from_function(std::vector<std::string> objects, std::vector<Arrow> arrows,
                                std::vector<ArrowId> identities, ComposeFn compose, std::string family = {});

  [[nodiscard]] std::size_t num_objects() const;
  [[nodiscard]] std::size_t num_arrows() const;
  [[nodiscard]] const std::string& object_label(ObjectId x) const;
  [[nodiscard]] const std::vector<std::string>& object_labels() const;
  [[nodiscard]] std::optional<ObjectId> find_object(const std::string& label) const;
  /// Throws InputError for unknown labels.
  [[nodiscard]] ObjectId object(const std::string& label) const;

  [[nodiscard]] const Arrow& arrow(ArrowId f) const;
  [[nodiscard]] const std::vector<Arrow>& arrows() const;
  [[nodiscard]] ArrowId identity(ObjectId x) const;
  [[nodiscard]] const std::vector<ArrowId>& identities() const;
  [[nodiscard]] bool is_identity(ArrowId f) const;

  /// then o first, or kNoArrow if the pair is not composable / not defined.
  [[nodiscard]] ArrowId compose(ArrowId first, ArrowId then) const;

  /// Arrows x -> y in ascending id order. This order indexes every matrix.
  [[nodiscard]] std::span<const ArrowId> hom(ObjectId x, ObjectId y) const;
  /// Position of f inside hom(src f, tgt f).
  [[nodiscard]] std::size_t hom_index(ArrowId f) const;
  /// First arrow in hom(x, y) with this label.
  [[nodiscard]] std::optional<ArrowId> find_arrow(ObjectId x, ObjectId y, const std::string& label) const;

  /// Catalog family tag ("delta", "finset_star", ...), empty if unknown.
  [[nodiscard]] const std::string& family() const;
  [[nodiscard]] bool table_backed() const;

  /// Problems found while loading (duplicate triples and similar).
  [[nodiscard]] const std::vector<std::string>& load_issues() const;

  /// Every defined composite, for serialization. Enumerates all composable
  /// pairs, so it is quadratic in hom-set sizes.
  [[nodiscard]] std::vector<ComposeTriple> triples() const;

 private:
  struct State;
  explicit Category(std::shared_ptr<const State> state) : s_(std::move(state)) {}
  static std::shared_ptr<State> make_state(std::vector<std::string> objects, std::vector<Arrow> arrows,
                                           std::vector<ArrowId> identities, std::string family);

  std::shared_ptr<const State> s_;
};

struct ValidationReport {
  std::vector<std::string> violations;  // first few, human readable
  std::size_t total = 0;                // total number of violations found

  [[nodiscard]] bool ok() const { return total == 0; }
  void add(std::string message);

  static constexpr std::size_t kMaxListed = 64;
};

/// Checks ids, endpoints, identity laws, composability and associativity.
ValidationReport validate(const Category& c);

/// Same objects and arrows with source and target swapped; composition
/// reversed. Arrow ids and labels are preserved.
Category opposite(const Category& c);

/// The full subcategory on `objects` (in the given order), with id maps back
/// to the parent.
struct Subcategory {
  Category category;
  std::vector<ObjectId> object_to_parent;
  std::vector<ArrowId> arrow_to_parent;
  std::vector<ArrowId> arrow_from_parent;  // kNoArrow when absent
  std::vector<std::optional<ObjectId>> object_from_parent;
};

Subcategory full_subcategory(const Category& parent, const std::vector<ObjectId>& objects);

/// Does some composite x -> y -> x equal the identity of x?
bool is_retract(const Category& c, ObjectId x, ObjectId y);

}  // namespace catdim
