#include "catdim/category.hpp"

#include <unordered_map>

#include "catdim/errors.hpp"

namespace catdim {

struct Category::State {
  std::vector<std::string> objects;
  std::vector<Arrow> arrows;
  std::vector<ArrowId> identities;
  std::string family;
  std::unordered_map<std::string, ObjectId> by_label;
  std::vector<std::vector<ArrowId>> hom;  // x * n + y
  std::vector<std::size_t> hom_index;
  std::vector<ArrowId> table;  // dense, only for table-backed categories
  ComposeFn fn;
  std::vector<std::string> issues;

  [[nodiscard]] bool valid_arrow(ArrowId f) const {
    return f < arrows.size() && arrows[f].src < objects.size() && arrows[f].tgt < objects.size();
  }
};

std::shared_ptr<Category::State> Category::make_state(std::vector<std::string> objects, std::vector<Arrow> arrows,
                                                      std::vector<ArrowId> identities, std::string family) {
  auto s = std::make_shared<State>();
  s->objects = std::move(objects);
  s->arrows = std::move(arrows);
  s->identities = std::move(identities);
  s->family = std::move(family);
  const std::size_t n = s->objects.size();
  for (ObjectId i = 0; i < n; ++i) {
    if (!s->by_label.emplace(s->objects[i], i).second) s->issues.push_back("duplicate object label '" + s->objects[i] + "'");
  }
  s->hom.assign(n * n, {});
  s->hom_index.assign(s->arrows.size(), 0);
  for (std::size_t k = 0; k < s->arrows.size(); ++k) {
    const Arrow& a = s->arrows[k];
    if (a.id != k) s->issues.push_back("arrow at position " + std::to_string(k) + " has id " + std::to_string(a.id));
    if (a.src >= n || a.tgt >= n) {
      s->issues.push_back("arrow " + std::to_string(k) + " has an endpoint outside the object list");
      continue;
    }
    auto& list = s->hom[a.src * n + a.tgt];
    s->hom_index[k] = list.size();
    list.push_back(static_cast<ArrowId>(k));
  }
  if (s->identities.size() != n) {
    s->issues.push_back("expected " + std::to_string(n) + " identities, got " + std::to_string(s->identities.size()));
    s->identities.resize(n, kNoArrow);
  }
  return s;
}

Category::Category() : s_(make_state({}, {}, {}, {})) {}

Category Category::from_table(std::vector<std::string> objects, std::vector<Arrow> arrows,
                              std::vector<ArrowId> identities, const std::vector<ComposeTriple>& triples,
                              std::string family) {
  auto s = make_state(std::move(objects), std::move(arrows), std::move(identities), std::move(family));
  const std::size_t m = s->arrows.size();
  s->table.assign(m * m, kNoArrow);
  for (const auto& t : triples) {
    if (t.first >= m || t.then >= m || t.result >= m) {
      s->issues.push_back("compose triple [" + std::to_string(t.first) + ", " + std::to_string(t.then) + ", " +
                          std::to_string(t.result) + "] references an unknown arrow");
      continue;
    }
    ArrowId& slot = s->table[static_cast<std::size_t>(t.first) * m + t.then];
    if (slot != kNoArrow) {
      s->issues.push_back("duplicate compose triple for pair (" + std::to_string(t.first) + ", " +
                          std::to_string(t.then) + ")");
      continue;
    }
    slot = t.result;
  }
  return Category(std::move(s));
}

Category Category::from_function(std::vector<std::string> objects, std::vector<Arrow> arrows,
                                 std::vector<ArrowId> identities, ComposeFn compose, std::string family) {
  auto s = make_state(std::move(objects), std::move(arrows), std::move(identities), std::move(family));
  s->fn = std::move(compose);
  return Category(std::move(s));
}

std::size_t Category::num_objects() const { return s_->objects.size(); }
std::size_t Category::num_arrows() const { return s_->arrows.size(); }

const std::string& Category::object_label(ObjectId x) const {
  if (x >= s_->objects.size()) throw InputError("object index " + std::to_string(x) + " out of range");
  return s_->objects[x];
}

const std::vector<std::string>& Category::object_labels() const { return s_->objects; }

std::optional<ObjectId> Category::find_object(const std::string& label) const {
  auto it = s_->by_label.find(label);
  if (it == s_->by_label.end()) return std::nullopt;
  return it->second;
}

ObjectId Category::object(const std::string& label) const {
  auto x = find_object(label);
  if (!x) throw InputError("unknown object '" + label + "'");
  return *x;
}

const Arrow& Category::arrow(ArrowId f) const {
  if (f >= s_->arrows.size()) throw InputError("arrow id " + std::to_string(f) + " out of range");
  return s_->arrows[f];
}

const std::vector<Arrow>& Category::arrows() const { return s_->arrows; }

ArrowId Category::identity(ObjectId x) const {
  if (x >= s_->identities.size()) throw InputError("object index " + std::to_string(x) + " out of range");
  return s_->identities[x];
}

const std::vector<ArrowId>& Category::identities() const { return s_->identities; }

bool Category::is_identity(ArrowId f) const {
  const Arrow& a = arrow(f);
  return a.src == a.tgt && a.src < s_->identities.size() && s_->identities[a.src] == f;
}

ArrowId Category::compose(ArrowId first, ArrowId then) const {
  const State& s = *s_;
  if (!s.valid_arrow(first) || !s.valid_arrow(then)) return kNoArrow;
  if (!s.table.empty()) return s.table[static_cast<std::size_t>(first) * s.arrows.size() + then];
  if (s.arrows[first].tgt != s.arrows[then].src || !s.fn) return kNoArrow;
  return s.fn(first, then);
}

std::span<const ArrowId> Category::hom(ObjectId x, ObjectId y) const {
  const std::size_t n = s_->objects.size();
  if (x >= n || y >= n) throw InputError("hom: object index out of range");
  return s_->hom[x * n + y];
}

std::size_t Category::hom_index(ArrowId f) const {
  if (f >= s_->arrows.size()) throw InputError("arrow id " + std::to_string(f) + " out of range");
  return s_->hom_index[f];
}

std::optional<ArrowId> Category::find_arrow(ObjectId x, ObjectId y, const std::string& label) const {
  for (ArrowId f : hom(x, y))
    if (s_->arrows[f].label == label) return f;
  return std::nullopt;
}

const std::string& Category::family() const { return s_->family; }
bool Category::table_backed() const { return !s_->table.empty() || !s_->fn; }
const std::vector<std::string>& Category::load_issues() const { return s_->issues; }

std::vector<ComposeTriple> Category::triples() const {
  std::vector<ComposeTriple> out;
  const std::size_t n = num_objects();
  for (ObjectId a = 0; a < n; ++a)
    for (ObjectId b = 0; b < n; ++b)
      for (ArrowId f : hom(a, b))
        for (ObjectId c = 0; c < n; ++c)
          for (ArrowId g : hom(b, c)) {
            ArrowId h = compose(f, g);
            if (h != kNoArrow) out.push_back({f, g, h});
          }
  return out;
}

void ValidationReport::add(std::string message) {
  if (violations.size() < kMaxListed) violations.push_back(std::move(message));
  ++total;
}

namespace {

std::string pair_str(ArrowId f, ArrowId g) { return "(" + std::to_string(f) + ", " + std::to_string(g) + ")"; }

}  // namespace

ValidationReport validate(const Category& c) {
  ValidationReport report;
  for (const auto& issue : c.load_issues()) report.add(issue);
  const std::size_t n = c.num_objects();
  const std::size_t m = c.num_arrows();
  std::vector<bool> arrow_ok(m, true);
  for (ArrowId f = 0; f < m; ++f) {
    const Arrow& a = c.arrow(f);
    if (a.src >= n || a.tgt >= n || a.id != f) arrow_ok[f] = false;
  }
  for (ObjectId x = 0; x < n; ++x) {
    ArrowId i = c.identities()[x];
    if (i >= m) {
      report.add("object '" + c.object_label(x) + "' has no identity arrow");
      continue;
    }
    if (c.arrow(i).src != x || c.arrow(i).tgt != x) {
      report.add("identity of '" + c.object_label(x) + "' is not an endomorphism of it");
    }
  }

  // Composability: table entries must exist exactly on composable pairs.
  if (c.table_backed()) {
    for (ArrowId f = 0; f < m; ++f) {
      if (!arrow_ok[f]) continue;
      for (ArrowId g = 0; g < m; ++g) {
        if (!arrow_ok[g]) continue;
        ArrowId h = c.compose(f, g);
        bool composable = c.arrow(f).tgt == c.arrow(g).src;
        if (!composable && h != kNoArrow) report.add("compose entry for non-composable pair " + pair_str(f, g));
      }
    }
  }
  // Every composable pair, cached as pairs[offset[f * n + d] + hom_index(g)]
  // for g: tgt f -> d. Invalid composites are stored as kNoArrow.
  std::vector<std::size_t> offset(m * n + 1, 0);
  std::size_t total_pairs = 0;
  for (ArrowId f = 0; f < m; ++f)
    for (ObjectId d = 0; d < n; ++d) {
      offset[f * n + d] = total_pairs;
      if (arrow_ok[f]) total_pairs += c.hom(c.arrow(f).tgt, d).size();
    }
  std::vector<ArrowId> pairs(total_pairs, kNoArrow);
  for (ArrowId f = 0; f < m; ++f) {
    if (!arrow_ok[f]) continue;
    const ObjectId a = c.arrow(f).src;
    const ObjectId b = c.arrow(f).tgt;
    for (ObjectId d = 0; d < n; ++d) {
      std::size_t base = offset[f * n + d];
      for (ArrowId g : c.hom(b, d)) {
        if (!arrow_ok[g]) continue;
        ArrowId h = c.compose(f, g);
        if (h == kNoArrow) {
          report.add("missing composite for composable pair " + pair_str(f, g));
        } else if (h >= m || c.arrow(h).src != a || c.arrow(h).tgt != d) {
          report.add("composite of " + pair_str(f, g) + " has the wrong source or target");
        } else {
          pairs[base + c.hom_index(g)] = h;
        }
      }
    }
  }

  // Identity laws.
  for (ArrowId f = 0; f < m; ++f) {
    if (!arrow_ok[f]) continue;
    const Arrow& a = c.arrow(f);
    ArrowId is = c.identities()[a.src], it = c.identities()[a.tgt];
    if (is < m && c.compose(is, f) != f) report.add("left identity law fails for arrow " + std::to_string(f));
    if (it < m && c.compose(f, it) != f) report.add("right identity law fails for arrow " + std::to_string(f));
  }

  // Associativity over all composable triples f: a->b, g: b->cc, h: cc->d.
  for (ArrowId f = 0; f < m; ++f) {
    if (!arrow_ok[f]) continue;
    const ObjectId b = c.arrow(f).tgt;
    for (ObjectId cc = 0; cc < n; ++cc) {
      auto gs = c.hom(b, cc);
      const std::size_t f_cc = offset[f * n + cc];
      for (ArrowId g : gs) {
        if (!arrow_ok[g]) continue;
        const ArrowId fg = pairs[f_cc + c.hom_index(g)];
        if (fg == kNoArrow || !arrow_ok[fg]) continue;
        for (ObjectId d = 0; d < n; ++d) {
          auto hs = c.hom(cc, d);
          const std::size_t fg_d = offset[fg * n + d];
          const std::size_t g_d = offset[g * n + d];
          const std::size_t f_d = offset[f * n + d];
          for (std::size_t k = 0; k < hs.size(); ++k) {
            const ArrowId gh = pairs[g_d + k];
            if (gh == kNoArrow || !arrow_ok[gh]) continue;
            if (pairs[fg_d + k] != pairs[f_d + c.hom_index(gh)]) {
              report.add("associativity fails for (" + std::to_string(f) + ", " + std::to_string(g) + ", " +
                         std::to_string(hs[k]) + ")");
            }
          }
        }
      }
    }
  }
  return report;
}

Category opposite(const Category& c) {
  std::vector<Arrow> arrows = c.arrows();
  for (auto& a : arrows) std::swap(a.src, a.tgt);
  std::string family = c.family().empty() ? std::string() : "op(" + c.family() + ")";
  if (c.table_backed()) {
    std::vector<ComposeTriple> triples;
    for (const auto& t : c.triples()) triples.push_back({t.then, t.first, t.result});
    return Category::from_table(c.object_labels(), std::move(arrows), c.identities(), triples, family);
  }
  return Category::from_function(
      c.object_labels(), std::move(arrows), c.identities(),
      [c](ArrowId first, ArrowId then) { return c.compose(then, first); }, family);
}

Subcategory full_subcategory(const Category& parent, const std::vector<ObjectId>& objects) {
  Subcategory sub;
  sub.object_to_parent = objects;
  sub.object_from_parent.assign(parent.num_objects(), std::nullopt);
  std::vector<std::string> labels;
  for (ObjectId i = 0; i < objects.size(); ++i) {
    if (objects[i] >= parent.num_objects()) throw InputError("full_subcategory: object out of range");
    if (sub.object_from_parent[objects[i]]) throw InputError("full_subcategory: repeated object");
    sub.object_from_parent[objects[i]] = i;
    labels.push_back(parent.object_label(objects[i]));
  }
  sub.arrow_from_parent.assign(parent.num_arrows(), kNoArrow);
  std::vector<Arrow> arrows;
  for (ObjectId i = 0; i < objects.size(); ++i)
    for (ObjectId j = 0; j < objects.size(); ++j)
      for (ArrowId f : parent.hom(objects[i], objects[j])) {
        auto id = static_cast<ArrowId>(arrows.size());
        arrows.push_back({id, i, j, parent.arrow(f).label});
        sub.arrow_to_parent.push_back(f);
        sub.arrow_from_parent[f] = id;
      }
  std::vector<ArrowId> identities;
  for (ObjectId x : objects) identities.push_back(sub.arrow_from_parent[parent.identity(x)]);
  auto to_parent = sub.arrow_to_parent;
  auto from_parent = sub.arrow_from_parent;
  sub.category = Category::from_function(
      std::move(labels), std::move(arrows), std::move(identities),
      [parent, to_parent, from_parent](ArrowId first, ArrowId then) {
        ArrowId h = parent.compose(to_parent[first], to_parent[then]);
        return h == kNoArrow ? kNoArrow : from_parent[h];
      },
      parent.family());
  return sub;
}

bool is_retract(const Category& c, ObjectId x, ObjectId y) {
  const ArrowId one = c.identity(x);
  for (ArrowId p : c.hom(x, y))
    for (ArrowId q : c.hom(y, x))
      if (c.compose(p, q) == one) return true;
  return false;
}

}  // namespace catdim
