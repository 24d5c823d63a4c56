#include "catdim/representation.hpp"

#include <algorithm>
#include <string>

#include "catdim/errors.hpp"

namespace catdim {

namespace {

std::string shape_str(const Matrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

// Echelon basis (nonzero rows only) of the span of the given vectors.
Echelon span_basis(const std::vector<Vector>& vectors, std::size_t dim, const RingSpec& ring) {
  Matrix rows(vectors.size(), dim, ring);
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (std::size_t j = 0; j < dim; ++j) rows(i, j) = vectors[i][j];
  Echelon e = row_echelon(rows);
  e.reduced = e.reduced.block(0, 0, e.pivots.size(), dim);
  return e;
}

// Coordinates of v in the echelon basis e, or nullopt when v lies outside.
std::optional<Vector> echelon_coordinates(const Echelon& e, const Vector& v) {
  const RingSpec& ring = e.reduced.ring();
  Vector coords(e.pivots.size());
  Vector rest = v;
  for (std::size_t k = 0; k < e.pivots.size(); ++k) {
    coords[k] = v[e.pivots[k]];
    if (coords[k].is_zero()) continue;
    for (std::size_t j = 0; j < rest.size(); ++j) {
      const Scalar& r = e.reduced(k, j);
      if (!r.is_zero()) rest[j] = ring.sub(rest[j], ring.mul(coords[k], r));
    }
  }
  for (const auto& x : rest)
    if (!x.is_zero()) return std::nullopt;
  return coords;
}

}  // namespace

Representation::Representation(Category category, RingSpec ring, std::vector<std::size_t> dims,
                               std::vector<Matrix> mats)
    : category_(std::move(category)), ring_(ring), dims_(std::move(dims)), mats_(std::move(mats)) {
  if (dims_.size() != category_.num_objects()) throw InputError("representation: dims do not match the objects");
  if (mats_.size() != category_.num_arrows()) throw InputError("representation: one matrix per arrow required");
  for (const auto& a : category_.arrows()) {
    const Matrix& m = mats_[a.id];
    if (m.rows() != dims_[a.tgt] || m.cols() != dims_[a.src]) {
      throw InputError("representation: matrix of arrow " + std::to_string(a.id) + " has shape " + shape_str(m) +
                       ", expected " + std::to_string(dims_[a.tgt]) + "x" + std::to_string(dims_[a.src]));
    }
    if (!(m.ring() == ring_)) throw InputError("representation: matrix ring mismatch at arrow " + std::to_string(a.id));
  }
}

std::size_t Representation::total_dim() const {
  std::size_t n = 0;
  for (auto d : dims_) n += d;
  return n;
}

ValidationReport check_functoriality(const Representation& v) {
  ValidationReport report;
  const Category& c = v.category();
  for (const auto& a : c.arrows()) {
    const Matrix& m = v.mat(a.id);
    if (m.rows() != v.dim(a.tgt) || m.cols() != v.dim(a.src))
      report.add("arrow " + std::to_string(a.id) + ": shape " + shape_str(m));
  }
  if (!report.ok()) return report;
  for (ObjectId x = 0; x < c.num_objects(); ++x) {
    if (!v.mat(c.identity(x)).is_identity()) report.add("identity of " + c.object_label(x) + " is not sent to 1");
  }
  const auto n = static_cast<ObjectId>(c.num_objects());
  for (ObjectId a = 0; a < n; ++a)
    for (ObjectId b = 0; b < n; ++b) {
      auto fs = c.hom(a, b);
      if (fs.empty()) continue;
      for (ObjectId z = 0; z < n; ++z)
        for (ArrowId g : c.hom(b, z)) {
          if (c.is_identity(g)) continue;
          const Matrix& mg = v.mat(g);
          for (ArrowId f : fs) {
            if (c.is_identity(f)) continue;
            ArrowId h = c.compose(f, g);
            if (h == kNoArrow) {
              report.add("composite of " + std::to_string(f) + " then " + std::to_string(g) + " is undefined");
              continue;
            }
            if (!(mg * v.mat(f) == v.mat(h))) {
              report.add("V(" + std::to_string(g) + ") V(" + std::to_string(f) + ") != V(" + std::to_string(h) + ")");
            }
          }
        }
    }
  return report;
}

Representation basic_projective(const Category& c, ObjectId d, const RingSpec& ring) {
  std::vector<std::size_t> dims(c.num_objects());
  for (ObjectId x = 0; x < c.num_objects(); ++x) dims[x] = c.hom(d, x).size();
  std::vector<Matrix> mats;
  mats.reserve(c.num_arrows());
  for (const auto& a : c.arrows()) {
    Matrix m(dims[a.tgt], dims[a.src], ring);
    auto basis = c.hom(d, a.src);
    for (std::size_t col = 0; col < basis.size(); ++col) {
      ArrowId image = c.compose(basis[col], a.id);
      m(c.hom_index(image), col) = Scalar(1);
    }
    mats.push_back(std::move(m));
  }
  return Representation(c, ring, std::move(dims), std::move(mats));
}

std::vector<ObjectId> generation_failures(const Representation& v, const std::vector<ObjectId>& degrees) {
  const Category& c = v.category();
  std::vector<ObjectId> failures;
  for (ObjectId z = 0; z < c.num_objects(); ++z) {
    if (v.dim(z) == 0) continue;
    std::vector<Vector> cols;
    for (ObjectId d : degrees)
      for (ArrowId h : c.hom(d, z)) {
        const Matrix& m = v.mat(h);
        for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(m.column(j));
      }
    if (!spans_everything(cols, v.dim(z), v.ring())) failures.push_back(z);
  }
  return failures;
}

bool is_generated(const Representation& v, const std::vector<ObjectId>& degrees) {
  return generation_failures(v, degrees).empty();
}

Representation direct_sum(const std::vector<Representation>& parts) {
  if (parts.empty()) throw InputError("direct_sum of no representations");
  const Category& c = parts.front().category();
  const RingSpec& ring = parts.front().ring();
  std::vector<std::size_t> dims(c.num_objects(), 0);
  for (const auto& p : parts) {
    if (!(p.ring() == ring) || p.dims().size() != dims.size()) throw InputError("direct_sum: incompatible summands");
    for (std::size_t x = 0; x < dims.size(); ++x) dims[x] += p.dim(static_cast<ObjectId>(x));
  }
  std::vector<Matrix> mats;
  mats.reserve(c.num_arrows());
  for (const auto& a : c.arrows()) {
    Matrix m(dims[a.tgt], dims[a.src], ring);
    std::size_t r = 0, col = 0;
    for (const auto& p : parts) {
      m.set_block(r, col, p.mat(a.id));
      r += p.dim(a.tgt);
      col += p.dim(a.src);
    }
    mats.push_back(std::move(m));
  }
  return Representation(c, ring, std::move(dims), std::move(mats));
}

Representation restrict(const Representation& v, const Subcategory& sub) {
  std::vector<std::size_t> dims;
  for (ObjectId x : sub.object_to_parent) dims.push_back(v.dim(x));
  std::vector<Matrix> mats;
  mats.reserve(sub.arrow_to_parent.size());
  for (ArrowId f : sub.arrow_to_parent) mats.push_back(v.mat(f));
  return Representation(sub.category, v.ring(), std::move(dims), std::move(mats));
}

Matrix Subrepresentation::inclusion(ObjectId z) const { return basis[z].reduced.transpose(); }

Subrepresentation generated_subrepresentation(const Representation& v,
                                              const std::vector<std::pair<ObjectId, Vector>>& seeds) {
  if (!v.ring().is_field()) throw InputError("subrepresentations are only supported over a field");
  const Category& c = v.category();
  const RingSpec& ring = v.ring();
  for (const auto& [d, vec] : seeds)
    if (d >= c.num_objects() || vec.size() != v.dim(d)) throw InputError("subrepresentation seed has the wrong size");

  Subrepresentation out;
  std::vector<std::size_t> dims(c.num_objects());
  for (ObjectId z = 0; z < c.num_objects(); ++z) {
    std::vector<Vector> span;
    for (const auto& [d, vec] : seeds)
      for (ArrowId h : c.hom(d, z)) span.push_back(v.mat(h).apply(vec));
    out.basis.push_back(span_basis(span, v.dim(z), ring));
    dims[z] = out.basis.back().pivots.size();
  }
  std::vector<Matrix> mats;
  mats.reserve(c.num_arrows());
  for (const auto& a : c.arrows()) {
    Matrix m(dims[a.tgt], dims[a.src], ring);
    const Echelon& src = out.basis[a.src];
    for (std::size_t k = 0; k < dims[a.src]; ++k) {
      auto coords = echelon_coordinates(out.basis[a.tgt], v.mat(a.id).apply(src.reduced.row(k)));
      if (!coords) throw SoundnessError("generated subrepresentation is not closed under arrow " + std::to_string(a.id));
      for (std::size_t r = 0; r < coords->size(); ++r) m(r, k) = (*coords)[r];
    }
    mats.push_back(std::move(m));
  }
  out.rep = Representation(c, ring, std::move(dims), std::move(mats));
  return out;
}

Representation quotient(const Representation& v, const Subrepresentation& w) {
  const Category& c = v.category();
  const RingSpec& ring = v.ring();
  // For each object: the kept (non-pivot) coordinates and the projection
  // e_j - sum_k R_k[j] e_{p_k} onto them.
  std::vector<std::vector<std::size_t>> kept(c.num_objects());
  std::vector<Matrix> projection(c.num_objects());
  std::vector<std::size_t> dims(c.num_objects());
  for (ObjectId z = 0; z < c.num_objects(); ++z) {
    const Echelon& e = w.basis[z];
    std::vector<bool> is_pivot(v.dim(z), false);
    for (auto p : e.pivots) is_pivot[p] = true;
    for (std::size_t j = 0; j < v.dim(z); ++j)
      if (!is_pivot[j]) kept[z].push_back(j);
    dims[z] = kept[z].size();
    Matrix proj(dims[z], v.dim(z), ring);
    for (std::size_t r = 0; r < kept[z].size(); ++r) {
      std::size_t j = kept[z][r];
      proj(r, j) = Scalar(1);
      for (std::size_t k = 0; k < e.pivots.size(); ++k) {
        const Scalar& coef = e.reduced(k, j);
        if (!coef.is_zero()) proj(r, e.pivots[k]) = ring.neg(coef);
      }
    }
    projection[z] = std::move(proj);
  }
  std::vector<Matrix> mats;
  mats.reserve(c.num_arrows());
  for (const auto& a : c.arrows()) {
    Matrix section(v.dim(a.src), dims[a.src], ring);
    for (std::size_t r = 0; r < kept[a.src].size(); ++r) section(kept[a.src][r], r) = Scalar(1);
    mats.push_back(projection[a.tgt] * (v.mat(a.id) * section));
  }
  return Representation(c, ring, std::move(dims), std::move(mats));
}

Scalar random_scalar(const RingSpec& ring, Rng& rng) {
  switch (ring.kind()) {
    case RingKind::PrimeField:
      return Scalar(static_cast<std::int64_t>(rng.below(ring.modulus())));
    case RingKind::Integers:
      return Scalar(rng.between(-3, 3));
    case RingKind::Rationals:
    default: {
      std::int64_t num = rng.between(-4, 4);
      std::int64_t den = rng.between(1, 3);
      return Scalar(num, den);
    }
  }
}

Representation random_representation(const Category& c, const std::vector<ObjectId>& degrees, const RingSpec& ring,
                                      Rng& rng, const RandomRepOptions& options) {
  if (!ring.is_field()) throw InputError("random representations are only generated over a field");
  if (degrees.empty()) throw InputError("random representation needs at least one degree");
  std::vector<Representation> parts;
  for (ObjectId d : degrees) parts.push_back(basic_projective(c, d, ring));
  Representation sum = direct_sum(parts);

  std::vector<ObjectId> nonzero;
  for (ObjectId z = 0; z < c.num_objects(); ++z)
    if (sum.dim(z) > 0) nonzero.push_back(z);
  for (std::size_t attempt = 0; attempt < options.attempts; ++attempt) {
    std::vector<std::pair<ObjectId, Vector>> seeds;
    for (std::size_t i = 0; i < options.relations && !nonzero.empty(); ++i) {
      ObjectId z = nonzero[rng.below(nonzero.size())];
      Vector vec(sum.dim(z));
      const std::size_t count = 1 + rng.below(std::max<std::size_t>(options.max_nonzero, 1));
      for (std::size_t k = 0; k < count; ++k) vec[rng.below(vec.size())] = random_scalar(ring, rng);
      seeds.emplace_back(z, std::move(vec));
    }
    Representation q = quotient(sum, generated_subrepresentation(sum, seeds));
    std::size_t top = 0;
    for (auto d : q.dims()) top = std::max(top, d);
    if (options.max_dim != 0 && top > options.max_dim) continue;
    if (q.total_dim() < options.min_total_dim) continue;
    return q;
  }
  throw InputError("no random representation within the requested dimension bounds");
}

}  // namespace catdim
