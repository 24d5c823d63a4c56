#include "catdim/reconstruction.hpp"

#include <algorithm>
#include <set>

#include "catdim/errors.hpp"
#include "catdim/linalg.hpp"

namespace catdim {

RepView::RepView(const Representation& full) : rep_(&full) {}

RepView::RepView(const Representation& restricted, const Subcategory& sub) : rep_(&restricted), sub_(&sub) {}

std::size_t RepView::dim(ObjectId x) const {
  if (!sub_) return rep_->dim(x);
  if (x >= sub_->object_from_parent.size() || !sub_->object_from_parent[x])
    throw InputError("restricted representation has no data at object " + std::to_string(x));
  return rep_->dim(*sub_->object_from_parent[x]);
}

const Matrix& RepView::mat(ArrowId f) const {
  if (!sub_) return rep_->mat(f);
  if (f >= sub_->arrow_from_parent.size() || sub_->arrow_from_parent[f] == kNoArrow)
    throw InputError("restricted representation has no matrix for arrow " + std::to_string(f));
  return rep_->mat(sub_->arrow_from_parent[f]);
}

BlockLayout block_layout(const CompressionInput& in, ObjectId z) {
  BlockLayout layout;
  for (ObjectId d : in.gens) {
    const ContextEntry& e = in.ctx.at(d, z);
    layout.gen_offset.push_back(layout.total);
    std::vector<std::size_t> offs;
    for (ObjectId m : e.m) {
      offs.push_back(layout.total);
      layout.total += in.v.dim(m);
    }
    layout.offsets.push_back(std::move(offs));
    layout.gen_size.push_back(layout.total - layout.gen_offset.back());
  }
  return layout;
}

namespace {

// Local block offsets of one generator's part of a layout.
std::vector<std::size_t> local_offsets(const CompressionInput& in, const ContextEntry& e, std::size_t& total) {
  std::vector<std::size_t> offs;
  total = 0;
  for (ObjectId m : e.m) {
    offs.push_back(total);
    total += in.v.dim(m);
  }
  return offs;
}

// Computes X(f) with the U blocks cached per source object.
class XBuilder {
 public:
  explicit XBuilder(const CompressionInput& in) : in_(in), u_(in.c.num_objects()), have_u_(in.c.num_objects(), 0) {}

  Matrix x(ArrowId f) {
    const Arrow& a = in_.c.arrow(f);
    const std::size_t l = in_.gens.size();
    const auto& u = u_blocks(a.src);
    const RingSpec& ring = in_.v.ring();
    BlockLayout rows = block_layout(in_, a.tgt);
    BlockLayout cols = block_layout(in_, a.src);
    std::vector<std::vector<Matrix>> blocks(l, std::vector<Matrix>(l));
    for (std::size_t j = 0; j < l; ++j)
      for (std::size_t i = 0; i < l; ++i) {
        Matrix xij = block_T(in_, i, j, f);
        for (std::size_t n = 0; n < j; ++n) xij -= blocks[i][n] * u[n][j];
        blocks[i][j] = std::move(xij);
      }
    Matrix out(rows.total, cols.total, ring);
    for (std::size_t i = 0; i < l; ++i)
      for (std::size_t j = 0; j < l; ++j) out.set_block(rows.gen_offset[i], cols.gen_offset[j], blocks[i][j]);
    return out;
  }

 private:
  const std::vector<std::vector<Matrix>>& u_blocks(ObjectId x) {
    if (!have_u_[x]) {
      const std::size_t l = in_.gens.size();
      u_[x].assign(l, std::vector<Matrix>(l));
      for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = i + 1; j < l; ++j) u_[x][i][j] = block_U(in_, i, j, x);
      have_u_[x] = 1;
    }
    return u_[x];
  }

  const CompressionInput& in_;
  std::vector<std::vector<std::vector<Matrix>>> u_;
  std::vector<char> have_u_;
};

}  // namespace

Matrix block_T(const CompressionInput& in, std::size_t i, std::size_t j, ArrowId f) {
  const Arrow& a = in.c.arrow(f);
  const RingSpec& ring = in.v.ring();
  const ContextEntry& ey = in.ctx.at(in.gens.at(i), a.tgt);
  const ContextEntry& ex = in.ctx.at(in.gens.at(j), a.src);
  std::size_t rows = 0, cols = 0;
  auto ro = local_offsets(in, ey, rows);
  auto co = local_offsets(in, ex, cols);
  Matrix t(rows, cols, ring);
  for (std::size_t s = 0; s < ex.m.size(); ++s)
    for (const auto& [p, beta] : ex.beta[s]) {
      if (beta.is_zero()) continue;
      const ArrowId fp = in.c.compose(p, f);
      for (std::size_t r = 0; r < ey.m.size(); ++r)
        for (const auto& [q, alpha] : ey.alpha[r]) {
          if (alpha.is_zero()) continue;
          t.add_block(ro[r], co[s], in.v.mat(in.c.compose(fp, q)), ring.mul(beta, alpha));
        }
    }
  return t;
}

Matrix block_U(const CompressionInput& in, std::size_t i, std::size_t j, ObjectId x) {
  if (i >= j) throw InputError("block_U needs i < j");
  const RingSpec& ring = in.v.ring();
  const ContextEntry& ei = in.ctx.at(in.gens.at(i), x);
  const ContextEntry& ej = in.ctx.at(in.gens.at(j), x);
  std::size_t rows = 0, cols = 0;
  auto ro = local_offsets(in, ei, rows);
  auto co = local_offsets(in, ej, cols);
  Matrix u(rows, cols, ring);
  for (std::size_t s = 0; s < ej.m.size(); ++s)
    for (const auto& [p, beta] : ej.beta[s]) {
      if (beta.is_zero()) continue;
      for (std::size_t r = 0; r < ei.m.size(); ++r)
        for (const auto& [q, alpha] : ei.alpha[r]) {
          if (alpha.is_zero()) continue;
          u.add_block(ro[r], co[s], in.v.mat(in.c.compose(p, q)), ring.mul(beta, alpha));
        }
    }
  return u;
}

Matrix assemble_X(const CompressionInput& in, ArrowId f) {
  XBuilder builder(in);
  return builder.x(f);
}

CompressionData build_AB_blocks(const CompressionInput& in) {
  const std::size_t l = in.gens.size();
  const std::size_t n_obj = in.c.num_objects();
  const RingSpec& ring = in.v.ring();
  CompressionData data;
  data.gens = in.gens;
  data.c.assign(l, std::vector<Matrix>(n_obj));
  data.d.assign(l, std::vector<Matrix>(n_obj));
  data.a.resize(n_obj);
  data.b.resize(n_obj);
  for (ObjectId z = 0; z < n_obj; ++z) {
    const std::size_t dz = in.v.dim(z);
    for (std::size_t i = 0; i < l; ++i) {
      const ContextEntry& e = in.ctx.at(in.gens[i], z);
      std::size_t size = 0;
      auto offs = local_offsets(in, e, size);
      Matrix ci(size, dz, ring);
      Matrix di(dz, size, ring);
      for (std::size_t r = 0; r < e.m.size(); ++r) {
        for (const auto& [p, alpha] : e.alpha[r])
          if (!alpha.is_zero()) ci.add_block(offs[r], 0, in.v.mat(p), alpha);
        for (const auto& [q, beta] : e.beta[r])
          if (!beta.is_zero()) di.add_block(0, offs[r], in.v.mat(q), beta);
      }
      data.c[i][z] = std::move(ci);
      data.d[i][z] = std::move(di);
    }
    std::vector<Matrix> a_parts, b_parts;
    Matrix ba = Matrix::zero(dz, dz, ring);  // sum over n < j of B_n C^n
    for (std::size_t j = 0; j < l; ++j) {
      Matrix bj = data.d[j][z] - ba * data.d[j][z];
      ba += bj * data.c[j][z];
      a_parts.push_back(data.c[j][z]);
      b_parts.push_back(std::move(bj));
    }
    data.a[z] = vstack(a_parts, dz, ring);
    data.b[z] = hstack(b_parts, dz, ring);
  }
  return data;
}

CompressionData build_AB(const Representation& v, const std::vector<ObjectId>& gens, const EffectiveContext& ctx) {
  if (!v.ring().is_field()) throw InputError("reconstruction requires a field (Q or Fp:<p>), not Z");
  auto missing = generation_failures(v, gens);
  if (!missing.empty()) {
    throw InputError("representation is not generated in the given degrees (fails at object '" +
                     v.category().object_label(missing.front()) + "')");
  }
  RepView view(v);
  CompressionInput in{view, v.category(), gens, ctx};
  CompressionData data = build_AB_blocks(in);
  for (ObjectId z = 0; z < v.category().num_objects(); ++z) {
    if (!(data.b[z] * data.a[z]).is_identity())
      throw SoundnessError("B(z) A(z) != 1 at object '" + v.category().object_label(z) + "'");
  }
  return data;
}

CompressedRep reconstruct(const CompressionInput& in, const ReconstructOptions& options) {
  const RingSpec& ring = in.v.ring();
  if (!ring.is_field()) throw InputError("reconstruction requires a field (Q or Fp:<p>), not Z");
  const std::size_t n_obj = in.c.num_objects();
  XBuilder builder(in);
  CompressedRep out;
  out.gens = in.gens;
  out.x_identity.resize(n_obj);
  out.a_v.resize(n_obj);
  out.b_v.resize(n_obj);
  std::vector<std::size_t> ranks(n_obj);
  for (ObjectId z = 0; z < n_obj; ++z) {
    out.x_identity[z] = builder.x(in.c.identity(z));
    EpiMono em = epi_mono_factor(out.x_identity[z]);
    ranks[z] = em.injection.cols();
    out.a_v[z] = std::move(em.injection);
    out.b_v[z] = std::move(em.surjection);
  }
  std::vector<Matrix> mats;
  mats.reserve(in.c.num_arrows());
  for (const auto& a : in.c.arrows()) {
    Matrix x = in.c.is_identity(a.id) ? out.x_identity[a.src] : builder.x(a.id);
    if (options.inspect_x) options.inspect_x(a.id, x);
    mats.push_back(out.b_v[a.tgt] * (x * out.a_v[a.src]));
  }
  out.y = Representation(in.c, ring, std::move(ranks), std::move(mats));
  return out;
}

std::vector<ObjectId> mu_of(const EffectiveContext& ctx, const std::vector<ObjectId>& gens) {
  std::set<ObjectId> objs;
  for (ObjectId d : gens) {
    if (auto it = ctx.mu.mu.find(d); it != ctx.mu.mu.end()) {
      objs.insert(it->second.begin(), it->second.end());
      continue;
    }
    for (const auto& [key, entry] : ctx.entries)
      if (key.first == d) objs.insert(entry.m.begin(), entry.m.end());
  }
  return {objs.begin(), objs.end()};
}

RestrictedRep restrict_to_mu(const Representation& v, const std::vector<ObjectId>& gens, const EffectiveContext& ctx) {
  RestrictedRep out;
  out.sub = full_subcategory(v.category(), mu_of(ctx, gens));
  out.rep = restrict(v, out.sub);
  return out;
}

IsoResult iso_check(const Representation& v, const CompressedRep& compressed, const CompressionData& data) {
  IsoResult out;
  const Category& c = v.category();
  const RingSpec& ring = v.ring();
  for (ObjectId z = 0; z < c.num_objects(); ++z) {
    Matrix phi = compressed.b_v[z] * data.a[z];
    Matrix psi = data.b[z] * compressed.a_v[z];
    if (!(psi * phi == Matrix::identity(v.dim(z), ring)))
      out.failures.push_back("psi phi != 1 at '" + c.object_label(z) + "'");
    if (!(phi * psi == Matrix::identity(compressed.y.dim(z), ring)))
      out.failures.push_back("phi psi != 1 at '" + c.object_label(z) + "'");
    out.phi.push_back(std::move(phi));
    out.psi.push_back(std::move(psi));
  }
  for (const auto& a : c.arrows()) {
    if (!(out.phi[a.tgt] * v.mat(a.id) == compressed.y.mat(a.id) * out.phi[a.src]))
      out.failures.push_back("naturality fails at arrow " + std::to_string(a.id));
    if (out.failures.size() > ValidationReport::kMaxListed) break;
  }
  out.ok = out.failures.empty();
  return out;
}

RoundtripReport verify_roundtrip(const Representation& v, const std::vector<ObjectId>& gens,
                                 const EffectiveContext& ctx) {
  RoundtripReport out;
  const Category& c = v.category();
  CompressionData data = build_AB(v, gens, ctx);
  out.ba_identity = true;
  for (ObjectId z = 0; z < c.num_objects(); ++z)
    if (!(data.b[z] * data.a[z]).is_identity()) out.ba_identity = false;
  if (!out.ba_identity) out.failures.push_back("B A != 1");

  std::size_t bad_x = 0, bad_idem = 0;
  ReconstructOptions options;
  options.inspect_x = [&](ArrowId f, const Matrix& x) {
    const Arrow& a = c.arrow(f);
    if (!(x == data.a[a.tgt] * v.mat(f) * data.b[a.src])) ++bad_x;
    if (c.is_identity(f) && !(x * x == x)) ++bad_idem;
  };
  RepView full(v);
  out.compressed = reconstruct(CompressionInput{full, c, gens, ctx}, options);
  out.x_matches = bad_x == 0;
  out.x_idempotent = bad_idem == 0;
  if (bad_x) out.failures.push_back(std::to_string(bad_x) + " arrows with X(f) != A V(f) B");
  if (bad_idem) out.failures.push_back(std::to_string(bad_idem) + " objects with X(1) not idempotent");

  ValidationReport functor = check_functoriality(out.compressed.y);
  out.y_functor = functor.ok();
  for (const auto& m : functor.violations) out.failures.push_back("Y: " + m);

  out.iso_result = iso_check(v, out.compressed, data);
  out.iso = out.iso_result.ok;
  for (const auto& m : out.iso_result.failures) out.failures.push_back("iso: " + m);

  RestrictedRep restricted = restrict_to_mu(v, gens, ctx);
  RepView view(restricted.rep, restricted.sub);
  CompressedRep again = reconstruct(CompressionInput{view, c, gens, ctx});
  out.restricted_match = again.y.dims() == out.compressed.y.dims() && again.y.mats() == out.compressed.y.mats();
  if (!out.restricted_match) out.failures.push_back("Y from the restriction differs from Y from V");
  return out;
}

}  // namespace catdim
