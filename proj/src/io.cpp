#include "catdim/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "catdim/errors.hpp"

namespace catdim::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw InputError((path.empty() ? std::string("<root>") : path) + ": " + message);
}

std::string key_path(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(key_path(path, key), "missing field");
  return *it;
}

const Json& array_at(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

std::uint64_t get_uint(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (!s.empty() && std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      try {
        return std::stoull(s);
      } catch (const std::exception&) {
      }
    }
  }
  fail(path, "expected a nonnegative integer");
}

std::string get_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

ObjectId object_ref(const Json& j, const Category& c, const std::string& path) {
  if (j.is_string()) {
    auto id = c.find_object(j.get<std::string>());
    if (!id) fail(path, "unknown object '" + j.get<std::string>() + "'");
    return *id;
  }
  std::uint64_t v = get_uint(j, path);
  if (v >= c.num_objects()) fail(path, "object index out of range");
  return static_cast<ObjectId>(v);
}

ArrowId arrow_id_from(const std::string& text, const Category& c, const std::string& path) {
  ArrowId id = static_cast<ArrowId>(get_uint(Json(text), path));
  if (id >= c.num_arrows()) fail(path, "arrow id " + text + " out of range");
  return id;
}

ArrowId arrow_ref(const Json& j, const Category& c, const std::string& path) {
  std::uint64_t v = get_uint(j, path);
  if (v >= c.num_arrows()) fail(path, "arrow id out of range");
  return static_cast<ArrowId>(v);
}

RingSpec ring_of(const Json& j, const std::string& path) {
  try {
    return RingSpec::parse(get_string(j, path));
  } catch (const InputError& e) {
    fail(path, e.what());
  }
}

Json labels(const Category& c, const std::vector<ObjectId>& objs) {
  Json out = Json::array();
  for (ObjectId o : objs) out.push_back(c.object_label(o));
  return out;
}

Json coefficients_to_json(const Coefficients& coeffs) {
  Json out = Json::object();
  for (const auto& [id, s] : coeffs) out[std::to_string(id)] = scalar_str(s);
  return out;
}

Coefficients coefficients_from_json(const Json& j, const Category& c, const RingSpec& ring, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object of arrow id -> scalar");
  Coefficients out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string p = key_path(path, it.key());
    out.emplace_back(arrow_id_from(it.key(), c, p), parse_scalar(it.value(), ring, p));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

Json matrices_by_object(const Category& c, const std::vector<Matrix>& ms) {
  Json out = Json::object();
  for (ObjectId z = 0; z < ms.size(); ++z) out[c.object_label(z)] = matrix_to_json(ms[z]);
  return out;
}

}  // namespace

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(origin + ": malformed JSON (" + std::string(e.what()) + ")");
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str(), path);
}

std::string scalar_str(const Scalar& s) { return s.str(); }

Scalar parse_scalar(const Json& j, const RingSpec& ring, const std::string& path) {
  Rational value;
  if (j.is_number_integer()) {
    value = Rational(j.get<std::int64_t>());
  } else if (j.is_string()) {
    try {
      value = Rational::parse(j.get<std::string>());
    } catch (const std::exception&) {
      fail(path, "not a scalar: '" + j.get<std::string>() + "'");
    }
  } else {
    fail(path, "expected a scalar string or integer");
  }
  try {
    return ring.from_rational(value);
  } catch (const InputError& e) {
    fail(path, e.what());
  }
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_str(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols, const RingSpec& ring,
                        const std::string& path) {
  array_at(j, path);
  if (j.size() != rows) fail(path, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
  Matrix m(rows, cols, ring);
  for (std::size_t i = 0; i < rows; ++i) {
    std::string rp = index_path(path, i);
    const Json& row = array_at(j[i], rp);
    if (row.size() != cols) fail(rp, "expected " + std::to_string(cols) + " entries, got " + std::to_string(row.size()));
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = parse_scalar(row[k], ring, index_path(rp, k));
  }
  return m;
}

Json category_to_json(const Category& c) {
  Json out = Json::object();
  if (!c.family().empty()) out["family"] = c.family();
  out["objects"] = c.object_labels();
  Json arrows = Json::array();
  for (const auto& a : c.arrows())
    arrows.push_back({{"id", a.id}, {"src", c.object_label(a.src)}, {"tgt", c.object_label(a.tgt)}, {"label", a.label}});
  out["arrows"] = std::move(arrows);
  Json ids = Json::object();
  for (ObjectId x = 0; x < c.num_objects(); ++x) ids[c.object_label(x)] = c.identity(x);
  out["identities"] = std::move(ids);
  Json triples = Json::array();
  for (const auto& t : c.triples()) triples.push_back({t.first, t.then, t.result});
  out["compose"] = std::move(triples);
  return out;
}

Category category_from_json(const Json& j) {
  std::vector<std::string> objects;
  const Json& objs = array_at(field(j, "objects", ""), "objects");
  std::unordered_map<std::string, ObjectId> by_label;
  for (std::size_t i = 0; i < objs.size(); ++i) {
    objects.push_back(get_string(objs[i], index_path("objects", i)));
    by_label.emplace(objects.back(), static_cast<ObjectId>(i));
  }
  auto obj = [&](const Json& ref, const std::string& path) -> ObjectId {
    if (ref.is_string()) {
      auto it = by_label.find(ref.get<std::string>());
      if (it == by_label.end()) fail(path, "unknown object '" + ref.get<std::string>() + "'");
      return it->second;
    }
    std::uint64_t v = get_uint(ref, path);
    if (v >= objects.size()) fail(path, "object index out of range");
    return static_cast<ObjectId>(v);
  };
  std::vector<Arrow> arrows;
  const Json& arr = array_at(field(j, "arrows", ""), "arrows");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string p = index_path("arrows", i);
    Arrow a;
    a.id = static_cast<ArrowId>(get_uint(field(arr[i], "id", p), key_path(p, "id")));
    a.src = obj(field(arr[i], "src", p), key_path(p, "src"));
    a.tgt = obj(field(arr[i], "tgt", p), key_path(p, "tgt"));
    if (arr[i].contains("label")) a.label = get_string(arr[i]["label"], key_path(p, "label"));
    arrows.push_back(std::move(a));
  }
  std::vector<ArrowId> identities(objects.size(), kNoArrow);
  const Json& ids = field(j, "identities", "");
  if (ids.is_object()) {
    for (auto it = ids.begin(); it != ids.end(); ++it) {
      std::string p = key_path("identities", it.key());
      ObjectId x = obj(Json(it.key()), p);
      identities[x] = static_cast<ArrowId>(get_uint(it.value(), p));
    }
  } else if (ids.is_array()) {
    if (ids.size() != objects.size()) fail("identities", "expected one identity per object");
    for (std::size_t i = 0; i < ids.size(); ++i)
      identities[i] = static_cast<ArrowId>(get_uint(ids[i], index_path("identities", i)));
  } else {
    fail("identities", "expected an object label -> arrow id map");
  }
  std::vector<ComposeTriple> triples;
  const Json& comp = array_at(field(j, "compose", ""), "compose");
  triples.reserve(comp.size());
  for (std::size_t i = 0; i < comp.size(); ++i) {
    std::string p = index_path("compose", i);
    const Json& t = array_at(comp[i], p);
    if (t.size() != 3) fail(p, "expected a triple [f, g, h]");
    triples.push_back({static_cast<ArrowId>(get_uint(t[0], index_path(p, 0))),
                       static_cast<ArrowId>(get_uint(t[1], index_path(p, 1))),
                       static_cast<ArrowId>(get_uint(t[2], index_path(p, 2)))});
  }
  std::string family = j.contains("family") ? get_string(j["family"], "family") : std::string{};
  return Category::from_table(std::move(objects), std::move(arrows), std::move(identities), triples, family);
}

Json validation_to_json(const ValidationReport& r) {
  return Json{{"valid", r.ok()}, {"violations", r.total}, {"listed", r.violations}};
}

Json representation_to_json(const Representation& v) {
  const Category& c = v.category();
  Json out = Json::object();
  out["ring"] = v.ring().str();
  Json dims = Json::object();
  for (ObjectId x = 0; x < c.num_objects(); ++x) dims[c.object_label(x)] = v.dim(x);
  out["dims"] = std::move(dims);
  Json mats = Json::object();
  for (const auto& a : c.arrows()) mats[std::to_string(a.id)] = matrix_to_json(v.mat(a.id));
  out["mats"] = std::move(mats);
  return out;
}

Representation representation_from_json(const Json& j, const Category& c) {
  RingSpec ring = ring_of(field(j, "ring", ""), "ring");
  std::vector<std::size_t> dims(c.num_objects());
  std::vector<bool> seen(c.num_objects(), false);
  const Json& dj = field(j, "dims", "");
  if (!dj.is_object()) fail("dims", "expected an object label -> dimension map");
  for (auto it = dj.begin(); it != dj.end(); ++it) {
    std::string p = key_path("dims", it.key());
    ObjectId x = object_ref(Json(it.key()), c, p);
    dims[x] = get_uint(it.value(), p);
    seen[x] = true;
  }
  for (ObjectId x = 0; x < c.num_objects(); ++x)
    if (!seen[x]) fail(key_path("dims", c.object_label(x)), "missing dimension");
  std::vector<Matrix> mats(c.num_arrows());
  std::vector<bool> have(c.num_arrows(), false);
  const Json& mj = field(j, "mats", "");
  if (!mj.is_object()) fail("mats", "expected an object arrow id -> matrix map");
  for (auto it = mj.begin(); it != mj.end(); ++it) {
    std::string p = key_path("mats", it.key());
    ArrowId f = arrow_id_from(it.key(), c, p);
    const Arrow& a = c.arrow(f);
    mats[f] = matrix_from_json(it.value(), dims[a.tgt], dims[a.src], ring, p);
    have[f] = true;
  }
  for (const auto& a : c.arrows()) {
    if (have[a.id]) continue;
    if (!c.is_identity(a.id)) fail(key_path("mats", std::to_string(a.id)), "missing matrix");
    mats[a.id] = Matrix::identity(dims[a.src], ring);
  }
  return Representation(c, ring, std::move(dims), std::move(mats));
}

Json certificate_to_json(const Category& c, const PreorderCertificate& cert) {
  Json out = Json::object();
  out["d"] = c.object_label(cert.d);
  out["x"] = c.object_label(cert.x);
  out["y"] = c.object_label(cert.y);
  out["ring"] = cert.ring.str();
  Json coeffs = Json::array();
  for (const auto& [s, v] : cert.coeffs) coeffs.push_back({s, scalar_str(v)});
  out["coeffs"] = std::move(coeffs);
  if (cert.seed) out["seed"] = *cert.seed;
  return out;
}

PreorderCertificate certificate_from_json(const Json& j, const Category& c) {
  PreorderCertificate cert;
  cert.d = object_ref(field(j, "d", ""), c, "d");
  cert.x = object_ref(field(j, "x", ""), c, "x");
  cert.y = object_ref(field(j, "y", ""), c, "y");
  cert.ring = ring_of(field(j, "ring", ""), "ring");
  const Json& coeffs = array_at(field(j, "coeffs", ""), "coeffs");
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    std::string p = index_path("coeffs", i);
    const Json& pair = array_at(coeffs[i], p);
    if (pair.size() != 2) fail(p, "expected [arrow_id, scalar]");
    cert.coeffs.emplace_back(arrow_ref(pair[0], c, index_path(p, 0)), parse_scalar(pair[1], cert.ring, index_path(p, 1)));
  }
  if (j.contains("seed")) cert.seed = get_uint(j["seed"], "seed");
  return cert;
}

Json modulus_to_json(const Category& c, const ModulusCandidate& mu) {
  Json out = Json::object();
  for (ObjectId d = 0; d < c.num_objects(); ++d) {
    if (!mu.defined_at(d)) continue;
    Json list = Json::array();
    if (auto it = mu.mu.find(d); it != mu.mu.end())
      for (ObjectId y : it->second) list.push_back(c.object_label(y));
    if (auto it = mu.outside.find(d); it != mu.outside.end())
      for (const auto& label : it->second) list.push_back(label);
    out[c.object_label(d)] = std::move(list);
  }
  return out;
}

ModulusCandidate modulus_from_json(const Json& j, const Category& c) {
  if (!j.is_object()) fail("", "expected an object label -> [labels] map");
  ModulusCandidate mu;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string p = it.key();
    auto d = c.find_object(it.key());
    if (!d) continue;  // outside the window: nothing to verify there
    const Json& list = array_at(it.value(), p);
    auto& inside = mu.mu[*d];
    for (std::size_t i = 0; i < list.size(); ++i) {
      std::string label = get_string(list[i], index_path(p, i));
      if (auto y = c.find_object(label)) {
        if (std::find(inside.begin(), inside.end(), *y) == inside.end()) inside.push_back(*y);
      } else {
        mu.outside[*d].push_back(label);
      }
    }
  }
  return mu;
}

Json report_to_json(const Category& c, const ModulusReport& report) {
  Json out = Json::object();
  out["ring"] = report.ring.str();
  out["window"] = labels(c, report.window);
  out["mu"] = modulus_to_json(c, report.mu);
  out["passed"] = report.passed();
  out["failures"] = report.failures();
  out["unverified"] = labels(c, report.unverified);
  Json cells = Json::array();
  for (const auto& cell : report.cells) {
    Json jc = Json::object();
    jc["d"] = c.object_label(cell.d);
    jc["x"] = c.object_label(cell.x);
    jc["status"] = to_string(cell.status);
    if (cell.y) jc["y"] = c.object_label(*cell.y);
    if (cell.certificate) jc["certificate"] = certificate_to_json(c, *cell.certificate);
    jc["rejected"] = labels(c, cell.rejected);
    if (!cell.outside.empty()) jc["outside"] = cell.outside;
    cells.push_back(std::move(jc));
  }
  out["cells"] = std::move(cells);
  return out;
}

ModulusReport report_from_json(const Json& j, const Category& c) {
  ModulusReport report;
  report.ring = ring_of(field(j, "ring", ""), "ring");
  const Json& window = array_at(field(j, "window", ""), "window");
  for (std::size_t i = 0; i < window.size(); ++i) report.window.push_back(object_ref(window[i], c, index_path("window", i)));
  report.mu = modulus_from_json(field(j, "mu", ""), c);
  if (j.contains("unverified")) {
    const Json& un = array_at(j["unverified"], "unverified");
    for (std::size_t i = 0; i < un.size(); ++i) report.unverified.push_back(object_ref(un[i], c, index_path("unverified", i)));
  }
  const Json& cells = array_at(field(j, "cells", ""), "cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::string p = index_path("cells", i);
    ModulusCell cell;
    cell.d = object_ref(field(cells[i], "d", p), c, key_path(p, "d"));
    cell.x = object_ref(field(cells[i], "x", p), c, key_path(p, "x"));
    std::string status = get_string(field(cells[i], "status", p), key_path(p, "status"));
    if (status == "verified") {
      cell.status = CellStatus::Verified;
    } else if (status == "window_too_small") {
      cell.status = CellStatus::WindowTooSmall;
    } else if (status == "failed") {
      cell.status = CellStatus::Failed;
    } else {
      fail(key_path(p, "status"), "unknown status '" + status + "'");
    }
    if (cells[i].contains("y")) cell.y = object_ref(cells[i]["y"], c, key_path(p, "y"));
    if (cells[i].contains("certificate")) {
      try {
        cell.certificate = certificate_from_json(cells[i]["certificate"], c);
      } catch (const InputError& e) {
        fail(key_path(p, "certificate"), e.what());
      }
    }
    report.cells.push_back(std::move(cell));
  }
  return report;
}

Json context_to_json(const Category& c, const EffectiveContext& ctx) {
  Json out = Json::object();
  out["ring"] = ctx.ring.str();
  out["mu"] = modulus_to_json(c, ctx.mu);
  Json entries = Json::array();
  for (const auto& [key, e] : ctx.entries) {
    Json je = Json::object();
    je["d"] = c.object_label(e.d);
    je["x"] = c.object_label(e.x);
    je["kappa"] = e.kappa();
    je["m"] = labels(c, e.m);
    Json alpha = Json::array(), beta = Json::array();
    for (const auto& a : e.alpha) alpha.push_back(coefficients_to_json(a));
    for (const auto& b : e.beta) beta.push_back(coefficients_to_json(b));
    je["alpha"] = std::move(alpha);
    je["beta"] = std::move(beta);
    entries.push_back(std::move(je));
  }
  out["entries"] = std::move(entries);
  return out;
}

EffectiveContext context_from_json(const Json& j, const Category& c) {
  EffectiveContext ctx;
  ctx.ring = ring_of(field(j, "ring", ""), "ring");
  if (j.contains("mu")) {
    try {
      ctx.mu = modulus_from_json(j["mu"], c);
    } catch (const InputError& e) {
      fail("mu", e.what());
    }
  }
  const Json& entries = array_at(field(j, "entries", ""), "entries");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    std::string p = index_path("entries", i);
    const Json& je = entries[i];
    ContextEntry e;
    e.d = object_ref(field(je, "d", p), c, key_path(p, "d"));
    e.x = object_ref(field(je, "x", p), c, key_path(p, "x"));
    const Json& m = array_at(field(je, "m", p), key_path(p, "m"));
    for (std::size_t k = 0; k < m.size(); ++k) e.m.push_back(object_ref(m[k], c, index_path(key_path(p, "m"), k)));
    const Json& alpha = array_at(field(je, "alpha", p), key_path(p, "alpha"));
    const Json& beta = array_at(field(je, "beta", p), key_path(p, "beta"));
    if (alpha.size() != e.m.size() || beta.size() != e.m.size()) fail(p, "alpha, beta and m must have kappa entries");
    if (je.contains("kappa") && get_uint(je["kappa"], key_path(p, "kappa")) != e.m.size())
      fail(key_path(p, "kappa"), "kappa does not match the length of m");
    for (std::size_t k = 0; k < e.m.size(); ++k) {
      e.alpha.push_back(coefficients_from_json(alpha[k], c, ctx.ring, index_path(key_path(p, "alpha"), k)));
      e.beta.push_back(coefficients_from_json(beta[k], c, ctx.ring, index_path(key_path(p, "beta"), k)));
    }
    if (!ctx.entries.emplace(std::make_pair(e.d, e.x), e).second) fail(p, "duplicate entry");
  }
  return ctx;
}

Json compressed_to_json(const Category& c, const CompressedRep& rep, const std::string& context_ref,
                        const IsoResult* iso) {
  Json out = Json::object();
  out["gens"] = labels(c, rep.gens);
  out["ring"] = rep.y.ring().str();
  out["context"] = context_ref;
  Json ranks = Json::object();
  for (ObjectId z = 0; z < c.num_objects(); ++z) ranks[c.object_label(z)] = rep.y.dim(z);
  out["ranks"] = std::move(ranks);
  Json y = Json::object();
  for (const auto& a : c.arrows()) y[std::to_string(a.id)] = matrix_to_json(rep.y.mat(a.id));
  out["y"] = std::move(y);
  out["a_v"] = matrices_by_object(c, rep.a_v);
  out["b_v"] = matrices_by_object(c, rep.b_v);
  if (iso) {
    out["iso_verified"] = iso->ok;
    out["phi"] = matrices_by_object(c, iso->phi);
  }
  return out;
}

}  // namespace catdim::io
