#include "catdim/catalog.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <sstream>
#include <unordered_map>

#include "catdim/errors.hpp"
#include "catdim/ring.hpp"

namespace catdim::catalog {

namespace {

using Values = std::vector<int>;

// A family of concrete categories whose arrows are finite tuples of small
// integers (functions or matrices) composed by an explicit rule.
struct ConcreteFamily {
  std::string name;
  std::vector<std::string> objects;
  // All arrows a -> b, already in lexicographic order.
  std::function<std::vector<Values>(std::size_t a, std::size_t b)> enumerate;
  // Composite "first f: a -> b, then g: b -> c".
  std::function<Values(const Values& f, const Values& g, std::size_t a, std::size_t b, std::size_t c)> compose;
  std::function<std::string(const Values& v, std::size_t a, std::size_t b)> label;
  std::function<Values(std::size_t a)> identity;
};

std::uint64_t pack(const Values& v) {
  if (v.size() > 15) throw InputError("catalog window too large to index");
  std::uint64_t key = v.size();
  for (int x : v) {
    if (x < 0 || x > 15) throw InputError("catalog value out of packing range");
    key = (key << 4) | static_cast<std::uint64_t>(x);
  }
  return key;
}

struct ConcreteData {
  std::vector<Values> values;
  std::vector<std::unordered_map<std::uint64_t, ArrowId>> lookup;  // per hom a * n + b
  std::size_t n = 0;
};

Category build(const ConcreteFamily& fam) {
  auto data = std::make_shared<ConcreteData>();
  const std::size_t n = fam.objects.size();
  data->n = n;
  data->lookup.resize(n * n);
  std::vector<Arrow> arrows;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (auto& v : fam.enumerate(a, b)) {
        auto id = static_cast<ArrowId>(arrows.size());
        arrows.push_back({id, static_cast<ObjectId>(a), static_cast<ObjectId>(b), fam.label(v, a, b)});
        data->lookup[a * n + b].emplace(pack(v), id);
        data->values.push_back(std::move(v));
      }
  std::vector<ArrowId> identities;
  for (std::size_t a = 0; a < n; ++a) {
    auto it = data->lookup[a * n + a].find(pack(fam.identity(a)));
    if (it == data->lookup[a * n + a].end()) throw std::logic_error("catalog: identity missing");
    identities.push_back(it->second);
  }
  std::vector<ObjectId> src, tgt;
  for (const auto& ar : arrows) {
    src.push_back(ar.src);
    tgt.push_back(ar.tgt);
  }
  auto compose = fam.compose;
  auto fn = [data, compose, src, tgt](ArrowId f, ArrowId g) -> ArrowId {
    std::size_t a = src[f], b = tgt[f], c = tgt[g];
    Values h = compose(data->values[f], data->values[g], a, b, c);
    const auto& table = data->lookup[a * data->n + c];
    auto it = table.find(pack(h));
    return it == table.end() ? kNoArrow : it->second;
  };
  return Category::from_function(fam.objects, std::move(arrows), std::move(identities), fn, fam.name);
}

std::string list_label(const Values& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << "]";
  return os.str();
}

std::string matrix_label(const Values& v, std::size_t rows, std::size_t cols) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows; ++i) {
    os << (i ? "," : "") << "[";
    for (std::size_t j = 0; j < cols; ++j) os << (j ? "," : "") << v[i * cols + j];
    os << "]";
  }
  os << "]";
  return os.str();
}

// All tuples of length `len` with entries in [lo, hi] accepted by `keep`
// (called on complete tuples), in lexicographic order.
std::vector<Values> tuples(std::size_t len, int lo, int hi, const std::function<bool(const Values&)>& keep) {
  std::vector<Values> out;
  Values cur(len, lo);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == len) {
      if (keep(cur)) out.push_back(cur);
      return;
    }
    for (int v = lo; v <= hi; ++v) {
      cur[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

bool monotone(const Values& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1]) return false;
  return true;
}

bool injective_away_from_base(const Values& v) {
  std::vector<bool> seen(16, false);
  for (int x : v) {
    if (x == 0) continue;
    if (seen[static_cast<std::size_t>(x)]) return false;
    seen[static_cast<std::size_t>(x)] = true;
  }
  return true;
}

ConcreteFamily pointed_family(int max, bool fi_sharp) {
  if (max < 0) throw InputError("window size must be >= 0");
  if (max > 5) throw InputError("FinSet_* windows are limited to max <= 5");
  ConcreteFamily fam;
  fam.name = fi_sharp ? kFiSharp : kFinSetStar;
  for (int k = 0; k <= max; ++k) fam.objects.push_back(std::to_string(k) + "_*");
  fam.enumerate = [fi_sharp](std::size_t a, std::size_t b) {
    return tuples(a, 0, static_cast<int>(b), [fi_sharp](const Values& v) {
      return !fi_sharp || injective_away_from_base(v);
    });
  };
  fam.compose = [](const Values& f, const Values& g, std::size_t, std::size_t, std::size_t) {
    Values h(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) h[i] = f[i] == 0 ? 0 : g[static_cast<std::size_t>(f[i] - 1)];
    return h;
  };
  fam.label = [](const Values& v, std::size_t, std::size_t) { return list_label(v); };
  fam.identity = [](std::size_t a) {
    Values v(a);
    for (std::size_t i = 0; i < a; ++i) v[i] = static_cast<int>(i + 1);
    return v;
  };
  return fam;
}

}  // namespace

Category gen_delta(int max) {
  if (max < 1) throw InputError("simplex window needs max >= 1");
  if (max > 8) throw InputError("simplex windows are limited to max <= 8");
  ConcreteFamily fam;
  fam.name = kDelta;
  for (int k = 1; k <= max; ++k) fam.objects.push_back(std::to_string(k));
  // object index i is the chain of size i + 1
  fam.enumerate = [](std::size_t a, std::size_t b) { return tuples(a + 1, 1, static_cast<int>(b + 1), monotone); };
  fam.compose = [](const Values& f, const Values& g, std::size_t, std::size_t, std::size_t) {
    Values h(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) h[i] = g[static_cast<std::size_t>(f[i] - 1)];
    return h;
  };
  fam.label = [](const Values& v, std::size_t, std::size_t) { return list_label(v); };
  fam.identity = [](std::size_t a) {
    Values v(a + 1);
    for (std::size_t i = 0; i <= a; ++i) v[i] = static_cast<int>(i + 1);
    return v;
  };
  return build(fam);
}

Category gen_finset_star(int max) { return build(pointed_family(max, false)); }

Category gen_fi_sharp(int max) { return build(pointed_family(max, true)); }

Category gen_vect_fq(std::uint32_t q, int max) {
  if (!is_prime(q)) throw InputError("gen_vect_fq supports prime q only");
  if (max < 0) throw InputError("window size must be >= 0");
  if (q > 15 || max * max > 15) throw InputError("Vect_Fq window too large");
  ConcreteFamily fam;
  fam.name = kVectFq;
  for (int k = 0; k <= max; ++k) fam.objects.push_back(std::to_string(k));
  const int qi = static_cast<int>(q);
  // arrow a -> b is a b x a matrix, row-major
  fam.enumerate = [qi](std::size_t a, std::size_t b) {
    return tuples(a * b, 0, qi - 1, [](const Values&) { return true; });
  };
  fam.compose = [qi](const Values& f, const Values& g, std::size_t a, std::size_t b, std::size_t c) {
    Values h(c * a, 0);
    for (std::size_t i = 0; i < c; ++i)
      for (std::size_t j = 0; j < a; ++j) {
        int acc = 0;
        for (std::size_t t = 0; t < b; ++t) acc += g[i * b + t] * f[t * a + j];
        h[i * a + j] = acc % qi;
      }
    return h;
  };
  fam.label = [](const Values& v, std::size_t a, std::size_t b) { return matrix_label(v, b, a); };
  fam.identity = [](std::size_t a) {
    Values v(a * a, 0);
    for (std::size_t i = 0; i < a; ++i) v[i * a + i] = 1;
    return v;
  };
  return build(fam);
}

Category gen_rel(int max) {
  if (max < 0) throw InputError("window size must be >= 0");
  if (max > 3) throw InputError("Rel windows are limited to max <= 3");
  ConcreteFamily fam;
  fam.name = kRel;
  for (int k = 0; k <= max; ++k) fam.objects.push_back(std::to_string(k));
  // relation a -> b is an a x b boolean matrix, row-major
  fam.enumerate = [](std::size_t a, std::size_t b) {
    return tuples(a * b, 0, 1, [](const Values&) { return true; });
  };
  fam.compose = [](const Values& f, const Values& g, std::size_t a, std::size_t b, std::size_t c) {
    Values h(a * c, 0);
    for (std::size_t i = 0; i < a; ++i)
      for (std::size_t k = 0; k < c; ++k)
        for (std::size_t j = 0; j < b; ++j)
          if (f[i * b + j] && g[j * c + k]) {
            h[i * c + k] = 1;
            break;
          }
    return h;
  };
  fam.label = [](const Values& v, std::size_t a, std::size_t b) { return matrix_label(v, a, b); };
  fam.identity = [](std::size_t a) {
    Values v(a * a, 0);
    for (std::size_t i = 0; i < a; ++i) v[i * a + i] = 1;
    return v;
  };
  return build(fam);
}

Category generate(const std::string& family, int max, std::uint32_t q) {
  if (family == kDelta) return gen_delta(max);
  if (family == kFinSetStar) return gen_finset_star(max);
  if (family == kFiSharp) return gen_fi_sharp(max);
  if (family == kVectFq) return gen_vect_fq(q, max);
  if (family == kRel) return gen_rel(max);
  throw InputError("unknown catalog family '" + family + "'");
}

std::string function_label(const std::vector<int>& values) { return list_label(values); }

std::vector<int> label_values(const std::string& label) {
  if (label.size() < 2 || label.front() != '[' || label.back() != ']') {
    throw InputError("not a function label: '" + label + "'");
  }
  std::vector<int> out;
  std::string body = label.substr(1, label.size() - 2);
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw InputError("not a function label: '" + label + "'");
    }
  }
  return out;
}

int pointed_size(const std::string& label) {
  if (label.size() < 3 || !label.ends_with("_*")) throw InputError("not a pointed-set label: '" + label + "'");
  try {
    return std::stoi(label.substr(0, label.size() - 2));
  } catch (const std::exception&) {
    throw InputError("not a pointed-set label: '" + label + "'");
  }
}

DeltaWitness delta_witness(const Category& delta, int n) {
  if (n < 1) throw InputError("delta_witness needs n >= 1");
  auto find = [&](int k) {
    auto id = delta.find_object(std::to_string(k));
    if (!id) throw InputError("simplex window lacks object " + std::to_string(k));
    return *id;
  };
  DeltaWitness w;
  w.n = n;
  w.source = find(n);
  w.small = find(n + 1);
  w.big = find(n + 2);
  w.identity = delta.identity(w.big);

  std::vector<Values> values;
  for (ArrowId h : delta.hom(w.big, w.big)) {
    Values v = label_values(delta.arrow(h).label);
    bool in_band = true;
    for (std::size_t i = 0; i < v.size(); ++i) {
      int pos = static_cast<int>(i) + 1;
      if (v[i] < pos || v[i] > pos + 1) in_band = false;
    }
    if (!in_band) continue;
    int sign = 1;
    for (std::size_t i = 0; i < v.size(); ++i)
      if ((v[i] - static_cast<int>(i) - 1) % 2 != 0) sign = -sign;
    w.h.push_back(h);
    w.rho.push_back(sign);
    values.push_back(std::move(v));
  }

  // iota_k flips the value at k between k and k + 1.
  w.involution_ok = true;
  for (std::size_t idx = 0; idx < w.h.size(); ++idx)
    for (int k = 1; k <= n + 1; ++k) {
      Values flipped = values[idx];
      flipped[static_cast<std::size_t>(k - 1)] = 2 * k + 1 - flipped[static_cast<std::size_t>(k - 1)];
      auto image = delta.find_arrow(w.big, w.big, list_label(flipped));
      auto pos = image ? std::find(w.h.begin(), w.h.end(), *image) : w.h.end();
      if (pos == w.h.end() || w.rho[static_cast<std::size_t>(pos - w.h.begin())] != -w.rho[idx]) w.involution_ok = false;
    }

  const RingSpec z = RingSpec::integers();
  const std::size_t dim = delta.hom(w.source, w.big).size();
  Matrix sum(dim, dim, z);
  for (std::size_t idx = 0; idx < w.h.size(); ++idx)
    sum.add_block(0, 0, action_matrix(delta, w.source, w.h[idx], z), Scalar(w.rho[idx]));
  w.signed_sum_vanishes = sum.is_zero();

  FactorSet through = factor_set(delta, w.big, w.small, false);
  w.factors_through_smaller = true;
  for (ArrowId h : w.h)
    if (h != w.identity && !through.find(h)) w.factors_through_smaller = false;

  w.certificate = PreorderCertificate{w.source, w.big, w.small, z, {}, std::nullopt};
  for (std::size_t idx = 0; idx < w.h.size(); ++idx)
    if (w.h[idx] != w.identity) w.certificate.coeffs.emplace_back(w.h[idx], Scalar(-w.rho[idx]));
  std::sort(w.certificate.coeffs.begin(), w.certificate.coeffs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  if (!recheck(delta, w.certificate)) throw SoundnessError("simplex witness certificate failed its recheck");
  return w;
}

}  // namespace catdim::catalog
