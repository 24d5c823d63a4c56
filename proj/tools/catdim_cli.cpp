// catdim: batch front end. JSON report on stdout, summary on stderr.
// Exit codes: 0 success, 1 negative verdict, 2 input error, 3 soundness failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "catdim/catalog.hpp"
#include "catdim/errors.hpp"
#include "catdim/io.hpp"
#include "catdim/modulus.hpp"
#include "catdim/parallel.hpp"
#include "catdim/preorder.hpp"
#include "catdim/reconstruction.hpp"
#include "catdim/representation.hpp"

using namespace catdim;
using io::Json;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInput = 2;
constexpr int kSoundness = 3;

struct Common {
  std::string category;
  std::string ring = "Q";
  std::uint64_t seed = 0;
  bool fast = false;
  std::size_t threads = 0;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, sep))
    if (!part.empty()) out.push_back(part);
  return out;
}

// A file path, or catalog:<family>:<max>[:q].
Category load_category(const std::string& source) {
  if (source.rfind("catalog:", 0) == 0) {
    auto parts = split(source.substr(8), ':');
    if (parts.size() < 2 || parts.size() > 3) throw InputError("--category: expected catalog:<family>:<max>[:q]");
    try {
      int max = std::stoi(parts[1]);
      std::uint32_t q = parts.size() == 3 ? static_cast<std::uint32_t>(std::stoul(parts[2])) : 2;
      return catalog::generate(parts[0], max, q);
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const InputError*>(&e)) throw;
      throw InputError("--category: bad number in '" + source + "'");
    }
  }
  return io::category_from_json(io::read_json_file(source));
}

ObjectId object(const Category& c, const std::string& label, const std::string& flag) {
  auto id = c.find_object(label);
  if (!id) throw InputError(flag + ": unknown object '" + label + "'");
  return *id;
}

std::vector<ObjectId> objects(const Category& c, const std::string& labels, const std::string& flag) {
  std::vector<ObjectId> out;
  for (const auto& l : split(labels, ',')) out.push_back(object(c, l, flag));
  if (out.empty()) throw InputError(flag + ": empty list");
  return out;
}

std::size_t thread_count(const Common& o) {
  if (o.threads > 0) return o.threads;
  if (const char* env = std::getenv("CATDIM_THREADS")) {
    try {
      return std::max<std::size_t>(1, std::stoul(env));
    } catch (const std::exception&) {
      throw InputError("CATDIM_THREADS: not a number");
    }
  }
  return 1;
}

void emit(const Json& j, int indent = 2) { std::cout << j.dump(indent) << "\n"; }

std::string label_list(const Category& c, const std::vector<ObjectId>& objs) {
  std::string out;
  for (ObjectId o : objs) out += (out.empty() ? "" : ",") + c.object_label(o);
  return out;
}

void add_common(CLI::App* cmd, Common& o, bool needs_category = true) {
  auto* opt = cmd->add_option("--category", o.category, "category JSON file or catalog:<family>:<max>[:q]");
  if (needs_category) opt->required();
  cmd->add_option("--ring", o.ring, "Q, Fp:<p> or Z")->capture_default_str();
  cmd->add_option("--seed", o.seed, "random seed")->capture_default_str();
  cmd->add_flag("--fast", o.fast, "probabilistic pre-screen (search order only)");
  cmd->add_option("--threads", o.threads, "worker threads (default CATDIM_THREADS or 1)");
}

// ---- subcommands ---------------------------------------------------------

struct ValidateArgs {
  std::string rep;
};

int run_validate(const Common& o, const ValidateArgs& a) {
  Category c = load_category(o.category);
  ValidationReport r = validate(c);
  Json out = Json::object();
  out["objects"] = c.num_objects();
  out["arrows"] = c.num_arrows();
  out["category"] = io::validation_to_json(r);
  bool ok = r.ok();
  if (!a.rep.empty()) {
    if (!ok) throw InputError("--rep: category is not valid, cannot check the representation");
    Representation v = io::representation_from_json(io::read_json_file(a.rep), c);
    ValidationReport f = check_functoriality(v);
    out["representation"] = io::validation_to_json(f);
    ok = ok && f.ok();
  }
  emit(out);
  std::cerr << (ok ? "valid" : "INVALID") << ": " << c.num_objects() << " objects, " << c.num_arrows() << " arrows\n";
  return ok ? kOk : kNegative;
}

struct LeqArgs {
  std::string d, x, y;
  bool op = false;
  std::uint64_t sample_bound = 1000;
  std::size_t trials = 3;
};

int run_leq(const Common& o, const LeqArgs& a) {
  Category c = load_category(o.category);
  RingSpec ring = RingSpec::parse(o.ring);
  ObjectId d = object(c, a.d, "--d"), x = object(c, a.x, "--x"), y = object(c, a.y, "--y");
  Json out = Json::object();
  out["d"] = a.d;
  out["x"] = a.x;
  out["y"] = a.y;
  out["ring"] = ring.str();
  out["opposite"] = a.op;
  if (o.fast && !a.op) {
    RingSpec screen = ring.is_field() ? ring : RingSpec::rationals();
    auto p = leq_probabilistic(c, d, x, y, screen, a.sample_bound, a.trials, o.seed);
    out["screen"] = {{"ring", screen.str()},
                     {"verdict", p.verdict},
                     {"seed", p.seed},
                     {"trials_used", p.trials_used},
                     {"false_negative_bound", p.false_negative_bound}};
  }
  auto cert = a.op ? leq_op(c, d, x, y, ring) : leq(c, d, x, y, ring);
  out["holds"] = cert.has_value();
  if (cert) {
    // leq_op certificates live in the opposite category.
    if (!a.op) out["certificate"] = io::certificate_to_json(c, *cert);
    else out["certificate"] = io::certificate_to_json(opposite(c), *cert);
  }
  emit(out);
  std::cerr << a.x << (cert ? " <=_" : " not <=_") << a.d << " " << a.y << " over " << ring.str() << "\n";
  return cert ? kOk : kNegative;
}

struct TableArgs {
  std::string d;
};

int run_table(const Common& o, const TableArgs& a) {
  Category c = load_category(o.category);
  RingSpec ring = RingSpec::parse(o.ring);
  ObjectId d = object(c, a.d, "--d");
  const std::size_t n = c.num_objects();
  std::vector<char> cells(n * n, 0);
  parallel_for(n * n, thread_count(o), [&](std::size_t k) {
    cells[k] = leq(c, d, static_cast<ObjectId>(k / n), static_cast<ObjectId>(k % n), ring).has_value();
  });
  Json table = Json::array();
  std::size_t count = 0;
  for (std::size_t x = 0; x < n; ++x) {
    Json row = Json::array();
    for (std::size_t y = 0; y < n; ++y) {
      row.push_back(cells[x * n + y] != 0);
      count += cells[x * n + y];
    }
    table.push_back(std::move(row));
  }
  Json out = Json::object();
  out["d"] = a.d;
  out["ring"] = ring.str();
  out["objects"] = c.object_labels();
  out["table"] = std::move(table);
  emit(out);
  std::cerr << count << " of " << n * n << " pairs (x, y) with x <=_" << a.d << " y\n";
  return kOk;
}

struct ModulusArgs {
  std::string modulus;
  std::string window;
};

ModulusReport modulus_report(const Common& o, const Category& c, const ModulusArgs& a) {
  ModulusCandidate mu = io::modulus_from_json(io::read_json_file(a.modulus), c);
  RingSpec ring = RingSpec::parse(o.ring);
  std::vector<ObjectId> window;
  if (!a.window.empty()) window = objects(c, a.window, "--window");
  VerifyOptions options;
  options.fast = o.fast;
  options.seed = o.seed;
  options.threads = thread_count(o);
  return verify_modulus(c, mu, ring, window, options);
}

int run_check_modulus(const Common& o, const ModulusArgs& a) {
  Category c = load_category(o.category);
  ModulusReport report = modulus_report(o, c, a);
  emit(io::report_to_json(c, report));
  std::cerr << (report.passed() ? "window-verified" : "NOT verified") << ": " << report.cells.size() << " cells, "
            << report.failures() << " failing";
  if (!report.unverified.empty()) std::cerr << ", undefined at " << label_list(c, report.unverified);
  std::cerr << "\n";
  return report.passed() ? kOk : kNegative;
}

struct BuildArgs {
  ModulusArgs modulus;
  std::string report;
  bool pointed_sets = false;
  int max_d = -1;
};

int run_build_context(const Common& o, const BuildArgs& a) {
  Category c = load_category(o.category);
  RingSpec ring = RingSpec::parse(o.ring);
  EffectiveContext ctx;
  int sources = (a.pointed_sets ? 1 : 0) + (a.report.empty() ? 0 : 1) + (a.modulus.modulus.empty() ? 0 : 1);
  if (sources != 1) throw InputError("build-context: give exactly one of --pointed-sets, --report, --modulus");
  if (a.pointed_sets) {
    ctx = pointed_set_context(c, ring, a.max_d);
    auto bad = check_all(c, ctx, thread_count(o));
    if (!bad.empty()) throw SoundnessError("closed-form context fails at " + std::to_string(bad.size()) + " cells");
  } else {
    ModulusReport report;
    if (!a.report.empty()) {
      report = io::report_from_json(io::read_json_file(a.report), c);
      for (const auto& cell : report.cells)
        if (cell.certificate && !recheck(c, *cell.certificate))
          throw InputError("--report: certificate for (" + c.object_label(cell.d) + ", " + c.object_label(cell.x) +
                           ") does not recheck");
    } else {
      report = modulus_report(o, c, a.modulus);
    }
    if (!report.passed()) {
      emit(io::report_to_json(c, report));
      std::cerr << "modulus fails at " << report.failures() << " cells; no context built\n";
      return kNegative;
    }
    ctx = build_context(c, report);
  }
  emit(io::context_to_json(c, ctx));
  std::cerr << "context with " << ctx.entries.size() << " entries over " << ctx.ring.str() << "\n";
  return kOk;
}

struct ContextArgs {
  std::string context;
};

int run_check_context(const Common& o, const ContextArgs& a) {
  Category c = load_category(o.category);
  EffectiveContext ctx = io::context_from_json(io::read_json_file(a.context), c);
  auto bad = check_all(c, ctx, thread_count(o));
  Json failing = Json::array();
  for (auto [d, x] : bad) failing.push_back({{"d", c.object_label(d)}, {"x", c.object_label(x)}});
  Json out = Json::object();
  out["ring"] = ctx.ring.str();
  out["entries"] = ctx.entries.size();
  out["passed"] = bad.empty();
  out["failing"] = std::move(failing);
  emit(out);
  std::cerr << ctx.entries.size() << " entries, " << bad.size() << " failing\n";
  return bad.empty() ? kOk : kNegative;
}

struct CompressArgs {
  std::string rep;
  std::string gens;
  std::string context;
};

EffectiveContext load_context(const Category& c, const std::string& path) {
  return io::context_from_json(io::read_json_file(path), c);
}

void require_field(const RingSpec& ring) {
  if (!ring.is_field()) throw InputError("--ring: compression and reconstruction need a field (Q or Fp:<p>), got Z");
}

int run_compress(const Common& o, const CompressArgs& a) {
  Category c = load_category(o.category);
  Representation v = io::representation_from_json(io::read_json_file(a.rep), c);
  require_field(v.ring());
  EffectiveContext ctx = load_context(c, a.context);
  if (!(ctx.ring == v.ring())) throw InputError("--context: ring " + ctx.ring.str() + " differs from " + v.ring().str());
  auto gens = objects(c, a.gens, "--gens");
  CompressionData data = build_AB(v, gens, ctx);
  RepView view(v);
  CompressedRep rep = reconstruct(CompressionInput{view, c, gens, ctx});
  IsoResult iso = iso_check(v, rep, data);
  emit(io::compressed_to_json(c, rep, a.context, &iso));
  if (!iso.ok) {
    std::cerr << "isomorphism check failed: " << (iso.failures.empty() ? "" : iso.failures.front()) << "\n";
    return kSoundness;
  }
  std::cerr << "compressed in degrees " << a.gens << "; iso verified\n";
  return kOk;
}

// The part of a representation JSON that lives on `objs`. Other objects may
// be missing from dims; mats are keyed by arrow ids of the full category.
RestrictedRep representation_on(const Category& c, const Json& j, const std::vector<ObjectId>& objs) {
  if (!j.is_object() || !j.contains("dims") || !j["dims"].is_object())
    throw InputError("dims: expected an object label -> dimension map");
  Subcategory sub = full_subcategory(c, objs);
  Json local = Json::object();
  local["ring"] = j.contains("ring") ? j["ring"] : Json();
  Json dims = Json::object();
  for (ObjectId z : objs) {
    const std::string& label = c.object_label(z);
    if (!j["dims"].contains(label)) throw InputError("dims." + label + ": missing, but " + label + " lies in mu(gens)");
    dims[label] = j["dims"][label];
  }
  local["dims"] = std::move(dims);
  Json mats = Json::object();
  if (j.contains("mats")) {
    if (!j["mats"].is_object()) throw InputError("mats: expected an object arrow id -> matrix map");
    for (auto it = j["mats"].begin(); it != j["mats"].end(); ++it) {
      ArrowId f = 0;
      try {
        f = static_cast<ArrowId>(std::stoul(it.key()));
      } catch (const std::exception&) {
        throw InputError("mats." + it.key() + ": not an arrow id");
      }
      if (f >= c.num_arrows()) throw InputError("mats." + it.key() + ": arrow id out of range");
      ArrowId g = sub.arrow_from_parent[f];
      if (g != kNoArrow) mats[std::to_string(g)] = it.value();
    }
  }
  local["mats"] = std::move(mats);
  Representation rep = io::representation_from_json(local, sub.category);
  return RestrictedRep{std::move(sub), std::move(rep)};
}

int run_reconstruct(const Common& o, const CompressArgs& a) {
  Category c = load_category(o.category);
  EffectiveContext ctx = load_context(c, a.context);
  require_field(ctx.ring);
  auto gens = objects(c, a.gens, "--gens");
  // Only the restriction to mu(gens) is read.
  std::vector<ObjectId> mu = mu_of(ctx, gens);
  RestrictedRep given = representation_on(c, io::read_json_file(a.rep), mu);
  if (!(ctx.ring == given.rep.ring())) throw InputError("--context: ring differs from the representation's");
  RepView view(given.rep, given.sub);
  CompressedRep rep = reconstruct(CompressionInput{view, c, gens, ctx});
  ValidationReport functor = check_functoriality(rep.y);
  emit(io::compressed_to_json(c, rep, a.context));
  if (!functor.ok()) {
    std::cerr << "reconstructed Y is not a functor: " << functor.violations.front() << "\n";
    return kSoundness;
  }
  std::cerr << "reconstructed from " << mu.size() << " objects of mu(" << a.gens << ")\n";
  return kOk;
}

struct RoundtripArgs {
  std::string rep = "random";
  std::string gens;
  std::string context;
  std::size_t relations = 2;
  std::size_t max_dim = 12;
  std::string save_rep;
};

int run_roundtrip(const Common& o, const RoundtripArgs& a) {
  Category c = load_category(o.category);
  auto gens = objects(c, a.gens, "--gens");
  Representation v;
  if (a.rep == "random") {
    RingSpec ring = RingSpec::parse(o.ring);
    require_field(ring);
    Rng rng(o.seed);
    RandomRepOptions options;
    options.relations = a.relations;
    options.max_dim = a.max_dim;
    v = random_representation(c, gens, ring, rng, options);
  } else {
    v = io::representation_from_json(io::read_json_file(a.rep), c);
    require_field(v.ring());
  }
  if (!a.save_rep.empty()) {
    std::ofstream file(a.save_rep);
    if (!file) throw InputError("--save-rep: cannot write " + a.save_rep);
    file << io::representation_to_json(v).dump(2) << "\n";
  }
  EffectiveContext ctx;
  if (!a.context.empty()) {
    ctx = load_context(c, a.context);
  } else if (c.family() == catalog::kFinSetStar || c.family() == catalog::kFiSharp) {
    ctx = pointed_set_context(c, v.ring());
  } else {
    throw InputError("--context is required outside the finset_star / fi_sharp families");
  }
  if (!(ctx.ring == v.ring())) throw InputError("--context: ring differs from the representation's");
  RoundtripReport r = verify_roundtrip(v, gens, ctx);
  Json dims = Json::object();
  for (ObjectId z = 0; z < c.num_objects(); ++z) dims[c.object_label(z)] = v.dim(z);
  Json out = Json::object();
  out["gens"] = a.gens;
  out["ring"] = v.ring().str();
  out["seed"] = o.seed;
  out["dims"] = std::move(dims);
  Json ranks = Json::object();
  for (ObjectId z = 0; z < c.num_objects(); ++z) ranks[c.object_label(z)] = r.compressed.y.dim(z);
  out["ranks"] = std::move(ranks);
  out["checks"] = {{"ba_identity", r.ba_identity},   {"x_formula", r.x_matches},
                   {"x_idempotent", r.x_idempotent}, {"y_functor", r.y_functor},
                   {"iso", r.iso},                   {"restricted_match", r.restricted_match}};
  out["iso_verified"] = r.ok();
  out["failures"] = r.failures;
  emit(out);
  std::cerr << (r.ok() ? "roundtrip ok, iso verified" : "roundtrip FAILED") << " (total dim " << v.total_dim()
            << ")\n";
  return r.ok() ? kOk : kSoundness;
}

struct CatalogArgs {
  std::string family;
  int max = 0;
  std::uint32_t q = 2;
};

int run_catalog(const CatalogArgs& a) {
  Category c = catalog::generate(a.family, a.max, a.q);
  emit(io::category_to_json(c), -1);
  std::cerr << a.family << "(" << a.max << "): " << c.num_objects() << " objects, " << c.num_arrows() << " arrows\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"catdim: preorders, moduli, contexts and compression for finite categories"};
  app.require_subcommand(1);

  Common common;

  ValidateArgs validate_args;
  auto* cmd_validate = app.add_subcommand("validate", "check category axioms (and optionally a representation)");
  add_common(cmd_validate, common);
  cmd_validate->add_option("--rep", validate_args.rep, "representation JSON to check for functoriality");

  LeqArgs leq_args;
  auto* cmd_leq = app.add_subcommand("leq", "decide x <=_d y with a certificate");
  add_common(cmd_leq, common);
  cmd_leq->add_option("--d", leq_args.d)->required();
  cmd_leq->add_option("--x", leq_args.x)->required();
  cmd_leq->add_option("--y", leq_args.y)->required();
  cmd_leq->add_flag("--op", leq_args.op, "decide in the opposite category");
  cmd_leq->add_option("--sample-bound", leq_args.sample_bound)->capture_default_str();
  cmd_leq->add_option("--trials", leq_args.trials)->capture_default_str();

  TableArgs table_args;
  auto* cmd_table = app.add_subcommand("preorder-table", "x <=_d y for every pair of objects");
  add_common(cmd_table, common);
  cmd_table->add_option("--d", table_args.d)->required();

  ModulusArgs modulus_args;
  auto* cmd_modulus = app.add_subcommand("check-modulus", "verify a modulus candidate on the window");
  add_common(cmd_modulus, common);
  cmd_modulus->add_option("--modulus", modulus_args.modulus, "modulus JSON {label: [labels]}")->required();
  cmd_modulus->add_option("--window", modulus_args.window, "comma-separated labels (default: all)");

  BuildArgs build_args;
  auto* cmd_build = app.add_subcommand("build-context", "refine a verified modulus into an effective context");
  add_common(cmd_build, common);
  cmd_build->add_option("--modulus", build_args.modulus.modulus, "verify this modulus first");
  cmd_build->add_option("--window", build_args.modulus.window);
  cmd_build->add_option("--report", build_args.report, "a passing check-modulus report");
  cmd_build->add_flag("--pointed-sets", build_args.pointed_sets, "closed-form context for pointed finite sets");
  cmd_build->add_option("--max-d", build_args.max_d, "largest d for --pointed-sets (default: all)");

  ContextArgs context_args;
  auto* cmd_context = app.add_subcommand("check-context", "check every entry of an effective context");
  add_common(cmd_context, common);
  cmd_context->add_option("--context", context_args.context)->required();

  CompressArgs compress_args;
  auto* cmd_compress = app.add_subcommand("compress", "compress a representation and verify V iso Y");
  add_common(cmd_compress, common);
  cmd_compress->add_option("--rep", compress_args.rep)->required();
  cmd_compress->add_option("--gens", compress_args.gens, "comma-separated generating degrees")->required();
  cmd_compress->add_option("--context", compress_args.context)->required();

  CompressArgs reconstruct_args;
  auto* cmd_reconstruct = app.add_subcommand("reconstruct", "rebuild Y from the restriction to mu(gens)");
  add_common(cmd_reconstruct, common);
  cmd_reconstruct->add_option("--rep", reconstruct_args.rep, "representation, possibly on mu(gens) only")->required();
  cmd_reconstruct->add_option("--gens", reconstruct_args.gens)->required();
  cmd_reconstruct->add_option("--context", reconstruct_args.context)->required();

  RoundtripArgs roundtrip_args;
  auto* cmd_roundtrip = app.add_subcommand("roundtrip", "full compress / reconstruct / iso pipeline");
  add_common(cmd_roundtrip, common);
  cmd_roundtrip->add_option("--rep", roundtrip_args.rep, "'random' or a representation JSON")->capture_default_str();
  cmd_roundtrip->add_option("--gens", roundtrip_args.gens)->required();
  cmd_roundtrip->add_option("--context", roundtrip_args.context);
  cmd_roundtrip->add_option("--relations", roundtrip_args.relations)->capture_default_str();
  cmd_roundtrip->add_option("--max-dim", roundtrip_args.max_dim)->capture_default_str();
  cmd_roundtrip->add_option("--save-rep", roundtrip_args.save_rep, "also write the representation used");

  CatalogArgs catalog_args;
  auto* cmd_catalog = app.add_subcommand("catalog", "concrete category windows");
  cmd_catalog->require_subcommand(1);
  auto* cmd_gen = cmd_catalog->add_subcommand("gen", "write a catalog window as category JSON");
  cmd_gen->add_option("family", catalog_args.family, "delta, finset_star, fi_sharp, vect_fq, rel")->required();
  cmd_gen->add_option("--max", catalog_args.max)->required();
  cmd_gen->add_option("--q", catalog_args.q)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (*cmd_validate) return run_validate(common, validate_args);
    if (*cmd_leq) return run_leq(common, leq_args);
    if (*cmd_table) return run_table(common, table_args);
    if (*cmd_modulus) return run_check_modulus(common, modulus_args);
    if (*cmd_build) return run_build_context(common, build_args);
    if (*cmd_context) return run_check_context(common, context_args);
    if (*cmd_compress) return run_compress(common, compress_args);
    if (*cmd_reconstruct) return run_reconstruct(common, reconstruct_args);
    if (*cmd_roundtrip) return run_roundtrip(common, roundtrip_args);
    if (*cmd_catalog) return run_catalog(catalog_args);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const SoundnessError& e) {
    std::cerr << "soundness failure: " << e.what() << "\n";
    return kSoundness;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  }
  return kInput;
}
