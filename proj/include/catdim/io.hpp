#pragma once

#include <string>

#include <json.hpp>

#include "catdim/category.hpp"
#include "catdim/modulus.hpp"
#include "catdim/preorder.hpp"
#include "catdim/reconstruction.hpp"
#include "catdim/representation.hpp"

/// JSON forms of every artifact. Objects are referenced by label, arrows by
/// id, and scalars are written as strings ("a/b", or decimal integers).
/// Readers throw InputError naming the first offending path, e.g.
/// "arrows[3].src: unknown object 'q'".
namespace catdim::io {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::string& path);
Json parse_json(const std::string& text, const std::string& origin);

std::string scalar_str(const Scalar& s);
Scalar parse_scalar(const Json& j, const RingSpec& ring, const std::string& path);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols, const RingSpec& ring,
                        const std::string& path);

/// {family?, objects, arrows: [{id, src, tgt, label}], identities: {label: id},
///  compose: [[f, g, h], ...]} where h = g o f.
Json category_to_json(const Category& c);
Category category_from_json(const Json& j);

Json validation_to_json(const ValidationReport& r);

/// {ring, dims: {label: n}, mats: {"<arrow id>": rows}}. Identity matrices
/// may be omitted on input.
Json representation_to_json(const Representation& v);
Representation representation_from_json(const Json& j, const Category& c);

/// {d, x, y, ring, coeffs: [[arrow_id, scalar]], seed?}
Json certificate_to_json(const Category& c, const PreorderCertificate& cert);
PreorderCertificate certificate_from_json(const Json& j, const Category& c);

/// {label: [labels]}; labels missing from the window are kept as outside.
Json modulus_to_json(const Category& c, const ModulusCandidate& mu);
ModulusCandidate modulus_from_json(const Json& j, const Category& c);

Json report_to_json(const Category& c, const ModulusReport& report);
/// Rebuilds a report (certificates included) from report_to_json output.
ModulusReport report_from_json(const Json& j, const Category& c);

/// {ring, mu, entries: [{d, x, kappa, m: [labels], alpha: [{id: scalar}],
///  beta: [{id: scalar}]}]}
Json context_to_json(const Category& c, const EffectiveContext& ctx);
EffectiveContext context_from_json(const Json& j, const Category& c);

/// {gens, ring, context, ranks: {label: r}, y: {"<arrow id>": rows},
///  a_v, b_v: {label: rows}, phi?: {label: rows}}
Json compressed_to_json(const Category& c, const CompressedRep& rep, const std::string& context_ref,
                        const IsoResult* iso = nullptr);

}  // namespace catdim::io
