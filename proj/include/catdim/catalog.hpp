#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "catdim/category.hpp"
#include "catdim/preorder.hpp"

namespace catdim::catalog {

// Family tags stored in Category::family().
inline constexpr const char* kDelta = "delta";
inline constexpr const char* kFinSetStar = "finset_star";
inline constexpr const char* kFiSharp = "fi_sharp";
inline constexpr const char* kVectFq = "vect_fq";
inline constexpr const char* kRel = "rel";

/// Simplex category window: objects 1..max (label "n" is the chain
/// {1,...,n}), arrows all weakly monotone maps. Arrow labels list the images
/// of 1..m, e.g. "[1,1,2]".
Category gen_delta(int max);

/// Pointed finite sets 0_*..max_*. An arrow m_* -> n_* is labelled by the
/// images of 1..m with 0 standing for the basepoint, e.g. "[2,0]".
Category gen_finset_star(int max);

/// The subcategory of gen_finset_star(max) of maps injective away from the
/// basepoint. Labels agree with gen_finset_star.
Category gen_fi_sharp(int max);

/// Skeleton of F_q vector spaces: objects 0..max, arrows m -> n all n x m
/// matrices over F_q (q prime), labelled row-major "[[a,b],[c,d]]".
Category gen_vect_fq(std::uint32_t q, int max);

/// Finite sets 0..max with relations (m x n boolean matrices). Hom-sets grow
/// as 2^(mn); only tiny windows are practical.
Category gen_rel(int max);

/// Dispatch by family name ("delta", "finset_star", "fi_sharp", "vect_fq", "rel").
Category generate(const std::string& family, int max, std::uint32_t q = 2);

/// Formats values as a function-style label "[v1,...,vm]".
std::string function_label(const std::vector<int>& values);

/// Parses a function-style label "[v1,...,vm]".
std::vector<int> label_values(const std::string& label);

/// Size of a FinSet_* / FI# object from its label "n_*".
int pointed_size(const std::string& label);

/// The signed family certifying n+2 <=_n n+1 in the simplex category:
/// H = endomorphisms h of n+2 with i <= h(i) <= i+1, and
/// rho(h) = prod_i (-1)^(h(i) - i).
struct DeltaWitness {
  int n = 0;
  ObjectId source = 0;  // object n
  ObjectId big = 0;     // object n+2
  ObjectId small = 0;   // object n+1
  std::vector<ArrowId> h;
  std::vector<int> rho;
  ArrowId identity = 0;
  // involution_ok: rho(iota_k h) == -rho(h) and iota_k h in H for all h, k.
  bool involution_ok = false;
  // sum_h rho(h) M_h == 0 over Z.
  bool signed_sum_vanishes = false;
  // every h != 1 factors through n+1.
  bool factors_through_smaller = false;
  PreorderCertificate certificate;
};

/// Requires objects n, n+1, n+2 in a gen_delta window. The certificate is
/// rechecked before return (SoundnessError otherwise).
DeltaWitness delta_witness(const Category& delta, int n);

}  // namespace catdim::catalog
