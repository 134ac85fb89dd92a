#pragma once

#include <string>

#include "tensorforge/constructions.hpp"
#include "tensorforge/tensor3.hpp"

namespace tensorforge {

// Canonical wire format, bit-exact on round trip:
//   tensor   {"dims":[a,b,c],"entries":[[i,j,k,"p/q"],...]}
//   matrix   {"dims":[r,c],"entries":[[i,j,"p/q"],...]}
//   subspace {"ambient":[r,c],"basis":[<matrix>...]}
// Entries sorted lexicographically, fractions in lowest terms, no zeros.

std::string serialize(const Tensor3& t);
Tensor3 deserialize_tensor(const std::string& text);

std::string serialize(const MatrixQ& m);
MatrixQ deserialize_matrix(const std::string& text);

std::string serialize(const MatrixSubspace& s);
MatrixSubspace deserialize_subspace(const std::string& text);

}  // namespace tensorforge
