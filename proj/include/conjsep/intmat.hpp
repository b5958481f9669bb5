// intmat.hpp -- exact integer matrix arithmetic: Hermite and Smith normal
// forms with explicit transformation matrices, plus lattice membership with
// reconstructible witnesses and residue separators.
//
// Row convention throughout: a lattice is the set of integer row
// combinations of the rows of its basis matrix.
#pragma once

#include <optional>
#include <vector>

namespace conjsep {

using IVec = std::vector<long long>;
using IMat = std::vector<IVec>;

IMat imat_identity(int n);
IMat imat_mul(const IMat& a, const IMat& b);
IVec ivec_mul(const IVec& v, const IMat& m);
bool imat_is_identity(const IMat& m);
bool imat_is_zero(const IMat& m);
long long imat_det(const IMat& m);  // small sizes, fraction-free

// U * A = H with U unimodular, H in row Hermite normal form (pivots
// positive, entries below pivots zero, entries above reduced).
struct HnfResult {
  IMat h;
  IMat u;
  std::vector<int> pivot_cols;  // one per nonzero row of h
};
HnfResult hermite_normal_form(const IMat& a);

// U * A * V = D, D diagonal (padded with zeros), U, V unimodular.
struct SmithResult {
  IMat d, u, v;
};
SmithResult smith_normal_form(const IMat& a);

// Coefficients c with c * rows == v, or nullopt.
std::optional<IVec> lattice_solve(const IMat& rows, const IVec& v);

// Witness that v is not in the row lattice: w * r == 0 (mod modulus) for
// every basis row r while w * v != 0 (mod modulus).
struct LatticeSeparator {
  IVec w;
  long long modulus = 0;
};
std::optional<LatticeSeparator> lattice_separator(const IMat& rows, const IVec& v);
bool verify_lattice_separator(const LatticeSeparator& s, const IMat& rows, const IVec& v);

}  // namespace conjsep
