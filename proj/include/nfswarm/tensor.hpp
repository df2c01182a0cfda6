// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nfswarm/types.hpp"

#include <vector>

namespace nfswarm {

// Dense order-3 complex tensor, mode-1 index fastest:
//   linear index of (i, j, k) = i + ni*j + ni*nj*k.
// With this layout vec(v o u o b) = kron(b, u, v), where "o" is the outer
// product; everything downstream relies on that single convention.
struct Tensor3 {
  int ni = 0, nj = 0, nk = 0;
  CVec data;

  Tensor3() = default;
  Tensor3(int i, int j, int k);

  cxd& operator()(int i, int j, int k) { return data[i + ni * (j + nj * k)]; }
  cxd operator()(int i, int j, int k) const { return data[i + ni * (j + nj * k)]; }

  long size() const { return static_cast<long>(ni) * nj * nk; }
  double fro_norm() const { return data.norm(); }
};

CVec vec(const Tensor3& t);
Tensor3 devec(const CVec& x, int ni, int nj, int nk);

// Contracts one mode with a vector; w is conjugated when conjugate is set
// (Hermitian correlation). Result keeps the two remaining modes in order, e.g.
// mode 1: out(j,k) = sum_i t(i,j,k) * w_i.
CMat mode_product(const Tensor3& t, const CVec& w, int mode, bool conjugate);

// Full contraction t x1 v x2 u x3 b (each vector conjugated when the flag is
// set); equals kron(b,u,v)^H vec(t) in the conjugated case.
cxd contract3(const Tensor3& t, const CVec& v, const CVec& u, const CVec& b,
              bool conjugate);

Tensor3 outer3(const CVec& v, const CVec& u, const CVec& b);

CVec kron(const CVec& a, const CVec& b);
CVec kron(const std::vector<CVec>& factors);

}  // namespace nfswarm
