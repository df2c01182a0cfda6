// SPDX-License-Identifier: Apache-2.0

#include "nfswarm/tensor.hpp"

#include <stdexcept>

namespace nfswarm {

Tensor3::Tensor3(int i, int j, int k) : ni(i), nj(j), nk(k) {
  if (i <= 0 || j <= 0 || k <= 0)
    throw std::invalid_argument("Tensor3: dimensions must be positive");
  data = CVec::Zero(static_cast<long>(i) * j * k);
}

CVec vec(const Tensor3& t) { return t.data; }

Tensor3 devec(const CVec& x, int ni, int nj, int nk) {
  Tensor3 t(ni, nj, nk);
  if (x.size() != t.size())
    throw std::invalid_argument("devec: length does not match dimensions");
  t.data = x;
  return t;
}

CMat mode_product(const Tensor3& t, const CVec& w, int mode, bool conjugate) {
  const CVec wc = conjugate ? w.conjugate() : w;
  switch (mode) {
    case 1: {
      if (w.size() != t.ni) throw std::invalid_argument("mode_product: mode-1 length mismatch");
      // unfold as ni x (nj*nk), contract the rows
      Eigen::Map<const CMat> unf(t.data.data(), t.ni, static_cast<long>(t.nj) * t.nk);
      CVec row = unf.transpose() * wc;
      return Eigen::Map<const CMat>(row.data(), t.nj, t.nk);
    }
    case 2: {
      if (w.size() != t.nj) throw std::invalid_argument("mode_product: mode-2 length mismatch");
      CMat out(t.ni, t.nk);
      for (int k = 0; k < t.nk; ++k) {
        Eigen::Map<const CMat> slab(t.data.data() + static_cast<long>(t.ni) * t.nj * k,
                                    t.ni, t.nj);
        out.col(k) = slab * wc;
      }
      return out;
    }
    case 3: {
      if (w.size() != t.nk) throw std::invalid_argument("mode_product: mode-3 length mismatch");
      Eigen::Map<const CMat> unf(t.data.data(), static_cast<long>(t.ni) * t.nj, t.nk);
      CVec flat = unf * wc;
      return Eigen::Map<const CMat>(flat.data(), t.ni, t.nj);
    }
    default:
      throw std::invalid_argument("mode_product: mode must be 1, 2 or 3");
  }
}

cxd contract3(const Tensor3& t, const CVec& v, const CVec& u, const CVec& b,
              bool conjugate) {
  CMat m1 = mode_product(t, v, 1, conjugate);  // nj x nk
  const CVec uc = conjugate ? u.conjugate() : u;
  const CVec bc = conjugate ? b.conjugate() : b;
  if (uc.size() != m1.rows() || bc.size() != m1.cols())
    throw std::invalid_argument("contract3: factor length mismatch");
  return (uc.array() * (m1 * bc).array()).sum();
}

Tensor3 outer3(const CVec& v, const CVec& u, const CVec& b) {
  if (v.size() == 0 || u.size() == 0 || b.size() == 0)
    throw std::invalid_argument("outer3: factors must be nonempty");
  Tensor3 t(static_cast<int>(v.size()), static_cast<int>(u.size()),
            static_cast<int>(b.size()));
  long idx = 0;
  for (int k = 0; k < t.nk; ++k)
    for (int j = 0; j < t.nj; ++j)
      for (int i = 0; i < t.ni; ++i) t.data[idx++] = v[i] * u[j] * b[k];
  return t;
}

CVec kron(const CVec& a, const CVec& b) {
  CVec out(a.size() * b.size());
  long idx = 0;
  for (long i = 0; i < a.size(); ++i)
    for (long j = 0; j < b.size(); ++j) out[idx++] = a[i] * b[j];
  return out;
}

CVec kron(const std::vector<CVec>& factors) {
  if (factors.empty()) throw std::invalid_argument("kron: empty factor list");
  CVec acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = kron(acc, factors[i]);
  return acc;
}

}  // namespace nfswarm
