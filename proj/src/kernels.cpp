#include "tpump/kernels.hpp"

#include <bit>
#include <cmath>
#include <unordered_map>

#include "tpump/errors.hpp"

namespace tpump {

namespace {

constexpr std::size_t kChunks = 64;
// Below this dimension thread start-up costs more than the loop.
constexpr std::uint64_t kParallelMinDim = 256;

inline double parity_sign(std::uint64_t v) { return (std::popcount(v) & 1) ? -1.0 : 1.0; }

// Complex arithmetic is spelled out on (re, im) pairs: std::complex products
// go through the NaN-aware library routine without -ffast-math.
inline const double* re_im(const cplx* p) { return reinterpret_cast<const double*>(p); }

void check_dim(std::size_t got, std::uint64_t want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": vector length " + std::to_string(got) +
                         " does not match dimension " + std::to_string(want));
  }
}

template <class ChunkFn>
cplx chunked_sum(std::uint64_t dim, Exec exec, ChunkFn&& fn) {
  const std::uint64_t chunk = (dim + kChunks - 1) / kChunks;
  std::vector<cplx> partial(kChunks, cplx{});
  const bool par = exec == Exec::parallel && dim >= kParallelMinDim;
#pragma omp parallel for schedule(static) if (par)
  for (std::size_t c = 0; c < kChunks; ++c) {
    const std::uint64_t lo = c * chunk;
    const std::uint64_t hi = std::min<std::uint64_t>(dim, lo + chunk);
    if (lo < hi) partial[c] = fn(lo, hi);
  }
  cplx total{};
  for (const cplx& p : partial) total += p;
  return total;
}

struct TermRow {
  const std::uint64_t* xm;
  const std::uint64_t* zm;
  const double* c;  // effective coefficients, (re, im) pairs
  const double* src;
  std::size_t k_terms;

  void operator()(std::uint64_t t, double* dst) const {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < k_terms; ++k) {
      const std::uint64_t s = t ^ xm[k];
      const double sg = parity_sign(s & zm[k]);
      const double vr = src[2 * s], vi = src[2 * s + 1];
      const double cr = c[2 * k], ci = c[2 * k + 1];
      re += sg * (cr * vr - ci * vi);
      im += sg * (cr * vi + ci * vr);
    }
    dst[2 * t] = re;
    dst[2 * t + 1] = im;
  }
};

struct GroupRow {
  const std::uint64_t* xm;
  const double* d;
  const double* src;
  std::size_t groups;

  void operator()(std::uint64_t t, double* dst) const {
    double re = 0.0, im = 0.0;
    const double* dt = d + 2 * t * groups;
    for (std::size_t g = 0; g < groups; ++g) {
      const std::uint64_t s = t ^ xm[g];
      const double vr = src[2 * s], vi = src[2 * s + 1];
      const double cr = dt[2 * g], ci = dt[2 * g + 1];
      re += cr * vr - ci * vi;
      im += cr * vi + ci * vr;
    }
    dst[2 * t] = re;
    dst[2 * t + 1] = im;
  }
};

template <class Row>
void run_rows(const Row& row, std::uint64_t d, cplx* out, Exec exec) {
  double* dst = reinterpret_cast<double*>(out);
  if (exec == Exec::serial) {
    for (std::uint64_t t = 0; t < d; ++t) row(t, dst);
    return;
  }
  const auto di = static_cast<std::int64_t>(d);
#pragma omp parallel for schedule(static) if (d >= kParallelMinDim)
  for (std::int64_t ti = 0; ti < di; ++ti) row(static_cast<std::uint64_t>(ti), dst);
}

}  // namespace

CompiledSum::CompiledSum(const OperatorSum& op) : n_sites_(op.n_sites()) {
  if (n_sites_ > 62) throw ResourceError("too many sites for a compiled Pauli sum");
  for (const auto& t : op.terms()) {
    x_.push_back(t.string.x_mask());
    z_.push_back(t.string.z_mask());
    phase_.push_back((t.string.phase() * Phase(t.string.y_count())).value());
    coeff_.push_back(t.coeff);
  }
  index_groups();
}

CompiledSum::CompiledSum(std::size_t n_sites, const std::vector<PauliString>& strings) : n_sites_(n_sites) {
  if (n_sites_ > 62) throw ResourceError("too many sites for a compiled Pauli sum");
  for (const auto& s : strings) {
    if (s.size() != n_sites) throw DimensionError("CompiledSum: string length differs from site count");
    x_.push_back(s.x_mask());
    z_.push_back(s.z_mask());
    phase_.push_back((s.phase() * Phase(s.y_count())).value());
    coeff_.push_back(1.0);
  }
  index_groups();
}

void CompiledSum::index_groups() {
  std::unordered_map<std::uint64_t, std::uint32_t> seen;
  group_.clear();
  group_x_.clear();
  for (std::uint64_t x : x_) {
    auto [it, fresh] = seen.try_emplace(x, static_cast<std::uint32_t>(group_x_.size()));
    if (fresh) group_x_.push_back(x);
    group_.push_back(it->second);
  }
}

void CompiledSum::set_coefficients(std::span<const cplx> c) {
  if (c.size() != coeff_.size()) throw DimensionError("CompiledSum: coefficient count mismatch");
  coeff_.assign(c.begin(), c.end());
}

void CompiledSum::apply(std::span<const cplx> in, std::span<cplx> out, Exec exec) const {
  apply(coeff_, in, out, exec);
}

void CompiledSum::apply(std::span<const cplx> coeffs, std::span<const cplx> in, std::span<cplx> out,
                        Exec exec) const {
  const std::uint64_t d = dim();
  check_dim(in.size(), d, "CompiledSum::apply input");
  check_dim(out.size(), d, "CompiledSum::apply output");
  if (coeffs.size() != x_.size()) throw DimensionError("CompiledSum: coefficient count mismatch");
  if (in.data() == out.data()) throw ContractError("CompiledSum::apply cannot work in place");

  std::vector<cplx> eff(x_.size());
  for (std::size_t k = 0; k < x_.size(); ++k) eff[k] = coeffs[k] * phase_[k];
  run_rows(TermRow{x_.data(), z_.data(), re_im(eff.data()), re_im(in.data()), x_.size()}, d, out.data(), exec);
}

BoundSum CompiledSum::bind(std::span<const cplx> coeffs, Exec exec) const {
  if (coeffs.size() != x_.size()) throw DimensionError("CompiledSum: coefficient count mismatch");
  const std::uint64_t d = dim();
  const std::size_t G = group_x_.size();
  BoundSum b;
  b.dim_ = d;
  b.x_ = group_x_;
  b.d_.assign(d * G, cplx{});
  std::vector<cplx> eff(x_.size());
  for (std::size_t k = 0; k < x_.size(); ++k) eff[k] = coeffs[k] * phase_[k];
  const double* c = re_im(eff.data());
  double* dd = reinterpret_cast<double*>(b.d_.data());
  const auto di = static_cast<std::int64_t>(d);
  const bool par = exec == Exec::parallel && d >= kParallelMinDim;
#pragma omp parallel for schedule(static) if (par)
  for (std::int64_t ti = 0; ti < di; ++ti) {
    const auto t = static_cast<std::uint64_t>(ti);
    double* row = dd + 2 * t * G;
    for (std::size_t k = 0; k < x_.size(); ++k) {
      const double sg = parity_sign((t ^ x_[k]) & z_[k]);
      row[2 * group_[k]] += sg * c[2 * k];
      row[2 * group_[k] + 1] += sg * c[2 * k + 1];
    }
  }
  return b;
}

void BoundSum::apply(std::span<const cplx> in, std::span<cplx> out, Exec exec) const {
  check_dim(in.size(), dim_, "BoundSum::apply input");
  check_dim(out.size(), dim_, "BoundSum::apply output");
  if (in.data() == out.data()) throw ContractError("BoundSum::apply cannot work in place");
  run_rows(GroupRow{x_.data(), re_im(d_.data()), re_im(in.data()), x_.size()}, dim_, out.data(), exec);
}

std::vector<cplx> CompiledSum::string_expectations(std::span<const cplx> psi, Exec exec) const {
  const std::uint64_t d = dim();
  check_dim(psi.size(), d, "CompiledSum::string_expectations");
  std::vector<cplx> out(x_.size());
  const double* p = re_im(psi.data());
  for (std::size_t k = 0; k < x_.size(); ++k) {
    const std::uint64_t xm = x_[k], zm = z_[k];
    const cplx sum = chunked_sum(d, exec, [=](std::uint64_t lo, std::uint64_t hi) {
      double re = 0.0, im = 0.0;
      for (std::uint64_t t = lo; t < hi; ++t) {
        const std::uint64_t s = t ^ xm;
        const double sg = parity_sign(s & zm);
        // conj(p[t]) * p[s]
        re += sg * (p[2 * t] * p[2 * s] + p[2 * t + 1] * p[2 * s + 1]);
        im += sg * (p[2 * t] * p[2 * s + 1] - p[2 * t + 1] * p[2 * s]);
      }
      return cplx(re, im);
    });
    out[k] = phase_[k] * sum;
  }
  return out;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b, Exec exec) {
  if (a.size() != b.size()) throw DimensionError("inner product of vectors with different lengths");
  const double* pa = re_im(a.data());
  const double* pb = re_im(b.data());
  return chunked_sum(a.size(), exec, [=](std::uint64_t lo, std::uint64_t hi) {
    double re = 0.0, im = 0.0;
    for (std::uint64_t i = lo; i < hi; ++i) {
      re += pa[2 * i] * pb[2 * i] + pa[2 * i + 1] * pb[2 * i + 1];
      im += pa[2 * i] * pb[2 * i + 1] - pa[2 * i + 1] * pb[2 * i];
    }
    return cplx(re, im);
  });
}

double norm(std::span<const cplx> a, Exec exec) { return std::sqrt(inner(a, a, exec).real()); }

}  // namespace tpump
