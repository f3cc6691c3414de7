// Shared scalar types, error conventions and small utilities.
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

namespace hitlab {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix2cd;

// Global numeric tolerances. Identities and verification residuals are held
// to TOL_ID; contraction order-independence is relative; spectral cutoffs
// below TOL_EIG are treated as exact zeros.
inline constexpr double TOL_ID = 1e-9;
inline constexpr double TOL_REL = 1e-10;
inline constexpr double TOL_EIG = 1e-12;

// Raised on malformed inputs or violated preconditions; the CLI maps it to
// exit code 2 with a machine-readable error object.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

// splitmix64: decorrelates per-task seeds derived from one user seed.
inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t task_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t s = base + 0x632be59bd9b4e019ULL * (index + 1);
  return splitmix64(s);
}

// Caps OpenMP parallelism; reads HITLAB_THREADS when threads <= 0.
void set_thread_cap(int threads);

}  // namespace hitlab
