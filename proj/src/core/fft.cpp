#include "nls/core/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <tuple>

#include "nls/core/error.hpp"

namespace nls::fft {

namespace {

enum class Kind { Forward, Backward, R2C, C2R, Dst1 };

struct Plan {
  fftw_plan plan = nullptr;
  std::size_t in_bytes = 0;
  std::size_t out_bytes = 0;
};

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::tuple<Kind, int, bool>, Plan>& cache() {
  static std::map<std::tuple<Kind, int, bool>, Plan> c;
  return c;
}

std::size_t cube(int n) { return std::size_t(n) * n * n; }

Plan make_plan(Kind kind, int n, bool inplace) {
  Plan p;
  switch (kind) {
    case Kind::Forward:
    case Kind::Backward:
      p.in_bytes = p.out_bytes = cube(n) * sizeof(fftw_complex);
      break;
    case Kind::R2C:
      p.in_bytes = cube(n) * sizeof(double);
      p.out_bytes = half_size(n) * sizeof(fftw_complex);
      break;
    case Kind::C2R:
      p.in_bytes = half_size(n) * sizeof(fftw_complex);
      p.out_bytes = cube(n) * sizeof(double);
      break;
    case Kind::Dst1:
      p.in_bytes = p.out_bytes = std::size_t(n) * sizeof(double);
      break;
  }
  void* a = fftw_malloc(std::max(p.in_bytes, p.out_bytes));
  void* b = inplace ? a : fftw_malloc(p.out_bytes);
  const unsigned flags = FFTW_ESTIMATE;
  switch (kind) {
    case Kind::Forward:
      p.plan = fftw_plan_dft_3d(n, n, n, static_cast<fftw_complex*>(a), static_cast<fftw_complex*>(b),
                                FFTW_FORWARD, flags);
      break;
    case Kind::Backward:
      p.plan = fftw_plan_dft_3d(n, n, n, static_cast<fftw_complex*>(a), static_cast<fftw_complex*>(b),
                                FFTW_BACKWARD, flags);
      break;
    case Kind::R2C:
      p.plan = fftw_plan_dft_r2c_3d(n, n, n, static_cast<double*>(a), static_cast<fftw_complex*>(b), flags);
      break;
    case Kind::C2R:
      p.plan = fftw_plan_dft_c2r_3d(n, n, n, static_cast<fftw_complex*>(a), static_cast<double*>(b), flags);
      break;
    case Kind::Dst1:
      p.plan = fftw_plan_r2r_1d(n, static_cast<double*>(a), static_cast<double*>(b), FFTW_RODFT00, flags);
      break;
  }
  if (b != a) fftw_free(b);
  fftw_free(a);
  if (!p.plan) fail(ErrorKind::Domain, "FFTW could not build a plan");
  return p;
}

const Plan& get_plan(Kind kind, int n, bool inplace) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto key = std::make_tuple(kind, n, inplace);
  auto it = cache().find(key);
  if (it == cache().end()) it = cache().emplace(key, make_plan(kind, n, inplace)).first;
  return it->second;
}

bool aligned(const void* p) { return fftw_alignment_of(static_cast<double*>(const_cast<void*>(p))) == 0; }

// Scratch used when a caller's buffer does not match the planning alignment, or
// when the transform would otherwise clobber a const input (c2r).
struct Scratch {
  void* ptr = nullptr;
  std::size_t bytes = 0;
  void* get(std::size_t need) {
    if (need > bytes) {
      if (ptr) fftw_free(ptr);
      ptr = fftw_malloc(need);
      bytes = need;
    }
    return ptr;
  }
  ~Scratch() {
    if (ptr) fftw_free(ptr);
  }
};

thread_local Scratch scratch_in;
thread_local Scratch scratch_out;

template <class Exec>
void run(Kind kind, int n, const void* in, void* out, bool force_copy_in, Exec exec) {
  const bool inplace = (in == out);
  bool ok = aligned(in) && aligned(out) && !force_copy_in;
  if (ok) {
    const Plan& p = get_plan(kind, n, inplace);
    exec(p.plan, const_cast<void*>(in), out);
    return;
  }
  const Plan& p = get_plan(kind, n, false);
  void* a = scratch_in.get(p.in_bytes);
  void* b = scratch_out.get(p.out_bytes);
  std::memcpy(a, in, p.in_bytes);
  exec(p.plan, a, b);
  std::memcpy(out, b, p.out_bytes);
}

}  // namespace

std::size_t half_size(int n) { return std::size_t(n) * n * (n / 2 + 1); }

void forward(int n, const cplx* in, cplx* out) {
  run(Kind::Forward, n, in, out, false, [](fftw_plan p, void* a, void* b) {
    fftw_execute_dft(p, static_cast<fftw_complex*>(a), static_cast<fftw_complex*>(b));
  });
}

void backward(int n, const cplx* in, cplx* out) {
  run(Kind::Backward, n, in, out, false, [](fftw_plan p, void* a, void* b) {
    fftw_execute_dft(p, static_cast<fftw_complex*>(a), static_cast<fftw_complex*>(b));
  });
}

void forward_r2c(int n, const double* in, cplx* out) {
  if (static_cast<const void*>(in) == static_cast<const void*>(out))
    fail(ErrorKind::Domain, "in-place r2c is not supported");
  run(Kind::R2C, n, in, out, false, [](fftw_plan p, void* a, void* b) {
    fftw_execute_dft_r2c(p, static_cast<double*>(a), static_cast<fftw_complex*>(b));
  });
}

void backward_c2r(int n, const cplx* in, double* out) {
  if (static_cast<const void*>(in) == static_cast<const void*>(out))
    fail(ErrorKind::Domain, "in-place c2r is not supported");
  run(Kind::C2R, n, in, out, true, [](fftw_plan p, void* a, void* b) {
    fftw_execute_dft_c2r(p, static_cast<fftw_complex*>(a), static_cast<double*>(b));
  });
}

void dst1(int m, const double* in, double* out) {
  run(Kind::Dst1, m, in, out, false, [](fftw_plan p, void* a, void* b) {
    fftw_execute_r2r(p, static_cast<double*>(a), static_cast<double*>(b));
  });
}

}  // namespace nls::fft
