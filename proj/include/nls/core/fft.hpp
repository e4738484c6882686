#pragma once

#include "nls/core/aligned.hpp"

// Thin FFTW layer. Plans are built once per size with FFTW_ESTIMATE (deterministic),
// cached behind a mutex, and executed through the new-array interface, which is
// thread-safe. Buffers that do not match the planning alignment go through scratch.
namespace nls::fft {

// Unnormalized 3D complex transforms on n³ arrays with x fastest. in == out is allowed.
void forward(int n, const cplx* in, cplx* out);
void backward(int n, const cplx* in, cplx* out);

// Real transforms on n³ real arrays; the half spectrum has n·n·(n/2+1) entries,
// x (the fastest axis) is the halved one.
std::size_t half_size(int n);
void forward_r2c(int n, const double* in, cplx* out);
void backward_c2r(int n, const cplx* in, double* out);

// Unnormalized DST-I of length m (FFTW RODFT00); applying it twice scales by 2(m+1).
void dst1(int m, const double* in, double* out);

}  // namespace nls::fft
