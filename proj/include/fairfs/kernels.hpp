#pragma once

#include <cstddef>

// Inner-loop primitives on double arrays. Every kernel has a scalar reference
// implementation and, on x86-64 hardware with AVX2+FMA, a vectorized variant.
// The backend is selected once at startup (overridable via force() or the
// FAIRFS_KERNELS=scalar|avx2 environment variable) and stays fixed for the
// process, so repeated calls on identical inputs are bit-identical.

namespace fairfs::kernels {

enum class Backend { scalar, avx2 };

Backend active();
bool available(Backend b);
void force(Backend b); // throws std::invalid_argument if unavailable
const char* backend_name(Backend b);

// y . x
double dot(const double* a, const double* b, size_t n);

// y += alpha * x
void axpy(double alpha, const double* x, double* y, size_t n);

// out = (1 - t) * a + t * b
void lerp(const double* a, const double* b, double t, double* out, size_t n);

// out = (a - b) .* c
void sub_mul(const double* a, const double* b, const double* c, double* out,
             size_t n);

double sum(const double* a, size_t n);
double squared_norm(const double* a, size_t n);

// y = max(x, 0)
void relu(const double* x, double* y, size_t n);

// grad_in = (pre > 0) ? grad_out : 0   (derivative at 0 defined as 0)
void relu_backward(const double* pre, const double* grad_out, double* grad_in,
                   size_t n);

// y = A x for a row-major (rows x cols) matrix.
void matvec(const double* a, size_t rows, size_t cols, const double* x,
            double* y);

// y += A^T x; y has cols entries, x has rows entries.
void matvec_t_accum(const double* a, size_t rows, size_t cols, const double* x,
                    double* y);

// A += alpha * x y^T (rank-1 accumulation).
void ger(double* a, size_t rows, size_t cols, double alpha, const double* x,
         const double* y);

// Adam with bias correction; bc1 = 1 - beta1^t, bc2 = 1 - beta2^t.
void adam_update(double* param, double* m, double* v, const double* grad,
                 size_t n, double lr, double beta1, double beta2, double eps,
                 double bc1, double bc2);

// Reference implementations, always available; the dispatched entry points
// above are equivalence-tested against these.
namespace scalar {
double dot(const double* a, const double* b, size_t n);
void axpy(double alpha, const double* x, double* y, size_t n);
void lerp(const double* a, const double* b, double t, double* out, size_t n);
void sub_mul(const double* a, const double* b, const double* c, double* out,
             size_t n);
double sum(const double* a, size_t n);
double squared_norm(const double* a, size_t n);
void relu(const double* x, double* y, size_t n);
void relu_backward(const double* pre, const double* grad_out, double* grad_in,
                   size_t n);
void matvec(const double* a, size_t rows, size_t cols, const double* x,
            double* y);
void matvec_t_accum(const double* a, size_t rows, size_t cols, const double* x,
                    double* y);
void ger(double* a, size_t rows, size_t cols, double alpha, const double* x,
         const double* y);
void adam_update(double* param, double* m, double* v, const double* grad,
                 size_t n, double lr, double beta1, double beta2, double eps,
                 double bc1, double bc2);
} // namespace scalar

namespace avx2 {
bool compiled_in();
double dot(const double* a, const double* b, size_t n);
void axpy(double alpha, const double* x, double* y, size_t n);
void lerp(const double* a, const double* b, double t, double* out, size_t n);
void sub_mul(const double* a, const double* b, const double* c, double* out,
             size_t n);
double sum(const double* a, size_t n);
double squared_norm(const double* a, size_t n);
void relu(const double* x, double* y, size_t n);
void relu_backward(const double* pre, const double* grad_out, double* grad_in,
                   size_t n);
void matvec(const double* a, size_t rows, size_t cols, const double* x,
            double* y);
void matvec_t_accum(const double* a, size_t rows, size_t cols, const double* x,
                    double* y);
void ger(double* a, size_t rows, size_t cols, double alpha, const double* x,
         const double* y);
void adam_update(double* param, double* m, double* v, const double* grad,
                 size_t n, double lr, double beta1, double beta2, double eps,
                 double bc1, double bc2);
} // namespace avx2

} // namespace fairfs::kernels
