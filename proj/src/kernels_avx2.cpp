// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma on x86-64; callers must check compiled_in() plus runtime CPU
// support before dispatching here.

#include "fairfs/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)
#define FAIRFS_AVX2_BUILD 1
#include <immintrin.h>
#else
#define FAIRFS_AVX2_BUILD 0
#endif

#include <cmath>

namespace fairfs::kernels::avx2 {

#if FAIRFS_AVX2_BUILD

bool compiled_in() { return true; }

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

} // namespace

double dot(const double* a, const double* b, size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                               acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                               _mm256_loadu_pd(b + i + 4), acc1);
    }
    acc0 = _mm256_add_pd(acc0, acc1);
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                               acc0);
    }
    double total = hsum(acc0);
    for (; i < n; ++i) total += a[i] * b[i];
    return total;
}

void axpy(double alpha, const double* x, double* y, size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r =
            _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, r);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void lerp(const double* a, const double* b, double t, double* out, size_t n) {
    const double s = 1.0 - t;
    const __m256d vs = _mm256_set1_pd(s);
    const __m256d vt = _mm256_set1_pd(t);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_fmadd_pd(
            vs, _mm256_loadu_pd(a + i),
            _mm256_mul_pd(vt, _mm256_loadu_pd(b + i)));
        _mm256_storeu_pd(out + i, r);
    }
    for (; i < n; ++i) out[i] = s * a[i] + t * b[i];
}

void sub_mul(const double* a, const double* b, const double* c, double* out,
             size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d =
            _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(d, _mm256_loadu_pd(c + i)));
    }
    for (; i < n; ++i) out[i] = (a[i] - b[i]) * c[i];
}

double sum(const double* a, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double total = hsum(acc);
    for (; i < n; ++i) total += a[i];
    return total;
}

double squared_norm(const double* a, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(a + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) total += a[i] * a[i];
    return total;
}

void relu(const double* x, double* y, size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_max_pd(_mm256_loadu_pd(x + i), zero));
    }
    for (; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward(const double* pre, const double* grad_out, double* grad_in,
                   size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(pre + i), zero,
                                           _CMP_GT_OQ);
        _mm256_storeu_pd(grad_in + i,
                         _mm256_and_pd(mask, _mm256_loadu_pd(grad_out + i)));
    }
    for (; i < n; ++i) grad_in[i] = pre[i] > 0.0 ? grad_out[i] : 0.0;
}

void matvec(const double* a, size_t rows, size_t cols, const double* x,
            double* y) {
    for (size_t r = 0; r < rows; ++r) y[r] = dot(a + r * cols, x, cols);
}

void matvec_t_accum(const double* a, size_t rows, size_t cols, const double* x,
                    double* y) {
    for (size_t r = 0; r < rows; ++r) axpy(x[r], a + r * cols, y, cols);
}

void ger(double* a, size_t rows, size_t cols, double alpha, const double* x,
         const double* y) {
    for (size_t r = 0; r < rows; ++r) axpy(alpha * x[r], y, a + r * cols, cols);
}

void adam_update(double* param, double* m, double* v, const double* grad,
                 size_t n, double lr, double beta1, double beta2, double eps,
                 double bc1, double bc2) {
    const __m256d vb1 = _mm256_set1_pd(beta1);
    const __m256d vb2 = _mm256_set1_pd(beta2);
    const __m256d vc1 = _mm256_set1_pd(1.0 - beta1);
    const __m256d vc2 = _mm256_set1_pd(1.0 - beta2);
    const __m256d vbc1 = _mm256_set1_pd(bc1);
    const __m256d vbc2 = _mm256_set1_pd(bc2);
    const __m256d vlr = _mm256_set1_pd(lr);
    const __m256d veps = _mm256_set1_pd(eps);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d g = _mm256_loadu_pd(grad + i);
        const __m256d mi = _mm256_add_pd(
            _mm256_mul_pd(vb1, _mm256_loadu_pd(m + i)), _mm256_mul_pd(vc1, g));
        const __m256d vi = _mm256_add_pd(
            _mm256_mul_pd(vb2, _mm256_loadu_pd(v + i)),
            _mm256_mul_pd(vc2, _mm256_mul_pd(g, g)));
        _mm256_storeu_pd(m + i, mi);
        _mm256_storeu_pd(v + i, vi);
        const __m256d mhat = _mm256_div_pd(mi, vbc1);
        const __m256d vhat = _mm256_div_pd(vi, vbc2);
        const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), veps);
        const __m256d step = _mm256_div_pd(_mm256_mul_pd(vlr, mhat), denom);
        _mm256_storeu_pd(param + i,
                         _mm256_sub_pd(_mm256_loadu_pd(param + i), step));
    }
    for (; i < n; ++i) {
        const double g = grad[i];
        m[i] = beta1 * m[i] + (1.0 - beta1) * g;
        v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
        param[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
    }
}

#else // !FAIRFS_AVX2_BUILD

bool compiled_in() { return false; }

// Stubs keep the dispatch table well-formed on targets without AVX2; they are
// never selected because compiled_in() returns false.
double dot(const double* a, const double* b, size_t n) {
    return scalar::dot(a, b, n);
}
void axpy(double alpha, const double* x, double* y, size_t n) {
    scalar::axpy(alpha, x, y, n);
}
void lerp(const double* a, const double* b, double t, double* out, size_t n) {
    scalar::lerp(a, b, t, out, n);
}
void sub_mul(const double* a, const double* b, const double* c, double* out,
             size_t n) {
    scalar::sub_mul(a, b, c, out, n);
}
double sum(const double* a, size_t n) { return scalar::sum(a, n); }
double squared_norm(const double* a, size_t n) {
    return scalar::squared_norm(a, n);
}
void relu(const double* x, double* y, size_t n) { scalar::relu(x, y, n); }
void relu_backward(const double* pre, const double* grad_out, double* grad_in,
                   size_t n) {
    scalar::relu_backward(pre, grad_out, grad_in, n);
}
void matvec(const double* a, size_t rows, size_t cols, const double* x,
            double* y) {
    scalar::matvec(a, rows, cols, x, y);
}
void matvec_t_accum(const double* a, size_t rows, size_t cols, const double* x,
                    double* y) {
    scalar::matvec_t_accum(a, rows, cols, x, y);
}
void ger(double* a, size_t rows, size_t cols, double alpha, const double* x,
         const double* y) {
    scalar::ger(a, rows, cols, alpha, x, y);
}
void adam_update(double* param, double* m, double* v, const double* grad,
                 size_t n, double lr, double beta1, double beta2, double eps,
                 double bc1, double bc2) {
    scalar::adam_update(param, m, v, grad, n, lr, beta1, beta2, eps, bc1, bc2);
}

#endif

} // namespace fairfs::kernels::avx2
