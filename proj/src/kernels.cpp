#include "fairfs/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace fairfs::kernels {

namespace scalar {

double dot(const double* a, const double* b, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy(double alpha, const double* x, double* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void lerp(const double* a, const double* b, double t, double* out, size_t n) {
    const double s = 1.0 - t;
    for (size_t i = 0; i < n; ++i) out[i] = s * a[i] + t * b[i];
}

void sub_mul(const double* a, const double* b, const double* c, double* out,
             size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = (a[i] - b[i]) * c[i];
}

double sum(const double* a, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

double squared_norm(const double* a, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += a[i] * a[i];
    return acc;
}

void relu(const double* x, double* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward(const double* pre, const double* grad_out, double* grad_in,
                   size_t n) {
    for (size_t i = 0; i < n; ++i) grad_in[i] = pre[i] > 0.0 ? grad_out[i] : 0.0;
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
    for (size_t i = 0; i < n; ++i) {
        const double g = grad[i];
        m[i] = beta1 * m[i] + (1.0 - beta1) * g;
        v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        param[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

} // namespace scalar

namespace {

struct Ops {
    double (*dot)(const double*, const double*, size_t);
    void (*axpy)(double, const double*, double*, size_t);
    void (*lerp)(const double*, const double*, double, double*, size_t);
    void (*sub_mul)(const double*, const double*, const double*, double*,
                    size_t);
    double (*sum)(const double*, size_t);
    double (*squared_norm)(const double*, size_t);
    void (*relu)(const double*, double*, size_t);
    void (*relu_backward)(const double*, const double*, double*, size_t);
    void (*matvec)(const double*, size_t, size_t, const double*, double*);
    void (*matvec_t_accum)(const double*, size_t, size_t, const double*,
                           double*);
    void (*ger)(double*, size_t, size_t, double, const double*, const double*);
    void (*adam_update)(double*, double*, double*, const double*, size_t,
                        double, double, double, double, double, double);
};

constexpr Ops kScalarOps = {
    scalar::dot,          scalar::axpy,    scalar::lerp,
    scalar::sub_mul,      scalar::sum,     scalar::squared_norm,
    scalar::relu,         scalar::relu_backward,
    scalar::matvec,       scalar::matvec_t_accum,
    scalar::ger,          scalar::adam_update,
};

constexpr Ops kAvx2Ops = {
    avx2::dot,          avx2::axpy,    avx2::lerp,
    avx2::sub_mul,      avx2::sum,     avx2::squared_norm,
    avx2::relu,         avx2::relu_backward,
    avx2::matvec,       avx2::matvec_t_accum,
    avx2::ger,          avx2::adam_update,
};

bool avx2_usable() {
    if (!avx2::compiled_in()) return false;
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend detect_backend() {
    if (const char* env = std::getenv("FAIRFS_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && avx2_usable()) return Backend::avx2;
    }
    return avx2_usable() ? Backend::avx2 : Backend::scalar;
}

struct Dispatch {
    Backend backend;
    const Ops* ops;
    Dispatch() : backend(detect_backend()),
                 ops(backend == Backend::avx2 ? &kAvx2Ops : &kScalarOps) {}
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

} // namespace

Backend active() { return dispatch().backend; }

bool available(Backend b) {
    return b == Backend::scalar || avx2_usable();
}

void force(Backend b) {
    if (!available(b)) {
        throw std::invalid_argument("kernel backend not available on this host");
    }
    dispatch().backend = b;
    dispatch().ops = b == Backend::avx2 ? &kAvx2Ops : &kScalarOps;
}

const char* backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

double dot(const double* a, const double* b, size_t n) {
    return dispatch().ops->dot(a, b, n);
}
void axpy(double alpha, const double* x, double* y, size_t n) {
    dispatch().ops->axpy(alpha, x, y, n);
}
void lerp(const double* a, const double* b, double t, double* out, size_t n) {
    dispatch().ops->lerp(a, b, t, out, n);
}
void sub_mul(const double* a, const double* b, const double* c, double* out,
             size_t n) {
    dispatch().ops->sub_mul(a, b, c, out, n);
}
double sum(const double* a, size_t n) { return dispatch().ops->sum(a, n); }
double squared_norm(const double* a, size_t n) {
    return dispatch().ops->squared_norm(a, n);
}
void relu(const double* x, double* y, size_t n) {
    dispatch().ops->relu(x, y, n);
}
void relu_backward(const double* pre, const double* grad_out, double* grad_in,
                   size_t n) {
    dispatch().ops->relu_backward(pre, grad_out, grad_in, n);
}
void matvec(const double* a, size_t rows, size_t cols, const double* x,
            double* y) {
    dispatch().ops->matvec(a, rows, cols, x, y);
}
void matvec_t_accum(const double* a, size_t rows, size_t cols, const double* x,
                    double* y) {
    dispatch().ops->matvec_t_accum(a, rows, cols, x, y);
}
void ger(double* a, size_t rows, size_t cols, double alpha, const double* x,
         const double* y) {
    dispatch().ops->ger(a, rows, cols, alpha, x, y);
}
void adam_update(double* param, double* m, double* v, const double* grad,
                 size_t n, double lr, double beta1, double beta2, double eps,
                 double bc1, double bc2) {
    dispatch().ops->adam_update(param, m, v, grad, n, lr, beta1, beta2, eps,
                                bc1, bc2);
}

} // namespace fairfs::kernels
