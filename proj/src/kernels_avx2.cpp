// SPDX-License-Identifier: Apache-2.0
// AVX2+FMA kernel variants. Compiled with -mavx2 -mfma on x86 only; callers
// must gate on cpu_has_avx2(). Each function falls back to the scalar
// reference for layouts a 256-bit lane cannot cover (pair stride 1, masks
// touching bit 0, tiny states).
#include "daqsim/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <bit>

namespace daqsim::kernels {

namespace {

// (x0,y0,x1,y1) * (cr + i*ci) for two packed complex doubles.
inline __m256d cmul_const(__m256d v, __m256d cr, __m256d ci) {
    __m256d vswap = _mm256_permute_pd(v, 0b0101);
    return _mm256_fmaddsub_pd(v, cr, _mm256_mul_pd(vswap, ci));
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void apply_matrix2_avx2(cd *amps, std::size_t size, int bitpos, const cd *m) {
    const std::size_t stride = std::size_t(1) << bitpos;
    if (bitpos == 0 || size < 4) {
        scalar_ops().apply_matrix2(amps, size, bitpos, m);
        return;
    }
    const __m256d m00r = _mm256_set1_pd(m[0].real()), m00i = _mm256_set1_pd(m[0].imag());
    const __m256d m01r = _mm256_set1_pd(m[1].real()), m01i = _mm256_set1_pd(m[1].imag());
    const __m256d m10r = _mm256_set1_pd(m[2].real()), m10i = _mm256_set1_pd(m[2].imag());
    const __m256d m11r = _mm256_set1_pd(m[3].real()), m11i = _mm256_set1_pd(m[3].imag());
    auto *p = reinterpret_cast<double *>(amps);
    for (std::size_t base = 0; base < size; base += 2 * stride) {
        for (std::size_t off = 0; off < stride; off += 2) {
            double *pa = p + 2 * (base + off);
            double *pb = p + 2 * (base + off + stride);
            const __m256d a = _mm256_loadu_pd(pa);
            const __m256d b = _mm256_loadu_pd(pb);
            const __m256d na = _mm256_add_pd(cmul_const(a, m00r, m00i), cmul_const(b, m01r, m01i));
            const __m256d nb = _mm256_add_pd(cmul_const(a, m10r, m10i), cmul_const(b, m11r, m11i));
            _mm256_storeu_pd(pa, na);
            _mm256_storeu_pd(pb, nb);
        }
    }
}

void apply_controlled_matrix2_avx2(cd *amps, std::size_t size, int control_bitpos,
                                   int target_bitpos, const cd *m) {
    const std::size_t cbit = std::size_t(1) << control_bitpos;
    const std::size_t stride = std::size_t(1) << target_bitpos;
    if (target_bitpos == 0 || control_bitpos == 0 || size < 4) {
        scalar_ops().apply_controlled_matrix2(amps, size, control_bitpos, target_bitpos, m);
        return;
    }
    const __m256d m00r = _mm256_set1_pd(m[0].real()), m00i = _mm256_set1_pd(m[0].imag());
    const __m256d m01r = _mm256_set1_pd(m[1].real()), m01i = _mm256_set1_pd(m[1].imag());
    const __m256d m10r = _mm256_set1_pd(m[2].real()), m10i = _mm256_set1_pd(m[2].imag());
    const __m256d m11r = _mm256_set1_pd(m[3].real()), m11i = _mm256_set1_pd(m[3].imag());
    auto *p = reinterpret_cast<double *>(amps);
    for (std::size_t base = 0; base < size; base += 2 * stride) {
        for (std::size_t off = 0; off < stride; off += 2) {
            const std::size_t i0 = base + off;
            if (!(i0 & cbit))
                continue; // control bit >= 1, so it is constant over the pair
            double *pa = p + 2 * i0;
            double *pb = p + 2 * (i0 + stride);
            const __m256d a = _mm256_loadu_pd(pa);
            const __m256d b = _mm256_loadu_pd(pb);
            const __m256d na = _mm256_add_pd(cmul_const(a, m00r, m00i), cmul_const(b, m01r, m01i));
            const __m256d nb = _mm256_add_pd(cmul_const(a, m10r, m10i), cmul_const(b, m11r, m11i));
            _mm256_storeu_pd(pa, na);
            _mm256_storeu_pd(pb, nb);
        }
    }
}

void apply_masked_phase_avx2(cd *amps, std::size_t size, std::uint64_t mask, cd phase) {
    if ((mask & 1) || size < 4) {
        scalar_ops().apply_masked_phase(amps, size, mask, phase);
        return;
    }
    const __m256d pr = _mm256_set1_pd(phase.real());
    const __m256d pi = _mm256_set1_pd(phase.imag());
    auto *p = reinterpret_cast<double *>(amps);
    for (std::size_t i = 0; i < size; i += 2) {
        if ((i & mask) != mask)
            continue;
        _mm256_storeu_pd(p + 2 * i, cmul_const(_mm256_loadu_pd(p + 2 * i), pr, pi));
    }
}

void accumulate_pauli_avx2(cd *dst, const cd *src, std::size_t size, cd g, std::uint64_t x_mask,
                           std::uint64_t y_mask, std::uint64_t z_mask) {
    const std::uint64_t flip = x_mask | y_mask;
    const std::uint64_t signs = y_mask | z_mask;
    if ((flip & 1) || (signs & 1) || size < 4) {
        scalar_ops().accumulate_pauli(dst, src, size, g, x_mask, y_mask, z_mask);
        return;
    }
    const __m256d gr = _mm256_set1_pd(g.real()), gi = _mm256_set1_pd(g.imag());
    const __m256d ngr = _mm256_set1_pd(-g.real()), ngi = _mm256_set1_pd(-g.imag());
    const auto *ps = reinterpret_cast<const double *>(src);
    auto *pd = reinterpret_cast<double *>(dst);
    for (std::size_t i = 0; i < size; i += 2) {
        const bool neg = std::popcount(i & signs) & 1;
        const __m256d v = _mm256_loadu_pd(ps + 2 * i);
        const __m256d contrib = neg ? cmul_const(v, ngr, ngi) : cmul_const(v, gr, gi);
        double *out = pd + 2 * (i ^ flip);
        _mm256_storeu_pd(out, _mm256_add_pd(_mm256_loadu_pd(out), contrib));
    }
}

cd inner_avx2(const cd *a, const cd *b, std::size_t size) {
    if (size < 4)
        return scalar_ops().inner(a, b, size);
    const auto *pa = reinterpret_cast<const double *>(a);
    const auto *pb = reinterpret_cast<const double *>(b);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    // Negate even lanes of (ay*bx, ax*by): per-complex imag = ax*by - ay*bx.
    const __m256d neg_even = _mm256_castsi256_pd(
        _mm256_set_epi64x(0, INT64_MIN, 0, INT64_MIN));
    for (std::size_t i = 0; i < size; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        acc_re = _mm256_fmadd_pd(va, vb, acc_re);
        const __m256d vswap = _mm256_permute_pd(va, 0b0101);
        acc_im = _mm256_add_pd(acc_im, _mm256_xor_pd(_mm256_mul_pd(vswap, vb), neg_even));
    }
    return {hsum(acc_re), hsum(acc_im)};
}

double norm2_avx2(const cd *a, std::size_t size) {
    if (size < 4)
        return scalar_ops().norm2(a, size);
    const auto *pa = reinterpret_cast<const double *>(a);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < size; i += 2) {
        const __m256d v = _mm256_loadu_pd(pa + 2 * i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    return hsum(acc);
}

} // namespace

const Ops &avx2_ops() {
    static const Ops ops{apply_matrix2_avx2,
                         apply_controlled_matrix2_avx2,
                         apply_masked_phase_avx2,
                         accumulate_pauli_avx2,
                         inner_avx2,
                         norm2_avx2,
                         "avx2"};
    return ops;
}

} // namespace daqsim::kernels

#endif // x86
