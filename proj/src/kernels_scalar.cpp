// SPDX-License-Identifier: Apache-2.0
// Scalar reference kernels. These define the semantics the SIMD variants
// are tested against.
#include "daqsim/kernels.hpp"

#include <bit>

namespace daqsim::kernels {

namespace {

void apply_matrix2_scalar(cd *amps, std::size_t size, int bitpos, const cd *m) {
    const std::size_t stride = std::size_t(1) << bitpos;
    for (std::size_t base = 0; base < size; base += 2 * stride) {
        for (std::size_t off = 0; off < stride; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + stride;
            const cd a = amps[i0];
            const cd b = amps[i1];
            amps[i0] = m[0] * a + m[1] * b;
            amps[i1] = m[2] * a + m[3] * b;
        }
    }
}

void apply_controlled_matrix2_scalar(cd *amps, std::size_t size, int control_bitpos,
                                     int target_bitpos, const cd *m) {
    const std::size_t cbit = std::size_t(1) << control_bitpos;
    const std::size_t stride = std::size_t(1) << target_bitpos;
    for (std::size_t base = 0; base < size; base += 2 * stride) {
        for (std::size_t off = 0; off < stride; ++off) {
            const std::size_t i0 = base + off;
            if (!(i0 & cbit))
                continue;
            const std::size_t i1 = i0 + stride;
            const cd a = amps[i0];
            const cd b = amps[i1];
            amps[i0] = m[0] * a + m[1] * b;
            amps[i1] = m[2] * a + m[3] * b;
        }
    }
}

void apply_masked_phase_scalar(cd *amps, std::size_t size, std::uint64_t mask, cd phase) {
    for (std::size_t i = 0; i < size; ++i)
        if ((i & mask) == mask)
            amps[i] *= phase;
}

void accumulate_pauli_scalar(cd *dst, const cd *src, std::size_t size, cd g, std::uint64_t x_mask,
                             std::uint64_t y_mask, std::uint64_t z_mask) {
    const std::uint64_t flip = x_mask | y_mask;
    const std::uint64_t signs = y_mask | z_mask;
    for (std::size_t i = 0; i < size; ++i) {
        const cd v = (std::popcount(i & signs) & 1) ? -g * src[i] : g * src[i];
        dst[i ^ flip] += v;
    }
}

cd inner_scalar(const cd *a, const cd *b, std::size_t size) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
        const cd v = std::conj(a[i]) * b[i];
        re += v.real();
        im += v.imag();
    }
    return {re, im};
}

double norm2_scalar(const cd *a, std::size_t size) {
    double s = 0.0;
    for (std::size_t i = 0; i < size; ++i)
        s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    return s;
}

} // namespace

const Ops &scalar_ops() {
    static const Ops ops{apply_matrix2_scalar,
                         apply_controlled_matrix2_scalar,
                         apply_masked_phase_scalar,
                         accumulate_pauli_scalar,
                         inner_scalar,
                         norm2_scalar,
                         "scalar"};
    return ops;
}

} // namespace daqsim::kernels
