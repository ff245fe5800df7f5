// SPDX-License-Identifier: Apache-2.0
/**
 * @file
 * Data-parallel statevector kernels: scalar reference implementations plus
 * AVX2 variants selected at runtime.
 *
 * All kernels operate in place on a contiguous array of 2^n complex
 * amplitudes. A "bit position" addresses the state-index bit of a qubit
 * (qubit q of an n-qubit state lives at bit position n-1-q; the stride
 * between paired amplitudes is 1 << bitpos).
 *
 * Pauli-product terms are encoded as three disjoint bit masks (x/y/z) over
 * state-index bits; `phase_pow_i` is the exponent of the global i^k factor
 * picked up by the Y operators in the product.
 *
 * Backend selection: AVX2 is used when the CPU supports it; set
 * DAQSIM_KERNELS=scalar (or =avx2) to override, or call set_backend() from
 * code. Scalar and AVX2 variants are equivalence-tested against each other.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

namespace daqsim::kernels {

using cd = std::complex<double>;

struct Ops {
    // amps[i], amps[i | 1<<bitpos] <- m * (amps[i], amps[i | 1<<bitpos]),
    // m row-major [m00 m01; m10 m11].
    void (*apply_matrix2)(cd *amps, std::size_t size, int bitpos, const cd *m);
    // Same, restricted to indices with the control bit set.
    void (*apply_controlled_matrix2)(cd *amps, std::size_t size, int control_bitpos,
                                     int target_bitpos, const cd *m);
    // amps[i] *= phase wherever (i & mask) == mask.
    void (*apply_masked_phase)(cd *amps, std::size_t size, std::uint64_t mask, cd phase);
    // dst[i ^ (x|y)] += g * (-1)^popcount(i & (y|z)) * src[i]; g already
    // includes the i^phase_pow_i factor from the Y count.
    void (*accumulate_pauli)(cd *dst, const cd *src, std::size_t size, cd g, std::uint64_t x_mask,
                             std::uint64_t y_mask, std::uint64_t z_mask);
    // sum_i conj(a[i]) * b[i]
    cd (*inner)(const cd *a, const cd *b, std::size_t size);
    // sum_i |a[i]|^2
    double (*norm2)(const cd *a, std::size_t size);
    const char *name;
};

const Ops &scalar_ops();
#if defined(__x86_64__) || defined(__i386__)
const Ops &avx2_ops();
#endif

bool cpu_has_avx2();

/// Currently selected backend (auto-detect + env override on first use).
const Ops &active();
/// Force a backend; pass nullptr to restore automatic selection.
void set_backend(const Ops *ops);

/// Pauli-product phase helper: multiply g by i^k.
inline cd apply_i_power(cd g, int k) {
    switch (k & 3) {
    case 1:
        return cd(-g.imag(), g.real());
    case 2:
        return -g;
    case 3:
        return cd(g.imag(), -g.real());
    default:
        return g;
    }
}

} // namespace daqsim::kernels
