#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "mpcsm/runtime.hpp"

namespace mpcsm {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

// Forward transforms use a*_k = sum_j a_j e^{+2 pi i jk/n}; inverses conjugate and scale by 1/n.
ComplexVector dft_naive(const ComplexVector& a);
ComplexVector idft_naive(const ComplexVector& a);
ComplexVector fft_local(ComplexVector a);
ComplexVector ifft_local(ComplexVector a);
std::vector<std::size_t> bit_reversal_perm(std::size_t m);

bool is_power_of_two(std::uint64_t v);
std::uint64_t next_power_of_two(std::uint64_t v);

// Exact backend: p = 0x3fffffee00000001 = 536870903 * 2^33 + 1, generator 3.
inline constexpr Word kNttPrime = 4611685941117976577ULL;
inline constexpr Word kNttGenerator = 3;

std::vector<Word> ntt_local(std::vector<Word> a, bool inverse);
std::vector<Word> ntt_convolution_local(const std::vector<Word>& a, const std::vector<Word>& b);

// Padded length n = machines * per_machine with machines <= per_machine, both powers of two.
struct FftShape {
    std::size_t n = 1;
    std::size_t machines = 1;
    std::size_t per_machine = 1;
};

FftShape fft_shape(std::size_t length, std::size_t available_machines);

// Which (z, j) twiddled coefficients each machine holds after the transpose round.
struct FftLayoutTrace {
    FftShape shape;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> held;
};

// Three exchanges: residue-class permutation, transpose, final placement.
ComplexVector mpc_fft(MpcContext& ctx, const ComplexVector& a, FftLayoutTrace* trace = nullptr);

// Batched convolutions sharing one four-exchange script: forward transforms without
// their final permutation, pointwise products in the transposed layout, inverse transform
// without its initial permutation. With `summed`, the products are accumulated and a single
// result (the sum of all convolutions) is produced.
template <class T>
using VectorPairs = std::vector<std::pair<std::vector<T>, std::vector<T>>>;

// Result k sits on machine q under buffer "conv<k>" as entries [q*per_machine, (q+1)*per_machine).
struct DistributedConvolution {
    FftShape shape;
    std::size_t outputs = 0;
    std::size_t out_length = 0;
};

DistributedConvolution mpc_convolve_complex_in_place(MpcContext& ctx, const VectorPairs<Complex>& pairs,
                                                     bool summed);
DistributedConvolution mpc_convolve_ntt_in_place(MpcContext& ctx, const VectorPairs<Word>& pairs,
                                                 bool summed);

std::vector<ComplexVector> gather_complex(const MpcContext& ctx, const DistributedConvolution& d);
std::vector<std::vector<Word>> gather_ntt(const MpcContext& ctx, const DistributedConvolution& d);

ComplexVector mpc_convolution(MpcContext& ctx, const ComplexVector& a, const ComplexVector& b);
std::vector<Word> mpc_ntt_convolution(MpcContext& ctx, const std::vector<Word>& a, const std::vector<Word>& b);

}  // namespace mpcsm
