#pragma once

#include <cstddef>
#include <vector>

#include "parallel.hpp"

namespace jcrnet {

// Dense row-major matrix products used by conv2d. Every output element is
// accumulated strictly in ascending order of the contraction index and is
// written by exactly one thread, so results are bit-identical for any worker
// count. Column tiles keep the streamed operand in cache; the tile width is
// a fixed constant so the split points never move.

inline constexpr std::size_t kGemmTile = 2048;

// C[M,N] += A[M,K] * B[K,N]
template <class S>
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const S* a, const S* b, S* c) {
    const std::size_t tiles = (n + kGemmTile - 1) / kGemmTile;
    parallel_tiles(tiles, [&](std::size_t t) {
        const std::size_t j0 = t * kGemmTile;
        const std::size_t j1 = std::min(n, j0 + kGemmTile);
        for (std::size_t i = 0; i < m; ++i) {
            S* crow = c + i * n;
            const S* arow = a + i * k;
            for (std::size_t p = 0; p < k; ++p) {
                const S av = arow[p];
                if (av == S(0)) continue;
                const S* brow = b + p * n;
                for (std::size_t j = j0; j < j1; ++j) crow[j] += av * brow[j];
            }
        }
    });
}

// C[M,N] += A^T[M,K] * B[K,N] where A is stored [K,M]
template <class S>
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const S* a, const S* b, S* c) {
    const std::size_t tiles = (n + kGemmTile - 1) / kGemmTile;
    parallel_tiles(tiles, [&](std::size_t t) {
        const std::size_t j0 = t * kGemmTile;
        const std::size_t j1 = std::min(n, j0 + kGemmTile);
        for (std::size_t i = 0; i < m; ++i) {
            S* crow = c + i * n;
            for (std::size_t p = 0; p < k; ++p) {
                const S av = a[p * m + i];
                if (av == S(0)) continue;
                const S* brow = b + p * n;
                for (std::size_t j = j0; j < j1; ++j) crow[j] += av * brow[j];
            }
        }
    });
}

// C[M,N] += A[M,K] * B^T[K,N] where B is stored [N,K].
// Reformulated as row-block parallel axpy over k via an explicit transpose of
// B done by the caller when profitable; this fallback handles small N.
template <class S>
void gemm_nt_small(std::size_t m, std::size_t n, std::size_t k, const S* a, const S* b, S* c) {
    parallel_tiles(m, [&](std::size_t i) {
        const S* arow = a + i * k;
        S* crow = c + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const S* brow = b + j * k;
            S acc = crow[j];
            for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
            crow[j] = acc;
        }
    });
}

// Out-of-place transpose: dst[N,M] = src[M,N].
template <class S>
void transpose(std::size_t m, std::size_t n, const S* src, std::vector<S>& dst) {
    dst.resize(m * n);
    constexpr std::size_t kBlk = 64;
    const std::size_t row_tiles = (m + kBlk - 1) / kBlk;
    parallel_tiles(row_tiles, [&](std::size_t t) {
        const std::size_t i0 = t * kBlk;
        const std::size_t i1 = std::min(m, i0 + kBlk);
        for (std::size_t j0 = 0; j0 < n; j0 += kBlk) {
            const std::size_t j1 = std::min(n, j0 + kBlk);
            for (std::size_t i = i0; i < i1; ++i)
                for (std::size_t j = j0; j < j1; ++j) dst[j * m + i] = src[i * n + j];
        }
    });
}

}  // namespace jcrnet
