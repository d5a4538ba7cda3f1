#pragma once

#include <cstdint>
#include <vector>

#include "blocktri/block_matrix.hpp"
#include "blocktri/complex_matrix.hpp"

namespace blocktri {

// Deterministic for a fixed seed. Super blocks are redrawn until comfortably
// nonsingular so generated instances always satisfy the recurrence
// precondition.

// Complex standard normal entries in every block.
BlockTridiagonalMatrix gen_random(std::size_t k, std::size_t l, std::uint64_t seed);

// Real symmetric instance: symmetric diagonal blocks, sub blocks the
// transposes of the super blocks.
BlockTridiagonalMatrix gen_symmetric(std::size_t k, std::size_t l, std::uint64_t seed);

struct CommutingInstance {
    BlockTridiagonalMatrix matrix;
    ComplexMatrix basis;  // real orthogonal; every block is basis * diag * basis^T
};

// All blocks share the eigenbasis, so the block recurrence splits into
// scalar channels. Super-block channel values are bounded away from zero.
CommutingInstance gen_commuting(std::size_t k, std::size_t l, std::uint64_t seed);

// Zero diagonal and sub blocks, identity super blocks: a block shift with
// A^L = 0. Single eigenvalue 0 with k chains of length l.
BlockTridiagonalMatrix gen_nilpotent(std::size_t k, std::size_t l);

struct DefectiveInstance {
    BlockTridiagonalMatrix matrix;
    struct GroundTruth {
        cplx lambda;
        std::size_t algebraic;
        std::size_t geometric;
        std::size_t chain_count;
        std::size_t chain_length;
    };
    std::vector<GroundTruth> truth;  // one entry per distinct eigenvalue
};

// Scalar diagonal blocks b_n I with at least one repeated b value, zero sub
// blocks, orthogonal super blocks scrambled by a block-diagonal orthogonal
// similarity. The block-diagonal change of basis that normalizes the super
// blocks to identity shows the instance is similar to (scalar bidiagonal
// matrix) tensor I_k, so each distinct value with total count t contributes
// exactly k Jordan chains of length t. Requires l >= 2.
DefectiveInstance gen_defective(std::size_t k, std::size_t l, std::uint64_t seed);

}  // namespace blocktri
