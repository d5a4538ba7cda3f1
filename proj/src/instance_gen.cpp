#include "blocktri/instance_gen.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "blocktri/dense_linalg.hpp"

namespace blocktri {
namespace {

ComplexMatrix random_complex(std::size_t k, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    ComplexMatrix m(k, k);
    for (auto& e : m.data()) e = cplx(dist(rng), dist(rng));
    return m;
}

ComplexMatrix random_real(std::size_t k, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    ComplexMatrix m(k, k);
    for (auto& e : m.data()) e = cplx(dist(rng), 0.0);
    return m;
}

bool well_conditioned(const ComplexMatrix& m) {
    auto s = svd(m).singular_values;
    return !s.empty() && s.back() > 1e-2 * s.front();
}

ComplexMatrix draw_invertible(std::size_t k, std::mt19937_64& rng, bool real) {
    // Redraw until the least singular value clears 1e-2 of the largest; a
    // couple of tries suffice for the block sizes we generate.
    for (int attempt = 0; attempt < 64; ++attempt) {
        ComplexMatrix m = real ? random_real(k, rng) : random_complex(k, rng);
        if (well_conditioned(m)) return m;
    }
    throw std::runtime_error("failed to draw a well conditioned block");
}

ComplexMatrix random_orthogonal(std::size_t k, std::mt19937_64& rng) {
    return orthonormal_columns(random_real(k, rng));
}

void check_dims(std::size_t k, std::size_t l) {
    if (k == 0 || l == 0) throw std::invalid_argument("block size and block count must be positive");
}

}  // namespace

BlockTridiagonalMatrix gen_random(std::size_t k, std::size_t l, std::uint64_t seed) {
    check_dims(k, l);
    std::mt19937_64 rng(seed);
    std::vector<ComplexMatrix> diag, sub, super;
    for (std::size_t n = 0; n < l; ++n) diag.push_back(random_complex(k, rng));
    for (std::size_t n = 0; n + 1 < l; ++n) sub.push_back(random_complex(k, rng));
    for (std::size_t n = 0; n + 1 < l; ++n) super.push_back(draw_invertible(k, rng, false));
    return BlockTridiagonalMatrix::from_blocks(k, l, std::move(diag), std::move(sub), std::move(super));
}

BlockTridiagonalMatrix gen_symmetric(std::size_t k, std::size_t l, std::uint64_t seed) {
    check_dims(k, l);
    std::mt19937_64 rng(seed);
    std::vector<ComplexMatrix> diag, sub, super;
    for (std::size_t n = 0; n < l; ++n) {
        ComplexMatrix g = random_real(k, rng);
        ComplexMatrix s = g.transpose();
        s += g;
        s *= cplx(0.5, 0.0);
        diag.push_back(std::move(s));
    }
    for (std::size_t n = 0; n + 1 < l; ++n) {
        ComplexMatrix d = draw_invertible(k, rng, true);
        sub.push_back(d.transpose());
        super.push_back(std::move(d));
    }
    return BlockTridiagonalMatrix::from_blocks(k, l, std::move(diag), std::move(sub), std::move(super));
}

CommutingInstance gen_commuting(std::size_t k, std::size_t l, std::uint64_t seed) {
    check_dims(k, l);
    std::mt19937_64 rng(seed);
    ComplexMatrix u = random_orthogonal(k, rng);
    ComplexMatrix ut = u.transpose();

    std::normal_distribution<double> dist(0.0, 1.0);
    std::uniform_real_distribution<double> mag(0.5, 1.5);
    std::bernoulli_distribution coin(0.5);

    auto conjugated_diagonal = [&](const std::vector<double>& channels) {
        ComplexMatrix d(k, k);
        for (std::size_t i = 0; i < k; ++i) d.row(i)[i] = channels[i];
        return u * d * ut;
    };

    std::vector<ComplexMatrix> diag, sub, super;
    std::vector<double> channels(k);
    for (std::size_t n = 0; n < l; ++n) {
        for (auto& c : channels) c = dist(rng);
        diag.push_back(conjugated_diagonal(channels));
    }
    for (std::size_t n = 0; n + 1 < l; ++n) {
        for (auto& c : channels) c = dist(rng);
        sub.push_back(conjugated_diagonal(channels));
    }
    for (std::size_t n = 0; n + 1 < l; ++n) {
        // Super channels keep |d| in [0.5, 1.5] so every channel recurrence
        // stays well scaled.
        for (auto& c : channels) c = (coin(rng) ? 1.0 : -1.0) * mag(rng);
        super.push_back(conjugated_diagonal(channels));
    }
    CommutingInstance inst{
        BlockTridiagonalMatrix::from_blocks(k, l, std::move(diag), std::move(sub), std::move(super)),
        std::move(u)};
    return inst;
}

BlockTridiagonalMatrix gen_nilpotent(std::size_t k, std::size_t l) {
    check_dims(k, l);
    std::vector<ComplexMatrix> diag(l, ComplexMatrix(k, k));
    std::vector<ComplexMatrix> sub(l - 1, ComplexMatrix(k, k));
    std::vector<ComplexMatrix> super;
    for (std::size_t n = 0; n + 1 < l; ++n) super.push_back(ComplexMatrix::identity(k));
    return BlockTridiagonalMatrix::from_blocks(k, l, std::move(diag), std::move(sub), std::move(super));
}

DefectiveInstance gen_defective(std::size_t k, std::size_t l, std::uint64_t seed) {
    check_dims(k, l);
    if (l < 2) throw std::invalid_argument("defective instances need at least two block rows");
    std::mt19937_64 rng(seed);

    // Distinct well separated values; the first one is used twice so the
    // instance always has a genuinely defective eigenvalue.
    std::size_t distinct = l - 1;
    std::uniform_real_distribution<double> jitter(-0.2, 0.2);
    std::vector<double> values(distinct);
    for (std::size_t i = 0; i < distinct; ++i)
        values[i] = (static_cast<double>(i) - 0.5 * static_cast<double>(distinct - 1)) + jitter(rng);

    std::vector<std::size_t> assignment;
    assignment.push_back(0);
    for (std::size_t i = 0; i < distinct; ++i) assignment.push_back(i);
    std::shuffle(assignment.begin(), assignment.end(), rng);

    std::vector<ComplexMatrix> diag, sub, super;
    for (std::size_t n = 0; n < l; ++n) {
        ComplexMatrix b = ComplexMatrix::identity(k);
        b *= cplx(values[assignment[n]], 0.0);
        diag.push_back(std::move(b));
    }
    for (std::size_t n = 0; n + 1 < l; ++n) sub.emplace_back(k, k);
    for (std::size_t n = 0; n + 1 < l; ++n) super.push_back(random_orthogonal(k, rng));

    // Block-diagonal orthogonal similarity: scalar diagonal blocks are fixed
    // by it, zero sub blocks stay zero, super blocks get scrambled while the
    // Jordan structure is untouched.
    std::vector<ComplexMatrix> s;
    for (std::size_t n = 0; n < l; ++n) s.push_back(random_orthogonal(k, rng));
    for (std::size_t n = 0; n + 1 < l; ++n) super[n] = s[n] * super[n] * s[n + 1].transpose();

    DefectiveInstance inst{BlockTridiagonalMatrix::from_blocks(k, l, std::move(diag), std::move(sub),
                                                               std::move(super)),
                           {}};
    for (std::size_t i = 0; i < distinct; ++i) {
        std::size_t count = 0;
        for (std::size_t idx : assignment)
            if (idx == i) ++count;
        inst.truth.push_back({cplx(values[i], 0.0), k * count, k, k, count});
    }
    std::sort(inst.truth.begin(), inst.truth.end(),
              [](const auto& a, const auto& b) { return a.lambda.real() < b.lambda.real(); });
    return inst;
}

}  // namespace blocktri
