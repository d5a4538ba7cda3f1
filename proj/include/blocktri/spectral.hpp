#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "blocktri/block_matrix.hpp"
#include "blocktri/complex_matrix.hpp"
#include "blocktri/errors.hpp"
#include "blocktri/matrix_polynomial.hpp"

namespace blocktri {

// Distinct roots with multiplicities, sorted by (Re, Im).
struct Spectrum {
    struct Entry {
        cplx lambda;
        std::size_t multiplicity;
    };
    std::vector<Entry> entries;

    std::size_t total() const;
};

// All roots of p via its balanced companion matrix. Roots closer than
// cluster_tol * (1 + |root|) are merged into one entry whose multiplicity is
// the cluster size; each cluster center is then polished by Newton iteration
// on the (m-1)-th derivative (the companion eigenvalues of an m-fold root
// scatter like eps^(1/m), the polished center does not) and clusters are
// re-merged until stable. Callers hunting roots of multiplicity m must pass
// cluster_tol above the companion scatter for that m; the default suits
// simple and double roots.
// Throws std::invalid_argument for the zero polynomial or degree < 1.
Spectrum find_zeros(const ScalarPolynomial& p, double cluster_tol = 1e-8);

struct NullspaceBasis {
    cplx lambda{};         // filled by pipelines that know the eigenvalue
    ComplexMatrix basis;   // columns orthonormal, k x dim (dim may be 0)
    double residual = 0.0; // largest column norm of m * basis

    std::size_t dim() const { return basis.cols(); }
};

// Null space of m with the rank cutoff sigma_i <= tol * max(sigma_max, scale)
// (every direction when m is the zero matrix), basis = trailing right
// singular vectors. scale is an absolute noise floor for matrices that are
// "zero plus roundoff": when m is a matrix polynomial evaluated at an
// eigenvalue whose kernel is the whole space, sigma_max itself is noise and a
// purely relative cutoff would report an empty kernel. Callers evaluating a
// polynomial pass evaluation_scale for it.
NullspaceBasis nullspace_basis(const ComplexMatrix& m, double tol = 1e-10, double scale = 0.0);

// Rank cutoff for kernels taken at an eigenvalue that is only known to the
// accuracy of a multiple-root cluster center (or a caller-supplied value):
// such a center sits ~1e-8 off the true root and the kernel singular values
// scale with that error through the polynomial's derivative. Simple roots
// are refined to the pointwise determinant noise floor instead and do not
// need this. Kernel extraction uses max(null_tol, kKernelRankFloor) at
// those sites, so tightening null_tol below this has no effect there.
inline constexpr double kKernelRankFloor = 3e-6;

// Eigenvector block for one eigenvalue: column h of basis becomes the
// stacked vector (P_0(lambda) h, ..., P_{L-1}(lambda) h), normalized to unit
// 2-norm per column.
ComplexMatrix eigenvectors_for(const PolynomialSequence& seq, cplx lambda,
                               const ComplexMatrix& basis);

struct EigenDecomposition {
    std::size_t n = 0;
    Spectrum spectrum;
    std::vector<NullspaceBasis> bases;  // aligned with spectrum.entries
    ComplexMatrix v;                    // N x N, columns grouped per eigenvalue
    double residual_av = 0.0;           // ||A V - V Lambda||_F / ||A||_F
    double cluster_tol = 0.0;
    double null_tol = 0.0;

    // First column index of eigenvalue block m inside v.
    std::size_t column_offset(std::size_t m) const;
};

// Geometric multiplicities fell short of (or disagree with) the algebraic
// ones: the matrix has no eigenvector basis and the caller gets the defect
// shape instead of V.
struct DefectReport {
    struct Item {
        cplx lambda;
        std::size_t algebraic;
        std::size_t geometric;
    };
    std::size_t n = 0;
    std::vector<Item> items;
    std::size_t total_geometric = 0;
};

struct DecompositionOutcome {
    std::optional<EigenDecomposition> decomposition;
    std::optional<DefectReport> defect;

    bool diagonalizable() const { return decomposition.has_value(); }
};

struct DecompositionOptions {
    double cluster_tol = 1e-8;
    double null_tol = 1e-10;
};

// Eigenvalues with multiplicities for the whole matrix. Roots come from the
// interpolated characteristic polynomial det P_L; the clustering tolerance
// escalates by factors of 10 (up to 1e-1) until every cluster center has a
// nonempty null space of P_L and no center's null space exceeds its
// multiplicity (a kernel larger than the algebraic count proves the
// clustering split one root into several centers), so multiple roots are
// recovered at the default tolerance despite their eps^(1/m) companion
// scatter. The attempt with the fewest violations wins if no tolerance
// resolves them all.
Spectrum matrix_spectrum(const BlockTridiagonalMatrix& a, double cluster_tol = 1e-8,
                         double null_tol = 1e-10);

// Full eigensolve through the polynomial sequence: characteristic polynomial
// det P_L by interpolation, roots, per-root null spaces, stacked
// eigenvectors. Clustering escalates exactly as in matrix_spectrum, with
// success meaning the geometric multiplicities sum to N with no kernel
// exceeding its multiplicity; when no tolerance achieves that the matrix is
// defective and the report comes from the attempt with the largest
// consistent geometric total. Never throws on defective input; that is a
// reported outcome.
DecompositionOutcome eigenvector_matrix(const BlockTridiagonalMatrix& a,
                                        const DecompositionOptions& opts = {});

struct InverseResult {
    ComplexMatrix w;               // N x N, rows grouped per eigenvalue
    double residual_wv = 0.0;      // ||W V - I||_F
    double offblock_prenorm = 0.0; // max off-diagonal block norm of W0 V
};

// Rows of V^{-1} from the transposed-sequence chains: the raw stacked rows
// W0 satisfy W0 V = blockdiag(G_m); each row group is renormalized by
// G_m^{-1}. Requires nonsingular sub blocks (the transposed recurrence
// divides by them); throws NumericalError if a G_m is numerically singular
// or a transposed null space disagrees with the multiplicity.
InverseResult inverse_eigenvector_matrix(const BlockTridiagonalMatrix& a,
                                         const EigenDecomposition& dec);

struct CommutingResult {
    Spectrum spectrum;
    std::vector<ScalarPolynomial> channel_polynomials;  // one per channel, degree L
};

// Fast path for families whose blocks are simultaneously diagonalized by u:
// conjugating every block by u must leave off-diagonal entries below
// diag_tol relative to the block scale (checked; PreconditionError
// otherwise). The block recurrence then splits into K scalar three-term
// recurrences; the spectrum is the union of the K channel root sets.
CommutingResult commuting_fast_path(const BlockTridiagonalMatrix& a, const ComplexMatrix& u,
                                    double diag_tol = 1e-10, double cluster_tol = 1e-8);

}  // namespace blocktri
