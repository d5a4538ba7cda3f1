#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blocktri/block_matrix.hpp"
#include "blocktri/spectral.hpp"
#include "blocktri/transforms.hpp"

namespace blocktri {

// Hub-and-legs graph laid out in depth levels: channel 0 at depth 0 is the
// hub, channels 1..K-1 at depth 0 are the first nodes of K-1 legs, and the
// identity couplings extend every channel to depth L-1 (the hub's channel
// continues as its own leg). N = legs * depth nodes.
struct SpiderGraph {
    std::size_t legs = 0;   // K >= 2; K = 2 degenerates to a path graph
    std::size_t depth = 0;  // L >= 1
};

// Adjacency as a block tridiagonal matrix: the star block couples the
// channels at depth 0 (hub row and column ones), deeper diagonal blocks are
// zero, and all couplings between consecutive depths are identity.
BlockTridiagonalMatrix spider_adjacency(const SpiderGraph& g);

// Second-kind Chebyshev value U_n(x), with U_{-1} = 0.
double chebyshev_u(long n, double x);
cplx chebyshev_u(long n, cplx x);

// The depth-n polynomial of the spider in closed form:
//   P_n(x) = U_n(x/2) I + s U_{n-1}(x/2) B,   s = closed_form_sign(g).
ComplexMatrix spider_closed_form(const SpiderGraph& g, std::size_t n, cplx x);

// Resolves the sign s by comparing both candidates against the block
// recurrence at sample points; exactly one must match (throws
// std::logic_error otherwise). The recurrence forces s = -1.
int closed_form_sign(const SpiderGraph& g);

// The spectrum splits into three root families of Chebyshev combinations
// (arguments halved): alpha = roots of U_L, each carrying multiplicity
// legs-2 (empty when legs = 2); beta = roots of U_L + sqrt(legs-1) U_{L-1};
// gamma = roots of U_L - sqrt(legs-1) U_{L-1}; beta and gamma roots are
// simple. All roots are eigenvalues of small symmetric tridiagonal matrices
// (off-diagonal ones, one corner entry -+sqrt(legs-1) for beta/gamma) and
// are verified against the Chebyshev combinations on return.
struct SpiderRootFamilies {
    std::vector<double> alpha;  // ascending
    std::vector<double> beta;   // ascending
    std::vector<double> gamma;  // ascending
};

struct SpiderSpectrum {
    Spectrum spectrum;  // merged entries with multiplicities
    SpiderRootFamilies families;
};

SpiderSpectrum spider_spectrum(const SpiderGraph& g);

// Precomputed expansion data. Column order of the implied eigenvector
// matrix: alpha roots ascending with legs-2 kernel columns each, then beta
// ascending, then gamma ascending; every column normalized by its exact
// norm. The alpha block rides a DST-I in the depth index; beta/gamma columns
// contract against stored depth profiles.
struct SpiderPlan {
    SpiderGraph graph;
    int sign = -1;
    SpiderRootFamilies families;
    double alpha_scale = 0.0;  // 1 / sqrt(depth + 1)

    // A beta/gamma eigenvector has one depth profile shared by every
    // component: at depth n the hub entry is hub_weight * profile[n] and
    // each of the legs carries profile[n]. profile solves the three-term
    // recurrence p_{n+1} = root p_n - p_{n-1} with p_L = 0 (the family's
    // root equation), evaluated backward so the hub-localized vectors of
    // the extreme roots stay accurate.
    struct RootData {
        double root;
        double hub_weight;            // -sqrt(legs-1) for beta, + for gamma
        std::vector<double> profile;  // depth entries, unnormalized
        double inv_norm;              // reciprocal of the exact column norm
    };
    std::vector<RootData> beta;
    std::vector<RootData> gamma;

    std::optional<Dst1Plan> dst;  // length = depth

    static constexpr const char* kVersion = "spider-plan/1";
};

SpiderPlan build_spider_plan(const SpiderGraph& g);

struct ExpansionResult {
    std::vector<double> coefficients;  // plan column order
    std::uint64_t alpha_ops = 0;       // multiply-adds charged to the alpha stage
    std::uint64_t other_ops = 0;       // beta/gamma stage
};

// Expansion coefficients V^T y against the plan's normalized eigenvector
// columns. fast runs the DST route in O(N log L + L^2) multiply-adds for
// the transform-friendly depths; direct materializes nothing but contracts
// every column in O(N^2) and serves as the cross-check.
ExpansionResult fast_expansion(const SpiderPlan& plan, const std::vector<double>& y);
ExpansionResult direct_expansion(const SpiderPlan& plan, const std::vector<double>& y);

// Complex vectors expand componentwise over the real plan columns.
std::vector<cplx> expand_complex(const SpiderPlan& plan, const std::vector<cplx>& y, bool direct);

// The normalized eigenvector matrix the plan encodes, in plan column order.
ComplexMatrix materialize_plan_matrix(const SpiderPlan& plan);

// Eigenvalue of each plan column, in plan column order.
std::vector<double> plan_column_values(const SpiderPlan& plan);

nlohmann::json spider_plan_to_json(const SpiderPlan& plan);
SpiderPlan spider_plan_from_json(const nlohmann::json& j);

}  // namespace blocktri
