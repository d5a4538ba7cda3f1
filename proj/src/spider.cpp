#include "blocktri/spider.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "blocktri/dense_linalg.hpp"
#include "blocktri/errors.hpp"
#include "blocktri/kernels.hpp"
#include "blocktri/matrix_io.hpp"
#include "blocktri/op_count.hpp"

namespace blocktri {
namespace {

void check_graph(const SpiderGraph& g) {
    if (g.legs < 2)
        throw std::invalid_argument("spider graph: needs at least 2 legs (2 is the path case)");
    if (g.depth < 1) throw std::invalid_argument("spider graph: depth must be positive");
}

ComplexMatrix star_block(std::size_t k) {
    ComplexMatrix b(k, k);
    for (std::size_t j = 1; j < k; ++j) {
        b(0, j) = 1.0;
        b(j, 0) = 1.0;
    }
    return b;
}

}  // namespace

BlockTridiagonalMatrix spider_adjacency(const SpiderGraph& g) {
    check_graph(g);
    const std::size_t k = g.legs, l = g.depth;
    std::vector<ComplexMatrix> diag(l, ComplexMatrix(k, k));
    diag[0] = star_block(k);
    std::vector<ComplexMatrix> off(l >= 1 ? l - 1 : 0, ComplexMatrix::identity(k));
    return BlockTridiagonalMatrix::from_blocks(k, l, std::move(diag), off, off);
}

double chebyshev_u(long n, double x) {
    if (n < 0) return 0.0;
    double prev = 0.0, cur = 1.0;
    for (long i = 0; i < n; ++i) {
        double next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

cplx chebyshev_u(long n, cplx x) {
    if (n < 0) return 0.0;
    cplx prev = 0.0, cur = 1.0;
    for (long i = 0; i < n; ++i) {
        cplx next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace {

// P_n(x) by the value recurrence (depth blocks: star at 0, zero after;
// couplings identity): P_{n+1} = x P_n - B_n P_n - P_{n-1}.
ComplexMatrix spider_value_recurrence(const SpiderGraph& g, std::size_t n, cplx x) {
    const std::size_t k = g.legs;
    ComplexMatrix b = star_block(k);
    ComplexMatrix prev(k, k);
    ComplexMatrix cur = ComplexMatrix::identity(k);
    for (std::size_t i = 0; i < n; ++i) {
        ComplexMatrix next = x * cur;
        if (i == 0) next -= b * cur;
        if (i > 0) next -= prev;
        prev = cur;
        cur = std::move(next);
    }
    return cur;
}

ComplexMatrix closed_form_with_sign(const SpiderGraph& g, std::size_t n, cplx x, int sign) {
    const std::size_t k = g.legs;
    ComplexMatrix out = chebyshev_u(long(n), x / 2.0) * ComplexMatrix::identity(k);
    ComplexMatrix b = star_block(k);
    out += (double(sign) * chebyshev_u(long(n) - 1, x / 2.0)) * b;
    return out;
}

}  // namespace

int closed_form_sign(const SpiderGraph& g) {
    check_graph(g);
    std::mt19937_64 rng(20240611u);
    std::uniform_real_distribution<double> dist(-2.5, 2.5);
    const std::size_t n = std::min<std::size_t>(g.depth, 4);
    double worst_minus = 0.0, worst_plus = 0.0;
    for (int t = 0; t < 6; ++t) {
        cplx x(dist(rng), 0.3 * dist(rng));
        ComplexMatrix ref = spider_value_recurrence(g, n, x);
        double scale = std::max(1.0, ref.frobenius_norm());
        worst_minus = std::max(worst_minus,
                               (closed_form_with_sign(g, n, x, -1) - ref).frobenius_norm() / scale);
        worst_plus = std::max(worst_plus,
                              (closed_form_with_sign(g, n, x, +1) - ref).frobenius_norm() / scale);
    }
    const double tol = 1e-9;
    bool minus_ok = worst_minus <= tol, plus_ok = worst_plus <= tol;
    if (minus_ok == plus_ok)
        throw std::logic_error("spider closed form: sign resolution failed against the recurrence");
    return minus_ok ? -1 : +1;
}

ComplexMatrix spider_closed_form(const SpiderGraph& g, std::size_t n, cplx x) {
    return closed_form_with_sign(g, n, x, closed_form_sign(g));
}

namespace {

std::vector<double> corner_tridiagonal_roots(std::size_t l, double corner) {
    std::vector<double> diag(l, 0.0), off(l >= 1 ? l - 1 : 0, 1.0);
    diag[l - 1] = corner;
    return symmetric_tridiagonal_eigenvalues(diag, off);
}

// |f(root)| must vanish relative to the local derivative scale; a wrong
// convention (scale or corner sign) shows up orders of magnitude above it.
void check_family_residual(const std::vector<double>& roots, double c_beta, std::size_t l,
                           const char* family) {
    for (double r : roots) {
        auto f = [&](double x) {
            return chebyshev_u(long(l), x / 2.0) + c_beta * chebyshev_u(long(l) - 1, x / 2.0);
        };
        double h = 1e-6 * (1.0 + std::abs(r));
        double deriv = (f(r + h) - f(r - h)) / (2.0 * h);
        double scale = 1.0 + std::abs(deriv) * (1.0 + std::abs(r));
        if (std::abs(f(r)) > 1e-9 * scale)
            throw NumericalError(std::string("spider spectrum: ") + family +
                                 " root failed the Chebyshev residual check");
    }
}

}  // namespace

SpiderSpectrum spider_spectrum(const SpiderGraph& g) {
    check_graph(g);
    const std::size_t k = g.legs, l = g.depth;
    const double c = std::sqrt(double(k - 1));

    SpiderSpectrum out;
    if (k >= 3) {
        // Roots of U_L(x/2): eigenvalues of the plain path tridiagonal.
        std::vector<double> diag(l, 0.0), off(l >= 1 ? l - 1 : 0, 1.0);
        out.families.alpha = symmetric_tridiagonal_eigenvalues(diag, off);
        check_family_residual(out.families.alpha, 0.0, l, "alpha");
    }
    out.families.beta = corner_tridiagonal_roots(l, -c);
    check_family_residual(out.families.beta, +c, l, "beta");
    out.families.gamma = corner_tridiagonal_roots(l, +c);
    check_family_residual(out.families.gamma, -c, l, "gamma");

    for (double r : out.families.alpha) out.spectrum.entries.push_back({cplx(r, 0.0), k - 2});
    for (double r : out.families.beta) out.spectrum.entries.push_back({cplx(r, 0.0), 1});
    for (double r : out.families.gamma) out.spectrum.entries.push_back({cplx(r, 0.0), 1});
    std::sort(out.spectrum.entries.begin(), out.spectrum.entries.end(),
              [](const auto& a, const auto& b) { return a.lambda.real() < b.lambda.real(); });
    return out;
}

namespace {

SpiderPlan::RootData make_root_data(double root, double hub_weight, std::size_t k,
                                    std::size_t l) {
    SpiderPlan::RootData rd;
    rd.root = root;
    rd.hub_weight = hub_weight;
    rd.profile.assign(l, 0.0);
    // The stacked eigenvector at a family root collapses to one profile
    // p_n = U_n - hub_weight U_{n-1} at root/2 (hub entry hub_weight * p_n,
    // leg entries p_n): the root equation U_L = hub_weight U_{L-1} makes
    // both components of P_n(root) h proportional to it. For the extreme
    // roots p_n decays toward the leg ends while the U_n grow, so forming
    // the difference forward cancels catastrophically; the same recurrence
    // run backward from the exact boundary pair (p_L, p_{L-1}) = (0, 1)
    // tracks the decaying solution stably and is neutral for the
    // oscillatory interior roots.
    double above = 0.0, cur = 1.0;  // p_{m+1}, p_m starting at m = l-1
    for (std::size_t m = l; m-- > 0;) {
        rd.profile[m] = cur;
        double below = root * cur - above;
        above = cur;
        cur = below;
    }
    double norm_sq = 0.0;
    for (double p : rd.profile) norm_sq += p * p;
    norm_sq *= hub_weight * hub_weight + double(k - 1);
    rd.inv_norm = 1.0 / std::sqrt(norm_sq);
    return rd;
}

}  // namespace

SpiderPlan build_spider_plan(const SpiderGraph& g) {
    SpiderPlan plan;
    plan.graph = g;
    plan.sign = closed_form_sign(g);
    if (plan.sign != -1)
        throw std::logic_error("spider plan: closed-form sign resolved unexpectedly to +1");
    SpiderSpectrum sp = spider_spectrum(g);
    plan.families = std::move(sp.families);
    plan.alpha_scale = 1.0 / std::sqrt(double(g.depth + 1));
    const double c = std::sqrt(double(g.legs - 1));
    for (double r : plan.families.beta)
        plan.beta.push_back(make_root_data(r, -c, g.legs, g.depth));
    for (double r : plan.families.gamma)
        plan.gamma.push_back(make_root_data(r, +c, g.legs, g.depth));
    plan.dst.emplace(g.depth);
    return plan;
}

namespace {

// Shared stage of both beta/gamma routes: per-depth hub value and leg sum.
void hub_leg_sums(const SpiderPlan& plan, const double* y, std::vector<double>& s0,
                  std::vector<double>& s1) {
    const std::size_t k = plan.graph.legs, l = plan.graph.depth;
    s0.resize(l);
    s1.resize(l);
    for (std::size_t n = 0; n < l; ++n) {
        s0[n] = y[n * k];
        double acc = 0.0;
        for (std::size_t i = 1; i < k; ++i) acc += y[n * k + i];
        s1[n] = acc;
    }
}

double root_coefficient(const SpiderPlan& plan, const SpiderPlan::RootData& rd,
                        const std::vector<double>& s0, const std::vector<double>& s1) {
    const std::size_t l = plan.graph.depth;
    const auto& ker = kernels::active();
    // <v, y> = sum_n p_n (hub_weight * s0 + s1)[n].
    double d0 = ker.dot_d(rd.profile.data(), s0.data(), l);
    double d1 = ker.dot_d(rd.profile.data(), s1.data(), l);
    return (rd.hub_weight * d0 + d1) * rd.inv_norm;
}

}  // namespace

ExpansionResult fast_expansion(const SpiderPlan& plan, const std::vector<double>& y) {
    const std::size_t k = plan.graph.legs, l = plan.graph.depth, n = k * l;
    if (y.size() != n) throw std::invalid_argument("fast_expansion: vector length mismatch");
    ExpansionResult out;
    out.coefficients.resize(n);

    std::uint64_t before = ops::count();
    if (k >= 3) {
        // Kernel columns are pure differences of adjacent leg channels: the
        // projection costs no multiplies, the DST carries the log factor.
        std::vector<double> z(l), w(l);
        for (std::size_t j = 0; j + 2 < k; ++j) {
            for (std::size_t m = 0; m < l; ++m) z[m] = y[m * k + j + 1] - y[m * k + j + 2];
            plan.dst->apply(z.data(), w.data());
            // DST bin t pairs with the alpha root 2 cos((t+1) pi / (L+1)),
            // which is descending; plan order is ascending.
            for (std::size_t t = 0; t < l; ++t)
                out.coefficients[(l - 1 - t) * (k - 2) + j] = plan.alpha_scale * w[t];
        }
        ops::add(std::uint64_t(l) * (k - 2));  // normalization multiplies
    }
    out.alpha_ops = ops::count() - before;

    before = ops::count();
    std::vector<double> s0, s1;
    hub_leg_sums(plan, y.data(), s0, s1);
    std::size_t off = l * (k - 2);
    for (const auto& rd : plan.beta) out.coefficients[off++] = root_coefficient(plan, rd, s0, s1);
    for (const auto& rd : plan.gamma) out.coefficients[off++] = root_coefficient(plan, rd, s0, s1);
    // Two length-L contractions plus the combination and the norm, per root.
    ops::add(plan.beta.size() * (2 * std::uint64_t(l) + 3) +
             plan.gamma.size() * (2 * std::uint64_t(l) + 3));
    out.other_ops = ops::count() - before;
    return out;
}

ExpansionResult direct_expansion(const SpiderPlan& plan, const std::vector<double>& y) {
    const std::size_t n = plan.graph.legs * plan.graph.depth;
    if (y.size() != n) throw std::invalid_argument("direct_expansion: vector length mismatch");
    ComplexMatrix v = materialize_plan_matrix(plan);
    ExpansionResult out;
    out.coefficients.resize(n);
    std::uint64_t before = ops::count();
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += v(i, j).real() * y[i];
        out.coefficients[j] = acc;
    }
    ops::add(std::uint64_t(n) * n);
    out.other_ops = ops::count() - before;
    return out;
}

std::vector<cplx> expand_complex(const SpiderPlan& plan, const std::vector<cplx>& y, bool direct) {
    std::vector<double> re(y.size()), im(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        re[i] = y[i].real();
        im[i] = y[i].imag();
    }
    ExpansionResult cr = direct ? direct_expansion(plan, re) : fast_expansion(plan, re);
    ExpansionResult ci = direct ? direct_expansion(plan, im) : fast_expansion(plan, im);
    std::vector<cplx> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        out[i] = cplx(cr.coefficients[i], ci.coefficients[i]);
    return out;
}

ComplexMatrix materialize_plan_matrix(const SpiderPlan& plan) {
    const std::size_t k = plan.graph.legs, l = plan.graph.depth, n = k * l;
    ComplexMatrix v(n, n);
    std::size_t col = 0;
    if (k >= 3) {
        for (std::size_t t = 0; t < l; ++t) {
            double root = plan.families.alpha[t];
            double sin_theta = std::sqrt(std::max(0.0, 1.0 - 0.25 * root * root));
            // Normalized entry: sin((n+1) theta) h_j[i] / sqrt(L+1), with
            // sin((n+1) theta) = U_n(root/2) sin(theta).
            double prev = 0.0, cur = 1.0;
            std::vector<double> un(l);
            for (std::size_t m = 0; m < l; ++m) {
                un[m] = cur;
                double next = root * cur - prev;
                prev = cur;
                cur = next;
            }
            for (std::size_t j = 0; j + 2 < k; ++j) {
                for (std::size_t m = 0; m < l; ++m) {
                    double val = un[m] * sin_theta * plan.alpha_scale;
                    v(m * k + j + 1, col) = val;
                    v(m * k + j + 2, col) = -val;
                }
                ++col;
            }
        }
    }
    auto fill_root = [&](const SpiderPlan::RootData& rd) {
        for (std::size_t m = 0; m < l; ++m) {
            double leg = rd.profile[m] * rd.inv_norm;
            v(m * k, col) = rd.hub_weight * leg;
            for (std::size_t i = 1; i < k; ++i) v(m * k + i, col) = leg;
        }
        ++col;
    };
    for (const auto& rd : plan.beta) fill_root(rd);
    for (const auto& rd : plan.gamma) fill_root(rd);
    return v;
}

std::vector<double> plan_column_values(const SpiderPlan& plan) {
    const std::size_t k = plan.graph.legs, l = plan.graph.depth;
    std::vector<double> vals;
    vals.reserve(k * l);
    for (std::size_t t = 0; t < plan.families.alpha.size(); ++t)
        for (std::size_t j = 0; j + 2 < k; ++j) vals.push_back(plan.families.alpha[t]);
    for (double r : plan.families.beta) vals.push_back(r);
    for (double r : plan.families.gamma) vals.push_back(r);
    return vals;
}

nlohmann::json spider_plan_to_json(const SpiderPlan& plan) {
    nlohmann::json j;
    j["version"] = SpiderPlan::kVersion;
    j["legs"] = plan.graph.legs;
    j["depth"] = plan.graph.depth;
    j["sign"] = plan.sign;
    j["alpha_scale"] = plan.alpha_scale;
    j["alpha"] = plan.families.alpha;
    auto roots = [](const std::vector<SpiderPlan::RootData>& v) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& rd : v) {
            nlohmann::json e;
            e["root"] = rd.root;
            e["hub_weight"] = rd.hub_weight;
            e["profile"] = rd.profile;
            e["inv_norm"] = rd.inv_norm;
            arr.push_back(std::move(e));
        }
        return arr;
    };
    j["beta"] = roots(plan.beta);
    j["gamma"] = roots(plan.gamma);
    return j;
}

SpiderPlan spider_plan_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("version") || j["version"] != SpiderPlan::kVersion)
        throw FormatError("spider plan: missing or unsupported version tag");
    SpiderPlan plan;
    try {
        plan.graph.legs = j.at("legs").get<std::size_t>();
        plan.graph.depth = j.at("depth").get<std::size_t>();
        plan.sign = j.at("sign").get<int>();
        plan.alpha_scale = j.at("alpha_scale").get<double>();
        plan.families.alpha = j.at("alpha").get<std::vector<double>>();
        auto roots = [](const nlohmann::json& arr) {
            std::vector<SpiderPlan::RootData> v;
            for (const auto& e : arr) {
                SpiderPlan::RootData rd;
                rd.root = e.at("root").get<double>();
                rd.hub_weight = e.at("hub_weight").get<double>();
                rd.profile = e.at("profile").get<std::vector<double>>();
                rd.inv_norm = e.at("inv_norm").get<double>();
                v.push_back(std::move(rd));
            }
            return v;
        };
        plan.beta = roots(j.at("beta"));
        plan.gamma = roots(j.at("gamma"));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("spider plan: ") + e.what());
    }
    check_graph(plan.graph);
    for (const auto* fam : {&plan.beta, &plan.gamma}) {
        if (fam->size() != plan.graph.depth)
            throw FormatError("spider plan: family size does not match depth");
        for (const auto& rd : *fam)
            if (rd.profile.size() != plan.graph.depth)
                throw FormatError("spider plan: profile length mismatch");
    }
    for (const auto& rd : plan.beta) plan.families.beta.push_back(rd.root);
    for (const auto& rd : plan.gamma) plan.families.gamma.push_back(rd.root);
    plan.dst.emplace(plan.graph.depth);
    return plan;
}

}  // namespace blocktri
