#include "blocktri/cli_commands.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "blocktri/block_matrix.hpp"
#include "blocktri/errors.hpp"
#include "blocktri/instance_gen.hpp"
#include "blocktri/jordan.hpp"
#include "blocktri/matrix_io.hpp"
#include "blocktri/matrix_polynomial.hpp"
#include "blocktri/spectral.hpp"
#include "blocktri/spider.hpp"

namespace blocktri::cli {
namespace {

using nlohmann::json;

json vector_to_pairs(const std::vector<cplx>& v) {
    json arr = json::array();
    for (cplx z : v) arr.push_back(complex_to_json(z));
    return arr;
}

std::vector<cplx> pairs_to_vector(const json& j, const char* context) {
    if (!j.is_array()) throw FormatError(std::string(context) + ": expected an array");
    std::vector<cplx> v;
    v.reserve(j.size());
    for (const auto& e : j) v.push_back(complex_from_json(e, context));
    return v;
}

// Documents go to stdout unless an output path was given.
void emit(const json& doc, const std::string& out_path) {
    if (out_path.empty() || out_path == "-")
        std::cout << doc.dump(2) << "\n";
    else
        write_json_file(doc, out_path);
}

struct DecomposeArgs {
    std::string input, output;
    bool inverse = false;
    double cluster_tol = 1e-8;
    double null_tol = 1e-10;
};

int cmd_decompose(const DecomposeArgs& args) {
    BlockTridiagonalMatrix a = read_block_tridiagonal(args.input);
    DecompositionOptions opts;
    opts.cluster_tol = args.cluster_tol;
    opts.null_tol = args.null_tol;
    DecompositionOutcome outcome = eigenvector_matrix(a, opts);

    if (!outcome.diagonalizable()) {
        const DefectReport& d = *outcome.defect;
        json items = json::array();
        for (const auto& it : d.items)
            items.push_back({{"lambda", complex_to_json(it.lambda)},
                             {"algebraic", it.algebraic},
                             {"geometric", it.geometric}});
        json doc{{"n", d.n},
                 {"defective", true},
                 {"defect", {{"items", items}, {"total_geometric", d.total_geometric}}}};
        emit(doc, args.output);
        std::cerr << "matrix is defective: total geometric multiplicity " << d.total_geometric
                  << " of " << d.n << "; run the jordan subcommand for chains\n";
        return kDefective;
    }

    const EigenDecomposition& dec = *outcome.decomposition;
    json doc;
    doc["n"] = dec.n;
    doc["defective"] = false;
    doc["cluster_tol"] = dec.cluster_tol;
    doc["null_tol"] = dec.null_tol;
    json evs = json::array();
    for (std::size_t m = 0; m < dec.spectrum.entries.size(); ++m) {
        const auto& e = dec.spectrum.entries[m];
        json vecs = json::array();
        std::size_t off = dec.column_offset(m);
        for (std::size_t c = 0; c < e.multiplicity; ++c)
            vecs.push_back(vector_to_pairs(dec.v.column(off + c)));
        evs.push_back({{"lambda", complex_to_json(e.lambda)},
                       {"multiplicity", e.multiplicity},
                       {"vectors", vecs}});
    }
    doc["eigenvalues"] = evs;
    doc["residual_av"] = dec.residual_av;

    if (args.inverse) {
        InverseResult inv = inverse_eigenvector_matrix(a, dec);
        json rows = json::array();
        for (std::size_t i = 0; i < inv.w.rows(); ++i) {
            std::vector<cplx> r(inv.w.row(i), inv.w.row(i) + inv.w.cols());
            rows.push_back(vector_to_pairs(r));
        }
        doc["inverse"] = rows;
        doc["residual_wv"] = inv.residual_wv;
        doc["offblock_prenorm"] = inv.offblock_prenorm;
    }
    emit(doc, args.output);
    return kOk;
}

struct SpectrumArgs {
    std::string input, output, basis;
    double cluster_tol = 1e-8;
    double diag_tol = 1e-10;
};

int cmd_spectrum(const SpectrumArgs& args) {
    BlockTridiagonalMatrix a = read_block_tridiagonal(args.input);
    Spectrum spec;
    if (!args.basis.empty()) {
        json bj = read_json_file(args.basis);
        if (!bj.is_object() || !bj.contains("k") || !bj.contains("m"))
            throw FormatError("basis document needs fields k and m");
        auto bk = bj.at("k").get<std::size_t>();
        ComplexMatrix u = matrix_from_json(bj.at("m"), bk, bk, "basis");
        spec = commuting_fast_path(a, u, args.diag_tol, args.cluster_tol).spectrum;
    } else {
        spec = matrix_spectrum(a, args.cluster_tol);
    }
    json evs = json::array();
    for (const auto& e : spec.entries)
        evs.push_back({{"lambda", complex_to_json(e.lambda)}, {"multiplicity", e.multiplicity}});
    emit(json{{"n", a.dense_dim()}, {"eigenvalues", evs}, {"cluster_tol", args.cluster_tol}},
         args.output);
    return kOk;
}

struct JordanArgs {
    std::string input, output;
    std::vector<double> lambda;  // empty = all roots, else re [im]
    std::size_t max_length = 0;
    double seed_tol = 1e-8;
    double verify_tol = 1e-8;
    double cluster_tol = 1e-8;
    double null_tol = 1e-10;
};

json chain_to_json(const JordanChain& c) {
    json vecs = json::array();
    for (const auto& v : c.vectors) vecs.push_back(vector_to_pairs(v));
    return json{{"seed", vector_to_pairs(c.seed)},
                {"length", c.length()},
                {"residuals", c.residuals},
                {"vectors", vecs}};
}

int cmd_jordan(const JordanArgs& args) {
    BlockTridiagonalMatrix a = read_block_tridiagonal(args.input);
    ChainOptions opts;
    opts.max_length = args.max_length;
    opts.seed_tol = args.seed_tol;
    opts.verify_tol = args.verify_tol;

    std::vector<cplx> points;
    if (!args.lambda.empty()) {
        points.push_back(cplx(args.lambda[0], args.lambda.size() > 1 ? args.lambda[1] : 0.0));
    } else {
        for (const auto& e : matrix_spectrum(a, args.cluster_tol, args.null_tol).entries)
            points.push_back(e.lambda);
    }

    json analyses = json::array();
    for (cplx lambda : points) {
        JordanAnalysis an = jordan_analysis(a, lambda, opts, args.null_tol);
        json chains = json::array();
        for (const auto& c : an.chains) chains.push_back(chain_to_json(c));
        analyses.push_back({{"lambda", complex_to_json(an.lambda)},
                            {"geometric", an.eigenbasis.dim()},
                            {"chains", chains}});
    }
    emit(json{{"n", a.dense_dim()}, {"analyses", analyses}}, args.output);
    return kOk;
}

struct SpiderArgs {
    std::string output, plan_in, plan_out, expand;
    std::size_t legs = 0, depth = 0;
    bool direct = false;
};

int cmd_spider(const SpiderArgs& args) {
    SpiderPlan plan;
    if (!args.plan_in.empty()) {
        plan = spider_plan_from_json(read_json_file(args.plan_in));
    } else {
        if (args.legs == 0 || args.depth == 0)
            throw std::invalid_argument("spider needs --legs and --depth (or --plan-in)");
        plan = build_spider_plan({args.legs, args.depth});
    }
    if (!args.plan_out.empty()) write_json_file(spider_plan_to_json(plan), args.plan_out);

    std::size_t n = plan.graph.legs * plan.graph.depth;
    if (!args.expand.empty()) {
        std::vector<cplx> y = read_vector(args.expand);
        if (y.size() != n)
            throw std::invalid_argument("expansion vector length " + std::to_string(y.size()) +
                                        " does not match n = " + std::to_string(n));
        bool real = true;
        for (cplx z : y)
            if (z.imag() != 0.0) real = false;

        json doc{{"n", n}, {"mode", args.direct ? "direct" : "fast"}};
        if (real) {
            std::vector<double> yr(n);
            for (std::size_t i = 0; i < n; ++i) yr[i] = y[i].real();
            ExpansionResult r =
                args.direct ? direct_expansion(plan, yr) : fast_expansion(plan, yr);
            std::vector<cplx> coeffs(r.coefficients.begin(), r.coefficients.end());
            doc["coefficients"] = vector_to_pairs(coeffs);
            doc["alpha_ops"] = r.alpha_ops;
            doc["other_ops"] = r.other_ops;
        } else {
            doc["coefficients"] = vector_to_pairs(expand_complex(plan, y, args.direct));
        }
        emit(doc, args.output);
        return kOk;
    }

    SpiderSpectrum s = spider_spectrum(plan.graph);
    json evs = json::array();
    for (const auto& e : s.spectrum.entries)
        evs.push_back({{"lambda", complex_to_json(e.lambda)}, {"multiplicity", e.multiplicity}});
    emit(json{{"n", n},
              {"legs", plan.graph.legs},
              {"depth", plan.graph.depth},
              {"alpha", s.families.alpha},
              {"beta", s.families.beta},
              {"gamma", s.families.gamma},
              {"eigenvalues", evs}},
         args.output);
    return kOk;
}

struct GenArgs {
    std::string kind, output, basis_out, truth_out;
    std::size_t k = 2, l = 3;
    std::uint64_t seed = 1;
};

int cmd_gen(const GenArgs& args) {
    if (args.output.empty()) throw std::invalid_argument("gen requires --output");
    if (args.kind == "random") {
        write_block_tridiagonal(gen_random(args.k, args.l, args.seed), args.output);
    } else if (args.kind == "symmetric") {
        write_block_tridiagonal(gen_symmetric(args.k, args.l, args.seed), args.output);
    } else if (args.kind == "commuting") {
        CommutingInstance inst = gen_commuting(args.k, args.l, args.seed);
        write_block_tridiagonal(inst.matrix, args.output);
        if (!args.basis_out.empty())
            write_json_file(json{{"k", args.k}, {"m", matrix_to_json(inst.basis)}},
                            args.basis_out);
    } else if (args.kind == "nilpotent") {
        write_block_tridiagonal(gen_nilpotent(args.k, args.l), args.output);
    } else if (args.kind == "defective") {
        DefectiveInstance inst = gen_defective(args.k, args.l, args.seed);
        write_block_tridiagonal(inst.matrix, args.output);
        if (!args.truth_out.empty()) {
            json truth = json::array();
            for (const auto& t : inst.truth)
                truth.push_back({{"lambda", complex_to_json(t.lambda)},
                                 {"algebraic", t.algebraic},
                                 {"geometric", t.geometric},
                                 {"chain_count", t.chain_count},
                                 {"chain_length", t.chain_length}});
            write_json_file(json{{"eigenvalues", truth}}, args.truth_out);
        }
    } else if (args.kind == "spider") {
        write_block_tridiagonal(spider_adjacency({args.k, args.l}), args.output);
    } else {
        throw std::invalid_argument("unknown instance kind: " + args.kind);
    }
    return kOk;
}

struct VerifyArgs {
    std::string matrix, decomposition, output;
    double tol = 0.0;  // 0 = 1e-8 * sqrt(n)
};

int cmd_verify(const VerifyArgs& args) {
    BlockTridiagonalMatrix a = read_block_tridiagonal(args.matrix);
    json doc = read_json_file(args.decomposition);
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("eigenvalues"))
        throw FormatError("decomposition document needs fields n and eigenvalues");
    if (doc.value("defective", false))
        throw std::invalid_argument("decomposition records a defective matrix; nothing to verify");

    auto n = doc.at("n").get<std::size_t>();
    if (n != a.dense_dim())
        throw std::invalid_argument("decomposition dimension does not match the matrix");

    ComplexMatrix v(n, n);
    std::vector<cplx> lambdas;
    std::size_t col = 0;
    for (const auto& ej : doc.at("eigenvalues")) {
        cplx lambda = complex_from_json(ej.at("lambda"), "lambda");
        for (const auto& vj : ej.at("vectors")) {
            std::vector<cplx> column = pairs_to_vector(vj, "eigenvector");
            if (column.size() != n || col >= n)
                throw FormatError("eigenvector count or length does not match n");
            v.set_column(col, column);
            lambdas.push_back(lambda);
            ++col;
        }
    }
    if (col != n) throw FormatError("decomposition does not hold a full eigenvector basis");

    double num = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<cplx> vj = v.column(j);
        std::vector<cplx> r = vector_add_scaled(matvec(a, vj), -lambdas[j], vj);
        double nr = vector_norm(r);
        num += nr * nr;
    }
    double denom = frobenius_norm(a);
    double residual_av = std::sqrt(num) / (denom > 0.0 ? denom : 1.0);

    double tol = args.tol > 0.0 ? args.tol : 1e-8 * std::sqrt(static_cast<double>(n));
    bool pass = residual_av <= tol;

    json report{{"n", n}, {"residual_av", residual_av}, {"tol", tol}};
    if (doc.contains("inverse")) {
        const json& rows = doc.at("inverse");
        if (!rows.is_array() || rows.size() != n)
            throw FormatError("inverse must hold n rows");
        ComplexMatrix w(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<cplx> r = pairs_to_vector(rows[i], "inverse row");
            if (r.size() != n) throw FormatError("inverse row length does not match n");
            for (std::size_t j = 0; j < n; ++j) w(i, j) = r[j];
        }
        ComplexMatrix wv = w * v;
        ComplexMatrix eye = ComplexMatrix::identity(n);
        wv -= eye;
        double residual_wv = wv.frobenius_norm();
        report["residual_wv"] = residual_wv;
        pass = pass && residual_wv <= tol;
    }
    report["pass"] = pass;
    emit(report, args.output);
    if (!pass) {
        std::cerr << "verification failed: residuals exceed " << tol << "\n";
        return kNumericalError;
    }
    return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Exact eigenstructure of block tridiagonal matrices"};
    app.require_subcommand(1);

    DecomposeArgs dargs;
    auto* dec = app.add_subcommand(
        "decompose", "Eigenvalues, eigenvectors, and optionally the inverse eigenvector matrix");
    dec->add_option("input", dargs.input, "matrix document")->required();
    dec->add_option("-o,--output", dargs.output, "output path (default stdout)");
    dec->add_flag("--inverse", dargs.inverse, "also compute V^-1 through the transposed recurrence");
    dec->add_option("--cluster-tol", dargs.cluster_tol, "root clustering tolerance");
    dec->add_option("--null-tol", dargs.null_tol, "null space rank tolerance");

    SpectrumArgs sargs;
    auto* spec = app.add_subcommand("spectrum", "Eigenvalues with multiplicities only");
    spec->add_option("input", sargs.input, "matrix document")->required();
    spec->add_option("-o,--output", sargs.output, "output path (default stdout)");
    spec->add_option("--commuting", sargs.basis,
                     "shared eigenbasis document; enables the per-channel fast path");
    spec->add_option("--cluster-tol", sargs.cluster_tol, "root clustering tolerance");
    spec->add_option("--diag-tol", sargs.diag_tol, "off-diagonal tolerance for the fast path");

    JordanArgs jargs;
    auto* jor = app.add_subcommand("jordan", "Jordan chains per eigenvalue");
    jor->add_option("input", jargs.input, "matrix document")->required();
    jor->add_option("-o,--output", jargs.output, "output path (default stdout)");
    jor->add_option("--lambda", jargs.lambda, "eigenvalue (re [im]); default: every root")
        ->expected(1, 2);
    jor->add_option("--max-length", jargs.max_length, "chain length cap (0 = dimension)");
    jor->add_option("--seed-tol", jargs.seed_tol, "derivative annihilation tolerance");
    jor->add_option("--verify-tol", jargs.verify_tol, "per-link verification tolerance");
    jor->add_option("--cluster-tol", jargs.cluster_tol, "root clustering tolerance");
    jor->add_option("--null-tol", jargs.null_tol, "null space rank tolerance");

    SpiderArgs pargs;
    auto* spi = app.add_subcommand("spider",
                                   "Spider graph spectra and fast eigenvector expansions");
    spi->add_option("--legs", pargs.legs, "channel count K (hub plus K-1 legs)");
    spi->add_option("--depth", pargs.depth, "depth L");
    spi->add_option("--plan-in", pargs.plan_in, "load a stored expansion plan");
    spi->add_option("--plan-out", pargs.plan_out, "store the expansion plan");
    spi->add_option("--expand", pargs.expand, "vector document to expand in the eigenbasis");
    spi->add_flag("--direct", pargs.direct, "use the quadratic reference expansion");
    spi->add_option("-o,--output", pargs.output, "output path (default stdout)");

    GenArgs gargs;
    auto* gen = app.add_subcommand("gen", "Write a generated test instance");
    gen->add_option("kind", gargs.kind,
                    "random | symmetric | commuting | nilpotent | defective | spider")
        ->required();
    gen->add_option("-k,--block-size", gargs.k, "block size (spider: legs)");
    gen->add_option("-l,--blocks", gargs.l, "block rows (spider: depth)");
    gen->add_option("--seed", gargs.seed, "random seed");
    gen->add_option("-o,--output", gargs.output, "matrix output path")->required();
    gen->add_option("--basis-out", gargs.basis_out, "commuting: shared eigenbasis output path");
    gen->add_option("--truth-out", gargs.truth_out, "defective: ground truth output path");

    VerifyArgs vargs;
    auto* ver = app.add_subcommand("verify", "Recompute residuals of a stored decomposition");
    ver->add_option("matrix", vargs.matrix, "matrix document")->required();
    ver->add_option("decomposition", vargs.decomposition, "decomposition document")->required();
    ver->add_option("-o,--output", vargs.output, "report output path (default stdout)");
    ver->add_option("--tol", vargs.tol, "residual bound (default 1e-8 sqrt(n))");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& s : args) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsageError;
    }

    try {
        if (app.got_subcommand(dec)) return cmd_decompose(dargs);
        if (app.got_subcommand(spec)) return cmd_spectrum(sargs);
        if (app.got_subcommand(jor)) return cmd_jordan(jargs);
        if (app.got_subcommand(spi)) return cmd_spider(pargs);
        if (app.got_subcommand(gen)) return cmd_gen(gargs);
        if (app.got_subcommand(ver)) return cmd_verify(vargs);
        std::cerr << "no subcommand selected\n";
        return kUsageError;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kIoError;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return kIoError;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition not met: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kUsageError;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericalError;
    }
}

}  // namespace blocktri::cli
