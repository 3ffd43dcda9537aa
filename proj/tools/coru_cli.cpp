// Command-line front end: synthetic matrix generation, singular-value and
// low-rank error sweeps, robust PCA, image reconstruction, and the flop
// model. All seeded commands are end-to-end reproducible; diagnostics go to
// stderr. Exit codes: 0 success, 2 usage, 3 I/O, 4 numeric precondition.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coru/coru.hpp"

using namespace coru;

namespace {

RngSeed make_seed(std::uint64_t seed, std::uint64_t stream) { return {seed, stream}; }

std::string with_suffix(const std::string& path, const std::string& tag) {
    const auto dot = path.find_last_of('.');
    const auto slash = path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + "." + tag;
    return path.substr(0, dot) + "." + tag + path.substr(dot);
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- gen

struct GenArgs {
    std::string family, out;
    std::size_t n = 400, k = 20;
    double gap = 0.01, amp = 80.0;
    std::uint64_t s = 0, seed = 0, stream = 0;
};

void run_gen(const GenArgs& a) {
    const RngSeed seed = make_seed(a.seed, a.stream);
    if (a.family == "noisy-lowrank") {
        write_matrix(a.out, gen_noisy_lowrank(a.n, a.k, a.gap, seed));
    } else if (a.family == "fastdecay" || a.family == "fast-decay") {
        write_matrix(a.out, gen_fast_decay(a.n, a.k, seed));
    } else if (a.family == "rpca") {
        RpcaInstance inst = gen_rpca_instance(a.n, a.k, a.s, a.amp, seed);
        write_matrix(a.out, inst.m);
        write_matrix(with_suffix(a.out, "L"), inst.l_true);
        write_matrix(with_suffix(a.out, "S"), inst.s_true);
    } else {
        throw UsageError("gen: unknown --family '" + a.family + "'");
    }
}

// ---------------------------------------------------------------- singvals

struct SingvalsArgs {
    std::string in, method, out;
    std::size_t rank = 0;
    int power = 0;
    std::uint64_t seed = 0, stream = 0;
};

void run_singvals(const SingvalsArgs& a) {
    const Matrix m = read_matrix(a.in);
    std::vector<double> est;
    if (a.method == "svd") {
        est = svd(m).sigma;
        if (a.rank > 0 && a.rank < est.size()) est.resize(a.rank);
    } else if (a.method == "qrcp") {
        QrcpFactors f = qrcp(m);
        const std::size_t count = a.rank > 0 ? std::min(a.rank, m.cols()) : m.cols();
        for (std::size_t j = 0; j < count; ++j) est.push_back(std::abs(f.r(j, j)));
    } else if (a.method == "corutv") {
        if (a.rank == 0) throw UsageError("singvals: --rank is required for corutv");
        est = singular_estimates(corutv(m, a.rank, a.power, DVariant::exact,
                                        make_seed(a.seed, a.stream)));
    } else if (a.method == "tsrsvd") {
        if (a.rank == 0) throw UsageError("singvals: --rank is required for tsrsvd");
        est = tsr_svd(m, a.rank, make_seed(a.seed, a.stream)).sigma;
    } else {
        throw UsageError("singvals: unknown --method '" + a.method + "'");
    }
    std::string csv;
    for (std::size_t j = 0; j < est.size(); ++j)
        csv += std::to_string(j + 1) + "," + format_double(est[j]) + "\n";
    detail::write_file(a.out, csv);
}

// ---------------------------------------------------------------- lowrank-error

struct LowrankArgs {
    std::string in, method, ranks, norm_kind = "fro", out;
    int power = 0, trials = 20;
    std::uint64_t seed = 0, stream = 0;
};

std::vector<std::size_t> parse_ranks(const std::string& spec) {
    std::size_t a = 0, b = 0, step = 1;
    const auto c1 = spec.find(':');
    if (c1 == std::string::npos) throw UsageError("lowrank-error: --ranks must be a:b or a:b:step");
    const auto c2 = spec.find(':', c1 + 1);
    try {
        a = std::stoull(spec.substr(0, c1));
        b = std::stoull(spec.substr(c1 + 1, c2 == std::string::npos ? std::string::npos
                                                                    : c2 - c1 - 1));
        if (c2 != std::string::npos) step = std::stoull(spec.substr(c2 + 1));
    } catch (const std::exception&) {
        throw UsageError("lowrank-error: bad --ranks '" + spec + "'");
    }
    if (a < 1 || b < a || step < 1) throw UsageError("lowrank-error: bad --ranks range");
    std::vector<std::size_t> out;
    for (std::size_t r = a; r <= b; r += step) out.push_back(r);
    return out;
}

void run_lowrank_error(const LowrankArgs& a) {
    const Matrix m = read_matrix(a.in);
    const bool spec_norm = a.norm_kind == "spec";
    if (!spec_norm && a.norm_kind != "fro")
        throw UsageError("lowrank-error: --norm must be fro or spec");
    if (a.trials < 1) throw UsageError("lowrank-error: --trials must be >= 1");
    const auto ranks = parse_ranks(a.ranks);
    // validate the whole sweep up front so no trial can fail mid-loop
    const std::size_t min_dim = std::min(m.rows(), m.cols());
    if (a.method == "corutv" || a.method == "tsrsvd") {
        if (ranks.back() >= min_dim)
            throw std::invalid_argument("lowrank-error: ranks must stay below min(rows, cols)");
    } else if (ranks.back() > (a.method == "qrcp" ? m.cols() : min_dim)) {
        throw std::invalid_argument("lowrank-error: rank exceeds the matrix dimensions");
    }
    const auto err_of = [&](const Matrix& approx) {
        Matrix e = m - approx;
        return spec_norm ? spectral_norm(e) : frobenius_norm(e);
    };

    std::string csv;
    const auto emit = [&](std::size_t rank, const std::vector<double>& errs) {
        const auto [mn, mx] = std::minmax_element(errs.begin(), errs.end());
        double mean = 0.0;
        for (double e : errs) mean += e;
        mean /= double(errs.size());
        csv += std::to_string(rank) + "," + format_double(mean) + "," + format_double(*mn) + "," +
               format_double(*mx) + "\n";
    };

    if (a.method == "svd") {
        SvdFactors f = svd(m);
        for (std::size_t rank : ranks) {
            double e;
            if (rank >= f.sigma.size()) e = 0.0;
            else if (spec_norm) e = f.sigma[rank];
            else {
                double t = 0.0;
                for (std::size_t j = rank; j < f.sigma.size(); ++j) t += f.sigma[j] * f.sigma[j];
                e = std::sqrt(t);
            }
            emit(rank, {e});
        }
    } else if (a.method == "qrcp") {
        for (std::size_t rank : ranks) emit(rank, {err_of(qrcp_rank_k(m, rank))});
    } else if (a.method == "corutv" || a.method == "tsrsvd") {
        for (std::size_t rank : ranks) {
            std::vector<double> errs(a.trials);
            parallel_for(std::size_t(a.trials), [&](std::size_t t) {
                const RngSeed s = make_seed(a.seed, a.stream + t);
                if (a.method == "corutv")
                    errs[t] = err_of(reconstruct(corutv(m, rank, a.power, DVariant::exact, s)));
                else
                    errs[t] = err_of(svd_truncate(tsr_svd(m, rank, s), rank));
            });
            emit(rank, errs);
        }
    } else {
        throw UsageError("lowrank-error: unknown --method '" + a.method + "'");
    }
    detail::write_file(a.out, csv);
}

// ---------------------------------------------------------------- rpca

struct RpcaArgs {
    std::string in, inner = "corutv", out_prefix;
    std::vector<std::string> stack;
    double lambda = 0.0, tol = 1e-5;
    int max_iter = 50, power = 1;
    std::size_t rank_hint = 0;
    std::uint64_t seed = 0, stream = 0;
};

void run_rpca(const RpcaArgs& a) {
    Matrix m(1, 1);
    if (!a.stack.empty()) {
        // numbered frames become the columns of M, each scanned row-major
        Matrix first = read_pgm(a.stack.front());
        const std::size_t pixels = first.size();
        Matrix stacked(pixels, a.stack.size());
        for (std::size_t f = 0; f < a.stack.size(); ++f) {
            Matrix frame = f == 0 ? std::move(first) : read_pgm(a.stack[f]);
            if (frame.size() != pixels)
                throw IoError("rpca --stack: frame " + a.stack[f] + " has mismatched size");
            for (std::size_t i = 0; i < pixels; ++i) stacked(i, f) = frame.data()[i];
        }
        m = std::move(stacked);
    } else if (!a.in.empty()) {
        m = read_matrix(a.in);
    } else {
        throw UsageError("rpca: provide --in or --stack");
    }

    RpcaConfig cfg;
    cfg.lambda = a.lambda;
    cfg.tol = a.tol;
    cfg.max_iter = a.max_iter;
    cfg.inner = a.inner == "svt" ? RpcaInner::svt_exact : RpcaInner::corutv;
    if (a.inner != "svt" && a.inner != "corutv")
        throw UsageError("rpca: --inner must be svt or corutv");
    cfg.corutv_ell = a.rank_hint > 0 ? 2 * a.rank_hint : 0;
    cfg.corutv_q = a.power;

    const auto t0 = std::chrono::steady_clock::now();
    RpcaResult res = alm_rpca(m, cfg, make_seed(a.seed, a.stream));
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_matrix(a.out_prefix + ".L.bin", res.l);
    write_matrix(a.out_prefix + ".S.bin", res.s);
    nlohmann::json report{{"iterations", res.iterations},
                          {"converged", res.converged},
                          {"rank_l", res.rank_l},
                          {"s_l0", res.s_l0},
                          {"zeta", res.residuals},
                          {"inner", a.inner},
                          {"tol", a.tol}};
    detail::write_file(a.out_prefix + ".report.json", report.dump(2) + "\n");
    std::cerr << "rpca: " << res.iterations << " iterations, zeta=" << res.residuals.back()
              << ", rank_l=" << res.rank_l << ", wall=" << wall << "s\n";
    if (!res.converged)
        std::cerr << "rpca: warning: not converged within --max-iter " << a.max_iter << "\n";
    if (res.ell_clamped) std::cerr << "rpca: warning: corutv ell clamped to min(m,n)-1\n";
}

// ---------------------------------------------------------------- image-approx

struct ImageArgs {
    std::string in, method = "corutv", out, report;
    std::size_t rank = 0;
    int power = 0;
    std::uint64_t seed = 0, stream = 0;
};

void run_image_approx(const ImageArgs& a) {
    const Matrix img = read_pgm(a.in);
    Matrix approx(1, 1);
    if (a.method == "svd") {
        approx = svd_rank_k(img, a.rank);
    } else if (a.method == "qrcp") {
        approx = img.rows() >= img.cols() ? qrcp_rank_k(img, a.rank)
                                          : qrcp_rank_k(img.transposed(), a.rank).transposed();
    } else if (a.method == "corutv") {
        UtvApprox f = corutv(img, std::min(2 * a.rank, std::min(img.rows(), img.cols()) - 1),
                             a.power, DVariant::exact, make_seed(a.seed, a.stream));
        approx = truncate_rank_k(f, a.rank);
    } else {
        throw UsageError("image-approx: unknown --method '" + a.method + "'");
    }
    const double err = frobenius_norm(img - approx);
    write_pgm(a.out, approx);
    if (!a.report.empty())
        detail::write_file(a.report, std::to_string(a.rank) + "," + format_double(err) + "\n");
}

// ---------------------------------------------------------------- flops

struct FlopsArgs {
    std::size_t m = 0, n = 0, l = 0;
    int power = 0;
    std::string variant = "exact";
};

void run_flops(const FlopsArgs& a) {
    const DVariant v = a.variant == "approx" ? DVariant::approx : DVariant::exact;
    if (a.variant != "exact" && a.variant != "approx")
        throw UsageError("flops: --variant must be exact or approx");
    FlopModel f = flop_estimate(a.m, a.n, a.l, a.power, v);
    std::cout << "total " << format_double(f.total) << "\npasses " << f.passes << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CoR-UTV low-rank decompositions, baselines, and robust PCA"};
    app.require_subcommand(1);

    GenArgs ga;
    auto* gen = app.add_subcommand("gen", "generate a synthetic test matrix");
    gen->add_option("--family", ga.family, "noisy-lowrank | fastdecay | rpca")->required();
    gen->add_option("--n", ga.n, "matrix order");
    gen->add_option("--k", ga.k, "numerical rank (rpca: rank of L)");
    gen->add_option("--gap", ga.gap, "noise level (noisy-lowrank)");
    gen->add_option("--s", ga.s, "sparse nonzero count (rpca)");
    gen->add_option("--amp", ga.amp, "sparse amplitude (rpca)");
    gen->add_option("--seed", ga.seed, "seed");
    gen->add_option("--stream", ga.stream, "stream");
    gen->add_option("--out", ga.out, "output path (.bin or .csv)")->required();

    SingvalsArgs sa;
    auto* sv = app.add_subcommand("singvals", "singular value estimates as CSV (index,estimate)");
    sv->add_option("--in", sa.in)->required();
    sv->add_option("--method", sa.method, "svd | qrcp | corutv | tsrsvd")->required();
    sv->add_option("--rank", sa.rank, "sample size ell / leading count");
    sv->add_option("--power", sa.power, "power iterations q");
    sv->add_option("--seed", sa.seed);
    sv->add_option("--stream", sa.stream);
    sv->add_option("--out", sa.out)->required();

    LowrankArgs la;
    auto* le = app.add_subcommand("lowrank-error",
                                  "rank sweep of approximation errors as CSV (rank,mean,min,max)");
    le->add_option("--in", la.in)->required();
    le->add_option("--method", la.method, "svd | qrcp | corutv | tsrsvd")->required();
    le->add_option("--ranks", la.ranks, "a:b or a:b:step")->required();
    le->add_option("--power", la.power, "power iterations q");
    le->add_option("--trials", la.trials, "random trials per rank (default 20)");
    le->add_option("--seed", la.seed);
    le->add_option("--stream", la.stream);
    le->add_option("--norm", la.norm_kind, "fro | spec");
    le->add_option("--out", la.out)->required();

    RpcaArgs ra;
    auto* rp = app.add_subcommand("rpca", "robust PCA: M = L + S");
    rp->add_option("--in", ra.in, "input matrix");
    rp->add_option("--stack", ra.stack, "PGM frames stacked column-wise instead of --in");
    rp->add_option("--inner", ra.inner, "svt | corutv");
    rp->add_option("--lambda", ra.lambda, "sparsity weight (default 1/sqrt(max(m,n)))");
    rp->add_option("--tol", ra.tol, "stopping tolerance on zeta");
    rp->add_option("--max-iter", ra.max_iter);
    rp->add_option("--rank-hint", ra.rank_hint, "sets corutv ell = 2*hint");
    rp->add_option("--power", ra.power, "corutv power iterations q");
    rp->add_option("--seed", ra.seed);
    rp->add_option("--stream", ra.stream);
    rp->add_option("--out-prefix", ra.out_prefix, "writes <prefix>.L.bin/.S.bin/.report.json")
        ->required();

    ImageArgs ia;
    auto* im = app.add_subcommand("image-approx", "rank-k reconstruction of a PGM image");
    im->add_option("--in", ia.in)->required();
    im->add_option("--rank", ia.rank)->required();
    im->add_option("--method", ia.method, "svd | qrcp | corutv");
    im->add_option("--power", ia.power, "power iterations q");
    im->add_option("--seed", ia.seed);
    im->add_option("--stream", ia.stream);
    im->add_option("--out", ia.out, "reconstructed PGM")->required();
    im->add_option("--report", ia.report, "one-row CSV (rank, Frobenius error before clamping)");

    FlopsArgs fa;
    auto* fl = app.add_subcommand("flops", "analytical cost model");
    fl->add_option("--m", fa.m)->required();
    fl->add_option("--n", fa.n)->required();
    fl->add_option("--l", fa.l)->required();
    fl->add_option("--power", fa.power, "power iterations q");
    fl->add_option("--variant", fa.variant, "exact | approx");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) run_gen(ga);
        else if (sv->parsed()) run_singvals(sa);
        else if (le->parsed()) run_lowrank_error(la);
        else if (rp->parsed()) run_rpca(ra);
        else if (im->parsed()) run_image_approx(ia);
        else if (fl->parsed()) run_flops(fa);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
