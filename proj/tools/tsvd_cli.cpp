// tsvd: command-line front end for the estimator and the planted-clique tools.
//
//   tsvd hooi --input y.t3 --ranks r1,r2,r3 [--eps E] [--max-iter T]
//             [--init spectral|warm --truth x.t3 --seed S] --out DIR
//   tsvd instance --dims p1,p2,p3 --ranks r1,r2,r3 --lambda L [--core gaussian|diagonal]
//                 [--noise gaussian|uniform] [--seed S] --out-y y.t3 [--out-x x.t3]
//   tsvd clique sample --n N --kappa K --half 1|2 --seed S --out inst.t3
//   tsvd clique detect --in inst.t3 --n N --kappa K
//   tsvd clique reduce --in inst.t3 --out y.t3 [--trunc-m M] [--mu MU] [--seed S]
//                      [--target p1,p2,p3]
//
// Vertex numbers printed by the clique commands are 1-based.

#include "tsvd/tsvd.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

std::array<std::size_t, 3> to3(const std::vector<std::size_t>& v, const char* what) {
    if (v.size() != 3) throw tsvd::ContractViolation(std::string(what) + " needs three values");
    return {v[0], v[1], v[2]};
}

tsvd::HyperAdjacency load_adjacency(const std::string& path, std::optional<std::size_t> n) {
    const tsvd::Tensor3 t = tsvd::io::load_t3(path);
    auto adj = tsvd::HyperAdjacency::from_tensor(t);
    if (n && *n != adj.n())
        throw tsvd::ContractViolation("--n does not match the instance dimension");
    return adj;
}

int run_hooi(const std::string& input, const std::vector<std::size_t>& ranks_v,
             std::optional<double> eps, int max_iter, const std::string& init,
             const std::string& truth_path, std::uint64_t seed, const std::string& out_dir) {
    const tsvd::Tensor3 y = tsvd::io::load_t3(input);
    tsvd::HooiConfig cfg;
    cfg.ranks = to3(ranks_v, "--ranks");
    cfg.tolerance = eps;
    cfg.max_iters = max_iter;
    if (init == "warm") {
        if (truth_path.empty()) throw tsvd::ContractViolation("--init warm requires --truth");
        const tsvd::Tensor3 x = tsvd::io::load_t3(truth_path);
        if (x.dims() != y.dims()) throw tsvd::ContractViolation("--truth shape differs from input");
        const tsvd::Bases3 truth = tsvd::hosvd_init(x, cfg.ranks);
        const tsvd::RngStream rng{seed, 0};
        tsvd::Bases3 w;
        for (int k = 0; k < 3; ++k)
            w[k] = tsvd::warm_start(truth[k], rng.derive(tsvd::Role::warmstart, k + 1));
        cfg.init = std::move(w);
    }
    const tsvd::HooiResult res = tsvd::hooi(y, cfg);

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    for (int k = 0; k < 3; ++k)
        tsvd::io::save_mat((dir / ("U" + std::to_string(k + 1) + ".mat")).string(),
                           res.factors.bases[k].matrix());
    tsvd::io::save_t3((dir / "core.t3").string(), res.factors.core);
    tsvd::io::save_t3((dir / "xhat.t3").string(), res.reconstruction);
    std::ofstream trace(dir / "trace.csv");
    trace << "iter,objective\n";
    for (std::size_t t = 0; t < res.objective_trace.size(); ++t)
        trace << t << ',' << tsvd::io::format_double(res.objective_trace[t]) << '\n';
    std::cout << "iterations " << res.iters_run << " stop "
              << (res.stop_reason == tsvd::StopReason::tolerance_met ? "tolerance" : "max-iter")
              << " objective " << tsvd::io::format_double(res.objective_trace.back()) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tensor SVD tools"};
    app.require_subcommand(1);

    // hooi
    auto* hooi_cmd = app.add_subcommand("hooi", "estimate Tucker factors of a noisy tensor");
    std::string h_input, h_init = "spectral", h_truth, h_out;
    std::vector<std::size_t> h_ranks;
    double h_eps = -1.0;
    int h_max_iter = 50;
    std::uint64_t h_seed = 0;
    hooi_cmd->add_option("--input", h_input, "observed tensor (.t3)")->required();
    hooi_cmd->add_option("--ranks", h_ranks, "r1,r2,r3")->required()->delimiter(',');
    hooi_cmd->add_option("--eps", h_eps, "objective increment tolerance (default 1e-6*||Y||_F)");
    hooi_cmd->add_option("--max-iter", h_max_iter, "sweep limit")->check(CLI::PositiveNumber);
    hooi_cmd->add_option("--init", h_init, "spectral | warm")
        ->check(CLI::IsMember({"spectral", "warm"}));
    hooi_cmd->add_option("--truth", h_truth, "noiseless tensor for the warm start (.t3)");
    hooi_cmd->add_option("--seed", h_seed, "seed for the warm-start rotation");
    hooi_cmd->add_option("--out", h_out, "output directory")->required();

    // instance
    auto* inst_cmd = app.add_subcommand("instance", "draw a simulated Y = X + Z");
    std::vector<std::size_t> i_dims, i_ranks;
    double i_lambda = 0.0;
    std::string i_core = "gaussian", i_noise = "gaussian", i_out_y, i_out_x;
    std::uint64_t i_seed = 0;
    inst_cmd->add_option("--dims", i_dims, "p1,p2,p3")->required()->delimiter(',');
    inst_cmd->add_option("--ranks", i_ranks, "r1,r2,r3")->required()->delimiter(',');
    inst_cmd->add_option("--lambda", i_lambda, "signal strength")->required();
    inst_cmd->add_option("--core", i_core, "gaussian | diagonal")
        ->check(CLI::IsMember({"gaussian", "diagonal"}));
    inst_cmd->add_option("--noise", i_noise, "gaussian | uniform")
        ->check(CLI::IsMember({"gaussian", "uniform"}));
    inst_cmd->add_option("--seed", i_seed, "seed");
    inst_cmd->add_option("--out-y", i_out_y, "observed tensor (.t3)")->required();
    inst_cmd->add_option("--out-x", i_out_x, "signal tensor (.t3)");

    // clique
    auto* clique_cmd = app.add_subcommand("clique", "hypergraph planted clique tools");
    clique_cmd->require_subcommand(1);
    auto* sample_cmd = clique_cmd->add_subcommand("sample", "sample a planted-clique hypergraph");
    std::size_t c_n = 0, c_kappa = 0;
    int c_half = 1;
    std::uint64_t c_seed = 0;
    std::string c_out;
    sample_cmd->add_option("--n", c_n, "vertices")->required();
    sample_cmd->add_option("--kappa", c_kappa, "clique size")->required();
    sample_cmd->add_option("--half", c_half, "1 or 2")->check(CLI::IsMember({1, 2}));
    sample_cmd->add_option("--seed", c_seed, "seed");
    sample_cmd->add_option("--out", c_out, "adjacency tensor (.t3)")->required();

    auto* detect_cmd = clique_cmd->add_subcommand("detect", "decide which half hosts the clique");
    std::string d_in;
    std::size_t d_n = 0, d_kappa = 0;
    detect_cmd->add_option("--in", d_in, "adjacency tensor (.t3)")->required();
    detect_cmd->add_option("--n", d_n, "vertices")->required();
    detect_cmd->add_option("--kappa", d_kappa, "clique size")->required();

    auto* reduce_cmd = clique_cmd->add_subcommand("reduce", "Gaussianize the corner block");
    std::string r_in, r_out;
    std::optional<double> r_m, r_mu;
    std::vector<std::size_t> r_target;
    std::uint64_t r_seed = 0;
    reduce_cmd->add_option("--in", r_in, "adjacency tensor (.t3)")->required();
    reduce_cmd->add_option("--out", r_out, "reduced tensor (.t3)")->required();
    reduce_cmd->add_option("--trunc-m", r_m, "truncation level (default sqrt(8 log N))");
    reduce_cmd->add_option("--mu", r_mu, "shift (default 1/(2M))");
    reduce_cmd->add_option("--seed", r_seed, "seed");
    reduce_cmd->add_option("--target", r_target, "embed into p1,p2,p3")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (*hooi_cmd) {
            std::optional<double> eps;
            if (h_eps >= 0.0) eps = h_eps;
            return run_hooi(h_input, h_ranks, eps, h_max_iter, h_init, h_truth, h_seed, h_out);
        }
        if (*inst_cmd) {
            const auto inst = tsvd::make_instance(
                to3(i_dims, "--dims"), to3(i_ranks, "--ranks"), i_lambda,
                i_core == "diagonal" ? tsvd::CoreKind::diagonal : tsvd::CoreKind::rescaled_gaussian,
                i_noise == "uniform" ? tsvd::NoiseKind::uniform() : tsvd::NoiseKind::gaussian(),
                tsvd::RngStream{i_seed, 0});
            tsvd::io::save_t3(i_out_y, inst.y);
            if (!i_out_x.empty()) tsvd::io::save_t3(i_out_x, inst.x);
            std::cout << "lambda " << tsvd::io::format_double(inst.lambda_actual) << '\n';
            return 0;
        }
        if (*sample_cmd) {
            const auto inst =
                tsvd::sample_hypergraph(c_n, c_kappa, c_half == 1 ? tsvd::Half::first : tsvd::Half::second,
                                        tsvd::RngStream{c_seed, 0});
            tsvd::io::save_t3(c_out, inst.adjacency.to_tensor());
            std::cout << "clique";
            for (auto v : inst.clique) std::cout << ' ' << v + 1;
            std::cout << '\n';
            return 0;
        }
        if (*detect_cmd) {
            const auto adj = load_adjacency(d_in, d_n);
            std::cout << "half " << (tsvd::detect_half(adj, d_kappa) == tsvd::Half::first ? 1 : 2)
                      << '\n';
            return 0;
        }
        if (*reduce_cmd) {
            const auto adj = load_adjacency(r_in, std::nullopt);
            auto params = tsvd::ReductionParams::for_vertices(adj.n());
            const double m = r_m.value_or(params.trunc_m);
            const double mu = r_mu.value_or(1.0 / (2.0 * m));
            const std::size_t p = adj.n() / 3;
            const tsvd::Dims3 target = r_target.empty() ? tsvd::Dims3{p, p, p} : to3(r_target, "--target");
            params = tsvd::ReductionParams(m, mu, target);
            tsvd::CliqueInstance inst;
            inst.n = adj.n();
            inst.adjacency = adj;
            const auto y = tsvd::gaussianize(inst, params, tsvd::RngStream{r_seed, 0});
            tsvd::io::save_t3(r_out, tsvd::embed(y, params.target_dims));
            std::cout << "M " << tsvd::io::format_double(m) << " mu " << tsvd::io::format_double(mu)
                      << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "tsvd: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
