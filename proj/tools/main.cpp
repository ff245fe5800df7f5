// SPDX-License-Identifier: Apache-2.0
// Command-line interface: training demos (dqc-ode, dqc-laplace, qubo),
// verification reports (qft-check, daqc-check, diff-check) and program dumps.
#include "daqsim/apps.hpp"
#include "daqsim/daqc.hpp"
#include "daqsim/diff.hpp"
#include "daqsim/hamiltonian.hpp"
#include "daqsim/model.hpp"
#include "daqsim/statevector.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <numbers>
#include <random>

using namespace daqsim;
using nlohmann::json;

namespace {

void write_or_print(const std::string &path, const std::string &content) {
    if (path.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n')
            std::cout << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    out << content;
}

std::string trace_csv(const std::vector<double> &trace) {
    std::string out = "iter,loss\n";
    char buf[64];
    for (size_t i = 0; i < trace.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.12g\n", i, trace[i]);
        out += buf;
    }
    return out;
}

json trace_json(const std::vector<double> &trace) {
    json rows = json::array();
    for (size_t i = 0; i < trace.size(); ++i)
        rows.push_back({{"iter", i}, {"loss", trace[i]}});
    return rows;
}

double aligned_error(const Eigen::MatrixXcd &u, const Eigen::MatrixXcd &ref) {
    const std::complex<double> tr = (ref.adjoint() * u).trace();
    const std::complex<double> phase = std::abs(tr) > 1e-15 ? tr / std::abs(tr) : 1.0;
    return (u - phase * ref).cwiseAbs().maxCoeff();
}

struct CommonArgs {
    std::uint64_t seed = 0;
    std::string out;
    std::string trace_out;
    std::string format = "csv";
};

void add_common(CLI::App *cmd, CommonArgs &args, bool seed_required = false) {
    auto *seed_opt = cmd->add_option("--seed", args.seed, "RNG seed (sampling, init, training)");
    if (seed_required)
        seed_opt->required();
    cmd->add_option("--out", args.out, "output path (stdout when omitted)");
    cmd->add_option("--trace", args.trace_out, "write the loss trace to this path");
    cmd->add_option("--format", args.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

int run_dqc_ode(const CommonArgs &args, int epochs, int points, double lr) {
    QuantumModel model = make_dqc_ode_model(args.seed);
    TrainConfig cfg;
    cfg.max_iter = epochs;
    cfg.learning_rate = lr;
    cfg.seed = args.seed;
    TrainResult result = train_adam(model, dqc_ode_epoch_loss(points), cfg);

    const int grid = 100;
    std::string csv = "x,prediction,exact\n";
    json rows = json::array();
    double mse = 0.0;
    for (int k = 0; k < grid; ++k) {
        const double x = -1.0 + 2.0 * k / (grid - 1);
        const double pred = model.expectation_single({{"x", x}});
        const double exact = dqc_ode_exact(x);
        mse += (pred - exact) * (pred - exact) / grid;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%.6f,%.12g,%.12g\n", x, pred, exact);
        csv += buf;
        if (args.format == "json")
            rows.push_back({{"x", x}, {"prediction", pred}, {"exact", exact}});
    }
    if (args.format == "json")
        write_or_print(args.out, json{{"solution", rows}, {"mse", mse}}.dump(2));
    else
        write_or_print(args.out, csv);
    if (!args.trace_out.empty())
        write_or_print(args.trace_out, args.format == "json" ? trace_json(result.trace).dump(2)
                                                             : trace_csv(result.trace));
    std::cerr << "final loss " << result.trace.back() << ", grid mse " << mse << "\n";
    return 0;
}

int run_dqc_laplace(const CommonArgs &args, int epochs, int points, double lr, int grid) {
    QuantumModel model = make_dqc_laplace_model(args.seed);
    TrainConfig cfg;
    cfg.max_iter = epochs;
    cfg.learning_rate = lr;
    cfg.seed = args.seed;
    TrainResult result = train_adam(model, dqc_laplace_epoch_loss(points), cfg);

    std::string csv = "x,y,prediction,exact\n";
    json rows = json::array();
    double mse = 0.0;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const double x = double(i) / (grid - 1);
            const double y = double(j) / (grid - 1);
            const double pred = model.expectation_single({{"x", x}, {"y", y}});
            const double exact = dqc_laplace_exact(x, y);
            mse += (pred - exact) * (pred - exact) / (grid * grid);
            char buf[128];
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.12g,%.12g\n", x, y, pred, exact);
            csv += buf;
            if (args.format == "json")
                rows.push_back({{"x", x}, {"y", y}, {"prediction", pred}, {"exact", exact}});
        }
    if (args.format == "json")
        write_or_print(args.out, json{{"solution", rows}, {"mse", mse}}.dump(2));
    else
        write_or_print(args.out, csv);
    if (!args.trace_out.empty())
        write_or_print(args.trace_out, args.format == "json" ? trace_json(result.trace).dump(2)
                                                             : trace_csv(result.trace));
    std::cerr << "final loss " << result.trace.back() << ", grid mse " << mse << "\n";
    return 0;
}

int run_qubo(const CommonArgs &args, long long shots, int layers, int iters,
             const std::string &register_in, const std::string &register_out) {
    Eigen::MatrixXd q = demo_qubo_matrix();
    QuboProblem problem{q, shots, layers};

    json report;
    Register reg = Register::line(1);
    if (!register_in.empty()) {
        std::ifstream in(register_in);
        if (!in)
            throw std::runtime_error("cannot open register file: " + register_in);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        reg = Register::from_json(text);
        report["embedding"] = {{"source", register_in}};
    } else {
        QuboEmbedding emb = embed_qubo(q, kC6Level70, args.seed);
        reg = emb.reg;
        report["embedding"] = {{"residual", emb.residual}, {"converged", emb.converged}};
    }
    if (!register_out.empty())
        write_or_print(register_out, reg.to_json());

    auto [best_cost, minimizers] = qubo_brute_force(q);
    report["solutions"] = minimizers;
    report["optimal_cost"] = best_cost;

    QuantumModel model = make_qubo_model(problem, reg, args.seed + 7);
    const std::uint64_t measure_seed = args.seed + 777;
    SampleCounts initial = model.sample_counts({}, shots, measure_seed);
    report["initial_cost"] = qubo_loss(model, problem, measure_seed);

    TrainConfig cfg;
    cfg.max_iter = iters;
    cfg.seed = args.seed + 3;
    TrainResult result =
        train_gradient_free(model, qubo_sample_loss(problem, args.seed + 42), cfg);

    SampleCounts optimal = model.sample_counts({}, shots, measure_seed);
    report["final_cost"] = qubo_loss(model, problem, measure_seed);
    report["initial_counts"] = json::parse(counts_to_json(initial));
    report["optimal_counts"] = json::parse(counts_to_json(optimal));
    write_or_print(args.out, report.dump(2));
    if (!args.trace_out.empty())
        write_or_print(args.trace_out, args.format == "json" ? trace_json(result.trace).dump(2)
                                                             : trace_csv(result.trace));
    std::cerr << "sampled cost " << report["initial_cost"] << " -> " << report["final_cost"]
              << " (optimum " << best_cost << ")\n";
    return 0;
}

int run_qft_check(const CommonArgs &args, int n_qubits, const std::string &strategy) {
    Eigen::MatrixXcd u;
    if (strategy == "digital") {
        std::vector<int> support(n_qubits);
        for (int i = 0; i < n_qubits; ++i)
            support[i] = i;
        u = to_matrix(qft(support), n_qubits);
    } else {
        HamiltonianSpec spec;
        spec.reg = Register::line(n_qubits);
        spec.interaction = Interaction::ZZ;
        spec.use_all_node_pairs = true;
        u = to_matrix(da_qft(n_qubits, Strategy::SDAQC, hamiltonian_factory(spec)), n_qubits);
    }
    // oracle: DFT matrix with bit-reversed output indexing
    const std::size_t dim = std::size_t(1) << n_qubits;
    Eigen::MatrixXcd oracle(dim, dim);
    for (std::size_t jj = 0; jj < dim; ++jj) {
        std::size_t r = 0;
        for (int b = 0; b < n_qubits; ++b)
            if (jj & (std::size_t(1) << b))
                r |= std::size_t(1) << (n_qubits - 1 - b);
        for (std::size_t k = 0; k < dim; ++k)
            oracle(r, k) = std::polar(1.0 / std::sqrt(double(dim)),
                                      2.0 * std::numbers::pi * double(jj * k) / double(dim));
    }
    const double err = aligned_error(u, oracle);
    const double bound = strategy == "digital" ? 1e-10 : 1e-7;
    json report{{"n_qubits", n_qubits},
                {"strategy", strategy},
                {"max_error", err},
                {"bound", bound},
                {"pass", err <= bound}};
    write_or_print(args.out, report.dump(2));
    return err <= bound ? 0 : 1;
}

int run_daqc_check(const CommonArgs &args, int n_qubits, double t_f) {
    // Random ZZ target against a complete-graph unit-coupling ZZ build.
    std::mt19937_64 rng(args.seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<Block> target_terms;
    json target_desc = json::array();
    for (int i = 0; i < n_qubits; ++i)
        for (int j = i + 1; j < n_qubits; ++j) {
            double g = unif(rng);
            if (std::abs(g) < 0.05)
                g = 0.3;
            target_terms.push_back(scale(Expr(g), kron(Z(i), Z(j))));
            target_desc.push_back({{"pair", {i, j}}, {"coupling", g}});
        }
    Block target = add(std::move(target_terms));
    HamiltonianSpec spec;
    spec.reg = Register::line(n_qubits);
    spec.interaction = Interaction::ZZ;
    spec.use_all_node_pairs = true;
    Block build = hamiltonian_factory(spec);

    DaqcTransform result = daqc_transform_full({n_qubits, target, t_f, build, Strategy::SDAQC});
    Eigen::MatrixXcd u = to_matrix(result.block, n_qubits);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_matrix(target, n_qubits));
    Eigen::VectorXcd phases = (std::complex<double>(0, -1) * t_f *
                               solver.eigenvalues().cast<std::complex<double>>().array())
                                  .exp()
                                  .matrix();
    Eigen::MatrixXcd expect =
        solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
    const double err = aligned_error(u, expect);

    json times = json::array();
    for (const auto &[pattern, t] : result.times)
        times.push_back({{"conjugation", pattern}, {"time", t}});
    json report{{"n_qubits", n_qubits},
                {"t_f", t_f},
                {"target", target_desc},
                {"build", "complete-graph ZZ, unit couplings"},
                {"times", times},
                {"z_corrections", result.z_corrections},
                {"global_phase", result.global_phase},
                {"max_unitary_error", err}};
    write_or_print(args.out, report.dump(2));
    return err <= 1e-8 ? 0 : 1;
}

int run_diff_check(const CommonArgs &args) {
    std::vector<Block> rots;
    Expr x{Parameter::feature("x")};
    for (int i = 0; i < 4; ++i)
        rots.push_back(RX(i, Expr(double(i + 1)) * acos(x)));
    QuantumCircuit c(4, kron(std::move(rots)));
    Block obs = total_magnetization(4);
    std::mt19937_64 rng(args.seed);
    std::uniform_real_distribution<double> unif(-0.9, 0.9);
    std::vector<ParamMap> batch;
    for (int i = 0; i < 10; ++i)
        batch.push_back({{"x", unif(rng)}});
    GradientRequest base{c, obs, batch, {"x"}, DiffMode::GPSR};
    auto g = gpsr_gradient(base).rows;
    auto a = adjoint_gradient(base).rows;
    auto f = finite_diff_gradient(base, 1e-4).rows;
    json rows = json::array();
    double max_dev = 0.0;
    for (size_t i = 0; i < batch.size(); ++i) {
        const double dev =
            std::max({std::abs(g[i]["x"] - a[i]["x"]), std::abs(a[i]["x"] - f[i]["x"]),
                      std::abs(g[i]["x"] - f[i]["x"])});
        max_dev = std::max(max_dev, dev);
        rows.push_back({{"x", batch[i]["x"]},
                        {"gpsr", g[i]["x"]},
                        {"adjoint", a[i]["x"]},
                        {"fd", f[i]["x"]},
                        {"deviation", dev}});
    }
    json report{{"gradients", rows}, {"max_deviation", max_dev}, {"pass", max_dev <= 1e-5}};
    write_or_print(args.out, report.dump(2));
    return max_dev <= 1e-5 ? 0 : 1;
}

int run_dump(const CommonArgs &args, const std::string &program, const std::string &state_out) {
    Block block = qft({0, 1, 2});
    int n_qubits = 3;
    if (program == "qft") {
        // default above
    } else if (program == "hea") {
        block = hea(4, 2);
        n_qubits = 4;
    } else if (program == "ode") {
        block = chain(feature_map(4, "x", FeatureMapType::Chebyshev), hea(4, 3));
        n_qubits = 4;
    } else if (program == "qubo-ansatz") {
        Register reg = Register::line(5, 8.0);
        RydbergParams base;
        base.omega = Expr(2.0 * std::numbers::pi);
        block = chain(lower_analog(AnalogRX(Expr("t0")), reg, base),
                      lower_analog(AnalogRZ(Expr("s0")), reg, base));
        n_qubits = 5;
    } else {
        throw std::runtime_error("unknown program: " + program);
    }
    std::string out = block.tree_string();
    out += "\nparameters:\n";
    for (const auto &p : block.parameters())
        out += "  " + Expr(p).sexpr() + "\n";
    write_or_print(args.out, out);
    if (!state_out.empty()) {
        ParamMap values;
        std::mt19937_64 rng(args.seed);
        std::uniform_real_distribution<double> angles(0.0, 2.0 * std::numbers::pi);
        std::uniform_real_distribution<double> features(-0.9, 0.9); // inside acos' domain
        for (const auto &p : block.parameters())
            values[p.name] = p.kind == ParamKind::Feature ? features(rng) : angles(rng);
        StateVector psi = run(QuantumCircuit(n_qubits, block), values);
        write_or_print(state_out, state_to_csv(psi));
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"digital-analog quantum program toolkit"};
    app.require_subcommand(1);

    CommonArgs ode_args, lap_args, qubo_args, qft_args, daqc_args, diff_args, dump_args;

    auto *ode = app.add_subcommand("dqc-ode", "train a DQC model on the nonlinear ODE");
    int ode_epochs = 1000, ode_points = 20;
    double ode_lr = 0.01;
    add_common(ode, ode_args);
    ode->add_option("--epochs", ode_epochs, "training epochs");
    ode->add_option("--points", ode_points, "collocation points per epoch");
    ode->add_option("--lr", ode_lr, "Adam learning rate");

    auto *lap = app.add_subcommand("dqc-laplace", "train a DQC model on the 2D Laplace equation");
    int lap_epochs = 1000, lap_points = 100, lap_grid = 150;
    double lap_lr = 0.01;
    add_common(lap, lap_args);
    lap->add_option("--epochs", lap_epochs, "training epochs");
    lap->add_option("--points", lap_points, "collocation points per region per epoch");
    lap->add_option("--lr", lap_lr, "Adam learning rate");
    lap->add_option("--grid", lap_grid, "evaluation grid size");

    auto *qubo = app.add_subcommand("qubo", "solve the demo QUBO with analog QAOA");
    long long qubo_shots = 1000;
    int qubo_layers = 2, qubo_iters = 100;
    std::string register_in, register_out;
    add_common(qubo, qubo_args, /*seed_required=*/true);
    qubo->add_option("--shots", qubo_shots, "shots per loss evaluation");
    qubo->add_option("--layers", qubo_layers, "analog ansatz layers");
    qubo->add_option("--iters", qubo_iters, "gradient-free iterations");
    qubo->add_option("--register-in", register_in, "load the embedded register from JSON");
    qubo->add_option("--register-out", register_out, "write the embedded register as JSON");

    auto *qftc = app.add_subcommand("qft-check", "compare a QFT against the DFT oracle");
    int qft_qubits = 3;
    std::string qft_strategy = "digital";
    add_common(qftc, qft_args);
    qftc->add_option("--qubits", qft_qubits, "register size");
    qftc->add_option("--strategy", qft_strategy, "digital or sdaqc")
        ->check(CLI::IsMember({"digital", "sdaqc"}));

    auto *daqcc = app.add_subcommand("daqc-check", "verify an sDAQC transform instance");
    int daqc_qubits = 3;
    double daqc_tf = 2.0;
    add_common(daqcc, daqc_args);
    daqcc->add_option("--qubits", daqc_qubits, "register size (2-5)");
    daqcc->add_option("--tf", daqc_tf, "target evolution time");

    auto *diffc = app.add_subcommand("diff-check", "three-way gradient agreement report");
    add_common(diffc, diff_args);

    auto *dump = app.add_subcommand("dump", "print a block tree and its parameters");
    std::string dump_program = "qft", dump_state;
    add_common(dump, dump_args);
    dump->add_option("--program", dump_program, "qft | hea | ode | qubo-ansatz");
    dump->add_option("--state", dump_state, "run on |0..0> (random params) and dump the state CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ode->parsed())
            return run_dqc_ode(ode_args, ode_epochs, ode_points, ode_lr);
        if (lap->parsed())
            return run_dqc_laplace(lap_args, lap_epochs, lap_points, lap_lr, lap_grid);
        if (qubo->parsed())
            return run_qubo(qubo_args, qubo_shots, qubo_layers, qubo_iters, register_in,
                            register_out);
        if (qftc->parsed())
            return run_qft_check(qft_args, qft_qubits, qft_strategy);
        if (daqcc->parsed())
            return run_daqc_check(daqc_args, daqc_qubits, daqc_tf);
        if (diffc->parsed())
            return run_diff_check(diff_args);
        if (dump->parsed())
            return run_dump(dump_args, dump_program, dump_state);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
