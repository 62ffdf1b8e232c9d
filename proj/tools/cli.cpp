#include "cli.hpp"

#include "snns/dataset_io.hpp"
#include "snns/error.hpp"
#include "snns/index_io.hpp"
#include "snns/iterpca.hpp"
#include "snns/kdnns.hpp"
#include "snns/parallel.hpp"
#include "snns/pcatree.hpp"
#include "snns/rng.hpp"
#include "snns/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace snns::cli {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double micros_since(Clock::time_point start) {
    return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

double parse_number(const std::string& text, const char* what) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(value)) {
        throw InvalidArgument(std::string(what) + " must be a number, got '" + text + "'");
    }
    return value;
}

/// Tree-regime sigma: half of the kappa = 1 bound.
double tree_sigma(std::size_t n, std::size_t d, std::size_t k, double eps) {
    return 0.5 * tree_sigma_bound(n, d, k, eps, 1.0);
}

struct Query {
    Vector point;
    /// Planted id from the sidecar, or the brute-force answer for file queries.
    PointId truth = 0;
};

struct Answer {
    SearchResult result;
    double micros = 0.0;
};

std::string csv_row(std::size_t query_id, const Answer& a, PointId truth, bool timing) {
    std::ostringstream row;
    row << query_id << ',' << a.result.id << ',' << truth << ',' << fmt(a.result.distance) << ','
        << (a.result.id == truth ? "true" : "false") << ',' << a.result.visits << ','
        << (timing ? fmt(std::round(a.micros)) : std::string("0"));
    return row.str();
}

constexpr const char* kCsvHeader = "query_id,returned_id,planted_id,distance,correct,visits,micros";

json iterpca_stats(const IterPcaIndex& index) {
    const auto n = static_cast<std::size_t>(index.points().rows());
    const auto d = static_cast<std::size_t>(index.points().cols());
    json stats;
    stats["algo"] = index.variant() == IterPcaVariant::warmup ? "warmup" : "iterpca";
    stats["n"] = n;
    stats["d"] = d;
    stats["layers"] = index.layers().size();
    stats["layer_cap"] = index.variant() == IterPcaVariant::warmup ? warmup_layer_cap(n)
                                                                   : iteration_cap(n, d, index.params().c_iter);
    stats["leftover"] = index.leftover().size();
    stats["iterations"] = index.iterations().size();
    stats["sample_size"] = index.sample_size();
    stats["capture_radius2"] = index.capture_radius2();
    stats["m_capped_iterations"] = index.m_capped_count();
    json fractions = json::array();
    json dims = json::array();
    for (const auto& it : index.iterations()) {
        fractions.push_back(it.survivors == 0 ? 0.0
                                              : static_cast<double>(it.captured) / static_cast<double>(it.survivors));
        dims.push_back(it.m);
    }
    stats["capture_fractions"] = fractions;
    stats["subspace_dims"] = dims;
    return stats;
}

json tree_stats(const PcaTree& tree) {
    json stats;
    std::size_t leaves = 0;
    std::size_t largest_leaf = 0;
    for (const auto& node : tree.nodes()) {
        if (node.is_leaf()) {
            ++leaves;
            largest_leaf = std::max(largest_leaf, node.leaf_ids.size());
        }
    }
    stats["algo"] = "pcatree";
    stats["n"] = tree.points().rows();
    stats["d"] = tree.points().cols();
    stats["depth"] = tree.depth();
    stats["depth_bound"] = 2 * tree.params().k;
    stats["nodes"] = tree.nodes().size();
    stats["leaves"] = leaves;
    stats["largest_leaf"] = largest_leaf;
    stats["theta"] = tree.theta();
    stats["declump_events"] = tree.declump_events();
    stats["declump_removed"] = tree.declump_removed().size();
    return stats;
}

SearchResult run_query(const AnyIndex& index, const Vector& q) {
    return std::visit([&](const auto& idx) { return idx.query(q); }, index);
}

SearchResult scan_query(const DenseMatrix& points, const Vector& q) {
    const Neighbor nn = scan_nearest(points, q);
    return SearchResult{nn.id, nn.distance, static_cast<std::size_t>(points.rows()),
                        static_cast<std::size_t>(points.rows())};
}

/// Answers queries in parallel; results land in per-query slots so the output
/// does not depend on the thread count.
template <class Fn>
std::vector<Answer> answer_all(const std::vector<Query>& queries, Fn&& search) {
    std::vector<Answer> answers(queries.size());
    parallel_for(queries.size(), [&](std::size_t i) {
        const auto start = Clock::now();
        answers[i].result = search(queries[i].point);
        answers[i].micros = micros_since(start);
    });
    return answers;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw FormatError("cannot open " + path + " for writing");
    }
    file << text;
}

// ---------------------------------------------------------------------------

struct InstanceFlags {
    std::size_t n = 2000;
    std::size_t d = 512;
    std::size_t k = 6;
    double eps = 0.3;
    std::string sigma = "auto";
    std::uint64_t seed = 1;
    std::string geometry = "random-cluster";
    std::string noise = "full-gaussian";
    std::string adversary = "toward-query";

    void attach(CLI::App& app) {
        app.add_option("--n", n, "number of points")->check(CLI::PositiveNumber);
        app.add_option("--d", d, "ambient dimension")->check(CLI::PositiveNumber);
        app.add_option("--k", k, "intrinsic dimension")->check(CLI::PositiveNumber);
        app.add_option("--eps", eps, "gap parameter epsilon in (0, 1)");
        app.add_option("--sigma", sigma, "noise deviation: a number, 'auto' or 'tree'");
        app.add_option("--seed", seed, "instance seed");
        app.add_option("--geometry", geometry)->check(CLI::IsMember({"random-cluster", "sparse-direction-adversarial"}));
        app.add_option("--noise", noise)
            ->check(CLI::IsMember({"full-gaussian", "orthogonal-gaussian", "adversarial-bounded"}));
        app.add_option("--adversary", adversary)->check(CLI::IsMember({"toward-query", "random-direction"}));
    }

    InstanceConfig config() const {
        InstanceConfig c;
        c.n = n;
        c.d = d;
        c.k = k;
        c.epsilon = eps;
        c.sigma = sigma;
        c.seed = seed;
        c.geometry = parse_geometry(geometry);
        c.noise = parse_noise_mode(noise);
        c.adversary = parse_adversary(adversary);
        return c;
    }
};

int cmd_gen(const InstanceFlags& flags, const std::string& out_stem, std::ostream& out, std::ostream& err) {
    const InstanceConfig config = flags.config();
    const NoisyInstance inst = make_instance(config);
    const auto matrix = matrix_path(out_stem);
    const auto sidecar = sidecar_path(out_stem);
    write_matrix_file(matrix, inst.noisy_points);
    write_sidecar(sidecar, describe(inst, sigma_rule(config)));
    err << "snns gen: wrote " << matrix.string() << " and " << sidecar.string() << '\n';

    json summary;
    summary["matrix"] = matrix.string();
    summary["sidecar"] = sidecar.string();
    summary["n"] = config.n;
    summary["d"] = config.d;
    summary["k"] = config.k;
    summary["epsilon"] = config.epsilon;
    summary["sigma"] = inst.sigma;
    summary["sigma_rule"] = sigma_rule(config);
    summary["planted_index"] = inst.base.planted_index;
    out << summary.dump() << '\n';
    return 0;
}

struct BuildFlags {
    std::string algo;
    std::string dataset;
    std::string out;
    std::optional<double> eps;
    std::optional<std::size_t> k;
    std::optional<double> sigma;
    std::size_t sample_size = 0;
    double c_threshold = 0.001;
    double c_iter = 4.0;
    std::uint64_t seed = 0;
    std::string capture_mode = "threshold-psi";
    double eta = 0.0;
    std::size_t stop_size = 0;
    bool timing = false;
};

int cmd_build(const BuildFlags& f, std::ostream& out, std::ostream& err) {
    const auto matrix = matrix_path(f.dataset);
    const auto sidecar = sidecar_path(f.dataset);
    DenseMatrix points = read_matrix_file(matrix);
    std::optional<DatasetMeta> meta;
    if (std::filesystem::exists(sidecar)) {
        meta = read_sidecar(sidecar);
    }
    const double eps = f.eps ? *f.eps : meta ? meta->epsilon : throw InvalidArgument("--eps is required without a sidecar");
    const std::size_t k = f.k ? *f.k : meta ? meta->k : throw InvalidArgument("--k is required without a sidecar");
    const double sigma = f.sigma ? *f.sigma : meta ? meta->sigma : 0.0;

    const auto start = Clock::now();
    AnyIndex index = [&]() -> AnyIndex {
        if (f.algo == "warmup") {
            return build_warmup(points, k, eps);
        }
        if (f.algo == "iterpca") {
            IterPcaParams p;
            p.epsilon = eps;
            p.sigma = sigma;
            p.k = k;
            p.sample_size = f.sample_size;
            p.c_threshold = f.c_threshold;
            p.c_iter = f.c_iter;
            p.seed = f.seed;
            p.capture_mode = parse_capture_mode(f.capture_mode);
            p.eta = f.eta;
            return build_iterpca(points, p);
        }
        return build_tree(points, PcaTreeParams{eps, k, f.stop_size});
    }();
    const double wall_ms = micros_since(start) / 1000.0;

    write_index_file(f.out, index, file_content_hash(matrix));
    err << "snns build: wrote " << f.out << '\n';

    json stats = std::visit(
        [](const auto& idx) {
            if constexpr (std::is_same_v<std::decay_t<decltype(idx)>, PcaTree>) {
                return tree_stats(idx);
            } else {
                return iterpca_stats(idx);
            }
        },
        index);
    stats["wall_ms"] = f.timing ? wall_ms : 0.0;
    out << stats.dump() << '\n';
    return 0;
}

struct QueryFlags {
    std::string dataset;
    std::string index;
    std::string algo = "index";
    std::string queries = "sidecar";
    std::string out;
    bool timing = false;
};

int cmd_query(const QueryFlags& f, std::ostream& out, std::ostream& err) {
    const auto matrix = matrix_path(f.dataset);
    DenseMatrix points = read_matrix_file(matrix);

    std::vector<Query> queries;
    if (f.queries == "sidecar") {
        const DatasetMeta meta = read_sidecar(sidecar_path(f.dataset));
        queries.push_back(Query{meta.q_tilde, meta.planted_index});
    } else {
        const DenseMatrix rows = read_matrix_file(f.queries);
        if (rows.cols() != points.cols()) {
            throw InvalidArgument("query file dimension does not match the dataset");
        }
        queries.resize(static_cast<std::size_t>(rows.rows()));
        parallel_for(queries.size(), [&](std::size_t i) {
            queries[i].point = rows.row(static_cast<Eigen::Index>(i)).transpose();
            queries[i].truth = scan_nearest(points, queries[i].point).id;
        });
    }

    std::vector<Answer> answers;
    if (f.algo == "scan") {
        answers = answer_all(queries, [&](const Vector& q) { return scan_query(points, q); });
    } else {
        if (f.index.empty()) {
            throw InvalidArgument("--index is required unless --algo scan");
        }
        const AnyIndex index = read_index_file(f.index, points, file_content_hash(matrix));
        answers = answer_all(queries, [&](const Vector& q) { return run_query(index, q); });
    }

    std::ostringstream csv;
    csv << kCsvHeader << '\n';
    std::size_t correct = 0;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        csv << csv_row(i, answers[i], queries[i].truth, f.timing) << '\n';
        correct += answers[i].result.id == queries[i].truth ? 1 : 0;
    }
    write_text(f.out, csv.str(), out);
    err << "snns query: " << correct << '/' << queries.size() << " correct\n";
    return 0;
}

struct VerifyFlags {
    std::string check;
    std::optional<std::size_t> n, d, k, m, trials, samples;
    std::optional<double> eps, x;
    std::optional<std::string> sigma;
    std::uint64_t seed = 0;
    std::string noise = "full-gaussian";
    std::string adversary = "toward-query";
    BoundConstants constants;
};

int cmd_verify(const VerifyFlags& f, std::ostream& out) {
    auto sigma_or = [&](std::size_t n, std::size_t d, std::size_t k, double eps, const std::string& fallback) {
        InstanceConfig c;
        c.n = n;
        c.d = d;
        c.k = k;
        c.epsilon = eps;
        c.sigma = f.sigma.value_or(fallback);
        return resolve_sigma(c);
    };

    VerifyReport report;
    if (f.check == "wedin") {
        report = check_wedin(f.n.value_or(200), f.d.value_or(50), f.k.value_or(5), f.m.value_or(3),
                             f.sigma ? parse_number(*f.sigma, "--sigma") : 0.05, f.trials.value_or(100), f.seed);
    } else if (f.check == "chi2") {
        report = check_chi_square_tail(f.d.value_or(100), f.x.value_or(4.0), f.samples.value_or(100000), f.seed);
    } else if (f.check == "nn-preserved") {
        const std::size_t n = f.n.value_or(500), d = f.d.value_or(512), k = f.k.value_or(5);
        const double eps = f.eps.value_or(0.3);
        report = check_nn_preserved(n, d, k, eps, sigma_or(n, d, k, eps, "auto"), f.trials.value_or(200), f.seed);
    } else if (f.check == "spectral-norm") {
        report = check_spectral_norm_bound(f.n.value_or(1000), f.d.value_or(200),
                                           f.sigma ? parse_number(*f.sigma, "--sigma") : 1.0, f.trials.value_or(50),
                                           f.seed, f.constants);
    } else if (f.check == "iterpca" || f.check == "pcatree") {
        const bool tree = f.check == "pcatree";
        InstanceConfig c;
        c.n = f.n.value_or(2000);
        c.d = f.d.value_or(tree ? 256 : 512);
        c.k = f.k.value_or(tree ? 4 : 6);
        c.epsilon = f.eps.value_or(0.3);
        c.sigma = f.sigma.value_or(tree ? "tree" : "auto");
        c.seed = f.seed;
        c.noise = parse_noise_mode(f.noise);
        c.adversary = parse_adversary(f.adversary);
        const NoisyInstance inst = make_instance(c);
        if (tree) {
            const PcaTree t = build_tree(inst.noisy_points, PcaTreeParams{c.epsilon, c.k, 0});
            report = check_pcatree_diagnostics(inst, t, f.constants);
        } else if (c.noise == NoiseMode::adversarial_bounded) {
            report = check_iterpca_diagnostics(inst, build_warmup(inst.noisy_points, c.k, c.epsilon), f.constants);
        } else {
            IterPcaParams p;
            p.epsilon = c.epsilon;
            p.sigma = inst.sigma;
            p.k = c.k;
            p.seed = Rng(c.seed).derive(2).next_u64();
            report = check_iterpca_diagnostics(inst, build_iterpca(inst.noisy_points, p), f.constants);
        }
    }
    out << report.to_json() << '\n';
    return report.pass ? 0 : 1;
}

struct EvalFlags {
    InstanceFlags instance;
    std::string algos = "iterpca,pcatree,scan";
    std::size_t seeds = 10;
    std::string out;
    bool timing = false;
};

int cmd_eval(const EvalFlags& f, std::ostream& out, std::ostream& err) {
    std::vector<std::string> algos;
    {
        std::istringstream list(f.algos);
        for (std::string a; std::getline(list, a, ',');) {
            if (a != "warmup" && a != "iterpca" && a != "pcatree" && a != "scan") {
                throw InvalidArgument("unknown algo '" + a + "'");
            }
            algos.push_back(a);
        }
    }
    if (algos.empty()) {
        throw InvalidArgument("--algos is empty");
    }
    std::ostringstream csv;
    csv << "algo,seed,n,d,k,epsilon,sigma,structure," << kCsvHeader << '\n';
    std::size_t correct = 0;
    std::size_t total = 0;
    const InstanceConfig base = f.instance.config();
    for (std::size_t s = 0; s < f.seeds; ++s) {
        InstanceConfig c = base;
        c.seed = base.seed + s;
        const NoisyInstance inst = make_instance(c);
        const std::vector<Query> queries{Query{inst.noisy_query, inst.base.planted_index}};
        for (const auto& algo : algos) {
            std::vector<Answer> answers;
            std::size_t structure = 0;
            if (algo == "scan") {
                answers = answer_all(queries, [&](const Vector& q) { return scan_query(inst.noisy_points, q); });
            } else if (algo == "pcatree") {
                const PcaTree tree = build_tree(inst.noisy_points, PcaTreeParams{c.epsilon, c.k, 0});
                structure = tree.depth();
                answers = answer_all(queries, [&](const Vector& q) { return tree.query(q); });
            } else {
                IterPcaIndex index = [&] {
                    if (algo == "warmup") return build_warmup(inst.noisy_points, c.k, c.epsilon);
                    IterPcaParams p;
                    p.epsilon = c.epsilon;
                    p.sigma = inst.sigma;
                    p.k = c.k;
                    p.seed = Rng(c.seed).derive(2).next_u64();
                    return build_iterpca(inst.noisy_points, p);
                }();
                structure = index.layers().size();
                answers = answer_all(queries, [&](const Vector& q) { return index.query(q); });
            }
            for (std::size_t i = 0; i < queries.size(); ++i) {
                csv << algo << ',' << c.seed << ',' << c.n << ',' << c.d << ',' << c.k << ',' << fmt(c.epsilon) << ','
                    << fmt(inst.sigma) << ',' << structure << ',' << csv_row(i, answers[i], queries[i].truth, f.timing)
                    << '\n';
                correct += answers[i].result.id == queries[i].truth ? 1 : 0;
                ++total;
            }
        }
    }
    write_text(f.out, csv.str(), out);
    err << "snns eval: " << correct << '/' << total << " correct\n";
    return 0;
}

}  // namespace

double resolve_sigma(const InstanceConfig& config) {
    if (config.noise == NoiseMode::adversarial_bounded) {
        return 0.0;
    }
    if (config.sigma == "auto") {
        return auto_sigma(config.n, config.d, config.epsilon);
    }
    if (config.sigma == "tree") {
        return tree_sigma(config.n, config.d, config.k, config.epsilon);
    }
    const double sigma = parse_number(config.sigma, "--sigma");
    if (sigma < 0.0) {
        throw InvalidArgument("--sigma must be non-negative");
    }
    return sigma;
}

std::string sigma_rule(const InstanceConfig& config) {
    if (config.noise == NoiseMode::adversarial_bounded) {
        return "adversarial: alpha = eps/16";
    }
    if (config.sigma == "auto") {
        return "auto: 0.05*eps/(d ln n)^(1/4)";
    }
    if (config.sigma == "tree") {
        return "tree: 0.5*min(eps/sqrt(k ln n), eps/(sqrt(k)(d ln n)^(1/4)))";
    }
    return "explicit";
}

NoisyInstance make_instance(const InstanceConfig& config) {
    const double sigma = resolve_sigma(config);
    const PlantedInstance planted =
        gen_planted(PlantedParams{config.n, config.d, config.k, config.epsilon, config.seed, config.geometry});
    const std::uint64_t noise_seed = Rng(config.seed).derive(1).next_u64();
    if (config.noise == NoiseMode::adversarial_bounded) {
        return perturb_adversarial(planted, config.adversary, noise_seed);
    }
    return perturb_gaussian(planted, sigma, config.noise == NoiseMode::orthogonal_gaussian, noise_seed);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral nearest-neighbor search under semi-random noise"};
    app.name("snns");
    app.require_subcommand(1);

    InstanceFlags gen_flags;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "generate a planted dataset (matrix file + JSON sidecar)");
    gen_flags.attach(*gen);
    gen->add_option("--out", gen_out, "output stem; writes <stem>.snns and <stem>.json")->required();

    BuildFlags build_flags;
    auto* build = app.add_subcommand("build", "build and serialize an index; prints stats JSON");
    build->add_option("--algo", build_flags.algo)->required()->check(CLI::IsMember({"warmup", "iterpca", "pcatree"}));
    build->add_option("--dataset", build_flags.dataset, "dataset stem")->required();
    build->add_option("--out", build_flags.out, "index file")->required();
    build->add_option("--eps", build_flags.eps, "defaults to the sidecar value");
    build->add_option("--k", build_flags.k, "defaults to the sidecar value");
    build->add_option("--sigma", build_flags.sigma, "defaults to the sidecar value");
    build->add_option("--sample-size", build_flags.sample_size, "iterpca sample size r; 0 = default");
    build->add_option("--c-threshold", build_flags.c_threshold);
    build->add_option("--c-iter", build_flags.c_iter);
    build->add_option("--seed", build_flags.seed);
    build->add_option("--capture-mode", build_flags.capture_mode)
        ->check(CLI::IsMember({"threshold-psi", "fraction-eta"}));
    build->add_option("--eta", build_flags.eta, "fraction-eta capture fraction; 0 = sqrt(ln n / d)");
    build->add_option("--stop-size", build_flags.stop_size, "pcatree leaf size; 0 = d");
    build->add_flag("--timing", build_flags.timing, "report wall time (makes output run-dependent)");

    QueryFlags query_flags;
    auto* query = app.add_subcommand("query", "answer queries against an index; writes CSV");
    query->add_option("--dataset", query_flags.dataset, "dataset stem")->required();
    query->add_option("--index", query_flags.index, "index file");
    query->add_option("--algo", query_flags.algo)->check(CLI::IsMember({"index", "scan"}));
    query->add_option("--queries", query_flags.queries, "'sidecar' or a matrix file of queries");
    query->add_option("--out", query_flags.out, "CSV path; stdout when omitted");
    query->add_flag("--timing", query_flags.timing, "fill the micros column");

    VerifyFlags verify_flags;
    auto* verify = app.add_subcommand("verify", "run a verification check; prints a JSON report");
    verify->add_option("check", verify_flags.check)
        ->required()
        ->check(CLI::IsMember({"wedin", "chi2", "nn-preserved", "spectral-norm", "iterpca", "pcatree"}));
    verify->add_option("--n", verify_flags.n);
    verify->add_option("--d", verify_flags.d);
    verify->add_option("--k", verify_flags.k);
    verify->add_option("--m", verify_flags.m);
    verify->add_option("--eps", verify_flags.eps);
    verify->add_option("--sigma", verify_flags.sigma, "a number, 'auto' or 'tree'");
    verify->add_option("--trials", verify_flags.trials);
    verify->add_option("--samples", verify_flags.samples);
    verify->add_option("--x", verify_flags.x);
    verify->add_option("--seed", verify_flags.seed);
    verify->add_option("--noise", verify_flags.noise)
        ->check(CLI::IsMember({"full-gaussian", "orthogonal-gaussian", "adversarial-bounded"}));
    verify->add_option("--adversary", verify_flags.adversary)->check(CLI::IsMember({"toward-query", "random-direction"}));
    verify->add_option("--c-sin", verify_flags.constants.c_sin);
    verify->add_option("--c-gamma", verify_flags.constants.c_gamma);
    verify->add_option("--c-eta", verify_flags.constants.c_eta);
    verify->add_option("--c-iter", verify_flags.constants.c_iter);

    EvalFlags eval_flags;
    auto* eval = app.add_subcommand("eval", "gen + build + query sweep over seeds; writes one CSV");
    eval_flags.instance.attach(*eval);
    eval->add_option("--algos", eval_flags.algos, "comma-separated subset of warmup,iterpca,pcatree,scan");
    eval->add_option("--seeds", eval_flags.seeds, "number of consecutive seeds starting at --seed");
    eval->add_option("--out", eval_flags.out, "CSV path; stdout when omitted");
    eval->add_flag("--timing", eval_flags.timing, "fill the micros column");

    std::vector<const char*> argv{"snns"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*gen) return cmd_gen(gen_flags, gen_out, out, err);
        if (*build) return cmd_build(build_flags, out, err);
        if (*query) return cmd_query(query_flags, out, err);
        if (*verify) return cmd_verify(verify_flags, out);
        if (*eval) return cmd_eval(eval_flags, out, err);
    } catch (const std::exception& e) {
        err << "snns: error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace snns::cli
