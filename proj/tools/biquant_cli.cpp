#include "biquant/calculus.hpp"
#include "biquant/graphs.hpp"
#include "biquant/lie.hpp"
#include "biquant/reduction.hpp"
#include "biquant/weights.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>

using namespace bq;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Backend {
    std::string name = "exact";
    long samples = 20000;
    std::optional<std::uint64_t> seed;

    void add_to(CLI::App* app) {
        app->add_option("--backend", name, "weight backend")->check(CLI::IsMember({"exact", "numeric"}));
        app->add_option("--samples", samples, "Monte Carlo samples per graph")->check(CLI::PositiveNumber);
        app->add_option("--seed", seed, "seed for Monte Carlo estimates");
    }
    WeightProvider make() const {
        if (name == "numeric") {
            if (!seed) throw UsageError("numeric runs require --seed");
            return WeightProvider(WeightProvider::Backend::Numeric, samples, *seed);
        }
        return WeightProvider(WeightProvider::Backend::Exact);
    }
    std::string header() const {
        if (name != "numeric") return "# backend=exact";
        return "# backend=numeric samples=" + std::to_string(samples) + " seed=" + std::to_string(*seed);
    }
};

std::string algebra_name(const std::string& path) {
    auto slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    if (auto dot = base.rfind(".alg"); dot != std::string::npos && dot + 4 == base.size()) base.erase(dot);
    return base;
}

void emit(std::ostream& os, const Report& r, const std::string& format) {
    if (format == "json") {
        nlohmann::json j;
        j["summary"] = r.summary;
        j["details"] = r.details;
        j["status"] = r.status == Report::Status::Pass ? "pass" : r.status == Report::Status::Fail ? "fail" : "insufficient";
        os << j.dump(2) << "\n";
    } else {
        os << r.to_string();
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reduction algebras and deformation quantization toolkit"};
    app.require_subcommand(1);
    std::string output;
    app.add_option("--output", output, "write the report to this file instead of stdout");

    auto* validate_cmd = app.add_subcommand("validate", "check antisymmetry and Jacobi for an algebra file");
    std::string validate_file;
    validate_cmd->add_option("file", validate_file)->required();

    auto* graphs = app.add_subcommand("graphs", "graph enumeration");
    graphs->require_subcommand(1);
    auto* graphs_enum = graphs->add_subcommand("enum", "enumerate graph classes");
    int graph_n = -1, graph_i = -1;
    bool graph_colored = false, graph_list = false;
    std::string graph_family;
    graphs_enum->add_option("--n", graph_n, "aerial vertices for Q_{n,2}");
    graphs_enum->add_flag("--colored", graph_colored, "colored (two-color) graphs");
    graphs_enum->add_option("--family", graph_family, "reduction family")->check(CLI::IsMember({"B", "W", "BW"}));
    graphs_enum->add_option("--i", graph_i, "family index");
    graphs_enum->add_flag("--list", graph_list, "print every graph");

    auto* weights = app.add_subcommand("weights", "graph weights");
    std::string weight_graph;
    long weight_samples = 100000;
    std::optional<std::uint64_t> weight_seed;
    bool weight_exact = false;
    weights->add_option("--graph", weight_graph, "graph in wire format")->required();
    weights->add_option("--samples", weight_samples)->check(CLI::PositiveNumber);
    weights->add_option("--seed", weight_seed);
    weights->add_flag("--exact", weight_exact, "look up the exact table");

    auto* star = app.add_subcommand("star", "truncated star products");
    std::string star_algebra, star_flavor = "kontsevich", star_f, star_g;
    int star_order = 1;
    Backend star_backend;
    star->add_option("--algebra", star_algebra)->required();
    star->add_option("--flavor", star_flavor)->check(CLI::IsMember({"kontsevich", "cf"}));
    star->add_option("--order", star_order)->check(CLI::NonNegativeNumber);
    star->add_option("--f", star_f)->required();
    star->add_option("--g", star_g)->required();
    star_backend.add_to(star);

    auto* reduce = app.add_subcommand("reduce", "solve the reduction equations");
    std::string reduce_algebra, reduce_variant = "eps", reduce_t = "1";
    int reduce_D = 3, reduce_N = 2, reduce_order = -1;
    Backend reduce_backend;
    reduce->add_option("--algebra", reduce_algebra)->required();
    reduce->add_option("--D", reduce_D)->check(CLI::NonNegativeNumber);
    reduce->add_option("--N", reduce_N)->check(CLI::NonNegativeNumber);
    reduce->add_option("--order", reduce_order);
    reduce->add_option("--variant", reduce_variant)->check(CLI::IsMember({"eps", "plain", "t", "t-formal"}));
    reduce->add_option("--t", reduce_t, "rational parameter for --variant t");
    reduce_backend.add_to(reduce);

    auto* verify = app.add_subcommand("verify", "named verifications");
    std::string verify_which, verify_algebra, verify_format = "text";
    int verify_D = 3, verify_N = 2;
    bool verify_scaled = false;
    Backend verify_backend;
    verify->add_option("which", verify_which)
        ->required()
        ->check(CLI::IsMember({"prop33", "lemma34", "lemma41", "thm51", "thm61", "thm68", "centers"}));
    verify->add_option("--algebra", verify_algebra)->required();
    verify->add_option("--D", verify_D)->check(CLI::Range(0, 6));
    verify->add_option("--N", verify_N)->check(CLI::Range(0, 6));
    verify->add_flag("--scale-character-by-eps", verify_scaled, "thm51: compare against the ideal with lambda+rho scaled by eps");
    verify->add_option("--format", verify_format)->check(CLI::IsMember({"text", "json"}));
    verify_backend.add_to(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::ofstream file;
    if (!output.empty()) {
        file.open(output);
        if (!file) {
            std::cerr << "error: cannot write " << output << "\n";
            return 2;
        }
    }
    std::ostream& out = output.empty() ? std::cout : file;

    try {
        if (*validate_cmd) {
            auto parsed = load_algebra_file(validate_file);
            auto violations = bq::validate(*parsed.algebra);
            out << "algebra=" << algebra_name(validate_file) << " dim=" << parsed.algebra->dim()
                << " violations=" << violations.size() << "\n";
            for (const auto& v : violations) out << "  " << v.describe(*parsed.algebra) << "\n";
            if (violations.empty() && parsed.t > 0) {
                auto split = split_violations(*parsed.algebra, parsed.t, parsed.lambda);
                for (const auto& v : split) out << "  split: " << v << "\n";
                if (!split.empty()) return 1;
            }
            return violations.empty() ? 0 : 1;
        }
        if (*graphs_enum) {
            std::vector<std::pair<std::string, std::vector<Graph>>> groups;
            if (!graph_family.empty()) {
                if (graph_i < 1) throw UsageError("--family requires --i >= 1");
                auto fam = enumerate_reduction_family(graph_i);
                const auto& list = graph_family == "B" ? fam.B : graph_family == "W" ? fam.W : fam.BW;
                groups.emplace_back(graph_family + "_" + std::to_string(graph_i), list);
            } else {
                if (graph_n < 0) throw UsageError("graphs enum needs --n or --family");
                groups.emplace_back(std::string(graph_colored ? "colored " : "") + "Q_" + std::to_string(graph_n) + ",2",
                                    enumerate_Q_n2(graph_n, graph_colored));
            }
            for (const auto& [label, list] : groups) {
                out << "family=" << label << " count=" << list.size() << "\n";
                if (graph_list)
                    for (const auto& g : list) out << "  " << to_wire(g) << "\n";
            }
            return 0;
        }
        if (*weights) {
            Graph g = parse_wire(weight_graph);
            if (weight_exact) {
                auto w = omega_exact(g);
                if (!w) {
                    std::cerr << "error: graph is not in the exact table\n";
                    return 2;
                }
                out << w->to_string() << "\n";
                return 0;
            }
            if (!weight_seed) throw UsageError("numeric weights require --seed");
            out << omega_numeric(g, weight_samples, *weight_seed).to_string() << "\n";
            return 0;
        }
        if (*star) {
            auto split = load_algebra_file(star_algebra).split();
            auto wp = star_backend.make();
            Names names = coordinate_names(*split.algebra);
            Poly f = parse_poly(star_f, names), g = parse_poly(star_g, names);
            auto flavor = star_flavor == "cf" ? Flavor::CattaneoFelder : Flavor::Kontsevich;
            out << star_backend.header() << "\n";
            out << "flavor=" << star_flavor << " order=" << star_order << "\n";
            out << star_product(f, g, split, flavor, star_order, wp).to_string() << "\n";
            return 0;
        }
        if (*reduce) {
            auto split = load_algebra_file(reduce_algebra).split();
            auto wp = reduce_backend.make();
            SolveOptions opts;
            opts.D = reduce_D;
            opts.N = reduce_N;
            opts.order = reduce_order;
            opts.variant = reduce_variant == "plain"  ? Variant::Plain
                           : reduce_variant == "t"    ? Variant::TFixed
                           : reduce_variant == "t-formal" ? Variant::TFormal
                                                      : Variant::Eps;
            opts.t = parse_rational(reduce_t);
            auto basis = solve_reduction(split, opts, wp);
            out << reduce_backend.header() << "\n";
            out << describe_split(algebra_name(reduce_algebra), split) << " variant=" << to_string(opts.variant)
                << " D=" << opts.D << " N=" << opts.N << " order=" << basis.options.order
                << " dim=" << basis.dimension << " filtration=" << format_dims(basis.filtration)
                << " backend=" << basis.backend << "\n";
            if (basis.backend == "numeric")
                out << "  gap=" << basis.gap << " determinate=" << (basis.determinate ? "yes" : "no") << "\n";
            for (const auto& e : basis.elements) out << "  " << e.to_string() << "\n";
            return basis.backend == "numeric" && !basis.determinate ? 2 : 0;
        }
        if (*verify) {
            auto split = load_algebra_file(verify_algebra).split();
            auto wp = verify_backend.make();
            const std::string name = algebra_name(verify_algebra);
            Report r;
            if (verify_which == "prop33") r = verify_homogenization(split, verify_D, wp, name);
            else if (verify_which == "lemma34") r = verify_specialization(split, verify_D, verify_N, wp, name);
            else if (verify_which == "lemma41") r = verify_lemma_4_1(split, name);
            else if (verify_which == "thm51") r = verify_theorem_5_1(split, verify_D, verify_N, wp, name, verify_scaled);
            else if (verify_which == "thm61") r = verify_theorem_6_1(split, verify_D, verify_N, wp, name);
            else if (verify_which == "thm68") r = verify_theorem_6_8(split, verify_D, verify_N, wp, name);
            else r = verify_centers(split, verify_D, name);
            if (verify_format == "text") out << verify_backend.header() << "\n";
            emit(out, r, verify_format);
            return r.exit_code();
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const StructuralError& e) {
        std::cerr << "structural error: " << e.what() << "\n";
        return 2;
    } catch (const MissingWeight& e) {
        std::cerr << "backend insufficient: " << e.what() << "\n";
        return 2;
    } catch (const CornerInsufficient& e) {
        std::cerr << "backend insufficient: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 2;
    } catch (const OrderTooSmall& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
