#include "biquant/calculus.hpp"
#include "biquant/reduction.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>

namespace py = pybind11;
using namespace bq;

namespace {

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

WeightProvider make_weights(const std::string& backend, long samples, std::optional<std::uint64_t> seed) {
    if (backend == "exact") return WeightProvider(WeightProvider::Backend::Exact);
    if (backend != "numeric") throw std::invalid_argument("backend must be 'exact' or 'numeric'");
    if (!seed) throw std::invalid_argument("numeric runs require a seed");
    return WeightProvider(WeightProvider::Backend::Numeric, samples, *seed);
}

std::vector<std::string> validate_file(const std::string& path) {
    auto parsed = load_algebra_file(path);
    std::vector<std::string> out;
    for (const auto& v : validate(*parsed.algebra)) out.push_back(v.describe(*parsed.algebra));
    return out;
}

std::string star(const std::string& path, const std::string& f, const std::string& g, int order,
                 const std::string& flavor, const std::string& backend, long samples,
                 std::optional<std::uint64_t> seed) {
    auto split = load_algebra_file(path).split();
    auto names = coordinate_names(*split.algebra);
    auto weights = make_weights(backend, samples, seed);
    if (flavor != "kontsevich" && flavor != "cf") throw std::invalid_argument("flavor must be 'kontsevich' or 'cf'");
    Flavor fl = flavor == "cf" ? Flavor::CattaneoFelder : Flavor::Kontsevich;
    return star_product(parse_poly(f, names), parse_poly(g, names), split, fl, order, weights).to_string();
}

py::dict verify(const std::string& which, const std::string& path, int D, int N, const std::string& backend,
                long samples, std::optional<std::uint64_t> seed, bool scale_character_by_eps) {
    auto split = load_algebra_file(path).split();
    auto weights = make_weights(backend, samples, seed);
    const std::string name = stem(path);
    Report r;
    if (which == "prop33") r = verify_homogenization(split, D, weights, name);
    else if (which == "lemma34") r = verify_specialization(split, D, N, weights, name);
    else if (which == "lemma41") r = verify_lemma_4_1(split, name);
    else if (which == "thm51") r = verify_theorem_5_1(split, D, N, weights, name, scale_character_by_eps);
    else if (which == "thm61") r = verify_theorem_6_1(split, D, N, weights, name);
    else if (which == "thm68") r = verify_theorem_6_8(split, D, N, weights, name);
    else if (which == "centers") r = verify_centers(split, D, name);
    else throw std::invalid_argument("unknown verification '" + which + "'");
    py::dict out;
    out["summary"] = r.summary;
    out["details"] = r.details;
    out["status"] = r.status == Report::Status::Pass ? "pass" : r.status == Report::Status::Fail ? "fail" : "insufficient";
    return out;
}

py::tuple family_counts(int i) {
    auto fam = enumerate_reduction_family(i);
    return py::make_tuple(fam.B.size(), fam.W.size(), fam.BW.size());
}

std::optional<std::string> exact_weight(const std::string& wire) {
    auto w = omega_exact(parse_wire(wire));
    if (!w) return std::nullopt;
    return w->exact.get_str();
}

py::tuple numeric_weight(const std::string& wire, long samples, std::uint64_t seed) {
    auto w = omega_numeric(parse_wire(wire), samples, seed);
    return py::make_tuple(w.estimate, w.stderr_);
}

}  // namespace

PYBIND11_MODULE(_biquant, m) {
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
    py::register_exception<MissingWeight>(m, "MissingWeight", PyExc_LookupError);
    m.def("validate", &validate_file, py::arg("path"));
    m.def("star", &star, py::arg("path"), py::arg("f"), py::arg("g"), py::arg("order") = 2,
          py::arg("flavor") = "kontsevich", py::arg("backend") = "exact", py::arg("samples") = 20000,
          py::arg("seed") = py::none());
    m.def("verify", &verify, py::arg("which"), py::arg("path"), py::arg("D") = 3, py::arg("N") = 2,
          py::arg("backend") = "exact", py::arg("samples") = 20000, py::arg("seed") = py::none(),
          py::arg("scale_character_by_eps") = false);
    m.def("graph_count", [](int n, bool colored) { return enumerate_Q_n2(n, colored).size(); }, py::arg("n"),
          py::arg("colored") = false);
    m.def("family_counts", &family_counts, py::arg("i"));
    m.def("exact_weight", &exact_weight, py::arg("wire"));
    m.def("numeric_weight", &numeric_weight, py::arg("wire"), py::arg("samples"), py::arg("seed"));
}
