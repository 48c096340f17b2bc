#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "netml/corpus.hpp"
#include "netml/error.hpp"
#include "netml/evaluation.hpp"
#include "netml/spectra.hpp"
#ifdef NETML_WITH_CLI
#include "commands.hpp"
#endif

namespace py = pybind11;

namespace {

netml::RankedList as_ranking(const std::vector<std::string>& ranking) {
  std::vector<double> scores;
  for (std::size_t i = 0; i < ranking.size(); ++i) scores.push_back(static_cast<double>(ranking.size() - i));
  return netml::rank_methods("", ranking, scores);
}

}  // namespace

PYBIND11_MODULE(netml, m) {
  m.doc() = "Bug localization from bug-report text and program spectra";

  py::register_exception<netml::Error>(m, "Error");

  m.def("preprocess", [](const std::string& text) {
    return netml::preprocess_text(text, netml::PreprocessConfig::defaults());
  }, py::arg("text"), "Token counts after splitting, filtering and stemming.");
  m.def("porter_stem", &netml::porter_stem, py::arg("word"));
  m.def("split_identifier", &netml::split_identifier, py::arg("identifier"));

  auto stats = [](std::size_t ef, std::size_t ep, std::size_t nf, std::size_t np) {
    return netml::RawStats{ef, ep, nf, np};
  };
  m.def("tarantula", [stats](std::size_t ef, std::size_t ep, std::size_t nf, std::size_t np) {
    return netml::tarantula(stats(ef, ep, nf, np));
  }, py::arg("failed_hit"), py::arg("passed_hit"), py::arg("failed_miss"), py::arg("passed_miss"));
  m.def("ochiai", [stats](std::size_t ef, std::size_t ep, std::size_t nf, std::size_t np) {
    return netml::ochiai(stats(ef, ep, nf, np));
  }, py::arg("failed_hit"), py::arg("passed_hit"), py::arg("failed_miss"), py::arg("passed_miss"));
  m.def("dstar", [stats](std::size_t ef, std::size_t ep, std::size_t nf, std::size_t np, int star) {
    return netml::dstar(stats(ef, ep, nf, np), star);
  }, py::arg("failed_hit"), py::arg("passed_hit"), py::arg("failed_miss"), py::arg("passed_miss"), py::arg("star") = 2);

  m.def("average_precision", [](const std::vector<std::string>& ranking, const std::set<std::string>& faulty) {
    return netml::average_precision(as_ranking(ranking), faulty);
  }, py::arg("ranking"), py::arg("faulty"));
  m.def("mean_average_precision",
        [](const std::vector<double>& aps) { return netml::mean_average_precision(aps); }, py::arg("aps"));
  m.def("wilcoxon", [](const std::vector<double>& xs, const std::vector<double>& ys) {
    const auto r = netml::wilcoxon_signed_rank(xs, ys);
    return py::dict(py::arg("statistic") = r.statistic, py::arg("p_value") = r.p_value, py::arg("n") = r.n,
                    py::arg("exact") = r.exact, py::arg("all_zero") = r.all_zero);
  }, py::arg("xs"), py::arg("ys"), "One-sided signed-rank test that xs exceeds ys.");
  m.def("benjamini_hochberg",
        [](const std::vector<double>& p) { return netml::benjamini_hochberg(p); }, py::arg("p_values"));

#ifdef NETML_WITH_CLI
  m.def("main", [](std::vector<std::string> args) {
    args.insert(args.begin(), "netml");
    return netml::app::run(args);
  }, py::arg("args"), "Runs the command line and returns its exit status.");
#endif
}
