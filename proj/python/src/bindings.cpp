// Thin JSON-string bridge; the Python package decodes and encodes the text.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "vcpc/canonical.hpp"
#include "vcpc/cli.hpp"
#include "vcpc/codec.hpp"
#include "vcpc/corpus.hpp"
#include "vcpc/io.hpp"
#include "vcpc/matcher.hpp"

namespace py = pybind11;
using namespace vcpc;

namespace {

ColoredArborescence tree_from(const std::string& record) { return parse_tree_line(record, 1).tree; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Vertex-colored Prüfer codes for colored arborescences";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<CodecError>(m, "CodecError", PyExc_ValueError);
  py::register_exception<MatcherError>(m, "MatcherError", PyExc_RuntimeError);

  m.def("encode", [](const std::string& record) { return vcpc_to_json(encode(tree_from(record))).dump(); },
        py::arg("record"), "Canonical code of a tree record, as JSON text.");

  m.def(
      "decode",
      [](const std::string& code, bool strict) {
        const auto mode = strict ? DecodeMode::Strict : DecodeMode::Lenient;
        return tree_to_json(decode(vcpc_from_json(Json::parse(code)), mode), "decoded").dump();
      },
      py::arg("code"), py::arg("strict") = false, "Tree record rebuilt from a code.");

  m.def("canon", [](const std::string& record) { return full_ld_to_json(full_ld_array(tree_from(record))).dump(); },
        py::arg("record"), "Full descriptor of a tree record.");

  m.def(
      "is_subarborescence",
      [](const std::string& query, const std::string& host) -> std::optional<std::vector<std::uint32_t>> {
        auto w = is_subarborescence(vcpc_from_json(Json::parse(query)), vcpc_from_json(Json::parse(host)));
        if (!w) return std::nullopt;
        return w->indices;
      },
      py::arg("query"), py::arg("host"), "Witness index list, or None.");

  m.def(
      "undirected_subtree",
      [](const std::string& a, const std::string& b) { return undirected_subtree(tree_from(a), tree_from(b)).is_subtree; },
      py::arg("a"), py::arg("b"));

  m.def(
      "run",
      [](const std::vector<std::string>& args, const std::string& input) {
        std::istringstream in(input);
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(args, in, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), py::arg("input") = "", "Runs one CLI command; returns (exit code, stdout, stderr).");
}
