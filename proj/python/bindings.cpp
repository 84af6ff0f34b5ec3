#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rieszcert/basis.hpp"
#include "rieszcert/bounds.hpp"
#include "rieszcert/config.hpp"
#include "rieszcert/instance.hpp"
#include "rieszcert/matrix_market.hpp"
#include "rieszcert/pipeline.hpp"
#include "rieszcert/projections.hpp"
#include "rieszcert/report.hpp"

namespace py = pybind11;
using namespace rieszcert;

namespace {

std::vector<Segment> to_segments(const std::vector<std::pair<double, double>>& pairs) {
  std::vector<Segment> out;
  for (const auto& [a, b] : pairs) out.push_back({a, b});
  return out;
}

PyObject* error_type = nullptr;

}  // namespace

PYBIND11_MODULE(_rieszcert, m) {
  m.doc() = "Riesz projections of perturbed Hermitian matrices by contour quadrature";

  static py::exception<Error> exc(m, "RieszcertError", PyExc_RuntimeError);
  error_type = exc.ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = py::reinterpret_borrow<py::object>(error_type)(e.what());
      err.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type, err.ptr());
    }
  });

  py::class_<Segment>(m, "Segment")
      .def(py::init([](double a, double b) { return Segment{a, b}; }), py::arg("alpha"), py::arg("beta"))
      .def_readwrite("alpha", &Segment::alpha)
      .def_readwrite("beta", &Segment::beta)
      .def("distance", &Segment::distance)
      .def("__repr__", [](const Segment& s) {
        return "Segment(" + std::to_string(s.alpha) + ", " + std::to_string(s.beta) + ")";
      });

  py::class_<SegmentFamily>(m, "SegmentFamily")
      .def_property_readonly("gap", &SegmentFamily::gap)
      .def_property_readonly("first_index", &SegmentFamily::first_index)
      .def_property_readonly("last_index", &SegmentFamily::last_index)
      .def("__len__", &SegmentFamily::size)
      .def("segment", &SegmentFamily::at)
      .def("distance", &SegmentFamily::distance);

  m.def("segment_family",
        [](const std::vector<std::pair<double, double>>& segs, int first) {
          return build_segment_family(to_segments(segs), first);
        },
        py::arg("segments"), py::arg("first_index") = 0);

  py::class_<HermitianOperator>(m, "HermitianOperator")
      .def(py::init<CMatrix>())
      .def_property_readonly("matrix", &HermitianOperator::matrix)
      .def_property_readonly("eigenvalues", &HermitianOperator::eigenvalues)
      .def_property_readonly("eigenvectors", &HermitianOperator::eigenvectors)
      .def("resolvent", &HermitianOperator::resolvent);

  py::class_<PerturbedPair>(m, "PerturbedPair")
      .def(py::init([](const CMatrix& t, const CMatrix& b) { return PerturbedPair(HermitianOperator(t), b); }),
           py::arg("t"), py::arg("b"))
      .def_property_readonly("t", [](const PerturbedPair& p) { return p.t().matrix(); })
      .def_property_readonly("b", &PerturbedPair::b_matrix)
      .def_property_readonly("a", &PerturbedPair::a_matrix)
      .def_property_readonly("b_norm", &PerturbedPair::b_norm);

  py::class_<HypothesisReport>(m, "HypothesisReport")
      .def_readonly("holds", &HypothesisReport::holds)
      .def_readonly("b", &HypothesisReport::b)
      .def_readonly("d", &HypothesisReport::d)
      .def_readonly("margin", &HypothesisReport::margin);
  m.def("check_hypothesis", &check_hypothesis);

  py::class_<ProjectionSet>(m, "ProjectionSet")
      .def_property_readonly("first_index", &ProjectionSet::first_index)
      .def_property_readonly("matrices", &ProjectionSet::matrices)
      .def("at", &ProjectionSet::at)
      .def("__len__", &ProjectionSet::size)
      .def("minimality_residual", &ProjectionSet::minimality_residual)
      .def("completeness_residual", &ProjectionSet::completeness_residual)
      .def_property_readonly("idempotency_residuals", &ProjectionSet::idempotency_residuals);

  m.def("unperturbed_projections", &unperturbed_projections);

  py::class_<Instance>(m, "Instance")
      .def_readonly("pair", &Instance::pair)
      .def_readonly("family", &Instance::family)
      .def_readonly("b", &Instance::b);

  m.def("generate_instance",
        [](int n, const std::vector<std::pair<double, double>>& segments, const std::vector<int>& clusters,
           double b_ratio, std::uint64_t seed, const std::string& style) {
          InstanceSpec spec;
          spec.n = n;
          spec.segments = to_segments(segments);
          spec.cluster_sizes = clusters;
          spec.b_ratio = b_ratio;
          spec.seed = seed;
          spec.perturbation_style = parse_perturbation_style(style);
          return generate_instance(spec);
        },
        py::arg("n"), py::arg("segments"), py::arg("cluster_sizes"), py::arg("b_ratio") = 0.8,
        py::arg("seed") = 1, py::arg("perturbation_style") = "dense_random");

  m.def("contour_projections",
        [](const PerturbedPair& pair, const SegmentFamily& family, double tol, int order, int max_order,
           const std::string& style, int parallel) {
          QuadratureOptions q;
          q.initial_order = order;
          q.max_order = max_order;
          q.parallel = parallel;
          return contour_projections(pair, family, pair.b_norm(), tol, q, parse_contour_style(style)).set;
        },
        py::arg("pair"), py::arg("family"), py::arg("tol") = 1e-9, py::arg("order") = 32,
        py::arg("max_order") = 512, py::arg("style") = "rectangle", py::arg("parallel") = 1);

  m.def("oracle_projections",
        [](const PerturbedPair& pair, const SegmentFamily& family) {
          return eigen_oracle_projections(pair, family, pair.b_norm()).set;
        });

  m.def("verify_projection_set", [](const ProjectionSet& set, const PerturbedPair& pair, const SegmentFamily& f) {
    const auto v = verify_projection_set(set, pair, f, pair.b_norm());
    return py::dict(py::arg("minimality") = v.minimality, py::arg("completeness") = v.completeness,
                    py::arg("commutation") = v.commutation, py::arg("max_idempotency") = v.max_idempotency,
                    py::arg("enclosure") = v.enclosure, py::arg("outside") = v.outside,
                    py::arg("ambiguous") = v.ambiguous);
  });

  m.def("gram_operator", &gram_operator);
  m.def("similarity", [](const ProjectionSet& set) {
    const auto s = similarity_transform(set, gram_operator(set));
    return py::dict(py::arg("k") = s.k, py::arg("k_inverse") = s.k_inverse,
                    py::arg("orthogonal_projections") = s.orthogonal_projections, py::arg("m") = s.m,
                    py::arg("M") = s.M, py::arg("condition") = s.condition);
  });
  m.def("unconditional_constant",
        [](const ProjectionSet& set, std::uint64_t seed, std::size_t samples) {
          return unconditional_constant(set, seed, samples).value;
        },
        py::arg("set"), py::arg("seed") = 0, py::arg("samples") = 10000);

  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("name", &BoundReport::name)
      .def_readonly("lhs", &BoundReport::lhs)
      .def_readonly("rhs", &BoundReport::rhs)
      .def_readonly("pass_", &BoundReport::pass)
      .def_readonly("slack", &BoundReport::slack)
      .def_readonly("context", &BoundReport::context)
      .def_readonly("applicable", &BoundReport::applicable)
      .def("__bool__", [](const BoundReport& r) { return r.pass; });

  m.def("check_line_integral_identity", [](const PerturbedPair& p, const SegmentFamily& f, const CVector& x) {
    return check_line_integral_identity(p.t(), f, x);
  });
  m.def("check_gap_sum_bound", [](const PerturbedPair& p, const SegmentFamily& f, const CVector& x) {
    return check_gap_sum_bound(p.t(), f, x);
  });
  m.def("check_neighborhood_separation", &check_neighborhood_separation);
  m.def("gap_sum_constant", &gap_sum_constant);
  m.def("correction_constant", &correction_constant);

  m.def("load_matrix", &load_matrix);
  m.def("save_matrix", &save_matrix, py::arg("matrix"), py::arg("path"),
        py::arg("comments") = std::vector<std::string>{});

  m.def("default_config", [] { return format_config(RunConfig{}); });
  m.def("certify_json",
        [](const std::string& config_text, bool bounds_only) {
          const RunConfig config = parse_config(config_text);
          PipelineOptions opt;
          opt.bounds_only = bounds_only;
          CertificationReport r;
          {
            py::gil_scoped_release release;
            r = certify(config, opt);
          }
          return to_json_text(r, -1);
        },
        py::arg("config_text"), py::arg("bounds_only") = false);
  m.def("bound_names", &bound_names);
}
