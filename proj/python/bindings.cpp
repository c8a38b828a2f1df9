// Python bindings for the bdatp core: feature handling, random projection,
// BCH codes, BDA training, fuzzy commitment, the template store, and the
// evaluation harness.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "bdatp/evaluation.hpp"
#include "bdatp/randproj.hpp"
#include "bdatp/store.hpp"

namespace py = pybind11;
using namespace bdatp;

namespace {

BitVec bits_from_str(const std::string& s) { return BitVec::from_string(s); }

py::dict timings_dict(const StageTimings& t) {
  py::dict d;
  d["setup_ns"] = t.setup_ns;
  d["project_ns"] = t.project_ns;
  d["binarize_ns"] = t.binarize_ns;
  d["commitment_ns"] = t.commitment_ns;
  d["total_ns"] = t.total_ns;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Biometric template protection: random projection + BDA + fuzzy commitment";

  py::register_exception<InvalidArgument>(m, "InvalidArgumentError",
                                          PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<NotFoundError>(m, "NotFoundError", PyExc_KeyError);
  py::register_exception<DuplicateError>(m, "DuplicateError", PyExc_KeyError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);

  py::class_<BitVec>(m, "BitVec")
      .def(py::init(&bits_from_str), py::arg("bits"))
      .def("__len__", &BitVec::size)
      .def("__getitem__",
           [](const BitVec& v, std::size_t i) {
             if (i >= v.size()) throw py::index_error();
             return v.get(i);
           })
      .def("__str__", &BitVec::to_string)
      .def("__repr__",
           [](const BitVec& v) { return "BitVec('" + v.to_string() + "')"; })
      .def("__xor__", &BitVec::operator^)
      .def("__eq__", [](const BitVec& a, const BitVec& b) { return a == b; })
      .def("count_ones", &BitVec::count_ones)
      .def("to_bytes", [](const BitVec& v) {
        auto packed = v.to_packed_bytes();
        return py::bytes(reinterpret_cast<const char*>(packed.data()),
                         packed.size());
      });
  m.def("hamming", py::overload_cast<const BitVec&, const BitVec&>(&hamming),
        py::arg("a"), py::arg("b"));

  py::class_<FeatureVector>(m, "FeatureVector")
      .def(py::init([](std::string label, std::vector<double> values) {
             return FeatureVector{std::move(label), std::move(values)};
           }),
           py::arg("label"), py::arg("values"))
      .def_readwrite("label", &FeatureVector::label)
      .def_readwrite("values", &FeatureVector::values);

  m.def(
      "synth_classes",
      [](std::uint64_t seed, std::uint32_t num_classes,
         std::uint32_t samples_per_class, std::uint32_t dim,
         double class_center_scale, double within_sigma) {
        return synth_classes(SynthSpec{seed, num_classes, samples_per_class,
                                       dim, class_center_scale, within_sigma});
      },
      py::arg("seed"), py::arg("num_classes"), py::arg("samples_per_class"),
      py::arg("dim"), py::arg("class_center_scale") = 1.0,
      py::arg("within_sigma") = 0.1);
  m.def(
      "load_features",
      [](const std::filesystem::path& path, const std::string& format) {
        return load_features(path, format == "packed" ? FeatureFormat::kPacked
                                                      : FeatureFormat::kCsv);
      },
      py::arg("path"), py::arg("format") = "csv");
  m.def(
      "write_features",
      [](const std::filesystem::path& path,
         const std::vector<FeatureVector>& vectors, const std::string& format) {
        write_features(path, vectors,
                       format == "packed" ? FeatureFormat::kPacked
                                          : FeatureFormat::kCsv);
      },
      py::arg("path"), py::arg("vectors"), py::arg("format") = "csv");
  m.def("real_match_score", &real_match_score, py::arg("a"), py::arg("b"),
        py::arg("scale") = 256);

  py::class_<ProjectionKey>(m, "ProjectionKey")
      .def_readonly("seed", &ProjectionKey::seed)
      .def_readonly("d", &ProjectionKey::d)
      .def_readonly("k", &ProjectionKey::k)
      .def_readonly("rows", &ProjectionKey::rows);
  py::class_<RealTemplate>(m, "RealTemplate")
      .def_readonly("values", &RealTemplate::values)
      .def_readonly("key_seed", &RealTemplate::key_seed);
  m.def("gen_matrix", &gen_matrix, py::arg("seed"), py::arg("d"), py::arg("k"));
  m.def("project",
        py::overload_cast<const ProjectionKey&, const std::vector<double>&>(
            &project),
        py::arg("key"), py::arg("values"));
  m.def("orthonormality_defect", &orthonormality_defect, py::arg("key"));
  m.def("distance_ratio", &distance_ratio, py::arg("key"), py::arg("u"),
        py::arg("v"));

  py::class_<CodeParams>(m, "CodeParams")
      .def_readonly("m", &CodeParams::m)
      .def_readonly("n", &CodeParams::n)
      .def_readonly("t", &CodeParams::t)
      .def_readonly("k_msg", &CodeParams::k_msg)
      .def_readonly("d_min", &CodeParams::d_min)
      .def_readonly("generator", &CodeParams::generator)
      .def("ref", &CodeParams::ref);
  py::class_<Codeword>(m, "Codeword")
      .def_readonly("bits", &Codeword::bits);
  m.def("build_code", &build_code, py::arg("m"), py::arg("t"));
  m.def("bch_encode", &bch_encode, py::arg("params"), py::arg("message"));
  m.def(
      "bch_decode",
      [](const CodeParams& params, const BitVec& word) -> py::object {
        auto decoded = bch_decode(params, word);
        if (!decoded) return py::none();
        return py::make_tuple(decoded->codeword, decoded->errors_corrected);
      },
      py::arg("params"), py::arg("word"),
      "Returns (codeword, errors_corrected) or None on decoding failure");
  m.def("is_codeword", &is_codeword, py::arg("params"), py::arg("word"));
  m.def("random_codewords", &random_codewords, py::arg("params"),
        py::arg("count"), py::arg("seed"));

  py::class_<PerceptronHyper>(m, "PerceptronHyper")
      .def(py::init([](std::uint32_t epochs, double rate) {
             return PerceptronHyper{epochs, rate};
           }),
           py::arg("epochs") = 200, py::arg("rate") = 0.1)
      .def_readwrite("epochs", &PerceptronHyper::epochs)
      .def_readwrite("rate", &PerceptronHyper::rate);
  py::class_<TrainMeta>(m, "TrainMeta")
      .def_readonly("epochs_run", &TrainMeta::epochs_run)
      .def_readonly("converged", &TrainMeta::converged)
      .def_readonly("residual_bit_errors", &TrainMeta::residual_bit_errors);
  py::class_<ClassModel>(m, "ClassModel")
      .def_readonly("class_id", &ClassModel::class_id)
      .def_readonly("n_total", &ClassModel::n_total)
      .def_readonly("k", &ClassModel::k)
      .def_readonly("weights", &ClassModel::weights)
      .def_readonly("biases", &ClassModel::biases)
      .def_readonly("target", &ClassModel::target)
      .def_readonly("code_ref", &ClassModel::code_ref)
      .def_readonly("train_meta", &ClassModel::train_meta);
  py::class_<BinaryTemplate>(m, "BinaryTemplate")
      .def_readonly("bits", &BinaryTemplate::bits)
      .def_readonly("code_ref", &BinaryTemplate::code_ref);

  m.def("assign_targets", &assign_targets, py::arg("class_ids"),
        py::arg("params"), py::arg("seed"));
  m.def(
      "train_class",
      [](const std::string& class_id,
         const std::vector<std::vector<double>>& samples, const BitVec& target,
         const std::string& code_ref, const PerceptronHyper& hyper) {
        std::vector<RealTemplate> templates;
        templates.reserve(samples.size());
        for (const auto& s : samples) templates.push_back(RealTemplate{s, 0});
        return train_class(class_id, templates, target, code_ref, hyper);
      },
      py::arg("class_id"), py::arg("samples"), py::arg("target"),
      py::arg("code_ref") = "", py::arg("hyper") = PerceptronHyper{});
  m.def(
      "binarize",
      [](const ClassModel& model, const std::vector<double>& query) {
        return binarize(model, query);
      },
      py::arg("model"), py::arg("query"));
  m.def("binary_match_score",
        py::overload_cast<const BitVec&, const BitVec&>(&binary_match_score),
        py::arg("a"), py::arg("b"));

  py::class_<Commitment>(m, "Commitment")
      .def_readonly("code_ref", &Commitment::code_ref)
      .def_readonly("mask", &Commitment::mask)
      .def_property_readonly("salt",
                             [](const Commitment& c) {
                               return py::bytes(
                                   reinterpret_cast<const char*>(c.salt.data()),
                                   c.salt.size());
                             })
      .def_property_readonly("digest", [](const Commitment& c) {
        return py::bytes(reinterpret_cast<const char*>(c.digest.data()),
                         c.digest.size());
      });
  m.def("commit", &commit, py::arg("template_bits"), py::arg("params"),
        py::arg("seed"));
  m.def(
      "verify_commitment",
      [](const Commitment& commitment, const CodeParams& params,
         const BitVec& query) -> py::object {
        auto accept = verify_commitment(commitment, params, query);
        if (!accept) return py::none();
        return py::int_(accept->errors_corrected);
      },
      py::arg("commitment"), py::arg("params"), py::arg("query"),
      "Returns errors_corrected on accept, None on reject");

  py::class_<StageConfig>(m, "StageConfig")
      .def(py::init([](std::uint32_t d, std::uint32_t k, std::uint32_t m,
                       std::uint32_t t, std::uint32_t blocks,
                       std::uint32_t epochs, double rate,
                       std::uint32_t score_scale, std::uint32_t cohort_classes) {
             StageConfig config;
             config.d = d;
             config.k = k;
             config.code_m = m;
             config.code_t = t;
             config.blocks = blocks;
             config.perceptron.epochs = epochs;
             config.perceptron.rate = rate;
             config.score_scale = score_scale;
             config.cohort_classes = cohort_classes;
             config.validate();
             return config;
           }),
           py::arg("d") = 128, py::arg("k") = 32, py::arg("m") = 6,
           py::arg("t") = 5, py::arg("blocks") = 1, py::arg("epochs") = 200,
           py::arg("rate") = 0.1, py::arg("score_scale") = 256,
           py::arg("cohort_classes") = 20)
      .def_readonly("d", &StageConfig::d)
      .def_readonly("k", &StageConfig::k)
      .def_readonly("code_m", &StageConfig::code_m)
      .def_readonly("code_t", &StageConfig::code_t)
      .def_readonly("blocks", &StageConfig::blocks)
      .def_readonly("score_scale", &StageConfig::score_scale)
      .def_property_readonly("n_total", &StageConfig::n_total);

  py::class_<EnrollSeeds>(m, "EnrollSeeds")
      .def(py::init([](std::uint64_t projection, std::uint64_t targets,
                       std::uint64_t commitment) {
             return EnrollSeeds{projection, targets, commitment};
           }),
           py::arg("projection"), py::arg("targets"), py::arg("commitment"))
      .def_readwrite("projection", &EnrollSeeds::projection)
      .def_readwrite("targets", &EnrollSeeds::targets)
      .def_readwrite("commitment", &EnrollSeeds::commitment);

  py::class_<TemplateRecord>(m, "TemplateRecord")
      .def_readonly("user_id", &TemplateRecord::user_id)
      .def_readonly("projection_seed", &TemplateRecord::projection_seed)
      .def_readonly("created_at", &TemplateRecord::created_at)
      .def_readonly("config", &TemplateRecord::config);
  m.def("serialize_record", [](const TemplateRecord& record) {
    auto bytes = serialize_record(record);
    return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  });
  m.def("deserialize_record", [](const py::bytes& data) {
    std::string s = data;
    return deserialize_record(std::vector<std::uint8_t>(s.begin(), s.end()));
  });

  py::class_<EnrollResult>(m, "EnrollResult")
      .def_readonly("record", &EnrollResult::record)
      .def_readonly("committed_template", &EnrollResult::committed_template)
      .def_readonly("target", &EnrollResult::target)
      .def_readonly("converged", &EnrollResult::converged)
      .def_readonly("residual_bit_errors", &EnrollResult::residual_bit_errors);
  py::class_<VerifyResult>(m, "VerifyResult")
      .def_readonly("accept", &VerifyResult::accept)
      .def_readonly("block_errors", &VerifyResult::block_errors)
      .def_property_readonly(
          "timings", [](const VerifyResult& r) { return timings_dict(r.timings); });

  m.def("enroll_record", &enroll_record, py::arg("user_id"), py::arg("training"),
        py::arg("config"), py::arg("seeds"),
        py::arg("created_at") = std::nullopt,
        py::arg("target_message") = std::nullopt);
  m.def("verify_record",
        py::overload_cast<const TemplateRecord&, const std::vector<double>&>(
            &verify_record),
        py::arg("record"), py::arg("query"));

  py::class_<Store>(m, "Store")
      .def(py::init<std::filesystem::path>(), py::arg("root"))
      .def("enroll", &Store::enroll, py::arg("user_id"), py::arg("training"),
           py::arg("config"), py::arg("seeds"), py::arg("overwrite") = false,
           py::arg("created_at") = std::nullopt)
      .def("revoke", &Store::revoke, py::arg("user_id"), py::arg("training"),
           py::arg("config"), py::arg("seeds"),
           py::arg("created_at") = std::nullopt)
      .def("verify",
           py::overload_cast<const std::string&, const std::vector<double>&>(
               &Store::verify, py::const_),
           py::arg("user_id"), py::arg("query"))
      .def("exists", &Store::exists, py::arg("user_id"))
      .def("list_users", &Store::list_users)
      .def("load_record", &Store::load_record, py::arg("user_id"));

  // Evaluation harness.
  py::class_<eval::BenchmarkSpec>(m, "BenchmarkSpec")
      .def(py::init([](std::uint64_t seed, std::uint32_t num_classes,
                       std::uint32_t samples_per_class,
                       std::uint32_t probes_per_class, double class_center_scale,
                       double within_sigma) {
             return eval::BenchmarkSpec{seed,
                                        num_classes,
                                        samples_per_class,
                                        probes_per_class,
                                        class_center_scale,
                                        within_sigma};
           }),
           py::arg("seed") = 1, py::arg("num_classes") = 10,
           py::arg("samples_per_class") = 10, py::arg("probes_per_class") = 5,
           py::arg("class_center_scale") = 1.0, py::arg("within_sigma") = 0.15)
      .def_readwrite("seed", &eval::BenchmarkSpec::seed)
      .def_readwrite("num_classes", &eval::BenchmarkSpec::num_classes)
      .def_readwrite("samples_per_class", &eval::BenchmarkSpec::samples_per_class)
      .def_readwrite("probes_per_class", &eval::BenchmarkSpec::probes_per_class)
      .def_readwrite("class_center_scale",
                     &eval::BenchmarkSpec::class_center_scale)
      .def_readwrite("within_sigma", &eval::BenchmarkSpec::within_sigma);

  m.def(
      "run_benchmark",
      [](const eval::BenchmarkSpec& spec, const StageConfig& config) {
        auto result = eval::run_benchmark(spec, config);
        py::module_ json = py::module_::import("json");
        py::dict summary =
            json.attr("loads")(eval::benchmark_summary_json(result).dump());
        summary["genuine_histogram"] = result.histograms.genuine.counts;
        summary["imposter_histogram"] = result.histograms.imposter.counts;
        return summary;
      },
      py::arg("spec") = eval::BenchmarkSpec{}, py::arg("config") = StageConfig{});

  m.def(
      "security_report",
      [](const std::string& preset) {
        auto report = eval::security_report_preset(preset);
        py::module_ json = py::module_::import("json");
        return json.attr("loads")(eval::security_report_json(report).dump());
      },
      py::arg("preset") = "paper-novel");
  m.def("security_report_from_kc", [](std::uint64_t rp, std::uint64_t bda,
                                      std::uint64_t fc, std::uint64_t full) {
    auto report = eval::security_report_from_kc(rp, bda, fc, full);
    py::module_ json = py::module_::import("json");
    return json.attr("loads")(eval::security_report_json(report).dump());
  });
}
