#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "rainweave/error.hpp"
#include "rainweave/extraction.hpp"
#include "rainweave/png_io.hpp"
#include "rainweave/quilting.hpp"
#include "rainweave/rng.hpp"
#include "rainweave/synthesis.hpp"

namespace py = pybind11;
using namespace rainweave;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;
using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Accepts H x W (gray) or H x W x C.
ImageBuffer image_from_array(const FloatArray& arr) {
  if (arr.ndim() != 2 && arr.ndim() != 3) throw DimensionError("image array must be 2-D or 3-D");
  const int h = static_cast<int>(arr.shape(0));
  const int w = static_cast<int>(arr.shape(1));
  const int c = arr.ndim() == 3 ? static_cast<int>(arr.shape(2)) : 1;
  return ImageBuffer(h, w, c, std::vector<float>(arr.data(), arr.data() + arr.size()));
}

py::array_t<float> image_to_array(const ImageBuffer& img) {
  py::array_t<float> out({img.height(), img.width(), img.channels()});
  std::copy(img.data().begin(), img.data().end(), out.mutable_data());
  return out;
}

Field field_from_array(const DoubleArray& arr) {
  if (arr.ndim() != 2 && arr.ndim() != 3) throw DimensionError("region array must be 2-D or 3-D");
  const int h = static_cast<int>(arr.shape(0));
  const int w = static_cast<int>(arr.shape(1));
  const int c = arr.ndim() == 3 ? static_cast<int>(arr.shape(2)) : 1;
  return Field(h, w, c, std::vector<double>(arr.data(), arr.data() + arr.size()));
}

py::array_t<double> field_to_array(const Field& f) {
  py::array_t<double> out({f.height(), f.width(), f.channels()});
  std::copy(f.data().begin(), f.data().end(), out.mutable_data());
  return out;
}

ErrorMatrix matrix_from_array(const DoubleArray& arr) {
  if (arr.ndim() != 2) throw DimensionError("error matrix must be 2-D");
  return ErrorMatrix(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)),
                     std::vector<double>(arr.data(), arr.data() + arr.size()));
}

RainMask mask_from_array(const py::array_t<bool, py::array::c_style | py::array::forcecast>& arr) {
  if (arr.ndim() != 2) throw DimensionError("mask array must be 2-D");
  std::vector<std::uint8_t> bits(arr.data(), arr.data() + arr.size());
  return RainMask(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)), std::move(bits));
}

py::tuple seam_to_tuple(const SeamPath& s) { return py::make_tuple(s.indices, s.cost); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exemplar-based rain structure transfer";

  py::register_exception<Error>(m, "RainweaveError");
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ExtractionError>(m, "ExtractionError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<TransferConfig>(m, "TransferConfig")
      .def(py::init<>())
      .def(py::init([](int patch_size, std::optional<int> overlap, double threshold,
                       std::size_t bank_count, int feather, std::uint64_t seed) {
             TransferConfig cfg;
             cfg.patch_size = patch_size;
             cfg.overlap = overlap.value_or(default_overlap(patch_size));
             cfg.coverage_threshold = threshold;
             cfg.bank_count = bank_count;
             cfg.feather = feather;
             cfg.seed = seed;
             cfg.validate();
             return cfg;
           }),
           py::arg("patch_size") = 32, py::arg("overlap") = py::none(),
           py::arg("coverage_threshold") = 0.6, py::arg("bank_count") = 2000,
           py::arg("feather") = 1, py::arg("seed") = 0)
      .def_readwrite("patch_size", &TransferConfig::patch_size)
      .def_readwrite("overlap", &TransferConfig::overlap)
      .def_readwrite("coverage_threshold", &TransferConfig::coverage_threshold)
      .def_readwrite("bank_count", &TransferConfig::bank_count)
      .def_readwrite("feather", &TransferConfig::feather)
      .def_readwrite("seed", &TransferConfig::seed)
      .def("validate", &TransferConfig::validate);

  py::class_<PatchBank>(m, "PatchBank")
      .def("__len__", &PatchBank::size)
      .def_property_readonly("patch_size", &PatchBank::patch_size)
      .def_property_readonly("channels", &PatchBank::channels)
      .def("patch", [](const PatchBank& b, std::size_t k) {
        if (k >= b.size()) throw py::index_error("patch index out of range");
        return field_to_array(b.patches[k].values());
      })
      .def_property_readonly("source_refs", [](const PatchBank& b) {
        py::list refs;
        for (const auto& r : b.source_refs) refs.append(py::make_tuple(r.row, r.col, r.size));
        return refs;
      });

  m.def("default_overlap", &default_overlap, py::arg("patch_size"));

  m.def("load_image", [](const std::string& path) { return image_to_array(load_image(path)); },
        py::arg("path"));
  m.def("save_image",
        [](const FloatArray& img, const std::string& path) { save_image(image_from_array(img), path); },
        py::arg("image"), py::arg("path"));
  m.def("load_mask", [](const std::string& path) {
    const RainMask mask = load_mask(path);
    py::array_t<bool> out({mask.height(), mask.width()});
    auto view = out.mutable_unchecked<2>();
    for (int r = 0; r < mask.height(); ++r)
      for (int c = 0; c < mask.width(); ++c) view(r, c) = mask.at(r, c);
    return out;
  }, py::arg("path"));

  m.def("residual_of",
        [](const FloatArray& patch) { return field_to_array(residual_of(image_from_array(patch)).values()); },
        py::arg("patch"));
  m.def("enumerate_valid_positions",
        [](const py::array_t<bool, py::array::c_style | py::array::forcecast>& mask, int size,
           double threshold) {
          py::list refs;
          for (const auto& r : enumerate_valid_positions(mask_from_array(mask), size, threshold))
            refs.append(py::make_tuple(r.row, r.col, r.size));
          return refs;
        },
        py::arg("mask"), py::arg("size"), py::arg("threshold"));
  m.def("sample_rain_patches",
        [](const FloatArray& exemplar, const py::array_t<bool, py::array::c_style | py::array::forcecast>& mask,
           int size, double threshold, std::size_t count, std::uint64_t seed, std::uint64_t stream) {
          Rng rng = Rng::for_stream(seed, stream);
          return sample_rain_patches(image_from_array(exemplar), mask_from_array(mask), size,
                                     threshold, count, rng);
        },
        py::arg("exemplar"), py::arg("mask"), py::arg("size"), py::arg("threshold"),
        py::arg("count"), py::arg("seed"), py::arg("stream") = 0);

  m.def("overlap_error_surface",
        [](const DoubleArray& existing, const DoubleArray& incoming) {
          const ErrorMatrix e = overlap_error_surface(field_from_array(existing), field_from_array(incoming));
          py::array_t<double> out({e.rows(), e.cols()});
          std::copy(e.data().begin(), e.data().end(), out.mutable_data());
          return out;
        },
        py::arg("existing"), py::arg("incoming"));
  m.def("min_cut_vertical",
        [](const DoubleArray& e) { return seam_to_tuple(min_cut_vertical(matrix_from_array(e))); },
        py::arg("error"));
  m.def("min_cut_horizontal",
        [](const DoubleArray& e) { return seam_to_tuple(min_cut_horizontal(matrix_from_array(e))); },
        py::arg("error"));

  m.def("plan_grid",
        [](int height, int width, const TransferConfig& cfg) {
          py::list refs;
          for (const auto& r : plan_grid(height, width, cfg)) refs.append(py::make_tuple(r.row, r.col, r.size));
          return refs;
        },
        py::arg("height"), py::arg("width"), py::arg("config"));
  m.def("transfer",
        [](const FloatArray& target, const PatchBank& bank, const TransferConfig& cfg,
           std::uint64_t seed, std::uint64_t stream) {
          Rng rng = Rng::for_stream(seed, stream);
          return image_to_array(transfer(image_from_array(target), bank, cfg, rng));
        },
        py::arg("target"), py::arg("bank"), py::arg("config"), py::arg("seed"), py::arg("stream") = 1);
  m.def("generate_pairs",
        [](const std::vector<FloatArray>& targets, const PatchBank& bank, std::size_t pair_count,
           const TransferConfig& cfg, std::uint64_t seed, std::uint64_t stream) {
          std::vector<ImageBuffer> images;
          for (const auto& t : targets) images.push_back(image_from_array(t));
          Rng rng = Rng::for_stream(seed, stream);
          py::list out;
          for (const auto& rec : generate_pairs(images, bank, pair_count, cfg, rng)) {
            py::dict d;
            d["target_index"] = rec.target_index;
            d["target_ref"] = py::make_tuple(rec.target_ref.row, rec.target_ref.col, rec.target_ref.size);
            d["residual_index"] = rec.residual_index;
            d["target_patch"] = image_to_array(rec.target_patch);
            d["synthetic_patch"] = image_to_array(rec.synthetic_patch);
            out.append(d);
          }
          return out;
        },
        py::arg("targets"), py::arg("bank"), py::arg("pair_count"), py::arg("config"),
        py::arg("seed"), py::arg("stream") = 1);
}
