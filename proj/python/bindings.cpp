#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "mammoscope/bayes.hpp"
#include "mammoscope/error.hpp"
#include "mammoscope/eval.hpp"
#include "mammoscope/features.hpp"
#include "mammoscope/fourier.hpp"
#include "mammoscope/imgio.hpp"
#include "mammoscope/phantom.hpp"
#include "mammoscope/pipeline.hpp"
#include "mammoscope/preprocess.hpp"
#include "mammoscope/wavelet.hpp"

namespace py = pybind11;
using namespace mammoscope;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const DoubleArray& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
  Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  std::memcpy(m.values.data(), a.data(), m.values.size() * sizeof(double));
  return m;
}

py::array_t<double> to_array(const Matrix& m) {
  py::array_t<double> a({static_cast<py::ssize_t>(m.rows), static_cast<py::ssize_t>(m.cols)});
  std::memcpy(a.mutable_data(), m.values.data(), m.values.size() * sizeof(double));
  return a;
}

GrayImage to_gray_image(const DoubleArray& a) { return to_image(to_matrix(a)); }
py::array_t<double> to_array(const GrayImage& g) { return to_array(mammoscope::to_matrix(g)); }

std::vector<double> to_vector(const DoubleArray& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

BinaryMask to_mask(const py::array_t<bool, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D mask");
  BinaryMask m(static_cast<std::size_t>(a.shape(1)), static_cast<std::size_t>(a.shape(0)));
  for (std::size_t i = 0; i < m.bits.size(); ++i) m.bits[i] = a.data()[i];
  return m;
}

py::array_t<bool> to_array(const BinaryMask& m) {
  py::array_t<bool> a({static_cast<py::ssize_t>(m.height), static_cast<py::ssize_t>(m.width)});
  for (std::size_t i = 0; i < m.bits.size(); ++i) a.mutable_data()[i] = m.bits[i] != 0;
  return a;
}

py::array_t<std::complex<double>> to_array(const Spectrum& s) {
  const auto n = static_cast<py::ssize_t>(s.size);
  py::array_t<std::complex<double>> a({n, n});
  std::memcpy(a.mutable_data(), s.values.data(), s.values.size() * sizeof(std::complex<double>));
  return a;
}

std::vector<Label> to_labels(const std::vector<std::string>& names) {
  std::vector<Label> out;
  for (const auto& n : names) out.push_back(parse_label(n));
  return out;
}

py::bytes to_bytes(const std::vector<std::uint8_t>& b) {
  return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

FeatureTable make_table(const std::vector<std::string>& names, const std::vector<std::string>& labels,
                        const DoubleArray& values) {
  if (values.ndim() != 2 || static_cast<std::size_t>(values.shape(0)) != labels.size() ||
      static_cast<std::size_t>(values.shape(1)) != names.size()) {
    throw py::value_error("values must have shape (len(labels), len(names))");
  }
  FeatureTable t;
  t.names = names;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    const double* row = values.data() + r * names.size();
    t.rows.push_back({std::to_string(r), parse_label(labels[r]), {row, row + names.size()}});
  }
  return t;
}

}  // namespace

PYBIND11_MODULE(_mammoscope, m) {
  m.doc() = "Wavelet and Fourier moment features for mammogram classification";

  static py::exception<Error> error_type(m, "MammoscopeError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error_type(e.what());
    }
  });

  // imgio
  py::class_<RawImage>(m, "RawImage")
      .def_readonly("width", &RawImage::width)
      .def_readonly("height", &RawImage::height)
      .def_readonly("maxval", &RawImage::maxval)
      .def_property_readonly("samples", [](const RawImage& r) {
        py::array_t<std::uint32_t> a({static_cast<py::ssize_t>(r.height), static_cast<py::ssize_t>(r.width)});
        std::memcpy(a.mutable_data(), r.samples.data(), r.samples.size() * sizeof(std::uint32_t));
        return a;
      });
  m.def("read_pgm", [](py::bytes data) {
    const std::string s = data;
    return read_pgm(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
  }, py::arg("data"));
  m.def("encode_pgm", [](const RawImage& r, bool binary) { return to_bytes(encode_pgm(r, binary)); },
        py::arg("raw"), py::arg("binary") = true);
  m.def("to_gray", [](const RawImage& r) { return to_array(to_gray(r)); });
  m.def("write_pgm", [](const DoubleArray& img, std::uint32_t maxval, bool binary) {
    return to_bytes(write_pgm(to_gray_image(img), maxval, binary));
  }, py::arg("image"), py::arg("maxval") = 255, py::arg("binary") = true);

  // preprocess
  m.def("orient", [](const DoubleArray& img) { return to_array(orient(to_gray_image(img))); });
  m.def("threshold", [](const DoubleArray& img, double t) { return to_array(threshold(to_gray_image(img), t)); },
        py::arg("image"), py::arg("t"));
  m.def("largest_component", [](const py::array_t<bool, py::array::c_style | py::array::forcecast>& mask) {
    return to_array(largest_component(to_mask(mask)));
  });
  m.def("apply_mask", [](const DoubleArray& img, const py::array_t<bool, py::array::c_style | py::array::forcecast>& mask) {
    return to_array(apply_mask(to_gray_image(img), to_mask(mask)));
  });
  m.def("normalize_intensity", [](const DoubleArray& img) { return to_array(normalize_intensity(to_gray_image(img))); });
  m.def("preprocess", [](const DoubleArray& img, double t, bool do_orient, bool artifact_removal) {
    return to_array(preprocess_pipeline(to_gray_image(img), {t, do_orient, artifact_removal}));
  }, py::arg("image"), py::arg("threshold") = 0.1, py::arg("orient") = true, py::arg("artifact_removal") = true);

  // wavelet
  m.def("filter_taps", [](const std::string& name) {
    auto f = make_filter(parse_filter_id(name));
    return py::make_tuple(f.lowpass, f.highpass);
  });
  m.def("dwt1d", [](const DoubleArray& s, const std::string& filter) {
    auto v = to_vector(s);
    return dwt1d(v, make_filter(parse_filter_id(filter)));
  }, py::arg("signal"), py::arg("filter") = "daub4");
  m.def("idwt1d", [](const DoubleArray& a, const DoubleArray& d, const std::string& filter) {
    auto av = to_vector(a);
    auto dv = to_vector(d);
    return idwt1d(av, dv, make_filter(parse_filter_id(filter)));
  }, py::arg("approx"), py::arg("detail"), py::arg("filter") = "daub4");

  py::class_<WaveletDecomposition>(m, "WaveletDecomposition")
      .def_property_readonly("filter", [](const WaveletDecomposition& d) { return std::string(to_string(d.filter)); })
      .def_property_readonly("levels", &WaveletDecomposition::levels)
      .def_property_readonly("ll", [](const WaveletDecomposition& d) { return to_array(d.ll); })
      .def("band", [](const WaveletDecomposition& d, const std::string& band, std::size_t level) {
        if (level < 1 || level > d.levels()) throw py::index_error("level out of range");
        const auto& lvl = d.details[level - 1];
        if (band == "HL") return to_array(lvl.hl);
        if (band == "LH") return to_array(lvl.lh);
        if (band == "HH") return to_array(lvl.hh);
        if (band == "LL" && level == d.levels()) return to_array(d.ll);
        throw py::value_error("band must be HL, LH, HH, or LL at the final level");
      }, py::arg("band"), py::arg("level"));
  m.def("dwt2d", [](const DoubleArray& a, const std::string& filter, std::size_t levels) {
    return dwt2d(to_matrix(a), make_filter(parse_filter_id(filter)), levels);
  }, py::arg("matrix"), py::arg("filter") = "daub4", py::arg("levels") = 3);
  m.def("idwt2d", [](const WaveletDecomposition& d) { return to_array(idwt2d(d)); });

  // fourier
  m.def("fft2d", [](const DoubleArray& a) { return to_array(fft2d(to_matrix(a))); });
  m.def("dft2d_direct", [](const DoubleArray& a) { return to_array(dft2d_direct(to_matrix(a))); });
  m.def("log_magnitude_map", [](const DoubleArray& a) { return to_array(log_magnitude(fft2d(to_matrix(a)))); },
        "Centred log(1 + |F|) of the zero-padded FFT of a real image.");

  // features
  m.def("mean", [](const DoubleArray& a) { return mean(to_matrix(a)); });
  m.def("stddev", [](const DoubleArray& a) { return stddev(to_matrix(a)); });
  m.def("skewness", [](const DoubleArray& a) { return skewness(to_matrix(a)); });
  m.def("kurtosis", [](const DoubleArray& a) { return kurtosis(to_matrix(a)); });
  m.def("cross_correlation", [](const DoubleArray& a, const DoubleArray& b) {
    return cross_correlation(to_matrix(a), to_matrix(b));
  });
  m.def("extract_features", [](const DoubleArray& img, const std::string& filter, std::size_t levels,
                               const std::string& mode) {
    const auto fv = extract_features(to_gray_image(img), {parse_filter_id(filter), levels, parse_feature_mode(mode)});
    return py::make_tuple(fv.names, fv.values);
  }, py::arg("image"), py::arg("filter") = "daub4", py::arg("levels") = 3, py::arg("mode") = "default8");
  m.def("select_features", [](const std::vector<std::string>& names, const std::vector<std::string>& labels,
                              const DoubleArray& values, std::size_t k) {
    return select_features(make_table(names, labels, values), k);
  }, py::arg("names"), py::arg("labels"), py::arg("values"), py::arg("k"));

  // bayes
  py::class_<GaussianNbModel>(m, "GaussianNbModel")
      .def_readonly("feature_names", &GaussianNbModel::feature_names)
      .def_property_readonly("priors", [](const GaussianNbModel& g) {
        return py::dict(py::arg("normal") = g.priors[0], py::arg("suspicious") = g.priors[1]);
      })
      .def_property_readonly("means", [](const GaussianNbModel& g) { return py::make_tuple(g.means[0], g.means[1]); })
      .def_property_readonly("variances", [](const GaussianNbModel& g) { return py::make_tuple(g.variances[0], g.variances[1]); })
      .def("posterior", [](const GaussianNbModel& g, const DoubleArray& x) {
        const auto p = posterior(g, to_vector(x));
        return py::dict(py::arg("normal") = p.normal, py::arg("suspicious") = p.suspicious);
      })
      .def("classify", [](const GaussianNbModel& g, const DoubleArray& x, double threshold) {
        const auto d = classify(g, to_vector(x), threshold);
        return py::make_tuple(std::string(to_string(d.label)), d.score);
      }, py::arg("x"), py::arg("threshold") = 0.5)
      .def("save", [](const GaussianNbModel& g) { return save_model(g); })
      .def_static("load", [](const std::string& text) { return load_model(text); })
      .def("__eq__", [](const GaussianNbModel& a, const GaussianNbModel& b) { return a == b; });
  m.def("train", [](const std::vector<std::string>& names, const std::vector<std::string>& labels,
                    const DoubleArray& values) { return train(make_table(names, labels, values)); },
        py::arg("names"), py::arg("labels"), py::arg("values"));

  // eval
  m.def("confusion", [](const std::vector<std::string>& pred, const std::vector<std::string>& truth) {
    const auto cm = confusion(to_labels(pred), to_labels(truth));
    return py::dict(py::arg("tp") = cm.tp, py::arg("fp") = cm.fp, py::arg("tn") = cm.tn, py::arg("fn") = cm.fn);
  });
  m.def("sensitivity", [](std::size_t tp, std::size_t fn) { return sensitivity({tp, 0, 0, fn}); },
        py::arg("tp"), py::arg("fn"));
  m.def("specificity", [](std::size_t tn, std::size_t fp) { return specificity({0, fp, tn, 0}); },
        py::arg("tn"), py::arg("fp"));
  m.def("roc", [](const DoubleArray& scores, const std::vector<std::string>& truth) {
    const auto s = to_vector(scores);
    const auto curve = roc(s, to_labels(truth));
    py::array_t<double> pts({static_cast<py::ssize_t>(curve.points.size()), py::ssize_t{3}});
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      pts.mutable_at(i, 0) = curve.points[i].threshold;
      pts.mutable_at(i, 1) = curve.points[i].fpr;
      pts.mutable_at(i, 2) = curve.points[i].tpr;
    }
    return py::make_tuple(pts, curve.auc);
  }, "Returns (points[threshold, fpr, tpr], auc).");
  m.def("kfold", [](const std::vector<std::string>& labels, std::size_t k, std::uint64_t seed) {
    py::list out;
    for (const auto& s : kfold(to_labels(labels), k, seed)) out.append(py::make_tuple(s.train, s.test));
    return out;
  }, py::arg("labels"), py::arg("k"), py::arg("seed"));

  // phantom
  m.def("render_phantom", [](std::size_t index, std::size_t size, std::uint64_t seed, bool artifact) {
    PhantomConfig cfg;
    cfg.size = size;
    cfg.seed = seed;
    cfg.artifact_label = artifact;
    const auto p = render_phantom(cfg, index);
    return py::make_tuple(to_array(p.image), std::string(to_string(p.label)));
  }, py::arg("index"), py::arg("size") = 128, py::arg("seed") = PhantomConfig{}.seed, py::arg("artifact") = true);
}
