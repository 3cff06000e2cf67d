/**
 * Copyright 2026 The padfair Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <string>
#include <vector>

#include "padfair/error.hpp"
#include "padfair/fairness.hpp"
#include "padfair/fairswap.hpp"
#include "padfair/rates.hpp"

namespace py = pybind11;
using namespace padfair;

namespace {

using F64Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using I64Array = py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>;
using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

constexpr const char* kPartition = "group";

PadLabel label_from_int(std::int64_t v) {
  if (v == 0) return PadLabel::kBonaFide;
  if (v == 1) return PadLabel::kAttack;
  throw Error(ErrorCode::kInvalidArgument, "labels must be 0 (bona fide) or 1 (attack)");
}

PadLabel label_from_str(const std::string& s) {
  const auto l = parse_pad_label(s);
  if (!l) throw Error(ErrorCode::kInvalidArgument, "label must be 'bonafide' or 'attack'");
  return *l;
}

ScoreSet to_score_set(const F64Array& scores, const I64Array& labels, const std::vector<std::string>* groups) {
  if (scores.ndim() != 1 || labels.ndim() != 1 || scores.size() != labels.size() ||
      (groups && groups->size() != static_cast<std::size_t>(scores.size()))) {
    throw Error(ErrorCode::kDimensionMismatch, "scores, labels and groups must be 1-D and of equal length");
  }
  const auto s = scores.unchecked<1>();
  const auto l = labels.unchecked<1>();
  std::vector<ScoreRecord> recs;
  recs.reserve(static_cast<std::size_t>(s.shape(0)));
  std::vector<std::string> names;
  for (py::ssize_t i = 0; i < s.shape(0); ++i) {
    ScoreRecord r{std::to_string(i), s(i), label_from_int(l(i)), {}};
    if (!std::isfinite(r.score)) {
      throw Error(ErrorCode::kNonFiniteScore, "score at index " + std::to_string(i) + " is not finite");
    }
    if (groups) {
      const auto& g = (*groups)[static_cast<std::size_t>(i)];
      if (std::find(names.begin(), names.end(), g) == names.end()) names.push_back(g);
      r.groups[kPartition] = g;
    }
    recs.push_back(std::move(r));
  }
  if (!groups) return ScoreSet(std::move(recs));
  if (names.size() < 2) throw Error(ErrorCode::kInvalidArgument, "fairness metrics need at least two groups");
  return ScoreSet(std::move(recs), GroupPartition(kPartition, std::move(names)));
}

py::dict value_dict(const FairnessValue& v) {
  py::dict per_group;
  for (const auto& g : v.per_group_rates) per_group[py::str(g.group)] = py::make_tuple(g.rates.apcer, g.rates.bpcer);
  py::dict d;
  d["value"] = v.value;
  d["a_term"] = v.a_term;
  d["b_term"] = v.b_term;
  d["tau"] = v.tau.tau;
  d["per_group_rates"] = per_group;
  return d;
}

py::dict metric(FairnessMetric m, const F64Array& scores, const I64Array& labels, const std::vector<std::string>& groups,
                double tau, double alpha) {
  const ScoreSet s = to_score_set(scores, labels, &groups);
  const auto& p = *s.partition();
  return value_dict(m == FairnessMetric::kFdr ? fdr(s, p, DecisionThreshold(tau), alpha)
                                              : abf(s, p, DecisionThreshold(tau), alpha));
}

/// (H, W, 3) uint8, or a flat buffer of height * width * 3 bytes. Array
/// input must agree with width/height when those are given.
RasterImage to_image(const U8Array& a, std::optional<int> width, std::optional<int> height) {
  if (a.ndim() == 3 && a.shape(2) == RasterImage::kChannels) {
    const auto h = static_cast<int>(a.shape(0)), w = static_cast<int>(a.shape(1));
    if ((width && *width != w) || (height && *height != h)) {
      throw Error(ErrorCode::kDimensionMismatch, "array shape disagrees with width/height");
    }
    return RasterImage(w, h, std::vector<std::uint8_t>(a.data(), a.data() + a.size()));
  }
  if (a.ndim() == 1 && width && height) {
    if (*width <= 0 || *height <= 0 ||
        static_cast<py::ssize_t>(*width) * *height * RasterImage::kChannels != a.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "buffer of " + std::to_string(a.size()) + " bytes does not match " +
                                                     std::to_string(*width) + "x" + std::to_string(*height) + "x3");
    }
    return RasterImage(*width, *height, std::vector<std::uint8_t>(a.data(), a.data() + a.size()));
  }
  throw Error(ErrorCode::kDimensionMismatch, "image must be (H, W, 3) uint8 or a flat buffer with width and height");
}

U8Array from_image(const RasterImage& img) {
  U8Array out({static_cast<py::ssize_t>(img.height()), static_cast<py::ssize_t>(img.width()),
               static_cast<py::ssize_t>(RasterImage::kChannels)});
  std::memcpy(out.mutable_data(), img.pixels().data(), img.pixels().size());
  return out;
}

std::optional<PixelMap> to_map(const py::object& o) {
  if (o.is_none()) return std::nullopt;
  const auto a = o.cast<F64Array>();
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw Error(ErrorCode::kDimensionMismatch, "pixel map must be M x M");
  return PixelMap(static_cast<int>(a.shape(0)), std::vector<double>(a.data(), a.data() + a.size()));
}

py::object from_map(const std::optional<PixelMap>& m) {
  if (!m) return py::none();
  F64Array out({static_cast<py::ssize_t>(m->resolution()), static_cast<py::ssize_t>(m->resolution())});
  std::memcpy(out.mutable_data(), m->values().data(), m->values().size() * sizeof(double));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings over the padfair C++ core.";

  // padfair.Error(RuntimeError) with a string `code` attribute.
  static PyObject* error_type = PyErr_NewException("padfair.Error", PyExc_RuntimeError, nullptr);
  m.attr("Error") = py::handle(error_type);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(error_type)(std::string(e.what()));
      inst.attr("code") = std::string(error_code_name(e.code()));
      PyErr_SetObject(error_type, inst.ptr());
    }
  });

  m.def(
      "apcer",
      [](const F64Array& scores, const I64Array& labels, double tau) {
        return apcer(to_score_set(scores, labels, nullptr), DecisionThreshold(tau));
      },
      py::arg("scores"), py::arg("labels"), py::arg("tau"),
      "Fraction of attacks (label 1) scored below tau.");
  m.def(
      "bpcer",
      [](const F64Array& scores, const I64Array& labels, double tau) {
        return bpcer(to_score_set(scores, labels, nullptr), DecisionThreshold(tau));
      },
      py::arg("scores"), py::arg("labels"), py::arg("tau"),
      "Fraction of bona fides (label 0) scored at or above tau.");
  m.def(
      "threshold_at_apcer",
      [](const F64Array& scores, const I64Array& labels, double x) {
        return threshold_at_apcer(to_score_set(scores, labels, nullptr), x).tau;
      },
      py::arg("scores"), py::arg("labels"), py::arg("x"));
  m.def(
      "eer",
      [](const F64Array& scores, const I64Array& labels) {
        const auto r = eer(to_score_set(scores, labels, nullptr));
        py::dict d;
        d["eer"] = r.eer;
        d["tau"] = r.tau.tau;
        d["apcer"] = r.rates.apcer;
        d["bpcer"] = r.rates.bpcer;
        return d;
      },
      py::arg("scores"), py::arg("labels"));
  m.def(
      "fdr",
      [](const F64Array& s, const I64Array& l, const std::vector<std::string>& g, double tau, double alpha) {
        return metric(FairnessMetric::kFdr, s, l, g, tau, alpha);
      },
      py::arg("scores"), py::arg("labels"), py::arg("groups"), py::arg("tau"), py::arg("alpha") = 0.5);
  m.def(
      "abf",
      [](const F64Array& s, const I64Array& l, const std::vector<std::string>& g, double tau, double alpha) {
        return metric(FairnessMetric::kAbf, s, l, g, tau, alpha);
      },
      py::arg("scores"), py::arg("labels"), py::arg("groups"), py::arg("tau"), py::arg("alpha") = 0.5);
  m.def(
      "fairness_curve",
      [](const F64Array& s, const I64Array& l, const std::vector<std::string>& g, const std::string& which,
         double alpha, std::optional<std::vector<double>> grid) {
        if (which != "fdr" && which != "abf") throw Error(ErrorCode::kInvalidArgument, "metric must be 'fdr' or 'abf'");
        const ScoreSet set = to_score_set(s, l, &g);
        MetricConfig cfg;
        cfg.alpha = alpha;
        if (grid) cfg.sweep = SweepGrid(*grid);
        const auto curve = fairness_curve(set, *set.partition(),
                                          which == "fdr" ? FairnessMetric::kFdr : FairnessMetric::kAbf, cfg);
        py::list xs, values, taus;
        for (const auto& p : curve.points) {
          xs.append(p.x);
          values.append(p.value ? py::object(py::float_(p.value->value)) : py::none());
          taus.append(p.value ? py::object(py::float_(p.value->tau.tau)) : py::none());
        }
        py::dict d;
        d["x"] = xs;
        d["value"] = values;
        d["tau"] = taus;
        d["auc"] = curve.auc;
        d["excluded_points"] = curve.excluded_points;
        return d;
      },
      py::arg("scores"), py::arg("labels"), py::arg("groups"), py::arg("metric") = "fdr", py::arg("alpha") = 0.5,
      py::arg("grid") = py::none());

  m.def(
      "fairswap",
      [](const U8Array& image, const std::string& label, const py::list& donors, const std::string& sample_id,
         const std::string& group, const py::object& pixel_map, std::optional<int> width, std::optional<int> height,
         double p1, double p2, double p3, double p4, int patch_size, int alt_patch_size, int map_resolution,
         bool cross_group, std::uint64_t seed) {
        SwapSample input{sample_id, to_image(image, width, height), label_from_str(label), to_map(pixel_map), group};
        std::vector<SwapSample> pool_samples;
        for (const auto& item : donors) {
          const auto d = item.cast<py::dict>();
          SwapSample s;
          s.sample_id = d["sample_id"].cast<std::string>();
          s.image = to_image(d["image"].cast<U8Array>(), width, height);
          s.label = label_from_str(d["label"].cast<std::string>());
          s.group = d.contains("group") ? d["group"].cast<std::string>() : std::string();
          if (d.contains("pixel_map")) s.pixel_map = to_map(d["pixel_map"]);
          pool_samples.push_back(std::move(s));
        }
        const auto pool = CandidatePool::from_samples(pool_samples);
        FairSwapParams params{p1, p2, p3, p4, patch_size, alt_patch_size, map_resolution, cross_group, seed};
        Rng rng = Rng::for_sample(seed, sample_id);
        const auto out = fairswap_augment(input, pool, params, rng);

        py::dict d;
        d["image"] = from_image(out.image);
        d["label"] = std::string(to_string(out.binary_label));
        d["pixel_map"] = from_map(out.pixel_map);
        d["applied"] = out.applied;
        d["region"] = out.region ? py::object(py::make_tuple(out.region->top, out.region->left, out.region->size))
                                 : py::object(py::none());
        d["donor_id"] = out.donor_id ? py::object(py::str(*out.donor_id)) : py::object(py::none());
        return d;
      },
      py::arg("image"), py::arg("label"), py::arg("donors"), py::kw_only(), py::arg("sample_id") = "input",
      py::arg("group") = "", py::arg("pixel_map") = py::none(), py::arg("width") = py::none(),
      py::arg("height") = py::none(), py::arg("p1") = 0.3, py::arg("p2") = 0.3, py::arg("p3") = 0.5,
      py::arg("p4") = 0.5, py::arg("patch_size") = 64, py::arg("alt_patch_size") = 112, py::arg("map_resolution") = 14,
      py::arg("cross_group") = true, py::arg("seed") = 0,
      "One FairSWAP draw. The generator is seeded from (seed, sample_id), as in the CLI.");
}
