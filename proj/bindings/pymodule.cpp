#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "platebench/error.hpp"
#include "platebench/metrics.hpp"
#include "platebench/ocr.hpp"
#include "platebench/preprocess.hpp"
#include "platebench/report.hpp"
#include "platebench/stats.hpp"
#include "platebench/synth.hpp"

namespace py = pybind11;
using namespace platebench;

namespace {

Image image_from_array(const py::array& array) {
    auto buffer = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>::ensure(array);
    if (!buffer)
        throw py::value_error("image must be a uint8 array");
    Image image;
    if (buffer.ndim() == 2) {
        image.height = static_cast<int>(buffer.shape(0));
        image.width = static_cast<int>(buffer.shape(1));
        image.channels = 1;
    } else if (buffer.ndim() == 3 && buffer.shape(2) == 3) {
        image.height = static_cast<int>(buffer.shape(0));
        image.width = static_cast<int>(buffer.shape(1));
        image.channels = 3;
    } else {
        throw py::value_error("image must have shape (h, w) or (h, w, 3)");
    }
    const auto* data = static_cast<const std::uint8_t*>(buffer.data());
    image.samples.assign(data, data + buffer.size());
    validate_image(image);
    return image;
}

py::array_t<std::uint8_t> array_from_image(const Image& image) {
    std::vector<py::ssize_t> shape;
    if (image.channels == 1)
        shape = {image.height, image.width};
    else
        shape = {image.height, image.width, 3};
    py::array_t<std::uint8_t> array(shape);
    std::copy(image.samples.begin(), image.samples.end(),
              static_cast<std::uint8_t*>(array.mutable_data()));
    return array;
}

PlateFormat format_from_string(const std::string& name) {
    if (name == "oldbrazil") return PlateFormat::OldBrazil;
    if (name == "mercosul") return PlateFormat::Mercosul;
    throw py::value_error("format must be 'oldbrazil' or 'mercosul'");
}

py::dict prediction_to_dict(const Prediction& prediction) {
    py::dict d;
    d["text"] = prediction.raw_text;
    d["confidence"] = prediction.confidence;
    d["elapsed"] = prediction.elapsed_seconds;
    return d;
}

py::dict summary_to_dict(const MetricsSummary& summary) {
    py::dict d;
    d["accuracy"] = summary.accuracy;
    d["precision"] = summary.precision;
    d["recall"] = summary.recall;
    d["f1"] = summary.f1;
    return d;
}

PlateSpec make_spec(const std::string& format, int glyph_scale, int padding,
                    std::array<std::uint8_t, 3> foreground,
                    std::array<std::uint8_t, 3> background) {
    PlateSpec spec;
    spec.format = format_from_string(format);
    spec.glyph_scale = glyph_scale;
    spec.padding = padding;
    spec.foreground = foreground;
    spec.background = background;
    return spec;
}

} // namespace

PYBIND11_MODULE(_platebench, m) {
    m.doc() = "License-plate OCR preprocessing benchmark core";

    py::register_exception<Error>(m, "PlatebenchError");

    // imaging
    m.def(
        "load_image", [](const std::filesystem::path& path) { return array_from_image(load_image(path)); },
        py::arg("path"), "Read a binary PGM/PPM (maxval 255) into a uint8 array.");
    m.def(
        "save_image",
        [](const py::array& image, const std::filesystem::path& path) {
            save_image(image_from_array(image), path);
        },
        py::arg("image"), py::arg("path"), "Write a uint8 array as P5 (2-D) or P6 (3-D).");
    m.def(
        "ingest_convert",
        [](const std::filesystem::path& path, const std::string& converter) {
            return array_from_image(ingest_convert(path, converter));
        },
        py::arg("path"), py::arg("converter"),
        "Run an external converter ({in}/{out} placeholders) and load its PPM output.");

    // preprocessing kernels
    m.def(
        "to_grayscale", [](const py::array& image) { return array_from_image(to_grayscale(image_from_array(image))); },
        py::arg("image"));
    m.def(
        "clahe_rgb",
        [](const py::array& image, int tiles_x, int tiles_y, double clip_limit) {
            return array_from_image(
                clahe_rgb(image_from_array(image), ClaheParams{tiles_x, tiles_y, clip_limit}));
        },
        py::arg("image"), py::arg("tiles_x") = 8, py::arg("tiles_y") = 8,
        py::arg("clip_limit") = 2.0);
    m.def(
        "bilateral_filter",
        [](const py::array& image, int radius, double sigma_space, double sigma_range) {
            return array_from_image(bilateral_filter(
                image_from_array(image), BilateralParams{radius, sigma_space, sigma_range}));
        },
        py::arg("image"), py::arg("radius") = 4, py::arg("sigma_space") = 75.0,
        py::arg("sigma_range") = 75.0);
    m.def(
        "apply_pipeline",
        [](const py::array& image, const std::string& pipeline) {
            const auto [out, timings] =
                apply_pipeline(image_from_array(image), parse_pipeline(pipeline));
            py::list timing_list;
            for (const StageTiming& t : timings)
                timing_list.append(py::make_tuple(t.stage, t.elapsed_seconds));
            return py::make_tuple(array_from_image(out), timing_list);
        },
        py::arg("image"), py::arg("pipeline"),
        "Apply a pipeline string such as 'clahe_rgb(tiles=8x8,clip=2.0)|grayscale'.");

    // synthetic data
    m.def(
        "generate_plate",
        [](const std::string& format, std::uint64_t seed, int glyph_scale, int padding,
           std::array<std::uint8_t, 3> foreground, std::array<std::uint8_t, 3> background) {
            const auto [image, text] = generate_plate(
                make_spec(format, glyph_scale, padding, foreground, background), seed);
            return py::make_tuple(array_from_image(image), text);
        },
        py::arg("format"), py::arg("seed"), py::arg("glyph_scale") = 4, py::arg("padding") = 6,
        py::arg("foreground") = std::array<std::uint8_t, 3>{60, 60, 60},
        py::arg("background") = std::array<std::uint8_t, 3>{200, 200, 200});
    m.def(
        "perturb",
        [](const py::array& image, double noise_sigma, double brightness_slope, double contrast,
           std::uint64_t seed) {
            return array_from_image(perturb(image_from_array(image),
                                            PerturbParams{noise_sigma, brightness_slope, contrast},
                                            seed));
        },
        py::arg("image"), py::arg("noise_sigma") = 0.0, py::arg("brightness_slope") = 0.0,
        py::arg("contrast") = 1.0, py::arg("seed") = 0);
    m.def(
        "generate_dataset",
        [](std::uint64_t count, const std::string& format, double noise_sigma,
           double brightness_slope, double contrast, std::uint64_t seed,
           const std::filesystem::path& out_dir, int glyph_scale, int padding) {
            const auto manifest = generate_dataset(
                count, make_spec(format, glyph_scale, padding, {60, 60, 60}, {200, 200, 200}),
                PerturbParams{noise_sigma, brightness_slope, contrast}, seed, out_dir);
            return manifest.string();
        },
        py::arg("count"), py::arg("format"), py::arg("noise_sigma") = 0.0,
        py::arg("brightness_slope") = 0.0, py::arg("contrast") = 1.0, py::arg("seed") = 0,
        py::arg("out_dir") = ".", py::arg("glyph_scale") = 4, py::arg("padding") = 6);

    // recognizers
    m.def(
        "builtin_recognize",
        [](const py::array& image) { return prediction_to_dict(builtin_recognize(image_from_array(image))); },
        py::arg("image"));
    m.def(
        "mock_recognize",
        [](const std::string& truth, double error_rate, std::uint64_t seed, std::uint64_t index) {
            return prediction_to_dict(mock_recognize(truth, error_rate, seed, index));
        },
        py::arg("truth"), py::arg("error_rate"), py::arg("seed"), py::arg("index"));
    m.def(
        "external_recognize",
        [](const py::array& image, const std::string& command, double timeout_seconds) {
            return prediction_to_dict(
                external_recognize(image_from_array(image), command, timeout_seconds));
        },
        py::arg("image"), py::arg("command"), py::arg("timeout_seconds") = 60.0);

    // metrics
    m.def("normalize_plate", &normalize_plate, py::arg("raw"));
    m.def(
        "classify_format",
        [](const std::string& plate) { return to_string(classify_format(plate)); },
        py::arg("plate"));
    m.def(
        "evaluate",
        [](const std::vector<std::tuple<std::string, std::string, double>>& rows) {
            std::vector<std::pair<std::string, Prediction>> pairs;
            for (const auto& [truth, text, confidence] : rows) {
                Prediction p;
                p.raw_text = text;
                p.confidence = confidence;
                pairs.emplace_back(truth, p);
            }
            const EvalOutcome outcome = evaluate(pairs);
            py::list correct;
            for (const EvalRecord& r : outcome.records) correct.append(r.correct);
            py::dict counts;
            counts["tp"] = outcome.counts.tp;
            counts["tn"] = outcome.counts.tn;
            counts["fp"] = outcome.counts.fp;
            counts["fn"] = outcome.counts.fn;
            py::dict d;
            d["counts"] = counts;
            d["summary"] = summary_to_dict(summarize(outcome.counts));
            d["correct"] = correct;
            return d;
        },
        py::arg("rows"), "rows: list of (truth, predicted_text, confidence) tuples.");
    m.def(
        "roc_curve",
        [](const std::vector<std::pair<double, bool>>& scored) {
            const RocCurve curve = roc_curve(scored);
            py::dict d;
            d["points"] = curve.points;
            d["auc"] = curve.auc;
            return d;
        },
        py::arg("scored"));

    // statistics
    m.def(
        "anova_oneway",
        [](const std::vector<std::vector<double>>& groups) {
            const AnovaResult r = anova_oneway(AnovaInput{groups});
            py::dict d;
            d["ss_total"] = r.ss_total;
            d["ss_between"] = r.ss_between;
            d["ss_within"] = r.ss_within;
            d["df_between"] = r.df_between;
            d["df_within"] = r.df_within;
            d["ms_between"] = r.ms_between;
            d["ms_within"] = r.ms_within;
            d["f_value"] = r.f_value;
            d["p_value"] = r.p_value;
            return d;
        },
        py::arg("groups"));
    m.def(
        "runtime_summary",
        [](const std::vector<double>& times, std::size_t bins) {
            const RuntimeStats stats = runtime_summary(times, bins);
            py::dict d;
            d["n"] = stats.n;
            d["mean"] = stats.mean;
            d["median"] = stats.median;
            d["std"] = stats.std_dev;
            d["gauss_mu"] = stats.gauss_mu;
            d["gauss_sigma"] = stats.gauss_sigma;
            d["bin_edges"] = stats.bin_edges;
            d["bin_counts"] = stats.bin_counts;
            return d;
        },
        py::arg("times"), py::arg("bins") = 10);
    m.def("gaussian_pdf", &gaussian_pdf, py::arg("x"), py::arg("mu"), py::arg("sigma"));
}
