#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gaitkit/pipeline.hpp"

namespace gaitkit {

using nlohmann::json;

namespace {

constexpr int kBundleFormatVersion = 1;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw Error(where + ": " + what);
}

// Strict object access: every key must be consumed.
class StrictObject {
public:
    StrictObject(const json& node, std::string where) : node_(node), where_(std::move(where)) {
        if (!node.is_object()) fail(where_, "expected a JSON object");
    }

    template <typename T>
    T get(const char* key, T fallback) {
        mark(key);
        if (!node_.contains(key)) return fallback;
        return read<T>(key);
    }

    template <typename T>
    T require(const char* key) {
        mark(key);
        if (!node_.contains(key)) fail(where_, "missing required key '" + std::string(key) + "'");
        return read<T>(key);
    }

    bool has(const char* key) {
        mark(key);
        return node_.contains(key);
    }

    const json& raw(const char* key) {
        mark(key);
        return node_.at(key);
    }

    ~StrictObject() noexcept(false) {
        if (std::uncaught_exceptions() > 0) return;
        for (auto it = node_.begin(); it != node_.end(); ++it)
            if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end())
                fail(where_, "unknown key '" + it.key() + "'");
    }

private:
    template <typename T>
    T read(const char* key) {
        try {
            return node_.at(key).get<T>();
        } catch (const json::exception& e) {
            fail(where_, "key '" + std::string(key) + "': " + e.what());
        }
    }
    void mark(const char* key) { seen_.emplace_back(key); }

    const json& node_;
    std::string where_;
    std::vector<std::string> seen_;
};

json matrix_to_json(const Matrix& m) {
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

Matrix matrix_from_json(const json& node, const std::string& where) {
    StrictObject obj(node, where);
    const auto rows = obj.require<std::size_t>("rows");
    const auto cols = obj.require<std::size_t>("cols");
    auto data = obj.require<std::vector<double>>("data");
    if (data.size() != rows * cols) fail(where, "matrix data size mismatch");
    return Matrix(rows, cols, std::move(data));
}

json model_config_to_json(const ModelConfig& m) {
    json node{{"kind", m.kind}};
    if (m.kind == "knn") {
        node["k"] = m.knn_k;
    } else if (m.kind == "logreg") {
        node["learning_rate"] = m.logreg.learning_rate;
        node["l2_lambda"] = m.logreg.l2_lambda;
        node["max_epochs"] = m.logreg.max_epochs;
        node["tolerance"] = m.logreg.tolerance;
    } else if (m.kind == "naive_bayes") {
        node["var_smoothing"] = m.nb_var_smoothing;
    } else if (m.kind == "svm") {
        node["kernel"] = std::string(svm_kernel_name(m.svm.kernel));
        node["c"] = m.svm.C;
        node["gamma"] = m.svm.gamma;
        node["tolerance"] = m.svm.tolerance;
        node["max_passes"] = m.svm.max_passes;
        node["max_sweeps"] = m.svm.max_sweeps;
    } else if (m.kind == "cnn") {
        node["learning_rate"] = m.cnn.learning_rate;
        node["batch_size"] = m.cnn.batch_size;
        node["epochs"] = m.cnn.epochs;
    }
    return node;
}

ModelConfig model_config_from_json(const json& node, const std::string& where) {
    StrictObject obj(node, where);
    ModelConfig m;
    m.kind = obj.require<std::string>("kind");
    if (m.kind == "knn") {
        m.knn_k = obj.get<std::size_t>("k", m.knn_k);
    } else if (m.kind == "logreg") {
        m.logreg.learning_rate = obj.get<double>("learning_rate", m.logreg.learning_rate);
        m.logreg.l2_lambda = obj.get<double>("l2_lambda", m.logreg.l2_lambda);
        m.logreg.max_epochs = obj.get<std::size_t>("max_epochs", m.logreg.max_epochs);
        m.logreg.tolerance = obj.get<double>("tolerance", m.logreg.tolerance);
    } else if (m.kind == "naive_bayes") {
        m.nb_var_smoothing = obj.get<double>("var_smoothing", m.nb_var_smoothing);
    } else if (m.kind == "svm") {
        m.svm.kernel = parse_svm_kernel(obj.get<std::string>("kernel", "rbf"));
        m.svm.C = obj.get<double>("c", m.svm.C);
        m.svm.gamma = obj.get<double>("gamma", m.svm.gamma);
        m.svm.tolerance = obj.get<double>("tolerance", m.svm.tolerance);
        m.svm.max_passes = obj.get<std::size_t>("max_passes", m.svm.max_passes);
        m.svm.max_sweeps = obj.get<std::size_t>("max_sweeps", m.svm.max_sweeps);
    } else if (m.kind == "cnn") {
        m.cnn.learning_rate = obj.get<double>("learning_rate", m.cnn.learning_rate);
        m.cnn.batch_size = obj.get<std::size_t>("batch_size", m.cnn.batch_size);
        m.cnn.epochs = obj.get<std::size_t>("epochs", m.cnn.epochs);
    } else {
        fail(where, "model kind '" + m.kind + "' is not one of knn|logreg|naive_bayes|svm|cnn");
    }
    return m;
}

json config_to_json_node(const PipelineConfig& c) {
    json pca_node{{"enabled", c.pca_enabled}};
    if (c.pca.kind == PcaTarget::Kind::VarianceFraction)
        pca_node["variance_fraction"] = c.pca.fraction;
    else
        pca_node["components"] = c.pca.components;

    return json{
        {"seed", c.seed},
        {"sample_rate_hz", c.sample_rate_hz},
        {"filter",
         {{"enabled", c.filter_enabled},
          {"order", c.filter.order},
          {"cutoff_hz", c.filter.cutoff_hz},
          {"zero_phase", c.filter.zero_phase}}},
        {"window", {{"window_len", c.window.window_len}, {"hop", c.window.hop}}},
        {"scaler", std::string(scaler_kind_name(c.scaler))},
        {"pca", pca_node},
        {"model", model_config_to_json(c.model)},
        {"split",
         {{"mode", std::string(split_mode_name(c.split.mode))},
          {"method", c.split.method == SplitMethod::KFold ? "kfold" : "holdout"},
          {"k_folds", c.split.k_folds},
          {"train_fraction", c.split.train_fraction},
          {"stratified", c.split.stratified}}},
    };
}

PipelineConfig config_from_json_node(const json& node) {
    StrictObject obj(node, "config");
    PipelineConfig c;
    c.seed = obj.get<std::uint64_t>("seed", c.seed);
    c.sample_rate_hz = obj.get<int>("sample_rate_hz", c.sample_rate_hz);

    if (obj.has("filter")) {
        StrictObject filter(obj.raw("filter"), "config.filter");
        c.filter_enabled = filter.get<bool>("enabled", c.filter_enabled);
        c.filter.order = filter.get<int>("order", c.filter.order);
        c.filter.cutoff_hz = filter.get<double>("cutoff_hz", c.filter.cutoff_hz);
        c.filter.zero_phase = filter.get<bool>("zero_phase", c.filter.zero_phase);
    }
    if (obj.has("window")) {
        StrictObject window(obj.raw("window"), "config.window");
        c.window.window_len = window.get<std::size_t>("window_len", c.window.window_len);
        c.window.hop = window.get<std::size_t>("hop", c.window.hop);
    }
    c.scaler = parse_scaler_kind(obj.get<std::string>("scaler", "standard"));
    if (obj.has("pca")) {
        StrictObject pca(obj.raw("pca"), "config.pca");
        c.pca_enabled = pca.get<bool>("enabled", c.pca_enabled);
        const bool has_fraction = pca.has("variance_fraction");
        const bool has_components = pca.has("components");
        if (has_fraction && has_components)
            fail("config.pca", "give either variance_fraction or components, not both");
        if (has_components)
            c.pca = PcaTarget::component_count(pca.require<std::size_t>("components"));
        else if (has_fraction)
            c.pca = PcaTarget::variance_fraction(pca.require<double>("variance_fraction"));
    }
    if (obj.has("model")) c.model = model_config_from_json(obj.raw("model"), "config.model");
    if (obj.has("split")) {
        StrictObject split(obj.raw("split"), "config.split");
        c.split.mode = parse_split_mode(split.get<std::string>("mode", "window"));
        const auto method = split.get<std::string>("method", "kfold");
        if (method == "kfold")
            c.split.method = SplitMethod::KFold;
        else if (method == "holdout")
            c.split.method = SplitMethod::Holdout;
        else
            fail("config.split", "method must be kfold|holdout, got '" + method + "'");
        c.split.k_folds = split.get<std::size_t>("k_folds", c.split.k_folds);
        c.split.train_fraction = split.get<double>("train_fraction", c.split.train_fraction);
        c.split.stratified = split.get<bool>("stratified", c.split.stratified);
    }
    c = c.normalized();
    c.validate();
    return c;
}

json scaler_to_json(const ScalerParams& s) {
    return json{{"kind", std::string(scaler_kind_name(s.kind))},
                {"center", s.center},
                {"scale", s.scale},
                {"fitted_on", s.fitted_on}};
}

ScalerParams scaler_from_json(const json& node) {
    StrictObject obj(node, "bundle.scaler");
    ScalerParams s;
    s.kind = parse_scaler_kind(obj.require<std::string>("kind"));
    s.center = obj.require<std::vector<double>>("center");
    s.scale = obj.require<std::vector<double>>("scale");
    s.fitted_on = obj.require<std::string>("fitted_on");
    if (s.center.size() != s.scale.size()) fail("bundle.scaler", "center/scale size mismatch");
    s.zero_scale.resize(s.scale.size());
    for (std::size_t i = 0; i < s.scale.size(); ++i) s.zero_scale[i] = s.scale[i] == 0.0;
    return s;
}

json pca_to_json(const PcaModel& p) {
    return json{{"mean", p.mean},
                {"components", matrix_to_json(p.components)},
                {"explained_variance", p.explained_variance},
                {"total_variance", p.total_variance},
                {"fitted_on", p.fitted_on}};
}

PcaModel pca_from_json(const json& node) {
    StrictObject obj(node, "bundle.pca");
    PcaModel p;
    p.mean = obj.require<std::vector<double>>("mean");
    p.components = matrix_from_json(obj.raw("components"), "bundle.pca.components");
    p.explained_variance = obj.require<std::vector<double>>("explained_variance");
    p.total_variance = obj.require<double>("total_variance");
    p.fitted_on = obj.require<std::string>("fitted_on");
    return p;
}

json cnn_to_json(const CnnModel& m) {
    json layers = json::array();
    for (const auto& layer : m.arch.layers) {
        json node;
        switch (layer.kind) {
            case LayerKind::Conv:
                node = {{"kind", "conv"},          {"filters", layer.filters},
                        {"kernel_h", layer.kernel_h}, {"kernel_w", layer.kernel_w},
                        {"in_channels", layer.in_channels}, {"weights", layer.weights},
                        {"bias", layer.bias}};
                break;
            case LayerKind::Relu:
                node = {{"kind", "relu"}};
                break;
            case LayerKind::MaxPool:
                node = {{"kind", "max_pool"}, {"pool_h", layer.pool_h}, {"pool_w", layer.pool_w}};
                break;
            case LayerKind::Flatten:
                node = {{"kind", "flatten"}};
                break;
            case LayerKind::Dense:
                node = {{"kind", "dense"},
                        {"units", layer.units},
                        {"in_dim", layer.in_dim},
                        {"weights", layer.weights},
                        {"bias", layer.bias}};
                break;
        }
        layers.push_back(std::move(node));
    }
    return json{{"input_h", m.arch.input_h},
                {"input_w", m.arch.input_w},
                {"input_c", m.arch.input_c},
                {"layers", std::move(layers)}};
}

CnnModel cnn_from_json(const json& node) {
    StrictObject obj(node, "bundle.model(cnn)");
    CnnModel m;
    m.arch.input_h = obj.require<std::size_t>("input_h");
    m.arch.input_w = obj.require<std::size_t>("input_w");
    m.arch.input_c = obj.require<std::size_t>("input_c");
    const json& layers = obj.raw("layers");
    if (!layers.is_array()) fail("bundle.model(cnn)", "layers must be an array");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const std::string where = "bundle.model(cnn).layers[" + std::to_string(i) + "]";
        StrictObject lobj(layers[i], where);
        const auto kind = lobj.require<std::string>("kind");
        CnnLayer layer;
        if (kind == "conv") {
            layer.kind = LayerKind::Conv;
            layer.filters = lobj.require<std::size_t>("filters");
            layer.kernel_h = lobj.require<std::size_t>("kernel_h");
            layer.kernel_w = lobj.require<std::size_t>("kernel_w");
            layer.in_channels = lobj.require<std::size_t>("in_channels");
            layer.weights = lobj.require<std::vector<double>>("weights");
            layer.bias = lobj.require<std::vector<double>>("bias");
        } else if (kind == "relu") {
            layer.kind = LayerKind::Relu;
        } else if (kind == "max_pool") {
            layer.kind = LayerKind::MaxPool;
            layer.pool_h = lobj.require<std::size_t>("pool_h");
            layer.pool_w = lobj.require<std::size_t>("pool_w");
        } else if (kind == "flatten") {
            layer.kind = LayerKind::Flatten;
        } else if (kind == "dense") {
            layer.kind = LayerKind::Dense;
            layer.units = lobj.require<std::size_t>("units");
            layer.in_dim = lobj.require<std::size_t>("in_dim");
            layer.weights = lobj.require<std::vector<double>>("weights");
            layer.bias = lobj.require<std::vector<double>>("bias");
        } else {
            fail(where, "unknown layer kind '" + kind + "'");
        }
        m.arch.layers.push_back(std::move(layer));
    }
    if (m.arch.layers.empty() || m.arch.layers.back().kind != LayerKind::Dense)
        fail("bundle.model(cnn)", "network must end in a dense layer");
    m.n_classes = m.arch.layers.back().units;
    return m;
}

json model_to_json(const FittedPipeline& fitted) {
    return std::visit(
        [&](const auto& m) -> json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, KnnModel>) {
                return json{{"kind", "knn"},
                            {"k", m.k},
                            {"train", matrix_to_json(m.train)},
                            {"labels", m.labels}};
            } else if constexpr (std::is_same_v<T, LogRegModel>) {
                return json{{"kind", "logreg"},
                            {"weights", m.weights},
                            {"bias", m.bias},
                            {"converged", m.converged},
                            {"epochs_run", m.epochs_run}};
            } else if constexpr (std::is_same_v<T, GaussianNbModel>) {
                return json{{"kind", "naive_bayes"},
                            {"prior", std::vector<double>{m.prior[0], m.prior[1]}},
                            {"mean", matrix_to_json(m.mean)},
                            {"variance", matrix_to_json(m.variance)},
                            {"variance_floor", m.variance_floor}};
            } else if constexpr (std::is_same_v<T, SvmModel>) {
                return json{{"kind", "svm"},
                            {"kernel", std::string(svm_kernel_name(m.config.kernel))},
                            {"c", m.config.C},
                            {"gamma", m.gamma},
                            {"bias", m.bias},
                            {"support_vectors", matrix_to_json(m.support_vectors)},
                            {"dual_coef", m.dual_coef},
                            {"alpha", m.alpha},
                            {"sv_indices", m.sv_indices}};
            } else {
                json node = cnn_to_json(m);
                node["kind"] = "cnn";
                return node;
            }
        },
        fitted.model);
}

AnyModel model_from_json(const json& node, const PipelineConfig& config) {
    if (!node.is_object() || !node.contains("kind"))
        fail("bundle.model", "missing model kind");
    const auto kind = node.at("kind").get<std::string>();
    if (kind == "knn") {
        StrictObject obj(node, "bundle.model(knn)");
        obj.require<std::string>("kind");
        KnnModel m;
        m.k = obj.require<std::size_t>("k");
        m.train = matrix_from_json(obj.raw("train"), "bundle.model(knn).train");
        m.labels = obj.require<std::vector<int>>("labels");
        if (m.labels.size() != m.train.rows()) fail("bundle.model(knn)", "labels/rows mismatch");
        return m;
    }
    if (kind == "logreg") {
        StrictObject obj(node, "bundle.model(logreg)");
        obj.require<std::string>("kind");
        LogRegModel m;
        m.config = config.model.logreg;
        m.weights = obj.require<std::vector<double>>("weights");
        m.bias = obj.require<double>("bias");
        m.converged = obj.get<bool>("converged", false);
        m.epochs_run = obj.get<std::size_t>("epochs_run", 0);
        return m;
    }
    if (kind == "naive_bayes") {
        StrictObject obj(node, "bundle.model(naive_bayes)");
        obj.require<std::string>("kind");
        GaussianNbModel m;
        const auto prior = obj.require<std::vector<double>>("prior");
        if (prior.size() != 2) fail("bundle.model(naive_bayes)", "prior must have 2 entries");
        m.prior = {prior[0], prior[1]};
        m.mean = matrix_from_json(obj.raw("mean"), "bundle.model(naive_bayes).mean");
        m.variance = matrix_from_json(obj.raw("variance"), "bundle.model(naive_bayes).variance");
        m.variance_floor = obj.require<double>("variance_floor");
        return m;
    }
    if (kind == "svm") {
        StrictObject obj(node, "bundle.model(svm)");
        obj.require<std::string>("kind");
        SvmModel m;
        m.config = config.model.svm;
        m.config.kernel = parse_svm_kernel(obj.require<std::string>("kernel"));
        m.config.C = obj.require<double>("c");
        m.gamma = obj.require<double>("gamma");
        m.bias = obj.require<double>("bias");
        m.support_vectors =
            matrix_from_json(obj.raw("support_vectors"), "bundle.model(svm).support_vectors");
        m.dual_coef = obj.require<std::vector<double>>("dual_coef");
        m.alpha = obj.require<std::vector<double>>("alpha");
        m.sv_indices = obj.require<std::vector<std::size_t>>("sv_indices");
        if (m.dual_coef.size() != m.support_vectors.rows())
            fail("bundle.model(svm)", "dual_coef/support_vectors mismatch");
        return m;
    }
    if (kind == "cnn") {
        json clean = node;
        clean.erase("kind");
        return cnn_from_json(clean);
    }
    fail("bundle.model", "unknown model kind '" + kind + "'");
}

std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json metrics_to_json(const MetricSet& m) {
    return json{{"accuracy", m.accuracy},
                {"precision_abnormal", m.abnormal.precision},
                {"recall_abnormal", m.abnormal.recall},
                {"f1_abnormal", m.abnormal.f1},
                {"precision_normal", m.normal.precision},
                {"recall_normal", m.normal.recall},
                {"f1_normal", m.normal.f1},
                {"degenerate_abnormal", m.abnormal.degenerate},
                {"degenerate_normal", m.normal.degenerate}};
}

json confusion_to_json(const ConfusionMatrix& cm) {
    return json{{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}};
}

}  // namespace

std::string config_to_json(const PipelineConfig& config) {
    return config_to_json_node(config).dump(2) + "\n";
}

PipelineConfig config_from_json(const std::string& json_text) {
    json node;
    try {
        node = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(std::string("config: invalid JSON: ") + e.what());
    }
    return config_from_json_node(node);
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return config_from_json(buffer.str());
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

std::string bundle_to_json(const FittedPipeline& fitted) {
    json node{
        {"format", "gaitkit-bundle"},
        {"format_version", kBundleFormatVersion},
        {"created_at", iso8601_now()},
        {"config", config_to_json_node(fitted.config)},
        {"fitted_on", fitted.fitted_on},
        {"data_fingerprint", fitted.data_fingerprint},
        {"feature_dim", fitted.config.feature_dim()},
        {"imputation",
         {{"medians", fitted.imputation.medians}, {"fitted_on", fitted.imputation.fitted_on}}},
        {"scaler", scaler_to_json(fitted.scaler)},
        {"pca", fitted.pca ? pca_to_json(*fitted.pca) : json(nullptr)},
        {"model", model_to_json(fitted)},
    };
    return node.dump(2) + "\n";
}

FittedPipeline bundle_from_json(const std::string& json_text) {
    json node;
    try {
        node = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(std::string("bundle: invalid JSON: ") + e.what());
    }
    StrictObject obj(node, "bundle");
    if (obj.require<std::string>("format") != "gaitkit-bundle")
        throw Error("bundle: not a gaitkit model bundle");
    if (obj.require<int>("format_version") != kBundleFormatVersion)
        throw Error("bundle: unsupported format version");
    obj.get<std::string>("created_at", "");

    FittedPipeline fitted;
    fitted.config = config_from_json_node(obj.raw("config"));
    fitted.fitted_on = obj.require<std::string>("fitted_on");
    fitted.data_fingerprint = obj.get<std::string>("data_fingerprint", "");
    const auto feature_dim = obj.require<std::size_t>("feature_dim");
    if (feature_dim != fitted.config.feature_dim())
        throw Error("bundle: feature_dim " + std::to_string(feature_dim) +
                    " does not match window config (" +
                    std::to_string(fitted.config.feature_dim()) + ")");

    {
        StrictObject imp(obj.raw("imputation"), "bundle.imputation");
        const auto medians = imp.require<std::vector<double>>("medians");
        if (medians.size() != kNumChannels) throw Error("bundle.imputation: need 6 medians");
        std::copy(medians.begin(), medians.end(), fitted.imputation.medians.begin());
        fitted.imputation.fitted_on = imp.require<std::string>("fitted_on");
    }
    fitted.scaler = scaler_from_json(obj.raw("scaler"));
    if (!obj.raw("pca").is_null()) fitted.pca = pca_from_json(obj.raw("pca"));
    fitted.model = model_from_json(obj.raw("model"), fitted.config);
    return fitted;
}

void save_bundle(const FittedPipeline& fitted, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open file for writing: " + path.string());
    out << bundle_to_json(fitted);
    if (!out) throw Error("write failed: " + path.string());
}

FittedPipeline load_bundle(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open bundle: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return bundle_from_json(buffer.str());
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

std::string fingerprint_bytes(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string fingerprint_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return fingerprint_bytes(buffer.str());
}

std::string report_to_json(const EvaluationReport& report) {
    json folds = json::array();
    for (const auto& fold : report.folds) {
        folds.push_back(json{{"fold", fold.fold},
                             {"train_windows", fold.train_windows},
                             {"test_windows", fold.test_windows},
                             {"confusion", confusion_to_json(fold.confusion)},
                             {"metrics", metrics_to_json(fold.metrics)},
                             {"fitted_on", fold.fitted_on}});
    }
    json node{
        {"algorithm", report.model_kind},
        {"mode", std::string(split_mode_name(report.mode))},
        {"method", report.method == SplitMethod::KFold ? "kfold" : "holdout"},
        {"k_folds", report.k_folds},
        {"seed", report.seed},
        {"window_level_leakage_warning", report.window_level_leakage_warning},
        {"config", json::parse(report.config_json)},
        {"folds", std::move(folds)},
        {"pooled_confusion", confusion_to_json(report.pooled)},
        {"aggregate", metrics_to_json(report.aggregate)},
    };
    return node.dump(2) + "\n";
}

std::string report_table(const EvaluationReport& report) {
    char row[256];
    std::snprintf(row, sizeof(row), "%s,%.6f,%.6f,%.6f", report.model_kind.c_str(),
                  report.aggregate.normal.f1, report.aggregate.abnormal.f1,
                  report.aggregate.accuracy);
    return "algorithm,f1_normal,f1_abnormal,accuracy\n" + std::string(row) + "\n";
}

}  // namespace gaitkit
