#include "mixlab/models.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "mixlab/errors.hpp"
#include "mixlab/rng.hpp"

namespace mixlab {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace

double LossFamily::h(double z) const {
    if (kind == Kind::squared) return 0.5 * z * z;
    // log(1+e^z), overflow-safe
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double LossFamily::h_prime(double z) const {
    if (kind == Kind::squared) return z;
    return sigmoid(z);
}

double LossFamily::h_double_prime(double z) const {
    if (kind == Kind::squared) return 1.0;
    const double g = sigmoid(z);
    return g * (1.0 - g);
}

double LossFamily::h_triple_prime(double z) const {
    if (kind == Kind::squared) return 0.0;
    const double g = sigmoid(z);
    return g * (1.0 - g) * (1.0 - 2.0 * g);
}

double predict(const Model& m, std::span<const double> x) {
    return std::visit(
        [&](const auto& model) -> double {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, LinearModel>) {
                return dot(model.theta, x);
            } else {
                if (x.size() != model.input_dim())
                    throw DimensionMismatch("predict: input size mismatch");
                double s = model.theta0;
                for (std::size_t j = 0; j < model.hidden(); ++j) {
                    const double z = dot(model.W.row(j), x);
                    if (z > 0.0) s += model.theta1[j] * z;
                }
                return s;
            }
        },
        m);
}

Vec grad_input(const Model& m, std::span<const double> x, bool* at_boundary) {
    if (at_boundary) *at_boundary = false;
    return std::visit(
        [&](const auto& model) -> Vec {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, LinearModel>) {
                if (x.size() != model.theta.size())
                    throw DimensionMismatch("grad_input: input size mismatch");
                return model.theta;
            } else {
                if (x.size() != model.input_dim())
                    throw DimensionMismatch("grad_input: input size mismatch");
                Vec g(x.size(), 0.0);
                for (std::size_t j = 0; j < model.hidden(); ++j) {
                    const double z = dot(model.W.row(j), x);
                    if (z == 0.0 && at_boundary) *at_boundary = true;
                    if (z > 0.0) axpy(model.theta1[j], model.W.row(j), g);
                }
                return g;
            }
        },
        m);
}

double hessian_input_quadform(const Model& m, std::span<const double> x,
                              std::span<const double> v) {
    std::visit(
        [&](const auto& model) {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, LinearModel>) {
                if (x.size() != model.theta.size() || v.size() != x.size())
                    throw DimensionMismatch("hessian_input_quadform: size mismatch");
            } else {
                if (x.size() != model.input_dim() || v.size() != x.size())
                    throw DimensionMismatch("hessian_input_quadform: size mismatch");
            }
        },
        m);
    // Both families are piecewise linear in x: grad^2 f = 0 a.e.
    return 0.0;
}

Vec grad_params(const Model& m, const LossFamily& fam, const Mat& batch_x,
                const Vec& batch_y) {
    if (batch_x.rows != batch_y.size())
        throw DimensionMismatch("grad_params: batch size mismatch");
    if (batch_x.rows == 0) throw EmptyDataset("grad_params: empty batch");
    const double inv_n = 1.0 / double(batch_x.rows);

    return std::visit(
        [&](const auto& model) -> Vec {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, LinearModel>) {
                if (batch_x.cols != model.theta.size())
                    throw DimensionMismatch("grad_params: input size mismatch");
                Vec g(model.theta.size(), 0.0);
                for (std::size_t i = 0; i < batch_x.rows; ++i) {
                    const auto xi = batch_x.row(i);
                    const double r = fam.h_prime(dot(model.theta, xi)) - batch_y[i];
                    axpy(r * inv_n, xi, g);
                }
                return g;
            } else {
                if (batch_x.cols != model.input_dim())
                    throw DimensionMismatch("grad_params: input size mismatch");
                const std::size_t hid = model.hidden();
                const std::size_t p = model.input_dim();
                Vec g(hid * p + hid + 1, 0.0);
                std::span<double> gw(g.data(), hid * p);
                std::span<double> gt1(g.data() + hid * p, hid);
                double& gt0 = g[hid * p + hid];
                Vec z(hid);
                for (std::size_t i = 0; i < batch_x.rows; ++i) {
                    const auto xi = batch_x.row(i);
                    double f = model.theta0;
                    for (std::size_t j = 0; j < hid; ++j) {
                        z[j] = dot(model.W.row(j), xi);
                        if (z[j] > 0.0) f += model.theta1[j] * z[j];
                    }
                    const double r = (fam.h_prime(f) - batch_y[i]) * inv_n;
                    for (std::size_t j = 0; j < hid; ++j) {
                        if (z[j] <= 0.0) continue;
                        gt1[j] += r * z[j];
                        const double c = r * model.theta1[j];
                        for (std::size_t k = 0; k < p; ++k)
                            gw[j * p + k] += c * xi[k];
                    }
                    if (model.bias_enabled) gt0 += r;
                }
                return g;
            }
        },
        m);
}

Vec params_flat(const Model& m) {
    return std::visit(
        [](const auto& model) -> Vec {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, LinearModel>) {
                return model.theta;
            } else {
                Vec flat;
                flat.reserve(model.W.data.size() + model.theta1.size() + 1);
                flat.insert(flat.end(), model.W.data.begin(), model.W.data.end());
                flat.insert(flat.end(), model.theta1.begin(), model.theta1.end());
                flat.push_back(model.theta0);
                return flat;
            }
        },
        m);
}

void set_params_flat(Model& m, const Vec& flat) {
    if (flat.size() != param_count(m))
        throw ShapeMismatch("set_params_flat: wrong length");
    std::visit(
        [&](auto& model) {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, LinearModel>) {
                model.theta = flat;
            } else {
                const std::size_t wn = model.W.data.size();
                std::copy(flat.begin(), flat.begin() + wn, model.W.data.begin());
                std::copy(flat.begin() + wn, flat.begin() + wn + model.theta1.size(),
                          model.theta1.begin());
                model.theta0 = model.bias_enabled ? flat.back() : 0.0;
            }
        },
        m);
}

std::size_t param_count(const Model& m) {
    return std::visit(
        [](const auto& model) -> std::size_t {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, LinearModel>)
                return model.theta.size();
            else
                return model.W.data.size() + model.theta1.size() + 1;
        },
        m);
}

LinearModel init_linear(std::size_t p, std::uint64_t seed) {
    RngStream rng(seed, /*stream_id=*/0x1717);
    LinearModel m;
    m.theta.resize(p);
    const double sd = 1.0 / std::sqrt(double(p));
    for (double& v : m.theta) v = sd * rng.normal();
    return m;
}

TwoLayerNet init_net(std::size_t hidden, std::size_t p, bool bias_enabled,
                     std::uint64_t seed) {
    RngStream rng(seed, /*stream_id=*/0x2323);
    TwoLayerNet net;
    net.W = Mat(hidden, p);
    net.theta1.resize(hidden);
    net.theta0 = 0.0;
    net.bias_enabled = bias_enabled;
    const double sd_w = 1.0 / std::sqrt(double(p));
    for (double& v : net.W.data) v = sd_w * rng.normal();
    const double sd_t = 1.0 / std::sqrt(double(hidden));
    for (double& v : net.theta1) v = sd_t * rng.normal();
    return net;
}

void save_checkpoint(const Model& m, const std::string& path, std::uint64_t seed,
                     const std::string& note) {
    nlohmann::json doc;
    doc["seed"] = seed;
    if (!note.empty()) doc["metadata"] = note;
    std::visit(
        [&](const auto& model) {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, LinearModel>) {
                doc["kind"] = "linear";
                doc["dims"] = {{"p", model.theta.size()}};
                doc["theta"] = model.theta;
            } else {
                doc["kind"] = "two_layer_net";
                doc["dims"] = {{"hidden", model.hidden()}, {"p", model.input_dim()}};
                doc["W"] = model.W.data;
                doc["theta1"] = model.theta1;
                doc["theta0"] = model.theta0;
                doc["bias_enabled"] = model.bias_enabled;
            }
        },
        m);
    std::ofstream out(path);
    if (!out) throw IoError("save_checkpoint: cannot open " + path);
    out << doc.dump(2) << "\n";
}

Model load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_checkpoint: cannot open " + path);
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded())
        throw IoError("load_checkpoint: invalid JSON in " + path);
    const std::string kind = doc.value("kind", std::string());
    if (kind == "linear") {
        LinearModel m;
        m.theta = doc.at("theta").get<Vec>();
        return m;
    }
    if (kind == "two_layer_net") {
        TwoLayerNet net;
        const std::size_t hidden = doc.at("dims").at("hidden").get<std::size_t>();
        const std::size_t p = doc.at("dims").at("p").get<std::size_t>();
        net.W = Mat(hidden, p);
        net.W.data = doc.at("W").get<Vec>();
        if (net.W.data.size() != hidden * p)
            throw IoError("load_checkpoint: W length mismatch");
        net.theta1 = doc.at("theta1").get<Vec>();
        net.theta0 = doc.value("theta0", 0.0);
        net.bias_enabled = doc.value("bias_enabled", true);
        return net;
    }
    throw IoError("load_checkpoint: unknown model kind '" + kind + "'");
}

}  // namespace mixlab
