#include "mixlab/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "mixlab/errors.hpp"
#include "mixlab/rng.hpp"

namespace mixlab {

const char* to_string(DataSource s) {
    switch (s) {
        case DataSource::two_moons: return "two_moons";
        case DataSource::gaussian_halfspace: return "gaussian_halfspace";
        case DataSource::csv: return "csv";
    }
    return "csv";
}

namespace {

DataSource source_from_string(const std::string& s) {
    if (s == "two_moons") return DataSource::two_moons;
    if (s == "gaussian_halfspace") return DataSource::gaussian_halfspace;
    return DataSource::csv;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

constexpr double kPi = 3.14159265358979323846264338327950288;

}  // namespace

Dataset gen_two_moons(std::size_t n, double noise_sd, std::uint64_t seed) {
    if (n < 2 || n % 2 != 0)
        throw InvalidCount("gen_two_moons: n must be even and >= 2");
    if (noise_sd < 0.0)
        throw InvalidParameter("gen_two_moons: noise_sd must be >= 0");

    const std::size_t half = n / 2;
    Dataset ds;
    ds.inputs = Mat(n, 2);
    ds.targets.assign(n, 0.0);
    ds.seed = seed;
    ds.source = DataSource::two_moons;

    RngStream rng(seed);
    for (std::size_t k = 0; k < half; ++k) {
        const double t = (half == 1) ? 0.0 : kPi * double(k) / double(half - 1);
        // upper moon
        ds.inputs.at(k, 0) = std::cos(t);
        ds.inputs.at(k, 1) = std::sin(t);
        ds.targets[k] = 0.0;
        // lower moon
        ds.inputs.at(half + k, 0) = 1.0 - std::cos(t);
        ds.inputs.at(half + k, 1) = 0.5 - std::sin(t);
        ds.targets[half + k] = 1.0;
    }
    if (noise_sd > 0.0) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                ds.inputs.at(i, j) += noise_sd * rng.normal();
    }
    return ds;
}

Dataset gen_gaussian_halfspace(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (n < 1 || d < 1)
        throw InvalidCount("gen_gaussian_halfspace: n, d must be >= 1");
    Dataset ds;
    ds.inputs = Mat(n, d);
    ds.targets.assign(n, 0.0);
    ds.seed = seed;
    ds.source = DataSource::gaussian_halfspace;

    RngStream rng(seed);
    Vec theta_star(d);
    for (std::size_t j = 0; j < d; ++j) theta_star[j] = rng.normal();
    for (std::size_t i = 0; i < n; ++i) {
        double score = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double v = rng.normal();
            ds.inputs.at(i, j) = v;
            score += v * theta_star[j];
        }
        ds.targets[i] = score > 0.0 ? 1.0 : 0.0;
    }
    ds.theta_star = std::move(theta_star);
    return ds;
}

Dataset center(const Dataset& ds) {
    if (ds.size() == 0) throw EmptyDataset("center: empty dataset");
    const std::size_t n = ds.size();
    const std::size_t p = ds.dim();

    Vec mean(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) axpy(1.0 / double(n), ds.x(i), mean);

    Dataset out = ds;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) out.inputs.at(i, j) -= mean[j];
    out.centered = true;
    if (out.input_mean.empty()) out.input_mean.assign(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) out.input_mean[j] += mean[j];
    return out;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction,
                                  std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw InvalidFraction("split: train_fraction must lie in (0,1)");
    const std::size_t n = ds.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    RngStream rng(seed);
    for (std::size_t i = n; i > 1; --i)
        std::swap(perm[i - 1], perm[rng.index(i)]);

    const std::size_t n_train = static_cast<std::size_t>(double(n) * train_fraction);
    auto take = [&](std::size_t begin, std::size_t count) {
        Dataset part = ds;
        part.inputs = Mat(count, ds.dim());
        part.targets.assign(count, 0.0);
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t src = perm[begin + i];
            std::copy(ds.x(src).begin(), ds.x(src).end(),
                      part.inputs.row(i).begin());
            part.targets[i] = ds.targets[src];
        }
        return part;
    };
    return {take(0, n_train), take(n_train, n - n_train)};
}

void save_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("save_csv: cannot open " + path);
    const std::size_t p = ds.dim();
    for (std::size_t j = 0; j < p; ++j) out << "x_" << j << ",";
    out << "y\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t j = 0; j < p; ++j) out << fmt17(ds.inputs.at(i, j)) << ",";
        out << fmt17(ds.targets[i]) << "\n";
    }
    if (!out) throw IoError("save_csv: write failed for " + path);

    nlohmann::json meta;
    meta["seed"] = ds.seed;
    meta["source"] = to_string(ds.source);
    meta["centered"] = ds.centered;
    meta["input_mean"] = ds.input_mean;
    if (ds.theta_star) meta["theta_star"] = *ds.theta_star;
    std::ofstream mout(path + ".meta.json");
    if (!mout) throw IoError("save_csv: cannot open " + path + ".meta.json");
    mout << meta.dump(2) << "\n";
}

Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_csv: cannot open " + path);
    std::string header;
    if (!std::getline(in, header) || header.empty())
        throw MalformedRow("load_csv: missing header in " + path);

    std::size_t p = 0;
    {
        std::stringstream hs(header);
        std::string cell;
        std::vector<std::string> cols;
        while (std::getline(hs, cell, ',')) cols.push_back(cell);
        if (cols.empty() || cols.back() != "y")
            throw MalformedRow("load_csv: header must end with column y");
        p = cols.size() - 1;
    }

    std::vector<double> values;
    std::size_t n = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string cell;
        std::size_t got = 0;
        while (std::getline(ls, cell, ',')) {
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                if (used != cell.size())
                    throw MalformedRow("load_csv: non-numeric cell '" + cell + "'");
                values.push_back(v);
            } catch (const std::invalid_argument&) {
                throw MalformedRow("load_csv: non-numeric cell '" + cell + "'");
            } catch (const std::out_of_range&) {
                throw MalformedRow("load_csv: cell out of range '" + cell + "'");
            }
            ++got;
        }
        if (got != p + 1)
            throw MalformedRow("load_csv: row " + std::to_string(n + 1) +
                               " has " + std::to_string(got) + " cells, expected " +
                               std::to_string(p + 1));
        ++n;
    }

    Dataset ds;
    ds.source = DataSource::csv;
    ds.inputs = Mat(n, p);
    ds.targets.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) ds.inputs.at(i, j) = values[i * (p + 1) + j];
        ds.targets[i] = values[i * (p + 1) + p];
    }

    const std::string meta_path = path + ".meta.json";
    if (std::filesystem::exists(meta_path)) {
        std::ifstream min(meta_path);
        nlohmann::json meta = nlohmann::json::parse(min, nullptr, false);
        if (!meta.is_discarded()) {
            ds.seed = meta.value("seed", std::uint64_t{0});
            ds.source = source_from_string(meta.value("source", std::string("csv")));
            ds.centered = meta.value("centered", false);
            if (meta.contains("input_mean"))
                ds.input_mean = meta["input_mean"].get<Vec>();
            if (meta.contains("theta_star"))
                ds.theta_star = meta["theta_star"].get<Vec>();
        }
    }
    return ds;
}

}  // namespace mixlab
