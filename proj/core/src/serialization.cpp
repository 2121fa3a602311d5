#include "clab/serialization.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

namespace clab {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open " + path.string() + " for writing");
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path.string() + " for reading");
    return in;
}

std::vector<double> parse_row(const std::string& line, const std::filesystem::path& path) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string token;
    while (std::getline(ss, token, ',')) {
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (end == token.c_str())
            throw parse_error("malformed number in " + path.string());
        row.push_back(v);
    }
    return row;
}

void write_matrix_rows(std::ofstream& out, const Matrix& m) {
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << format_double(m(r, c));
        }
        out << '\n';
    }
}

Matrix read_matrix_rows(std::ifstream& in, Index rows, Index cols,
                        const std::filesystem::path& path) {
    Matrix m(rows, cols);
    std::string line;
    for (Index r = 0; r < rows; ++r) {
        if (!std::getline(in, line))
            throw parse_error("truncated matrix dump " + path.string());
        const auto row = parse_row(line, path);
        if (static_cast<Index>(row.size()) != cols)
            throw parse_error("row width mismatch in " + path.string());
        for (Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)];
    }
    return m;
}

std::pair<Index, Index> read_dims(std::ifstream& in, const std::filesystem::path& path) {
    std::string line;
    if (!std::getline(in, line)) throw parse_error("missing dimensions header in " + path.string());
    const auto dims = parse_row(line, path);
    if (dims.size() != 2 || dims[0] < 1 || dims[1] < 1)
        throw parse_error("bad dimensions header in " + path.string());
    return {static_cast<Index>(dims[0]), static_cast<Index>(dims[1])};
}

}  // namespace

std::string format_double(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void save_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
    auto out = open_out(path);
    out << m.rows() << ',' << m.cols() << '\n';
    write_matrix_rows(out, m);
    if (!out) throw io_error("write failed for " + path.string());
}

Matrix load_matrix_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    const auto [rows, cols] = read_dims(in, path);
    return read_matrix_rows(in, rows, cols, path);
}

void save_conceptor(const std::filesystem::path& path, const Conceptor& c) {
    auto out = open_out(path);
    out << c.m.rows() << ',' << c.m.cols() << '\n';
    out << "aperture," << format_double(c.aperture) << '\n';
    write_matrix_rows(out, c.m);
    if (!out) throw io_error("write failed for " + path.string());
}

Conceptor load_conceptor(const std::filesystem::path& path) {
    auto in = open_in(path);
    const auto [rows, cols] = read_dims(in, path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("aperture,", 0) != 0)
        throw parse_error("missing aperture line in " + path.string());
    const double aperture = std::strtod(line.c_str() + 9, nullptr);
    return Conceptor{read_matrix_rows(in, rows, cols, path), aperture};
}

void save_conception(const std::filesystem::path& path, const ConceptionVector& c) {
    auto out = open_out(path);
    out << "aperture," << format_double(c.aperture) << '\n';
    for (Index i = 0; i < c.size(); ++i) out << format_double(c.weights(i)) << '\n';
    if (!out) throw io_error("write failed for " + path.string());
}

ConceptionVector load_conception(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("aperture,", 0) != 0)
        throw parse_error("missing aperture line in " + path.string());
    const double aperture = std::strtod(line.c_str() + 9, nullptr);
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        values.push_back(parse_row(line, path).at(0));
    }
    if (values.empty()) throw parse_error("empty conception vector in " + path.string());
    Vector w(static_cast<Index>(values.size()));
    for (Index i = 0; i < w.size(); ++i) w(i) = values[static_cast<std::size_t>(i)];
    return ConceptionVector{std::move(w), aperture};
}

void save_loaded_system(const std::filesystem::path& dir, const LoadedSystem& sys) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw io_error("cannot create directory " + dir.string());

    json manifest;
    manifest["format_version"] = 1;
    manifest["mode"] = to_string(sys.mode);
    manifest["filter_kind"] = sys.is_diagonal() ? "conception" : "conceptor";
    manifest["n_neurons"] = sys.reservoir.n_neurons();
    manifest["n_inputs"] = sys.reservoir.n_inputs();
    manifest["n_patterns"] = sys.n_patterns();
    manifest["leaking_rate"] = sys.reservoir.leaking_rate;
    manifest["apertures"] = sys.apertures;
    manifest["seed"] = sys.seed;
    auto mf = open_out(dir / "manifest.json");
    mf << manifest.dump(2) << '\n';

    save_matrix_csv(dir / "w.csv", sys.w);
    save_matrix_csv(dir / "w_out.csv", sys.w_out);
    save_matrix_csv(dir / "w_star.csv", sys.reservoir.w_star);
    save_matrix_csv(dir / "w_in.csv", sys.reservoir.w_in);
    save_matrix_csv(dir / "bias.csv", sys.reservoir.bias);

    for (Index j = 0; j < sys.n_patterns(); ++j) {
        const auto tag = std::to_string(j);
        save_matrix_csv(dir / ("start_r_" + tag + ".csv"),
                        sys.start_r[static_cast<std::size_t>(j)]);
        save_matrix_csv(dir / ("start_z_" + tag + ".csv"),
                        sys.start_z[static_cast<std::size_t>(j)]);
        if (sys.is_diagonal()) {
            const auto& ds = std::get<std::vector<ConceptionVector>>(sys.filters);
            save_conception(dir / ("filter_" + tag + ".csv"),
                            ds[static_cast<std::size_t>(j)]);
        } else {
            const auto& cs = std::get<std::vector<Conceptor>>(sys.filters);
            save_conceptor(dir / ("filter_" + tag + ".csv"), cs[static_cast<std::size_t>(j)]);
        }
    }
}

LoadedSystem load_loaded_system(const std::filesystem::path& dir) {
    auto mf = open_in(dir / "manifest.json");
    json manifest;
    try {
        mf >> manifest;
    } catch (const json::exception& e) {
        throw parse_error("bad manifest in " + dir.string() + ": " + e.what());
    }

    LoadedSystem sys;
    const std::string mode = manifest.at("mode").get<std::string>();
    if (mode == "conceptor")
        sys.mode = TrainingMode::conceptor;
    else if (mode == "diagonal_explicit")
        sys.mode = TrainingMode::diagonal_explicit;
    else if (mode == "diagonal_iterative")
        sys.mode = TrainingMode::diagonal_iterative;
    else
        throw parse_error("unknown mode '" + mode + "' in " + dir.string());
    sys.apertures = manifest.at("apertures").get<std::vector<double>>();
    sys.seed = manifest.at("seed").get<std::uint64_t>();
    sys.reservoir.leaking_rate = manifest.at("leaking_rate").get<double>();

    sys.w = load_matrix_csv(dir / "w.csv");
    sys.w_out = load_matrix_csv(dir / "w_out.csv");
    sys.reservoir.w_star = load_matrix_csv(dir / "w_star.csv");
    sys.reservoir.w_in = load_matrix_csv(dir / "w_in.csv");
    sys.reservoir.bias = load_matrix_csv(dir / "bias.csv");

    const Index n_patterns = manifest.at("n_patterns").get<Index>();
    const bool diagonal = manifest.at("filter_kind").get<std::string>() == "conception";
    std::vector<Conceptor> cs;
    std::vector<ConceptionVector> ds;
    for (Index j = 0; j < n_patterns; ++j) {
        const auto tag = std::to_string(j);
        sys.start_r.push_back(load_matrix_csv(dir / ("start_r_" + tag + ".csv")));
        sys.start_z.push_back(load_matrix_csv(dir / ("start_z_" + tag + ".csv")));
        if (diagonal)
            ds.push_back(load_conception(dir / ("filter_" + tag + ".csv")));
        else
            cs.push_back(load_conceptor(dir / ("filter_" + tag + ".csv")));
    }
    if (diagonal)
        sys.filters = std::move(ds);
    else
        sys.filters = std::move(cs);
    return sys;
}

}  // namespace clab
