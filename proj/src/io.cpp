#include "qpmaps/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qpmaps/errors.hpp"

namespace qpmaps {

namespace {

std::size_t require_size(const json& j, const std::string& key) {
    if (!j.contains(key)) throw ParseError("missing field", "$." + key);
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ParseError("expected a non-negative integer", "$." + key);
    return v.get<std::size_t>();
}

const json& require_array(const json& j, const std::string& key) {
    if (!j.contains(key)) throw ParseError("missing field", "$." + key);
    const json& v = j.at(key);
    if (!v.is_array()) throw ParseError("expected an array", "$." + key);
    return v;
}

std::vector<Scalar> read_vector(const json& arr, std::size_t len, const std::string& where) {
    if (arr.size() != len)
        throw ParseError("expected " + std::to_string(len) + " entries", where);
    std::vector<Scalar> out;
    out.reserve(len);
    for (std::size_t i = 0; i < len; ++i)
        out.push_back(scalar_from_json(arr[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

Matrix<Scalar> read_matrix(const json& arr, std::size_t rows, std::size_t cols,
                           const std::string& where) {
    // A rows x 0 matrix may be spelled [] or as `rows` empty rows.
    if (cols == 0 && arr.empty()) return Matrix<Scalar>(rows, 0);
    if (arr.size() != rows)
        throw ParseError("expected " + std::to_string(rows) + " rows", where);
    Matrix<Scalar> out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = arr[i];
        const std::string rw = where + "[" + std::to_string(i) + "]";
        if (!row.is_array()) throw ParseError("expected an array row", rw);
        if (row.size() != cols)
            throw ParseError("expected " + std::to_string(cols) + " entries", rw);
        for (std::size_t k = 0; k < cols; ++k)
            out(i, k) = scalar_from_json(row[k], rw + "[" + std::to_string(k) + "]");
    }
    return out;
}

json matrix_to_json(const Matrix<Scalar>& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(scalar_to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

json scalar_to_json(const Scalar& s) {
    if (s.exact()) return json(s.str());
    return json(s.value());
}

Scalar scalar_from_json(const json& j, const std::string& where) {
    if (j.is_string()) {
        try {
            return Scalar::from_rational_string(j.get<std::string>());
        } catch (const Error& e) {
            throw ParseError(e.what(), where);
        }
    }
    if (j.is_number()) return Scalar(j.get<double>());
    throw ParseError("expected a rational string or a number", where);
}

json map_to_json(const QPMap& map) {
    json j;
    j["n"] = map.n;
    j["m"] = map.m;
    json lam = json::array();
    for (const Scalar& l : map.lambda) lam.push_back(scalar_to_json(l));
    j["lambda"] = std::move(lam);
    j["A"] = matrix_to_json(map.A);
    j["B"] = matrix_to_json(map.B);
    return j;
}

QPMap map_from_json(const json& j, double struct_tol) {
    if (!j.is_object()) throw ParseError("expected a JSON object", "$");
    QPMap map;
    map.n = require_size(j, "n");
    map.m = require_size(j, "m");
    map.lambda = read_vector(require_array(j, "lambda"), map.n, "$.lambda");
    map.A = read_matrix(require_array(j, "A"), map.n, map.m, "$.A");
    map.B = read_matrix(require_array(j, "B"), map.m, map.n, "$.B");
    validate(map, struct_tol);
    return map;
}

json qmt_to_json(const QMT& t) {
    json j;
    j["C"] = matrix_to_json(t.C());
    return j;
}

QMT qmt_from_json(const json& j, double struct_tol) {
    if (!j.is_object()) throw ParseError("expected a JSON object", "$");
    const json& c = require_array(j, "C");
    std::size_t n = c.size();
    if (n == 0) throw ParseError("expected a nonempty square matrix", "$.C");
    return QMT(read_matrix(c, n, n, "$.C"), struct_tol);
}

json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), path);
    }
}

void save_json_file(const json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw FileError("cannot write " + path);
}

QPMap load_map(const std::string& path, double struct_tol) {
    return map_from_json(load_json_file(path), struct_tol);
}

void save_map(const QPMap& map, const std::string& path) {
    save_json_file(map_to_json(map), path);
}

QMT load_qmt(const std::string& path, double struct_tol) {
    return qmt_from_json(load_json_file(path), struct_tol);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trajectory_csv(const Trajectory& tr) {
    std::ostringstream out;
    out << 't';
    for (std::size_t i = 1; i <= tr.map.n; ++i) out << ",x" << i;
    out << '\n';
    for (std::size_t t = 0; t < tr.states.size(); ++t) {
        out << t;
        std::vector<double> x = tr.states[t].x();
        for (double xi : x) out << ',' << format_double(xi);
        out << '\n';
    }
    return out.str();
}

void save_trajectory_csv(const Trajectory& tr, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write " + path);
    out << trajectory_csv(tr);
    if (!out) throw FileError("cannot write " + path);
}

State parse_state(const std::string& text, std::size_t n) {
    std::vector<double> x;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string piece = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                        : comma - pos);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(piece, &used);
        } catch (const std::exception&) {
            throw InvalidParameter("invalid state component: '" + piece + "'");
        }
        while (used < piece.size() && std::isspace(static_cast<unsigned char>(piece[used])))
            ++used;
        if (used != piece.size())
            throw InvalidParameter("invalid state component: '" + piece + "'");
        if (!(v > 0.0) || !std::isfinite(v))
            throw InvalidParameter("state components must be positive and finite");
        x.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (x.size() != n)
        throw InvalidParameter("expected " + std::to_string(n) + " state components, got " +
                               std::to_string(x.size()));
    return State::from_x(x);
}

} // namespace qpmaps
