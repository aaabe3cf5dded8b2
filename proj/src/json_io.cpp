#include "synalg/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

#include "synalg/errors.hpp"

namespace synalg {

namespace {

using nlohmann::json;

json parse_document(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw std::invalid_argument("input is not valid JSON");
    if (!doc.is_object()) throw std::invalid_argument("input must be a JSON object");
    return doc;
}

Matrix matrix_field(const json& doc, const char* key, std::size_t n) {
    if (!doc.contains(key))
        throw std::invalid_argument(std::string("missing field \"") + key + "\"");
    const json& rows = doc.at(key);
    if (!rows.is_array() || rows.size() != n)
        throw std::invalid_argument(std::string("field \"") + key + "\" must be an array of " +
                                    std::to_string(n) + " rows");
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        const json& row = rows.at(i);
        if (!row.is_array() || row.size() != n)
            throw std::invalid_argument(std::string("field \"") + key + "\" row " +
                                        std::to_string(i) + " must hold " + std::to_string(n) +
                                        " numbers");
        for (std::size_t j = 0; j < n; ++j) {
            const json& cell = row.at(j);
            if (!cell.is_number())
                throw std::invalid_argument(std::string("field \"") + key + "\" entry (" +
                                            std::to_string(i) + "," + std::to_string(j) +
                                            ") is not a number");
            const double x = cell.get<double>();
            if (!std::isfinite(x))
                throw std::invalid_argument(std::string("field \"") + key + "\" entry (" +
                                            std::to_string(i) + "," + std::to_string(j) +
                                            ") is not finite");
            m(i, j) = x;
        }
    }
    double scale = 1.0 + m.frobenius_norm();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::fabs(m(i, j) - m(j, i)) > 1e-8 * scale)
                throw std::invalid_argument(std::string("field \"") + key +
                                            "\" is not symmetric at (" + std::to_string(i) + "," +
                                            std::to_string(j) + ")");
    return m;
}

ToleranceConfig tolerance_field(const json& doc) {
    ToleranceConfig tol;
    if (!doc.contains("tol")) return tol;
    const json& t = doc.at("tol");
    if (!t.is_object()) throw std::invalid_argument("field \"tol\" must be an object");
    for (const auto& [key, value] : t.items()) {
        if (!value.is_number())
            throw std::invalid_argument("tolerance \"" + key + "\" is not a number");
        const double x = value.get<double>();
        if (key == "rank_eps")
            tol.rank_eps = x;
        else if (key == "comm_eps")
            tol.comm_eps = x;
        else if (key == "psd_eps")
            tol.psd_eps = x;
        else if (key == "eig_off_eps")
            tol.eig_off_eps = x;
        else
            throw std::invalid_argument("unknown tolerance \"" + key + "\"");
    }
    try {
        tol.validate();
    } catch (const std::exception& ex) {
        throw std::invalid_argument(std::string("invalid tolerances: ") + ex.what());
    }
    return tol;
}

std::size_t dim_field(const json& doc) {
    if (!doc.contains("dim")) throw std::invalid_argument("missing field \"dim\"");
    const json& d = doc.at("dim");
    if (!d.is_number_integer() || d.get<long long>() < 1 || d.get<long long>() > 64)
        throw std::invalid_argument("field \"dim\" must be an integer in 1..64");
    return static_cast<std::size_t>(d.get<long long>());
}

} // namespace

PairInput parse_pair_input(const std::string& text) {
    const json doc = parse_document(text);
    PairInput in;
    in.dim = dim_field(doc);
    in.tol = tolerance_field(doc);
    const Matrix pm = matrix_field(doc, "p", in.dim);
    const Matrix em = matrix_field(doc, "e", in.dim);
    try {
        in.p = Projection::checked(sym(pm), in.tol);
    } catch (const invariant_violation& ex) {
        throw std::invalid_argument(std::string("field \"p\" is not a projection: ") + ex.what());
    }
    try {
        in.e = Effect::checked(sym(em), in.tol);
    } catch (const invariant_violation& ex) {
        throw std::invalid_argument(std::string("field \"e\" is not an effect: ") + ex.what());
    }
    return in;
}

Projection parse_projection_input(const std::string& text, std::size_t expected_dim,
                                  const ToleranceConfig& tol) {
    const json doc = parse_document(text);
    const char* key = doc.contains("q") ? "q" : "p";
    const Matrix qm = matrix_field(doc, key, expected_dim);
    try {
        return Projection::checked(sym(qm), tol);
    } catch (const invariant_violation& ex) {
        throw std::invalid_argument(std::string("field \"") + key +
                                    "\" is not a projection: " + ex.what());
    }
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string json_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

std::string matrix_to_json(const Matrix& m) {
    std::string out = "[";
    for (std::size_t i = 0; i < m.dim(); ++i) {
        out += (i == 0) ? "[" : ",[";
        for (std::size_t j = 0; j < m.dim(); ++j) {
            if (j > 0) out += ",";
            out += format_double(m(i, j));
        }
        out += "]";
    }
    out += "]";
    return out;
}

std::string pair_to_json(const Projection& p, const Effect& e, const ToleranceConfig& tol) {
    std::string out = "{\"dim\":";
    out += std::to_string(p.dim());
    out += ",\"p\":";
    out += matrix_to_json(p.mat());
    out += ",\"e\":";
    out += matrix_to_json(e.mat());
    out += ",\"tol\":{\"rank_eps\":";
    out += format_double(tol.rank_eps);
    out += ",\"comm_eps\":";
    out += format_double(tol.comm_eps);
    out += ",\"psd_eps\":";
    out += format_double(tol.psd_eps);
    out += ",\"eig_off_eps\":";
    out += format_double(tol.eig_off_eps);
    out += "}}";
    return out;
}

} // namespace synalg
