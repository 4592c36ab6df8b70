#include "kippen/document.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kippen::io {

using nlohmann::json;
using Kind = DocumentError::Kind;

MatrixDocument parse_document(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DocumentError(Kind::parse, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw DocumentError(Kind::validation, "document must be a JSON object");
    if (!j.contains("n") || !j["n"].is_number_unsigned()) throw DocumentError(Kind::validation, "missing or invalid \"n\"");
    const auto n = j["n"].get<std::size_t>();
    if (n == 0 || n > 64) throw DocumentError(Kind::validation, "\"n\" must be in [1, 64]");
    if (!j.contains("entries") || !j["entries"].is_array() || j["entries"].size() != n)
        throw DocumentError(Kind::validation, "\"entries\" must be an array of n rows");
    MatrixDocument doc;
    doc.matrix = linalg::ComplexMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = j["entries"][i];
        if (!row.is_array() || row.size() != n) throw DocumentError(Kind::validation, "row " + std::to_string(i) + " must have n entries");
        for (std::size_t k = 0; k < n; ++k) {
            const auto& z = row[k];
            if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
                throw DocumentError(Kind::validation, "entry (" + std::to_string(i) + "," + std::to_string(k) + ") must be [re, im]");
            const double re = z[0].get<double>();
            const double im = z[1].get<double>();
            if (!std::isfinite(re) || !std::isfinite(im)) throw DocumentError(Kind::validation, "non-finite entry");
            doc.matrix(i, k) = {re, im};
        }
    }
    if (j.contains("label") && j["label"].is_string()) doc.label = j["label"].get<std::string>();
    if (j.contains("source") && j["source"].is_string()) doc.source = j["source"].get<std::string>();
    return doc;
}

MatrixDocument load_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DocumentError(Kind::parse, "cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_document(ss.str());
}

std::string to_json(const MatrixDocument& doc) {
    const std::size_t n = doc.matrix.rows();
    json rows = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < n; ++k) row.push_back({doc.matrix(i, k).real(), doc.matrix(i, k).imag()});
        rows.push_back(std::move(row));
    }
    json j;
    j["n"] = n;
    j["entries"] = std::move(rows);
    if (!doc.label.empty()) j["label"] = doc.label;
    if (!doc.source.empty()) j["source"] = doc.source;
    return j.dump(1) + "\n";
}

void save_document(const MatrixDocument& doc, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DocumentError(Kind::parse, "cannot write " + path.string());
    out << to_json(doc);
}

}  // namespace kippen::io
