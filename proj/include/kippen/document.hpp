#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "kippen/linalg.hpp"

namespace kippen::io {

class DocumentError : public std::runtime_error {
public:
    enum class Kind { parse, validation };  // unreadable or not JSON / wrong shape or values

    DocumentError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

// {"n": n, "entries": [[[re, im], ...], ...], "label": ..., "source": ...}
struct MatrixDocument {
    linalg::ComplexMatrix matrix;
    std::string label;
    std::string source;
};

MatrixDocument parse_document(const std::string& text);
MatrixDocument load_document(const std::filesystem::path& path);
std::string to_json(const MatrixDocument& doc);
void save_document(const MatrixDocument& doc, const std::filesystem::path& path);

}  // namespace kippen::io
