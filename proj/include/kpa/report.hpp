#pragma once

#include <nlohmann/json.hpp>

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kpa/verdicts.hpp"

namespace kpa {

/// Machine- and human-readable outcome of one command. Identical inputs give
/// identical reports; the timing field is the only nondeterministic part.
struct Report {
    static constexpr int kSchema = 1;

    std::string command;
    Status status = Status::pass;
    std::optional<std::string> error;  // malformed input; replaces status
    std::optional<std::string> eta;
    std::optional<Witness> witness;
    std::vector<std::pair<std::string, std::string>> details;  // ordered
    std::vector<std::string> notes;
    double timing_ms = 0.0;

    void detail(std::string key, std::string value) {
        details.emplace_back(std::move(key), std::move(value));
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["schema"] = kSchema;
        j["command"] = command;
        if (error) {
            j["error"] = *error;
            j["timing_ms"] = timing_ms;
            return j;
        }
        j["status"] = status_name(status);
        if (eta) j["eta"] = *eta;
        if (witness) {
            j["witness"] = {{"indices", witness->indices}, {"residual", witness->residual}};
        }
        if (!details.empty()) {
            nlohmann::ordered_json d = nlohmann::ordered_json::object();
            for (const auto& [k, v] : details) d[k] = v;
            j["details"] = std::move(d);
        }
        if (!notes.empty()) j["notes"] = notes;
        j["timing_ms"] = timing_ms;
        return j;
    }

    std::string to_text() const {
        std::ostringstream os;
        if (error) {
            os << command << ": error: " << *error << "\n";
            return os.str();
        }
        os << command << ": " << status_name(status) << "\n";
        if (eta) os << "  eta = " << *eta << "\n";
        if (witness) {
            os << "  witness at (";
            for (std::size_t i = 0; i < witness->indices.size(); ++i) {
                if (i) os << ",";
                os << witness->indices[i];
            }
            os << "): " << witness->residual << "\n";
        }
        for (const auto& [k, v] : details) {
            if (v.rfind("[[", 0) == 0) {
                os << "  " << k << ":\n" << aligned_matrix(v, "    ");
            } else if (v.find('\n') != std::string::npos) {
                os << "  " << k << ":\n";
                std::istringstream lines(v);
                std::string line;
                while (std::getline(lines, line)) os << "    " << line << "\n";
            } else {
                os << "  " << k << ": " << v << "\n";
            }
        }
        for (const auto& n : notes) os << "  note: " << n << "\n";
        return os.str();
    }

    /// Re-renders a row-major "[[a, b], [c, d]]" string with one row per
    /// line and columns padded to equal width.
    static std::string aligned_matrix(const std::string& text, const std::string& indent) {
        std::vector<std::vector<std::string>> rows;
        std::vector<std::string> row;
        std::string cell;
        int depth = 0;
        int parens = 0;
        for (char ch : text) {
            if (ch == '(') ++parens;
            if (ch == ')') --parens;
            if (ch == '[') {
                if (++depth <= 2) continue;
            } else if (ch == ']') {
                if (--depth <= 1) {
                    if (!cell.empty() || !row.empty()) {
                        row.push_back(cell);
                        cell.clear();
                        rows.push_back(std::move(row));
                        row.clear();
                    }
                    continue;
                }
            } else if (ch == ',' && depth == 2 && parens == 0) {
                row.push_back(cell);
                cell.clear();
                continue;
            } else if (ch == ',' && depth == 1) {
                continue;
            } else if (ch == ' ' && depth <= 2 && cell.empty()) {
                continue;
            }
            if (depth >= 2) cell.push_back(ch);
        }
        std::size_t cols = 0;
        for (const auto& r : rows) cols = std::max(cols, r.size());
        std::vector<std::size_t> width(cols, 0);
        for (const auto& r : rows)
            for (std::size_t j = 0; j < r.size(); ++j)
                width[j] = std::max(width[j], r[j].size());
        std::ostringstream os;
        for (const auto& r : rows) {
            os << indent << "[";
            for (std::size_t j = 0; j < r.size(); ++j) {
                if (j) os << ", ";
                os << r[j] << std::string(width[j] - r[j].size(), ' ');
            }
            os << "]\n";
        }
        return os.str();
    }
};

inline int exit_code_for(Status s) {
    switch (s) {
        case Status::pass:
        case Status::degenerate:
            return 0;
        case Status::fail:
            return 1;
        case Status::unsupported:
            return 3;
    }
    return 2;
}

}  // namespace kpa
