#pragma once

#include <sstream>
#include <string>

#include "kpa/io.hpp"
#include "kpa/kahler.hpp"

namespace kpa {

/// Serializes a triple back into the input language as three declarations:
/// an algebra (component blocks for product rings), a metric, and a kahler
/// line carrying the distinguished elements and eta when present.
/// parse(serialize(K)) reproduces K exactly.
inline std::string serialize_kp(const KPAlgebra& k, const std::string& name) {
    const RingTag& tag = *k.ring();
    std::ostringstream os;

    os << "algebra " << name << " {\n";
    const bool product = tag.component_count() > 1;
    std::size_t offset = 0;
    for (std::size_t c = 0; c < tag.component_count(); ++c) {
        const auto& names = tag.components[c];
        std::string indent = product ? "    " : "  ";
        if (product) os << "  component {\n";
        os << indent << "generators: ";
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (i) os << ", ";
            os << names[i];
        }
        os << ";\n";
        const Matrix<RingElem>& p = k.structure().matrix();
        for (std::size_t i = 0; i < names.size(); ++i)
            for (std::size_t j = i + 1; j < names.size(); ++j) {
                const RingElem& e = p(offset + i, offset + j);
                if (e.is_zero()) continue;
                os << indent << "bracket {" << names[i] << ", " << names[j]
                   << "} = " << to_string(e.component(c), names) << ";\n";
            }
        if (product) os << "  }\n";
        offset += names.size();
    }
    os << "}\n";

    os << "metric " << name << "_g on " << name << " = [";
    const Matrix<RingElem>& g = k.metric().matrix();
    for (std::size_t i = 0; i < g.rows(); ++i) {
        if (i) os << ", ";
        os << "[";
        for (std::size_t j = 0; j < g.cols(); ++j) {
            if (j) os << ", ";
            os << to_string(g(i, j));
        }
        os << "]";
    }
    os << "];\n";

    os << "kahler " << name << "_kp = (" << name << ", " << name << "_g)";
    if (k.presented()) {
        os << " elements = [";
        for (std::size_t i = 0; i < k.elements().size(); ++i) {
            if (i) os << ", ";
            os << to_string(k.elements()[i]);
        }
        os << "]";
    }
    if (k.eta()) os << " eta = " << to_string(*k.eta());
    os << ";\n";
    return os.str();
}

}  // namespace kpa
