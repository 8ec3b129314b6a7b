#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "kpa/constructions.hpp"
#include "kpa/parse.hpp"
#include "kpa/report.hpp"
#include "kpa/serialize.hpp"

namespace kpa {

struct Invocation {
    std::string command;
    std::map<std::string, std::string> options;
    bool assume_poisson = false;

    const std::string& require(const std::string& key) const {
        auto it = options.find(key);
        if (it == options.end())
            throw InputError("missing required option --" + key + " for " + command);
        return it->second;
    }
    std::optional<std::string> get(const std::string& key) const {
        auto it = options.find(key);
        if (it == options.end()) return std::nullopt;
        return it->second;
    }
};

struct CommandResult {
    Report report;
    int exit_code = 0;
    std::optional<std::string> output_document;
};

namespace detail {

inline std::shared_ptr<const KPAlgebra> resolve_kahler(const Document& doc,
                                                       const std::string& name,
                                                       bool assume_poisson, Report& report) {
    const KahlerEntry* ke = doc.find_kahler(name);
    if (!ke) throw InputError("unknown kahler '" + name + "'");
    const AlgebraEntry* ae = doc.find_algebra(ke->algebra);
    const MetricEntry* me = doc.find_metric(ke->metric);
    PoissonStructure s = PoissonStructure::make(ae->ring, ae->structure, assume_poisson);
    if (assume_poisson)
        report.notes.push_back("jacobi identity assumed, not checked ('" + ke->algebra + "')");
    return std::make_shared<const KPAlgebra>(std::move(s), Metric::make(me->matrix),
                                             ke->elements, ke->eta);
}

/// Warn when eta's denominator is not supported by the declared localize set.
inline void localize_guard(const Document& doc, const std::string& kahler_name,
                           const RingElem& eta, Report& report) {
    const KahlerEntry* ke = doc.find_kahler(kahler_name);
    if (!ke) return;
    const AlgebraEntry* ae = doc.find_algebra(ke->algebra);
    const RingTag& tag = *ae->ring;
    for (std::size_t c = 0; c < tag.component_count(); ++c) {
        Poly den = eta.component(c).den();
        if (den.is_constant()) continue;
        Poly prod = Poly::one(tag.components[c].size());
        for (const auto& lname : ae->localize)
            for (std::size_t i = 0; i < tag.components[c].size(); ++i)
                if (tag.components[c][i] == lname)
                    prod *= Poly::variable(tag.components[c].size(), i);
        while (true) {
            Poly g = poly_gcd(den, prod);
            if (g.is_constant()) break;
            den = *divexact(den, g);
            if (den.is_constant()) break;
        }
        if (!den.is_constant()) {
            report.notes.push_back(
                "eta denominator is not a product of the declared localize set of '" +
                ke->algebra + "'");
            return;
        }
    }
}

inline RingElem ensure_eta(const std::string& name, std::shared_ptr<const KPAlgebra>& k,
                           Report& report) {
    if (k->eta()) return *k->eta();
    SolveEtaResult s = solve_eta(*k);
    if (s.status == EtaStatus::not_proportional) {
        Verdict v;
        v.status = Status::unsupported;
        v.witness = s.witness;
        v.notes = s.notes;
        throw CheckError("no eta exists for kahler '" + name + "'", std::move(v));
    }
    auto upgraded = std::make_shared<KPAlgebra>(*k);
    upgraded->set_eta(*s.eta);
    k = std::move(upgraded);
    report.notes.push_back("eta for '" + name + "' solved: " + to_string(*s.eta));
    return *k->eta();
}

inline Hom resolve_hom(const Document& doc, const std::string& name, bool assume_poisson,
                       Report& report) {
    const HomEntry* he = doc.find_hom(name);
    if (!he) throw InputError("unknown hom '" + name + "'");
    auto src = resolve_kahler(doc, he->source, assume_poisson, report);
    auto dst = resolve_kahler(doc, he->target, assume_poisson, report);
    return Hom(std::move(src), std::move(dst), he->images, he->inverse);
}

inline std::string verdict_summary(const Verdict& v) { return status_name(v.status); }

inline void apply_verdict(Report& report, const Verdict& v) {
    report.status = v.status;
    if (v.witness) report.witness = v.witness;
    for (const auto& n : v.notes) report.notes.push_back(n);
}

inline std::vector<std::size_t> parse_index_map(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        try {
            long v = std::stol(piece);
            if (v < 1) throw InputError("index map entries are 1-based positive integers");
            out.push_back(static_cast<std::size_t>(v - 1));
        } catch (const std::logic_error&) {
            throw InputError("malformed index map entry '" + piece + "'");
        }
    }
    if (out.empty()) throw InputError("empty index map");
    return out;
}

inline CommandResult dispatch(const Document& doc, const Invocation& inv) {
    Report report;
    report.command = inv.command;
    CommandResult result;

    if (inv.command == "check-poisson") {
        const std::string& name = inv.require("algebra");
        const AlgebraEntry* ae = doc.find_algebra(name);
        if (!ae) throw InputError("unknown algebra '" + name + "'");
        Verdict anti = check_antisymmetry(ae->structure);
        if (!anti.passed()) {
            apply_verdict(report, anti);
            report.notes.push_back("structure matrix is not antisymmetric");
        } else if (inv.assume_poisson) {
            report.notes.push_back("jacobi identity assumed, not checked ('" + name + "')");
        } else {
            Verdict jac = check_jacobi(ae->structure);
            apply_verdict(report, jac);
            if (!jac.passed()) report.notes.push_back("jacobi identity fails");
        }
    } else if (inv.command == "solve-eta") {
        const std::string& name = inv.require("kp");
        auto k = resolve_kahler(doc, name, inv.assume_poisson, report);
        SolveEtaResult s = solve_eta(*k);
        for (const auto& n : s.notes) report.notes.push_back(n);
        if (s.status == EtaStatus::not_proportional) {
            report.status = Status::unsupported;
            report.witness = s.witness;
        } else {
            report.status =
                s.status == EtaStatus::degenerate ? Status::degenerate : Status::pass;
            report.eta = to_string(*s.eta);
            localize_guard(doc, name, *s.eta, report);
        }
    } else if (inv.command == "verify") {
        const std::string& name = inv.require("kp");
        auto k = resolve_kahler(doc, name, inv.assume_poisson, report);
        if (!k->eta())
            throw InputError("kahler '" + name + "' declares no eta; declare one or solve-eta");
        report.eta = to_string(*k->eta());
        VerifyResult v = verify_kp(*k);
        apply_verdict(report, v.verdict);
        if (v.residual) report.detail("residual", to_string(*v.residual));
        else localize_guard(doc, name, *k->eta(), report);
    } else if (inv.command == "tensors") {
        const std::string& name = inv.require("kp");
        auto k = resolve_kahler(doc, name, inv.assume_poisson, report);
        ensure_eta(name, k, report);
        KpTensors t = kp_tensors(*k);
        report.detail("d_upper", to_string(t.d_upper));
        report.detail("d_mixed", to_string(t.d_mixed));
        report.detail("p_mixed", to_string(t.p_mixed));
        report.notes.push_back(
            "projector identity is checked in the index-consistent form "
            "D^i_j D^{jk} = D^{ik}");
    } else if (inv.command == "check-hom") {
        Hom h = resolve_hom(doc, inv.require("hom"), inv.assume_poisson, report);
        MorphismReport rep = check_kp_morphism(h);
        report.detail("poisson_hom", verdict_summary(rep.poisson_hom));
        report.detail("condition_1_2", "hold by construction for the induced derivation map");
        report.detail("condition_3", verdict_summary(rep.condition3));
        report.detail("condition_4", verdict_summary(rep.condition4));
        apply_verdict(report, rep.overall());
        for (const auto& n : rep.notes) report.notes.push_back(n);
    } else if (inv.command == "check-iso") {
        Hom h = resolve_hom(doc, inv.require("hom"), inv.assume_poisson, report);
        Matrix<RingElem> induced(0, 0, RingElem());
        Verdict v = check_iso(h, &induced);
        if (induced.rows() > 0) report.detail("induced_metric", to_string(induced));
        apply_verdict(report, v);
        report.notes.push_back(
            "criterion checked in index form: P'^{ca}(A^k_a phi(g_kl) A^l_b - g'_ab)"
            "P'^{db} = 0 with A^i_a the (i,a) entry of the image jacobian");
    } else if (inv.command == "check-eta-transport") {
        const std::string& name = inv.require("hom");
        const HomEntry* he = doc.find_hom(name);
        if (!he) throw InputError("unknown hom '" + name + "'");
        auto src = resolve_kahler(doc, he->source, inv.assume_poisson, report);
        auto dst = resolve_kahler(doc, he->target, inv.assume_poisson, report);
        ensure_eta(he->source, src, report);
        ensure_eta(he->target, dst, report);
        Hom h(src, dst, he->images, he->inverse);
        if (he->inverse && !dst->presented()) {
            Verdict iso = check_iso(h);
            if (!iso.passed()) {
                apply_verdict(report, iso);
                report.notes.push_back("isomorphism criterion failed; transport not attempted");
                result.report = std::move(report);
                result.exit_code = exit_code_for(result.report.status);
                return result;
            }
        } else {
            report.notes.push_back("isomorphism precondition not certified");
        }
        Verdict v = eta_transport_check(h);
        report.detail("phi_eta", to_string(h.apply(*src->eta())));
        report.detail("eta_target", to_string(*dst->eta()));
        apply_verdict(report, v);
    } else if (inv.command == "dsum") {
        auto left = resolve_kahler(doc, inv.require("left"), inv.assume_poisson, report);
        auto right = resolve_kahler(doc, inv.require("right"), inv.assume_poisson, report);
        ensure_eta(inv.require("left"), left, report);
        ensure_eta(inv.require("right"), right, report);
        DirectSum ds = direct_sum(*left, *right);
        report.eta = to_string(*ds.sum.eta());
        std::string name = inv.get("name").value_or("Sum");
        result.output_document = serialize_kp(ds.sum, name);
        report.detail("document", *result.output_document);
    } else if (inv.command == "tprod") {
        auto left = resolve_kahler(doc, inv.require("left"), inv.assume_poisson, report);
        auto right = resolve_kahler(doc, inv.require("right"), inv.assume_poisson, report);
        ensure_eta(inv.require("left"), left, report);
        ensure_eta(inv.require("right"), right, report);
        auto rho_l = sqrt_ratfunc(*left->eta());
        auto rho_r = sqrt_ratfunc(*right->eta());
        if (!rho_l || !rho_r) {
            report.status = Status::unsupported;
            report.notes.push_back(std::string("no square root: eta of the ") +
                                   (!rho_l ? "left" : "right") +
                                   " factor has no rational square root");
        } else {
            report.detail("rho_left", to_string(*rho_l));
            report.detail("rho_right", to_string(*rho_r));
            report.notes.push_back("square roots chosen with positive leading numerator");
            KPAlgebra t = tensor_product(TensorSpec{left, right, *rho_l, *rho_r});
            report.eta = to_string(*t.eta());
            std::string name = inv.get("name").value_or("Tensor");
            result.output_document = serialize_kp(t, name);
            report.detail("document", *result.output_document);
        }
    } else if (inv.command == "check-sub") {
        auto sub = resolve_kahler(doc, inv.require("sub"), inv.assume_poisson, report);
        auto super = resolve_kahler(doc, inv.require("super"), inv.assume_poisson, report);
        std::vector<std::size_t> map = parse_index_map(inv.require("map"));
        Verdict v = check_subalgebra(*sub, *super, map);
        apply_verdict(report, v);
    } else if (inv.command == "image-sub") {
        const std::string& name = inv.require("hom");
        const HomEntry* he = doc.find_hom(name);
        if (!he) throw InputError("unknown hom '" + name + "'");
        if (!he->preimages)
            throw InputError("hom '" + name + "' declares no preimages block");
        auto src = resolve_kahler(doc, he->source, inv.assume_poisson, report);
        auto dst = resolve_kahler(doc, he->target, inv.assume_poisson, report);
        ensure_eta(he->source, src, report);
        Hom h(src, dst, he->images, he->inverse);
        KPAlgebra image = image_subalgebra(h, *he->preimages);
        if (image.eta())
            report.eta = to_string(*image.eta());
        else
            report.notes.push_back("no eta found for the image triple");
        std::string out_name = inv.get("name").value_or(name + "_image");
        result.output_document = serialize_kp(image, out_name);
        report.detail("document", *result.output_document);
    } else {
        throw InputError("unknown command '" + inv.command + "'");
    }

    result.report = std::move(report);
    result.exit_code = exit_code_for(result.report.status);
    return result;
}

}  // namespace detail

/// Runs one subcommand against a parsed document. Exceptions are mapped to
/// the exit-code taxonomy: mathematical failures keep their witnesses,
/// malformed input reports an error field, unsupported requests exit 3.
inline CommandResult run_command(const Document& doc, const Invocation& inv) {
    auto start = std::chrono::steady_clock::now();
    CommandResult result;
    try {
        result = detail::dispatch(doc, inv);
    } catch (const CheckError& e) {
        result.report.command = inv.command;
        result.report.status =
            e.verdict().status == Status::unsupported ? Status::unsupported : Status::fail;
        result.report.witness = e.verdict().witness;
        result.report.notes = e.verdict().notes;
        result.report.notes.push_back(e.what());
        result.exit_code = exit_code_for(result.report.status);
    } catch (const UnsupportedError& e) {
        result.report.command = inv.command;
        result.report.status = Status::unsupported;
        result.report.notes.push_back(e.what());
        result.exit_code = 3;
    } catch (const InputError& e) {
        result.report.command = inv.command;
        result.report.error = e.what();
        result.exit_code = 2;
    }
    auto end = std::chrono::steady_clock::now();
    result.report.timing_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(end - start)
            .count();
    return result;
}

// ---- corpus runner ----

struct CorpusDirective {
    Invocation invocation;
    std::map<std::string, std::string> expect_equal;   // status=, eta=, exit=
    std::vector<std::string> expect_notes;             // note~ substrings
};

namespace detail {

inline std::vector<std::string> split_directive(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
            continue;
        }
        if (!quoted && (ch == ' ' || ch == '\t')) {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

inline std::vector<CorpusDirective> parse_directives(const std::string& text) {
    std::vector<CorpusDirective> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto pos = line.find("//!");
        if (pos == std::string::npos) continue;
        std::string body = line.substr(pos + 3);
        auto colon = body.find(':');
        if (colon == std::string::npos) continue;
        std::string head = body.substr(0, colon);
        std::string rest = body.substr(colon + 1);
        head.erase(0, head.find_first_not_of(" \t"));
        head.erase(head.find_last_not_of(" \t") + 1);
        if (head == "run") {
            std::vector<std::string> parts = split_directive(rest);
            if (parts.empty()) continue;
            CorpusDirective d;
            d.invocation.command = parts[0];
            for (std::size_t i = 1; i + 1 < parts.size(); i += 2) {
                std::string key = parts[i];
                if (key.rfind("--", 0) == 0) key = key.substr(2);
                d.invocation.options[key] = parts[i + 1];
            }
            out.push_back(std::move(d));
        } else if (head == "expect" && !out.empty()) {
            for (const std::string& piece : split_directive(rest)) {
                auto tilde = piece.find('~');
                auto eq = piece.find('=');
                if (tilde != std::string::npos && piece.substr(0, tilde) == "note") {
                    out.back().expect_notes.push_back(piece.substr(tilde + 1));
                } else if (eq != std::string::npos) {
                    out.back().expect_equal[piece.substr(0, eq)] = piece.substr(eq + 1);
                }
            }
        }
    }
    return out;
}

}  // namespace detail

/// Runs every directive in every .kpa file under dir (sorted by name) and
/// reports one line per check. The aggregate passes only if every expectation
/// holds.
inline CommandResult run_corpus(const std::filesystem::path& dir) {
    auto start = std::chrono::steady_clock::now();
    CommandResult result;
    Report& report = result.report;
    report.command = "corpus";
    report.status = Status::pass;

    std::vector<std::filesystem::path> files;
    if (!std::filesystem::is_directory(dir)) {
        report.status = Status::fail;
        report.notes.push_back("corpus directory not found: " + dir.string());
        result.exit_code = 2;
        return result;
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".kpa") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::size_t total = 0, passed = 0;
    for (const auto& file : files) {
        std::ifstream in(file);
        std::stringstream buffer;
        buffer << in.rdbuf();
        const std::string text = buffer.str();
        const std::string stem = file.filename().string();

        std::vector<CorpusDirective> directives = detail::parse_directives(text);
        Document doc;
        std::optional<std::string> parse_failure;
        try {
            doc = parse_input(text);
        } catch (const ParseError& e) {
            parse_failure = e.what();
        }
        std::size_t n = 0;
        for (const auto& d : directives) {
            ++n;
            ++total;
            std::ostringstream key;
            key << stem << "#" << n << " " << d.invocation.command;
            if (parse_failure) {
                report.detail(key.str(), "parse error: " + *parse_failure);
                continue;
            }
            CommandResult r = run_command(doc, d.invocation);
            std::vector<std::string> mismatches;
            for (const auto& [k, v] : d.expect_equal) {
                if (k == "status") {
                    if (status_name(r.report.status) != v)
                        mismatches.push_back("status " + std::string(status_name(r.report.status)) +
                                             " != " + v);
                } else if (k == "eta") {
                    if (!r.report.eta || *r.report.eta != v)
                        mismatches.push_back("eta " + r.report.eta.value_or("<none>") + " != " + v);
                } else if (k == "exit") {
                    if (std::to_string(r.exit_code) != v)
                        mismatches.push_back("exit " + std::to_string(r.exit_code) + " != " + v);
                } else {
                    mismatches.push_back("unknown expectation key '" + k + "'");
                }
            }
            for (const auto& sub : d.expect_notes) {
                bool found = false;
                for (const auto& note : r.report.notes)
                    if (note.find(sub) != std::string::npos) found = true;
                if (!found) mismatches.push_back("missing note containing \"" + sub + "\"");
            }
            if (mismatches.empty()) {
                ++passed;
                report.detail(key.str(), "ok");
            } else {
                std::ostringstream msg;
                for (std::size_t i = 0; i < mismatches.size(); ++i) {
                    if (i) msg << "; ";
                    msg << mismatches[i];
                }
                report.detail(key.str(), msg.str());
            }
        }
        if (directives.empty()) {
            report.detail(stem, parse_failure ? "parse error: " + *parse_failure
                                              : "no directives");
        }
    }
    std::ostringstream summary;
    summary << passed << "/" << total << " checks passed across " << files.size() << " files";
    report.detail("summary", summary.str());
    if (passed != total) report.status = Status::fail;

    auto end = std::chrono::steady_clock::now();
    report.timing_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(end - start)
            .count();
    result.exit_code = exit_code_for(report.status);
    return result;
}

}  // namespace kpa
