#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kpa/kahler.hpp"
#include "kpa/ring.hpp"

namespace kpa {

struct Span {
    int line = 0;
    int col = 0;
};

/// Parse/resolution failure with a source position.
class ParseError : public InputError {
public:
    ParseError(Span span, const std::string& message)
        : InputError(format(span, message)), span_(span) {}

    Span span() const { return span_; }

private:
    static std::string format(Span s, const std::string& m) {
        std::ostringstream os;
        os << "line " << s.line << ", column " << s.col << ": " << m;
        return os.str();
    }
    Span span_;
};

namespace detail {

enum class Tok { ident, number, punct, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    Span span;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        skip_trivia();
        tok_.span = {line_, col_};
        if (pos_ >= src_.size()) {
            tok_ = Token{Tok::end, "", tok_.span};
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                bump();
            tok_.kind = Tok::ident;
            tok_.text = std::string(src_.substr(start, pos_ - start));
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                bump();
            tok_.kind = Tok::number;
            tok_.text = std::string(src_.substr(start, pos_ - start));
            return;
        }
        if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
            bump();
            bump();
            tok_ = Token{Tok::punct, "->", tok_.span};
            return;
        }
        bump();
        tok_ = Token{Tok::punct, std::string(1, c), tok_.span};
    }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                bump();
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') bump();
            } else {
                break;
            }
        }
    }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token tok_;
};

/// Expression tree; evaluation happens against a ring tag once the enclosing
/// declaration knows its scope.
struct Expr {
    enum class Kind { number, ident, add, sub, mul, div, neg, pow, tuple };
    Kind kind = Kind::number;
    Scalar value;
    std::string name;
    std::vector<Expr> kids;
    std::uint32_t exponent = 0;
    Span span;
};

}  // namespace detail

struct AlgebraEntry {
    std::string name;
    RingTagPtr ring;
    Matrix<RingElem> structure;
    std::vector<std::string> localize;  // generator names declared invertible
    Span span;
};

struct MetricEntry {
    std::string name;
    std::string algebra;
    Matrix<RingElem> matrix;
    Span span;
};

struct KahlerEntry {
    std::string name;
    std::string algebra;
    std::string metric;
    std::optional<std::vector<RingElem>> elements;
    std::optional<RingElem> eta;
    Span span;
};

struct HomEntry {
    std::string name;
    std::string source;  // kahler names
    std::string target;
    std::vector<RingElem> images;                      // one per source generator
    std::optional<std::vector<RingElem>> inverse;      // one per target generator
    std::optional<std::vector<RingElem>> preimages;    // one per target generator
    Span span;
};

/// One parsed input file: named declarations with resolved cross-references.
struct Document {
    std::vector<AlgebraEntry> algebras;
    std::vector<MetricEntry> metrics;
    std::vector<KahlerEntry> kahlers;
    std::vector<HomEntry> homs;

    const AlgebraEntry* find_algebra(const std::string& n) const {
        for (const auto& a : algebras)
            if (a.name == n) return &a;
        return nullptr;
    }
    const MetricEntry* find_metric(const std::string& n) const {
        for (const auto& m : metrics)
            if (m.name == n) return &m;
        return nullptr;
    }
    const KahlerEntry* find_kahler(const std::string& n) const {
        for (const auto& k : kahlers)
            if (k.name == n) return &k;
        return nullptr;
    }
    const HomEntry* find_hom(const std::string& n) const {
        for (const auto& h : homs)
            if (h.name == n) return &h;
        return nullptr;
    }
};

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) {}

    Document parse_document() {
        Document doc;
        while (lex_.peek().kind != Tok::end) {
            Token t = lex_.peek();
            if (t.kind != Tok::ident)
                throw ParseError(t.span, "expected a declaration keyword, found '" + t.text + "'");
            if (t.text == "algebra")
                parse_algebra(doc);
            else if (t.text == "metric")
                parse_metric(doc);
            else if (t.text == "kahler")
                parse_kahler(doc);
            else if (t.text == "hom")
                parse_hom(doc);
            else
                throw ParseError(t.span, "unknown declaration '" + t.text + "'");
        }
        return doc;
    }

private:
    Lexer lex_;

    [[noreturn]] void fail(Span s, const std::string& m) { throw ParseError(s, m); }

    Token expect_ident(const char* what) {
        Token t = lex_.next();
        if (t.kind != Tok::ident) fail(t.span, std::string("expected ") + what);
        return t;
    }

    Token expect_punct(const std::string& p) {
        Token t = lex_.next();
        if (t.kind != Tok::punct || t.text != p)
            fail(t.span, "expected '" + p + "', found '" + t.text + "'");
        return t;
    }

    bool accept_punct(const std::string& p) {
        if (lex_.peek().kind == Tok::punct && lex_.peek().text == p) {
            lex_.next();
            return true;
        }
        return false;
    }

    bool peek_ident(const char* word) const {
        return lex_.peek().kind == Tok::ident && lex_.peek().text == word;
    }

    // ---- expressions ----

    Expr parse_expr() {
        Expr lhs = parse_term();
        while (lex_.peek().kind == Tok::punct &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            Token op = lex_.next();
            Expr rhs = parse_term();
            Expr node;
            node.kind = op.text == "+" ? Expr::Kind::add : Expr::Kind::sub;
            node.span = op.span;
            node.kids = {std::move(lhs), std::move(rhs)};
            lhs = std::move(node);
        }
        return lhs;
    }

    Expr parse_term() {
        Expr lhs = parse_unary();
        while (lex_.peek().kind == Tok::punct &&
               (lex_.peek().text == "*" || lex_.peek().text == "/")) {
            Token op = lex_.next();
            Expr rhs = parse_unary();
            Expr node;
            node.kind = op.text == "*" ? Expr::Kind::mul : Expr::Kind::div;
            node.span = op.span;
            node.kids = {std::move(lhs), std::move(rhs)};
            lhs = std::move(node);
        }
        return lhs;
    }

    Expr parse_unary() {
        if (lex_.peek().kind == Tok::punct && lex_.peek().text == "-") {
            Token op = lex_.next();
            Expr node;
            node.kind = Expr::Kind::neg;
            node.span = op.span;
            node.kids = {parse_unary()};
            return node;
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (lex_.peek().kind == Tok::punct && lex_.peek().text == "^") {
            Token op = lex_.next();
            Token e = lex_.next();
            if (e.kind != Tok::number) fail(e.span, "expected a nonnegative integer exponent");
            Expr node;
            node.kind = Expr::Kind::pow;
            node.span = op.span;
            node.exponent = static_cast<std::uint32_t>(std::stoul(e.text));
            node.kids = {std::move(base)};
            return node;
        }
        return base;
    }

    Expr parse_atom() {
        Token t = lex_.next();
        if (t.kind == Tok::number) {
            Expr node;
            node.kind = Expr::Kind::number;
            node.value = Scalar(Int(t.text));
            node.span = t.span;
            return node;
        }
        if (t.kind == Tok::ident) {
            Expr node;
            node.kind = Expr::Kind::ident;
            node.name = t.text;
            node.span = t.span;
            return node;
        }
        if (t.kind == Tok::punct && t.text == "(") {
            Expr first = parse_expr();
            if (accept_punct(",")) {
                Expr node;
                node.kind = Expr::Kind::tuple;
                node.span = t.span;
                node.kids.push_back(std::move(first));
                do {
                    node.kids.push_back(parse_expr());
                } while (accept_punct(","));
                expect_punct(")");
                return node;
            }
            expect_punct(")");
            return first;
        }
        fail(t.span, "expected an expression, found '" + t.text + "'");
    }

    // ---- expression evaluation ----

    static std::optional<std::size_t> lookup_global(const RingTag& tag, const std::string& name,
                                                    bool* ambiguous) {
        std::optional<std::size_t> found;
        std::size_t offset = 0;
        for (const auto& comp : tag.components) {
            for (std::size_t i = 0; i < comp.size(); ++i)
                if (comp[i] == name) {
                    if (found) {
                        *ambiguous = true;
                        return std::nullopt;
                    }
                    found = offset + i;
                }
            offset += comp.size();
        }
        return found;
    }

    RatFunc eval_component(const Expr& e, const std::vector<std::string>& names) {
        const std::size_t n = names.size();
        switch (e.kind) {
            case Expr::Kind::number:
                return RatFunc::constant(n, e.value);
            case Expr::Kind::ident: {
                for (std::size_t i = 0; i < n; ++i)
                    if (names[i] == e.name) return RatFunc::variable(n, i);
                fail(e.span, "unknown generator '" + e.name + "' in this component");
            }
            case Expr::Kind::add:
                return eval_component(e.kids[0], names) + eval_component(e.kids[1], names);
            case Expr::Kind::sub:
                return eval_component(e.kids[0], names) - eval_component(e.kids[1], names);
            case Expr::Kind::mul:
                return eval_component(e.kids[0], names) * eval_component(e.kids[1], names);
            case Expr::Kind::div: {
                RatFunc d = eval_component(e.kids[1], names);
                if (d.is_zero()) fail(e.span, "division by zero");
                return eval_component(e.kids[0], names) / d;
            }
            case Expr::Kind::neg:
                return -eval_component(e.kids[0], names);
            case Expr::Kind::pow:
                return pow(eval_component(e.kids[0], names), e.exponent);
            case Expr::Kind::tuple:
                fail(e.span, "nested product literal");
        }
        fail(e.span, "malformed expression");
    }

    RingElem eval_element(const Expr& e, const RingTagPtr& tag) {
        switch (e.kind) {
            case Expr::Kind::number:
                return RingElem::constant(tag, e.value);
            case Expr::Kind::ident: {
                bool ambiguous = false;
                auto idx = lookup_global(*tag, e.name, &ambiguous);
                if (ambiguous)
                    fail(e.span, "generator name '" + e.name +
                                     "' is ambiguous; use a product literal to pick a component");
                if (!idx) fail(e.span, "unknown generator '" + e.name + "'");
                return RingElem::generator(tag, *idx);
            }
            case Expr::Kind::add:
                return eval_element(e.kids[0], tag) + eval_element(e.kids[1], tag);
            case Expr::Kind::sub:
                return eval_element(e.kids[0], tag) - eval_element(e.kids[1], tag);
            case Expr::Kind::mul:
                return eval_element(e.kids[0], tag) * eval_element(e.kids[1], tag);
            case Expr::Kind::div: {
                RingElem d = eval_element(e.kids[1], tag);
                if (d.has_zero_component()) fail(e.span, "division by zero");
                return eval_element(e.kids[0], tag) / d;
            }
            case Expr::Kind::neg:
                return -eval_element(e.kids[0], tag);
            case Expr::Kind::pow: {
                RingElem base = eval_element(e.kids[0], tag);
                RingElem acc = RingElem::one(tag);
                for (std::uint32_t i = 0; i < e.exponent; ++i) acc = acc * base;
                return acc;
            }
            case Expr::Kind::tuple: {
                if (e.kids.size() != tag->component_count())
                    fail(e.span, "product literal arity does not match the ring");
                std::vector<RatFunc> comps;
                for (std::size_t c = 0; c < e.kids.size(); ++c)
                    comps.push_back(eval_component(e.kids[c], tag->components[c]));
                return RingElem(tag, std::move(comps));
            }
        }
        fail(e.span, "malformed expression");
    }

    // ---- declarations ----

    struct ComponentData {
        std::vector<std::string> generators;
        // bracket exprs keyed by local generator pair, with declaration spans
        std::map<std::pair<std::size_t, std::size_t>, std::pair<Expr, Span>> brackets;
        std::vector<std::string> localize;
    };

    ComponentData parse_plain_body() {
        ComponentData data;
        Token kw = expect_ident("'generators'");
        if (kw.text != "generators") fail(kw.span, "expected 'generators'");
        expect_punct(":");
        do {
            Token g = expect_ident("a generator name");
            for (const auto& existing : data.generators)
                if (existing == g.text)
                    fail(g.span, "duplicate generator '" + g.text + "'");
            data.generators.push_back(g.text);
        } while (accept_punct(","));
        expect_punct(";");

        while (lex_.peek().kind == Tok::ident) {
            Token kw2 = lex_.peek();
            if (kw2.text == "bracket") {
                lex_.next();
                Span open = expect_punct("{").span;
                Token a = expect_ident("a generator name");
                expect_punct(",");
                Token b = expect_ident("a generator name");
                expect_punct("}");
                expect_punct("=");
                Expr e = parse_expr();
                expect_punct(";");
                auto idx_of = [&](const Token& t) -> std::size_t {
                    for (std::size_t i = 0; i < data.generators.size(); ++i)
                        if (data.generators[i] == t.text) return i;
                    fail(t.span, "unknown generator '" + t.text + "'");
                };
                std::size_t i = idx_of(a), j = idx_of(b);
                if (i == j) fail(a.span, "bracket of a generator with itself is identically zero");
                auto key = std::minmax(i, j);
                auto it = data.brackets.find({key.first, key.second});
                if (it != data.brackets.end()) {
                    std::ostringstream os;
                    os << "duplicate bracket declaration for {" << data.generators[key.first]
                       << ", " << data.generators[key.second] << "}; first declared at line "
                       << it->second.second.line << ", column " << it->second.second.col;
                    fail(open, os.str());
                }
                // Normalize to i < j, flipping the sign when declared reversed.
                if (i > j) {
                    Expr neg;
                    neg.kind = Expr::Kind::neg;
                    neg.span = e.span;
                    neg.kids = {std::move(e)};
                    e = std::move(neg);
                }
                data.brackets.emplace(std::make_pair(key.first, key.second),
                                      std::make_pair(std::move(e), open));
            } else if (kw2.text == "localize") {
                lex_.next();
                expect_punct(":");
                do {
                    Token g = expect_ident("a generator name");
                    bool known = false;
                    for (const auto& existing : data.generators) known |= existing == g.text;
                    if (!known) fail(g.span, "unknown generator '" + g.text + "'");
                    data.localize.push_back(g.text);
                } while (accept_punct(","));
                expect_punct(";");
            } else if (kw2.text == "relation") {
                fail(kw2.span,
                     "relations among generators are not supported; only free generators "
                     "and their localizations are");
            } else {
                break;
            }
        }
        return data;
    }

    void parse_algebra(Document& doc) {
        Token kw = lex_.next();  // 'algebra'
        Token name = expect_ident("an algebra name");
        if (doc.find_algebra(name.text))
            fail(name.span, "duplicate algebra name '" + name.text + "'");
        expect_punct("{");

        std::vector<ComponentData> comps;
        if (peek_ident("component")) {
            while (peek_ident("component")) {
                lex_.next();
                expect_punct("{");
                comps.push_back(parse_plain_body());
                expect_punct("}");
            }
        } else {
            comps.push_back(parse_plain_body());
        }
        expect_punct("}");

        std::vector<std::vector<std::string>> names;
        for (const auto& c : comps) names.push_back(c.generators);
        RingTagPtr tag = comps.size() == 1 ? make_ring(names[0]) : make_product_ring(names);

        const std::size_t m = tag->total_generators();
        Matrix<RingElem> p(m, m, RingElem::zero(tag));
        std::size_t offset = 0;
        for (std::size_t c = 0; c < comps.size(); ++c) {
            for (auto& [key, val] : comps[c].brackets) {
                RatFunc entry = eval_component(val.first, comps[c].generators);
                std::vector<RatFunc> parts;
                for (std::size_t cc = 0; cc < tag->component_count(); ++cc)
                    parts.push_back(cc == c ? entry
                                            : RatFunc::zero(tag->components[cc].size()));
                RingElem e(tag, std::move(parts));
                p(offset + key.first, offset + key.second) = e;
                p(offset + key.second, offset + key.first) = -e;
            }
            offset += comps[c].generators.size();
        }

        AlgebraEntry entry;
        entry.name = name.text;
        entry.ring = tag;
        entry.structure = std::move(p);
        for (const auto& c : comps)
            entry.localize.insert(entry.localize.end(), c.localize.begin(), c.localize.end());
        entry.span = kw.span;
        doc.algebras.push_back(std::move(entry));
    }

    void parse_metric(Document& doc) {
        Token kw = lex_.next();  // 'metric'
        Token name = expect_ident("a metric name");
        if (doc.find_metric(name.text))
            fail(name.span, "duplicate metric name '" + name.text + "'");
        Token on = expect_ident("'on'");
        if (on.text != "on") fail(on.span, "expected 'on'");
        Token alg = expect_ident("an algebra name");
        const AlgebraEntry* a = doc.find_algebra(alg.text);
        if (!a) fail(alg.span, "unknown algebra '" + alg.text + "'");
        expect_punct("=");
        Span mspan = expect_punct("[").span;
        std::vector<std::vector<RingElem>> rows;
        do {
            expect_punct("[");
            std::vector<RingElem> row;
            do {
                row.push_back(eval_element(parse_expr(), a->ring));
            } while (accept_punct(","));
            expect_punct("]");
            rows.push_back(std::move(row));
        } while (accept_punct(","));
        expect_punct("]");
        expect_punct(";");

        const std::size_t n = rows.size();
        for (const auto& r : rows)
            if (r.size() != n) fail(mspan, "metric literal is not square");
        Matrix<RingElem> g(n, n, RingElem::zero(a->ring));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) g(i, j) = rows[i][j];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (!(g(i, j) == g(j, i)))
                    fail(mspan, "non-symmetric metric literal: entries (" + std::to_string(i + 1) +
                                    "," + std::to_string(j + 1) + ") and (" +
                                    std::to_string(j + 1) + "," + std::to_string(i + 1) +
                                    ") differ");

        doc.metrics.push_back(MetricEntry{name.text, alg.text, std::move(g), kw.span});
    }

    void parse_kahler(Document& doc) {
        Token kw = lex_.next();  // 'kahler'
        Token name = expect_ident("a kahler name");
        if (doc.find_kahler(name.text))
            fail(name.span, "duplicate kahler name '" + name.text + "'");
        expect_punct("=");
        expect_punct("(");
        Token alg = expect_ident("an algebra name");
        expect_punct(",");
        Token met = expect_ident("a metric name");
        expect_punct(")");
        const AlgebraEntry* a = doc.find_algebra(alg.text);
        if (!a) fail(alg.span, "unknown algebra '" + alg.text + "'");
        const MetricEntry* m = doc.find_metric(met.text);
        if (!m) fail(met.span, "unknown metric '" + met.text + "'");
        if (m->algebra != alg.text)
            fail(met.span, "metric '" + met.text + "' is declared on algebra '" + m->algebra +
                               "', not '" + alg.text + "'");

        KahlerEntry entry;
        entry.name = name.text;
        entry.algebra = alg.text;
        entry.metric = met.text;
        entry.span = kw.span;
        if (peek_ident("elements")) {
            lex_.next();
            expect_punct("=");
            expect_punct("[");
            std::vector<RingElem> elems;
            do {
                elems.push_back(eval_element(parse_expr(), a->ring));
            } while (accept_punct(","));
            expect_punct("]");
            entry.elements = std::move(elems);
        }
        if (peek_ident("eta")) {
            lex_.next();
            expect_punct("=");
            entry.eta = eval_element(parse_expr(), a->ring);
        }
        expect_punct(";");
        doc.kahlers.push_back(std::move(entry));
    }

    std::vector<RingElem> parse_mapping_block(const RingTagPtr& from_ring,
                                              const RingTagPtr& expr_ring, Span where) {
        std::vector<std::optional<RingElem>> images(from_ring->total_generators());
        while (lex_.peek().kind == Tok::ident && !peek_ident("inverse") &&
               !peek_ident("preimages")) {
            Token g = lex_.next();
            bool ambiguous = false;
            auto idx = lookup_global(*from_ring, g.text, &ambiguous);
            if (ambiguous) fail(g.span, "generator name '" + g.text + "' is ambiguous");
            if (!idx) fail(g.span, "unknown generator '" + g.text + "'");
            expect_punct("->");
            Expr e = parse_expr();
            expect_punct(";");
            if (images[*idx])
                fail(g.span, "duplicate image for generator '" + g.text + "'");
            images[*idx] = eval_element(e, expr_ring);
        }
        std::vector<RingElem> out;
        for (std::size_t i = 0; i < images.size(); ++i) {
            if (!images[i])
                fail(where, "missing image for generator '" +
                                from_ring->generator_name(i) + "'");
            out.push_back(std::move(*images[i]));
        }
        return out;
    }

    void parse_hom(Document& doc) {
        Token kw = lex_.next();  // 'hom'
        Token name = expect_ident("a hom name");
        if (doc.find_hom(name.text)) fail(name.span, "duplicate hom name '" + name.text + "'");
        expect_punct(":");
        Token src = expect_ident("a kahler name");
        expect_punct("->");
        Token dst = expect_ident("a kahler name");
        const KahlerEntry* ks = doc.find_kahler(src.text);
        if (!ks) fail(src.span, "unknown kahler '" + src.text + "'");
        const KahlerEntry* kd = doc.find_kahler(dst.text);
        if (!kd) fail(dst.span, "unknown kahler '" + dst.text + "'");
        const AlgebraEntry* as = doc.find_algebra(ks->algebra);
        const AlgebraEntry* ad = doc.find_algebra(kd->algebra);

        Span body = expect_punct("{").span;
        HomEntry entry;
        entry.name = name.text;
        entry.source = src.text;
        entry.target = dst.text;
        entry.span = kw.span;
        entry.images = parse_mapping_block(as->ring, ad->ring, body);
        if (peek_ident("inverse")) {
            lex_.next();
            Span b2 = expect_punct("{").span;
            entry.inverse = parse_mapping_block(ad->ring, as->ring, b2);
            expect_punct("}");
        }
        if (peek_ident("preimages")) {
            lex_.next();
            Span b3 = expect_punct("{").span;
            entry.preimages = parse_mapping_block(ad->ring, as->ring, b3);
            expect_punct("}");
        }
        expect_punct("}");
        doc.homs.push_back(std::move(entry));
    }
};

}  // namespace detail

inline Document parse_input(std::string_view text) {
    detail::Parser p(text);
    return p.parse_document();
}

}  // namespace kpa
