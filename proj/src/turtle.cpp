#include "logkg/turtle.hpp"

#include "logkg/error.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

namespace logkg {

namespace {

constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_high(char c) { return static_cast<unsigned char>(c) >= 0x80; }
bool is_name_start(char c) { return is_alpha(c) || is_high(c); }
bool is_name_char(char c) { return is_alpha(c) || is_digit(c) || is_high(c) || c == '_' || c == '-'; }
bool is_local_char(char c) { return is_name_char(c) || c == '.' || c == ':' || c == '%'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

bool iequals_prefix(std::string_view s, std::string_view word) {
    if (s.size() < word.size()) return false;
    for (std::size_t i = 0; i < word.size(); ++i) {
        char a = s[i];
        if (a >= 'A' && a <= 'Z') a = static_cast<char>(a - 'A' + 'a');
        if (a != word[i]) return false;
    }
    return true;
}

std::string local_name(std::string_view iri) {
    auto cut = iri.find_last_of("#/");
    return std::string(cut == std::string_view::npos ? iri : iri.substr(cut + 1));
}

std::string predicate_key(std::string_view local) { return "log:" + std::string(local); }

// "xsd:integer" for XSD types, "" for xsd:string, "<iri>" otherwise.
std::string datatype_tag(std::string_view iri) {
    if (iri.starts_with(kXsd)) {
        auto local = iri.substr(kXsd.size());
        if (local == "string") return {};
        return "xsd:" + std::string(local);
    }
    return "<" + std::string(iri) + ">";
}

std::string numeric_datatype(std::string_view lexical) {
    if (lexical.find_first_of("eE") != std::string_view::npos) return "xsd:double";
    if (lexical.find('.') != std::string_view::npos) return "xsd:decimal";
    return "xsd:integer";
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

std::optional<std::uint32_t> parse_hex(std::string_view s) {
    std::uint32_t v = 0;
    for (char c : s) {
        v <<= 4;
        if (is_digit(c)) v |= static_cast<std::uint32_t>(c - '0');
        else if (c >= 'a' && c <= 'f') v |= static_cast<std::uint32_t>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F') v |= static_cast<std::uint32_t>(c - 'A' + 10);
        else return std::nullopt;
    }
    return v;
}

bool has_scheme(std::string_view iri) {
    auto colon = iri.find(':');
    if (colon == std::string_view::npos || colon == 0 || !is_alpha(iri[0])) return false;
    return std::all_of(iri.begin(), iri.begin() + colon,
                       [](char c) { return is_alpha(c) || is_digit(c) || c == '+' || c == '-' || c == '.'; });
}

using PrefixMap = std::map<std::string, std::string, std::less<>>;

PrefixMap default_prefixes() {
    return {{"log", std::string(kLogNamespace)},
            {"xsd", std::string(kXsd)},
            {"rdf", std::string(kRdf)},
            {"rdfs", std::string(kRdfs)}};
}

// ---------------------------------------------------------------------------
// Strict parser

class StrictParser {
public:
    explicit StrictParser(std::string_view text) : s_(text) {}

    TripleSet run() {
        while (true) {
            skip_ws();
            if (pos_ >= s_.size()) break;
            if (peek() == '@') {
                at_directive();
            } else if (keyword("prefix")) {
                pos_ += 6;
                prefix_body();
            } else if (keyword("base")) {
                pos_ += 4;
                skip_ws();
                base_ = read_iriref();
            } else {
                statement();
            }
        }
        return std::move(out_);
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
    PrefixMap prefixes_ = default_prefixes();
    std::string base_;
    TripleSet out_;

    [[noreturn]] void fail(const std::string& what) const {
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) {
            if (s_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(what, pos_, line, col);
    }

    char peek(std::size_t ahead = 0) const { return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0'; }

    void skip_ws() {
        while (pos_ < s_.size()) {
            if (is_space(s_[pos_])) {
                ++pos_;
            } else if (s_[pos_] == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    void expect(char c) {
        skip_ws();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    // SPARQL-style directive keyword, followed by whitespace.
    bool keyword(std::string_view word) const {
        auto rest = s_.substr(pos_);
        return iequals_prefix(rest, word) && rest.size() > word.size() && is_space(rest[word.size()]);
    }

    void at_directive() {
        ++pos_;
        if (s_.substr(pos_).starts_with("prefix") && pos_ + 6 < s_.size() && is_space(s_[pos_ + 6])) {
            pos_ += 6;
            prefix_body();
            expect('.');
        } else if (s_.substr(pos_).starts_with("base") && pos_ + 4 < s_.size() && is_space(s_[pos_ + 4])) {
            pos_ += 4;
            skip_ws();
            base_ = read_iriref();
            expect('.');
        } else {
            fail("unknown directive");
        }
    }

    void prefix_body() {
        skip_ws();
        std::size_t start = pos_;
        if (is_name_start(peek())) {
            ++pos_;
            while (is_name_char(peek()) || (peek() == '.' && is_name_char(peek(1)))) ++pos_;
        }
        std::string name(s_.substr(start, pos_ - start));
        if (peek() != ':') fail("expected ':' after prefix name");
        ++pos_;
        skip_ws();
        prefixes_[name] = resolve(read_iriref());
    }

    std::string resolve(std::string iri) const {
        if (base_.empty() || has_scheme(iri)) return iri;
        return base_ + iri;
    }

    std::string read_iriref() {
        if (peek() != '<') fail("expected IRI");
        ++pos_;
        std::string out;
        while (true) {
            if (pos_ >= s_.size()) fail("unterminated IRI");
            char c = s_[pos_];
            if (c == '>') {
                ++pos_;
                return out;
            }
            if (c == '\\') {
                std::size_t width = peek(1) == 'u' ? 4 : peek(1) == 'U' ? 8 : 0;
                if (width == 0 || pos_ + 2 + width > s_.size()) fail("bad escape in IRI");
                auto cp = parse_hex(s_.substr(pos_ + 2, width));
                if (!cp) fail("bad escape in IRI");
                append_utf8(out, *cp);
                pos_ += 2 + width;
                continue;
            }
            if (static_cast<unsigned char>(c) <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' ||
                c == '^' || c == '`') {
                fail("illegal character in IRI");
            }
            out += c;
            ++pos_;
        }
    }

    // Returns {prefix, local}. The caller has checked that a name starts here.
    std::pair<std::string, std::string> read_pname() {
        std::size_t start = pos_;
        if (is_name_start(peek())) {
            ++pos_;
            while (is_name_char(peek()) || (peek() == '.' && is_name_char(peek(1)))) ++pos_;
        }
        std::string prefix(s_.substr(start, pos_ - start));
        if (peek() != ':') fail("expected prefixed name");
        ++pos_;
        std::string local;
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (is_local_char(c)) {
                local += c;
                ++pos_;
            } else if (c == '\\' && pos_ + 1 < s_.size()) {
                local += s_[pos_ + 1];
                pos_ += 2;
            } else {
                break;
            }
        }
        while (!local.empty() && local.back() == '.') {
            local.pop_back();
            --pos_;
        }
        if (prefixes_.find(prefix) == prefixes_.end()) fail("undeclared prefix '" + prefix + "'");
        return {prefix, local};
    }

    bool at_pname() const {
        std::size_t i = pos_;
        if (i < s_.size() && is_name_start(s_[i])) {
            ++i;
            while (i < s_.size() && (is_name_char(s_[i]) || s_[i] == '.')) ++i;
        }
        return i < s_.size() && s_[i] == ':';
    }

    std::string read_iri() {
        if (peek() == '<') return resolve(read_iriref());
        if (at_pname()) {
            auto [prefix, local] = read_pname();
            return prefixes_.at(prefix) + local;
        }
        fail("expected IRI or prefixed name");
    }

    void reject_unsupported() const {
        char c = peek();
        if (c == '[' || c == '(' || (c == '_' && peek(1) == ':')) {
            const_cast<StrictParser*>(this)->fail("blank nodes and collections are not supported");
        }
    }

    void statement() {
        reject_unsupported();
        std::string subject = read_iri();
        while (true) {
            skip_ws();
            std::string predicate = read_verb();
            while (true) {
                skip_ws();
                out_.add(subject, predicate, read_object());
                skip_ws();
                if (peek() != ',') break;
                ++pos_;
            }
            skip_ws();
            if (peek() != ';') break;
            while (peek() == ';') {
                ++pos_;
                skip_ws();
            }
            if (peek() == '.') break;
        }
        expect('.');
    }

    std::string read_verb() {
        if (peek() == 'a') {
            char next = peek(1);
            if (next == '\0' || is_space(next) || next == '<' || next == '"' || next == '\'') {
                ++pos_;
                return predicate_key("type");
            }
        }
        if (peek() == '<') return predicate_key(local_name(read_iriref()));
        if (at_pname()) return predicate_key(read_pname().second);
        fail("expected predicate");
    }

    Term read_object() {
        reject_unsupported();
        char c = peek();
        if (c == '<' || at_pname()) return Term::iri(read_iri());
        if (c == '"' || c == '\'') return read_literal();
        if (is_digit(c) || c == '+' || c == '-' || (c == '.' && is_digit(peek(1)))) return read_number();
        for (std::string_view word : {"true", "false"}) {
            if (s_.substr(pos_).starts_with(word) && !is_name_char(peek(word.size())) && peek(word.size()) != ':') {
                pos_ += word.size();
                return Term::literal(std::string(word), "xsd:boolean");
            }
        }
        fail("expected object");
    }

    Term read_number() {
        std::size_t start = pos_;
        if (peek() == '+' || peek() == '-') ++pos_;
        std::size_t digits = 0;
        while (is_digit(peek())) ++pos_, ++digits;
        if (peek() == '.' && is_digit(peek(1))) {
            ++pos_;
            while (is_digit(peek())) ++pos_, ++digits;
        }
        if (digits == 0) fail("malformed number");
        if (peek() == 'e' || peek() == 'E') {
            ++pos_;
            if (peek() == '+' || peek() == '-') ++pos_;
            if (!is_digit(peek())) fail("malformed exponent");
            while (is_digit(peek())) ++pos_;
        }
        auto lexical = s_.substr(start, pos_ - start);
        return Term::literal(std::string(lexical), numeric_datatype(lexical));
    }

    Term read_literal() {
        char q = peek();
        bool long_form = peek(1) == q && peek(2) == q;
        pos_ += long_form ? 3 : 1;
        std::string value;
        while (true) {
            if (pos_ >= s_.size()) fail("unterminated string");
            char c = s_[pos_];
            if (long_form && c == q && peek(1) == q && peek(2) == q) {
                pos_ += 3;
                break;
            }
            if (!long_form && c == q) {
                ++pos_;
                break;
            }
            if (!long_form && (c == '\n' || c == '\r')) fail("line break in string");
            if (c == '\\') {
                char e = peek(1);
                switch (e) {
                    case 't': value += '\t'; break;
                    case 'b': value += '\b'; break;
                    case 'n': value += '\n'; break;
                    case 'r': value += '\r'; break;
                    case 'f': value += '\f'; break;
                    case '"': value += '"'; break;
                    case '\'': value += '\''; break;
                    case '\\': value += '\\'; break;
                    case 'u':
                    case 'U': {
                        std::size_t width = e == 'u' ? 4 : 8;
                        if (pos_ + 2 + width > s_.size()) fail("bad escape in string");
                        auto cp = parse_hex(s_.substr(pos_ + 2, width));
                        if (!cp) fail("bad escape in string");
                        append_utf8(value, *cp);
                        pos_ += width;
                        break;
                    }
                    default: fail("bad escape in string");
                }
                pos_ += 2;
                continue;
            }
            value += c;
            ++pos_;
        }
        if (peek() == '^' && peek(1) == '^') {
            pos_ += 2;
            return Term::literal(std::move(value), datatype_tag(read_iri()));
        }
        if (peek() == '@') {
            std::size_t start = pos_++;
            if (!is_alpha(peek())) fail("malformed language tag");
            while (is_alpha(peek())) ++pos_;
            while (peek() == '-' && (is_alpha(peek(1)) || is_digit(peek(1)))) {
                ++pos_;
                while (is_alpha(peek()) || is_digit(peek())) ++pos_;
            }
            return Term::literal(std::move(value), std::string(s_.substr(start, pos_ - start)));
        }
        return Term::literal(std::move(value));
    }
};

// ---------------------------------------------------------------------------
// Recovery

enum class Tok : std::uint8_t { Iri, PName, Str, Num, Semi, Dot, Comma, A, Word };

struct Token {
    Tok kind;
    std::string text;      // IRI value, pname text, literal lexical, or word
    std::string datatype;  // Str/Num only
};

bool looks_like_pname(std::string_view w) {
    auto colon = w.find(':');
    if (colon == std::string_view::npos || colon + 1 >= w.size()) return false;
    auto prefix = w.substr(0, colon);
    if (!prefix.empty() && !is_name_start(prefix[0])) return false;
    if (!std::all_of(prefix.begin(), prefix.end(), [](char c) { return is_name_char(c) || c == '.'; })) return false;
    auto local = w.substr(colon + 1);
    return std::all_of(local.begin(), local.end(), [](char c) { return is_local_char(c) || c == '/' || c == '#'; });
}

class LineLexer {
public:
    LineLexer(std::string_view line, const PrefixMap& prefixes) : s_(line), prefixes_(prefixes) {}

    std::vector<Token> run() {
        while (true) {
            while (pos_ < s_.size() && is_space(s_[pos_])) ++pos_;
            if (pos_ >= s_.size()) break;
            char c = s_[pos_];
            if (c == '#') break;
            if (c == ';') {
                push(Tok::Semi);
                ++pos_;
            } else if (c == ',') {
                push(Tok::Comma);
                ++pos_;
            } else if (c == '.' && !(pos_ + 1 < s_.size() && is_digit(s_[pos_ + 1]))) {
                push(Tok::Dot);
                ++pos_;
            } else if (c == '<') {
                iri();
            } else if (c == '"' || c == '\'') {
                literal();
            } else if (is_digit(c) || ((c == '+' || c == '-' || c == '.') && pos_ + 1 < s_.size() && is_digit(s_[pos_ + 1]))) {
                number();
            } else {
                word();
            }
        }
        return std::move(out_);
    }

private:
    std::string_view s_;
    const PrefixMap& prefixes_;
    std::size_t pos_ = 0;
    std::vector<Token> out_;

    void push(Tok kind, std::string text = {}, std::string datatype = {}) {
        out_.push_back({kind, std::move(text), std::move(datatype)});
    }

    // Splits trailing ';' ',' '.' off an unbracketed token.
    std::string_view strip_trailing(std::string_view w, std::vector<Tok>& trailing) {
        while (!w.empty() && (w.back() == ';' || w.back() == ',' || w.back() == '.')) {
            trailing.insert(trailing.begin(), w.back() == ';' ? Tok::Semi : w.back() == ',' ? Tok::Comma : Tok::Dot);
            w.remove_suffix(1);
        }
        return w;
    }

    std::size_t token_end(std::size_t from) const {
        std::size_t i = from;
        while (i < s_.size() && !is_space(s_[i]) && s_[i] != '"' && s_[i] != '<' && s_[i] != '>') ++i;
        return i;
    }

    void iri() {
        std::size_t start = pos_ + 1;
        std::size_t i = start;
        while (i < s_.size() && s_[i] != '>' && !is_space(s_[i])) ++i;
        if (i < s_.size() && s_[i] == '>') {
            push(Tok::Iri, std::string(s_.substr(start, i - start)));
            pos_ = i + 1;
            return;
        }
        std::vector<Tok> trailing;
        auto value = strip_trailing(s_.substr(start, i - start), trailing);
        push(Tok::Iri, std::string(value));
        for (auto t : trailing) push(t);
        pos_ = i;
    }

    void literal() {
        char q = s_[pos_];
        std::string value;
        std::size_t i = pos_ + 1;
        bool closed = false;
        while (i < s_.size()) {
            char c = s_[i];
            if (c == '\\' && i + 1 < s_.size()) {
                char e = s_[i + 1];
                value += e == 'n' ? '\n' : e == 't' ? '\t' : e == 'r' ? '\r' : e;
                i += 2;
                continue;
            }
            if (c == q) {
                closed = true;
                ++i;
                break;
            }
            value += c;
            ++i;
        }
        pos_ = i;
        if (!closed) {
            push(Tok::Word, std::move(value));
            return;
        }
        std::string datatype;
        if (s_.substr(pos_).starts_with("^^")) {
            pos_ += 2;
            if (pos_ < s_.size() && s_[pos_] == '<') {
                auto close = s_.find('>', pos_);
                auto end = close == std::string_view::npos ? token_end(pos_ + 1) : close;
                datatype = datatype_tag(s_.substr(pos_ + 1, end - pos_ - 1));
                pos_ = close == std::string_view::npos ? end : close + 1;
            } else {
                std::size_t end = token_end(pos_);
                std::vector<Tok> trailing;
                auto name = strip_trailing(s_.substr(pos_, end - pos_), trailing);
                datatype = datatype_from_pname(name);
                pos_ += name.size();
            }
        } else if (pos_ < s_.size() && s_[pos_] == '@') {
            std::size_t start = pos_++;
            while (pos_ < s_.size() && (is_alpha(s_[pos_]) || is_digit(s_[pos_]) || s_[pos_] == '-')) ++pos_;
            datatype = std::string(s_.substr(start, pos_ - start));
        }
        push(Tok::Str, std::move(value), std::move(datatype));
    }

    std::string datatype_from_pname(std::string_view name) const {
        auto colon = name.find(':');
        if (colon == std::string_view::npos) return {};
        auto prefix = name.substr(0, colon);
        auto local = name.substr(colon + 1);
        if (prefix == "xsd") return local == "string" ? std::string() : "xsd:" + std::string(local);
        if (auto it = prefixes_.find(prefix); it != prefixes_.end()) return datatype_tag(it->second + std::string(local));
        return std::string(name);
    }

    void number() {
        std::size_t start = pos_;
        std::size_t i = pos_;
        if (s_[i] == '+' || s_[i] == '-') ++i;
        while (i < s_.size() && is_digit(s_[i])) ++i;
        if (i + 1 < s_.size() && s_[i] == '.' && is_digit(s_[i + 1])) {
            ++i;
            while (i < s_.size() && is_digit(s_[i])) ++i;
        }
        if (i < s_.size() && (s_[i] == 'e' || s_[i] == 'E')) {
            std::size_t j = i + 1;
            if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
            if (j < s_.size() && is_digit(s_[j])) {
                while (j < s_.size() && is_digit(s_[j])) ++j;
                i = j;
            }
        }
        if (i < s_.size() && !is_space(s_[i]) && s_[i] != ';' && s_[i] != ',' && s_[i] != '.') {
            word();
            return;
        }
        auto lexical = s_.substr(start, i - start);
        push(Tok::Num, std::string(lexical), numeric_datatype(lexical));
        pos_ = i;
    }

    void word() {
        std::size_t end = token_end(pos_);
        if (end == pos_) end = pos_ + 1;
        std::vector<Tok> trailing;
        auto w = strip_trailing(s_.substr(pos_, end - pos_), trailing);
        pos_ = end;
        if (w.starts_with("http://") || w.starts_with("https://")) {
            push(Tok::Iri, std::string(w));
        } else if (w == "a") {
            push(Tok::A, std::string(w));
        } else if (looks_like_pname(w)) {
            push(Tok::PName, std::string(w));
        } else if (!w.empty()) {
            push(Tok::Word, std::string(w));
        }
        for (auto t : trailing) push(t);
    }
};

class Recovery {
public:
    TripleSet run(std::string_view text) {
        std::size_t start = 0;
        while (start <= text.size()) {
            auto nl = text.find('\n', start);
            auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
            process_line(trim(line));
            if (nl == std::string_view::npos) break;
            start = nl + 1;
        }
        return std::move(out_);
    }

private:
    PrefixMap prefixes_ = default_prefixes();
    std::optional<std::string> subject_;
    TripleSet out_;

    void process_line(std::string_view line) {
        if (line.empty() || line.starts_with("```") || line.starts_with("#")) return;
        if (iequals_prefix(line, "@prefix") || iequals_prefix(line, "prefix ")) {
            remember_prefix(line);
            return;
        }
        if (iequals_prefix(line, "@base") || iequals_prefix(line, "base ")) return;

        auto tokens = LineLexer(line, prefixes_).run();
        std::vector<Token> segment;
        for (auto& t : tokens) {
            if (t.kind == Tok::Semi || t.kind == Tok::Dot) {
                handle(segment);
                segment.clear();
            } else {
                segment.push_back(std::move(t));
            }
        }
        handle(segment);
    }

    // "@prefix ex: <http://...> ." with any amount of damage.
    void remember_prefix(std::string_view line) {
        auto colon = line.find(':');
        if (colon == std::string_view::npos) return;
        auto head = trim(line.substr(0, colon));
        auto sp = head.find_last_of(" \t");
        std::string name(sp == std::string_view::npos ? std::string_view{} : head.substr(sp + 1));
        if (name.starts_with("@") || iequals_prefix(name, "prefix")) name.clear();
        auto rest = trim(line.substr(colon + 1));
        if (!rest.empty() && rest.front() == '<') rest.remove_prefix(1);
        auto end = rest.find_first_of("> \t");
        auto iri = rest.substr(0, end);
        while (!iri.empty() && (iri.back() == '.' || iri.back() == ';')) iri.remove_suffix(1);
        if (!iri.empty() && name != "log" && name != "xsd") prefixes_[name] = std::string(iri);
    }

    std::optional<std::string> as_node(const Token& t) const {
        if (t.kind == Tok::Iri) return t.text;
        if (t.kind == Tok::PName) {
            auto colon = t.text.find(':');
            auto prefix = t.text.substr(0, colon);
            if (auto it = prefixes_.find(prefix); it != prefixes_.end()) return it->second + t.text.substr(colon + 1);
            return t.text;
        }
        return std::nullopt;
    }

    static std::optional<std::string> as_predicate(const Token& t) {
        if (t.kind == Tok::A) return predicate_key("type");
        if (t.kind == Tok::PName) return predicate_key(t.text.substr(t.text.find(':') + 1));
        if (t.kind == Tok::Iri) return predicate_key(local_name(t.text));
        return std::nullopt;
    }

    std::optional<Term> as_object(const Token& t) const {
        if (t.kind == Tok::Str || t.kind == Tok::Num) return Term::literal(t.text, t.datatype);
        if (auto node = as_node(t)) return Term::iri(*node);
        return std::nullopt;
    }

    void handle(const std::vector<Token>& seg) {
        if (seg.empty()) return;
        if (std::any_of(seg.begin(), seg.end(), [](const Token& t) { return t.kind == Tok::Word; })) return;

        std::vector<std::vector<const Token*>> parts(1);
        for (const auto& t : seg) {
            if (t.kind == Tok::Comma) {
                parts.emplace_back();
            } else {
                parts.back().push_back(&t);
            }
        }
        const auto& head = parts.front();
        if (head.size() == 1 && parts.size() == 1) {
            if (auto node = as_node(*head[0])) subject_ = *node;
            return;
        }
        std::optional<std::string> subject;
        std::optional<std::string> predicate;
        std::optional<Term> object;
        if (head.size() == 3) {
            subject = as_node(*head[0]);
            predicate = as_predicate(*head[1]);
            object = as_object(*head[2]);
            if (!subject || !predicate || !object) return;
            subject_ = subject;
        } else if (head.size() == 2) {
            predicate = as_predicate(*head[0]);
            object = as_object(*head[1]);
            if (!predicate || !object) return;
            subject = subject_ ? *subject_ : std::string(kRecoveredSubject);
        } else {
            return;
        }
        out_.add(*subject, *predicate, std::move(*object));
        for (std::size_t i = 1; i < parts.size(); ++i) {
            if (parts[i].size() != 1) continue;
            if (auto extra = as_object(*parts[i][0])) out_.add(*subject, *predicate, std::move(*extra));
        }
    }
};

// ---------------------------------------------------------------------------
// Cleaning

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (true) {
        auto nl = text.find('\n', start);
        auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return lines;
}

bool is_start_line(std::string_view line) {
    auto t = trim(line);
    if (t.empty()) return false;
    if (t.front() == '<') return true;
    if (iequals_prefix(t, "@prefix") || iequals_prefix(t, "@base") || iequals_prefix(t, "prefix ") ||
        iequals_prefix(t, "base ")) {
        return true;
    }
    auto first = t.substr(0, t.find_first_of(" \t"));
    while (!first.empty() && (first.back() == ';' || first.back() == '.' || first.back() == ',')) first.remove_suffix(1);
    return looks_like_pname(first);
}

bool is_turtle_line(std::string_view line) {
    auto t = trim(line);
    if (t.empty()) return false;
    if (is_start_line(t) || t.front() == '"' || t.front() == '\'') return true;
    char last = t.back();
    return last == ';' || last == '.' || last == ',' || last == '>';
}

std::string strip_think_blocks(std::string_view raw) {
    std::string text(raw);
    while (true) {
        auto open = text.find("<think>");
        if (open == std::string::npos) break;
        auto close = text.find("</think>", open);
        if (close == std::string::npos) {
            text.erase(open);
            break;
        }
        text.erase(open, close + 8 - open);
    }
    // A stray closing tag means the reasoning started before the captured text.
    if (auto close = text.find("</think>"); close != std::string::npos) text.erase(0, close + 8);
    return text;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string serialize_term(const Term& t) {
    if (t.is_iri()) return "<" + t.value + ">";
    std::string out = "\"";
    for (char c : t.value) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    if (!t.datatype.empty()) {
        if (t.datatype.front() != '@') out += "^^";
        out += t.datatype;
    }
    return out;
}

std::string serialize(const TripleSet& ts) {
    std::string out;
    const auto& v = ts.triples;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i == 0 || v[i].subject != v[i - 1].subject) {
            if (i > 0) out += '\n';
            out += '<';
            out += v[i].subject;
            out += ">\n";
        }
        out += v[i].predicate;
        out += ' ';
        out += serialize_term(v[i].object);
        bool last = i + 1 == v.size() || v[i + 1].subject != v[i].subject;
        out += last ? " ." : " ;";
        if (i + 1 < v.size()) out += '\n';
    }
    return out;
}

TripleSet parse_strict(std::string_view text) { return StrictParser(text).run(); }

TripleSet extract_regex(std::string_view text) { return Recovery().run(text); }

std::string clean_output(std::string_view raw) {
    auto text = strip_think_blocks(raw);
    auto lines = split_lines(text);

    auto fence = std::find_if(lines.begin(), lines.end(), [](auto l) { return trim(l).starts_with("```"); });
    if (fence != lines.end()) {
        auto close = std::find_if(fence + 1, lines.end(), [](auto l) { return trim(l).starts_with("```"); });
        lines = std::vector<std::string_view>(fence + 1, close);
    }

    auto first = std::find_if(lines.begin(), lines.end(), is_start_line);
    if (first == lines.end()) return {};
    std::size_t begin = static_cast<std::size_t>(first - lines.begin());
    std::size_t end = begin + 1;
    std::string_view prev = trim(lines[begin]);
    for (std::size_t i = begin + 1; i < lines.size(); ++i) {
        auto t = trim(lines[i]);
        if (t.empty()) continue;
        if (prev.ends_with('.') && !is_start_line(t)) break;
        end = i + 1;
        prev = t;
    }
    while (end > begin + 1 && !is_turtle_line(lines[end - 1])) --end;

    std::string out;
    for (std::size_t i = begin; i < end; ++i) {
        if (i > begin) out += '\n';
        out += lines[i];
    }
    return out;
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::Valid: return "valid";
        case Outcome::Regex: return "regex";
        case Outcome::Invalid: return "invalid";
        case Outcome::Empty: return "empty";
    }
    return "?";
}

std::optional<Outcome> parse_outcome(std::string_view s) {
    for (auto o : {Outcome::Valid, Outcome::Regex, Outcome::Invalid, Outcome::Empty}) {
        if (to_string(o) == s) return o;
    }
    return std::nullopt;
}

ValidationOutcome classify(std::string_view raw) {
    ValidationOutcome v;
    if (trim(raw).empty()) {
        v.tag = Outcome::Empty;
        return v;
    }
    v.cleaned = clean_output(raw);
    if (trim(v.cleaned).empty()) {
        v.tag = Outcome::Invalid;
        return v;
    }
    try {
        auto ts = parse_strict(v.cleaned);
        if (!ts.empty()) {
            v.tag = Outcome::Valid;
            v.triples = std::move(ts);
            return v;
        }
    } catch (const ParseError&) {
    }
    auto recovered = extract_regex(v.cleaned);
    if (!recovered.empty()) {
        v.tag = Outcome::Regex;
        v.triples = std::move(recovered);
    } else {
        v.tag = Outcome::Invalid;
    }
    return v;
}

double validity_percentage(std::span<const Outcome> outcomes, std::size_t total) {
    if (total == 0) throw ZeroTotal();
    auto valid = std::count(outcomes.begin(), outcomes.end(), Outcome::Valid);
    return 100.0 * static_cast<double>(valid) / static_cast<double>(total);
}

}  // namespace logkg
