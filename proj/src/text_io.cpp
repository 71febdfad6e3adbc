#include "repairkit/text_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "repairkit/errors.hpp"

namespace repairkit {

namespace {

enum class Tok { word, variable, lparen, rparen, comma, colon, arrow, eq, neq, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    std::size_t column = 1;
};

bool is_word_char(char c) {
    switch (c) {
        case '(': case ')': case ',': case ':': case '#': case '=': case '!': case '?':
            return false;
        default:
            return !std::isspace(static_cast<unsigned char>(c));
    }
}

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Tokenizer and recursive-descent helpers for one line of input.
class LineParser {
public:
    LineParser(std::string_view line, std::size_t line_no, const std::string& file)
        : line_(line), line_no_(line_no), file_(file) {
        advance();
    }

    const Token& peek() const { return current_; }
    bool at(Tok kind) const { return current_.kind == kind; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

    Token expect(Tok kind, const char* what) {
        if (!at(kind)) fail(current_.column, std::string("expected ") + what);
        return take();
    }

    bool accept(Tok kind) {
        if (!at(kind)) return false;
        advance();
        return true;
    }

    [[noreturn]] void fail(std::size_t column, const std::string& message) const {
        throw ParseError(file_, line_no_, column, message);
    }

    std::size_t line_no() const { return line_no_; }

    // Relation name: a word that starts with a letter or underscore.
    std::string relation_name() {
        Token t = expect(Tok::word, "relation name");
        const char c = t.text.front();
        if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) {
            fail(t.column, "relation name must start with a letter or '_': " + t.text);
        }
        return t.text;
    }

    Term term() {
        if (at(Tok::variable)) return Term::variable(take().text);
        if (at(Tok::word)) return Term::constant(take().text);
        fail(current_.column, "expected a constant or ?variable");
    }

    Fact fact() {
        Fact f;
        f.relation = relation_name();
        expect(Tok::lparen, "'('");
        do {
            if (at(Tok::variable)) fail(current_.column, "facts may not contain variables");
            f.tuple.push_back(expect(Tok::word, "constant").text);
        } while (accept(Tok::comma));
        expect(Tok::rparen, "')'");
        return f;
    }

    Atom atom() {
        Atom a;
        a.relation = relation_name();
        expect(Tok::lparen, "'('");
        do {
            a.terms.push_back(term());
        } while (accept(Tok::comma));
        expect(Tok::rparen, "')'");
        return a;
    }

    Comparison comparison() {
        Comparison c;
        c.lhs = term();
        if (accept(Tok::eq)) {
            c.equal = true;
        } else if (accept(Tok::neq)) {
            c.equal = false;
        } else {
            fail(current_.column, "expected '=' or '!='");
        }
        c.rhs = term();
        return c;
    }

    // atom | comparison, comma separated, to the end of the line.
    void conjunction(std::vector<Atom>& atoms, std::vector<Comparison>& comparisons) {
        do {
            if (at(Tok::word) && peek_is_lparen()) {
                atoms.push_back(atom());
            } else {
                comparisons.push_back(comparison());
            }
        } while (accept(Tok::comma));
        expect(Tok::end, "',' or end of line");
    }

    std::vector<std::size_t> positions() {
        std::vector<std::size_t> out;
        while (at(Tok::word)) {
            Token t = take();
            std::size_t value = 0;
            auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
            if (ec != std::errc() || ptr != t.text.data() + t.text.size() || value == 0) {
                fail(t.column, "expected a positive position, got '" + t.text + "'");
            }
            out.push_back(value);
        }
        return out;
    }

private:
    bool peek_is_lparen() const {
        std::size_t p = pos_;
        while (p < line_.size() && std::isspace(static_cast<unsigned char>(line_[p]))) ++p;
        return p < line_.size() && line_[p] == '(';
    }

    void advance() {
        while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
        current_ = Token{};
        current_.column = pos_ + 1;
        if (pos_ >= line_.size()) return;
        const char c = line_[pos_];
        auto single = [&](Tok kind) {
            current_.kind = kind;
            current_.text = std::string(1, c);
            ++pos_;
        };
        switch (c) {
            case '(': single(Tok::lparen); return;
            case ')': single(Tok::rparen); return;
            case ',': single(Tok::comma); return;
            case ':': single(Tok::colon); return;
            case '=': single(Tok::eq); return;
            case '!':
                if (pos_ + 1 < line_.size() && line_[pos_ + 1] == '=') {
                    current_.kind = Tok::neq;
                    current_.text = "!=";
                    pos_ += 2;
                    return;
                }
                fail(pos_ + 1, "stray '!'");
            case '?': {
                std::size_t start = ++pos_;
                while (pos_ < line_.size() && is_name_char(line_[pos_])) ++pos_;
                if (pos_ == start) fail(start, "empty variable name");
                current_.kind = Tok::variable;
                current_.text = std::string(line_.substr(start, pos_ - start));
                return;
            }
            default: break;
        }
        if (c == '-' && pos_ + 1 < line_.size() && line_[pos_ + 1] == '>') {
            current_.kind = Tok::arrow;
            current_.text = "->";
            pos_ += 2;
            return;
        }
        std::size_t start = pos_;
        while (pos_ < line_.size() && is_word_char(line_[pos_])) {
            if (line_[pos_] == '-' && pos_ + 1 < line_.size() && line_[pos_ + 1] == '>') break;
            ++pos_;
        }
        if (pos_ == start) fail(pos_ + 1, std::string("unexpected character '") + c + "'");
        current_.kind = Tok::word;
        current_.text = std::string(line_.substr(start, pos_ - start));
    }

    std::string_view line_;
    std::size_t line_no_;
    const std::string& file_;
    std::size_t pos_ = 0;
    Token current_;
};

struct Line {
    std::string_view text;
    std::size_t number;
};

// Non-blank lines with comments stripped.
std::vector<Line> content_lines(std::string_view text) {
    std::vector<Line> out;
    std::size_t number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++number;
        std::string_view line = text.substr(start, end - start);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t\r") != std::string_view::npos) out.push_back({line, number});
        if (end == text.size()) break;
        start = end + 1;
    }
    return out;
}

std::string join_positions(const std::vector<std::size_t>& ps) {
    std::string out;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(ps[i]);
    }
    return out;
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::string Diagnostic::to_string() const {
    return (file.empty() ? std::string("<input>") : file) + ":" + std::to_string(line) + ":" +
           std::to_string(column) + ": " + message;
}

Database parse_database(std::string_view text, const std::string& file,
                        std::vector<Diagnostic>* warnings) {
    std::vector<Fact> facts;
    std::map<std::string, std::size_t> arities;
    std::set<Fact> seen;
    for (const auto& line : content_lines(text)) {
        LineParser p(line.text, line.number, file);
        const std::size_t column = p.peek().column;
        Fact f = p.fact();
        p.expect(Tok::end, "end of line after fact");
        auto [it, inserted] = arities.emplace(f.relation, f.arity());
        if (!inserted && it->second != f.arity()) {
            p.fail(column, "relation " + f.relation + " has arity " + std::to_string(it->second) +
                               " elsewhere but " + std::to_string(f.arity()) + " here");
        }
        if (!seen.insert(f).second) {
            if (warnings) {
                warnings->push_back({file, line.number, column, "duplicate fact " + f.to_string()});
            }
            continue;
        }
        facts.push_back(std::move(f));
    }
    return Database(std::move(facts));
}

ConstraintSet parse_constraints(std::string_view text, const std::string& file,
                                std::vector<Diagnostic>* warnings) {
    ConstraintSet out;
    for (const auto& line : content_lines(text)) {
        LineParser p(line.text, line.number, file);
        const Token head = p.expect(Tok::word, "'key', 'fd' or 'dc'");
        Constraint c;
        if (head.text == "key") {
            Key key;
            key.relation = p.relation_name();
            p.expect(Tok::colon, "':'");
            key.positions = p.positions();
            if (key.positions.empty()) p.fail(p.peek().column, "key needs at least one position");
            p.expect(Tok::end, "end of line");
            c = std::move(key);
        } else if (head.text == "fd") {
            FunctionalDependency fd;
            fd.relation = p.relation_name();
            p.expect(Tok::colon, "':'");
            fd.lhs = p.positions();
            p.expect(Tok::arrow, "'->'");
            fd.rhs = p.positions();
            if (fd.rhs.empty()) p.fail(p.peek().column, "fd needs at least one rhs position");
            p.expect(Tok::end, "end of line");
            c = std::move(fd);
        } else if (head.text == "dc") {
            DenialConstraint dc;
            p.expect(Tok::colon, "':'");
            p.conjunction(dc.atoms, dc.comparisons);
            if (dc.atoms.empty()) p.fail(head.column, "denial constraint needs a relational atom");
            c = std::move(dc);
        } else {
            p.fail(head.column, "unknown constraint kind '" + head.text + "'");
        }
        try {
            check_well_formed(c);
        } catch (const PreconditionError& e) {
            p.fail(head.column, e.what());
        }
        if (std::find(out.begin(), out.end(), c) != out.end()) {
            if (warnings) {
                warnings->push_back({file, line.number, head.column, "duplicate constraint"});
            }
            continue;
        }
        out.push_back(std::move(c));
    }
    return out;
}

Query parse_query(std::string_view text, const std::string& file) {
    const auto lines = content_lines(text);
    if (lines.empty()) throw ParseError(file, 1, 1, "empty query; write 'false' for the false query");
    std::vector<Disjunct> disjuncts;
    bool saw_false = false;
    for (const auto& line : lines) {
        LineParser p(line.text, line.number, file);
        if (p.at(Tok::word) && p.peek().text == "false") {
            const std::size_t column = p.peek().column;
            p.take();
            if (p.at(Tok::end)) {
                if (lines.size() != 1) {
                    p.fail(column, "'false' must be the only line of a query file");
                }
                saw_false = true;
                continue;
            }
            p.fail(column, "unexpected 'false'");
        }
        Disjunct d;
        const std::size_t column = p.peek().column;
        p.conjunction(d.atoms, d.inequalities);
        if (d.atoms.empty()) p.fail(column, "disjunct needs at least one relational atom");
        for (const auto& c : d.inequalities) {
            if (c.equal) p.fail(column, "queries admit only '!=' comparisons");
        }
        try {
            // Validates safety of this disjunct on its own.
            (void)Query::of({d});
        } catch (const PreconditionError& e) {
            p.fail(column, e.what());
        }
        disjuncts.push_back(std::move(d));
    }
    if (saw_false) return Query::falsum();
    return Query::of(std::move(disjuncts));
}

RootedDecomposition parse_decomposition(std::string_view text, const Database& db,
                                        const std::string& file) {
    RootedDecomposition t;
    std::optional<BagIndex> root;
    std::size_t last_line = 1;
    for (const auto& line : content_lines(text)) {
        last_line = line.number;
        LineParser p(line.text, line.number, file);
        const Token head = p.expect(Tok::word, "'bag', 'edge' or 'root'");
        auto index = [&]() -> BagIndex {
            Token tok = p.expect(Tok::word, "bag index");
            BagIndex value = 0;
            auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
            if (ec != std::errc() || ptr != tok.text.data() + tok.text.size()) {
                p.fail(tok.column, "expected a bag index, got '" + tok.text + "'");
            }
            return value;
        };
        if (head.text == "bag") {
            std::vector<FactId> ids;
            while (!p.at(Tok::end)) {
                const std::size_t column = p.peek().column;
                Fact f = p.fact();
                auto id = db.find(f);
                if (!id) p.fail(column, "fact " + f.to_string() + " is not in the database");
                ids.push_back(*id);
            }
            t.bags.push_back(make_fact_set(std::move(ids)));
        } else if (head.text == "edge") {
            BagIndex a = index();
            BagIndex b = index();
            p.expect(Tok::end, "end of line");
            t.tree_edges.emplace_back(a, b);
        } else if (head.text == "root") {
            root = index();
            p.expect(Tok::end, "end of line");
        } else {
            p.fail(head.column, "unknown decomposition line '" + head.text + "'");
        }
    }
    if (t.bags.empty()) throw ParseError(file, last_line, 1, "decomposition without bags");
    for (auto [a, b] : t.tree_edges) {
        if (a >= t.bags.size() || b >= t.bags.size()) {
            throw ParseError(file, last_line, 1, "edge refers to a missing bag");
        }
    }
    try {
        return root_and_order(std::move(t), root.value_or(0));
    } catch (const PreconditionError& e) {
        throw ParseError(file, last_line, 1, e.what());
    }
}

std::string serialize_database(const Database& db) {
    std::string out;
    for (const auto& f : db.facts()) {
        out += f.to_string();
        out += '\n';
    }
    return out;
}

std::string serialize_constraint(const Constraint& constraint) {
    return std::visit(
        Overloaded{
            [](const Key& k) { return "key " + k.relation + " : " + join_positions(k.positions); },
            [](const FunctionalDependency& fd) {
                std::string lhs = join_positions(fd.lhs);
                return "fd " + fd.relation + " : " + lhs + (lhs.empty() ? "" : " ") + "-> " +
                       join_positions(fd.rhs);
            },
            [](const DenialConstraint& dc) {
                std::string out = "dc : ";
                bool first = true;
                for (const auto& a : dc.atoms) {
                    out += (first ? "" : ", ") + a.to_string();
                    first = false;
                }
                for (const auto& c : dc.comparisons) out += ", " + c.to_string();
                return out;
            },
        },
        constraint);
}

std::string serialize_constraints(const ConstraintSet& constraints) {
    std::string out;
    for (const auto& c : constraints) out += serialize_constraint(c) + "\n";
    return out;
}

std::string serialize_query(const Query& query) {
    if (query.is_false()) return "false\n";
    std::string out;
    for (const auto& d : query.disjuncts()) {
        bool first = true;
        for (const auto& a : d.atoms) {
            out += (first ? "" : ", ") + a.to_string();
            first = false;
        }
        for (const auto& c : d.inequalities) out += ", " + c.to_string();
        out += '\n';
    }
    return out;
}

std::string serialize_decomposition(const RootedDecomposition& t, const Database& db) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.bags.size(); ++i) {
        os << "bag";
        for (FactId id : t.bags[i]) os << ' ' << db.fact(id).to_string();
        os << "  # " << i << '\n';
    }
    for (auto [a, b] : t.tree_edges) os << "edge " << a << ' ' << b << '\n';
    os << "root " << t.root << '\n';
    return os.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, 0, 0, "cannot open file");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string emit_report(const Report& report, bool include_timings) {
    nlohmann::ordered_json j;
    j["repairs_total"] = report.total.str();
    j["repairs_falsifying"] = report.falsifying.str();
    j["repairs_satisfying"] = report.satisfying.str();
    j["cqa"] = report.cqa;
    j["width_used"] = report.width_used;
    j["bags"] = report.bags;
    j["graph"] = {{"nodes", report.graph.nodes},
                  {"conflict_edges", report.graph.conflict_edges},
                  {"solution_edges", report.graph.solution_edges}};
    if (include_timings) {
        nlohmann::ordered_json timings = nlohmann::ordered_json::object();
        for (const auto& [phase, ms] : report.timings_ms) timings[phase] = ms;
        j["timings_ms"] = timings;
    }
    return j.dump(2) + "\n";
}

}  // namespace repairkit
