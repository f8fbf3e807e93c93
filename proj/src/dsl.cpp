// Scenario DSL: line/block grammar with '#' comments.
//
//   node <id> { cores <n> class <1|2|3> }
//   switch <id>
//   endpoint <id> { kind sensor|actuator }
//   link <id> -> <id> [rate <n>Mbps]
//   stream "<name>" { src <id> dst <id> size <n>B period <n>ms [deadline <n>ms]
//                     criticality <0..4> route <id>,<id>,... [min_offset <n>us] }
//   app "<name>" on <id> { level <0..4> tasks <n> period <n>ms util <fraction>
//                          [task <name> wcet <n>us period <n>ms [deadline <n>ms]]... }
//   params { d_hop <n>us link_rate <n>Mbps weight_base <x> seed <n> }

#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "fogweaver/dsl_detail.hpp"
#include "fogweaver/scenario.hpp"

namespace fogweaver {
namespace dsl {

Lexer::Lexer(std::string_view text) : text_(text) { advance(); }

void Lexer::skip_blank() {
    while (pos_ < text_.size()) {
        const char c = text_[pos_];
        if (c == '#') {
            while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
        } else if (c == '\n') {
            ++pos_;
            ++line_;
            col_ = 1;
        } else if (c == ' ' || c == '\t' || c == '\r') {
            ++pos_;
            ++col_;
        } else {
            break;
        }
    }
}

static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

void Lexer::advance() {
    skip_blank();
    cur_ = Token{};
    cur_.line = line_;
    cur_.column = col_;
    if (pos_ >= text_.size()) {
        cur_.kind = TokKind::end;
        return;
    }
    const char c = text_[pos_];
    auto take = [&](std::size_t n) {
        pos_ += n;
        col_ += static_cast<int>(n);
    };

    if (c == '{' || c == '}' || c == ',') {
        cur_.kind = TokKind::punct;
        cur_.text = std::string(1, c);
        take(1);
    } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
        cur_.kind = TokKind::punct;
        cur_.text = "->";
        take(2);
    } else if (c == '"') {
        take(1);
        std::string s;
        while (true) {
            if (pos_ >= text_.size() || text_[pos_] == '\n')
                throw SyntaxError("unterminated string", cur_.line, cur_.column);
            char ch = text_[pos_];
            if (ch == '"') {
                take(1);
                break;
            }
            if (ch == '\\' && pos_ + 1 < text_.size()) {
                take(1);
                ch = text_[pos_];
            }
            s.push_back(ch);
            take(1);
        }
        cur_.kind = TokKind::string;
        cur_.text = std::move(s);
    } else if (std::isdigit(static_cast<unsigned char>(c)) || (c == '-' && pos_ + 1 < text_.size() &&
                                                               std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
        auto digit = [&](std::size_t i) {
            return i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]));
        };
        std::size_t end = pos_ + (c == '-' ? 1 : 0);
        while (digit(end)) ++end;
        if (end < text_.size() && text_[end] == '.' && digit(end + 1)) {
            ++end;
            while (digit(end)) ++end;
        }
        if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
            std::size_t e = end + 1;
            if (e < text_.size() && (text_[e] == '-' || text_[e] == '+')) ++e;
            if (digit(e)) {
                end = e;
                while (digit(end)) ++end;
            }
        }
        const auto res = std::from_chars(text_.data() + pos_, text_.data() + end, cur_.number);
        if (res.ec != std::errc() || res.ptr != text_.data() + end)
            throw SyntaxError("malformed number", cur_.line, cur_.column);
        cur_.kind = TokKind::number;
        cur_.text = std::string(text_.substr(pos_, end - pos_));
        take(end - pos_);
        std::size_t uend = pos_;
        while (uend < text_.size() && std::isalpha(static_cast<unsigned char>(text_[uend]))) ++uend;
        cur_.unit = std::string(text_.substr(pos_, uend - pos_));
        take(uend - pos_);
    } else if (ident_start(c)) {
        std::size_t end = pos_ + 1;
        while (end < text_.size() && ident_char(text_[end])) ++end;
        cur_.kind = TokKind::ident;
        cur_.text = std::string(text_.substr(pos_, end - pos_));
        take(end - pos_);
    } else {
        throw SyntaxError(std::string("unexpected character '") + c + "'", cur_.line, cur_.column);
    }
}

Token Lexer::next() {
    Token t = cur_;
    advance();
    return t;
}

namespace {

struct Ref {
    std::string id;
    int line;
    int column;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) {}

    std::vector<TaskSpec> task_list() {
        std::vector<TaskSpec> out;
        std::set<std::string> ids;
        while (lex_.peek().kind != TokKind::end) {
            Token kw = expect_ident("'task'");
            if (kw.text != "task") fail("expected 'task'", kw);
            Token tid = expect_name("task name");
            if (!ids.insert(tid.text).second)
                throw DuplicateIdentifier(std::to_string(tid.line) + ":" + std::to_string(tid.column) + ": task '" +
                                          tid.text + "' declared twice");
            out.push_back(task_body(tid));
        }
        return out;
    }

    Scenario run() {
        while (lex_.peek().kind != TokKind::end) statement();
        resolve();
        return std::move(s_);
    }

private:
    [[noreturn]] void fail(const std::string& msg, const Token& at) { throw SyntaxError(msg, at.line, at.column); }

    Token expect_ident(const char* what) {
        Token t = lex_.next();
        if (t.kind != TokKind::ident) fail(std::string("expected ") + what, t);
        return t;
    }

    Token expect_name(const char* what) {
        Token t = lex_.next();
        if (t.kind != TokKind::ident && t.kind != TokKind::string) fail(std::string("expected ") + what, t);
        return t;
    }

    void expect_punct(const char* p) {
        Token t = lex_.next();
        if (t.kind != TokKind::punct || t.text != p) fail(std::string("expected '") + p + "'", t);
    }

    bool accept_punct(const char* p) {
        if (lex_.peek().kind == TokKind::punct && lex_.peek().text == p) {
            lex_.next();
            return true;
        }
        return false;
    }

    Token expect_number(const char* what) {
        Token t = lex_.next();
        if (t.kind != TokKind::number) fail(std::string("expected ") + what, t);
        return t;
    }

    // Number followed by an optional detached unit word.
    Token quantity(const char* what, const std::set<std::string>& units) {
        Token t = expect_number(what);
        if (t.unit.empty() && lex_.peek().kind == TokKind::ident && units.count(lex_.peek().text))
            t.unit = lex_.next().text;
        return t;
    }

    int integer(const char* what) {
        Token t = expect_number(what);
        if (!t.unit.empty() || t.number != std::floor(t.number)) fail(std::string("expected integer ") + what, t);
        return static_cast<int>(t.number);
    }

    Micros duration(const char* what) {
        Token t = quantity(what, {"ms", "us", "s"});
        if (t.unit == "us") return t.number;
        if (t.unit == "ms") return t.number * 1000.0;
        if (t.unit == "s") return t.number * 1'000'000.0;
        fail(std::string(what) + " needs a unit (ms or us)", t);
    }

    std::int64_t rate() {
        Token t = quantity("rate", {"bps", "Kbps", "Mbps", "Gbps"});
        double mult = 0;
        if (t.unit == "bps") mult = 1;
        else if (t.unit == "Kbps") mult = 1e3;
        else if (t.unit == "Mbps") mult = 1e6;
        else if (t.unit == "Gbps") mult = 1e9;
        else fail("rate needs a unit (bps, Kbps, Mbps, Gbps)", t);
        return static_cast<std::int64_t>(std::llround(t.number * mult));
    }

    void claim_entity(const Token& t) {
        if (!entities_.insert(t.text).second)
            throw DuplicateIdentifier(std::to_string(t.line) + ":" + std::to_string(t.column) + ": entity '" +
                                      t.text + "' declared twice");
    }

    void statement() {
        Token kw = expect_ident("a declaration keyword");
        if (kw.text == "node") node();
        else if (kw.text == "switch") {
            Token id = expect_ident("switch id");
            claim_entity(id);
            s_.switches.push_back({id.text});
        } else if (kw.text == "endpoint") endpoint();
        else if (kw.text == "link") link();
        else if (kw.text == "stream") stream();
        else if (kw.text == "app") app();
        else if (kw.text == "params") params();
        else fail("unknown declaration '" + kw.text + "'", kw);
    }

    void node() {
        Token id = expect_ident("node id");
        claim_entity(id);
        FogNodeSpec n{id.text};
        if (accept_punct("{")) {
            while (!accept_punct("}")) {
                Token key = expect_ident("node attribute");
                if (key.text == "cores") n.cores = integer("core count");
                else if (key.text == "class") n.fn_class = integer("class");
                else fail("unknown node attribute '" + key.text + "'", key);
            }
        }
        s_.nodes.push_back(n);
    }

    void endpoint() {
        Token id = expect_ident("endpoint id");
        claim_entity(id);
        EndpointSpec e{id.text};
        if (accept_punct("{")) {
            while (!accept_punct("}")) {
                Token key = expect_ident("endpoint attribute");
                if (key.text != "kind") fail("unknown endpoint attribute '" + key.text + "'", key);
                Token k = expect_ident("sensor or actuator");
                if (k.text == "sensor") e.kind = EndpointKind::sensor;
                else if (k.text == "actuator") e.kind = EndpointKind::actuator;
                else fail("kind must be sensor or actuator", k);
            }
        }
        s_.endpoints.push_back(e);
    }

    void link() {
        Token from = expect_ident("link source");
        expect_punct("->");
        Token to = expect_ident("link target");
        LinkSpec l{from.text, to.text, s_.params.default_link_rate};
        bool explicit_rate = false;
        if (lex_.peek().kind == TokKind::ident && lex_.peek().text == "rate") {
            lex_.next();
            l.rate_bps = rate();
            explicit_rate = true;
        }
        if (!links_.insert({l.from, l.to}).second)
            throw DuplicateIdentifier(std::to_string(from.line) + ":" + std::to_string(from.column) + ": link " +
                                      l.name() + " declared twice");
        refs_.push_back({from.text, from.line, from.column});
        refs_.push_back({to.text, to.line, to.column});
        if (!explicit_rate) default_rate_links_.push_back(s_.links.size());
        s_.links.push_back(l);
    }

    void stream() {
        Token name = expect_name("stream name");
        if (!streams_.insert(name.text).second)
            throw DuplicateIdentifier(std::to_string(name.line) + ":" + std::to_string(name.column) + ": stream '" +
                                      name.text + "' declared twice");
        StreamSpec st;
        st.id = name.text;
        bool has_deadline = false;
        std::set<std::string> seen;
        expect_punct("{");
        while (!accept_punct("}")) {
            Token key = expect_ident("stream attribute");
            if (!seen.insert(key.text).second) fail("attribute '" + key.text + "' repeated", key);
            if (key.text == "src" || key.text == "dst") {
                Token id = expect_ident("entity id");
                (key.text == "src" ? st.src : st.dst) = id.text;
                refs_.push_back({id.text, id.line, id.column});
            } else if (key.text == "size") {
                Token t = quantity("size", {"B"});
                if (!t.unit.empty() && t.unit != "B") fail("size unit must be B", t);
                if (t.number != std::floor(t.number)) fail("size must be whole bytes", t);
                st.size_bytes = static_cast<int>(t.number);
            } else if (key.text == "period") {
                st.period = duration("period");
            } else if (key.text == "deadline") {
                st.deadline = duration("deadline");
                has_deadline = true;
            } else if (key.text == "criticality") {
                st.criticality = integer("criticality");
            } else if (key.text == "min_offset") {
                st.min_offset = duration("min_offset");
            } else if (key.text == "route") {
                do {
                    Token hop = expect_ident("route entity");
                    st.route.push_back(hop.text);
                    refs_.push_back({hop.text, hop.line, hop.column});
                } while (accept_punct(","));
            } else {
                fail("unknown stream attribute '" + key.text + "'", key);
            }
        }
        for (const char* req : {"src", "dst", "size", "period", "criticality", "route"})
            if (!seen.count(req)) fail(std::string("stream '") + st.id + "' is missing '" + req + "'", name);
        if (!has_deadline) st.deadline = st.period;
        s_.streams.push_back(std::move(st));
    }

    void app() {
        Token name = expect_name("application name");
        if (!apps_.insert(name.text).second)
            throw DuplicateIdentifier(std::to_string(name.line) + ":" + std::to_string(name.column) +
                                      ": application '" + name.text + "' declared twice");
        Token on = expect_ident("'on'");
        if (on.text != "on") fail("expected 'on'", on);
        Token node = expect_ident("fog node id");
        app_refs_.push_back({node.text, node.line, node.column});

        ApplicationSpec a;
        a.id = name.text;
        a.node = node.text;
        std::set<std::string> seen;
        std::set<std::string> task_ids;
        expect_punct("{");
        while (!accept_punct("}")) {
            Token key = expect_ident("application attribute");
            if (key.text == "task") {
                Token tid = expect_name("task name");
                if (!task_ids.insert(tid.text).second)
                    throw DuplicateIdentifier(std::to_string(tid.line) + ":" + std::to_string(tid.column) +
                                              ": task '" + tid.text + "' declared twice");
                a.tasks.push_back(task_body(tid));
                continue;
            }
            if (!seen.insert(key.text).second) fail("attribute '" + key.text + "' repeated", key);
            if (key.text == "level") a.level = integer("level");
            else if (key.text == "tasks") a.task_count = integer("task count");
            else if (key.text == "period") a.period = duration("period");
            else if (key.text == "util") {
                Token t = expect_number("utilization");
                if (!t.unit.empty()) fail("utilization is a plain fraction", t);
                a.utilization = t.number;
            } else fail("unknown application attribute '" + key.text + "'", key);
        }
        for (const char* req : {"level", "period", "util"})
            if (!seen.count(req)) fail(std::string("application '") + a.id + "' is missing '" + req + "'", name);
        if (!seen.count("tasks")) a.task_count = a.tasks.empty() ? 1 : static_cast<int>(a.tasks.size());
        s_.applications.push_back(std::move(a));
    }

    TaskSpec task_body(const Token& tid) {
        TaskSpec t;
        t.id = tid.text;
        bool has_wcet = false, has_period = false, has_deadline = false;
        while (lex_.peek().kind == TokKind::ident) {
            const std::string& k = lex_.peek().text;
            if (k == "wcet" && !has_wcet) {
                lex_.next();
                t.wcet = duration("wcet");
                has_wcet = true;
            } else if (k == "period" && !has_period) {
                lex_.next();
                t.period = duration("period");
                has_period = true;
            } else if (k == "deadline" && !has_deadline) {
                lex_.next();
                t.deadline = duration("deadline");
                has_deadline = true;
            } else {
                break;
            }
        }
        if (!has_wcet || !has_period) fail("task '" + t.id + "' needs wcet and period", tid);
        if (!has_deadline) t.deadline = t.period;
        return t;
    }

    void params() {
        expect_punct("{");
        while (!accept_punct("}")) {
            Token key = expect_ident("parameter name");
            if (key.text == "d_hop") s_.params.d_hop = duration("d_hop");
            else if (key.text == "link_rate") {
                s_.params.default_link_rate = rate();
                for (std::size_t i : default_rate_links_) s_.links[i].rate_bps = s_.params.default_link_rate;
            } else if (key.text == "weight_base") {
                Token t = expect_number("weight_base");
                s_.params.weight_base = t.number;
            } else if (key.text == "seed") {
                Token t = expect_number("seed");
                if (t.number < 0 || t.number != std::floor(t.number)) fail("seed must be a non-negative integer", t);
                s_.params.solver_seed = static_cast<std::uint64_t>(t.number);
            } else fail("unknown parameter '" + key.text + "'", key);
        }
    }

    void resolve() {
        for (const auto& r : refs_)
            if (!entities_.count(r.id))
                throw UnknownReference(std::to_string(r.line) + ":" + std::to_string(r.column) + ": '" + r.id +
                                       "' is not declared");
        for (const auto& r : app_refs_)
            if (!s_.find_node(r.id))
                throw UnknownReference(std::to_string(r.line) + ":" + std::to_string(r.column) + ": '" + r.id +
                                       "' is not a declared fog node");
    }

    Lexer lex_;
    Scenario s_;
    std::set<std::string> entities_;
    std::set<std::string> streams_;
    std::set<std::string> apps_;
    std::set<std::pair<std::string, std::string>> links_;
    std::vector<std::size_t> default_rate_links_;
    std::vector<Ref> refs_;
    std::vector<Ref> app_refs_;
};

}  // namespace

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace dsl

Scenario parse_scenario(std::string_view text) { return dsl::Parser(text).run(); }

std::vector<TaskSpec> parse_task_list(std::string_view text) { return dsl::Parser(text).task_list(); }

namespace {

std::string rate_text(std::int64_t bps) {
    if (bps % 1'000'000 == 0) return std::to_string(bps / 1'000'000) + "Mbps";
    return std::to_string(bps) + "bps";
}

std::string us(Micros v) { return dsl::format_number(v) + "us"; }

}  // namespace

std::string print_scenario(const Scenario& s) {
    std::ostringstream o;
    const auto& p = s.params;
    o << "params { d_hop " << us(p.d_hop) << " link_rate " << rate_text(p.default_link_rate) << " weight_base "
      << dsl::format_number(p.weight_base) << " seed " << p.solver_seed << " }\n";
    for (const auto& n : s.nodes) o << "node " << n.id << " { cores " << n.cores << " class " << n.fn_class << " }\n";
    for (const auto& sw : s.switches) o << "switch " << sw.id << "\n";
    for (const auto& e : s.endpoints)
        o << "endpoint " << e.id << " { kind " << (e.kind == EndpointKind::sensor ? "sensor" : "actuator") << " }\n";
    for (const auto& l : s.links) o << "link " << l.from << " -> " << l.to << " rate " << rate_text(l.rate_bps) << "\n";
    for (const auto& st : s.streams) {
        o << "stream " << dsl::quote(st.id) << " { src " << st.src << " dst " << st.dst << " size " << st.size_bytes
          << "B period " << us(st.period) << " deadline " << us(st.deadline) << " criticality " << st.criticality
          << " route ";
        for (std::size_t i = 0; i < st.route.size(); ++i) o << (i ? "," : "") << st.route[i];
        if (st.min_offset != 0) o << " min_offset " << us(st.min_offset);
        o << " }\n";
    }
    for (const auto& a : s.applications) {
        o << "app " << dsl::quote(a.id) << " on " << a.node << " { level " << a.level << " tasks " << a.task_count
          << " period " << us(a.period) << " util " << dsl::format_number(a.utilization);
        for (const auto& t : a.tasks)
            o << "\n  task " << dsl::quote(t.id) << " wcet " << us(t.wcet) << " period " << us(t.period)
              << " deadline " << us(t.deadline);
        o << " }\n";
    }
    return o.str();
}

}  // namespace fogweaver
