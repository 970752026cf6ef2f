#include "flsim/st_interp.hpp"

#include <charconv>
#include <set>
#include <utility>

namespace flsim::st {

namespace {

enum class TokKind {
    word,      // identifier or keyword
    int_lit,
    real_lit,
    assign,    // :=
    colon,
    semicolon,
    comma,
    lparen,
    rparen,
    lbracket,
    rbracket,
    dotdot,
    op_eq,
    op_ne,
    op_lt,
    op_le,
    op_gt,
    op_ge,
    op_plus,
    op_minus,
    op_star,
    op_slash,
    eof,
};

struct Token {
    TokKind kind = TokKind::eof;
    std::string text;
    long long ival = 0;
    double rval = 0.0;
    int line = 1;
    int column = 1;
};

[[noreturn]] void unsupported(const std::string& what, const Token& tok) {
    throw UnsupportedConstructError(what, tok.text.empty() ? "<end of input>" : tok.text, tok.line,
                                    tok.column);
}

const std::set<std::string>& reserved_outside_subset() {
    static const std::set<std::string> words{
        "WHILE",  "REPEAT", "UNTIL",    "CASE",   "RETURN",  "EXIT",    "CONTINUE",
        "GOTO",   "MOD",    "POINTER",  "REF_TO", "STRUCT",  "UNION",   "STRING",
        "WSTRING", "TIME",  "FUNCTION", "METHOD", "PROGRAM", "ACTION",  "AT",
        "RETAIN", "PERSISTENT",
    };
    return words;
}

class Lexer {
  public:
    explicit Lexer(const std::string& src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space_and_comments();
            Token tok;
            tok.line = line_;
            tok.column = column_;
            if (pos_ >= src_.size()) {
                tok.kind = TokKind::eof;
                out.push_back(tok);
                return out;
            }
            const char c = src_[pos_];
            if (is_word_start(c)) {
                lex_word(tok);
            } else if (c >= '0' && c <= '9') {
                lex_number(tok);
            } else {
                lex_punct(tok);
            }
            out.push_back(std::move(tok));
        }
    }

  private:
    static bool is_word_start(char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
    }
    static bool is_word_char(char c) { return is_word_start(c) || (c >= '0' && c <= '9'); }

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_space_and_comments() {
        for (;;) {
            while (pos_ < src_.size() &&
                   (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\r' ||
                    src_[pos_] == '\n')) {
                advance();
            }
            if (peek() == '(' && peek(1) == '*') {
                Token open;
                open.text = "(*";
                open.line = line_;
                open.column = column_;
                advance();
                advance();
                for (;;) {
                    if (pos_ >= src_.size()) unsupported("unterminated comment", open);
                    if (peek() == '*' && peek(1) == ')') {
                        advance();
                        advance();
                        break;
                    }
                    advance();
                }
                continue;
            }
            return;
        }
    }

    void lex_word(Token& tok) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && is_word_char(src_[pos_])) advance();
        tok.kind = TokKind::word;
        tok.text = src_.substr(start, pos_ - start);
        if (reserved_outside_subset().count(tok.text)) {
            unsupported("keyword outside the supported subset", tok);
        }
    }

    void lex_number(Token& tok) {
        std::size_t start = pos_;
        bool real = false;
        while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') advance();
        // A '.' starts a fraction only when not the '..' range operator.
        if (peek() == '.' && peek(1) != '.') {
            real = true;
            advance();
            while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') advance();
        }
        if (peek() == 'e' || peek() == 'E') {
            std::size_t mark = pos_;
            advance();
            if (peek() == '+' || peek() == '-') advance();
            if (peek() >= '0' && peek() <= '9') {
                real = true;
                while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') advance();
            } else {
                // Not an exponent after all (e.g. an identifier follows).
                while (pos_ > mark) {
                    --pos_;
                    --column_;
                }
            }
        }
        tok.text = src_.substr(start, pos_ - start);
        if (real) {
            tok.kind = TokKind::real_lit;
            const char* first = tok.text.data();
            const char* last = first + tok.text.size();
            auto [ptr, ec] = std::from_chars(first, last, tok.rval);
            if (ec != std::errc() || ptr != last) unsupported("malformed real literal", tok);
        } else {
            tok.kind = TokKind::int_lit;
            const char* first = tok.text.data();
            const char* last = first + tok.text.size();
            auto [ptr, ec] = std::from_chars(first, last, tok.ival);
            if (ec != std::errc() || ptr != last) unsupported("malformed integer literal", tok);
        }
    }

    void lex_punct(Token& tok) {
        const char c = peek();
        auto two = [&](TokKind kind, const char* text) {
            tok.kind = kind;
            tok.text = text;
            advance();
            advance();
        };
        auto one = [&](TokKind kind) {
            tok.kind = kind;
            tok.text = std::string(1, c);
            advance();
        };
        switch (c) {
            case ':':
                if (peek(1) == '=') {
                    two(TokKind::assign, ":=");
                } else {
                    one(TokKind::colon);
                }
                return;
            case ';': one(TokKind::semicolon); return;
            case ',': one(TokKind::comma); return;
            case '(': one(TokKind::lparen); return;
            case ')': one(TokKind::rparen); return;
            case '[': one(TokKind::lbracket); return;
            case ']': one(TokKind::rbracket); return;
            case '.':
                if (peek(1) == '.') {
                    two(TokKind::dotdot, "..");
                    return;
                }
                break;
            case '=': one(TokKind::op_eq); return;
            case '<':
                if (peek(1) == '>') {
                    two(TokKind::op_ne, "<>");
                } else if (peek(1) == '=') {
                    two(TokKind::op_le, "<=");
                } else {
                    one(TokKind::op_lt);
                }
                return;
            case '>':
                if (peek(1) == '=') {
                    two(TokKind::op_ge, ">=");
                } else {
                    one(TokKind::op_gt);
                }
                return;
            case '+': one(TokKind::op_plus); return;
            case '-': one(TokKind::op_minus); return;
            case '*': one(TokKind::op_star); return;
            case '/': one(TokKind::op_slash); return;
            default: break;
        }
        tok.text = std::string(1, c);
        unsupported("character outside the supported subset", tok);
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

class Parser {
  public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Unit run() {
        Unit unit;
        while (cur().kind != TokKind::eof) {
            expect_word("FUNCTION_BLOCK");
            unit.blocks.push_back(parse_block());
        }
        return unit;
    }

  private:
    const Token& cur() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }

    bool at(TokKind kind) const { return cur().kind == kind; }
    bool at_word(const std::string& w) const {
        return cur().kind == TokKind::word && cur().text == w;
    }

    void expect(TokKind kind, const char* what) {
        if (!at(kind)) unsupported(std::string("expected ") + what, cur());
        ++pos_;
    }

    void expect_word(const std::string& w) {
        if (!at_word(w)) unsupported("expected " + w, cur());
        ++pos_;
    }

    std::string expect_name() {
        if (cur().kind != TokKind::word) unsupported("expected a name", cur());
        return next().text;
    }

    Block parse_block() {
        Block block;
        block.name = expect_name();
        for (;;) {
            if (at_word("VAR_INPUT")) {
                ++pos_;
                parse_decls(block.inputs, false);
            } else if (at_word("VAR_OUTPUT")) {
                ++pos_;
                parse_decls(block.outputs, false);
            } else if (at_word("VAR")) {
                ++pos_;
                bool constant = false;
                if (at_word("CONSTANT")) {
                    ++pos_;
                    constant = true;
                }
                parse_decls(constant ? block.constants : block.locals, constant);
            } else {
                break;
            }
        }
        block.body = parse_statements({"END_FUNCTION_BLOCK"});
        expect_word("END_FUNCTION_BLOCK");
        return block;
    }

    void parse_decls(std::vector<Decl>& out, bool constants) {
        while (!at_word("END_VAR")) {
            std::vector<Token> names;
            names.push_back(cur());
            if (cur().kind != TokKind::word) unsupported("expected a variable name", cur());
            ++pos_;
            while (at(TokKind::comma)) {
                ++pos_;
                if (cur().kind != TokKind::word) unsupported("expected a variable name", cur());
                names.push_back(next());
            }
            expect(TokKind::colon, "':'");

            std::vector<Dim> dims;
            if (at_word("ARRAY")) {
                ++pos_;
                expect(TokKind::lbracket, "'['");
                for (;;) {
                    Dim d;
                    d.lo = parse_bound();
                    expect(TokKind::dotdot, "'..'");
                    d.hi = parse_bound();
                    if (d.hi < d.lo) unsupported("empty array dimension", cur());
                    dims.push_back(d);
                    if (at(TokKind::comma)) {
                        ++pos_;
                        continue;
                    }
                    break;
                }
                expect(TokKind::rbracket, "']'");
                expect_word("OF");
            }
            Type type = parse_scalar_type();

            std::vector<Value> init;
            if (at(TokKind::assign)) {
                ++pos_;
                init = parse_initializer(type, dims);
            }
            expect(TokKind::semicolon, "';'");

            for (const Token& name : names) {
                Decl d;
                d.name = name.text;
                d.type = type;
                d.dims = dims;
                d.init = init;
                d.line = name.line;
                d.column = name.column;
                if (constants && init.empty()) {
                    unsupported("constant declared without a value", name);
                }
                out.push_back(std::move(d));
            }
        }
        expect_word("END_VAR");
    }

    long long parse_bound() {
        bool neg = false;
        if (at(TokKind::op_minus)) {
            ++pos_;
            neg = true;
        }
        if (!at(TokKind::int_lit)) unsupported("expected an integer bound", cur());
        long long v = next().ival;
        return neg ? -v : v;
    }

    Type parse_scalar_type() {
        if (at_word("BOOL")) {
            ++pos_;
            return Type::boolean;
        }
        if (at_word("INT") || at_word("DINT")) {
            ++pos_;
            return Type::integer;
        }
        if (at_word("REAL") || at_word("LREAL")) {
            ++pos_;
            return Type::real;
        }
        unsupported("type outside the supported subset", cur());
    }

    Value parse_init_value(Type type) {
        const Token at_tok = cur();
        if (at_word("TRUE") || at_word("FALSE")) {
            bool v = next().text == "TRUE";
            if (type != Type::boolean) unsupported("boolean value for non-BOOL variable", at_tok);
            return Value::of_bool(v);
        }
        bool neg = false;
        if (at(TokKind::op_minus)) {
            ++pos_;
            neg = true;
        }
        if (at(TokKind::int_lit)) {
            long long v = next().ival;
            if (neg) v = -v;
            if (type == Type::real) return Value::of_real(static_cast<double>(v));
            if (type != Type::integer) unsupported("integer value for BOOL variable", at_tok);
            return Value::of_int(v);
        }
        if (at(TokKind::real_lit)) {
            double v = next().rval;
            if (neg) v = -v;
            if (type != Type::real) unsupported("real value for non-REAL variable", at_tok);
            return Value::of_real(v);
        }
        unsupported("expected a literal initializer", cur());
    }

    std::vector<Value> parse_initializer(Type type, const std::vector<Dim>& dims) {
        std::vector<Value> init;
        if (dims.empty()) {
            init.push_back(parse_init_value(type));
            return init;
        }
        long long total = 1;
        for (const Dim& d : dims) total *= d.extent();
        const Token open = cur();
        expect(TokKind::lbracket, "'['");
        if (!at(TokKind::rbracket)) {
            init.push_back(parse_init_value(type));
            while (at(TokKind::comma)) {
                ++pos_;
                init.push_back(parse_init_value(type));
            }
        }
        expect(TokKind::rbracket, "']'");
        if (static_cast<long long>(init.size()) != total) {
            unsupported("array initializer does not match the declared extent", open);
        }
        return init;
    }

    std::vector<Stmt> parse_statements(const std::set<std::string>& stop_words) {
        std::vector<Stmt> out;
        for (;;) {
            if (cur().kind == TokKind::eof) unsupported("unexpected end of input", cur());
            if (cur().kind == TokKind::word && stop_words.count(cur().text)) return out;
            out.push_back(parse_statement());
        }
    }

    Stmt parse_statement() {
        if (at_word("IF")) return parse_if();
        if (at_word("FOR")) return parse_for();
        if (cur().kind != TokKind::word) unsupported("expected a statement", cur());

        Stmt s;
        s.kind = Stmt::Kind::assign;
        s.line = cur().line;
        s.column = cur().column;
        s.target = parse_variable();
        expect(TokKind::assign, "':='");
        s.value = parse_expr();
        expect(TokKind::semicolon, "';'");
        return s;
    }

    Stmt parse_if() {
        Stmt s;
        s.kind = Stmt::Kind::branch;
        s.line = cur().line;
        s.column = cur().column;
        expect_word("IF");
        s.conditions.push_back(parse_expr());
        expect_word("THEN");
        s.arms.push_back(parse_statements({"ELSIF", "ELSE", "END_IF"}));
        while (at_word("ELSIF")) {
            ++pos_;
            s.conditions.push_back(parse_expr());
            expect_word("THEN");
            s.arms.push_back(parse_statements({"ELSIF", "ELSE", "END_IF"}));
        }
        if (at_word("ELSE")) {
            ++pos_;
            s.else_body = parse_statements({"END_IF"});
        }
        expect_word("END_IF");
        expect(TokKind::semicolon, "';'");
        return s;
    }

    Stmt parse_for() {
        Stmt s;
        s.kind = Stmt::Kind::loop;
        s.line = cur().line;
        s.column = cur().column;
        expect_word("FOR");
        s.loop_var = expect_name();
        expect(TokKind::assign, "':='");
        s.from = parse_expr();
        expect_word("TO");
        s.to = parse_expr();
        if (at_word("BY")) {
            ++pos_;
            s.has_by = true;
            s.by = parse_expr();
        }
        expect_word("DO");
        s.body = parse_statements({"END_FOR"});
        expect_word("END_FOR");
        expect(TokKind::semicolon, "';'");
        return s;
    }

    Expr parse_variable() {
        Expr e;
        e.kind = Expr::Kind::variable;
        e.line = cur().line;
        e.column = cur().column;
        e.name = expect_name();
        if (at(TokKind::lbracket)) {
            ++pos_;
            e.indices.push_back(parse_expr());
            while (at(TokKind::comma)) {
                ++pos_;
                e.indices.push_back(parse_expr());
            }
            expect(TokKind::rbracket, "']'");
        }
        return e;
    }

    Expr binary(Expr::Op op, Expr lhs, Expr rhs, int line, int column) {
        Expr e;
        e.kind = Expr::Kind::binary;
        e.op = op;
        e.line = line;
        e.column = column;
        e.operands.push_back(std::move(lhs));
        e.operands.push_back(std::move(rhs));
        return e;
    }

    Expr parse_expr() { return parse_or(); }

    Expr parse_or() {
        Expr lhs = parse_xor();
        while (at_word("OR")) {
            const Token& tok = next();
            lhs = binary(Expr::Op::logic_or, std::move(lhs), parse_xor(), tok.line, tok.column);
        }
        return lhs;
    }

    Expr parse_xor() {
        Expr lhs = parse_and();
        while (at_word("XOR")) {
            const Token& tok = next();
            lhs = binary(Expr::Op::logic_xor, std::move(lhs), parse_and(), tok.line, tok.column);
        }
        return lhs;
    }

    Expr parse_and() {
        Expr lhs = parse_equality();
        while (at_word("AND")) {
            const Token& tok = next();
            lhs = binary(Expr::Op::logic_and, std::move(lhs), parse_equality(), tok.line,
                         tok.column);
        }
        return lhs;
    }

    Expr parse_equality() {
        Expr lhs = parse_relational();
        while (at(TokKind::op_eq) || at(TokKind::op_ne)) {
            const Token& tok = next();
            Expr::Op op = tok.kind == TokKind::op_eq ? Expr::Op::eq : Expr::Op::ne;
            lhs = binary(op, std::move(lhs), parse_relational(), tok.line, tok.column);
        }
        return lhs;
    }

    Expr parse_relational() {
        Expr lhs = parse_additive();
        while (at(TokKind::op_lt) || at(TokKind::op_le) || at(TokKind::op_gt) ||
               at(TokKind::op_ge)) {
            const Token& tok = next();
            Expr::Op op = Expr::Op::lt;
            if (tok.kind == TokKind::op_le) op = Expr::Op::le;
            if (tok.kind == TokKind::op_gt) op = Expr::Op::gt;
            if (tok.kind == TokKind::op_ge) op = Expr::Op::ge;
            lhs = binary(op, std::move(lhs), parse_additive(), tok.line, tok.column);
        }
        return lhs;
    }

    Expr parse_additive() {
        Expr lhs = parse_multiplicative();
        while (at(TokKind::op_plus) || at(TokKind::op_minus)) {
            const Token& tok = next();
            Expr::Op op = tok.kind == TokKind::op_plus ? Expr::Op::add : Expr::Op::sub;
            lhs = binary(op, std::move(lhs), parse_multiplicative(), tok.line, tok.column);
        }
        return lhs;
    }

    Expr parse_multiplicative() {
        Expr lhs = parse_unary();
        while (at(TokKind::op_star) || at(TokKind::op_slash)) {
            const Token& tok = next();
            Expr::Op op = tok.kind == TokKind::op_star ? Expr::Op::mul : Expr::Op::div;
            lhs = binary(op, std::move(lhs), parse_unary(), tok.line, tok.column);
        }
        return lhs;
    }

    Expr parse_unary() {
        if (at_word("NOT") || at(TokKind::op_minus)) {
            const Token& tok = next();
            Expr e;
            e.kind = Expr::Kind::unary;
            e.op = tok.kind == TokKind::op_minus ? Expr::Op::negate : Expr::Op::logic_not;
            e.line = tok.line;
            e.column = tok.column;
            e.operands.push_back(parse_unary());
            return e;
        }
        return parse_primary();
    }

    Expr parse_primary() {
        Expr e;
        e.line = cur().line;
        e.column = cur().column;
        if (at(TokKind::lparen)) {
            ++pos_;
            e = parse_expr();
            expect(TokKind::rparen, "')'");
            return e;
        }
        if (at(TokKind::int_lit)) {
            e.kind = Expr::Kind::literal;
            e.literal = Value::of_int(next().ival);
            return e;
        }
        if (at(TokKind::real_lit)) {
            e.kind = Expr::Kind::literal;
            e.literal = Value::of_real(next().rval);
            return e;
        }
        if (at_word("TRUE") || at_word("FALSE")) {
            e.kind = Expr::Kind::literal;
            e.literal = Value::of_bool(next().text == "TRUE");
            return e;
        }
        if (cur().kind == TokKind::word) return parse_variable();
        unsupported("expected an expression", cur());
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

std::string type_name(Type t) {
    switch (t) {
        case Type::boolean: return "BOOL";
        case Type::integer: return "INT";
        case Type::real: return "REAL";
    }
    return "?";
}

std::string at_pos(int line, int column) {
    return " at " + std::to_string(line) + ":" + std::to_string(column);
}

Value default_value(Type t) {
    switch (t) {
        case Type::boolean: return Value::of_bool(false);
        case Type::integer: return Value::of_int(0);
        case Type::real: return Value::of_real(0.0);
    }
    return Value::of_int(0);
}

class Machine {
  public:
    explicit Machine(Env& env) : env_(env) {}

    void run(const std::vector<Stmt>& body) {
        for (const Stmt& s : body) exec(s);
    }

  private:
    void exec(const Stmt& s) {
        switch (s.kind) {
            case Stmt::Kind::assign: {
                Value v = eval(s.value);
                store(s.target, v);
                return;
            }
            case Stmt::Kind::branch: {
                for (std::size_t i = 0; i < s.conditions.size(); ++i) {
                    if (as_bool(eval(s.conditions[i]), s.conditions[i])) {
                        run(s.arms[i]);
                        return;
                    }
                }
                run(s.else_body);
                return;
            }
            case Stmt::Kind::loop: {
                Variable& var = find(s.loop_var, s.line, s.column);
                if (var.is_array() || var.type != Type::integer) {
                    throw RuntimeError("FOR variable '" + s.loop_var + "' must be a scalar INT" +
                                       at_pos(s.line, s.column));
                }
                if (var.constant) {
                    throw RuntimeError("FOR variable '" + s.loop_var + "' is constant" +
                                       at_pos(s.line, s.column));
                }
                const long long from = as_int(eval(s.from), s.from);
                const long long to = as_int(eval(s.to), s.to);
                const long long by = s.has_by ? as_int(eval(s.by), s.by) : 1;
                if (by == 0) {
                    throw RuntimeError("FOR step of zero" + at_pos(s.line, s.column));
                }
                for (long long v = from; by > 0 ? v <= to : v >= to; v += by) {
                    var.data[0] = Value::of_int(v);
                    run(s.body);
                }
                return;
            }
        }
    }

    Variable& find(const std::string& name, int line, int column) {
        auto it = env_.find(name);
        if (it == env_.end()) {
            throw RuntimeError("unknown variable '" + name + "'" + at_pos(line, column));
        }
        return it->second;
    }

    std::size_t element_index(const Variable& var, const Expr& ref) {
        if (var.dims.size() != ref.indices.size()) {
            throw RuntimeError("'" + ref.name + "' expects " + std::to_string(var.dims.size()) +
                               " subscripts, got " + std::to_string(ref.indices.size()) +
                               at_pos(ref.line, ref.column));
        }
        std::size_t linear = 0;
        for (std::size_t k = 0; k < var.dims.size(); ++k) {
            const long long i = as_int(eval(ref.indices[k]), ref.indices[k]);
            const Dim& d = var.dims[k];
            if (i < d.lo || i > d.hi) {
                throw RuntimeError("index " + std::to_string(i) + " outside [" +
                                   std::to_string(d.lo) + ", " + std::to_string(d.hi) + "] of '" +
                                   ref.name + "'" + at_pos(ref.line, ref.column));
            }
            linear = linear * static_cast<std::size_t>(d.extent()) +
                     static_cast<std::size_t>(i - d.lo);
        }
        return linear;
    }

    void store(const Expr& target, const Value& v) {
        Variable& var = find(target.name, target.line, target.column);
        if (var.constant) {
            throw RuntimeError("assignment to constant '" + target.name + "'" +
                               at_pos(target.line, target.column));
        }
        const std::size_t at = element_index(var, target);
        Value& slot = var.data[at];
        switch (var.type) {
            case Type::boolean:
                if (v.type != Type::boolean) {
                    throw RuntimeError("cannot assign " + type_name(v.type) + " to BOOL '" +
                                       target.name + "'" + at_pos(target.line, target.column));
                }
                slot = v;
                return;
            case Type::integer:
                if (v.type != Type::integer) {
                    throw RuntimeError("cannot assign " + type_name(v.type) + " to INT '" +
                                       target.name + "'" + at_pos(target.line, target.column));
                }
                slot = v;
                return;
            case Type::real:
                if (v.type == Type::real) {
                    slot = v;
                } else if (v.type == Type::integer) {
                    slot = Value::of_real(static_cast<double>(v.i));
                } else {
                    throw RuntimeError("cannot assign BOOL to REAL '" + target.name + "'" +
                                       at_pos(target.line, target.column));
                }
                return;
        }
    }

    bool as_bool(const Value& v, const Expr& where) {
        if (v.type != Type::boolean) {
            throw RuntimeError("expected BOOL, got " + type_name(v.type) +
                               at_pos(where.line, where.column));
        }
        return v.b;
    }

    long long as_int(const Value& v, const Expr& where) {
        if (v.type != Type::integer) {
            throw RuntimeError("expected INT, got " + type_name(v.type) +
                               at_pos(where.line, where.column));
        }
        return v.i;
    }

    static bool numeric(const Value& v) { return v.type != Type::boolean; }

    static double widen(const Value& v) {
        return v.type == Type::real ? v.r : static_cast<double>(v.i);
    }

    Value eval(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::literal: return e.literal;
            case Expr::Kind::variable: {
                Variable& var = find(e.name, e.line, e.column);
                if (var.is_array() && e.indices.empty()) {
                    throw RuntimeError("array '" + e.name + "' used without subscripts" +
                                       at_pos(e.line, e.column));
                }
                return var.data[element_index(var, e)];
            }
            case Expr::Kind::unary: {
                Value v = eval(e.operands[0]);
                if (e.op == Expr::Op::logic_not) {
                    return Value::of_bool(!as_bool(v, e.operands[0]));
                }
                if (v.type == Type::integer) return Value::of_int(-v.i);
                if (v.type == Type::real) return Value::of_real(-v.r);
                throw RuntimeError("cannot negate BOOL" + at_pos(e.line, e.column));
            }
            case Expr::Kind::binary: break;
        }

        const Value lhs = eval(e.operands[0]);
        const Value rhs = eval(e.operands[1]);
        auto require_numeric = [&] {
            if (!numeric(lhs) || !numeric(rhs)) {
                throw RuntimeError("arithmetic on BOOL operands" + at_pos(e.line, e.column));
            }
        };
        auto both_int = [&] { return lhs.type == Type::integer && rhs.type == Type::integer; };

        switch (e.op) {
            case Expr::Op::logic_or:
                return Value::of_bool(as_bool(lhs, e.operands[0]) | as_bool(rhs, e.operands[1]));
            case Expr::Op::logic_xor:
                return Value::of_bool(as_bool(lhs, e.operands[0]) ^ as_bool(rhs, e.operands[1]));
            case Expr::Op::logic_and:
                return Value::of_bool(as_bool(lhs, e.operands[0]) & as_bool(rhs, e.operands[1]));
            case Expr::Op::eq:
            case Expr::Op::ne: {
                bool equal;
                if (lhs.type == Type::boolean && rhs.type == Type::boolean) {
                    equal = lhs.b == rhs.b;
                } else if (numeric(lhs) && numeric(rhs)) {
                    equal = both_int() ? lhs.i == rhs.i : widen(lhs) == widen(rhs);
                } else {
                    throw RuntimeError("comparison between BOOL and a number" +
                                       at_pos(e.line, e.column));
                }
                return Value::of_bool(e.op == Expr::Op::eq ? equal : !equal);
            }
            case Expr::Op::lt:
            case Expr::Op::le:
            case Expr::Op::gt:
            case Expr::Op::ge: {
                require_numeric();
                bool result;
                if (both_int()) {
                    result = e.op == Expr::Op::lt   ? lhs.i < rhs.i
                             : e.op == Expr::Op::le ? lhs.i <= rhs.i
                             : e.op == Expr::Op::gt ? lhs.i > rhs.i
                                                    : lhs.i >= rhs.i;
                } else {
                    const double a = widen(lhs), b = widen(rhs);
                    result = e.op == Expr::Op::lt   ? a < b
                             : e.op == Expr::Op::le ? a <= b
                             : e.op == Expr::Op::gt ? a > b
                                                    : a >= b;
                }
                return Value::of_bool(result);
            }
            case Expr::Op::add:
                require_numeric();
                if (both_int()) return Value::of_int(lhs.i + rhs.i);
                return Value::of_real(widen(lhs) + widen(rhs));
            case Expr::Op::sub:
                require_numeric();
                if (both_int()) return Value::of_int(lhs.i - rhs.i);
                return Value::of_real(widen(lhs) - widen(rhs));
            case Expr::Op::mul:
                require_numeric();
                if (both_int()) return Value::of_int(lhs.i * rhs.i);
                return Value::of_real(widen(lhs) * widen(rhs));
            case Expr::Op::div:
                require_numeric();
                if (both_int()) {
                    if (rhs.i == 0) {
                        throw RuntimeError("integer division by zero" + at_pos(e.line, e.column));
                    }
                    return Value::of_int(lhs.i / rhs.i);
                }
                return Value::of_real(widen(lhs) / widen(rhs));
            case Expr::Op::negate:
            case Expr::Op::logic_not: break;
        }
        throw RuntimeError("malformed expression" + at_pos(e.line, e.column));
    }

    Env& env_;
};

void declare(Env& env, const std::vector<Decl>& decls, bool constant) {
    for (const Decl& d : decls) {
        if (env.count(d.name)) {
            throw RuntimeError("duplicate declaration of '" + d.name + "'" +
                               at_pos(d.line, d.column));
        }
        Variable var;
        var.type = d.type;
        var.dims = d.dims;
        var.constant = constant;
        std::size_t total = 1;
        for (const Dim& dim : d.dims) total *= static_cast<std::size_t>(dim.extent());
        if (d.init.empty()) {
            var.data.assign(total, default_value(d.type));
        } else {
            var.data = d.init;
        }
        env.emplace(d.name, std::move(var));
    }
}

}  // namespace

const Block* Unit::find(const std::string& name) const {
    for (const Block& b : blocks) {
        if (b.name == name) return &b;
    }
    return nullptr;
}

Unit parse(const std::string& source) { return Parser(Lexer(source).run()).run(); }

Env invoke(const Unit& unit, const std::string& block, const Env& inputs) {
    const Block* fb = unit.find(block);
    if (!fb) throw RuntimeError("unknown function block '" + block + "'");

    Env env;
    declare(env, fb->constants, true);
    declare(env, fb->inputs, false);
    declare(env, fb->outputs, false);
    declare(env, fb->locals, false);

    for (const auto& [name, value] : inputs) {
        bool is_input = false;
        for (const Decl& d : fb->inputs) is_input = is_input || d.name == name;
        if (!is_input) {
            throw RuntimeError("'" + name + "' is not an input of block '" + block + "'");
        }
        Variable& slot = env.at(name);
        if (value.dims.size() != slot.dims.size()) {
            throw RuntimeError("input '" + name + "' has the wrong rank");
        }
        for (std::size_t k = 0; k < slot.dims.size(); ++k) {
            if (value.dims[k].extent() != slot.dims[k].extent()) {
                throw RuntimeError("input '" + name + "' has the wrong extent in dimension " +
                                   std::to_string(k));
            }
        }
        if (value.data.size() != slot.data.size()) {
            throw RuntimeError("input '" + name + "' carries the wrong element count");
        }
        for (std::size_t k = 0; k < value.data.size(); ++k) {
            const Value& v = value.data[k];
            if (v.type == slot.type) {
                slot.data[k] = v;
            } else if (slot.type == Type::real && v.type == Type::integer) {
                slot.data[k] = Value::of_real(static_cast<double>(v.i));
            } else {
                throw RuntimeError("input '" + name + "' holds " + type_name(v.type) +
                                   " values for a " + type_name(slot.type) + " variable");
            }
        }
    }

    Machine(env).run(fb->body);

    Env out;
    for (const Decl& d : fb->outputs) out.emplace(d.name, env.at(d.name));
    return out;
}

}  // namespace flsim::st
