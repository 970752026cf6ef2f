#pragma once

#include <map>
#include <string>
#include <vector>

#include "flsim/errors.hpp"

namespace flsim::st {

// Raised by the lexer/parser for anything outside the supported language
// subset, carrying the offending token and its position.
class UnsupportedConstructError : public Error {
  public:
    UnsupportedConstructError(const std::string& what, std::string token, int line, int column)
        : Error(what + " at " + std::to_string(line) + ":" + std::to_string(column) + " near '" +
                token + "'"),
          token(std::move(token)),
          line(line),
          column(column) {}

    std::string token;
    int line;
    int column;
};

// Raised during execution: type mismatches, bad indices, writes to constants,
// missing blocks or inputs.
class RuntimeError : public Error {
    using Error::Error;
};

enum class Type { boolean, integer, real };

struct Value {
    Type type = Type::integer;
    bool b = false;
    long long i = 0;
    double r = 0.0;

    static Value of_bool(bool v) {
        Value x;
        x.type = Type::boolean;
        x.b = v;
        return x;
    }
    static Value of_int(long long v) {
        Value x;
        x.type = Type::integer;
        x.i = v;
        return x;
    }
    static Value of_real(double v) {
        Value x;
        x.type = Type::real;
        x.r = v;
        return x;
    }
};

struct Dim {
    long long lo = 0;
    long long hi = 0;
    long long extent() const { return hi - lo + 1; }
};

// Runtime storage for one declared name; scalars keep data.size() == 1.
struct Variable {
    Type type = Type::integer;
    std::vector<Dim> dims;
    std::vector<Value> data;
    bool constant = false;

    bool is_array() const { return !dims.empty(); }
};

using Env = std::map<std::string, Variable>;

struct Expr {
    enum class Kind { literal, variable, unary, binary };
    enum class Op {
        logic_or,
        logic_xor,
        logic_and,
        eq,
        ne,
        lt,
        le,
        gt,
        ge,
        add,
        sub,
        mul,
        div,
        negate,
        logic_not,
    };

    Kind kind = Kind::literal;
    Value literal;
    std::string name;           // kind == variable
    std::vector<Expr> indices;  // subscripts, empty for plain names
    Op op = Op::add;
    std::vector<Expr> operands;  // unary: 1, binary: 2
    int line = 0;
    int column = 0;
};

struct Stmt {
    enum class Kind { assign, branch, loop };

    Kind kind = Kind::assign;
    Expr target;  // assign
    Expr value;
    std::vector<Expr> conditions;  // branch: IF / ELSIF arms
    std::vector<std::vector<Stmt>> arms;
    std::vector<Stmt> else_body;
    std::string loop_var;  // loop
    Expr from, to, by;
    bool has_by = false;
    std::vector<Stmt> body;
    int line = 0;
    int column = 0;
};

struct Decl {
    std::string name;
    Type type = Type::integer;
    std::vector<Dim> dims;
    std::vector<Value> init;  // empty = default-initialized
    int line = 0;
    int column = 0;
};

struct Block {
    std::string name;
    std::vector<Decl> inputs, outputs, locals, constants;
    std::vector<Stmt> body;
};

struct Unit {
    std::vector<Block> blocks;
    const Block* find(const std::string& name) const;
};

Unit parse(const std::string& source);

// One invocation of a function block: declare everything, bind the provided
// inputs, run the body, return the VAR_OUTPUT section.
Env invoke(const Unit& unit, const std::string& block, const Env& inputs);

}  // namespace flsim::st
