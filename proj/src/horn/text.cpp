// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evmhorn/horn/text.hpp"

#include <cctype>

namespace evmhorn::horn
{
namespace
{
constexpr std::string_view header = "evmhorn-ir 1";

std::string quote(std::string_view s)
{
    std::string out = "\"";
    for (const char c : s)
    {
        if (c == '"' || c == '\\')
            out.push_back('\\');
        out.push_back(c);
    }
    return out + "\"";
}

std::string atom_text(const std::string& pred, const std::vector<Term>& args)
{
    std::string out = pred + "(";
    for (size_t i = 0; i < args.size(); ++i)
    {
        if (i > 0)
            out += ", ";
        out += to_string(args[i]);
    }
    return out + ")";
}
}  // namespace

std::string to_string(const Term& t)
{
    switch (t.kind)
    {
    case Term::Kind::Var:
        return "x" + std::to_string(t.var);
    case Term::Kind::Lit:
        return to_hex(t.lit);
    case Term::Kind::Top:
        return "top";
    case Term::Kind::Op:
        return atom_text(std::string{op_name(t.op)}, t.args);
    }
    return "?";
}

std::string to_string(const LinExpr& e)
{
    std::string out;
    for (const auto& [coeff, term] : e.parts)
    {
        const bool negative = coeff < 0;
        const BigInt magnitude = negative ? BigInt{-coeff} : coeff;
        if (out.empty())
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        if (magnitude != 1 || term.is_lit())
            out += magnitude.str() + "*";
        out += to_string(term);
    }
    if (e.constant != 0 || e.parts.empty())
    {
        if (out.empty())
            out += e.constant.str();
        else
            out += (e.constant < 0 ? " - " : " + ") + BigInt{abs(e.constant)}.str();
    }
    return out;
}

std::string to_string(const Guard& g)
{
    return to_string(g.lhs) + " " + std::string{rel_symbol(g.rel)} + " " + to_string(g.rhs);
}

std::string emit_horn_ir(const HornSystem& system)
{
    std::string out{header};
    out += '\n';
    for (const auto& p : system.predicates)
        out += "pred " + p.name + " " + std::to_string(p.arity) + "\n";
    for (const auto& q : system.queries)
        out += "query " + q + "\n";
    for (const auto& c : system.clauses)
    {
        out += "rule " + quote(c.label) + " " + (c.body ? *c.body : "true");
        for (size_t i = 0; i < c.guards.size(); ++i)
            out += (i == 0 ? " where " : " and ") + to_string(c.guards[i]);
        out += " -> ";
        out += c.head ? atom_text(c.head->pred, c.head->args) : "goal(" + c.goal + ")";
        out += '\n';
    }
    return out;
}

namespace
{
class LineParser
{
public:
    LineParser(std::string_view line, size_t line_no) : s_{line}, line_no_{line_no} {}

    [[noreturn]] void fail(const std::string& what) const { throw HornParseError(line_no_, pos_ + 1, what); }

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool at_end()
    {
        skip_ws();
        return pos_ >= s_.size();
    }

    bool peek(std::string_view tok)
    {
        skip_ws();
        return s_.substr(pos_, tok.size()) == tok;
    }

    bool accept(std::string_view tok)
    {
        if (!peek(tok))
            return false;
        pos_ += tok.size();
        return true;
    }

    void expect(std::string_view tok)
    {
        if (!accept(tok))
            fail("expected '" + std::string{tok} + "'");
    }

    static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

    std::string identifier()
    {
        skip_ws();
        const size_t start = pos_;
        while (pos_ < s_.size() && ident_char(s_[pos_]) &&
               !(s_[pos_] == '-' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '>'))
            ++pos_;
        if (start == pos_)
            fail("expected identifier");
        return std::string{s_.substr(start, pos_ - start)};
    }

    /// Keyword check that does not consume a longer identifier's prefix.
    bool accept_word(std::string_view word)
    {
        skip_ws();
        if (s_.substr(pos_, word.size()) != word)
            return false;
        const size_t after = pos_ + word.size();
        if (after < s_.size() && ident_char(s_[after]))
            return false;
        pos_ = after;
        return true;
    }

    std::string quoted()
    {
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != '"')
            fail("expected quoted label");
        ++pos_;
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '"')
        {
            if (s_[pos_] == '\\' && pos_ + 1 < s_.size())
                ++pos_;
            out.push_back(s_[pos_++]);
        }
        if (pos_ >= s_.size())
            fail("unterminated label");
        ++pos_;
        return out;
    }

    bool at_number()
    {
        skip_ws();
        return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
    }

    BigInt number()
    {
        skip_ws();
        const size_t start = pos_;
        if (s_.substr(pos_, 2) == "0x")
        {
            pos_ += 2;
            while (pos_ < s_.size() && std::isxdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
        }
        else
        {
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
        }
        const auto text = s_.substr(start, pos_ - start);
        if (text.empty() || text == "0x")
        {
            pos_ = start;
            fail("expected number");
        }
        return BigInt{std::string{text}};
    }

    Word word()
    {
        const size_t start = pos_;
        const auto n = number();
        if (n >= word_modulus())
        {
            pos_ = start;
            fail("literal exceeds 256 bits");
        }
        return Word{n};
    }

    Term term()
    {
        skip_ws();
        const size_t start = pos_;
        if (at_number())
            return Term::literal(word());
        const auto id = identifier();
        if (id == "top")
            return Term::top();
        if (id.size() > 1 && id[0] == 'x' &&
            id.find_first_not_of("0123456789", 1) == std::string::npos)
            return Term::variable(static_cast<uint32_t>(std::stoul(id.substr(1))));
        const auto op = parse_op_name(id);
        if (!op)
        {
            pos_ = start;
            fail("unknown operation '" + id + "'");
        }
        expect("(");
        std::vector<Term> args;
        if (!accept(")"))
        {
            do
                args.push_back(term());
            while (accept(","));
            expect(")");
        }
        if (args.size() != op_arity(*op))
        {
            pos_ = start;
            fail("wrong operand count for " + id);
        }
        return Term::apply(*op, std::move(args));
    }

    bool accept_minus()
    {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '-' && (pos_ + 1 >= s_.size() || s_[pos_ + 1] != '>'))
        {
            ++pos_;
            return true;
        }
        return false;
    }

    LinExpr lin()
    {
        LinExpr e;
        bool first = true;
        for (;;)
        {
            BigInt sign = 1;
            if (accept_minus())
                sign = -1;
            else if (!first && !accept("+"))
                break;
            first = false;
            if (at_number())
            {
                const auto n = number();
                if (accept("*"))
                    e.parts.emplace_back(sign * n, term());
                else
                    e.constant += sign * n;
            }
            else
            {
                e.parts.emplace_back(sign, term());
            }
        }
        return e;
    }

    Rel rel()
    {
        if (accept("!="))
            return Rel::Ne;
        if (accept("<="))
            return Rel::Le;
        if (accept(">="))
            return Rel::Ge;
        if (accept("<"))
            return Rel::Lt;
        if (accept(">"))
            return Rel::Gt;
        if (accept("="))
            return Rel::Eq;
        fail("expected relation");
    }

    Guard guard()
    {
        Guard g;
        g.lhs = lin();
        g.rel = rel();
        g.rhs = lin();
        return g;
    }

private:
    std::string_view s_;
    size_t pos_ = 0;
    size_t line_no_;
};
}  // namespace

HornSystem parse_horn_ir(std::string_view text)
{
    HornSystem system;
    size_t line_no = 0;
    std::vector<size_t> clause_lines;
    bool seen_header = false;
    size_t start = 0;
    while (start <= text.size())
    {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        auto line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
        {
            // Comments start at a '#' outside quoted labels.
            bool in_quote = false;
            size_t cut = std::string_view::npos;
            for (size_t i = 0; i < line.size(); ++i)
            {
                if (line[i] == '\\' && in_quote)
                    ++i;
                else if (line[i] == '"')
                    in_quote = !in_quote;
                else if (line[i] == '#' && !in_quote)
                {
                    cut = i;
                    break;
                }
            }
            line = line.substr(0, cut);
        }

        LineParser p{line, line_no};
        if (p.at_end())
            continue;
        if (!seen_header)
        {
            if (!p.accept_word("evmhorn-ir"))
                p.fail("missing 'evmhorn-ir' header");
            if (p.number() != 1)
                p.fail("unsupported version");
            if (!p.at_end())
                p.fail("trailing text");
            seen_header = true;
            continue;
        }
        if (p.accept_word("pred"))
        {
            Predicate pred;
            pred.name = p.identifier();
            pred.arity = static_cast<uint32_t>(p.number());
            system.predicates.push_back(std::move(pred));
        }
        else if (p.accept_word("query"))
        {
            system.queries.push_back(p.identifier());
        }
        else if (p.accept_word("rule"))
        {
            Clause c;
            c.label = p.quoted();
            if (!p.accept_word("true"))
                c.body = p.identifier();
            if (p.accept_word("where"))
            {
                do
                    c.guards.push_back(p.guard());
                while (p.accept_word("and"));
            }
            p.expect("->");
            if (p.accept_word("goal"))
            {
                p.expect("(");
                c.goal = p.identifier();
                p.expect(")");
            }
            else
            {
                Atom head;
                head.pred = p.identifier();
                p.expect("(");
                if (!p.accept(")"))
                {
                    do
                        head.args.push_back(p.term());
                    while (p.accept(","));
                    p.expect(")");
                }
                c.head = std::move(head);
            }
            system.clauses.push_back(std::move(c));
            clause_lines.push_back(line_no);
        }
        else
        {
            p.fail("expected 'pred', 'query' or 'rule'");
        }
        if (!p.at_end())
            p.fail("trailing text");
    }
    if (!seen_header)
        throw HornParseError(line_no, 1, "missing 'evmhorn-ir' header");
    try
    {
        validate(system);
    }
    catch (const std::invalid_argument& e)
    {
        // Point at the offending clause when there is one.
        size_t where = line_no;
        for (size_t i = 0; i < system.clauses.size(); ++i)
        {
            HornSystem one = system;
            one.clauses = {system.clauses[i]};
            try
            {
                validate(one);
            }
            catch (const std::invalid_argument&)
            {
                where = clause_lines[i];
                break;
            }
        }
        throw HornParseError(where, 1, e.what());
    }
    return system;
}

}  // namespace evmhorn::horn
