// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evmhorn/horn/smtlib.hpp"

#include <map>
#include <stdexcept>

#include "evmhorn/horn/text.hpp"

namespace evmhorn::horn
{
namespace
{
const std::string top_expr = "(- 1)";

std::string numeral(const BigInt& n)
{
    if (n < 0)
        return "(- " + BigInt{-n}.str() + ")";
    return n.str();
}

const std::string& modulus()
{
    static const std::string m = word_modulus().str();
    return m;
}

const std::string& half()
{
    static const std::string h = BigInt{word_modulus() / 2}.str();
    return h;
}

std::string pow2(unsigned k)
{
    return BigInt{BigInt{1} << k}.str();
}

class ClauseEncoder
{
public:
    /// Expression for a term; operation nodes become let-bound names.
    std::string expr(const Term& t)
    {
        switch (t.kind)
        {
        case Term::Kind::Var:
            return "x" + std::to_string(t.var);
        case Term::Kind::Lit:
            return t.lit.str();
        case Term::Kind::Top:
            return top_expr;
        case Term::Kind::Op:
            break;
        }

        bool all_lit = true;
        for (const auto& a : t.args)
        {
            if (a.is_top())
                return top_expr;
            all_lit = all_lit && a.is_lit();
        }
        if (all_lit)
        {
            std::vector<Word> values;
            for (const auto& a : t.args)
                values.push_back(a.lit);
            return apply_op(t.op, values).str();
        }

        const auto key = to_string(t);
        if (const auto it = names_.find(key); it != names_.end())
            return it->second;

        std::vector<std::string> args;
        std::vector<std::string> tags;
        for (const auto& a : t.args)
        {
            args.push_back(expr(a));
            if (!a.is_lit())
                tags.push_back("(= " + args.back() + " " + top_expr + ")");
        }
        const auto value = op_value(t, args);
        std::string cond = tags.size() == 1 ? tags[0] : "(or";
        if (tags.size() > 1)
        {
            for (const auto& tag : tags)
                cond += " " + tag;
            cond += ")";
        }
        const auto name = "t" + std::to_string(bindings_.size());
        bindings_.emplace_back(name, "(ite " + cond + " " + top_expr + " " + value + ")");
        names_.emplace(key, name);
        return name;
    }

    std::string guard(const Guard& g)
    {
        std::vector<std::string> tags;
        auto side = [&](const LinExpr& e) {
            BigInt constant = e.constant;
            std::vector<std::string> summands;
            for (const auto& [coeff, term] : e.parts)
            {
                if (term.is_lit())
                {
                    constant += coeff * BigInt{term.lit};
                    continue;
                }
                const auto x = expr(term);
                tags.push_back("(= " + x + " " + top_expr + ")");
                summands.push_back(coeff == 1 ? x : "(* " + numeral(coeff) + " " + x + ")");
            }
            if (constant != 0 || summands.empty())
                summands.push_back(numeral(constant));
            if (summands.size() == 1)
                return summands[0];
            std::string out = "(+";
            for (const auto& s : summands)
                out += " " + s;
            return out + ")";
        };
        const auto lhs = side(g.lhs);
        const auto rhs = side(g.rhs);
        std::string rel;
        switch (g.rel)
        {
        case Rel::Eq:
            rel = "(= " + lhs + " " + rhs + ")";
            break;
        case Rel::Ne:
            rel = "(not (= " + lhs + " " + rhs + "))";
            break;
        case Rel::Lt:
            rel = "(< " + lhs + " " + rhs + ")";
            break;
        case Rel::Le:
            rel = "(<= " + lhs + " " + rhs + ")";
            break;
        case Rel::Gt:
            rel = "(> " + lhs + " " + rhs + ")";
            break;
        case Rel::Ge:
            rel = "(>= " + lhs + " " + rhs + ")";
            break;
        }
        if (tags.empty())
            return rel;
        std::string out = "(or";
        for (const auto& tag : tags)
            out += " " + tag;
        return out + " " + rel + ")";
    }

    /// Wraps `inner` in the let bindings collected so far, innermost last.
    std::string wrap(std::string inner) const
    {
        for (auto it = bindings_.rbegin(); it != bindings_.rend(); ++it)
            inner = "(let ((" + it->first + " " + it->second + ")) " + inner + ")";
        return inner;
    }

private:
    static std::string signed_view(const Term& t, const std::string& e)
    {
        if (t.is_lit())
            return numeral(to_signed(t.lit));
        return "(ite (>= " + e + " " + half() + ") (- " + e + " " + modulus() + ") " + e + ")";
    }

    static std::string op_value(const Term& t, const std::vector<std::string>& a)
    {
        const auto& M = modulus();
        auto lit = [&](size_t i) -> const Word& { return t.args[i].lit; };
        switch (t.op)
        {
        case OpKind::Add:
            return "(mod (+ " + a[0] + " " + a[1] + ") " + M + ")";
        case OpKind::Sub:
            return "(mod (- " + a[0] + " " + a[1] + ") " + M + ")";
        case OpKind::Mul:
        {
            const size_t c = t.args[0].is_lit() ? 0 : 1;
            if (!t.args[c].is_lit())
                break;
            return "(mod (* " + a[c] + " " + a[1 - c] + ") " + M + ")";
        }
        case OpKind::Div:
            if (!t.args[1].is_lit())
                break;
            return lit(1) == 0 ? "0" : "(div " + a[0] + " " + a[1] + ")";
        case OpKind::Mod:
            if (!t.args[1].is_lit())
                break;
            return lit(1) == 0 ? "0" : "(mod " + a[0] + " " + a[1] + ")";
        case OpKind::Lt:
            return "(ite (< " + a[0] + " " + a[1] + ") 1 0)";
        case OpKind::Gt:
            return "(ite (> " + a[0] + " " + a[1] + ") 1 0)";
        case OpKind::Slt:
            return "(ite (< " + signed_view(t.args[0], a[0]) + " " + signed_view(t.args[1], a[1]) + ") 1 0)";
        case OpKind::Sgt:
            return "(ite (> " + signed_view(t.args[0], a[0]) + " " + signed_view(t.args[1], a[1]) + ") 1 0)";
        case OpKind::Eq:
            return "(ite (= " + a[0] + " " + a[1] + ") 1 0)";
        case OpKind::IsZero:
            return "(ite (= " + a[0] + " 0) 1 0)";
        case OpKind::Not:
            return "(- " + BigInt{word_modulus() - 1}.str() + " " + a[0] + ")";
        case OpKind::And:
        {
            const size_t m = t.args[0].is_lit() ? 0 : 1;
            if (!t.args[m].is_lit())
                break;
            const auto& mask = lit(m);
            if (mask == 0)
                return "0";
            if (mask == ~Word{0})
                return a[1 - m];
            return "(mod " + a[1 - m] + " " + BigInt{BigInt{mask} + 1}.str() + ")";
        }
        case OpKind::Byte:
        {
            if (!t.args[0].is_lit())
                break;
            if (lit(0) >= 32)
                return "0";
            const auto shift = 8 * (31 - static_cast<unsigned>(lit(0)));
            return "(mod (div " + a[1] + " " + pow2(shift) + ") 256)";
        }
        case OpKind::Shl:
            if (!t.args[0].is_lit())
                break;
            if (lit(0) >= 256)
                return "0";
            return "(mod (* " + pow2(static_cast<unsigned>(lit(0))) + " " + a[1] + ") " + M + ")";
        case OpKind::Shr:
            if (!t.args[0].is_lit())
                break;
            if (lit(0) >= 256)
                return "0";
            return "(div " + a[1] + " " + pow2(static_cast<unsigned>(lit(0))) + ")";
        case OpKind::Sar:
        {
            if (!t.args[0].is_lit())
                break;
            const auto sv = signed_view(t.args[1], a[1]);
            if (lit(0) >= 256)
                return "(ite (< " + sv + " 0) " + BigInt{word_modulus() - 1}.str() + " 0)";
            return "(mod (div " + sv + " " + pow2(static_cast<unsigned>(lit(0))) + ") " + M + ")";
        }
        default:
            break;
        }
        throw std::invalid_argument("term not encodable in linear arithmetic: " + to_string(t));
    }

    std::vector<std::pair<std::string, std::string>> bindings_;
    std::map<std::string, std::string> names_;
};

std::string application(const std::string& pred, const std::vector<std::string>& args)
{
    if (args.empty())
        return pred;
    std::string out = "(" + pred;
    for (const auto& a : args)
        out += " " + a;
    return out + ")";
}
}  // namespace

std::string emit_chc_smtlib(const HornSystem& system, const std::string& query)
{
    if (!system.has_query(query))
        throw std::invalid_argument("query not declared: " + query);
    validate(system);

    std::string out;
    out += "; query: " + query + "\n";
    out += "; constants are integers in [0, 2^256); -1 encodes Top\n";
    out += "(set-logic HORN)\n";
    std::map<std::string, uint32_t> arity;
    for (const auto& p : system.predicates)
    {
        arity.emplace(p.name, p.arity);
        out += "(declare-fun " + p.name + " (";
        for (uint32_t i = 0; i < p.arity; ++i)
            out += i == 0 ? "Int" : " Int";
        out += ") Bool)\n";
    }

    for (const auto& c : system.clauses)
    {
        if (c.is_goal() && c.goal != query)
            continue;
        ClauseEncoder enc;
        std::vector<std::string> premises;
        uint32_t nvars = 0;
        if (c.body)
        {
            nvars = arity.at(*c.body);
            std::vector<std::string> vars;
            for (uint32_t i = 0; i < nvars; ++i)
                vars.push_back("x" + std::to_string(i));
            premises.push_back(application(*c.body, vars));
        }
        for (const auto& g : c.guards)
            premises.push_back(enc.guard(g));

        std::string conclusion = "false";
        if (c.head)
        {
            std::vector<std::string> args;
            for (const auto& t : c.head->args)
                args.push_back(enc.expr(t));
            conclusion = application(c.head->pred, args);
        }

        std::string body;
        if (premises.empty())
        {
            body = conclusion;
        }
        else
        {
            std::string lhs = premises[0];
            if (premises.size() > 1)
            {
                lhs = "(and";
                for (const auto& p : premises)
                    lhs += " " + p;
                lhs += ")";
            }
            body = "(=> " + lhs + " " + conclusion + ")";
        }
        body = enc.wrap(std::move(body));
        if (nvars > 0)
        {
            std::string binders;
            for (uint32_t i = 0; i < nvars; ++i)
                binders += (i == 0 ? "(x" : " (x") + std::to_string(i) + " Int)";
            body = "(forall (" + binders + ") " + body + ")";
        }
        out += "; " + c.label + "\n";
        out += "(assert " + body + ")\n";
    }
    out += "(check-sat)\n";
    return out;
}

}  // namespace evmhorn::horn
