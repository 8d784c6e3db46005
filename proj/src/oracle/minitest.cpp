// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evmhorn/oracle/minitest.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace evmhorn::oracle
{
using nlohmann::json;

namespace
{
Word word_of(const json& j, const std::string& what)
{
    if (j.is_number_unsigned())
        return Word{j.get<uint64_t>()};
    if (j.is_string())
        return parse_word(j.get<std::string>());
    throw std::invalid_argument(what + ": expected a word (number or string)");
}

Bytes bytes_of(const json& j, const std::string& what)
{
    if (!j.is_string())
        throw std::invalid_argument(what + ": expected a hex string");
    return parse_hex_bytes(j.get<std::string>());
}

std::map<Word, Word> storage_of(const json& j, const std::string& what)
{
    if (!j.is_object())
        throw std::invalid_argument(what + ": expected an object of key/value words");
    std::map<Word, Word> out;
    for (const auto& [k, v] : j.items())
    {
        const auto value = word_of(v, what + "[" + k + "]");
        if (value != 0)
            out[parse_word(k)] = value;
    }
    return out;
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> known, const std::string& what)
{
    for (const auto& [k, v] : j.items())
        if (std::find(known.begin(), known.end(), k) == known.end())
            throw std::invalid_argument(what + ": unknown field '" + k + "'");
}

EnvScript env_of(const json& j)
{
    EnvScript env;
    if (!j.is_object())
        throw std::invalid_argument("env: expected an object");
    reject_unknown(j,
        {"address", "caller", "origin", "callvalue", "calldata", "gasprice", "coinbase", "timestamp", "number",
            "difficulty", "gaslimit", "chainid", "balance", "extcodesize", "gas", "storage", "calls", "step_limit"},
        "env");
    const std::pair<const char*, Word EnvScript::*> words[] = {{"address", &EnvScript::address},
        {"caller", &EnvScript::caller}, {"origin", &EnvScript::origin}, {"callvalue", &EnvScript::callvalue},
        {"gasprice", &EnvScript::gasprice}, {"coinbase", &EnvScript::coinbase},
        {"timestamp", &EnvScript::timestamp}, {"number", &EnvScript::number},
        {"difficulty", &EnvScript::difficulty}, {"gaslimit", &EnvScript::gaslimit},
        {"chainid", &EnvScript::chainid}, {"balance", &EnvScript::balance},
        {"extcodesize", &EnvScript::extcodesize}, {"gas", &EnvScript::gas}};
    for (const auto& [key, member] : words)
        if (j.contains(key))
            env.*member = word_of(j[key], std::string{"env."} + key);
    if (j.contains("calldata"))
        env.calldata = bytes_of(j["calldata"], "env.calldata");
    if (j.contains("storage"))
        env.storage = storage_of(j["storage"], "env.storage");
    if (j.contains("calls"))
    {
        if (!j["calls"].is_array())
            throw std::invalid_argument("env.calls: expected an array");
        for (const auto& c : j["calls"])
        {
            if (!c.is_object() || !c.contains("success") || !c["success"].is_boolean())
                throw std::invalid_argument("env.calls: each entry needs a boolean 'success'");
            CallResult r;
            r.success = c["success"].get<bool>();
            if (c.contains("returndata"))
                r.return_data = bytes_of(c["returndata"], "env.calls.returndata");
            env.calls.push_back(std::move(r));
        }
    }
    if (j.contains("step_limit"))
    {
        if (!j["step_limit"].is_number_unsigned() || j["step_limit"].get<uint64_t>() == 0)
            throw std::invalid_argument("env.step_limit: expected a positive integer");
        env.step_limit = j["step_limit"].get<size_t>();
    }
    return env;
}

std::string words_str(const std::vector<Word>& ws)
{
    std::string out = "[";
    for (size_t i = 0; i < ws.size(); ++i)
        out += (i ? "," : "") + to_hex(ws[i]);
    return out + "]";
}

std::string storage_str(const std::map<Word, Word>& s)
{
    std::string out = "{";
    bool first = true;
    for (const auto& [k, v] : s)
    {
        out += (first ? "" : ",") + to_hex(k) + ":" + to_hex(v);
        first = false;
    }
    return out + "}";
}

std::map<Word, Word> nonzero(const std::map<Word, Word>& s)
{
    std::map<Word, Word> out;
    for (const auto& [k, v] : s)
        if (v != 0)
            out.emplace(k, v);
    return out;
}
}  // namespace

Minitest parse_minitest(const json& j)
{
    if (!j.is_object())
        throw std::invalid_argument("case: expected an object");
    reject_unknown(j, {"name", "code", "env", "expected"}, "case");
    if (!j.contains("name") || !j["name"].is_string())
        throw std::invalid_argument("case: missing string 'name'");
    if (!j.contains("code"))
        throw std::invalid_argument("case: missing 'code'");
    if (!j.contains("expected") || !j["expected"].is_object())
        throw std::invalid_argument("case: missing object 'expected'");
    Minitest t;
    t.name = j["name"].get<std::string>();
    t.code = bytes_of(j["code"], "code");
    if (j.contains("env"))
        t.env = env_of(j["env"]);
    const auto& e = j["expected"];
    reject_unknown(e, {"halt", "stack", "storage", "return", "memory"}, "expected");
    if (e.contains("halt"))
    {
        if (!e["halt"].is_string())
            throw std::invalid_argument("expected.halt: expected a string");
        t.expected.halt = parse_halt_reason(e["halt"].get<std::string>());
        if (!t.expected.halt)
            throw std::invalid_argument("expected.halt: unknown halt reason '" + e["halt"].get<std::string>() + "'");
    }
    if (e.contains("stack"))
    {
        if (!e["stack"].is_array())
            throw std::invalid_argument("expected.stack: expected an array");
        std::vector<Word> stack;
        for (const auto& w : e["stack"])
            stack.push_back(word_of(w, "expected.stack"));
        t.expected.stack = std::move(stack);
    }
    if (e.contains("storage"))
        t.expected.storage = storage_of(e["storage"], "expected.storage");
    if (e.contains("return"))
        t.expected.return_data = bytes_of(e["return"], "expected.return");
    if (e.contains("memory"))
        t.expected.memory = bytes_of(e["memory"], "expected.memory");
    if (!t.expected.halt && !t.expected.stack && !t.expected.storage && !t.expected.return_data &&
        !t.expected.memory)
        throw std::invalid_argument("expected: no expectation given");
    return t;
}

MinitestResult run_minitest(const Minitest& test)
{
    MinitestResult r;
    r.name = test.name;
    try
    {
        const auto stream = evm::decode_bytecode(test.code);
        const auto trace = exec_concrete(stream, test.env);
        const auto& last = trace.states.back();
        std::vector<std::string> problems;
        if (test.expected.halt && *test.expected.halt != trace.halt)
        {
            problems.push_back("halt: expected " + std::string{to_string(*test.expected.halt)} + ", got " +
                               std::string{to_string(trace.halt)});
        }
        if (test.expected.stack && *test.expected.stack != last.stack)
            problems.push_back("stack: expected " + words_str(*test.expected.stack) + ", got " + words_str(last.stack));
        if (test.expected.storage)
        {
            const auto got = nonzero(trace.final_storage);
            if (*test.expected.storage != got)
                problems.push_back(
                    "storage: expected " + storage_str(*test.expected.storage) + ", got " + storage_str(got));
        }
        if (test.expected.return_data && *test.expected.return_data != trace.return_data)
        {
            problems.push_back("return: expected " + bytes_to_hex(*test.expected.return_data) + ", got " +
                               bytes_to_hex(trace.return_data));
        }
        if (test.expected.memory && *test.expected.memory != last.memory)
        {
            problems.push_back(
                "memory: expected " + bytes_to_hex(*test.expected.memory) + ", got " + bytes_to_hex(last.memory));
        }
        if (!problems.empty())
        {
            r.status = MinitestResult::Status::Failed;
            for (size_t i = 0; i < problems.size(); ++i)
                r.message += (i ? "; " : "") + problems[i];
        }
    }
    catch (const UnsupportedOpcode& e)
    {
        r.status = MinitestResult::Status::Failed;
        r.message = e.what();
    }
    return r;
}

MinitestSummary run_minitests(const std::filesystem::path& dir)
{
    if (!std::filesystem::is_directory(dir))
        throw std::invalid_argument("not a directory: " + dir.string());
    std::set<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.insert(entry.path());

    MinitestSummary summary;
    for (const auto& file : files)
    {
        MinitestResult r;
        try
        {
            std::ifstream in{file};
            const auto j = json::parse(in);
            r = run_minitest(parse_minitest(j));
        }
        catch (const std::exception& e)
        {
            r.status = MinitestResult::Status::Malformed;
            r.message = e.what();
        }
        r.file = file.filename().string();
        switch (r.status)
        {
        case MinitestResult::Status::Passed:
            ++summary.passed;
            break;
        case MinitestResult::Status::Failed:
            ++summary.failed;
            break;
        case MinitestResult::Status::Malformed:
            ++summary.malformed;
            break;
        }
        summary.results.push_back(std::move(r));
    }
    return summary;
}

json MinitestSummary::to_json() const
{
    static constexpr std::array<std::string_view, 3> status{"passed", "failed", "malformed"};
    json cases = json::array();
    for (const auto& r : results)
    {
        cases.push_back({{"file", r.file}, {"name", r.name}, {"status", status[static_cast<size_t>(r.status)]},
            {"message", r.message}});
    }
    return {{"passed", passed}, {"failed", failed}, {"malformed", malformed}, {"total", results.size()},
        {"cases", std::move(cases)}};
}

}  // namespace evmhorn::oracle
