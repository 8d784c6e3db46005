// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evmhorn/horn/external.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "evmhorn/diagnostics.hpp"

namespace evmhorn::horn
{
namespace
{
bool executable(const std::filesystem::path& p)
{
    struct stat st{};
    return ::stat(p.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(p.c_str(), X_OK) == 0;
}

std::string resolve(const std::string& program)
{
    if (program.find('/') != std::string::npos)
    {
        if (!executable(program))
            throw ConfigError("solver executable not found: " + program);
        return program;
    }
    const char* path = std::getenv("PATH");
    std::istringstream dirs{path ? path : ""};
    std::string dir;
    while (std::getline(dirs, dir, ':'))
    {
        const auto candidate = std::filesystem::path{dir.empty() ? "." : dir} / program;
        if (executable(candidate))
            return candidate.string();
    }
    throw ConfigError("solver executable not found in PATH: " + program);
}

class TempFile
{
public:
    explicit TempFile(const std::string& content)
    {
        auto pattern = (std::filesystem::temp_directory_path() / "evmhorn-XXXXXX.smt2").string();
        const int fd = ::mkstemps(pattern.data(), 5);
        if (fd < 0)
            throw std::runtime_error("cannot create temporary file");
        path_ = pattern;
        size_t done = 0;
        while (done < content.size())
        {
            const auto n = ::write(fd, content.data() + done, content.size() - done);
            if (n < 0)
            {
                if (errno == EINTR)
                    continue;
                ::close(fd);
                throw std::runtime_error("cannot write temporary file");
            }
            done += static_cast<size_t>(n);
        }
        ::close(fd);
    }
    ~TempFile() { std::filesystem::remove(path_); }
    TempFile(const TempFile&) = delete;
    TempFile& operator=(const TempFile&) = delete;

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

std::string first_line(const std::string& output)
{
    std::istringstream lines{output};
    std::string line;
    while (std::getline(lines, line))
    {
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos)
            continue;
        const auto e = line.find_last_not_of(" \t\r");
        return line.substr(b, e - b + 1);
    }
    return {};
}
}  // namespace

SolverCommand parse_solver_command(const std::string& command_line)
{
    std::istringstream in{command_line};
    SolverCommand cmd;
    std::string word;
    while (in >> word)
    {
        if (cmd.program.empty())
            cmd.program = word;
        else
            cmd.args.push_back(word);
    }
    if (cmd.program.empty())
        throw ConfigError("empty solver command");
    return cmd;
}

Outcome map_solver_answer(const std::string& output)
{
    const auto answer = first_line(output);
    if (answer == "sat")
        return Outcome::QueryUnreachable;
    if (answer == "unsat")
        return Outcome::QueryReachable;
    return Outcome::Unknown;
}

SolverVerdict solve_external(const std::string& smtlib, const SolverCommand& command, std::chrono::seconds timeout)
{
    const auto program = resolve(command.program);
    TempFile file{smtlib};

    SolverVerdict v;
    v.solver = command.program;
    const auto start = std::chrono::steady_clock::now();

    int out[2];
    if (::pipe(out) != 0)
        throw std::runtime_error("pipe failed");

    std::vector<std::string> argv_storage{program};
    argv_storage.insert(argv_storage.end(), command.args.begin(), command.args.end());
    argv_storage.push_back(file.path());
    std::vector<char*> argv;
    for (auto& a : argv_storage)
        argv.push_back(a.data());
    argv.push_back(nullptr);

    const pid_t pid = ::fork();
    if (pid < 0)
    {
        ::close(out[0]);
        ::close(out[1]);
        throw std::runtime_error("fork failed");
    }
    if (pid == 0)
    {
        ::setpgid(0, 0);
        ::dup2(out[1], STDOUT_FILENO);
        const int devnull = ::open("/dev/null", O_RDWR);
        if (devnull >= 0)
        {
            ::dup2(devnull, STDIN_FILENO);
            ::dup2(devnull, STDERR_FILENO);
        }
        ::close(out[0]);
        ::close(out[1]);
        ::execv(program.c_str(), argv.data());
        ::_exit(127);
    }
    ::setpgid(pid, pid);
    ::close(out[1]);

    std::string output;
    bool timed_out = false;
    const auto deadline = start + timeout;
    char buf[4096];
    for (;;)
    {
        const auto remaining =
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (remaining.count() <= 0)
        {
            timed_out = true;
            break;
        }
        pollfd pfd{out[0], POLLIN, 0};
        const int r = ::poll(&pfd, 1, static_cast<int>(std::min<int64_t>(remaining.count(), 1000)));
        if (r < 0 && errno != EINTR)
            break;
        if (r <= 0)
            continue;
        const auto n = ::read(out[0], buf, sizeof buf);
        if (n < 0 && errno == EINTR)
            continue;
        if (n <= 0)
            break;
        output.append(buf, static_cast<size_t>(n));
    }
    ::close(out[0]);
    if (timed_out)
        ::kill(-pid, SIGKILL);
    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR)
    {
    }
    if (!timed_out)
    {
        // Reap anything the solver left in its process group.
        ::kill(-pid, SIGKILL);
    }
    v.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    if (timed_out)
    {
        v.outcome = Outcome::Unknown;
        v.detail = "timeout after " + std::to_string(timeout.count()) + " s";
        return v;
    }
    if (WIFSIGNALED(status))
    {
        v.outcome = Outcome::Unknown;
        v.detail = "solver killed by signal " + std::to_string(WTERMSIG(status));
        return v;
    }
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (code == 127 && output.empty())
    {
        v.outcome = Outcome::Unknown;
        v.detail = "solver could not be started";
        return v;
    }
    v.outcome = map_solver_answer(output);
    const auto answer = first_line(output);
    if (v.outcome != Outcome::Unknown && code != 0)
    {
        v.outcome = Outcome::Unknown;
        v.detail = "solver answered '" + answer + "' but exited with status " + std::to_string(code);
    }
    else if (v.outcome == Outcome::Unknown)
    {
        v.detail = answer == "unknown" ? "solver returned unknown"
                                        : "unrecognized solver output: '" + answer.substr(0, 200) + "'";
    }
    else
    {
        v.detail = "solver returned " + answer;
    }
    return v;
}

}  // namespace evmhorn::horn
