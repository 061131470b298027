#pragma once

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "vzcfo/error.hpp"
#include "vzcfo/nec/deck.hpp"
#include "vzcfo/util/text.hpp"

namespace vz::nec {

class EngineNotFoundError : public ConfigError {
public:
    using ConfigError::ConfigError;
};
class EngineExitError : public Error {
public:
    EngineExitError(const std::string& what, int status) : Error(what), status_(status) {}
    int status() const noexcept { return status_; }

private:
    int status_;
};
class EngineOutputMissingError : public Error {
public:
    using Error::Error;
};
class EngineTimeoutError : public Error {
public:
    using Error::Error;
};

enum class InvocationMode {
    explicit_files,  // <command> <input> <output>
    legacy_infile    // INFILE.DAT names input then output; command runs with no arguments
};

struct EngineConfig {
    std::string command;
    InvocationMode mode = InvocationMode::explicit_files;
    std::filesystem::path work_dir = ".";
    std::string input_name = "VZCFO.NEC";
    std::string output_name = "VZCFO.OUT";
    std::chrono::milliseconds timeout{60000};
};

namespace detail {

inline std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    return out + "'";
}

inline bool executable_on_path(const std::string& prog) {
    namespace fs = std::filesystem;
    if (prog.find('/') != std::string::npos) return ::access(prog.c_str(), X_OK) == 0;
    const char* path = std::getenv("PATH");
    if (!path) return false;
    std::stringstream ss(path);
    std::string dir;
    while (std::getline(ss, dir, ':')) {
        if (dir.empty()) dir = ".";
        const fs::path p = fs::path(dir) / prog;
        if (::access(p.c_str(), X_OK) == 0) return true;
    }
    return false;
}

inline std::mutex& directory_lock(const std::filesystem::path& dir) {
    static std::mutex guard;
    static std::map<std::string, std::mutex> locks;
    std::error_code ec;
    std::filesystem::path canon = std::filesystem::weakly_canonical(dir, ec);
    if (ec) canon = dir;
    std::lock_guard<std::mutex> g(guard);
    return locks[canon.string()];
}

// Runs `/bin/sh -c script` in `dir`; returns the wait status.
inline int run_shell(const std::string& script, const std::filesystem::path& dir, std::chrono::milliseconds timeout,
                     const std::string& label) {
    const pid_t pid = ::fork();
    if (pid < 0) throw Error("fork failed for engine '" + label + "'");
    if (pid == 0) {
        if (::chdir(dir.c_str()) != 0) ::_exit(126);
        ::setpgid(0, 0);
        ::execl("/bin/sh", "sh", "-c", script.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    int status = 0;
    auto pause = std::chrono::milliseconds(1);
    for (;;) {
        const pid_t r = ::waitpid(pid, &status, WNOHANG);
        if (r == pid) return status;
        if (r < 0 && errno != EINTR) throw Error("waitpid failed for engine '" + label + "'");
        if (std::chrono::steady_clock::now() >= deadline) {
            ::kill(-pid, SIGKILL);
            ::kill(pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            throw EngineTimeoutError("engine '" + label + "' timed out after " +
                                     std::to_string(timeout.count()) + " ms");
        }
        std::this_thread::sleep_for(pause);
        if (pause < std::chrono::milliseconds(20)) pause *= 2;
    }
}

}  // namespace detail

inline std::string first_word(const std::string& command) {
    const auto tok = text::split_ws(command);
    return tok.empty() ? std::string() : std::string(tok[0]);
}

// Writes the deck, runs the engine and returns the output file contents.
inline std::string run_external_engine(const CardDeck& deck, const EngineConfig& cfg) {
    namespace fs = std::filesystem;
    const std::string prog = first_word(cfg.command);
    if (prog.empty()) throw EngineNotFoundError("no external engine command configured");
    if (!detail::executable_on_path(prog)) throw EngineNotFoundError("engine command not found: " + prog);
    if (cfg.timeout.count() <= 0) throw ConfigError("engine timeout must be positive");

    std::error_code ec;
    fs::create_directories(cfg.work_dir, ec);
    std::lock_guard<std::mutex> lock(detail::directory_lock(cfg.work_dir));
    const fs::path in = cfg.work_dir / cfg.input_name, out = cfg.work_dir / cfg.output_name;
    fs::remove(out, ec);
    {
        std::ofstream f(in, std::ios::binary);
        if (!f) throw Error("cannot write engine input " + in.string());
        f << deck.text();
    }
    std::string script = cfg.command;
    if (cfg.mode == InvocationMode::legacy_infile) {
        std::ofstream f(cfg.work_dir / "INFILE.DAT", std::ios::binary);
        if (!f) throw Error("cannot write INFILE.DAT in " + cfg.work_dir.string());
        f << cfg.input_name << "\n" << cfg.output_name << "\n";
    } else {
        script += " " + detail::shell_quote(cfg.input_name) + " " + detail::shell_quote(cfg.output_name);
    }
    const int status = detail::run_shell(script, cfg.work_dir, cfg.timeout, prog);
    if (WIFEXITED(status) && WEXITSTATUS(status) == 127)
        throw EngineNotFoundError("engine command not found: " + prog);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        const int code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
        throw EngineExitError("engine '" + prog + "' exited with status " + std::to_string(code), code);
    }
    std::ifstream f(out, std::ios::binary);
    if (!f) throw EngineOutputMissingError("engine '" + prog + "' produced no output file " + out.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace vz::nec
