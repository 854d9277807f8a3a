// Copyright 2026 The NeuRO Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "neuro/process.hpp"

#include "neuro/error.hpp"

#include <array>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <sstream>

#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

extern char **environ;

namespace neuro {

namespace {

class pipe_pair {
  public:
    pipe_pair() {
        if (::pipe(fds_.data()) != 0) {
            throw error{ error_code::backend_failure, std::string{ "pipe() failed: " } + std::strerror(errno) };
        }
    }
    ~pipe_pair() {
        close_read();
        close_write();
    }
    pipe_pair(const pipe_pair &) = delete;
    pipe_pair &operator=(const pipe_pair &) = delete;

    [[nodiscard]] int read_end() const noexcept { return fds_[0]; }
    [[nodiscard]] int write_end() const noexcept { return fds_[1]; }
    void close_read() noexcept { close_fd(fds_[0]); }
    void close_write() noexcept { close_fd(fds_[1]); }

  private:
    static void close_fd(int &fd) noexcept {
        if (fd >= 0) {
            ::close(fd);
            fd = -1;
        }
    }
    std::array<int, 2> fds_{ -1, -1 };
};

bool is_executable_file(const std::filesystem::path &p) {
    struct stat st {};
    return ::stat(p.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(p.c_str(), X_OK) == 0;
}

}  // namespace

std::optional<std::filesystem::path> find_executable(const std::string &command) {
    if (command.empty()) {
        return std::nullopt;
    }
    if (command.find('/') != std::string::npos) {
        return is_executable_file(command) ? std::optional{ std::filesystem::path{ command } } : std::nullopt;
    }
    const char *path_env = std::getenv("PATH");
    std::stringstream dirs{ path_env != nullptr ? path_env : "/usr/local/bin:/usr/bin:/bin" };
    std::string dir;
    while (std::getline(dirs, dir, ':')) {
        const std::filesystem::path candidate = std::filesystem::path{ dir.empty() ? "." : dir } / command;
        if (is_executable_file(candidate)) {
            return candidate;
        }
    }
    return std::nullopt;
}

process_result run_process(const std::vector<std::string> &argv) {
    if (argv.empty()) {
        throw error{ error_code::invalid_argument, "run_process needs a command" };
    }
    pipe_pair out;
    pipe_pair err;

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, out.write_end(), STDOUT_FILENO);
    posix_spawn_file_actions_adddup2(&actions, err.write_end(), STDERR_FILENO);
    posix_spawn_file_actions_addclose(&actions, out.read_end());
    posix_spawn_file_actions_addclose(&actions, err.read_end());
    posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);

    std::vector<char *> args;
    args.reserve(argv.size() + 1);
    for (const std::string &a : argv) {
        args.push_back(const_cast<char *>(a.c_str()));
    }
    args.push_back(nullptr);

    pid_t pid{};
    const int rc = ::posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) {
        throw error{ error_code::backend_failure, "cannot start '" + argv[0] + "': " + std::strerror(rc) };
    }
    out.close_write();
    err.close_write();

    process_result result;
    std::array<pollfd, 2> fds{ { { out.read_end(), POLLIN, 0 }, { err.read_end(), POLLIN, 0 } } };
    std::array<std::string *, 2> sinks{ &result.standard_output, &result.standard_error };
    std::array<char, 4096> buffer{};
    int open_streams = 2;
    while (open_streams > 0) {
        if (::poll(fds.data(), fds.size(), -1) < 0) {
            if (errno == EINTR) {
                continue;
            }
            break;
        }
        for (std::size_t i = 0; i < fds.size(); ++i) {
            if (fds[i].fd < 0 || (fds[i].revents & (POLLIN | POLLHUP | POLLERR)) == 0) {
                continue;
            }
            const ssize_t n = ::read(fds[i].fd, buffer.data(), buffer.size());
            if (n > 0) {
                sinks[i]->append(buffer.data(), static_cast<std::size_t>(n));
            } else if (n == 0 || errno != EINTR) {
                fds[i].fd = -1;
                --open_streams;
            }
        }
    }

    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
    return result;
}

std::filesystem::path unique_temp_path(const std::string &prefix, const std::string &extension) {
    static std::atomic<std::uint64_t> counter{ 0 };
    const auto now = std::chrono::steady_clock::now().time_since_epoch().count();
    const std::string name = prefix + "-" + std::to_string(::getpid()) + "-" + std::to_string(now) + "-" + std::to_string(counter.fetch_add(1)) + extension;
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace neuro
