#include "platebench/subprocess.hpp"

#include <algorithm>
#include <cerrno>
#include <csignal>
#include <cstring>

#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "platebench/error.hpp"

namespace platebench {

std::string substitute_token(std::string text, const std::string& token,
                             const std::string& value) {
    std::size_t pos = 0;
    while ((pos = text.find(token, pos)) != std::string::npos) {
        text.replace(pos, token.size(), value);
        pos += value.size();
    }
    return text;
}

CommandResult run_command(const std::string& command,
                          std::optional<std::chrono::duration<double>> timeout) {
    int pipe_fds[2];
    if (::pipe(pipe_fds) != 0)
        throw Error(ErrorKind::Io, std::string("pipe: ") + std::strerror(errno));

    const pid_t pid = ::fork();
    if (pid < 0) {
        ::close(pipe_fds[0]);
        ::close(pipe_fds[1]);
        throw Error(ErrorKind::Io, std::string("fork: ") + std::strerror(errno));
    }
    if (pid == 0) {
        // Own process group so a timeout can kill the shell and its children.
        ::setpgid(0, 0);
        ::dup2(pipe_fds[1], STDOUT_FILENO);
        ::close(pipe_fds[0]);
        ::close(pipe_fds[1]);
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }

    ::close(pipe_fds[1]);
    CommandResult result;

    const auto start = std::chrono::steady_clock::now();
    bool eof = false;
    char buffer[4096];
    while (!eof) {
        int wait_ms = -1;
        if (timeout) {
            const auto elapsed = std::chrono::steady_clock::now() - start;
            const double remaining = (*timeout - std::chrono::duration<double>(elapsed)).count();
            if (remaining <= 0) {
                result.timed_out = true;
                ::kill(-pid, SIGKILL);
            } else {
                wait_ms = static_cast<int>(std::min(remaining * 1000.0 + 1.0, 3600000.0));
            }
        }
        if (result.timed_out) {
            // Drain whatever the killed process already wrote, then stop.
            ssize_t n;
            while ((n = ::read(pipe_fds[0], buffer, sizeof buffer)) > 0)
                result.output.append(buffer, static_cast<std::size_t>(n));
            break;
        }

        struct pollfd pfd{pipe_fds[0], POLLIN, 0};
        const int ready = ::poll(&pfd, 1, wait_ms);
        if (ready < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (ready == 0) continue; // deadline re-checked at the top
        const ssize_t n = ::read(pipe_fds[0], buffer, sizeof buffer);
        if (n > 0)
            result.output.append(buffer, static_cast<std::size_t>(n));
        else if (n == 0 || errno != EINTR)
            eof = true;
    }
    ::close(pipe_fds[0]);

    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
        result.exit_code = 128 + WTERMSIG(status);
    return result;
}

} // namespace platebench
