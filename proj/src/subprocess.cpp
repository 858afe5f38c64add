#include "edcheck/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <sstream>

namespace edcheck {

std::vector<std::string> split_command(const std::string& cmd) {
    std::istringstream in(cmd);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

namespace {

void close_fd(int& fd) {
    if (fd >= 0) ::close(fd);
    fd = -1;
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input,
                          std::chrono::milliseconds timeout) {
    ProcessResult res;
    if (argv.empty()) {
        res.error = "empty command";
        return res;
    }
    int in_pipe[2], out_pipe[2], err_pipe[2], exec_pipe[2];
    if (pipe2(in_pipe, O_CLOEXEC) || pipe2(out_pipe, O_CLOEXEC) || pipe2(err_pipe, O_CLOEXEC) ||
        pipe2(exec_pipe, O_CLOEXEC)) {
        res.error = std::string("pipe: ") + std::strerror(errno);
        return res;
    }
    pid_t pid = fork();
    if (pid < 0) {
        res.error = std::string("fork: ") + std::strerror(errno);
        return res;
    }
    if (pid == 0) {
        dup2(in_pipe[0], 0);
        dup2(out_pipe[1], 1);
        dup2(err_pipe[1], 2);
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) ::close(fd);
        std::vector<char*> args;
        for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
        args.push_back(nullptr);
        execvp(args[0], args.data());
        int e = errno;
        ssize_t ignored = write(exec_pipe[1], &e, sizeof e);
        (void)ignored;
        _exit(127);
    }
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    ::close(err_pipe[1]);
    ::close(exec_pipe[1]);

    int exec_errno = 0;
    ssize_t got = read(exec_pipe[0], &exec_errno, sizeof exec_errno);
    ::close(exec_pipe[0]);
    if (got == sizeof exec_errno) {
        for (int fd : {in_pipe[1], out_pipe[0], err_pipe[0]}) ::close(fd);
        waitpid(pid, nullptr, 0);
        res.error = "cannot execute '" + argv[0] + "': " + std::strerror(exec_errno);
        return res;
    }
    res.started = true;

    int to_child = in_pipe[1], from_out = out_pipe[0], from_err = err_pipe[0];
    fcntl(to_child, F_SETFL, O_NONBLOCK);
    signal(SIGPIPE, SIG_IGN);
    std::size_t written = 0;
    if (input.empty()) close_fd(to_child);
    const auto start = std::chrono::steady_clock::now();
    char buf[65536];
    while (from_out >= 0 || from_err >= 0) {
        pollfd fds[3];
        int n = 0;
        if (to_child >= 0) fds[n++] = {to_child, POLLOUT, 0};
        if (from_out >= 0) fds[n++] = {from_out, POLLIN, 0};
        if (from_err >= 0) fds[n++] = {from_err, POLLIN, 0};
        int wait_ms = 100;
        if (timeout.count() > 0) {
            auto left = timeout - std::chrono::duration_cast<std::chrono::milliseconds>(
                                      std::chrono::steady_clock::now() - start);
            if (left.count() <= 0) {
                res.timed_out = true;
                break;
            }
            wait_ms = static_cast<int>(std::min<long long>(left.count(), 100));
        }
        if (poll(fds, n, wait_ms) < 0 && errno != EINTR) break;
        for (int i = 0; i < n; ++i) {
            if (!fds[i].revents) continue;
            if (fds[i].fd == to_child) {
                ssize_t w = write(to_child, input.data() + written, input.size() - written);
                if (w > 0) written += static_cast<std::size_t>(w);
                if (w < 0 && errno != EAGAIN) written = input.size();
                if (written == input.size()) close_fd(to_child);
            } else {
                ssize_t r = read(fds[i].fd, buf, sizeof buf);
                std::string& dst = fds[i].fd == from_out ? res.out : res.err;
                if (r > 0) dst.append(buf, static_cast<std::size_t>(r));
                else if (fds[i].fd == from_out) close_fd(from_out);
                else close_fd(from_err);
            }
        }
    }
    close_fd(to_child);
    close_fd(from_out);
    close_fd(from_err);
    if (res.timed_out) kill(pid, SIGKILL);
    int status = 0;
    waitpid(pid, &status, 0);
    if (WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
    return res;
}

}  // namespace edcheck
