// Copyright 2026 The lfsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include "lfsynth/degrade.hpp"
#include "lfsynth/error.hpp"

extern char** environ;

namespace lfs {

namespace {

class TempDir {
 public:
  explicit TempDir(const std::filesystem::path& parent) {
    std::string pattern = (parent / "lfsynth-codec-XXXXXX").string();
    if (::mkdtemp(pattern.data()) == nullptr) {
      throw Error(Errc::kIoFailure, "mkdtemp under " + parent.string() + ": " +
                                        std::strerror(errno));
    }
    path_ = pattern;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::string substitute(std::string arg, const std::string& input,
                       const std::string& output) {
  auto replace_all = [&arg](std::string_view key, const std::string& value) {
    for (std::size_t pos = arg.find(key); pos != std::string::npos;
         pos = arg.find(key, pos + value.size())) {
      arg.replace(pos, key.size(), value);
    }
  };
  replace_all("{input}", input);
  replace_all("{output}", output);
  return arg;
}

std::string slurp(const std::filesystem::path& p, std::size_t limit = 4096) {
  std::ifstream in(p, std::ios::binary);
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (s.size() > limit) s.resize(limit);
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

std::string join(const std::vector<std::string>& argv) {
  std::ostringstream os;
  for (std::size_t i = 0; i < argv.size(); ++i) os << (i ? " " : "") << argv[i];
  return os.str();
}

}  // namespace

Waveform apply_external_codec(const Waveform& w, const CodecSpec& spec,
                              const ExternalCodecOptions& options) {
  if (spec.kind != CodecKind::kExternal) {
    throw Error(Errc::kInvalidArgument, "codec '" + spec.name + "' is not external");
  }
  spec.validate();

  TempDir tmp(options.workdir);
  const auto in_path = tmp.path() / "input.wav";
  const auto out_path = tmp.path() / "output.wav";
  const auto err_path = tmp.path() / "stderr.txt";
  write_wav(resample(w, spec.work_rate_hz), in_path);

  std::vector<std::string> argv;
  for (const auto& a : spec.command) {
    argv.push_back(substitute(a, in_path.string(), out_path.string()));
  }
  std::vector<char*> cargv;
  for (auto& a : argv) cargv.push_back(a.data());
  cargv.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, "/dev/null", O_WRONLY, 0);
  posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, err_path.c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0644);
  pid_t pid = 0;
  const int rc = ::posix_spawnp(&pid, cargv[0], &actions, nullptr, cargv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) {
    throw Error(Errc::kCodecProcessFailed,
                "codec '" + spec.name + "': cannot run '" + join(argv) + "': " +
                    std::strerror(rc));
  }

  const auto deadline = std::chrono::steady_clock::now() + options.timeout;
  int status = 0;
  auto sleep_for = std::chrono::microseconds(200);
  for (;;) {
    const pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0 && errno != EINTR) {
      throw Error(Errc::kCodecProcessFailed,
                  "waitpid for '" + join(argv) + "': " + std::strerror(errno));
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      throw Error(Errc::kTimeout,
                  "codec '" + spec.name + "' exceeded " +
                      std::to_string(options.timeout.count()) + " ms: " + join(argv));
    }
    std::this_thread::sleep_for(sleep_for);
    sleep_for = std::min(sleep_for * 2, std::chrono::microseconds(20'000));
  }

  const bool exited_ok = WIFEXITED(status) && WEXITSTATUS(status) == 0;
  if (!exited_ok) {
    // posix_spawnp can succeed and the child still fail to exec (exit 127).
    std::string why = WIFEXITED(status)
                          ? "exit status " + std::to_string(WEXITSTATUS(status))
                          : "killed by signal " + std::to_string(WTERMSIG(status));
    throw Error(Errc::kCodecProcessFailed,
                "codec '" + spec.name + "' command '" + join(argv) + "' failed (" +
                    why + "): " + slurp(err_path));
  }
  if (!std::filesystem::exists(out_path)) {
    throw Error(Errc::kOutputMissing,
                "codec '" + spec.name + "' exited 0 but wrote no " + out_path.filename().string());
  }
  return resample(read_wav(out_path), w.sample_rate());
}

}  // namespace lfs
