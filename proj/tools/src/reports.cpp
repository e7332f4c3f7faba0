#include "copuf/harness/reports.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <fstream>
#include <mutex>

#include <boost/uuid/uuid.hpp>
#include <boost/uuid/uuid_generators.hpp>
#include <boost/uuid/uuid_io.hpp>

#include "copuf/errors.hpp"

namespace copuf::harness {

using nlohmann::json;

std::string new_experiment_id() {
  static std::mutex mutex;
  static boost::uuids::random_generator generator;
  std::lock_guard lock(mutex);
  return boost::uuids::to_string(generator());
}

json make_record(const std::string& kind, const std::string& command, const json& config,
                 const json& inputs, const json& result) {
  const auto now = std::chrono::system_clock::now();
  return {
      {"id", new_experiment_id()},
      {"kind", kind},
      {"created", std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count()},
      {"tool_version", COPUF_VERSION_STRING},
      {"command", command},
      {"config", config},
      {"inputs", inputs},
      {"result", result},
  };
}

void append_report(const std::filesystem::path& path, const json& record) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create '" + path.parent_path().string() + "': " + ec.message());
  }
  const std::string line = record.dump() + "\n";
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) throw IoError("cannot open report file '" + path.string() + "'");
  const auto written = ::write(fd, line.data(), line.size());
  ::close(fd);
  if (written != static_cast<ssize_t>(line.size())) {
    throw IoError("short write to report file '" + path.string() + "'");
  }
}

std::vector<json> read_reports(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report file '" + path.string() + "'");
  std::vector<json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::optional<json> find_report(const std::filesystem::path& path, const std::string& id) {
  std::optional<json> match;
  for (auto& r : read_reports(path)) {
    const auto rid = r.value("id", std::string{});
    if (rid == id) return r;
    if (!id.empty() && rid.rfind(id, 0) == 0) {
      if (match) throw ConfigError("report id prefix '" + id + "' is ambiguous");
      match = std::move(r);
    }
  }
  return match;
}

}  // namespace copuf::harness
