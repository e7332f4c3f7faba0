#include "copuf/descriptor.hpp"

#include <fstream>
#include <sstream>

#include "copuf/errors.hpp"

namespace copuf {

namespace {
constexpr std::string_view kDescriptorFormat = "copuf-instance/1";
}

std::string_view to_string(Architecture arch) {
  switch (arch) {
    case Architecture::kApuf: return "apuf";
    case Architecture::kFf: return "ff";
    case Architecture::kXorFf: return "xor-ff";
    case Architecture::kOaxFf: return "oax-ff";
    case Architecture::kMn: return "mn";
    case Architecture::kIpuf: return "ipuf";
  }
  return "unknown";
}

Architecture parse_architecture(std::string_view text) {
  for (auto arch : {Architecture::kApuf, Architecture::kFf, Architecture::kXorFf,
                    Architecture::kOaxFf, Architecture::kMn, Architecture::kIpuf}) {
    if (text == to_string(arch)) return arch;
  }
  throw ConfigError("unknown architecture '" + std::string(text) +
                    "'; expected one of apuf, ff, xor-ff, oax-ff, mn, ipuf");
}

std::string InstanceDescriptor::label() const {
  std::ostringstream out;
  const std::string loops_label = loop_id.empty() ? format_loop_layout(loops) : loop_id;
  switch (arch) {
    case Architecture::kApuf: out << n << "-apuf"; break;
    case Architecture::kFf: out << "ff[" << loops_label << "]"; break;
    case Architecture::kXorFf: out << z << "-xor-ff[" << loops_label << "]"; break;
    case Architecture::kOaxFf:
      out << "(" << x << "," << y << "," << z << ")-oax-ff[" << loops_label << "]";
      break;
    case Architecture::kMn:
      out << "M" << n << "_{" << mn_sizes[0] << "," << mn_sizes[1] << "," << mn_sizes[2] << "}";
      break;
    case Architecture::kIpuf: out << "(" << x << "," << y << ")-ipuf"; break;
  }
  return out.str();
}

void validate(const InstanceDescriptor& d) {
  if (d.n < 1 || d.n > 4096) throw ConfigError("n must lie in 1..4096");
  if (!(d.sigma >= 0.0)) throw ConfigError("sigma must be >= 0");
  switch (d.arch) {
    case Architecture::kApuf:
      if (!d.loops.empty()) throw ConfigError("plain APUF takes no loops");
      break;
    case Architecture::kFf:
      validate_loop_layout(d.loops, d.n);
      break;
    case Architecture::kXorFf:
      validate_loop_layout(d.loops, d.n);
      if (d.z < 1) throw ConfigError("xor-ff needs z >= 1");
      break;
    case Architecture::kOaxFf:
      validate_loop_layout(d.loops, d.n);
      if (d.x + d.y + d.z < 1) throw ConfigError("oax-ff needs x + y + z >= 1");
      break;
    case Architecture::kMn:
      if (d.n < 3) throw ConfigError("mn needs n >= 3");
      for (auto s : d.mn_sizes) {
        if (s < 1 || s > d.n) throw ConfigError("mn auxiliary sizes must lie in 1..n");
      }
      break;
    case Architecture::kIpuf: {
      if (d.x < 1 || d.y < 1) throw ConfigError("ipuf needs x >= 1 and y >= 1");
      const auto pos = d.effective_interpose();
      if (pos < 1 || pos > d.n + 1) throw ConfigError("interpose position must lie in 1..n+1");
      break;
    }
  }
}

PufInstance build_instance(const InstanceDescriptor& d) {
  validate(d);
  switch (d.arch) {
    case Architecture::kApuf: return ApufInstance::create(d.seed, d.n);
    case Architecture::kFf: return FfApufInstance::create(d.seed, d.n, d.loops);
    case Architecture::kXorFf: return make_xor_ff(d.seed, d.n, d.loops, d.z);
    case Architecture::kOaxFf: return make_oax_ff(d.seed, d.n, d.loops, d.x, d.y, d.z);
    case Architecture::kMn: return make_mn(d.seed, d.n, d.mn_sizes);
    case Architecture::kIpuf: return make_ipuf(d.seed, d.n, d.x, d.y, d.effective_interpose());
  }
  throw ConfigError("unhandled architecture");
}

nlohmann::json to_json(const InstanceDescriptor& d) {
  nlohmann::json j;
  j["format"] = kDescriptorFormat;
  j["arch"] = to_string(d.arch);
  j["label"] = d.label();
  j["n"] = d.n;
  j["seed"] = d.seed;
  j["sigma"] = d.sigma;
  j["noise_calibration"] = kNoiseCalibration;
  switch (d.arch) {
    case Architecture::kApuf: break;
    case Architecture::kFf:
    case Architecture::kXorFf:
    case Architecture::kOaxFf:
      if (!d.loop_id.empty()) j["loop_id"] = d.loop_id;
      j["loops"] = format_loop_layout(d.loops);
      j["k"] = d.k();
      if (d.arch == Architecture::kXorFf) j["z"] = d.z;
      if (d.arch == Architecture::kOaxFf) j["xyz"] = {d.x, d.y, d.z};
      break;
    case Architecture::kMn:
      j["mn_sizes"] = d.mn_sizes;
      j["mn_subset_rule"] = "prefix";
      break;
    case Architecture::kIpuf:
      j["xy"] = {d.x, d.y};
      j["interpose_pos"] = d.effective_interpose();
      break;
  }
  return j;
}

InstanceDescriptor descriptor_from_json(const nlohmann::json& j) {
  try {
    InstanceDescriptor d;
    if (j.contains("format") && j.at("format").get<std::string>() != kDescriptorFormat) {
      throw ConfigError("unsupported descriptor format '" + j.at("format").get<std::string>() + "'");
    }
    d.arch = parse_architecture(j.at("arch").get<std::string>());
    d.n = j.value("n", std::size_t{64});
    d.seed = j.value("seed", std::uint64_t{0});
    d.sigma = j.value("sigma", 0.05);
    if (j.contains("loop_id")) d.loop_id = j.at("loop_id").get<std::string>();
    if (j.contains("loops")) {
      d.loops = parse_loop_layout(j.at("loops").get<std::string>());
    } else if (!d.loop_id.empty()) {
      d.loops = resolve_loop_layout(d.loop_id);
    }
    if (j.contains("z")) d.z = j.at("z").get<std::size_t>();
    if (j.contains("xyz")) {
      const auto xyz = j.at("xyz").get<std::vector<std::size_t>>();
      if (xyz.size() != 3) throw ConfigError("xyz must have three entries");
      d.x = xyz[0];
      d.y = xyz[1];
      d.z = xyz[2];
    }
    if (j.contains("xy")) {
      const auto xy = j.at("xy").get<std::vector<std::size_t>>();
      if (xy.size() != 2) throw ConfigError("xy must have two entries");
      d.x = xy[0];
      d.y = xy[1];
    }
    if (j.contains("mn_sizes")) d.mn_sizes = j.at("mn_sizes").get<std::array<std::size_t, 3>>();
    if (j.contains("mn_subset_rule") && j.at("mn_subset_rule").get<std::string>() != "prefix") {
      throw ConfigError("only the 'prefix' Mn subset rule is supported");
    }
    if (j.contains("interpose_pos")) d.interpose_pos = j.at("interpose_pos").get<std::size_t>();
    validate(d);
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed instance descriptor: ") + e.what());
  }
}

void write_descriptor(const InstanceDescriptor& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write descriptor " + path.string());
  out << to_json(d).dump(2) << '\n';
  if (!out) throw IoError("failed writing descriptor " + path.string());
}

InstanceDescriptor read_descriptor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open descriptor " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("descriptor " + path.string() + " is not valid JSON: " + e.what());
  }
  return descriptor_from_json(j);
}

}  // namespace copuf
