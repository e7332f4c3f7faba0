#include "copuf/composite.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>
#include <type_traits>

#include "copuf/errors.hpp"

namespace copuf {
namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::size_t parse_position(std::string_view text, std::string_view context) {
  const std::string t = trim(text);
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError("bad stage number '" + t + "' in loop layout '" + std::string(context) + "'");
  }
  return value;
}

std::vector<std::string> split_on(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    auto pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

void check_stages(std::span<const std::uint8_t> bits, std::size_t n) {
  if (bits.size() != n) {
    throw ConfigError("challenge has " + std::to_string(bits.size()) + " bits, instance has " +
                      std::to_string(n) + " stages");
  }
}

// Sum of w[i] * phi[i] over the parity of bits, evaluated in index order so
// that the result matches evaluate_delay bit for bit.
double chain_delay(std::span<const double> w, std::span<const std::uint8_t> bits,
                   std::span<double> phi_buffer) {
  parity_transform(bits, phi_buffer);
  double delta = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) delta += w[i] * phi_buffer[i];
  return delta;
}

std::uint8_t ff_respond_bits(const FfApufInstance& inst, std::vector<std::uint8_t>& bits,
                             const NoiseModel& noise, Rng& rng) {
  const std::size_t n = inst.n();
  check_stages(bits, n);
  std::vector<double> w = inst.base.weights;
  std::vector<double> bias(inst.loops.size());
  for (std::size_t l = 0; l < inst.loops.size(); ++l) bias[l] = inst.loops[l].arbiter_bias;
  if (!noise.noise_free()) {
    // One draw per evaluation, shared by the intermediate and final arbiters.
    const double sd = noise.stddev();
    for (auto& v : w) v = v + sd * rng.gaussian();
    for (auto& b : bias) b += sd * rng.gaussian();
  }
  std::vector<double> phi(n + 1);
  for (std::size_t l = 0; l < inst.loops.size(); ++l) {
    const auto& site = inst.loops[l].site;
    const std::size_t s = site.arbiter_stage;
    std::span<double> sub_phi(phi.data(), s + 1);
    const double partial =
        chain_delay(std::span<const double>(w.data(), s),
                    std::span<const std::uint8_t>(bits.data(), s), sub_phi) +
        bias[l];
    const std::uint8_t b = arbitrate(partial);
    for (auto e : site.end_positions) bits[e - 1] = b;
  }
  return arbitrate(chain_delay(w, bits, phi));
}

}  // namespace

LoopLayout parse_loop_layout(std::string_view text) {
  std::string normalized(text);
  // Unicode right arrow (U+2192) to "->".
  for (std::size_t pos; (pos = normalized.find("\xE2\x86\x92")) != std::string::npos;) {
    normalized.replace(pos, 3, "->");
  }
  LoopLayout layout;
  if (trim(normalized).empty()) return layout;
  for (const auto& part : split_on(normalized, ';')) {
    auto arrow = part.find("->");
    if (arrow == std::string::npos) {
      throw ConfigError("loop '" + trim(part) + "' is not of the form s->e1,e2");
    }
    LoopSite site;
    site.arbiter_stage = parse_position(std::string_view(part).substr(0, arrow), text);
    for (const auto& e : split_on(std::string_view(part).substr(arrow + 2), ',')) {
      site.end_positions.push_back(parse_position(e, text));
    }
    layout.push_back(std::move(site));
  }
  return layout;
}

std::string format_loop_layout(const LoopLayout& layout) {
  std::ostringstream out;
  for (std::size_t l = 0; l < layout.size(); ++l) {
    if (l) out << ';';
    out << layout[l].arbiter_stage << "->";
    for (std::size_t e = 0; e < layout[l].end_positions.size(); ++e) {
      if (e) out << ',';
      out << layout[l].end_positions[e];
    }
  }
  return out.str();
}

const std::vector<std::pair<std::string, LoopLayout>>& named_loop_layouts() {
  static const std::vector<std::pair<std::string, LoopLayout>> table = {
      {"Loop_A", parse_loop_layout("15->25")},
      {"Loop_B", parse_loop_layout("15->25,30")},
      {"Loop_C", parse_loop_layout("15->25,30,35")},
      {"Loop_D", parse_loop_layout("8->62;16->63;32->64")},
      {"Loop_E", parse_loop_layout("15->25,30,35,40")},
      {"Loop_F", parse_loop_layout("15->25,30,35,40,45")},
      {"Loop_G", parse_loop_layout("15->25,30,35,40,45,50")},
  };
  return table;
}

LoopLayout resolve_loop_layout(std::string_view id_or_layout) {
  const std::string key = lower(trim(id_or_layout));
  if (key.empty() || key == "none") return {};
  for (const auto& [id, layout] : named_loop_layouts()) {
    const std::string name = lower(id);
    if (key == name || key == name.substr(5) || key == "loop" + name.substr(5)) return layout;
  }
  if (key.find("->") == std::string::npos &&
      std::string(id_or_layout).find("\xE2\x86\x92") == std::string::npos) {
    std::string valid;
    for (const auto& [id, layout] : named_loop_layouts()) valid += (valid.empty() ? "" : ", ") + id;
    throw ConfigError("unknown loop configuration '" + std::string(id_or_layout) +
                      "'; valid IDs: " + valid + " (or an explicit layout such as 15->25,30)");
  }
  return parse_loop_layout(id_or_layout);
}

void validate_loop_layout(const LoopLayout& layout, std::size_t n) {
  std::set<std::size_t> seen;
  for (const auto& site : layout) {
    const std::size_t s = site.arbiter_stage;
    if (s < 1 || s >= n) {
      throw ConfigError("arbiter stage " + std::to_string(s) + " outside 1.." +
                        std::to_string(n - 1));
    }
    if (site.end_positions.empty()) {
      throw ConfigError("arbiter at stage " + std::to_string(s) + " has no end positions");
    }
    for (auto e : site.end_positions) {
      if (e <= s || e > n) {
        throw ConfigError("end position " + std::to_string(e) + " must lie in " +
                          std::to_string(s + 1) + ".." + std::to_string(n));
      }
      if (!seen.insert(e).second) {
        throw ConfigError("end position " + std::to_string(e) + " used twice");
      }
    }
  }
  if (seen.size() >= n) throw ConfigError("loop count k must be smaller than n");
}

std::size_t end_count(const LoopLayout& layout) {
  std::size_t k = 0;
  for (const auto& site : layout) k += site.end_positions.size();
  return k;
}

std::vector<std::size_t> sorted_end_positions(const LoopLayout& layout) {
  std::vector<std::size_t> ends;
  for (const auto& site : layout) ends.insert(ends.end(), site.end_positions.begin(), site.end_positions.end());
  std::sort(ends.begin(), ends.end());
  return ends;
}

std::size_t FfApufInstance::k() const noexcept {
  std::size_t k = 0;
  for (const auto& l : loops) k += l.site.end_positions.size();
  return k;
}

LoopLayout FfApufInstance::layout() const {
  LoopLayout out;
  for (const auto& l : loops) out.push_back(l.site);
  return out;
}

FfApufInstance FfApufInstance::create(std::uint64_t seed, std::size_t n, const LoopLayout& layout) {
  validate_loop_layout(layout, n);
  FfApufInstance inst;
  inst.base = ApufInstance::create(seed, n);
  LoopLayout sorted = layout;
  std::stable_sort(sorted.begin(), sorted.end(), [](const LoopSite& a, const LoopSite& b) {
    return a.arbiter_stage < b.arbiter_stage;
  });
  Rng bias_rng(mix_seed(seed, stream::kArbiterBias));
  for (auto& site : sorted) {
    std::sort(site.end_positions.begin(), site.end_positions.end());
    inst.loops.push_back(LoopSpec{std::move(site), bias_rng.gaussian()});
  }
  return inst;
}

std::uint64_t member_seed(std::uint64_t instance_seed, std::size_t index) {
  return mix_seed(instance_seed, stream::kMember, index);
}

XorFfInstance make_xor_ff(std::uint64_t seed, std::size_t n, const LoopLayout& layout,
                          std::size_t z) {
  if (z == 0) throw ConfigError("XOR-FF needs at least one member");
  XorFfInstance inst;
  for (std::size_t i = 0; i < z; ++i) {
    inst.members.push_back(FfApufInstance::create(member_seed(seed, i), n, layout));
  }
  return inst;
}

OaxFfInstance make_oax_ff(std::uint64_t seed, std::size_t n, const LoopLayout& layout,
                          std::size_t x, std::size_t y, std::size_t z) {
  if (x + y + z == 0) throw ConfigError("OAX-FF needs at least one member");
  OaxFfInstance inst;
  std::size_t index = 0;
  auto fill = [&](std::vector<FfApufInstance>& group, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      group.push_back(FfApufInstance::create(member_seed(seed, index++), n, layout));
    }
  };
  fill(inst.or_members, x);
  fill(inst.and_members, y);
  fill(inst.xor_members, z);
  return inst;
}

MnApufInstance make_mn(std::uint64_t seed, std::size_t n, std::array<std::size_t, 3> sizes) {
  if (n < 3) throw ConfigError("Mn-APUF needs at least 3 main stages");
  MnApufInstance inst;
  inst.main = ApufInstance::create(member_seed(seed, 0), n);
  for (std::size_t a = 0; a < 3; ++a) {
    if (sizes[a] < 1 || sizes[a] > n) {
      throw ConfigError("auxiliary size " + std::to_string(sizes[a]) + " outside 1.." +
                        std::to_string(n));
    }
    inst.aux[a] = ApufInstance::create(member_seed(seed, a + 1), sizes[a]);
  }
  return inst;
}

IpufInstance make_ipuf(std::uint64_t seed, std::size_t n, std::size_t x, std::size_t y,
                       std::size_t interpose_pos) {
  if (x == 0 || y == 0) throw ConfigError("iPUF needs x >= 1 and y >= 1");
  if (interpose_pos < 1 || interpose_pos > n + 1) {
    throw ConfigError("interpose position " + std::to_string(interpose_pos) + " outside 1.." +
                      std::to_string(n + 1));
  }
  IpufInstance inst;
  inst.interpose_pos = interpose_pos;
  for (std::size_t i = 0; i < x; ++i) inst.lower.push_back(ApufInstance::create(member_seed(seed, i), n));
  for (std::size_t j = 0; j < y; ++j) {
    inst.upper.push_back(ApufInstance::create(member_seed(seed, x + j), n + 1));
  }
  return inst;
}

std::uint8_t ff_respond(const FfApufInstance& inst, const Challenge& c, const NoiseModel& noise,
                        Rng& rng) {
  std::vector<std::uint8_t> bits(c.bits().begin(), c.bits().end());
  return ff_respond_bits(inst, bits, noise, rng);
}

std::uint8_t xor_ff_respond(const XorFfInstance& inst, const Challenge& c,
                            const NoiseModel& noise, Rng& rng) {
  if (inst.members.empty()) throw ConfigError("XOR-FF instance has no members");
  std::uint8_t r = 0;
  for (const auto& m : inst.members) r ^= ff_respond(m, c, noise, rng);
  return r;
}

std::uint8_t oax_ff_respond(const OaxFfInstance& inst, const Challenge& c,
                            const NoiseModel& noise, Rng& rng) {
  if (inst.or_members.empty() && inst.and_members.empty() && inst.xor_members.empty()) {
    throw ConfigError("OAX-FF instance has no members");
  }
  // Every member is evaluated (no short-circuit) so noise consumption does
  // not depend on earlier responses.
  std::uint8_t r_or = 0;
  for (const auto& m : inst.or_members) r_or |= ff_respond(m, c, noise, rng);
  std::uint8_t r_and = inst.and_members.empty() ? 0 : 1;
  for (const auto& m : inst.and_members) r_and &= ff_respond(m, c, noise, rng);
  std::uint8_t r_xor = 0;
  for (const auto& m : inst.xor_members) r_xor ^= ff_respond(m, c, noise, rng);
  return r_or ^ r_and ^ r_xor;
}

std::uint8_t mn_respond(const MnApufInstance& inst, const Challenge& c, const NoiseModel& noise,
                        Rng& rng) {
  const std::size_t n = inst.main.n;
  check_stages(c.bits(), n);
  std::vector<std::uint8_t> bits(c.bits().begin(), c.bits().end());
  std::array<std::uint8_t, 3> driven{};
  for (std::size_t a = 0; a < 3; ++a) {
    const std::size_t size = inst.aux[a].n;
    if (size > n) throw ConfigError("auxiliary subset exceeds the main challenge");
    driven[a] = apuf_respond(inst.aux[a], c.bits().subspan(0, size), noise, rng);
  }
  for (std::size_t a = 0; a < 3; ++a) bits[n - 1 - a] = driven[a];
  return apuf_respond(inst.main, bits, noise, rng);
}

Challenge interpose(const Challenge& c, std::size_t pos, std::uint8_t bit) {
  if (pos < 1 || pos > c.size() + 1) {
    throw ConfigError("interpose position " + std::to_string(pos) + " outside 1.." +
                      std::to_string(c.size() + 1));
  }
  std::vector<std::uint8_t> bits;
  bits.reserve(c.size() + 1);
  bits.insert(bits.end(), c.bits().begin(), c.bits().begin() + static_cast<std::ptrdiff_t>(pos - 1));
  bits.push_back(bit);
  bits.insert(bits.end(), c.bits().begin() + static_cast<std::ptrdiff_t>(pos - 1), c.bits().end());
  return Challenge(std::move(bits));
}

std::uint8_t ipuf_respond(const IpufInstance& inst, const Challenge& c, const NoiseModel& noise,
                          Rng& rng) {
  if (inst.lower.empty() || inst.upper.empty()) throw ConfigError("iPUF has an empty layer");
  std::uint8_t interposed = 0;
  for (const auto& a : inst.lower) interposed ^= apuf_respond(a, c, noise, rng);
  const Challenge extended = interpose(c, inst.interpose_pos, interposed);
  std::uint8_t r = 0;
  for (const auto& a : inst.upper) r ^= apuf_respond(a, extended, noise, rng);
  return r;
}

std::uint8_t respond(const PufInstance& inst, const Challenge& c, const NoiseModel& noise,
                     Rng& rng) {
  return std::visit(
      [&](const auto& p) -> std::uint8_t {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ApufInstance>) return apuf_respond(p, c, noise, rng);
        else if constexpr (std::is_same_v<T, FfApufInstance>) return ff_respond(p, c, noise, rng);
        else if constexpr (std::is_same_v<T, XorFfInstance>) return xor_ff_respond(p, c, noise, rng);
        else if constexpr (std::is_same_v<T, OaxFfInstance>) return oax_ff_respond(p, c, noise, rng);
        else if constexpr (std::is_same_v<T, MnApufInstance>) return mn_respond(p, c, noise, rng);
        else return ipuf_respond(p, c, noise, rng);
      },
      inst);
}

std::size_t challenge_size(const PufInstance& inst) {
  return std::visit(
      [](const auto& p) -> std::size_t {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ApufInstance>) return p.n;
        else if constexpr (std::is_same_v<T, FfApufInstance>) return p.n();
        else if constexpr (std::is_same_v<T, XorFfInstance>) return p.members.at(0).n();
        else if constexpr (std::is_same_v<T, OaxFfInstance>) {
          if (!p.or_members.empty()) return p.or_members[0].n();
          if (!p.and_members.empty()) return p.and_members[0].n();
          return p.xor_members.at(0).n();
        } else if constexpr (std::is_same_v<T, MnApufInstance>) return p.main.n;
        else return p.lower.at(0).n;
      },
      inst);
}

}  // namespace copuf
