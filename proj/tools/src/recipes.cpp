#include "copuf/harness/recipes.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "copuf/errors.hpp"

namespace copuf::harness {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

InstanceDescriptor ff(const std::string& loop, std::size_t n = 64) {
  InstanceDescriptor d;
  d.arch = Architecture::kFf;
  d.n = n;
  d.loop_id = loop;
  d.loops = resolve_loop_layout(loop);
  return d;
}

InstanceDescriptor ff_layout(const std::string& layout, std::size_t n) {
  InstanceDescriptor d;
  d.arch = Architecture::kFf;
  d.n = n;
  d.loops = parse_loop_layout(layout);
  return d;
}

InstanceDescriptor xor_ff(const std::string& loop, std::size_t z) {
  auto d = ff(loop);
  d.arch = Architecture::kXorFf;
  d.z = z;
  return d;
}

InstanceDescriptor oax_ff(const std::string& loop, std::size_t x, std::size_t y, std::size_t z) {
  auto d = ff(loop);
  d.arch = Architecture::kOaxFf;
  d.x = x;
  d.y = y;
  d.z = z;
  return d;
}

InstanceDescriptor mn() {
  InstanceDescriptor d;
  d.arch = Architecture::kMn;
  return d;
}

InstanceDescriptor ipuf(std::size_t x, std::size_t y) {
  InstanceDescriptor d;
  d.arch = Architecture::kIpuf;
  d.x = x;
  d.y = y;
  d.interpose_pos = 33;
  return d;
}

PublishedValues ber_uni(double ber, double uniformity, std::optional<double> ber_low = std::nullopt) {
  PublishedValues v;
  v.ber = ber;
  v.ber_low = ber_low;
  v.uniformity = uniformity;
  return v;
}

std::string loop_token(const InstanceDescriptor& d) {
  return d.loop_id.empty() ? "custom" : lower(d.loop_id);
}

RecipeRow metrics_row(std::string table, std::string id, InstanceDescriptor d, PublishedValues published) {
  RecipeRow r;
  r.table = std::move(table);
  r.id = std::move(id);
  r.kind = RowKind::kMetrics;
  r.config.instance = std::move(d);
  r.config.sigma = 0.05;
  r.published = published;
  return r;
}

struct AttackSpec {
  std::size_t train;
  std::size_t val;
  std::size_t epochs;
  std::size_t batch;
  double accuracy;
  unsigned l;
};

RecipeRow attack_row(std::string table, std::string id, InstanceDescriptor d, const AttackSpec& s) {
  RecipeRow r;
  r.table = std::move(table);
  r.id = std::move(id);
  r.kind = RowKind::kAttack;
  r.config.instance = std::move(d);
  r.config.sizes = {s.train, s.val, 1000};
  r.config.mlp.epochs = s.epochs;
  r.config.mlp.batch_size = s.batch;
  r.config.mlp.l = s.l;
  r.published.accuracy = s.accuracy;
  r.desk_scale = s.train <= 1'000'000;
  return r;
}

std::string xyz_token(std::size_t x, std::size_t y, std::size_t z) {
  return std::to_string(x) + "-" + std::to_string(y) + "-" + std::to_string(z);
}

// Appends -b<batch>, then -n<train> to ids that collide within a table.
void make_unique(std::vector<RecipeRow>& rows) {
  auto bump = [&](auto suffix) {
    std::map<std::string, int> seen;
    for (const auto& r : rows) ++seen[r.id];
    for (auto& r : rows) {
      if (seen[r.id] > 1) r.id += suffix(r);
    }
  };
  bump([](const RecipeRow& r) { return "-b" + std::to_string(r.config.mlp.batch_size); });
  bump([](const RecipeRow& r) { return "-e" + std::to_string(r.config.mlp.epochs); });
  bump([](const RecipeRow& r) { return "-n" + std::to_string(r.config.sizes.train); });
}

std::vector<RecipeRow> table2() {
  std::vector<RecipeRow> rows;
  rows.push_back(metrics_row("table2", "m64", mn(), ber_uni(0.223, 0.522)));
  const struct {
    std::size_t x, y;
    double low, high, uni;
  } ip[] = {{3, 3, 0.118, 0.279, 0.502},
            {4, 4, 0.137, 0.323, 0.508},
            {5, 5, 0.166, 0.362, 0.509},
            {1, 7, 0.177, 0.389, 0.486}};
  for (const auto& p : ip) {
    rows.push_back(metrics_row("table2", "ipuf-" + std::to_string(p.x) + "-" + std::to_string(p.y),
                               ipuf(p.x, p.y), ber_uni(p.high, p.uni, p.low)));
  }
  return rows;
}

std::vector<RecipeRow> table4() {
  const struct {
    const char* loop;
    double ber, uni;
  } data[] = {{"Loop_B", 0.071, 0.405}, {"Loop_C", 0.081, 0.399}, {"Loop_D", 0.201, 0.443},
              {"Loop_E", 0.073, 0.400}, {"Loop_F", 0.080, 0.404}, {"Loop_G", 0.075, 0.401}};
  std::vector<RecipeRow> rows;
  for (const auto& d : data) {
    auto desc = ff(d.loop);
    rows.push_back(metrics_row("table4", loop_token(desc), desc, ber_uni(d.ber, d.uni)));
  }
  return rows;
}

std::vector<RecipeRow> table5() {
  const struct {
    const char* loop;
    std::size_t z;
    double ber, uni;
  } xors[] = {
      {"Loop_A", 2, 0.127, 0.433}, {"Loop_A", 3, 0.225, 0.507}, {"Loop_A", 4, 0.255, 0.496},
      {"Loop_A", 5, 0.357, 0.494}, {"Loop_A", 6, 0.402, 0.496}, {"Loop_B", 2, 0.117, 0.509},
      {"Loop_B", 3, 0.212, 0.503}, {"Loop_B", 4, 0.249, 0.505}, {"Loop_B", 5, 0.321, 0.499},
      {"Loop_C", 2, 0.130, 0.437}, {"Loop_C", 3, 0.246, 0.506}, {"Loop_C", 4, 0.259, 0.494},
      {"Loop_E", 2, 0.122, 0.503}, {"Loop_E", 3, 0.218, 0.496}, {"Loop_E", 4, 0.257, 0.503},
      {"Loop_F", 2, 0.135, 0.429}, {"Loop_F", 3, 0.252, 0.508}, {"Loop_G", 2, 0.138, 0.505},
  };
  const struct {
    const char* loop;
    std::size_t x, y, z;
    double ber, uni;
  } oaxs[] = {
      {"Loop_A", 1, 2, 1, 0.200, 0.523}, {"Loop_A", 2, 1, 1, 0.193, 0.562},
      {"Loop_A", 2, 1, 2, 0.305, 0.492}, {"Loop_A", 1, 2, 2, 0.281, 0.497},
      {"Loop_A", 2, 2, 1, 0.226, 0.488}, {"Loop_A", 1, 3, 1, 0.204, 0.440},
      {"Loop_A", 3, 1, 1, 0.227, 0.540}, {"Loop_A", 1, 2, 3, 0.353, 0.494},
      {"Loop_A", 2, 1, 3, 0.349, 0.497}, {"Loop_A", 2, 2, 2, 0.273, 0.507},
      {"Loop_A", 3, 1, 2, 0.283, 0.507}, {"Loop_A", 1, 3, 2, 0.276, 0.484},
      {"Loop_A", 2, 3, 1, 0.192, 0.495}, {"Loop_A", 3, 2, 1, 0.203, 0.512},
      {"Loop_A", 1, 4, 1, 0.197, 0.468}, {"Loop_A", 4, 1, 1, 0.205, 0.519},
      {"Loop_B", 1, 2, 1, 0.185, 0.529}, {"Loop_B", 2, 1, 1, 0.193, 0.534},
      {"Loop_B", 2, 1, 2, 0.272, 0.498}, {"Loop_B", 1, 2, 2, 0.263, 0.495},
      {"Loop_B", 2, 2, 1, 0.215, 0.503}, {"Loop_B", 1, 3, 1, 0.190, 0.466},
      {"Loop_B", 3, 1, 1, 0.193, 0.551}, {"Loop_B", 1, 2, 3, 0.314, 0.501},
      {"Loop_B", 2, 1, 3, 0.323, 0.499}, {"Loop_B", 2, 2, 2, 0.243, 0.510},
      {"Loop_B", 3, 1, 2, 0.255, 0.504}, {"Loop_B", 1, 3, 2, 0.241, 0.505},
      {"Loop_B", 2, 3, 1, 0.168, 0.567}, {"Loop_B", 3, 2, 1, 0.178, 0.538},
      {"Loop_B", 1, 4, 1, 0.162, 0.565}, {"Loop_B", 4, 1, 1, 0.181, 0.515},
      {"Loop_C", 1, 2, 1, 0.206, 0.512}, {"Loop_C", 2, 1, 1, 0.212, 0.558},
      {"Loop_C", 2, 1, 2, 0.307, 0.499}, {"Loop_C", 1, 2, 2, 0.295, 0.498},
      {"Loop_C", 2, 2, 1, 0.241, 0.496}, {"Loop_C", 1, 3, 1, 0.216, 0.457},
      {"Loop_C", 3, 1, 1, 0.223, 0.542},
  };
  std::vector<RecipeRow> rows;
  for (const auto& r : xors) {
    auto desc = xor_ff(r.loop, r.z);
    rows.push_back(metrics_row("table5", "xor-" + loop_token(desc) + "-z" + std::to_string(r.z), desc,
                               ber_uni(r.ber, r.uni)));
  }
  for (const auto& r : oaxs) {
    auto desc = oax_ff(r.loop, r.x, r.y, r.z);
    rows.push_back(metrics_row("table5", "oax-" + loop_token(desc) + "-" + xyz_token(r.x, r.y, r.z),
                               desc, ber_uni(r.ber, r.uni)));
  }
  return rows;
}

std::vector<RecipeRow> table8() {
  const struct {
    const char* loop;
    AttackSpec s;
  } data[] = {
      {"Loop_B", {20000, 5000, 100, 20, 0.936, 0}},   {"Loop_C", {20000, 5000, 100, 20, 0.885, 0}},
      {"Loop_E", {200000, 50000, 50, 200, 0.924, 0}}, {"Loop_F", {200000, 50000, 50, 200, 0.894, 0}},
      {"Loop_G", {200000, 50000, 50, 200, 0.861, 0}},
  };
  std::vector<RecipeRow> rows;
  for (const auto& d : data) {
    auto desc = ff(d.loop);
    auto row = attack_row("table8", loop_token(desc), desc, d.s);
    row.config.mlp.baseline = true;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RecipeRow> table9() {
  const struct {
    const char* loop;
    AttackSpec s;
  } data[] = {
      {"Loop_B", {20000, 5000, 100, 20, 0.955, 3}},   {"Loop_C", {20000, 5000, 100, 20, 0.913, 4}},
      {"Loop_E", {200000, 50000, 50, 200, 0.921, 5}}, {"Loop_F", {200000, 50000, 50, 200, 0.928, 6}},
      {"Loop_G", {200000, 50000, 50, 200, 0.893, 7}}, {"Loop_D", {200000, 50000, 100, 20, 0.919, 4}},
  };
  std::vector<RecipeRow> rows;
  for (const auto& d : data) {
    auto desc = ff(d.loop);
    rows.push_back(attack_row("table9", loop_token(desc), desc, d.s));
  }
  rows.push_back(attack_row("table9", "m64", mn(), {200000, 50000, 100, 20, 0.939, 4}));
  return rows;
}

std::vector<RecipeRow> table10() {
  const struct {
    const char* loop;
    std::size_t z;
    AttackSpec s;
  } data[] = {
      {"Loop_A", 2, {20000, 5000, 100, 20, 0.937, 4}},
      {"Loop_A", 3, {40000, 10000, 100, 20, 0.919, 5}},
      {"Loop_A", 4, {100000, 25000, 100, 20, 0.935, 6}},
      {"Loop_A", 5, {400000, 100000, 100, 200, 0.901, 7}},
      {"Loop_A", 6, {500000, 125000, 100, 200, 0.528, 8}},
      {"Loop_A", 6, {500000, 125000, 100, 200, 0.507, 7}},
      {"Loop_B", 2, {100000, 25000, 100, 20, 0.932, 5}},
      {"Loop_B", 3, {200000, 50000, 100, 20, 0.885, 6}},
      {"Loop_B", 4, {400000, 100000, 100, 200, 0.886, 7}},
      {"Loop_B", 5, {500000, 125000, 100, 200, 0.854, 7}},
      {"Loop_C", 2, {100000, 25000, 100, 20, 0.881, 6}},
      {"Loop_C", 3, {500000, 125000, 100, 200, 0.852, 7}},
      {"Loop_C", 4, {500000, 100000, 100, 200, 0.822, 7}},
      {"Loop_C", 4, {500000, 125000, 100, 200, 0.794, 8}},
      {"Loop_E", 2, {500000, 125000, 100, 200, 0.872, 7}},
      {"Loop_E", 3, {500000, 125000, 100, 200, 0.834, 7}},
      {"Loop_E", 4, {500000, 125000, 100, 200, 0.789, 7}},
      {"Loop_F", 2, {500000, 125000, 100, 200, 0.839, 7}},
      {"Loop_F", 3, {500000, 125000, 100, 200, 0.803, 7}},
      {"Loop_G", 2, {500000, 125000, 100, 200, 0.784, 8}},
      {"Loop_G", 2, {500000, 125000, 100, 200, 0.815, 7}},
  };
  std::vector<RecipeRow> rows;
  for (const auto& d : data) {
    auto desc = xor_ff(d.loop, d.z);
    rows.push_back(attack_row("table10",
                              loop_token(desc) + "-z" + std::to_string(d.z) + "-l" + std::to_string(d.s.l),
                              desc, d.s));
  }
  return rows;
}

std::vector<RecipeRow> table11() {
  struct Row {
    const char* loop;
    std::size_t x, y, z;
    AttackSpec s;
    std::vector<std::size_t> hidden;
  };
  const AttackSpec a4{100000, 25000, 100, 20, 0, 0};
  const AttackSpec big{500000, 125000, 50, 200, 0, 0};
  const AttackSpec b4{400000, 100000, 50, 200, 0, 0};
  const AttackSpec c5{600000, 150000, 50, 200, 0, 0};
  auto with = [](AttackSpec s, double acc, unsigned l) {
    s.accuracy = acc;
    s.l = l;
    return s;
  };
  const std::vector<Row> data = {
      {"Loop_A", 1, 2, 1, with(a4, 0.948, 5), {}},
      {"Loop_A", 1, 2, 1, with(a4, 0.938, 6), {}},
      {"Loop_A", 2, 1, 1, with(a4, 0.949, 5), {8, 32, 8}},
      {"Loop_A", 2, 1, 1, with(a4, 0.951, 6), {}},
      {"Loop_A", 2, 1, 2, with(big, 0.914, 7), {}},
      {"Loop_A", 1, 2, 2, with(big, 0.912, 7), {}},
      {"Loop_A", 2, 2, 1, with(big, 0.938, 7), {}},
      {"Loop_A", 1, 3, 1, with(big, 0.941, 7), {}},
      {"Loop_A", 3, 1, 1, with(big, 0.938, 7), {}},
      {"Loop_A", 1, 2, 3, with(big, 0.893, 8), {}},
      {"Loop_A", 2, 1, 3, with(big, 0.876, 8), {}},
      {"Loop_A", 2, 2, 2, with(big, 0.904, 8), {}},
      {"Loop_A", 3, 1, 2, with(big, 0.930, 8), {}},
      {"Loop_A", 1, 3, 2, with(big, 0.902, 8), {}},
      {"Loop_A", 2, 3, 1, with(big, 0.950, 8), {}},
      {"Loop_A", 3, 2, 1, with(big, 0.953, 8), {}},
      {"Loop_A", 1, 4, 1, with(big, 0.938, 8), {}},
      {"Loop_A", 4, 1, 1, with(big, 0.947, 8), {}},
      {"Loop_B", 1, 2, 1, with(b4, 0.919, 7), {}},
      {"Loop_B", 2, 1, 1, with(b4, 0.920, 7), {}},
      {"Loop_B", 2, 1, 2, with(big, 0.832, 7), {}},
      {"Loop_B", 2, 1, 2, with(big, 0.872, 8), {}},
      {"Loop_B", 1, 2, 2, with(big, 0.869, 7), {}},
      {"Loop_B", 1, 2, 2, with(big, 0.863, 8), {}},
      {"Loop_B", 2, 2, 1, with(big, 0.871, 7), {}},
      {"Loop_B", 2, 2, 1, with(big, 0.860, 8), {}},
      {"Loop_B", 1, 3, 1, with(big, 0.869, 7), {}},
      {"Loop_B", 1, 3, 1, with(big, 0.881, 8), {}},
      {"Loop_B", 3, 1, 1, with(big, 0.879, 7), {}},
      {"Loop_B", 3, 1, 1, with(big, 0.878, 8), {}},
      {"Loop_B", 1, 2, 3, with(big, 0.735, 7), {}},
      {"Loop_B", 1, 2, 3, with(big, 0.727, 8), {}},
      {"Loop_B", 2, 1, 3, with(big, 0.757, 7), {}},
      {"Loop_B", 2, 1, 3, with(big, 0.725, 8), {}},
      {"Loop_B", 2, 2, 2, with(big, 0.788, 7), {}},
      {"Loop_B", 2, 2, 2, with(big, 0.782, 8), {}},
      {"Loop_B", 3, 1, 2, with(big, 0.793, 7), {}},
      {"Loop_B", 3, 1, 2, with(big, 0.778, 8), {}},
      {"Loop_B", 1, 3, 2, with(big, 0.798, 7), {}},
      {"Loop_B", 1, 3, 2, with(big, 0.800, 8), {}},
      {"Loop_B", 2, 3, 1, with(big, 0.840, 7), {}},
      {"Loop_B", 2, 3, 1, with(big, 0.805, 8), {}},
      {"Loop_B", 3, 2, 1, with(big, 0.842, 7), {}},
      {"Loop_B", 3, 2, 1, with(big, 0.829, 8), {}},
      {"Loop_B", 1, 4, 1, with(big, 0.850, 7), {}},
      {"Loop_B", 1, 4, 1, with(big, 0.853, 8), {}},
      {"Loop_B", 4, 1, 1, with(big, 0.853, 7), {}},
      {"Loop_B", 4, 1, 1, with(big, 0.833, 8), {}},
      {"Loop_C", 1, 2, 1, with(big, 0.860, 7), {}},
      {"Loop_C", 1, 2, 1, with(big, 0.859, 8), {}},
      {"Loop_C", 2, 1, 1, with(big, 0.877, 7), {}},
      {"Loop_C", 2, 1, 1, with(big, 0.865, 8), {}},
      {"Loop_C", 2, 1, 2, with(c5, 0.801, 7), {}},
      {"Loop_C", 2, 1, 2, with(c5, 0.792, 8), {}},
      {"Loop_C", 2, 1, 2, with(c5, 0.773, 9), {}},
      {"Loop_C", 1, 2, 2, with(c5, 0.797, 7), {}},
      {"Loop_C", 1, 2, 2, with(c5, 0.776, 8), {}},
      {"Loop_C", 2, 2, 1, with(c5, 0.840, 7), {}},
      {"Loop_C", 2, 2, 1, with(c5, 0.821, 8), {}},
      {"Loop_C", 1, 3, 1, with(c5, 0.873, 7), {}},
      {"Loop_C", 1, 3, 1, with(c5, 0.852, 8), {}},
      {"Loop_C", 3, 1, 1, with(c5, 0.866, 7), {}},
      {"Loop_C", 3, 1, 1, with(c5, 0.853, 8), {}},
  };
  std::vector<RecipeRow> rows;
  for (const auto& d : data) {
    auto desc = oax_ff(d.loop, d.x, d.y, d.z);
    std::string id = loop_token(desc) + "-" + xyz_token(d.x, d.y, d.z) + "-l" + std::to_string(d.s.l);
    if (!d.hidden.empty()) id += "-narrow";
    auto row = attack_row("table11", id, desc, d.s);
    row.config.mlp.hidden = d.hidden;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RecipeRow> table12() {
  const struct {
    std::size_t x, y;
    AttackSpec s;
  } data[] = {
      {3, 3, {240000, 60000, 100, 1000, 0.967, 5}},
      {4, 4, {320000, 80000, 100, 200, 0.939, 6}},
      {4, 4, {320000, 80000, 100, 200, 0.945, 7}},
      {4, 4, {320000, 80000, 100, 1000, 0.957, 7}},
      {5, 5, {1200000, 300000, 100, 1000, 0.743, 8}},
      {5, 5, {2400000, 600000, 100, 10000, 0.750, 8}},
      {5, 5, {6000000, 1500000, 200, 10000, 0.953, 8}},
      {5, 5, {6000000, 1500000, 100, 10000, 0.963, 9}},
      {1, 7, {6000000, 1500000, 100, 10000, 0.736, 8}},
      {1, 7, {6000000, 1500000, 100, 10000, 0.960, 9}},
  };
  std::vector<RecipeRow> rows;
  for (const auto& d : data) {
    rows.push_back(attack_row("table12",
                              std::to_string(d.x) + "-" + std::to_string(d.y) + "-l" + std::to_string(d.s.l),
                              ipuf(d.x, d.y), d.s));
  }
  return rows;
}

std::vector<RecipeRow> table13() {
  // Epochs and batch size are not given for these rows; 50 / 200 is assumed.
  // CRPs are collected under noise here, as stated for this table.
  auto spec = [](std::size_t train, std::size_t val, double acc, unsigned l) {
    return AttackSpec{train, val, 50, 200, acc, l};
  };
  std::vector<RecipeRow> rows;
  auto oax_row = [&](const std::string& loop, std::size_t x, std::size_t y, std::size_t z, AttackSpec s) {
    auto desc = oax_ff(loop, x, y, z);
    auto row = attack_row("table13", loop_token(desc) + "-" + xyz_token(x, y, z) + "-l" + std::to_string(s.l),
                          desc, s);
    row.desk_scale = false;
    row.config.crp_sigma = 0.02;
    rows.push_back(std::move(row));
  };
  oax_row("Loop_A", 0, 0, 7, spec(700000, 175000, 0.496, 8));
  oax_row("Loop_A", 1, 2, 4, spec(700000, 175000, 0.913, 8));
  oax_row("Loop_A", 1, 3, 3, spec(700000, 175000, 0.950, 8));
  oax_row("Loop_A", 2, 2, 3, spec(700000, 175000, 0.953, 8));
  oax_row("Loop_A", 2, 3, 2, spec(700000, 175000, 0.958, 8));
  oax_row("Loop_A", 1, 4, 2, spec(700000, 175000, 0.963, 8));
  oax_row("Loop_B", 1, 2, 4, spec(700000, 175000, 0.537, 9));
  oax_row("Loop_A", 0, 0, 8, spec(800000, 200000, 0.491, 9));
  oax_row("Loop_A", 1, 2, 5, spec(800000, 200000, 0.5007, 9));
  oax_row("Loop_A", 1, 3, 4, spec(800000, 200000, 0.519, 9));
  oax_row("Loop_A", 2, 2, 4, spec(800000, 200000, 0.498, 9));
  oax_row("Loop_A", 1, 4, 3, spec(800000, 200000, 0.930, 9));
  oax_row("Loop_A", 2, 3, 3, spec(800000, 200000, 0.946, 9));
  oax_row("Loop_B", 1, 2, 5, spec(800000, 200000, 0.501, 9));

  auto wide = [&](const std::string& tag, std::size_t x, std::size_t y, std::size_t z, AttackSpec s) {
    auto desc = ff_layout("15->80", 128);
    desc.arch = Architecture::kOaxFf;
    desc.x = x;
    desc.y = y;
    desc.z = z;
    auto row = attack_row("table13", tag + "-" + xyz_token(x, y, z) + "-l" + std::to_string(s.l), desc, s);
    row.desk_scale = false;
    row.config.crp_sigma = 0.02;
    rows.push_back(std::move(row));
  };
  wide("n128", 0, 0, 5, spec(400000, 100000, 0.502, 8));
  wide("n128", 1, 2, 2, spec(400000, 100000, 0.494, 7));
  wide("n128", 1, 2, 3, spec(500000, 125000, 0.500, 8));
  wide("n128", 1, 2, 4, spec(700000, 175000, 0.493, 8));

  auto ff128 = ff_layout("15->80,85,90,95,100", 128);
  auto row = attack_row("table13", "n128-ff-l6", ff128, spec(200000, 5000, 0.663, 6));
  row.desk_scale = false;
  row.config.crp_sigma = 0.05;
  rows.push_back(std::move(row));
  return rows;
}

}  // namespace

const std::vector<std::string>& table_ids() {
  static const std::vector<std::string> ids = {"table2",  "table4",  "table5",  "table8", "table9",
                                               "table10", "table11", "table12", "table13"};
  return ids;
}

std::vector<RecipeRow> recipe_table(std::string_view table) {
  const std::string t = lower(table);
  std::vector<RecipeRow> rows;
  if (t == "table2") rows = table2();
  else if (t == "table4") rows = table4();
  else if (t == "table5") rows = table5();
  else if (t == "table8") rows = table8();
  else if (t == "table9") rows = table9();
  else if (t == "table10") rows = table10();
  else if (t == "table11") rows = table11();
  else if (t == "table12") rows = table12();
  else if (t == "table13") rows = table13();
  else {
    std::string valid;
    for (const auto& id : table_ids()) valid += (valid.empty() ? "" : ", ") + id;
    throw ConfigError("unknown table '" + std::string(table) + "'; valid tables: " + valid);
  }
  make_unique(rows);
  return rows;
}

std::vector<RecipeRow> select_rows(const std::vector<RecipeRow>& rows, std::string_view selector) {
  if (selector.empty()) return rows;
  std::vector<bool> chosen(rows.size(), false);
  std::size_t start = 0;
  const std::string sel = lower(selector);
  while (start <= sel.size()) {
    const auto comma = sel.find(',', start);
    const std::string token = sel.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    start = comma == std::string::npos ? sel.size() + 1 : comma + 1;
    if (token.empty()) continue;
    bool matched = false;
    if (std::all_of(token.begin(), token.end(), [](unsigned char c) { return std::isdigit(c); })) {
      const auto index = std::stoul(token);
      if (index >= 1 && index <= rows.size()) {
        chosen[index - 1] = true;
        matched = true;
      }
    }
    for (std::size_t i = 0; i < rows.size() && !matched; ++i) {
      if (rows[i].id == token) {
        chosen[i] = true;
        matched = true;
      }
    }
    if (!matched) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].id.rfind(token + "-", 0) == 0) {
          chosen[i] = true;
          matched = true;
        }
      }
    }
    if (!matched) {
      std::string valid;
      for (const auto& r : rows) valid += (valid.empty() ? "" : ", ") + r.id;
      throw ConfigError("row selector '" + token + "' matches nothing; rows: " + valid);
    }
  }
  std::vector<RecipeRow> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (chosen[i]) out.push_back(rows[i]);
  }
  return out;
}

}  // namespace copuf::harness
