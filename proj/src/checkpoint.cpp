#include "scenav/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "json.hpp"
#include "scenav/errors.hpp"

namespace scenav {

namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'S', 'C', 'N', 'A', 'V', 'C', 'K', '1'};
constexpr int kFormatVersion = 1;

void put_f32_le(std::vector<unsigned char>& out, float f) {
  const auto u = std::bit_cast<std::uint32_t>(f);
  out.push_back(static_cast<unsigned char>(u & 0xff));
  out.push_back(static_cast<unsigned char>((u >> 8) & 0xff));
  out.push_back(static_cast<unsigned char>((u >> 16) & 0xff));
  out.push_back(static_cast<unsigned char>((u >> 24) & 0xff));
}

float get_f32_le(const unsigned char* p) {
  const std::uint32_t u = static_cast<std::uint32_t>(p[0]) |
                          (static_cast<std::uint32_t>(p[1]) << 8) |
                          (static_cast<std::uint32_t>(p[2]) << 16) |
                          (static_cast<std::uint32_t>(p[3]) << 24);
  return std::bit_cast<float>(u);
}

struct ArrayRef {
  std::string name;
  const std::vector<double>* data;
};

void collect_net_arrays(const std::string& prefix, const Mlp& net, std::vector<ArrayRef>& out) {
  for (size_t l = 0; l < net.layers.size(); ++l) {
    out.push_back({prefix + ".l" + std::to_string(l) + ".w", &net.layers[l].w});
    out.push_back({prefix + ".l" + std::to_string(l) + ".b", &net.layers[l].b});
  }
}

void collect_opt_arrays(const std::string& prefix, const AdamState& opt,
                        std::vector<ArrayRef>& out) {
  for (size_t l = 0; l < opt.mw.size(); ++l) {
    const std::string base = prefix + ".l" + std::to_string(l);
    out.push_back({base + ".mw", &opt.mw[l]});
    out.push_back({base + ".vw", &opt.vw[l]});
    out.push_back({base + ".mb", &opt.mb[l]});
    out.push_back({base + ".vb", &opt.vb[l]});
  }
}

json opt_header(const AdamState& opt) {
  return json{{"step", opt.step}, {"lr", opt.lr},   {"beta1", opt.beta1},
              {"beta2", opt.beta2}, {"eps", opt.eps}};
}

void require(bool cond, const std::string& field) {
  if (!cond) throw ValidationError("checkpoint field '" + field + "': missing or invalid");
}

std::vector<int> read_sizes(const json& h, const std::string& name) {
  require(h.contains("networks") && h["networks"].is_object(), "networks");
  const json& nets = h["networks"];
  require(nets.contains(name) && nets[name].is_array() && nets[name].size() >= 2,
          "networks." + name);
  std::vector<int> sizes;
  for (const auto& v : nets[name]) {
    require(v.is_number_integer() && v.get<int>() > 0, "networks." + name);
    sizes.push_back(v.get<int>());
  }
  return sizes;
}

Mlp net_from_sizes(const std::vector<int>& sizes) {
  Mlp net;
  for (size_t l = 0; l + 1 < sizes.size(); ++l) {
    Layer ly;
    ly.in = sizes[l];
    ly.out = sizes[l + 1];
    ly.w.assign(static_cast<size_t>(ly.in) * ly.out, 0.0);
    ly.b.assign(static_cast<size_t>(ly.out), 0.0);
    net.layers.push_back(std::move(ly));
  }
  return net;
}

void read_opt_header(const json& h, const std::string& name, AdamState& opt) {
  require(h.contains("adam") && h["adam"].is_object() && h["adam"].contains(name),
          "adam." + name);
  const json& o = h["adam"][name];
  require(o.contains("step") && o["step"].is_number_integer(), "adam." + name + ".step");
  opt.step = o["step"].get<long>();
  opt.lr = o.value("lr", opt.lr);
  opt.beta1 = o.value("beta1", opt.beta1);
  opt.beta2 = o.value("beta2", opt.beta2);
  opt.eps = o.value("eps", opt.eps);
}

}  // namespace

void save_checkpoint(const std::string& path, const NetworkBundle& nets, std::uint64_t seed,
                     long step, long episode) {
  std::vector<ArrayRef> arrays;
  collect_net_arrays("policy", nets.policy, arrays);
  collect_net_arrays("value", nets.value, arrays);
  collect_net_arrays("value_target", nets.value_target, arrays);
  collect_net_arrays("q1", nets.q1, arrays);
  collect_net_arrays("q2", nets.q2, arrays);
  collect_opt_arrays("adam.policy", nets.policy_opt, arrays);
  collect_opt_arrays("adam.value", nets.value_opt, arrays);
  collect_opt_arrays("adam.q1", nets.q1_opt, arrays);
  collect_opt_arrays("adam.q2", nets.q2_opt, arrays);

  json header;
  header["format_version"] = kFormatVersion;
  header["seed"] = seed;
  header["step"] = step;
  header["episode"] = episode;
  header["hidden_act"] = nets.policy.hidden_act == Activation::relu ? "relu" : "tanh";
  header["networks"] = {{"policy", nets.policy.layer_sizes()},
                        {"value", nets.value.layer_sizes()},
                        {"value_target", nets.value_target.layer_sizes()},
                        {"q1", nets.q1.layer_sizes()},
                        {"q2", nets.q2.layer_sizes()}};
  header["adam"] = {{"policy", opt_header(nets.policy_opt)},
                    {"value", opt_header(nets.value_opt)},
                    {"q1", opt_header(nets.q1_opt)},
                    {"q2", opt_header(nets.q2_opt)}};
  json names = json::array();
  for (const ArrayRef& a : arrays) names.push_back({a.name, a.data->size()});
  header["arrays"] = names;

  const std::string htext = header.dump();
  std::vector<unsigned char> blob;
  size_t total = 0;
  for (const ArrayRef& a : arrays) total += a.data->size();
  blob.reserve(total * 4);
  for (const ArrayRef& a : arrays) {
    for (double v : *a.data) put_f32_le(blob, static_cast<float>(v));
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint '" + path + "'");
  out.write(kMagic, sizeof(kMagic));
  const std::uint64_t hlen = htext.size();
  unsigned char lenbuf[8];
  for (int i = 0; i < 8; ++i) lenbuf[i] = static_cast<unsigned char>((hlen >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(lenbuf), 8);
  out.write(htext.data(), static_cast<std::streamsize>(htext.size()));
  out.write(reinterpret_cast<const char*>(blob.data()), static_cast<std::streamsize>(blob.size()));
  if (!out) throw std::runtime_error("write failed for checkpoint '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("checkpoint '" + path + "': cannot open");
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) {
    throw ValidationError("checkpoint field 'magic': not a checkpoint file");
  }
  unsigned char lenbuf[8];
  in.read(reinterpret_cast<char*>(lenbuf), 8);
  if (!in) throw ValidationError("checkpoint field 'header_length': truncated");
  std::uint64_t hlen = 0;
  for (int i = 0; i < 8; ++i) hlen |= static_cast<std::uint64_t>(lenbuf[i]) << (8 * i);
  if (hlen == 0 || hlen > (1u << 20)) {
    throw ValidationError("checkpoint field 'header_length': implausible value");
  }
  std::string htext(hlen, '\0');
  in.read(htext.data(), static_cast<std::streamsize>(hlen));
  if (!in) throw ValidationError("checkpoint field 'header': truncated");

  json header;
  try {
    header = json::parse(htext);
  } catch (const json::parse_error&) {
    throw ValidationError("checkpoint field 'header': not valid JSON");
  }
  require(header.contains("format_version") && header["format_version"].is_number_integer(),
          "format_version");
  if (header["format_version"].get<int>() != kFormatVersion) {
    throw ValidationError("checkpoint field 'format_version': unsupported version " +
                          header["format_version"].dump());
  }
  require(header.contains("seed") && header["seed"].is_number(), "seed");
  require(header.contains("step") && header["step"].is_number_integer(), "step");
  require(header.contains("episode") && header["episode"].is_number_integer(), "episode");
  require(header.contains("arrays") && header["arrays"].is_array(), "arrays");

  Checkpoint ck;
  ck.seed = header["seed"].get<std::uint64_t>();
  ck.step = header["step"].get<long>();
  ck.episode = header["episode"].get<long>();

  NetworkBundle& nets = ck.nets;
  const std::vector<int> policy_sizes = read_sizes(header, "policy");
  nets.policy = net_from_sizes(policy_sizes);
  nets.value = net_from_sizes(read_sizes(header, "value"));
  nets.value_target = net_from_sizes(read_sizes(header, "value_target"));
  nets.q1 = net_from_sizes(read_sizes(header, "q1"));
  nets.q2 = net_from_sizes(read_sizes(header, "q2"));
  const std::string act = header.value("hidden_act", "relu");
  const Activation hidden = act == "tanh" ? Activation::tanh_act : Activation::relu;
  for (Mlp* net : {&nets.policy, &nets.value, &nets.value_target, &nets.q1, &nets.q2}) {
    net->hidden_act = hidden;
  }
  nets.cfg.hidden.assign(policy_sizes.begin() + 1, policy_sizes.end() - 1);

  nets.policy_opt = AdamState::like(nets.policy, nets.cfg.lr);
  nets.value_opt = AdamState::like(nets.value, nets.cfg.lr);
  nets.q1_opt = AdamState::like(nets.q1, nets.cfg.lr);
  nets.q2_opt = AdamState::like(nets.q2, nets.cfg.lr);
  read_opt_header(header, "policy", nets.policy_opt);
  read_opt_header(header, "value", nets.value_opt);
  read_opt_header(header, "q1", nets.q1_opt);
  read_opt_header(header, "q2", nets.q2_opt);

  std::vector<std::pair<std::string, std::vector<double>*>> targets;
  auto add_net = [&](const std::string& prefix, Mlp& net) {
    for (size_t l = 0; l < net.layers.size(); ++l) {
      targets.push_back({prefix + ".l" + std::to_string(l) + ".w", &net.layers[l].w});
      targets.push_back({prefix + ".l" + std::to_string(l) + ".b", &net.layers[l].b});
    }
  };
  auto add_opt = [&](const std::string& prefix, AdamState& opt) {
    for (size_t l = 0; l < opt.mw.size(); ++l) {
      const std::string base = prefix + ".l" + std::to_string(l);
      targets.push_back({base + ".mw", &opt.mw[l]});
      targets.push_back({base + ".vw", &opt.vw[l]});
      targets.push_back({base + ".mb", &opt.mb[l]});
      targets.push_back({base + ".vb", &opt.vb[l]});
    }
  };
  add_net("policy", nets.policy);
  add_net("value", nets.value);
  add_net("value_target", nets.value_target);
  add_net("q1", nets.q1);
  add_net("q2", nets.q2);
  add_opt("adam.policy", nets.policy_opt);
  add_opt("adam.value", nets.value_opt);
  add_opt("adam.q1", nets.q1_opt);
  add_opt("adam.q2", nets.q2_opt);

  const json& arrays = header["arrays"];
  if (arrays.size() != targets.size()) {
    throw ValidationError("checkpoint field 'arrays': expected " +
                          std::to_string(targets.size()) + " arrays, found " +
                          std::to_string(arrays.size()));
  }
  for (size_t i = 0; i < targets.size(); ++i) {
    const json& a = arrays[i];
    require(a.is_array() && a.size() == 2 && a[0].is_string() && a[1].is_number_unsigned(),
            "arrays[" + std::to_string(i) + "]");
    if (a[0].get<std::string>() != targets[i].first ||
        a[1].get<size_t>() != targets[i].second->size()) {
      throw ValidationError("checkpoint field 'arrays[" + std::to_string(i) + "]': expected " +
                            targets[i].first + " of length " +
                            std::to_string(targets[i].second->size()));
    }
  }
  for (auto& [name, vec] : targets) {
    std::vector<unsigned char> buf(vec->size() * 4);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!in) throw ValidationError("checkpoint field 'arrays': data truncated at " + name);
    for (size_t i = 0; i < vec->size(); ++i) {
      (*vec)[i] = static_cast<double>(get_f32_le(&buf[i * 4]));
    }
  }
  return ck;
}

}  // namespace scenav
