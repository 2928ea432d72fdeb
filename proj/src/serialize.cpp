#include "capinn/net/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "capinn/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "container payload is little-endian float64");

namespace capinn::net {

using nlohmann::json;

json spec_to_json(const MlpSpec& spec) {
  json j;
  j["input_dim"] = spec.input_dim;
  j["hidden_width"] = spec.hidden_width;
  j["hidden_depth"] = spec.hidden_depth;
  j["output_dim"] = spec.output_dim;
  if (spec.embedding) {
    j["fourier"] = {{"axes", spec.embedding->axes},
                    {"modes", spec.embedding->modes},
                    {"periods", spec.embedding->periods}};
  }
  return j;
}

MlpSpec spec_from_json(const json& j) {
  MlpSpec spec;
  spec.input_dim = j.at("input_dim").get<int>();
  spec.hidden_width = j.at("hidden_width").get<int>();
  spec.hidden_depth = j.at("hidden_depth").get<int>();
  spec.output_dim = j.at("output_dim").get<int>();
  if (j.contains("fourier")) {
    FourierEmbedding emb;
    emb.axes = j["fourier"].at("axes").get<std::vector<int>>();
    emb.modes = j["fourier"].at("modes").get<int>();
    emb.periods = j["fourier"].at("periods").get<std::vector<double>>();
    spec.embedding = emb;
  }
  spec.validate();
  return spec;
}

void write_container(const std::string& path, const json& header,
                     std::span<const double> payload) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  json h = header;
  h["count"] = payload.size();
  out << h.dump() << '\n';
  out.write(reinterpret_cast<const char*>(payload.data()),
            std::streamsize(payload.size() * sizeof(double)));
  if (!out) throw ConfigError("write failed: " + path);
}

json read_container(const std::string& path, std::vector<double>& payload) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("missing container header: " + path);
  json header = json::parse(line);
  const size_t count = header.at("count").get<size_t>();
  payload.resize(count);
  in.read(reinterpret_cast<char*>(payload.data()), std::streamsize(count * sizeof(double)));
  if (size_t(in.gcount()) != count * sizeof(double))
    throw ConfigError("truncated container payload: " + path);
  return header;
}

void save_params(const std::string& path, const MlpSpec& spec, const ParamSet& params) {
  json header;
  header["kind"] = "params";
  header["version"] = 1;
  header["mlp"] = spec_to_json(spec);
  json tensors = json::array();
  for (const auto& d : params.descs())
    tensors.push_back({{"name", d.name},
                       {"rows", d.rows},
                       {"cols", d.cols},
                       {"matrix", d.is_matrix},
                       {"offset", d.offset}});
  header["tensors"] = tensors;
  write_container(path, header, params.flat());
}

ParamSet load_params(const std::string& path, MlpSpec* spec_out) {
  std::vector<double> payload;
  json header = read_container(path, payload);
  if (header.at("kind").get<std::string>() != "params")
    throw ConfigError("not a parameter container: " + path);
  MlpSpec spec = spec_from_json(header.at("mlp"));
  ParamSet params = make_params(spec);
  if (params.count() != payload.size())
    throw ConfigError("parameter payload size does not match layout: " + path);
  std::memcpy(params.flat().data(), payload.data(), payload.size() * sizeof(double));
  if (spec_out) *spec_out = spec;
  return params;
}

}  // namespace capinn::net
