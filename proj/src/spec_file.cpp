// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The cdl-csi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "cdl/spec_file.hpp"

#include <bit>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace cdl {

namespace {

[[noreturn]] void fail(const std::string& what, const YAML::Mark& mark) {
  throw SpecParseError(what, mark.line + 1, mark.column + 1);
}

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& section) {
  if (!node.IsMap()) fail(section + " must be a mapping", node.Mark());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) fail("unknown key '" + key + "' in " + section, kv.first.Mark());
  }
}

template <typename T>
T read(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::BadConversion&) {
    fail("bad value for '" + key + "'", node.Mark());
  }
}

template <typename T>
void assign(const YAML::Node& parent, const char* key, T& target) {
  if (const auto node = parent[key]) target = read<T>(node, key);
}

std::string join_numbers(const auto& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, values[i]);
    s.append(buf, res.ptr);
  }
  return s;
}

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::optional<Preset> parse_preset(const std::string& name) {
  if (name == "paper") return Preset::Paper;
  if (name == "desk") return Preset::Desk;
  return std::nullopt;
}

ExperimentSpec preset_spec(ExperimentId id, Preset preset) {
  ExperimentSpec spec;
  spec.experiment = id;
  const bool paper = preset == Preset::Paper;
  spec.system = paper ? paper_preset() : desk_preset();
  spec.sparsities = paper ? std::vector<Index>{2, 4, 6, 8, 10, 12, 14, 16} : std::vector<Index>{1, 2, 3, 4, 5, 6, 7, 8};
  spec.ber_min_bits = 100000;

  switch (id) {
    case ExperimentId::SingleUeCompare: break;
    case ExperimentId::SubcarrierCompare: spec.subcarriers = {1, 8}; break;
    case ExperimentId::MultiUe:
      spec.system.users = 3;
      spec.system.velocities_kmh = {10.0, 15.0, 20.0};
      break;
    case ExperimentId::Ber:
      if (paper) {
        spec.ber_sparsities = {15, 7};
        spec.snr_db = {-21, -18, -15, -12, -9, -6};
      } else {
        spec.system.tx_antennas = 32;
        spec.system.measurement_rows = 16;
        spec.system.sparsity = 7;
        spec.ber_sparsities = {7, 3};
        spec.snr_db = {-18, -15, -12, -9, -6, -3};
      }
      break;
    case ExperimentId::AccountingTables: break;
  }
  spec.system.total_frames = 2 * spec.system.training_frames + spec.system.test_vectors;
  spec.output_dir = "out/" + to_string(id);
  return spec;
}

ExperimentSpec parse_spec(const std::string& text, std::optional<Preset> preset_override) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw SpecParseError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  if (!root.IsMap()) throw SpecParseError("spec must be a mapping", 1, 1);
  check_keys(root, {"experiment", "preset", "seed", "output", "system", "sweep", "ber", "accounting", "dict_in", "dict_out"},
             "spec");

  if (!root["experiment"]) throw SpecParseError("missing 'experiment'", 1, 1);
  const auto name = read<std::string>(root["experiment"], "experiment");
  const auto id = parse_experiment_id(name);
  if (!id) fail("unknown experiment '" + name + "'", root["experiment"].Mark());

  Preset preset = Preset::Desk;
  if (const auto p = root["preset"]) {
    const auto parsed = parse_preset(read<std::string>(p, "preset"));
    if (!parsed) fail("preset must be 'paper' or 'desk'", p.Mark());
    preset = *parsed;
  }
  if (preset_override) preset = *preset_override;
  ExperimentSpec spec = preset_spec(*id, preset);

  assign(root, "seed", spec.system.seed);
  assign(root, "output", spec.output_dir);
  assign(root, "dict_in", spec.dict_in);
  assign(root, "dict_out", spec.dict_out);

  bool frames_given = false;
  if (const auto sys = root["system"]) {
    check_keys(sys,
               {"tx_antennas", "rx_antennas", "subcarriers", "taps", "users", "sparsity", "measurement_rows",
                "compression_factor", "carrier_freq", "bandwidth", "spacing_wavelengths", "velocities",
                "frame_interval", "training_frames", "test_vectors", "total_frames"},
               "system");
    auto& c = spec.system;
    assign(sys, "tx_antennas", c.tx_antennas);
    assign(sys, "rx_antennas", c.rx_antennas);
    assign(sys, "subcarriers", c.subcarriers);
    assign(sys, "taps", c.taps);
    assign(sys, "users", c.users);
    assign(sys, "sparsity", c.sparsity);
    assign(sys, "measurement_rows", c.measurement_rows);
    assign(sys, "carrier_freq", c.carrier_freq);
    assign(sys, "bandwidth", c.bandwidth);
    assign(sys, "spacing_wavelengths", c.spacing_wavelengths);
    assign(sys, "velocities", c.velocities_kmh);
    assign(sys, "frame_interval", c.frame_interval);
    assign(sys, "training_frames", c.training_frames);
    assign(sys, "test_vectors", c.test_vectors);
    if (sys["total_frames"]) {
      assign(sys, "total_frames", c.total_frames);
      frames_given = true;
    }
    if (const auto g = sys["compression_factor"]) {
      if (sys["measurement_rows"]) fail("give either measurement_rows or compression_factor, not both", g.Mark());
      const int factor = read<int>(g, "compression_factor");
      if (factor < 1 || c.vector_length() % factor != 0)
        fail("compression_factor must divide N_r*N_t so that g*N_g = N_r*N_t", g.Mark());
      c.measurement_rows = int(c.vector_length() / factor);
    }
  }
  if (!frames_given) spec.system.total_frames = 2 * spec.system.training_frames + spec.system.test_vectors;

  if (const auto sweep = root["sweep"]) {
    check_keys(sweep, {"sparsities", "subcarriers", "relearn_per_sparsity"}, "sweep");
    assign(sweep, "sparsities", spec.sparsities);
    assign(sweep, "subcarriers", spec.subcarriers);
    assign(sweep, "relearn_per_sparsity", spec.relearn_per_sparsity);
  }
  if (const auto ber = root["ber"]) {
    check_keys(ber, {"compression_factors", "sparsities", "snr_db", "min_bits"}, "ber");
    assign(ber, "compression_factors", spec.compression_factors);
    assign(ber, "sparsities", spec.ber_sparsities);
    assign(ber, "snr_db", spec.snr_db);
    assign(ber, "min_bits", spec.ber_min_bits);
  }
  if (const auto acc = root["accounting"]) {
    check_keys(acc, {"frames"}, "accounting");
    assign(acc, "frames", spec.accounting_frames);
  }
  return spec;
}

ExperimentSpec load_spec_file(const std::string& path, std::optional<Preset> preset_override) {
  std::ifstream is(path);
  if (!is) throw SpecParseError("cannot open spec file " + path, 0, 0);
  std::stringstream buffer;
  buffer << is.rdbuf();
  return parse_spec(buffer.str(), preset_override);
}

std::vector<std::string> validate_spec(const ExperimentSpec& spec) {
  std::vector<std::string> out = validate(spec.system);
  const Index n = spec.system.vector_length();
  for (int l : spec.subcarriers)
    if (l < 1 || l > spec.system.subcarriers) {
      out.push_back("sweep subcarrier " + std::to_string(l) + " outside 1..N_c");
      break;
    }
  if (spec.subcarriers.empty()) out.push_back("sweep needs at least one subcarrier");

  switch (spec.experiment) {
    case ExperimentId::SingleUeCompare:
    case ExperimentId::SubcarrierCompare:
    case ExperimentId::MultiUe:
      if (spec.sparsities.empty()) out.push_back("sweep needs at least one sparsity");
      for (Index s : spec.sparsities)
        if (s < 1 || s >= n) {
          out.push_back("swept sparsity must satisfy 1 <= S < N_r*N_t");
          break;
        }
      break;
    case ExperimentId::Ber:
      if (spec.compression_factors.size() != spec.ber_sparsities.size())
        out.push_back("ber needs one sparsity per compression factor");
      for (std::size_t i = 0; i < std::min(spec.compression_factors.size(), spec.ber_sparsities.size()); ++i) {
        const int g = spec.compression_factors[i];
        if (g < 2 || n % g != 0) {
          out.push_back("compression factor " + std::to_string(g) + " must be >= 2 and divide N_r*N_t");
          continue;
        }
        if (n / g <= 2 * spec.ber_sparsities[i])
          out.push_back("ber sparsity " + std::to_string(spec.ber_sparsities[i]) + " violates N_g > 2S for g=" +
                        std::to_string(g));
      }
      if (spec.snr_db.empty()) out.push_back("ber needs at least one SNR point");
      if (spec.ber_min_bits == 0) out.push_back("ber min_bits must be positive");
      break;
    case ExperimentId::AccountingTables:
      if (spec.accounting_frames < 1) out.push_back("accounting frames N' must be at least 1");
      break;
  }
  return out;
}

std::string manifest_text(const ExperimentSpec& spec) {
  const auto& c = spec.system;
  std::ostringstream os;
  os << "experiment=" << to_string(spec.experiment) << '\n'
     << "seed=" << c.seed << '\n'
     << "output=" << spec.output_dir << '\n'
     << "system.tx_antennas=" << c.tx_antennas << '\n'
     << "system.rx_antennas=" << c.rx_antennas << '\n'
     << "system.subcarriers=" << c.subcarriers << '\n'
     << "system.taps=" << c.taps << '\n'
     << "system.users=" << c.users << '\n'
     << "system.sparsity=" << c.sparsity << '\n'
     << "system.measurement_rows=" << c.measurement_rows << '\n'
     << "system.carrier_freq=" << num(c.carrier_freq) << '\n'
     << "system.bandwidth=" << num(c.bandwidth) << '\n'
     << "system.spacing_wavelengths=" << num(c.spacing_wavelengths) << '\n'
     << "system.velocities=" << join_numbers(c.velocities_kmh) << '\n'
     << "system.frame_interval=" << num(c.frame_interval) << '\n'
     << "system.training_frames=" << c.training_frames << '\n'
     << "system.test_vectors=" << c.test_vectors << '\n'
     << "system.total_frames=" << c.total_frames << '\n'
     << "sweep.sparsities=" << join_numbers(spec.sparsities) << '\n'
     << "sweep.subcarriers=" << join_numbers(spec.subcarriers) << '\n'
     << "sweep.relearn_per_sparsity=" << (spec.relearn_per_sparsity ? "true" : "false") << '\n'
     << "ber.compression_factors=" << join_numbers(spec.compression_factors) << '\n'
     << "ber.sparsities=" << join_numbers(spec.ber_sparsities) << '\n'
     << "ber.snr_db=" << join_numbers(spec.snr_db) << '\n'
     << "ber.min_bits=" << spec.ber_min_bits << '\n'
     << "accounting.frames=" << spec.accounting_frames << '\n'
     << "dict_in=" << spec.dict_in << '\n'
     << "dict_out=" << spec.dict_out << '\n';
  return os.str();
}

static_assert(std::endian::native == std::endian::little, "dictionary files assume a little-endian host");

void write_dictionary_file(const std::string& path, const Dictionary& dict) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  std::string kind = to_string(dict.kind);
  if (dict.kind == DictionaryKind::Common) kind += "-" + to_string(dict.method);
  os << "CDLDICT 1 " << dict.size() << ' ' << kind << ' ' << dict.id << '\n';
  for (Index r = 0; r < dict.atoms.rows(); ++r)
    for (Index c = 0; c < dict.atoms.cols(); ++c) {
      const double pair[2] = {dict.atoms(r, c).real(), dict.atoms(r, c).imag()};
      os.write(reinterpret_cast<const char*>(pair), sizeof pair);
    }
}

Dictionary read_dictionary_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  std::string header;
  std::getline(is, header);
  std::istringstream hs(header);
  std::string magic, kind, id;
  int version = 0;
  Index n = 0;
  hs >> magic >> version >> n >> kind >> id;
  if (magic != "CDLDICT" || version != 1 || n < 1 || id.empty()) throw ShapeError("bad dictionary file header in " + path);
  Dictionary d;
  d.atoms.resize(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) {
      double pair[2];
      is.read(reinterpret_cast<char*>(pair), sizeof pair);
      d.atoms(r, c) = {pair[0], pair[1]};
    }
  if (!is) throw ShapeError("truncated dictionary file " + path);
  d.id = id;
  if (kind == "dft") {
    d.kind = DictionaryKind::Dft;
  } else if (kind == "ksvd") {
    d.kind = DictionaryKind::Ksvd;
  } else if (kind == "common-op" || kind == "common-ksvd") {
    d.kind = DictionaryKind::Common;
    d.method = kind == "common-op" ? CommonMethod::Op : CommonMethod::Ksvd;
  } else {
    throw ShapeError("unknown dictionary kind '" + kind + "'");
  }
  return d;
}

}  // namespace cdl
