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

#include "cdl/experiments.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cdl/accounting.hpp"
#include "cdl/dictlearn.hpp"
#include "cdl/metrics.hpp"
#include "cdl/spec_file.hpp"

namespace cdl {

namespace {

constexpr std::uint64_t kPhiStream = 0x706869ULL;
constexpr std::uint64_t kLinkStream = 0x6c696e6bULL;

std::string number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CMatrix columns_of(const std::vector<ChannelRealization>& frames, int subcarrier) {
  if (frames.empty()) return {};
  const Index n = frames.front().fdchtf.front().size();
  CMatrix m(n, Index(frames.size()));
  for (std::size_t j = 0; j < frames.size(); ++j) m.col(Index(j)) = frames[j].vector(subcarrier);
  return m;
}

std::vector<CVector> vectors_at(const std::vector<ChannelRealization>& frames, int subcarrier) {
  std::vector<CVector> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(f.vector(subcarrier));
  return out;
}

void check_subcarriers(const ExperimentSpec& spec) {
  for (int l : spec.subcarriers)
    if (l < 1 || l > spec.system.subcarriers) throw ParameterError("subcarrier index out of range: " + std::to_string(l));
}

std::vector<Index> learning_sparsities(const ExperimentSpec& spec) {
  if (spec.relearn_per_sparsity) return spec.sparsities;
  return {Index(spec.system.sparsity)};
}

// The dictionary that should be reported as "the" learned one.
bool is_reported(const ExperimentSpec& spec, Index s, std::size_t index, std::size_t count) {
  const auto& grid = learning_sparsities(spec);
  const bool has_configured = std::find(grid.begin(), grid.end(), Index(spec.system.sparsity)) != grid.end();
  return has_configured ? s == spec.system.sparsity : index + 1 == count;
}

// exp1 / exp2: one UE learns from frames 1..N and is tested on N+1..N+P.
void run_single_ue(const ExperimentSpec& spec, const Dictionary* override, ExperimentOutput& out, bool with_dft) {
  SystemConfig cfg = spec.system;
  check_subcarriers(spec);
  const ChannelSource source(cfg);
  const auto frames = source.frames(0, cfg.training_frames + cfg.test_vectors);
  const std::vector<ChannelRealization> training(frames.begin(), frames.begin() + cfg.training_frames);
  const std::vector<ChannelRealization> tests(frames.begin() + cfg.training_frames, frames.end());
  const auto phi = gaussian_measurement(Rng::derive_seed(cfg.seed, {kPhiStream}), cfg.measurement_rows,
                                        cfg.vector_length());
  const std::string name = to_string(spec.experiment);
  const auto grid = learning_sparsities(spec);

  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const Index learn_s = grid[gi];
    const auto dicts = learn_single_ue(cfg, training, learn_s, true);
    const Dictionary& op = override != nullptr ? *override : dicts.cdl_op;
    if (override == nullptr && is_reported(spec, learn_s, gi, grid.size())) out.common = dicts.cdl_op;
    const std::vector<Index> eval_s = spec.relearn_per_sparsity ? std::vector<Index>{learn_s} : spec.sparsities;

    for (int l1 : spec.subcarriers) {
      const int l = l1 - 1;
      std::vector<NamedDictionary> named;
      if (with_dft) named.push_back({"DFT", &dicts.dft});
      named.push_back({"K-SVD", &dicts.ksvd[std::size_t(l)]});
      named.push_back({"CDL-OP", &op});
      if (dicts.cdl_ksvd) named.push_back({"CDL-KSVD", &*dicts.cdl_ksvd});
      const auto truths = vectors_at(tests, l);
      for (const auto& e : nmse_sweep(named, truths, eval_s, phi))
        out.nmse.push_back({name, e.dictionary, double(e.sparsity), l1, 1, e.nmse});
    }
  }
}

// exp3: K users run the three-phase protocol; phase-3 frames are the tests.
void run_multi_ue(const ExperimentSpec& spec, const Dictionary* override, ExperimentOutput& out) {
  SystemConfig cfg = spec.system;
  check_subcarriers(spec);
  cfg.total_frames = 2 * cfg.training_frames + cfg.test_vectors;
  const ChannelSource source(cfg);
  std::vector<std::vector<CVector>> tests_by_slot;  // user-major, spec subcarrier order
  for (int k = 0; k < cfg.users; ++k) {
    const auto frames = source.frames(k, cfg.total_frames);
    const std::vector<ChannelRealization> tests(frames.begin() + 2 * cfg.training_frames, frames.end());
    for (int l1 : spec.subcarriers) tests_by_slot.push_back(vectors_at(tests, l1 - 1));
  }
  const std::string name = to_string(spec.experiment);
  const auto grid = learning_sparsities(spec);

  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const Index learn_s = grid[gi];
    SystemConfig run_cfg = cfg;
    run_cfg.sparsity = int(learn_s);
    const auto op_run = run_cdl_framework(run_cfg, source, ProtocolOptions::from_config(run_cfg, LearningMethod::CdlOp));
    const auto ksvd_run =
        run_cdl_framework(run_cfg, source, ProtocolOptions::from_config(run_cfg, LearningMethod::CdlKsvd));
    const Dictionary& op = override != nullptr ? *override : op_run.common;
    if (is_reported(spec, learn_s, gi, grid.size())) {
      if (override == nullptr) out.common = op_run.common;
      std::ostringstream trace;
      write_trace_csv(trace, op_run.trace);
      out.tables["trace.csv"] = trace.str();
    }
    const std::vector<Index> eval_s = spec.relearn_per_sparsity ? std::vector<Index>{learn_s} : spec.sparsities;
    const Dictionary dft = dft_dictionary(cfg.vector_length());

    std::size_t slot = 0;
    for (int k = 0; k < cfg.users; ++k)
      for (int l1 : spec.subcarriers) {
        const auto& ksvd = op_run.ksvd[std::size_t(k) * std::size_t(cfg.subcarriers) + std::size_t(l1 - 1)];
        const std::vector<NamedDictionary> named{
            {"DFT", &dft}, {"K-SVD", &ksvd}, {"CDL-OP", &op}, {"CDL-KSVD", &ksvd_run.common}};
        for (const auto& e : nmse_sweep(named, tests_by_slot[slot], eval_s, op_run.measurement))
          out.nmse.push_back({name, e.dictionary, double(e.sparsity), l1, k + 1, e.nmse});
        ++slot;
      }
  }
}

// exp4: coded BER with precoders from true and CDL-OP-reconstructed channels.
void run_ber(const ExperimentSpec& spec, const Dictionary* override, ExperimentOutput& out) {
  SystemConfig cfg = spec.system;
  check_subcarriers(spec);
  if (spec.compression_factors.size() != spec.ber_sparsities.size())
    throw ParameterError("ber: need one sparsity per compression factor");
  const ChannelSource source(cfg);
  const auto frames = source.frames(0, cfg.training_frames + cfg.test_vectors);
  const std::vector<ChannelRealization> training(frames.begin(), frames.begin() + cfg.training_frames);
  const std::vector<ChannelRealization> tests(frames.begin() + cfg.training_frames, frames.end());
  const int l = spec.subcarriers.front() - 1;
  const auto truths = vectors_at(tests, l);
  const Index n = cfg.vector_length();

  LinkOptions link;
  link.snr_db = spec.snr_db;
  link.min_bits = spec.ber_min_bits;
  link.seed = Rng::derive_seed(cfg.seed, {kLinkStream});
  out.ber.push_back(ber_link_sim(truths, truths, link, "true", 1.0));

  for (std::size_t i = 0; i < spec.compression_factors.size(); ++i) {
    const int g = spec.compression_factors[i];
    const Index s = spec.ber_sparsities[i];
    if (g < 1 || n % g != 0) throw ParameterError("ber: compression factor must divide N_r*N_t");
    const Index rows = n / g;
    const auto phi = gaussian_measurement(Rng::derive_seed(cfg.seed, {kPhiStream, std::uint64_t(g)}), rows, n, s);
    Dictionary op;
    if (override != nullptr) {
      op = *override;
    } else {
      op = learn_single_ue(cfg, training, s, false).cdl_op;
      if (i == 0) out.common = op;
    }
    std::vector<CVector> estimates;
    estimates.reserve(truths.size());
    for (const auto& h : truths) estimates.push_back(reconstruct(compress(h, phi, op), phi, op, s).channel);
    out.nmse.push_back({to_string(spec.experiment), "CDL-OP", double(g), l + 1, 1, nmse(estimates, truths).value});
    out.ber.push_back(ber_link_sim(truths, estimates, link, "cdl_op", double(g)));
  }
}

void run_accounting(const ExperimentSpec& spec, ExperimentOutput& out) {
  const SystemConfig& cfg = spec.system;
  const std::int64_t n = cfg.vector_length();
  const std::int64_t m = std::int64_t(cfg.training_frames) * cfg.subcarriers;
  std::ostringstream flops, dict, csi, memory;
  write_flops_table(flops, n, m, m / 4);
  write_dictionary_feedback_table(dict);
  write_csi_feedback_table(csi, spec.accounting_frames);
  write_memory_table(memory, cfg);
  out.tables["table3_flops.csv"] = flops.str();
  out.tables["table4_dictionary_feedback.csv"] = dict.str();
  out.tables["table5_csi_feedback.csv"] = csi.str();
  out.tables["memory_savings.csv"] = memory.str();
}

}  // namespace

std::string to_string(ExperimentId id) {
  switch (id) {
    case ExperimentId::SingleUeCompare: return "exp1_single_ue_compare";
    case ExperimentId::SubcarrierCompare: return "exp2_subcarrier_compare";
    case ExperimentId::MultiUe: return "exp3_multi_ue";
    case ExperimentId::Ber: return "exp4_ber";
    case ExperimentId::AccountingTables: return "accounting_tables";
  }
  return "?";
}

std::optional<ExperimentId> parse_experiment_id(const std::string& name) {
  for (auto id : {ExperimentId::SingleUeCompare, ExperimentId::SubcarrierCompare, ExperimentId::MultiUe,
                  ExperimentId::Ber, ExperimentId::AccountingTables})
    if (to_string(id) == name) return id;
  return std::nullopt;
}

SingleUeDictionaries learn_single_ue(const SystemConfig& config, const std::vector<ChannelRealization>& training,
                                     Index sparsity, bool with_cdl_ksvd) {
  const Index n = config.vector_length();
  SingleUeDictionaries out;
  out.dft = dft_dictionary(n);
  KsvdOptions options;
  options.sparsity = sparsity;

  const Index per = Index(training.size());
  CMatrix pooled(n, per * config.subcarriers);
  CMatrix codes(n, per * config.subcarriers);
  for (int l = 0; l < config.subcarriers; ++l) {
    const CMatrix columns = columns_of(training, l);
    auto learned = ksvd(columns, out.dft.atoms, options);
    pooled.middleCols(l * per, per) = columns;
    codes.middleCols(l * per, per) = learned.codes;
    out.ksvd.push_back(ksvd_dictionary(std::move(learned.dictionary), 0, l));
  }
  out.cdl_op = cdl_op(pooled, codes);
  if (with_cdl_ksvd) out.cdl_ksvd = cdl_ksvd(TrainingSet{pooled, codes, TrainingSet::Provenance::TrueChannels}, options);
  return out;
}

ExperimentOutput run_experiment(const ExperimentSpec& spec, const Dictionary* common_override) {
  if (common_override != nullptr && common_override->size() != spec.system.vector_length())
    throw ShapeError("supplied dictionary does not match N_r*N_t");
  ExperimentOutput out;
  switch (spec.experiment) {
    case ExperimentId::SingleUeCompare: run_single_ue(spec, common_override, out, true); break;
    case ExperimentId::SubcarrierCompare: run_single_ue(spec, common_override, out, false); break;
    case ExperimentId::MultiUe: run_multi_ue(spec, common_override, out); break;
    case ExperimentId::Ber: run_ber(spec, common_override, out); break;
    case ExperimentId::AccountingTables: run_accounting(spec, out); break;
  }
  return out;
}

std::string nmse_csv(const std::vector<NmseRow>& rows) {
  std::string s = "experiment,dictionary,param,subcarrier,user,value\n";
  for (const auto& r : rows)
    s += r.experiment + ',' + r.dictionary + ',' + number(r.parameter) + ',' + std::to_string(r.subcarrier) + ',' +
         std::to_string(r.user) + ',' + number(r.value) + '\n';
  return s;
}

std::string ber_csv(const std::vector<BerCurve>& curves) {
  std::ostringstream os;
  write_ber_csv(os, curves);
  return os.str();
}

std::vector<std::string> write_experiment_outputs(const ExperimentSpec& spec, const ExperimentOutput& output) {
  namespace fs = std::filesystem;
  fs::create_directories(spec.output_dir);
  std::vector<std::string> written;
  auto emit = [&](const std::string& file, const std::string& text) {
    std::ofstream os(fs::path(spec.output_dir) / file, std::ios::binary);
    if (!os) throw Error("cannot write " + file);
    os << text;
    written.push_back(file);
  };
  if (!output.nmse.empty()) emit("nmse.csv", nmse_csv(output.nmse));
  if (!output.ber.empty()) emit("ber.csv", ber_csv(output.ber));
  for (const auto& [file, text] : output.tables) emit(file, text);
  return written;
}

}  // namespace cdl
