// SPDX-License-Identifier: Apache-2.0
// qucc — command-line driver: system info, single-point runs, and scans.
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qucc/fci.hpp"
#include "qucc/mp2.hpp"
#include "qucc/solver.hpp"

using namespace qucc;
using nlohmann::json;

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

int default_threads() {
  if (const char* env = std::getenv("QUCC_THREADS")) {
    const int k = std::atoi(env);
    if (k > 0) return k;
  }
  return 1;
}

std::string csv_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

struct RunFlags {
  std::size_t large = 0;
  bool promote_singles = true;
  bool fd_check = false;
  bool largest_last = false;
  int roots = 1;
  bool track_hf = false;
};

QuccConfig make_config(const RunFlags& f) {
  QuccConfig cfg;
  cfg.large_count = f.large;
  cfg.fd_validation = f.fd_check;
  cfg.seed_largest_last = f.largest_last;
  if (!f.promote_singles) cfg.max_promotion_rounds = 1;
  cfg.max_optimizer_iterations = 3000;
  return cfg;
}

json run_method(const IntegralSet& ints, const std::string& method,
                const RunFlags& flags) {
  const Determinant ref = ints.reference();
  json out;
  out["method"] = method;
  const double t0 = now_seconds();

  if (method == "hf") {
    out["e_reference"] = hf_energy(ints, ref);
  } else if (method == "mp2") {
    out["e_reference"] = hf_energy(ints, ref);
    const double corr = mp2_energy(ints, ref);
    out["e_mp2_corr"] = corr;
    out["energy"] = hf_energy(ints, ref) + corr;
  } else if (method == "fci") {
    const auto sol =
        fci_solve(ints, ints.n_alpha(), ints.n_beta(), flags.roots);
    out["dimension"] = sol.dimension;
    json energies = json::array(), overlaps = json::array();
    for (Eigen::Index k = 0; k < sol.energies.size(); ++k) {
      energies.push_back(sol.energies[k]);
      overlaps.push_back(sol.hf_overlaps[k]);
    }
    out["energies"] = energies;
    out["hf_overlaps"] = overlaps;
    int idx = 0;
    if (flags.track_hf) {
      const auto t = track_hf_state(sol);
      idx = t.index;
      out["tracked_index"] = t.index;
      out["reference_lost"] = t.reference_lost;
    }
    out["energy"] = sol.energies[idx];
  } else if (method == "ucc" || method == "qucc") {
    const auto ranked = mp2_amplitudes(ints, ref);
    if (flags.large > ranked.entries.size())
      throw std::out_of_range("--large exceeds the factor count " +
                              std::to_string(ranked.entries.size()));
    if (method == "ucc") {
      QuccConfig cfg = make_config(flags);
      FactorList large = partition(ranked, flags.large).first;
      if (cfg.seed_largest_last) std::reverse(large.begin(), large.end());
      const FactorList opt = optimize_large_angles(ints, ref, large, cfg);
      out["e_reference"] = hf_energy(ints, ref);
      out["L"] = flags.large;
      out["energy"] = expectation(build_state(ref, opt, ints.n_spin()), ints);
      json angles = json::array();
      for (std::size_t i = 0; i < opt.size(); ++i)
        angles.push_back({{"index", i + 1}, {"angle", opt[i].angle}});
      out["large_angles"] = angles;
    } else {
      const QuccResult r =
          promote_and_iterate(ints, ref, ranked, make_config(flags));
      out["e_reference"] = r.e_reference;
      out["e_ucc_large"] = r.e_ucc_large;
      out["e_qucc"] = r.e_qucc;
      out["energy"] = r.e_qucc;
      out["L"] = flags.large;
      out["b_norm"] = r.b_norm;
      out["a_condition"] = r.a_condition;
      out["used_svd"] = r.used_svd;
      out["hessian_max_asymmetry"] = r.hessian_max_asymmetry;
      out["promoted_singles"] = r.promoted_singles.size();
      out["promotion_rounds"] = r.promotion_rounds;
      json large = json::array(), small = json::array();
      for (const auto& [i, th] : r.large_angles)
        large.push_back({{"index", i}, {"angle", th}});
      for (const auto& [i, th] : r.small_angles)
        small.push_back({{"index", i}, {"angle", th}});
      out["large_angles"] = large;
      out["small_angles"] = small;
    }
  } else {
    throw std::invalid_argument("unknown method '" + method + "'");
  }
  out["wall_seconds"] = now_seconds() - t0;
  return out;
}

int cmd_info(const std::string& path) {
  const auto ints = IntegralSet::from_file(path);
  const auto ref = ints.reference();
  int singles = 0, doubles = 0;
  for (const auto& e : enumerate_excitations(ref, ints.n_spatial(), 2))
    (e.rank() == 1 ? singles : doubles) += 1;
  const std::size_t dim =
      sector_basis(ints.n_spatial(), ints.n_alpha(), ints.n_beta()).size();
  std::printf("orbitals=%d electrons=%d ms2=%d\n", ints.n_spatial(),
              ints.n_electrons(), ints.ms2());
  std::printf("fci_dimension=%zu\n", dim);
  std::printf("singles=%d doubles=%d total=%d\n", singles, doubles,
              singles + doubles);
  std::printf("one-body=%zu two-body=%zu\n", ints.one_body_stored(),
              ints.two_body_stored());
  return 0;
}

// ---------------------------------------------------------------- scan ----

struct ManifestEntry {
  std::string label;
  double geometry = 0.0;
  std::string path;
};

struct MethodSpec {
  std::string method;
  std::vector<std::size_t> L_values;  // empty for hf/mp2/fci
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  std::vector<MethodSpec> methods;
};

Manifest parse_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path);
  Manifest m;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "entry") {
      ManifestEntry e;
      if (!(ls >> e.label >> e.geometry >> e.path))
        throw std::runtime_error("manifest line " + std::to_string(line_no) +
                                 ": expected 'entry LABEL GEOM PATH'");
      for (const auto& prev : m.entries)
        if (prev.label == e.label)
          throw std::runtime_error("manifest line " + std::to_string(line_no) +
                                   ": duplicate label '" + e.label + "'");
      std::ifstream probe(e.path);
      if (!probe)
        throw std::runtime_error("manifest line " + std::to_string(line_no) +
                                 ": missing file " + e.path);
      m.entries.push_back(e);
    } else if (key == "method") {
      MethodSpec spec;
      if (!(ls >> spec.method))
        throw std::runtime_error("manifest line " + std::to_string(line_no) +
                                 ": expected 'method NAME [L...]'");
      std::size_t L;
      while (ls >> L) spec.L_values.push_back(L);
      m.methods.push_back(spec);
    } else {
      throw std::runtime_error("manifest line " + std::to_string(line_no) +
                               ": unknown key '" + key + "'");
    }
  }
  if (m.entries.empty()) throw std::runtime_error("manifest has no entries");
  if (m.methods.empty()) throw std::runtime_error("manifest has no methods");
  return m;
}

struct ScanRow {
  std::string label;
  double geometry = 0.0;
  std::string method;
  std::optional<std::size_t> L;
  std::optional<double> energy;
  std::optional<double> e_minus_fci;
  std::size_t promoted_singles = 0;
  double wall_seconds = 0.0;
  std::string error;
};

int cmd_scan(const std::string& manifest_path, int threads, bool track_hf) {
  const Manifest m = parse_manifest(manifest_path);

  struct Task {
    std::size_t entry;
    std::string method;
    std::optional<std::size_t> L;
  };
  std::vector<Task> tasks;
  for (std::size_t e = 0; e < m.entries.size(); ++e)
    for (const auto& spec : m.methods) {
      if (spec.L_values.empty())
        tasks.push_back({e, spec.method, std::nullopt});
      else
        for (std::size_t L : spec.L_values) tasks.push_back({e, spec.method, L});
    }

  // FCI benchmark once per entry (tracked state when asked)
  std::vector<double> fci_energy(m.entries.size());
  std::vector<std::string> fci_error(m.entries.size());
  auto bench = [&](std::size_t e) {
    try {
      const auto ints = IntegralSet::from_file(m.entries[e].path);
      const int roots = track_hf ? 4 : 1;
      const auto sol = fci_solve(ints, ints.n_alpha(), ints.n_beta(), roots);
      int idx = 0;
      if (track_hf) idx = track_hf_state(sol).index;
      fci_energy[e] = sol.energies[idx];
    } catch (const std::exception& ex) {
      fci_error[e] = ex.what();
    }
  };

  std::vector<ScanRow> rows(tasks.size());
  auto work = [&](std::size_t t) {
    const Task& task = tasks[t];
    const ManifestEntry& entry = m.entries[task.entry];
    ScanRow& row = rows[t];
    row.label = entry.label;
    row.geometry = entry.geometry;
    row.method = task.method;
    row.L = task.L;
    const double t0 = now_seconds();
    try {
      if (!fci_error[task.entry].empty())
        throw std::runtime_error("benchmark failed: " + fci_error[task.entry]);
      const auto ints = IntegralSet::from_file(entry.path);
      RunFlags flags;
      flags.large = task.L.value_or(0);
      flags.track_hf = track_hf;
      if (track_hf) flags.roots = 4;
      const json res = run_method(ints, task.method, flags);
      row.energy = res.contains("energy") ? res["energy"].get<double>()
                                          : res["e_reference"].get<double>();
      if (res.contains("promoted_singles"))
        row.promoted_singles = res["promoted_singles"].get<std::size_t>();
      row.e_minus_fci = *row.energy - fci_energy[task.entry];
    } catch (const std::exception& ex) {
      row.error = ex.what();
    }
    row.wall_seconds = now_seconds() - t0;
  };

  const int pool = std::max(1, threads);
  {
    std::atomic<std::size_t> next{0};
    auto drain = [&](auto&& fn, std::size_t count) {
      next.store(0);
      std::vector<std::thread> workers;
      const int k = std::min<std::size_t>(pool, count);
      for (int w = 0; w < k; ++w)
        workers.emplace_back([&] {
          for (std::size_t i = next.fetch_add(1); i < count;
               i = next.fetch_add(1))
            fn(i);
        });
      for (auto& w : workers) w.join();
    };
    drain(bench, m.entries.size());
    drain(work, tasks.size());
  }

  std::printf(
      "label,geometry_parameter,method,L,energy_hartree,e_minus_fci,"
      "promoted_singles,wall_seconds,error\n");
  for (const auto& r : rows) {
    std::printf("%s,%s,%s,%s,%s,%s,%zu,%.3f,%s\n", r.label.c_str(),
                csv_double(r.geometry).c_str(), r.method.c_str(),
                r.L ? std::to_string(*r.L).c_str() : "",
                r.energy ? csv_double(*r.energy).c_str() : "",
                r.e_minus_fci ? csv_double(*r.e_minus_fci).c_str() : "",
                r.promoted_singles, r.wall_seconds, r.error.c_str());
  }
  for (const auto& r : rows)
    if (!r.error.empty()) return 2;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"factorized-UCC solver with quadratic refinement"};
  app.require_subcommand(1);

  std::string info_path;
  auto* info = app.add_subcommand("info", "system and factor-count summary");
  info->add_option("fcidump", info_path, "FCIDUMP file")->required();

  std::string run_path, run_method_name = "qucc", seed_order = "largest-first";
  std::string promote = "on";
  RunFlags flags;
  int threads = default_threads();
  auto* run = app.add_subcommand("run", "single-point calculation");
  run->add_option("fcidump", run_path, "FCIDUMP file")->required();
  run->add_option("--method", run_method_name, "hf|mp2|fci|ucc|qucc");
  run->add_option("--large", flags.large, "number of exactly treated factors");
  run->add_option("--promote-singles", promote, "on|off");
  run->add_flag("--fd-check", flags.fd_check,
                "validate analytic derivatives by finite differences");
  run->add_option("--threads", threads, "worker threads");
  run->add_option("--seed-order", seed_order, "largest-first|largest-last");
  run->add_option("--roots", flags.roots, "FCI roots");
  run->add_flag("--track-hf", flags.track_hf,
                "benchmark against the max-HF-overlap state");

  std::string scan_path;
  bool scan_track = false;
  int scan_threads = default_threads();
  auto* scan = app.add_subcommand("scan", "manifest-driven scan (CSV output)");
  scan->add_option("manifest", scan_path, "scan manifest")->required();
  scan->add_option("--threads", scan_threads, "worker threads");
  scan->add_flag("--track-hf", scan_track,
                 "benchmark against the max-HF-overlap state");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*info) return cmd_info(info_path);
    if (*run) {
      if (promote != "on" && promote != "off")
        throw std::invalid_argument("--promote-singles expects on|off");
      if (seed_order != "largest-first" && seed_order != "largest-last")
        throw std::invalid_argument(
            "--seed-order expects largest-first|largest-last");
      flags.promote_singles = promote == "on";
      flags.largest_last = seed_order == "largest-last";
      const auto ints = IntegralSet::from_file(run_path);
      const json out = run_method(ints, run_method_name, flags);
      std::cout << out.dump(2) << "\n";
      return 0;
    }
    if (*scan) return cmd_scan(scan_path, scan_threads, scan_track);
  } catch (const std::exception& e) {
    const json err{{"error", e.what()}};
    std::cout << err.dump(2) << "\n";
    return 1;
  }
  return 0;
}
