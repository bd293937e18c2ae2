// Copyright 2026 The ivmap Authors
// SPDX-License-Identifier: Apache-2.0
//
// ivmap command line front end. Links only the C interface.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "ivmap/ivmap.h"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 2;
constexpr int kExitIo = 3;

struct Failure {
  int code;
  std::string message;
};

void check(ivm_status s) {
  if (s == IVM_OK) return;
  const int code = (s == IVM_E_PARSE || s == IVM_E_IO) ? kExitIo : kExitDomain;
  throw Failure{code, std::string(ivm_status_name(s)) + ": " + ivm_last_error()};
}

struct MapDeleter {
  void operator()(ivm_map* m) const { ivm_map_free(m); }
};
using MapPtr = std::unique_ptr<ivm_map, MapDeleter>;

struct Text {
  char* p = nullptr;
  ~Text() { ivm_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

MapPtr load(const std::string& path) {
  ivm_map* m = nullptr;
  check(ivm_map_load(path.c_str(), &m));
  return MapPtr(m);
}

std::string map_text(const ivm_map* m) {
  Text t;
  check(ivm_map_to_json(m, &t.p));
  return t.str();
}

// "0.5-" / "0.5+" -> (coord, side)
std::pair<double, int> parse_lateral(const std::string& s) {
  if (s.size() < 2 || (s.back() != '-' && s.back() != '+'))
    throw Failure{kExitDomain, "lateral point must look like 0.5- or 0.5+: " + s};
  try {
    std::size_t used = 0;
    const double x = std::stod(s.substr(0, s.size() - 1), &used);
    if (used != s.size() - 1) throw std::invalid_argument(s);
    return {x, s.back() == '-' ? IVM_SIDE_MINUS : IVM_SIDE_PLUS};
  } catch (const std::logic_error&) {
    throw Failure{kExitDomain, "bad lateral point: " + s};
  }
}

struct Run {
  std::string command;
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
  int exit_code = kExitOk;
};

struct Globals {
  std::string out_dir;
  unsigned threads = 0;
};

void write_text(const std::filesystem::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Failure{kExitIo, "cannot write " + p.string()};
  f << s;
  if (!f) throw Failure{kExitIo, "write failed for " + p.string()};
}

json option_values(const CLI::App* sub) {
  json params = json::object();
  for (const CLI::Option* o : sub->get_options()) {
    const std::string key = o->get_lnames().empty() ? o->get_name() : o->get_lnames().front();
    if (key.empty() || key == "help") continue;
    if (o->count() > 0) {
      const auto& r = o->results();
      params[key] = r.size() == 1 ? json(r.front()) : json(r);
    } else if (!o->get_default_str().empty()) {
      params[key] = o->get_default_str();
    }
  }
  return params;
}

const CLI::App* leaf(const CLI::App* app) {
  for (const CLI::App* s : app->get_subcommands())
    if (s->parsed()) return leaf(s);
  return app;
}

std::string command_path(const CLI::App* app) {
  std::string out;
  for (const CLI::App* s : app->get_subcommands()) {
    if (!s->parsed()) continue;
    out = s->get_name();
    const std::string rest = command_path(s);
    if (!rest.empty()) out += " " + rest;
  }
  return out;
}

int run(const std::vector<std::string>& args);

int emit(const Run& r, const Globals& g, const std::vector<std::string>& args, const CLI::App& app) {
  if (g.out_dir.empty()) {
    for (const auto& [name, contents] : r.files) std::cout << contents;
    std::cout.flush();
    return r.exit_code;
  }
  const std::filesystem::path dir(g.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Failure{kExitIo, "cannot create " + dir.string() + ": " + ec.message()};
  json outputs = json::array();
  for (const auto& [name, contents] : r.files) {
    write_text(dir / name, contents);
    outputs.push_back(name);
  }
  // argv without the output directory, so a manifest reruns anywhere
  json argv = json::array();
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--out" || args[k] == "-o") {
      ++k;
      continue;
    }
    if (args[k].rfind("--out=", 0) == 0) continue;
    argv.push_back(args[k]);
  }
  const CLI::App* sub = leaf(&app);
  json params = option_values(sub);
  json manifest{{"tool", "ivmap"},
                {"version", ivm_version()},
                {"command", command_path(&app)},
                {"argv", argv},
                {"params", params},
                {"outputs", outputs},
                {"exit_code", r.exit_code}};
  manifest["seed"] = nullptr;
  if (params.contains("seed") && params["seed"].is_string())
    manifest["seed"] = std::stoull(params["seed"].get<std::string>());
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  return r.exit_code;
}

ivm_sampling sampling_defaults() {
  ivm_sampling s;
  ivm_sampling_default(&s);
  return s;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"ivmap: lateral dynamics, return maps, surgery and attractors of interval maps", "ivmap"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("-o,--out", g.out_dir, "Write outputs and manifest.json into this directory");
  app.add_option("--threads", g.threads, "Worker threads (default: IVMAP_THREADS or all cores)");
  app.set_version_flag("--version", std::string(ivm_version()));

  Run r;
  std::function<void()> action;

  std::string spec;
  const auto spec_arg = [&](CLI::App* s) { s->add_option("spec", spec, "Map spec file")->required(); };

  // validate
  std::size_t grid_n = 10000;
  CLI::App* validate = app.add_subcommand("validate", "Check tiling, range, Schwarzian sign and orientation");
  spec_arg(validate);
  validate->add_option("--grid", grid_n, "Grid points per branch")->capture_default_str();
  validate->callback([&] {
    action = [&] {
      MapPtr m = load(spec);
      int clean = 0;
      Text rep;
      check(ivm_map_validate(m.get(), grid_n, &clean, &rep.p));
      r.files.push_back({"report.json", rep.str()});
      r.exit_code = clean ? kExitOk : kExitDomain;
    };
  });

  // orbit
  std::string lateral;
  std::optional<double> x_real;
  std::size_t n_steps = 10;
  CLI::App* orbit = app.add_subcommand("orbit", "Real or lateral orbit as CSV");
  spec_arg(orbit);
  auto* lat_opt = orbit->add_option("--lateral", lateral, "Lateral start, e.g. 0.5-");
  auto* x_opt = orbit->add_option("--x", x_real, "Real start point");
  lat_opt->excludes(x_opt);
  orbit->add_option("--n", n_steps, "Number of steps")->capture_default_str();
  orbit->callback([&] {
    action = [&] {
      if (lateral.empty() && !x_real) throw Failure{kExitDomain, "orbit needs --lateral or --x"};
      MapPtr m = load(spec);
      Text csv;
      if (!lateral.empty()) {
        const auto [x, side] = parse_lateral(lateral);
        check(ivm_orbit_csv(m.get(), x, side, n_steps, &csv.p));
      } else {
        check(ivm_orbit_csv(m.get(), *x_real, 0, n_steps, &csv.p));
      }
      r.files.push_back({"orbit.csv", csv.str()});
    };
  });

  // periodic
  std::size_t max_period = 64;
  double tol_p = 1e-9;
  CLI::App* periodic = app.add_subcommand("periodic", "Periodic-like test for a lateral point");
  spec_arg(periodic);
  periodic->add_option("--lateral", lateral, "Lateral point, e.g. 0.3+")->required();
  periodic->add_option("--max-period", max_period)->capture_default_str();
  periodic->add_option("--tol", tol_p)->capture_default_str();
  periodic->callback([&] {
    action = [&] {
      MapPtr m = load(spec);
      const auto [x, side] = parse_lateral(lateral);
      Text j;
      check(ivm_periodic(m.get(), x, side, max_period, tol_p, &j.p));
      r.files.push_back({"periodic.json", j.str()});
    };
  });

  // omega
  double x0 = 0.0;
  ivm_sampling smp = sampling_defaults();
  CLI::App* omega = app.add_subcommand("omega", "Grid cover of the omega-limit set of one point");
  spec_arg(omega);
  omega->add_option("--x0", x0, "Initial point")->required();
  omega->add_option("--burn-in", smp.burn_in)->capture_default_str();
  omega->add_option("--tail", smp.tail)->capture_default_str();
  omega->add_option("--resolution", smp.resolution)->capture_default_str();
  omega->callback([&] {
    action = [&] {
      MapPtr m = load(spec);
      Text j;
      check(ivm_omega(m.get(), x0, smp.burn_in, smp.tail, smp.resolution, &j.p));
      r.files.push_back({"omega.json", j.str()});
    };
  });

  // returnmap
  double a = 0.0, b = 0.0;
  std::size_t max_time = 15;
  double tol_onto = 1e-9;
  std::size_t nice_horizon = 0;
  std::size_t induced_depth = 0;
  std::size_t induced_max_time = 40;
  CLI::App* returnmap = app.add_subcommand("returnmap", "First-return map to (a,b)");
  spec_arg(returnmap);
  returnmap->add_option("--a", a)->required();
  returnmap->add_option("--b", b)->required();
  returnmap->add_option("--max-time", max_time)->capture_default_str();
  returnmap->add_option("--tol-onto", tol_onto)->capture_default_str();
  returnmap->add_option("--nice-horizon", nice_horizon, "Also check niceness over this many steps");
  returnmap->add_option("--induced-depth", induced_depth, "Also build the accelerated induced map to this depth");
  returnmap->add_option("--induced-max-time", induced_max_time)->capture_default_str();
  returnmap->callback([&] {
    action = [&] {
      MapPtr m = load(spec);
      Text csv, summary;
      check(ivm_return_map(m.get(), a, b, max_time, tol_onto, &csv.p, &summary.p));
      r.files.push_back({"returnmap.csv", csv.str()});
      r.files.push_back({"returnmap.json", summary.str()});
      if (nice_horizon > 0) {
        Text nice;
        check(ivm_check_nice(m.get(), a, b, nice_horizon, &nice.p));
        r.files.push_back({"nice.json", nice.str()});
      }
      if (induced_depth > 0) {
        Text ind;
        check(ivm_induced_map(m.get(), a, b, induced_depth, induced_max_time, &ind.p));
        r.files.push_back({"induced.json", ind.str()});
      }
    };
  });

  // dichotomy
  std::optional<std::uint64_t> seed;
  ivm_sampling dsm = sampling_defaults();
  dsm.samples = 200;
  std::size_t horizon = 1000;
  double threshold = 0.95;
  CLI::App* dichotomy = app.add_subcommand("dichotomy", "Avoid-or-cover probe for an interval");
  spec_arg(dichotomy);
  dichotomy->add_option("--a", a)->required();
  dichotomy->add_option("--b", b)->required();
  dichotomy->add_option("--seed", seed)->required();
  dichotomy->add_option("--samples", dsm.samples)->capture_default_str();
  dichotomy->add_option("--burn-in", dsm.burn_in)->capture_default_str();
  dichotomy->add_option("--tail", dsm.tail)->capture_default_str();
  dichotomy->add_option("--resolution", dsm.resolution)->capture_default_str();
  dichotomy->add_option("--horizon", horizon)->capture_default_str();
  dichotomy->add_option("--threshold", threshold)->capture_default_str();
  dichotomy->callback([&] {
    action = [&] {
      MapPtr m = load(spec);
      dsm.seed = *seed;
      dsm.threads = g.threads;
      Text j;
      check(ivm_dichotomy(m.get(), a, b, &dsm, horizon, threshold, &j.p));
      r.files.push_back({"dichotomy.json", j.str()});
    };
  });

  // surgery
  double q = 0.0, p = 0.0, c = 0.0;
  CLI::App* surgery = app.add_subcommand("surgery", "Modify a map on an interval");
  surgery->require_subcommand(1);
  const auto surgery_out = [&](ivm_map* out, Text& rec) {
    MapPtr g_map(out);
    r.files.push_back({"map.json", map_text(g_map.get())});
    r.files.push_back({"record.json", rec.str()});
  };
  CLI::App* pit = surgery->add_subcommand("pit", "g = q + sigma (f - q) on (a,b)");
  spec_arg(pit);
  pit->add_option("--a", a)->required();
  pit->add_option("--b", b)->required();
  pit->add_option("--q", q)->required();
  pit->callback([&] {
    action = [&] {
      MapPtr m = load(spec);
      ivm_map* out = nullptr;
      Text rec;
      check(ivm_surgery_pit(m.get(), a, b, q, &out, &rec.p));
      surgery_out(out, rec);
    };
  });
  CLI::App* flatten = surgery->add_subcommand("flatten", "Flatten a unimodal map above a periodic orbit");
  spec_arg(flatten);
  flatten->add_option("--p", p, "Periodic point")->required();
  flatten->callback([&] {
    action = [&] {
      MapPtr m = load(spec);
      ivm_map* out = nullptr;
      Text rec;
      check(ivm_surgery_flatten(m.get(), p, &out, &rec.p));
      surgery_out(out, rec);
    };
  });
  CLI::App* lrs = surgery->add_subcommand("lorenz-rescale", "Stretch a Lorenz map on (a,c) and (c,b)");
  spec_arg(lrs);
  lrs->add_option("--a", a)->required();
  lrs->add_option("--b", b)->required();
  lrs->add_option("--c", c)->required();
  lrs->callback([&] {
    action = [&] {
      MapPtr m = load(spec);
      ivm_map* out = nullptr;
      Text rec;
      check(ivm_surgery_lorenz(m.get(), a, b, c, &out, &rec.p));
      surgery_out(out, rec);
    };
  });

  // classify
  ivm_sampling csm = sampling_defaults();
  CLI::App* classify = app.add_subcommand("classify", "Sample, cluster and classify attractors");
  spec_arg(classify);
  classify->add_option("--seed", seed)->required();
  classify->add_option("--samples", csm.samples)->capture_default_str();
  classify->add_option("--burn-in", csm.burn_in)->capture_default_str();
  classify->add_option("--tail", csm.tail)->capture_default_str();
  classify->add_option("--resolution", csm.resolution)->capture_default_str();
  classify->add_option("--hausdorff-tol", csm.hausdorff_tol)->capture_default_str();
  classify->add_option("--closure-steps", csm.closure_steps)->capture_default_str();
  classify->callback([&] {
    action = [&] {
      MapPtr m = load(spec);
      csm.seed = *seed;
      csm.threads = g.threads;
      Text j;
      check(ivm_classify(m.get(), &csm, &j.p));
      r.files.push_back({"classify.json", j.str()});
    };
  });

  // mane
  double tol_dist = 1e-3;
  ivm_sampling msm = sampling_defaults();
  CLI::App* mane = app.add_subcommand("mane", "Fraction of samples accumulating on the exceptional set");
  spec_arg(mane);
  mane->add_option("--seed", seed)->required();
  mane->add_option("--tol-dist", tol_dist)->capture_default_str();
  mane->add_option("--samples", msm.samples)->capture_default_str();
  mane->add_option("--burn-in", msm.burn_in)->capture_default_str();
  mane->add_option("--tail", msm.tail)->capture_default_str();
  mane->callback([&] {
    action = [&] {
      MapPtr m = load(spec);
      msm.seed = *seed;
      msm.threads = g.threads;
      double frac = 0.0;
      check(ivm_mane(m.get(), tol_dist, &msm, &frac));
      const json j{{"fraction", frac}, {"tol_dist", tol_dist}, {"samples", msm.samples}, {"seed", msm.seed}};
      r.files.push_back({"mane.json", j.dump(2) + "\n"});
    };
  });

  // rotation
  std::optional<double> rot_c;
  std::size_t rot_n = 100000;
  CLI::App* rotation = app.add_subcommand("rotation", "Rotation number of an injective two-branch map");
  spec_arg(rotation);
  rotation->add_option("--c", rot_c, "Exceptional point (default: the only one)");
  rotation->add_option("--n", rot_n)->capture_default_str();
  rotation->callback([&] {
    action = [&] {
      MapPtr m = load(spec);
      double cc = 0.0;
      if (rot_c) {
        cc = *rot_c;
      } else {
        std::size_t count = 0;
        check(ivm_map_exceptional(m.get(), &cc, 1, &count));
        if (count != 1) throw Failure{kExitDomain, "map has " + std::to_string(count) + " exceptional points; pass --c"};
      }
      double rho = 0.0;
      check(ivm_rotation(m.get(), cc, rot_n, &rho));
      const json j{{"c", cc}, {"n", rot_n}, {"rotation", rho}};
      r.files.push_back({"rotation.json", j.dump(2) + "\n"});
    };
  });

  // zoo
  CLI::App* zoo = app.add_subcommand("zoo", "Write a map spec from a built-in family");
  zoo->require_subcommand(1);
  double lambda = 4.0;
  CLI::App* logistic = zoo->add_subcommand("logistic", "x -> lambda x (1 - x)");
  logistic->add_option("--lambda", lambda)->capture_default_str();
  logistic->callback([&] {
    action = [&] {
      ivm_map* out = nullptr;
      check(ivm_zoo_logistic(lambda, &out));
      MapPtr mm(out);
      r.files.push_back({"map.json", map_text(mm.get())});
    };
  });
  double lc = 0.5, rho_l = 2.0, rho_r = 2.0, u = 0.9, v = 0.1;
  CLI::App* lorenz = zoo->add_subcommand("lorenz", "Power-law contracting Lorenz map");
  lorenz->add_option("--c", lc)->capture_default_str();
  lorenz->add_option("--rho-l", rho_l)->capture_default_str();
  lorenz->add_option("--rho-r", rho_r)->capture_default_str();
  lorenz->add_option("--u", u)->capture_default_str();
  lorenz->add_option("--v", v)->capture_default_str();
  lorenz->callback([&] {
    action = [&] {
      ivm_map* out = nullptr;
      check(ivm_zoo_lorenz(lc, rho_l, rho_r, u, v, &out));
      MapPtr mm(out);
      r.files.push_back({"map.json", map_text(mm.get())});
    };
  });
  ivm_ewi_options ewi_opt;
  ivm_ewi_options_default(&ewi_opt);
  double ewi_u = 0.7;
  CLI::App* ewi = zoo->add_subcommand("ewi", "Two-point candidate map built from a Lorenz gap map");
  ewi->add_option("--c", lc)->capture_default_str();
  ewi->add_option("--rho-l", rho_l)->capture_default_str();
  ewi->add_option("--rho-r", rho_r)->capture_default_str();
  ewi->add_option("--u", ewi_u)->capture_default_str();
  ewi->add_option("--target", ewi_opt.rotation_target)->capture_default_str();
  ewi->add_option("--target-tol", ewi_opt.target_tolerance)->capture_default_str();
  ewi->add_option("--budget", ewi_opt.search_budget)->capture_default_str();
  ewi->add_option("--v-lo", ewi_opt.v_lo)->capture_default_str();
  ewi->add_option("--v-hi", ewi_opt.v_hi)->capture_default_str();
  ewi->add_option("--rotation-steps", ewi_opt.rotation_steps)->capture_default_str();
  ewi->callback([&] {
    action = [&] {
      ivm_map* out = nullptr;
      Text info;
      check(ivm_zoo_ewi(lc, rho_l, rho_r, ewi_u, &ewi_opt, &out, &info.p));
      MapPtr mm(out);
      r.files.push_back({"map.json", map_text(mm.get())});
      r.files.push_back({"ewi.json", info.str()});
    };
  });

  // rerun
  std::string manifest_path;
  CLI::App* rerun = app.add_subcommand("rerun", "Re-execute the command recorded in a manifest");
  rerun->add_option("manifest", manifest_path)->required();
  rerun->callback([&] {
    action = [&] {
      std::ifstream f(manifest_path, std::ios::binary);
      if (!f) throw Failure{kExitIo, "cannot read " + manifest_path};
      json m;
      try {
        m = json::parse(f);
      } catch (const json::exception& e) {
        throw Failure{kExitIo, std::string("manifest parse error: ") + e.what()};
      }
      if (!m.contains("argv") || !m["argv"].is_array()) throw Failure{kExitIo, "manifest has no argv"};
      std::vector<std::string> again;
      for (const auto& a_ : m["argv"]) again.push_back(a_.get<std::string>());
      if (!again.empty() && again.front() == "rerun") throw Failure{kExitDomain, "manifest records a rerun"};
      if (!g.out_dir.empty()) {
        again.push_back("--out");
        again.push_back(g.out_dir);
      }
      r.command = "rerun";
      r.exit_code = run(again);
    };
  });

  std::vector<const char*> argv{"ivmap"};
  for (const std::string& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitDomain;
  }
  if (!action) return kExitDomain;
  action();
  if (r.command == "rerun") return r.exit_code;
  return emit(r, g, args, app);
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args);
  } catch (const Failure& f) {
    std::cerr << "ivmap: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "ivmap: " << e.what() << "\n";
    return kExitIo;
  }
}
