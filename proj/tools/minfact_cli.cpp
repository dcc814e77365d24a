// Command-line front end: enumeration, sampling, conversions, SVG
// rendering and the statistical estimators.
//
// Exit codes: 0 success, 1 usage error, 2 validation failure,
// 3 statistical test failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "minfact/bijection.hpp"
#include "minfact/enumerate.hpp"
#include "minfact/json_io.hpp"
#include "minfact/processes.hpp"
#include "minfact/sampling.hpp"
#include "minfact/stats.hpp"
#include "minfact/svg.hpp"

namespace fs = std::filesystem;
using namespace minfact;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitStatFail = 3;

struct OutputSink {
  std::string path;  // empty or "-" means stdout
  bool force = false;

  void write(const std::string& content) const {
    if (path.empty() || path == "-") {
      std::cout << content;
      return;
    }
    if (!force && fs::exists(path))
      throw std::runtime_error("refusing to overwrite '" + path + "' (use --force)");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
  }
};

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<ClassSignature> parse_class(const std::string& spec) {
  if (spec.empty()) return std::nullopt;
  ClassSignature cls;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) cls.lengths.push_back(std::stoi(tok));
  return cls;
}

int cmd_enumerate(int n, const std::string& class_spec, const OutputSink& sink) {
  auto cls = parse_class(class_spec);
  std::ostringstream os;
  long long count = 0;
  enumerate_minimal_factorizations(n, cls ? &*cls : nullptr, [&](const Factorization& f) {
    os << to_json(f).dump() << "\n";
    ++count;
  });
  Json summary;
  summary["schema"] = "minfact.enumeration-summary/1";
  summary["n"] = n;
  summary["count"] = count;
  if (cls) {
    Json lengths = Json::array();
    for (int a : cls->lengths) lengths.push_back(a);
    summary["class"] = std::move(lengths);
    summary["expected"] = ipow(n, static_cast<int>(cls->lengths.size()) - 1);
    if (count != summary["expected"].get<long long>()) {
      std::cerr << "count mismatch against the class identity\n";
      return kExitValidation;
    }
  }
  os << summary.dump() << "\n";
  sink.write(os.str());
  return kExitOk;
}

int cmd_sample(const WeightSequence& w, int n, std::uint64_t seed, const std::string& emit,
               double process_c, double eps, const OutputSink& sink) {
  CriticalEquivalent ce = critical_equivalent(w);
  Rng rng(seed);
  std::ostringstream os;
  if (emit == "factorization") {
    os << to_json(sample_minimal_factorization(ce, n, rng)).dump(2) << "\n";
  } else if (emit == "tree") {
    BoltzmannSampler s(ce, n);
    os << to_json(s.sample_tree(rng)).dump(2) << "\n";
  } else if (emit == "lamination") {
    Json out = to_json(phi(sample_minimal_factorization(ce, n, rng)));
    out["n"] = n;
    os << out.dump(2) << "\n";
  } else if (emit == "process") {
    Factorization f = sample_minimal_factorization(ce, n, rng);
    LaminationProcess p = face_process(f);
    const ScalingConstants sc = scaling_constants(ce, static_cast<double>(n));
    p.scale_B_tilde = sc.B_tilde;
    p.one_minus_nu0 = 1.0 - ce.nu0;
    os << process_to_jsonl(p);
  } else if (emit == "excursion-chords") {
    Excursion F = stable_excursion_approx(ce.finite_variance ? 2.0 : ce.alpha,
                                          std::max(n, 10000), rng);
    for (const TimedChord& ch : sample_chord_process(F, process_c, eps, rng)) {
      Json j;
      j["r"] = ch.r;
      j["type"] = "chord";
      j["g"] = ch.g;
      j["d"] = ch.d;
      os << j.dump() << "\n";
    }
  } else {
    std::cerr << "unknown --emit kind '" << emit << "'\n";
    return kExitUsage;
  }
  sink.write(os.str());
  return kExitOk;
}

int cmd_convert(const std::string& to, const std::string& input, const OutputSink& sink) {
  Json j = Json::parse(read_input(input));
  const std::string schema = j.value("schema", "");
  std::ostringstream os;
  if (to == "contour-csv" || to == "lukasiewicz-csv") {
    LabelledBiTypeTree t = schema == "minfact.tree/1"
                               ? tree_from_json(j)
                               : psi(factorization_from_json(j));
    sink.write(walk_to_csv(to == "contour-csv" ? t.tree.contour() : t.tree.lukasiewicz()));
    return kExitOk;
  }
  if (to == "factorization") {
    Factorization f;
    if (schema == "minfact.tree/1")
      f = psi_inverse(tree_from_json(j));
    else if (schema == "minfact.lamination/1")
      f = phi_inverse(lamination_from_json(j), j.at("n").get<int>());
    else
      f = factorization_from_json(j);
    os << to_json(f).dump(2) << "\n";
  } else if (to == "tree") {
    Factorization f;
    if (schema == "minfact.tree/1") {
      os << to_json(tree_from_json(j)).dump(2) << "\n";
      sink.write(os.str());
      return kExitOk;
    }
    f = factorization_from_json(j);
    os << to_json(psi(f)).dump(2) << "\n";
  } else if (to == "lamination") {
    Factorization f;
    if (schema == "minfact.tree/1")
      f = psi_inverse(tree_from_json(j));
    else
      f = factorization_from_json(j);
    Json out = to_json(phi(f));
    out["n"] = f.n;
    os << out.dump(2) << "\n";
  } else {
    std::cerr << "unknown --to kind '" << to << "'\n";
    return kExitUsage;
  }
  sink.write(os.str());
  return kExitOk;
}

namespace {

// Drops elements whose angular extent is below the floor; sub-pixel chords
// only bloat the output.
ColoredLamination filter_small(const ColoredLamination& L, double eps) {
  if (eps <= 0) return L;
  auto extent = [](const UnitAngle& a, const UnitAngle& b) {
    double d = std::abs(a.value() - b.value());
    return std::min(d, 1.0 - d);
  };
  ColoredLamination out;
  for (const Chord& c : L.chords)
    if (extent(c.a, c.b) >= eps) out.chords.push_back(c);
  for (const BlackFace& f : L.faces)
    if (extent(f.corners.front(), f.corners.back()) >= eps) out.faces.push_back(f);
  return out;
}

}  // namespace

int cmd_render(const std::string& input, const OutputSink& sink, int frames, int size,
               double eps) {
  RenderOptions opt;
  opt.size = size;
  const std::string content = read_input(input);
  // Heuristic: JSONL process input when the first line parses alone and
  // carries an "r" field.
  bool is_process = false;
  {
    std::istringstream ss(content);
    std::string first;
    std::getline(ss, first);
    try {
      Json j = Json::parse(first);
      is_process = j.contains("r");
    } catch (...) {
      is_process = false;
    }
  }
  if (!is_process) {
    Json j = Json::parse(content);
    ColoredLamination L = filter_small(lamination_from_json(j), eps);
    sink.write(render_svg(L, opt));
    return kExitOk;
  }
  std::istringstream ss(content);
  LaminationProcess p = process_from_jsonl(ss);
  if (frames <= 0) {
    sink.write(render_svg(filter_small(p.at(static_cast<double>(p.events.size())), eps), opt));
    return kExitOk;
  }
  if (sink.path.empty() || sink.path == "-")
    throw std::runtime_error("frame rendering needs --out as a filename pattern");
  std::vector<std::string> rendered = render_frames(p, frames, opt);
  for (std::size_t i = 0; i < rendered.size(); ++i) {
    char suffix[16];
    std::snprintf(suffix, sizeof suffix, "_%05zu", i);
    fs::path base(sink.path);
    fs::path out = base.parent_path() / (base.stem().string() + suffix + base.extension().string());
    OutputSink frame_sink{out.string(), sink.force};
    frame_sink.write(rendered[i]);
  }
  std::cout << rendered.size() << " frames written\n";
  return kExitOk;
}

int cmd_stats(const std::string& estimator, const WeightSequence& w, int n, long long trials,
              std::uint64_t seed, int threads, double eps, const OutputSink& sink) {
  std::ostringstream os;
  bool pass = true;
  if (estimator == "counting") {
    CountingReport rep = counting_suite(n);
    os << to_json(rep).dump(2) << "\n";
    pass = rep.ok;
  } else if (estimator == "p-nu") {
    CriticalEquivalent ce = critical_equivalent(w);
    PnuResult exact = exact_p_nu(ce);
    Json j;
    j["schema"] = "minfact.report/1";
    j["estimator"] = "p-nu";
    j["closed_form"] = exact.value;
    j["infinite_variance"] = exact.infinite_variance;
    if (!exact.infinite_variance) {
      const double dp = p_nu_by_branching_formula(ce, 200);
      j["branching_formula"] = dp;
      pass = std::abs(dp - exact.value) <= 1e-8;
      j["pass"] = pass;
    }
    os << j.dump(2) << "\n";
  } else if (estimator == "cycle-count") {
    CriticalEquivalent ce = critical_equivalent(w);
    TrialReport rep = estimate_cycle_count(ce, n, trials, seed, threads);
    os << to_json(rep).dump(2) << "\n";
    pass = rep.pass;
  } else if (estimator == "largest-cycle") {
    CriticalEquivalent ce = critical_equivalent(w);
    TrialReport rep = estimate_largest_cycle(ce, n, trials, seed, threads);
    os << to_json(rep).dump(2) << "\n";
    pass = rep.pass;
  } else if (estimator == "largest-cycle-grid") {
    // CSV rows over an n-grid for trend plots.
    CriticalEquivalent ce = critical_equivalent(w);
    os << "n,median,mean,se\n";
    for (int size : {n, 2 * n, 4 * n}) {
      TrialReport rep = estimate_largest_cycle(ce, size, trials, seed, threads);
      os << size << "," << rep.median << "," << rep.mean << "," << rep.se << "\n";
    }
  } else if (estimator == "black-fraction") {
    CriticalEquivalent ce = critical_equivalent(w);
    TrialReport rep = estimate_black_fraction(ce, n, trials, eps, seed, threads);
    os << to_json(rep).dump(2) << "\n";
    pass = rep.pass && !rep.inconclusive;
  } else {
    std::cerr << "unknown estimator '" << estimator << "'\n";
    return kExitUsage;
  }
  sink.write(os.str());
  return pass ? kExitOk : kExitStatFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimal factorizations of the n-cycle: samplers, codings, statistics"};
  app.require_subcommand(1);

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "list all minimal factorizations");
  int en_n = 4;
  std::string en_class;
  std::string en_out;
  bool en_force = false;
  enumerate->add_option("--n", en_n, "cycle size")->required();
  enumerate->add_option("--class", en_class, "ordered class signature, e.g. 2,2,2");
  enumerate->add_option("--out", en_out, "output path (default stdout)");
  enumerate->add_flag("--force", en_force, "overwrite existing output");

  // sample
  auto* sample = app.add_subcommand("sample", "draw a random weighted minimal factorization");
  std::string sa_weights = "uniform", sa_emit = "factorization", sa_out;
  int sa_n = 100;
  std::uint64_t sa_seed = 0;
  bool sa_force = false, sa_seed_set = false;
  double sa_c = 1.0, sa_eps = 0.01;
  sample->add_option("--weights", sa_weights, "uniform | delta:r | powerlaw:alpha | file.json");
  sample->add_option("--n", sa_n, "cycle size")->required();
  sample->add_option("--seed", sa_seed, "RNG seed (required)")->each([&](const std::string&) {
    sa_seed_set = true;
  });
  sample->add_option("--emit", sa_emit, "factorization | tree | lamination | process | excursion-chords");
  sample->add_option("--c", sa_c, "time horizon for excursion-chords");
  sample->add_option("--eps", sa_eps, "chord length floor for excursion-chords");
  sample->add_option("--out", sa_out, "output path (default stdout)");
  sample->add_flag("--force", sa_force, "overwrite existing output");

  // convert
  auto* convert = app.add_subcommand("convert", "convert between codings");
  std::string co_to = "tree", co_in, co_out;
  bool co_force = false;
  convert->add_option("--to", co_to,
                      "factorization | tree | lamination | contour-csv | lukasiewicz-csv")
      ->required();
  convert->add_option("--in", co_in, "input path (default stdin)");
  convert->add_option("--out", co_out, "output path (default stdout)");
  convert->add_flag("--force", co_force, "overwrite existing output");

  // render
  auto* render = app.add_subcommand("render", "render a lamination or process to SVG");
  std::string re_in, re_out;
  int re_frames = 0, re_size = 800;
  double re_eps = 0.0;
  bool re_force = false;
  render->add_option("--in", re_in, "lamination JSON or process JSONL (default stdin)");
  render->add_option("--out", re_out, "output path (default stdout)");
  render->add_option("--frames", re_frames, "emit numbered frames for a process");
  render->add_option("--size", re_size, "canvas size in px");
  render->add_option("--eps", re_eps, "drop elements of angular extent below this floor");
  render->add_flag("--force", re_force, "overwrite existing output");

  // stats
  auto* stats = app.add_subcommand("stats", "run a statistical estimator");
  std::string st_est, st_weights = "uniform", st_out;
  int st_n = 1000, st_threads = 1;
  long long st_trials = 100;
  std::uint64_t st_seed = 0;
  double st_eps = 0.05;
  bool st_force = false, st_seed_set = false;
  stats->add_option("--estimator", st_est,
                    "counting | p-nu | cycle-count | largest-cycle | largest-cycle-grid | "
                    "black-fraction")
      ->required();
  stats->add_option("--weights", st_weights, "weight model");
  stats->add_option("--n", st_n, "cycle size (or n_max for counting)");
  stats->add_option("--trials", st_trials, "Monte Carlo trials");
  stats->add_option("--seed", st_seed, "RNG seed (required for stochastic estimators)")
      ->each([&](const std::string&) { st_seed_set = true; });
  stats->add_option("--threads", st_threads, "worker threads");
  stats->add_option("--eps", st_eps, "large-face threshold as a fraction of n");
  stats->add_option("--out", st_out, "output path (default stdout)");
  stats->add_flag("--force", st_force, "overwrite existing output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (enumerate->parsed())
      return cmd_enumerate(en_n, en_class, OutputSink{en_out, en_force});
    if (sample->parsed()) {
      if (!sa_seed_set) {
        std::cerr << "sample: --seed is required\n";
        return kExitUsage;
      }
      return cmd_sample(parse_weights(sa_weights), sa_n, sa_seed, sa_emit, sa_c, sa_eps,
                        OutputSink{sa_out, sa_force});
    }
    if (convert->parsed()) return cmd_convert(co_to, co_in, OutputSink{co_out, co_force});
    if (render->parsed())
      return cmd_render(re_in, OutputSink{re_out, re_force}, re_frames, re_size, re_eps);
    if (stats->parsed()) {
      if (st_est != "counting" && st_est != "p-nu" && !st_seed_set) {
        std::cerr << "stats: --seed is required for stochastic estimators\n";
        return kExitUsage;
      }
      return cmd_stats(st_est, parse_weights(st_weights), st_n, st_trials, st_seed, st_threads,
                       st_eps, OutputSink{st_out, st_force});
    }
  } catch (const NoCriticalEquivalent& e) {
    std::cerr << "no critical equivalent: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
