#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "minfact/lamination.hpp"
#include "minfact/perm.hpp"
#include "minfact/processes.hpp"
#include "minfact/stats.hpp"
#include "minfact/tree.hpp"
#include "minfact/weights.hpp"

namespace minfact {

using Json = nlohmann::ordered_json;

// --------------------------------------------------------------------------
// Factorizations
// --------------------------------------------------------------------------

inline Json to_json(const Factorization& f) {
  Json j;
  j["schema"] = "minfact.factorization/1";
  j["n"] = f.n;
  Json cycles = Json::array();
  for (const Cycle& c : f.cycles) cycles.push_back(c.support);
  j["cycles"] = std::move(cycles);
  return j;
}

inline Factorization factorization_from_json(const Json& j) {
  if (!j.contains("n") || !j.contains("cycles"))
    throw std::invalid_argument("factorization json: missing fields");
  Factorization f;
  f.n = j.at("n").get<int>();
  for (const auto& c : j.at("cycles"))
    f.cycles.emplace_back(c.get<std::vector<int>>(), f.n);
  return f;
}

// --------------------------------------------------------------------------
// Labelled bi-type trees
// --------------------------------------------------------------------------

inline Json to_json(const LabelledBiTypeTree& t) {
  Json j;
  j["schema"] = "minfact.tree/1";
  Json children = Json::array();
  for (std::int32_t v = 0; v < t.tree.size(); ++v) children.push_back(t.tree.children(v));
  j["children"] = std::move(children);
  Json labels = Json::object();
  for (std::int32_t v = 0; v < t.tree.size(); ++v)
    if (t.black_label[static_cast<std::size_t>(v)] != 0)
      labels[std::to_string(v)] = t.black_label[static_cast<std::size_t>(v)];
  j["black_labels"] = std::move(labels);
  return j;
}

inline LabelledBiTypeTree tree_from_json(const Json& j) {
  if (!j.contains("children")) throw std::invalid_argument("tree json: missing children");
  const auto& ch = j.at("children");
  const std::int32_t n = static_cast<std::int32_t>(ch.size());
  // Rebuild the preorder degree sequence from adjacency; vertex ids in the
  // file must already be preorder (they are produced that way).
  std::vector<std::int32_t> deg(static_cast<std::size_t>(n));
  for (std::int32_t v = 0; v < n; ++v)
    deg[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(ch[static_cast<std::size_t>(v)].size());
  PlaneTree tree(deg);
  // Consistency: child lists must match the preorder layout.
  for (std::int32_t v = 0; v < n; ++v) {
    const auto expect = tree.children(v);
    const auto got = ch[static_cast<std::size_t>(v)].get<std::vector<std::int32_t>>();
    if (expect != got)
      throw std::invalid_argument("tree json: children are not in preorder layout");
  }
  std::vector<std::int32_t> labels(static_cast<std::size_t>(n), 0);
  if (j.contains("black_labels"))
    for (const auto& [key, val] : j.at("black_labels").items())
      labels[static_cast<std::size_t>(std::stoi(key))] = val.get<std::int32_t>();
  return LabelledBiTypeTree(std::move(tree), std::move(labels));
}

// --------------------------------------------------------------------------
// Colored laminations and process frames
// --------------------------------------------------------------------------

inline Json angle_json(const UnitAngle& a) { return Json::array({a.num, a.den}); }

inline UnitAngle angle_from_json(const Json& j) {
  return UnitAngle(j.at(0).get<long long>(), j.at(1).get<long long>());
}

inline Json to_json(const ColoredLamination& L) {
  Json j;
  j["schema"] = "minfact.lamination/1";
  Json chords = Json::array();
  for (const Chord& c : L.chords) chords.push_back(Json::array({angle_json(c.a), angle_json(c.b)}));
  j["chords"] = std::move(chords);
  Json faces = Json::array();
  for (const BlackFace& f : L.faces) {
    Json fj;
    fj["label"] = f.label;
    Json corners = Json::array();
    for (const UnitAngle& a : f.corners) corners.push_back(angle_json(a));
    fj["corners"] = std::move(corners);
    faces.push_back(std::move(fj));
  }
  j["faces"] = std::move(faces);
  return j;
}

inline ColoredLamination lamination_from_json(const Json& j) {
  ColoredLamination L;
  if (j.contains("chords"))
    for (const auto& c : j.at("chords"))
      L.chords.push_back({angle_from_json(c.at(0)), angle_from_json(c.at(1))});
  if (j.contains("faces"))
    for (const auto& fj : j.at("faces")) {
      BlackFace f;
      f.label = fj.value("label", 0);
      for (const auto& a : fj.at("corners")) f.corners.push_back(angle_from_json(a));
      std::sort(f.corners.begin(), f.corners.end());
      L.faces.push_back(std::move(f));
    }
  return L;
}

// One JSON line per event: {"r": <time>, "type": "chord"|"face", "angles": [...]}.
inline std::string process_to_jsonl(const LaminationProcess& p) {
  std::ostringstream os;
  for (const ProcessEvent& e : p.events) {
    Json j;
    j["r"] = e.time;
    j["type"] = e.is_face ? "face" : "chord";
    Json angles = Json::array();
    if (e.is_face)
      for (const UnitAngle& a : e.face.corners) angles.push_back(angle_json(a));
    else {
      angles.push_back(angle_json(e.chord.a));
      angles.push_back(angle_json(e.chord.b));
    }
    j["angles"] = std::move(angles);
    os << j.dump() << "\n";
  }
  return os.str();
}

inline LaminationProcess process_from_jsonl(std::istream& in) {
  LaminationProcess p;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Json j = Json::parse(line);
    ProcessEvent e;
    e.time = j.at("r").get<std::int64_t>();
    e.is_face = j.at("type").get<std::string>() == "face";
    const auto& angles = j.at("angles");
    if (e.is_face) {
      for (const auto& a : angles) e.face.corners.push_back(angle_from_json(a));
      std::sort(e.face.corners.begin(), e.face.corners.end());
    } else {
      e.chord = Chord{angle_from_json(angles.at(0)), angle_from_json(angles.at(1))};
    }
    p.events.push_back(std::move(e));
  }
  return p;
}

// --------------------------------------------------------------------------
// Weight models and reports
// --------------------------------------------------------------------------

inline Json to_json(const WeightSequence& w) {
  Json j;
  j["schema"] = "minfact.weights/1";
  switch (w.kind) {
    case WeightKind::Uniform:
      j["kind"] = "uniform";
      break;
    case WeightKind::Delta:
      j["kind"] = "delta";
      j["r"] = w.r;
      break;
    case WeightKind::PowerLaw:
      j["kind"] = "powerlaw";
      j["alpha"] = w.alpha;
      j["k0"] = w.k0;
      break;
    case WeightKind::Explicit:
      j["kind"] = "explicit";
      j["w"] = w.w;
      break;
  }
  return j;
}

inline WeightSequence weights_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "uniform") return WeightSequence::uniform();
  if (kind == "delta") return WeightSequence::delta(j.at("r").get<int>());
  if (kind == "powerlaw")
    return WeightSequence::power_law(j.at("alpha").get<double>(), j.value("k0", 1));
  if (kind == "explicit") return WeightSequence::explicit_list(j.at("w").get<std::vector<double>>());
  throw std::invalid_argument("weights json: unknown kind '" + kind + "'");
}

// Presets: "uniform", "delta:r", "powerlaw:alpha", or a path to a JSON file.
inline WeightSequence parse_weights(const std::string& spec) {
  if (spec == "uniform") return WeightSequence::uniform();
  if (spec.rfind("delta:", 0) == 0) return WeightSequence::delta(std::stoi(spec.substr(6)));
  if (spec.rfind("powerlaw:", 0) == 0)
    return WeightSequence::power_law(std::stod(spec.substr(9)));
  std::ifstream in(spec);
  if (!in) throw std::invalid_argument("weights: unknown preset or unreadable file '" + spec + "'");
  Json j;
  in >> j;
  return weights_from_json(j);
}

inline Json to_json(const TrialReport& r) {
  Json j;
  j["schema"] = "minfact.report/1";
  j["estimator"] = r.estimator;
  j["n"] = r.n;
  j["trials"] = r.trials;
  j["mean"] = r.mean;
  j["se"] = r.se;
  j["median"] = r.median;
  j["reference"] = r.reference;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["inconclusive"] = r.inconclusive;
  j["note"] = r.note;
  return j;
}

inline Json to_json(const CountingReport& r) {
  Json j;
  j["schema"] = "minfact.counting/1";
  j["ok"] = r.ok;
  Json rows = Json::array();
  for (const CountingRow& row : r.rows) {
    Json rj;
    rj["n"] = row.n;
    rj["what"] = row.what;
    rj["got"] = row.got;
    rj["expected"] = row.expected;
    rj["ok"] = row.ok;
    rows.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows);
  return j;
}

// Walks as CSV with a header, for plotting.
inline std::string walk_to_csv(const std::vector<std::int32_t>& walk) {
  std::ostringstream os;
  os << "t,value\n";
  for (std::size_t i = 0; i < walk.size(); ++i) os << i << "," << walk[i] << "\n";
  return os.str();
}

}  // namespace minfact
