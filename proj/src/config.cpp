#include "ghost/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ghost {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw config_error(path + ": " + msg);
}

double need_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double number_or(const json& j, const char* key, const std::string& path, double dflt) {
  if (!j.contains(key)) return dflt;
  return need_number(j.at(key), path + "." + key);
}

int int_or(const json& j, const char* key, const std::string& path, int dflt) {
  if (!j.contains(key)) return dflt;
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

}  // namespace

DetectorGram DetectorSpec::build(int n, std::optional<std::uint64_t> seed_override) const {
  switch (kind) {
    case Kind::uniform:
      return uniform_gram(n, s);
    case Kind::random:
      return random_gram(n, seed_override.value_or(seed));
    case Kind::inline_gram: {
      if (gram.rows() != n)
        throw config_error("detector.gram: dimension does not match slit count");
      DetectorGram det;
      det.gram = gram;
      det.probs.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
      const GramValidation v = validate_gram(det);
      if (!v.ok) {
        std::string msg = "detector.gram:";
        for (const auto& f : v.failures) msg += " " + f + ";";
        throw config_error(msg);
      }
      return det;
    }
  }
  throw config_error("detector: unknown kind");
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig cfg;
  if (!j.is_object()) fail("<root>", "expected a JSON object");

  if (!j.contains("source")) fail("source", "missing");
  {
    const json& s = j.at("source");
    cfg.source.sigma = number_or(s, "sigma", "source", cfg.source.sigma);
    cfg.source.omega = number_or(s, "omega", "source", cfg.source.omega);
    try {
      cfg.source.validate();
    } catch (const std::exception& e) {
      fail("source", e.what());
    }
  }

  if (!j.contains("geometry")) fail("geometry", "missing");
  {
    const json& g = j.at("geometry");
    cfg.geometry.n = int_or(g, "slits", "geometry", cfg.geometry.n);
    cfg.geometry.slit_spacing = number_or(g, "slit_spacing", "geometry", cfg.geometry.slit_spacing);
    cfg.geometry.slit_width = number_or(g, "slit_width", "geometry", cfg.geometry.slit_width);
    cfg.geometry.L1 = number_or(g, "L1", "geometry", cfg.geometry.L1);
    cfg.geometry.L2 = number_or(g, "L2", "geometry", cfg.geometry.L2);
    cfg.geometry.lambda = number_or(g, "lambda", "geometry", cfg.geometry.lambda);
    cfg.geometry.z1_detect = number_or(g, "z1_detect", "geometry", cfg.geometry.z1_detect);
    if (g.contains("centered") && g.at("centered").is_boolean() && g.at("centered").get<bool>()) {
      if (g.contains("slit_offset"))
        fail("geometry", "give either centered or slit_offset, not both");
      cfg.geometry.slit_offset = cfg.geometry.centered_offset();
    } else {
      cfg.geometry.slit_offset = number_or(g, "slit_offset", "geometry", 0.0);
    }
    try {
      cfg.geometry.validate();
    } catch (const std::exception& e) {
      fail("geometry", e.what());
    }
  }

  if (!j.contains("detector")) fail("detector", "missing");
  {
    const json& d = j.at("detector");
    if (d.contains("uniform")) {
      cfg.detector.kind = DetectorSpec::Kind::uniform;
      cfg.detector.s = need_number(d.at("uniform").at("s"), "detector.uniform.s");
      if (cfg.detector.s < 0.0 || cfg.detector.s > 1.0)
        fail("detector.uniform.s", "overlap must be in [0,1]");
    } else if (d.contains("random")) {
      cfg.detector.kind = DetectorSpec::Kind::random;
      cfg.detector.seed = static_cast<std::uint64_t>(
          int_or(d.at("random"), "seed", "detector.random", 1));
    } else if (d.contains("gram")) {
      cfg.detector.kind = DetectorSpec::Kind::inline_gram;
      const json& m = d.at("gram");
      if (!m.is_array() || m.empty()) fail("detector.gram", "expected a non-empty array");
      const int n = static_cast<int>(m.size());
      cfg.detector.gram.resize(n, n);
      for (int r = 0; r < n; ++r) {
        const json& row = m.at(r);
        if (!row.is_array() || static_cast<int>(row.size()) != n)
          fail("detector.gram[" + std::to_string(r) + "]", "expected a row of length n");
        for (int c = 0; c < n; ++c) {
          const json& e = row.at(c);
          if (!e.is_array() || e.size() != 2)
            fail("detector.gram[" + std::to_string(r) + "][" + std::to_string(c) + "]",
                 "expected [re, im]");
          cfg.detector.gram(r, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
        }
      }
    } else {
      fail("detector", "expected one of uniform / gram / random");
    }
  }

  if (j.contains("phases")) {
    const json& p = j.at("phases");
    if (!p.is_array()) fail("phases", "expected an array");
    for (std::size_t i = 0; i < p.size(); ++i)
      cfg.phases.push_back(need_number(p.at(i), "phases[" + std::to_string(i) + "]"));
    if (static_cast<int>(cfg.phases.size()) != cfg.geometry.n)
      fail("phases", "length must equal the slit count");
  }

  if (j.contains("envelopes")) {
    const json& e = j.at("envelopes");
    if (e.contains("mode")) {
      const std::string m = e.at("mode").get<std::string>();
      if (m == "pipeline")
        cfg.envelopes.mode = EnvelopeSpec::Mode::pipeline;
      else if (m == "equal")
        cfg.envelopes.mode = EnvelopeSpec::Mode::equal;
      else
        fail("envelopes.mode", "expected pipeline or equal");
    }
    if (e.contains("values")) {
      cfg.envelopes.mode = EnvelopeSpec::Mode::values;
      for (std::size_t i = 0; i < e.at("values").size(); ++i)
        cfg.envelopes.values.push_back(
            need_number(e.at("values").at(i), "envelopes.values[" + std::to_string(i) + "]"));
      if (static_cast<int>(cfg.envelopes.values.size()) != cfg.geometry.n)
        fail("envelopes.values", "length must equal the slit count");
      for (double v : cfg.envelopes.values)
        if (v < 0.0) fail("envelopes.values", "entries must be nonnegative");
    }
  }

  if (j.contains("z2_grid")) {
    const json& z = j.at("z2_grid");
    cfg.z2_grid.points = int_or(z, "points", "z2_grid", cfg.z2_grid.points);
    if (cfg.z2_grid.points < 3) fail("z2_grid.points", "need at least 3 points");
    if (z.contains("half_width")) {
      cfg.z2_grid.automatic = false;
      cfg.z2_grid.half_width = need_number(z.at("half_width"), "z2_grid.half_width");
      if (!(cfg.z2_grid.half_width > 0.0)) fail("z2_grid.half_width", "must be positive");
    }
  }

  if (j.contains("oracle")) {
    const json& o = j.at("oracle");
    cfg.has_oracle = true;
    cfg.oracle_grid.extent = number_or(o, "extent", "oracle", cfg.oracle_grid.extent);
    cfg.oracle_grid.points = int_or(o, "points", "oracle", cfg.oracle_grid.points);
    cfg.oracle_grid.padding = number_or(o, "padding", "oracle", cfg.oracle_grid.padding);
    if (o.contains("slit_model")) {
      const std::string m = o.at("slit_model").get<std::string>();
      if (m == "projector")
        cfg.oracle_grid.slit_model = oracle::SlitModel::projector;
      else if (m == "mask")
        cfg.oracle_grid.slit_model = oracle::SlitModel::mask;
      else
        fail("oracle.slit_model", "expected projector or mask");
    }
    cfg.oracle_tolerance = number_or(o, "tolerance", "oracle", cfg.oracle_tolerance);
    try {
      cfg.oracle_grid.validate(cfg.geometry);
    } catch (const std::exception& e) {
      fail("oracle", e.what());
    }
  }

  auto parse_axis = [&](const json& a, const std::string& path) {
    SweepAxis ax;
    if (!a.contains("parameter")) fail(path + ".parameter", "missing");
    ax.parameter = a.at("parameter").get<std::string>();
    ax.from = need_number(a.at("from"), path + ".from");
    ax.to = need_number(a.at("to"), path + ".to");
    ax.steps = int_or(a, "steps", path, 2);
    if (ax.steps < 2) fail(path + ".steps", "need at least 2 steps");
    return ax;
  };
  if (j.contains("sweep")) {
    cfg.sweep = parse_axis(j.at("sweep"), "sweep");
    if (j.at("sweep").contains("second"))
      cfg.sweep2 = parse_axis(j.at("sweep").at("second"), "sweep.second");
  }

  if (j.contains("outputs")) {
    cfg.outputs.clear();
    for (const auto& o : j.at("outputs")) {
      const std::string name = o.get<std::string>();
      if (name != "csv" && name != "json" && name != "svg")
        fail("outputs", "unknown output kind '" + name + "'");
      cfg.outputs.push_back(name);
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw config_error(std::string("config parse error: ") + e.what());
  }
  return from_json(j);
}

json RunConfig::to_json() const {
  json j;
  j["schema"] = 1;
  j["source"] = {{"sigma", source.sigma}, {"omega", source.omega}};
  j["geometry"] = {{"slits", geometry.n},
                   {"slit_spacing", geometry.slit_spacing},
                   {"slit_width", geometry.slit_width},
                   {"L1", geometry.L1},
                   {"L2", geometry.L2},
                   {"lambda", geometry.lambda},
                   {"z1_detect", geometry.z1_detect},
                   {"slit_offset", geometry.slit_offset}};
  switch (detector.kind) {
    case DetectorSpec::Kind::uniform:
      j["detector"] = {{"uniform", {{"s", detector.s}}}};
      break;
    case DetectorSpec::Kind::random:
      j["detector"] = {{"random", {{"seed", detector.seed}}}};
      break;
    case DetectorSpec::Kind::inline_gram: {
      json rows = json::array();
      for (int r = 0; r < detector.gram.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < detector.gram.cols(); ++c)
          row.push_back({detector.gram(r, c).real(), detector.gram(r, c).imag()});
        rows.push_back(row);
      }
      j["detector"] = {{"gram", rows}};
      break;
    }
  }
  if (!phases.empty()) j["phases"] = phases;
  switch (envelopes.mode) {
    case EnvelopeSpec::Mode::pipeline:
      j["envelopes"] = {{"mode", "pipeline"}};
      break;
    case EnvelopeSpec::Mode::equal:
      j["envelopes"] = {{"mode", "equal"}};
      break;
    case EnvelopeSpec::Mode::values:
      j["envelopes"] = {{"values", envelopes.values}};
      break;
  }
  json z = {{"points", z2_grid.points}};
  if (!z2_grid.automatic) z["half_width"] = z2_grid.half_width;
  j["z2_grid"] = z;
  if (has_oracle) {
    j["oracle"] = {
        {"extent", oracle_grid.extent},
        {"points", oracle_grid.points},
        {"padding", oracle_grid.padding},
        {"slit_model",
         oracle_grid.slit_model == oracle::SlitModel::projector ? "projector" : "mask"},
        {"tolerance", oracle_tolerance}};
  }
  if (sweep) {
    json s = {{"parameter", sweep->parameter},
              {"from", sweep->from},
              {"to", sweep->to},
              {"steps", sweep->steps}};
    if (sweep2)
      s["second"] = {{"parameter", sweep2->parameter},
                     {"from", sweep2->from},
                     {"to", sweep2->to},
                     {"steps", sweep2->steps}};
    j["sweep"] = s;
  }
  j["outputs"] = outputs;
  return j;
}

std::vector<double> RunConfig::z2_points() const {
  if (z2_grid.automatic) return default_z2_grid(source, geometry, z2_grid.points);
  std::vector<double> z(z2_grid.points);
  for (int i = 0; i < z2_grid.points; ++i)
    z[i] = -z2_grid.half_width +
           2.0 * z2_grid.half_width * i / (z2_grid.points - 1);
  return z;
}

bool RunConfig::wants(const std::string& output) const {
  for (const auto& o : outputs)
    if (o == output) return true;
  return false;
}

void apply_parameter(RunConfig& cfg, const std::string& path, double value) {
  if (path == "detector.s") {
    if (cfg.detector.kind != DetectorSpec::Kind::uniform)
      throw config_error("sweep: detector.s requires a uniform detector spec");
    if (value < 0.0 || value > 1.0) throw config_error("sweep: detector.s out of [0,1]");
    cfg.detector.s = value;
  } else if (path == "source.sigma") {
    cfg.source.sigma = value;
  } else if (path == "source.omega") {
    cfg.source.omega = value;
  } else if (path == "geometry.L1") {
    cfg.geometry.L1 = value;
  } else if (path == "geometry.L2") {
    cfg.geometry.L2 = value;
  } else if (path == "geometry.lambda") {
    cfg.geometry.lambda = value;
  } else if (path == "geometry.slit_width") {
    cfg.geometry.slit_width = value;
  } else if (path == "geometry.slit_spacing") {
    cfg.geometry.slit_spacing = value;
  } else {
    throw config_error("sweep: unknown parameter '" + path + "'");
  }
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const RunConfig& cfg) {
  std::ostringstream out;
  out << std::hex << fnv1a64(cfg.to_json().dump());
  return out.str();
}

}  // namespace ghost
