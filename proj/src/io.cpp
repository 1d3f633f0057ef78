#include "ach/io.hpp"

#include "ach/hash.hpp"

#include <json.hpp>

#include <fstream>
#include <random>
#include <sstream>

namespace ach::io {

using nlohmann::json;

namespace {

json scalar_to_json(const Scalar& s) {
  json j = json::array();
  if (s.is_exact()) {
    j.push_back(rational_to_string(s.rat().re));
    j.push_back(rational_to_string(s.rat().im));
  } else {
    j.push_back(s.to_complex().real());
    j.push_back(s.to_complex().imag());
  }
  return j;
}

Scalar scalar_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw PreconditionError("scalar must be a [re, im] pair");
  if (j[0].is_string())
    return Scalar::exact(parse_rational(j[0].get<std::string>()),
                         j[1].is_string() ? parse_rational(j[1].get<std::string>()) : mpq_class(0));
  return Scalar::flt({j[0].get<double>(), j[1].get<double>()});
}

json field_to_json(const FieldValue& f, Mode mode) {
  json j;
  if (f.is_grid()) {
    const GridDims& d = f.dims();
    json data = json::array();
    for (const auto& z : f.grid_ptr()->v) {
      data.push_back(z.real());
      data.push_back(z.imag());
    }
    j["grid"] = {{"n", {d.n[0], d.n[1], d.n[2]}}, {"period", {d.period[0], d.period[1], d.period[2]}},
                 {"data", std::move(data)}};
    return j;
  }
  Scalar s = f.is_zero() ? (mode == Mode::Exact ? Scalar::exact(mpq_class(0)) : Scalar::flt({0.0, 0.0}))
                         : f.scalar();
  if (mode == Mode::Float && s.is_exact()) s = Scalar::flt(s.to_complex());
  j["const"] = scalar_to_json(s);
  return j;
}

FieldValue field_from_json(const json& j) {
  if (j.contains("const")) return FieldValue::constant(scalar_from_json(j["const"]));
  if (j.contains("grid")) {
    const json& g = j["grid"];
    GridDims d;
    for (int i = 0; i < 3; ++i) {
      d.n[i] = g.at("n")[i].get<int>();
      d.period[i] = g.at("period")[i].get<double>();
    }
    auto data = std::make_shared<GridData>(d);
    const json& arr = g.at("data");
    if (arr.size() != 2 * d.size()) throw PreconditionError("grid data length mismatch");
    for (std::size_t i = 0; i < d.size(); ++i)
      data->v[i] = {arr[2 * i].get<double>(), arr[2 * i + 1].get<double>()};
    return FieldValue::grid(data);
  }
  throw PreconditionError("field value must contain 'const' or 'grid'");
}

json series_to_json(const JetSeries& s, Mode mode) {
  json j = json::array();
  for (int k = 0; k <= s.order(); ++k) j.push_back(field_to_json(s.at(k), mode));
  return j;
}

JetSeries series_from_json(const json& j) {
  JetSeries s(int(j.size()) - 1);
  for (int k = 0; k < int(j.size()); ++k) s.set(k, field_from_json(j[k]));
  return s;
}

FieldValue chart_component_from_json(const json& j, const GridDims& dims) {
  if (j.contains("samples")) {
    const json& arr = j["samples"];
    auto g = std::make_shared<GridData>(dims);
    if (arr.size() == dims.size()) {
      for (std::size_t i = 0; i < dims.size(); ++i) g->v[i] = {arr[i].get<double>(), 0.0};
    } else if (arr.size() == 2 * dims.size()) {
      for (std::size_t i = 0; i < dims.size(); ++i)
        g->v[i] = {arr[2 * i].get<double>(), arr[2 * i + 1].get<double>()};
    } else {
      throw PreconditionError("chart samples length mismatch");
    }
    return FieldValue::grid(g);
  }
  return field_from_json(j);
}

Background background_from_json_value(const json& j, Mode mode, double tol) {
  std::string kind = j.at("kind").get<std::string>();
  Background bg;
  if (kind == "builtin") {
    bg = parse_background(j.at("name").get<std::string>(), mode, tol);
  } else if (kind == "constant") {
    Scalar s = scalar_from_json(j.at("scal").is_array() ? j["scal"] : json::array({j["scal"], j["scal"].is_string() ? json("0") : json(0.0)}));
    Scalar a = j.contains("a11") ? scalar_from_json(j["a11"]) : Scalar::exact(mpq_class(0));
    if (j.contains("jets"))
      for (const auto& [key, val] : j["jets"].items()) {
        Scalar entry = scalar_from_json(val.is_array() ? val : json::array({val, val.is_string() ? json("0") : json(0.0)}));
        if (!entry.is_zero())
          throw PreconditionError("nonzero derivative jets are not supported on constant backgrounds (entry '" +
                                  key + "')");
      }
    if (mode == Mode::Float) {
      s = Scalar::flt(s.to_complex());
      a = Scalar::flt(a.to_complex());
    }
    bg = Background::constant_background(s, a, mode);
  } else if (kind == "flat-grid") {
    std::array<int, 3> n;
    for (int i = 0; i < 3; ++i) n[i] = j.at("resolution")[i].get<int>();
    bg = Background::flat_grid(n);
  } else if (kind == "chart") {
    ChartSpec spec;
    for (int i = 0; i < 3; ++i) {
      spec.dims.n[i] = j.at("resolution")[i].get<int>();
      spec.dims.period[i] = j.at("periods")[i].get<double>();
    }
    if (!j.contains("theta")) throw PreconditionError("chart spec without data is not reconstructible");
    for (int i = 0; i < 3; ++i) {
      spec.theta[i] = chart_component_from_json(j.at("theta")[i], spec.dims);
      spec.z[i] = chart_component_from_json(j.at("z")[i], spec.dims);
    }
    if (mode == Mode::Exact) throw PreconditionError("exact mode requires a constant background");
    bg = Background::from_chart(spec, tol);
  } else {
    throw PreconditionError("unknown background kind: " + kind);
  }
  bg.spec_json = j.dump();
  return bg;
}

json jets_meta(const SolveResult& res) {
  json prov;
  prov["tool_version"] = kToolVersion;
  json cfg;
  cfg["order"] = res.order;
  cfg["lambda"] = scalar_to_json(res.lambda);
  cfg["mode"] = res.mode == Mode::Exact ? "exact" : "float";
  cfg["background"] = json::parse(res.background_spec.empty() ? "{}" : res.background_spec);
  prov["config_hash"] = config_hash(cfg.dump());
  return prov;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write file: " + path);
  out << text;
}

Background parse_background(const std::string& name, Mode mode, double tol) {
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    return parts;
  };
  auto with_builtin_spec = [&](Background bg) {
    json j;
    j["kind"] = "builtin";
    j["name"] = name;
    bg.spec_json = j.dump();
    return bg;
  };
  if (name == "heisenberg") return with_builtin_spec(Background::heisenberg(mode));
  auto parts = split(name);
  if (parts.size() >= 2 && parts[0] == "constant-scal") {
    Scalar s = Scalar::exact(parse_rational(parts[1]));
    if (mode == Mode::Float) s = Scalar::flt(s.to_complex());
    return with_builtin_spec(Background::constant_background(s, mode == Mode::Float ? Scalar::flt({0, 0}) : Scalar::exact(mpq_class(0)), mode));
  }
  if (parts.size() == 4 && parts[0] == "constant") {
    Scalar s = Scalar::exact(parse_rational(parts[1]));
    Scalar a = Scalar::exact(parse_rational(parts[2]), parse_rational(parts[3]));
    if (mode == Mode::Float) {
      s = Scalar::flt(s.to_complex());
      a = Scalar::flt(a.to_complex());
    }
    return with_builtin_spec(Background::constant_background(s, a, mode));
  }
  if (parts.size() >= 2 && parts[0] == "flat-grid") {
    int n = std::stoi(parts[1]);
    if (mode == Mode::Exact) throw PreconditionError("exact mode requires a constant background");
    return with_builtin_spec(Background::flat_grid({n, n, n}));
  }
  if (parts.size() >= 3 && parts[0] == "torus") {
    int n = std::stoi(parts[1]);
    double eps = std::stod(parts[2]);
    if (mode == Mode::Exact) throw PreconditionError("exact mode requires a constant background");
    return with_builtin_spec(Background::from_chart(torus_chart({n, n, n}, eps), tol));
  }
  return background_from_json_text(read_file(name), mode, tol);
}

Background background_from_json_text(const std::string& text, Mode mode, double tol) {
  return background_from_json_value(json::parse(text), mode, tol);
}

std::string solve_result_to_json(const SolveResult& res) {
  json j;
  j["provenance"] = jets_meta(res);
  j["mode"] = res.mode == Mode::Exact ? "exact" : "float";
  j["order"] = res.order;
  j["lambda"] = scalar_to_json(res.lambda);
  j["background"] = json::parse(res.background_spec.empty() ? "{}" : res.background_spec);
  JetSeries one = JetSeries::one(res.order);
  json coeffs;
  coeffs["g00"] = series_to_json(one + res.phi.phi00, res.mode);
  coeffs["g01"] = series_to_json(res.phi.phi01, res.mode);
  coeffs["g11"] = series_to_json(res.phi.phi11, res.mode);
  coeffs["g11bar"] = series_to_json(one + res.phi.phi11b, res.mode);
  j["coefficients"] = std::move(coeffs);
  j["eta"] = field_to_json(res.eta, res.mode);
  j["eta_defect"] = res.eta_defect;
  j["einstein_max"] = res.einstein_max;
  j["weyl_below6_max"] = res.weyl_below6_max;
  j["weyl_total_max"] = res.weyl_total_max;
  j["step_residual_max"] = res.step_residual_max;
  json rr = json::array();
  for (const auto& r : res.residuals) rr.push_back({{"order", r.order}, {"component", r.component}, {"max_norm", r.value}});
  j["residuals"] = std::move(rr);
  return j.dump(1);
}

SolveResult solve_result_from_json(const std::string& text, Background* bg_out) {
  json j = json::parse(text);
  SolveResult res;
  res.mode = j.at("mode").get<std::string>() == "exact" ? Mode::Exact : Mode::Float;
  res.order = j.at("order").get<int>();
  res.lambda = scalar_from_json(j.at("lambda"));
  res.background_spec = j.at("background").dump();
  JetSeries one = JetSeries::one(res.order);
  res.phi.order = res.order;
  res.phi.phi00 = series_from_json(j.at("coefficients").at("g00")) - one;
  res.phi.phi01 = series_from_json(j.at("coefficients").at("g01"));
  res.phi.phi11 = series_from_json(j.at("coefficients").at("g11"));
  res.phi.phi11b = series_from_json(j.at("coefficients").at("g11bar")) - one;
  res.eta = field_from_json(j.at("eta"));
  res.eta_defect = j.value("eta_defect", 0.0);
  res.einstein_max = j.value("einstein_max", 0.0);
  res.weyl_below6_max = j.value("weyl_below6_max", 0.0);
  res.weyl_total_max = j.value("weyl_total_max", 0.0);
  res.step_residual_max = j.value("step_residual_max", 0.0);
  if (j.contains("residuals"))
    for (const auto& r : j["residuals"])
      res.residuals.push_back({r.at("order").get<int>(), r.at("component").get<std::string>(),
                               r.at("max_norm").get<double>()});
  if (bg_out) *bg_out = background_from_json_value(j.at("background"), res.mode, 1e-10);
  return res;
}

std::string residuals_to_csv(const SolveResult& res) {
  std::ostringstream os;
  os << "order,component,max_norm\n";
  for (const auto& r : res.residuals) os << r.order << "," << r.component << "," << r.value << "\n";
  return os.str();
}

std::string tensor_to_json(const ThetaTensor& t) {
  json j;
  j["rank"] = t.rank();
  j["upmask"] = t.upmask();
  j["truncation"] = t.order();
  static const char* letters[4] = {"inf", "0", "1", "1b"};
  json comps;
  t.for_each_canonical([&](const Word& w) {
    if (t.known_zero(w)) return;
    std::string key;
    for (int i = 0; i < w.rank; ++i) {
      if (i) key += ",";
      key += letters[w.a[i]];
    }
    json arr = json::array();
    JetSeries s = t.component(w);
    for (int k = 0; k <= s.order(); ++k) {
      cplx z = s.at(k).is_grid() ? cplx{s.at(k).max_abs(), 0.0} : s.at(k).to_complex();
      arr.push_back({z.real(), z.imag()});
    }
    comps[key] = std::move(arr);
  });
  j["components"] = std::move(comps);
  return j.dump(1);
}

std::string gjms_output_to_json(int k, const Scalar& lambda, const GjmsOutput& out, double defect) {
  json j;
  j["provenance"] = {{"tool_version", kToolVersion}};
  j["k"] = k;
  j["lambda"] = scalar_to_json(lambda);
  Mode mode = out.pf.is_exact() ? Mode::Exact : Mode::Float;
  j["Pf"] = field_to_json(out.pf, mode);
  json rec = json::array();
  for (const auto& f : out.recursion) rec.push_back(field_to_json(f, mode));
  j["recursion"] = std::move(rec);
  json fac = json::array();
  for (const auto& q : out.indicial_factors) fac.push_back(rational_to_string(q));
  j["indicial_factors"] = std::move(fac);
  j["selfadjoint_defect"] = defect;
  return j.dump(1);
}

std::string indicial_report_to_json(const DetCheckReport& rep, const GrowthProbe* probe) {
  json j;
  j["provenance"] = {{"tool_version", kToolVersion}};
  json pencil;
  pencil["kmax"] = rep.kmax;
  pencil["all_equal"] = rep.all_equal;
  pencil["all_nonzero"] = rep.all_nonzero;
  pencil["dets"] = rep.dets;
  if (rep.first_mismatch >= 0) pencil["first_mismatch"] = rep.first_mismatch;
  j["pencil"] = std::move(pencil);
  if (probe) {
    json p;
    p["ratio"] = probe->ratio;
    p["residual"] = probe->log_residual;
    p["terminating"] = probe->terminating;
    p["norms"] = probe->norms;
    j["probe"] = std::move(p);
  }
  return j.dump(1);
}

std::string config_hash(const std::string& config_json) {
  // Canonicalise through the JSON object model (sorted keys) first.
  std::string canon = json::parse(config_json).dump();
  return hex64(fnv1a64(canon.data(), canon.size()));
}

FieldValue parse_test_function(const std::string& spec, const Background& bg) {
  auto parts = [&] {
    std::vector<std::string> p;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) p.push_back(item);
    return p;
  }();
  if (parts.empty()) throw PreconditionError("empty test-function spec");
  if (parts[0] == "const") {
    double re = 1.0, im = 0.0;
    if (parts.size() > 1) {
      std::stringstream ss(parts[1]);
      char comma;
      ss >> re >> comma >> im;
    }
    return bg.mode == Mode::Exact && re == std::floor(re) && im == std::floor(im)
               ? FieldValue::constant(Scalar::exact(ratq(long(re)), ratq(long(im))))
               : FieldValue::flt({re, im});
  }
  if (!bg.is_grid()) throw PreconditionError("grid test function on a constant background");
  const GridDims& dims = bg.geom->dims;
  auto g = std::make_shared<GridData>(dims);
  if (parts[0] == "fourier") {
    if (parts.size() < 2) throw PreconditionError("fourier spec needs kx,ky,kt");
    int kx = 0, ky = 0, kt = 0;
    std::stringstream ss(parts[1]);
    char c;
    ss >> kx >> c >> ky >> c >> kt;
    std::size_t idx = 0;
    for (int i = 0; i < dims.n[0]; ++i)
      for (int jy = 0; jy < dims.n[1]; ++jy)
        for (int kk = 0; kk < dims.n[2]; ++kk, ++idx) {
          double ph = 2.0 * M_PI *
                      (double(kx * i) / dims.n[0] + double(ky * jy) / dims.n[1] + double(kt * kk) / dims.n[2]);
          g->v[idx] = std::polar(1.0, ph);
        }
    return FieldValue::grid(g);
  }
  if (parts[0] == "random") {
    unsigned seed = parts.size() > 1 ? unsigned(std::stoul(parts[1])) : 1u;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    // Low-frequency random real field: modes with |k| <= 2 per axis.
    std::vector<std::array<double, 5>> modes;  // kx, ky, kt, re, im
    for (int kx = -2; kx <= 2; ++kx)
      for (int ky = -2; ky <= 2; ++ky)
        for (int kt = -2; kt <= 2; ++kt) modes.push_back({double(kx), double(ky), double(kt), amp(rng), amp(rng)});
    std::size_t idx = 0;
    for (int i = 0; i < dims.n[0]; ++i)
      for (int jy = 0; jy < dims.n[1]; ++jy)
        for (int kk = 0; kk < dims.n[2]; ++kk, ++idx) {
          double x = 2.0 * M_PI * i / dims.n[0], y = 2.0 * M_PI * jy / dims.n[1], t = 2.0 * M_PI * kk / dims.n[2];
          double v = 0.0;
          for (const auto& m : modes) v += m[3] * std::cos(m[0] * x + m[1] * y + m[2] * t) +
                                           m[4] * std::sin(m[0] * x + m[1] * y + m[2] * t);
          g->v[idx] = {v / double(modes.size()), 0.0};
        }
    return FieldValue::grid(g);
  }
  throw PreconditionError("unknown test-function spec: " + spec);
}

}  // namespace ach::io
