// noether: derivation engine, model checks, lattice simulator and acceptance suite.
//
// Exit codes: 0 success, 1 tolerance failure, 2 usage or configuration error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "noether/acceptance.hpp"
#include "noether/dsl.hpp"
#include "noether/nonlocal_model.hpp"
#include "noether/parallel.hpp"
#include "noether/spectral_sim.hpp"
#include "noether/variational.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace noether;

namespace {

constexpr const char* kVersion = "1.0.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config;
  std::string out = "out";
  std::uint64_t seed = 20241018;
  double tol_scale = 1.0;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

json load_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

// Typed access with the dotted key path in every error message.
class Section {
public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("'" + path_ + "' must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  T get(const std::string& key) const {
    if (!j_.contains(key)) throw ConfigError("missing key '" + where(key) + "'");
    return convert<T>(key);
  }

  template <class T>
  T get_or(const std::string& key, T fallback) const {
    return j_.contains(key) ? convert<T>(key) : fallback;
  }

  Section sub(const std::string& key) const {
    if (!j_.contains(key)) throw ConfigError("missing key '" + where(key) + "'");
    return Section(j_.at(key), where(key));
  }

  std::optional<Section> sub_opt(const std::string& key) const {
    if (!j_.contains(key)) return std::nullopt;
    return Section(j_.at(key), where(key));
  }

  void allow_only(std::initializer_list<const char*> keys) const {
    for (const auto& [k, v] : j_.items()) {
      bool known = false;
      for (const char* a : keys) known = known || k == a;
      if (!known) throw ConfigError("unknown key '" + where(k) + "'");
    }
  }

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
  template <class T>
  T convert(const std::string& key) const {
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError("key '" + where(key) + "' has the wrong type");
    }
  }

  const json& j_;
  std::string path_;
};

void write_manifest(const Common& c, const std::string& command, const json& resolved, const json& outputs,
                    const json& tolerances = json::object()) {
  json m;
  m["command"] = command;
  m["config_path"] = c.config;
  m["resolved_config"] = resolved;
  m["seed"] = c.seed;
  m["tol_scale"] = c.tol_scale;
  m["tolerances"] = tolerances;
  m["threads"] = thread_budget();
  m["outputs"] = outputs;
  m["versions"] = {{"noether", kVersion}, {"gmp", gmp_version}, {"compiler", __VERSION__}};
  write_file(fs::path(c.out) / "manifest.json", m.dump(2) + "\n");
}

void ensure_out(const Common& c) {
  std::error_code ec;
  fs::create_directories(c.out, ec);
  if (ec) throw ConfigError("cannot create output directory '" + c.out + "': " + ec.message());
}

// ---------------------------------------------------------------------------
// derive

struct Derived {
  std::string name;
  std::string symmetry;
  Expr current;
  Expr defect;
  bool invariant = true;
};

int cmd_derive(const Common& c, const std::string& symmetry, bool with_defect) {
  const std::string text = read_file(c.config);
  LagrangianSource src;
  try {
    src = parse_lagrangian_source(text);
  } catch (const ParseError& e) {
    std::cerr << c.config << ": " << describe_position(text, e.position()) << ": " << e.detail() << "\n";
    return 2;
  }
  LagrangianSpec L = LagrangianSpec::from_source(src);
  const int D = L.dim();

  std::vector<std::pair<std::string, SymmetryVariation>> chosen;
  auto want = [&](const char* s) { return symmetry == "all" || symmetry == s; };
  if (want("internal") && !src.complex_base.empty()) {
    if (src.generators.empty()) chosen.emplace_back("U(1)", SymmetryVariation::u1(src.complex_base));
    for (const auto& [g, t] : src.generators) chosen.emplace_back(g, SymmetryVariation::internal(src.complex_base, t));
  }
  if (want("translation")) chosen.emplace_back("translation", SymmetryVariation::translation());
  if (want("rotation") && D >= 3) chosen.emplace_back("rotation", SymmetryVariation::rotation());
  if (chosen.empty()) throw ConfigError("no symmetry of kind '" + symmetry + "' applies to this Lagrangian");

  ensure_out(c);
  std::vector<Derived> out;
  for (const auto& [name, v] : chosen) {
    Derived d;
    d.symmetry = name;
    d.name = v.kind == SymmetryVariation::Kind::internal      ? "J"
             : v.kind == SymmetryVariation::Kind::translation ? "T"
                                                               : "M";
    d.current = noether_current(L, v);
    d.invariant = invariance_residual(L, v).is_zero();
    if (!d.invariant) std::cerr << "warning: the Lagrangian is not invariant under " << name << "\n";
    if (with_defect) d.defect = divergence_defect(L, v);
    out.push_back(std::move(d));
  }

  json j;
  j["dim"] = D;
  j["fields"] = L.fields;
  j["lagrangian"] = {{"expr", to_json(L.expr)}, {"text", render(L.expr)}};
  j["currents"] = json::array();
  std::ostringstream txt;
  txt << "L = " << render(L.expr) << "\n";
  bool defect_ok = true;
  for (const auto& d : out) {
    json e{{"name", d.name},
           {"symmetry", d.symmetry},
           {"free_labels", d.current.free_labels()},
           {"invariant", d.invariant},
           {"expr", to_json(d.current)},
           {"text", render(d.current)}};
    txt << "\n" << d.name << " [" << d.symmetry << "]";
    if (!d.invariant) txt << " (Lagrangian not invariant)";
    txt << "\n" << render(d.current) << "\n";
    if (with_defect) {
      e["defect"] = to_json(d.defect);
      e["defect_text"] = render(d.defect);
      txt << "defect: " << render(d.defect) << "\n";
      defect_ok = defect_ok && d.defect.is_zero();
    }
    j["currents"].push_back(std::move(e));
  }
  write_file(fs::path(c.out) / "currents.json", j.dump(2) + "\n");
  write_file(fs::path(c.out) / "currents.txt", txt.str());
  write_manifest(c, "derive", {{"lagrangian", c.config}, {"symmetry", symmetry}, {"defect", with_defect}},
                 {"currents.json", "currents.txt"});
  std::cout << txt.str();
  if (!defect_ok) {
    std::cerr << "divergence defect is not zero\n";
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// model

int cmd_model(const Common& c) {
  json raw = c.config.empty() ? json::object() : load_json(c.config);
  Section root(raw, "");
  root.allow_only({"mass", "coefficients", "generating", "ward", "kernel"});
  const double m = root.get_or<double>("mass", 1.0);
  if (!(m > 0)) throw ConfigError("'mass' must be positive");
  json coeff_j = raw.value("coefficients", json::object());
  json gen_j = raw.value("generating", json::object());
  json ward_j = raw.value("ward", json::object());
  json ker_j = raw.value("kernel", json::object());
  Section coeff(coeff_j, "coefficients"), gen(gen_j, "generating"), ward(ward_j, "ward"), ker(ker_j, "kernel");
  coeff.allow_only({"max_order"});
  gen.allow_only({"x", "orders"});
  ward.allow_only({"samples", "max_dim"});
  ker.allow_only({"grid", "orders", "extent"});
  const int max_l = coeff.get_or<int>("max_order", 20);
  const double x = gen.get_or<double>("x", 0.5 * m * m);
  const auto gen_orders = gen.get_or<std::vector<int>>("orders", {1, 2, 5, 10, 20, 40, 60, 80});
  const int samples = ward.get_or<int>("samples", 1000);
  const int max_dim = ward.get_or<int>("max_dim", 3);
  const int grid = ker.get_or<int>("grid", 10);
  const double extent = ker.get_or<double>("extent", 0.9);
  const auto ker_orders = ker.get_or<std::vector<int>>("orders", {10, 20, 40, 80});
  if (max_l < 0) throw ConfigError("'coefficients.max_order' must be >= 0");
  if (samples < 1) throw ConfigError("'ward.samples' must be >= 1");
  if (max_dim < 1 || max_dim > 3) throw ConfigError("'ward.max_dim' must be in 1..3");
  if (grid < 1) throw ConfigError("'kernel.grid' must be >= 1");
  if (!(extent > 0 && extent < 1)) throw ConfigError("'kernel.extent' must be in (0, 1)");
  ensure_out(c);

  std::ostringstream cs;
  cs << "l,numerator,denominator,mass_power,value\n";
  for (const auto& [l, f] : [&] {
         std::vector<std::pair<int, SeriesCoefficient>> v;
         auto t = series_table(max_l);
         for (int l = 0; l <= max_l; ++l) v.emplace_back(l, t[l]);
         return v;
       }()) {
    cs << l << "," << f.value.get_num().get_str() << "," << f.value.get_den().get_str() << "," << f.mass_power << ","
       << fmt(f.evaluate(m)) << "\n";
  }
  write_file(fs::path(c.out) / "coefficients.csv", cs.str());

  std::ostringstream gs;
  gs << "L,x,truncated,exact,error\n";
  for (int L : gen_orders) {
    gs << L << "," << fmt(x) << "," << fmt(truncated_sqrt(m, x, L)) << "," << fmt(std::sqrt(m * m - x)) << ","
       << fmt(truncation_error(m, x, L)) << "\n";
  }
  write_file(fs::path(c.out) / "generating.csv", gs.str());

  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> mom(-3.0, 3.0), energy(-5.0, 5.0);
  std::ostringstream ws;
  ws << "sample,d,p0_out,p0_in,defect\n";
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    int d = 1 + s % max_dim;
    std::vector<double> a(d), b(d);
    for (int k = 0; k < d; ++k) {
      a[k] = mom(rng);
      b[k] = mom(rng);
    }
    auto po = FourMomentum::make_off_shell(energy(rng), a);
    auto pi = FourMomentum::make_off_shell(energy(rng), b);
    double w = ward_defect(m, po, pi);
    worst = std::max(worst, std::fabs(w));
    ws << s << "," << d << "," << fmt(po.p0) << "," << fmt(pi.p0) << "," << fmt(w) << "\n";
  }
  write_file(fs::path(c.out) / "ward.csv", ws.str());

  std::ostringstream ks;
  ks << "L,u,v,truncated,closed,error\n";
  for (int L : ker_orders) {
    for (int i = 0; i < grid; ++i) {
      for (int j = 0; j < grid; ++j) {
        double u = -extent + 2 * extent * (i + 0.5) / grid;
        double v = -extent + 2 * extent * (j + 0.5) / grid;
        double tr = two_sided_kernel(m, u * m * m, v * m * m, L);
        double cl = two_sided_kernel_closed(m, u * m * m, v * m * m);
        ks << L << "," << fmt(u) << "," << fmt(v) << "," << fmt(tr) << "," << fmt(cl) << "," << fmt(std::fabs(tr - cl))
           << "\n";
      }
    }
  }
  write_file(fs::path(c.out) / "kernel.csv", ks.str());

  const double ward_tol = 1e-13 * c.tol_scale;
  json resolved{{"mass", m},
                {"coefficients", {{"max_order", max_l}}},
                {"generating", {{"x", x}, {"orders", gen_orders}}},
                {"ward", {{"samples", samples}, {"max_dim", max_dim}}},
                {"kernel", {{"grid", grid}, {"extent", extent}, {"orders", ker_orders}}}};
  write_manifest(c, "model", resolved, {"coefficients.csv", "generating.csv", "ward.csv", "kernel.csv"},
                 {{"ward", ward_tol}});
  std::cout << "max |Ward defect| " << fmt(worst) << " over " << samples << " samples\n";
  if (worst >= ward_tol) {
    std::cerr << "ward: defect " << fmt(worst) << " exceeds " << fmt(ward_tol) << "\n";
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// simulate / verify --config

struct SimConfig {
  LatticeConfig lattice;
  PacketSpec packet;
  int record_every = 10;
  bool continuity = true;
  std::string charges = "charges.csv";
  bool snapshots = false;
  double tol_q = 1e-13, tol_e = 1e-12, tol_p = 1e-12, tol_continuity = 1e-10;

  json resolved() const {
    return {{"lattice",
             {{"d", lattice.d}, {"N", lattice.N}, {"box", lattice.box}, {"m", lattice.m}, {"dt", lattice.dt},
              {"steps", lattice.steps}}},
            {"packet",
             {{"center", packet.center}, {"width", packet.width}, {"carrier", packet.carrier},
              {"amplitude", packet.amplitude}}},
            {"run", {{"record_every", record_every}, {"continuity", continuity}}},
            {"outputs", {{"charges", charges}, {"snapshots", snapshots}}},
            {"tolerances", {{"Q", tol_q}, {"E_tot", tol_e}, {"P", tol_p}, {"continuity", tol_continuity}}}};
  }
};

SimConfig load_sim_config(const std::string& path) {
  json raw = load_json(path);
  Section root(raw, "");
  root.allow_only({"lattice", "packet", "run", "outputs", "tolerances"});
  SimConfig s;
  Section lat = root.sub("lattice");
  lat.allow_only({"d", "N", "box", "m", "dt", "steps"});
  s.lattice.d = lat.get<int>("d");
  s.lattice.N = lat.get<int>("N");
  s.lattice.box = lat.get<double>("box");
  s.lattice.m = lat.get<double>("m");
  s.lattice.dt = lat.get<double>("dt");
  s.lattice.steps = lat.get<int>("steps");
  try {
    s.lattice.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("lattice: ") + e.what());
  }
  Section pk = root.sub("packet");
  pk.allow_only({"center", "width", "carrier", "amplitude"});
  s.packet.center = pk.get<std::vector<double>>("center");
  s.packet.width = pk.get<double>("width");
  s.packet.carrier = pk.get<std::vector<double>>("carrier");
  s.packet.amplitude = pk.get_or<double>("amplitude", 1.0);
  auto dim = static_cast<std::size_t>(s.lattice.d);
  if (s.packet.center.size() != dim) throw ConfigError("'packet.center' needs " + std::to_string(dim) + " entries");
  if (s.packet.carrier.size() != dim) throw ConfigError("'packet.carrier' needs " + std::to_string(dim) + " entries");
  s.continuity = s.lattice.total_modes() <= 4096;
  if (auto run = root.sub_opt("run")) {
    run->allow_only({"record_every", "continuity"});
    s.record_every = run->get_or<int>("record_every", s.record_every);
    s.continuity = run->get_or<bool>("continuity", s.continuity);
    if (s.record_every < 1) throw ConfigError("'run.record_every' must be >= 1");
  }
  if (s.continuity && s.lattice.total_modes() > kBilinearModeLimit) {
    throw ConfigError("'run.continuity' needs at most " + std::to_string(kBilinearModeLimit) + " modes");
  }
  if (auto out = root.sub_opt("outputs")) {
    out->allow_only({"charges", "snapshots"});
    s.charges = out->get_or<std::string>("charges", s.charges);
    s.snapshots = out->get_or<bool>("snapshots", s.snapshots);
  }
  if (auto tol = root.sub_opt("tolerances")) {
    tol->allow_only({"Q", "E_tot", "P", "continuity"});
    s.tol_q = tol->get_or<double>("Q", s.tol_q);
    s.tol_e = tol->get_or<double>("E_tot", s.tol_e);
    s.tol_p = tol->get_or<double>("P", s.tol_p);
    s.tol_continuity = tol->get_or<double>("continuity", s.tol_continuity);
  }
  return s;
}

// Little-endian complex128 array in the NumPy .npy v1.0 layout.
void write_npy(const fs::path& path, const std::vector<cplx>& data, const LatticeConfig& cfg) {
  std::string shape = "(";
  for (int a = 0; a < cfg.d; ++a) shape += std::to_string(cfg.N) + (cfg.d == 1 ? ",)" : (a + 1 < cfg.d ? ", " : ")"));
  std::string header = "{'descr': '<c16', 'fortran_order': False, 'shape': " + shape + ", }";
  std::size_t total = 10 + header.size() + 1;
  header.append((64 - total % 64) % 64, ' ');
  header += '\n';
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out.write("\x93NUMPY\x01\x00", 8);
  const auto len = static_cast<std::uint16_t>(header.size());
  const char lb[2] = {static_cast<char>(len & 0xff), static_cast<char>(len >> 8)};
  out.write(lb, 2);
  out << header;
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(cplx)));
}

struct SimSummary {
  std::vector<ChargeRecord> records;
  std::vector<std::string> files;
};

SimSummary run_simulation(const SimConfig& s, const fs::path* out_dir) {
  SpectralState st;
  try {
    st = init_packet(s.lattice, s.packet);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("packet: ") + e.what());
  }
  SimSummary sum;
  auto record = [&](int step) {
    ChargeRecord r = total_charges(st);
    if (s.continuity) {
      double c = continuity_defect(st);
      for (double v : emt_continuity_defects(st)) c = std::max(c, v);
      r.continuity_defect = c;
    }
    sum.records.push_back(r);
    if (out_dir != nullptr && s.snapshots) {
      char name[64];
      std::snprintf(name, sizeof name, "field_%06d.npy", step);
      write_npy(*out_dir / name, position_field(st), s.lattice);
      sum.files.emplace_back(name);
    }
  };
  record(0);
  for (int step = 0; step < s.lattice.steps;) {
    int n = std::min(s.record_every, s.lattice.steps - step);
    evolve(st, n);
    step += n;
    record(step);
  }
  return sum;
}

std::string charges_csv(const SimConfig& s, const std::vector<ChargeRecord>& records) {
  std::ostringstream os;
  const int d = s.lattice.d;
  os << "t,Q,E_tot";
  for (int a = 1; a <= d; ++a) os << ",P" << a;
  const char* pairs[] = {"M12", "M13", "M23"};
  std::size_t n_m = records.empty() ? 0 : records.front().M.size();
  for (std::size_t k = 0; k < n_m; ++k) os << "," << pairs[k];
  os << ",continuity_defect,leakage\n";
  for (const auto& r : records) {
    os << fmt(r.t) << "," << fmt(r.Q) << "," << fmt(r.E_tot);
    for (double p : r.P) os << "," << fmt(p);
    for (double m : r.M) os << "," << fmt(m);
    os << "," << (r.continuity_defect ? fmt(*r.continuity_defect) : std::string()) << "," << fmt(r.leakage) << "\n";
  }
  return os.str();
}

int cmd_simulate(const Common& c) {
  if (c.config.empty()) throw ConfigError("simulate needs --config");
  SimConfig s = load_sim_config(c.config);
  ensure_out(c);
  fs::path out(c.out);
  SimSummary sum = run_simulation(s, &out);
  write_file(out / s.charges, charges_csv(s, sum.records));
  sum.files.insert(sum.files.begin(), s.charges);
  write_manifest(c, "simulate", s.resolved(), sum.files);
  std::cout << "wrote " << sum.records.size() << " records to " << (out / s.charges).string() << "\n";
  return 0;
}

int verify_config(const Common& c) {
  SimConfig s = load_sim_config(c.config);
  SimSummary sum = run_simulation(s, nullptr);
  const ChargeRecord& r0 = sum.records.front();
  auto rel = [](double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); };
  double dq = 0, de = 0, dp = 0, cont = 0;
  for (const auto& r : sum.records) {
    dq = std::max(dq, rel(r.Q, r0.Q));
    de = std::max(de, rel(r.E_tot, r0.E_tot));
    for (std::size_t a = 0; a < r.P.size(); ++a) {
      double scale = std::max(std::fabs(r0.P[a]), 1e-300);
      if (std::fabs(r0.P[a]) < 1e-12 * r0.E_tot) scale = r0.E_tot;
      dp = std::max(dp, std::fabs(r.P[a] - r0.P[a]) / scale);
    }
    if (r.continuity_defect) cont = std::max(cont, *r.continuity_defect);
  }
  struct Check {
    const char* name;
    double value, tol;
  };
  const Check checks[] = {{"Q drift", dq, s.tol_q * c.tol_scale},
                          {"E_tot drift", de, s.tol_e * c.tol_scale},
                          {"P drift", dp, s.tol_p * c.tol_scale},
                          {"continuity defect", cont, s.tol_continuity * c.tol_scale}};
  bool ok = true;
  for (const auto& ch : checks) {
    bool pass = ch.value < ch.tol;
    ok = ok && pass;
    std::printf("%s %s: %.3e (tolerance %.3e)\n", pass ? "PASS" : "FAIL", ch.name, ch.value, ch.tol);
  }
  if (!c.out.empty()) {
    ensure_out(c);
    write_manifest(c, "verify", s.resolved(), json::array(),
                   {{"Q", checks[0].tol}, {"E_tot", checks[1].tol}, {"P", checks[2].tol}, {"continuity", checks[3].tol}});
  }
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify / report

std::vector<acceptance::Result> run_suite(const Common& c, const std::vector<int>& ids, bool echo) {
  acceptance::Options opts;
  opts.seed = c.seed;
  opts.tol_scale = c.tol_scale;
  std::vector<acceptance::Result> results;
  for (int id : ids) {
    results.push_back(acceptance::run(id, opts));
    if (echo) std::cout << acceptance::format(results.back()) << std::endl;
  }
  return results;
}

std::vector<int> select_ids(const std::string& suite) {
  std::vector<int> ids;
  if (suite.empty() || suite == "all") {
    for (std::size_t k = 1; k <= acceptance::suite_names().size(); ++k) ids.push_back(static_cast<int>(k));
    return ids;
  }
  std::stringstream ss(suite);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int id = acceptance::suite_id(item);
    if (id == 0) throw ConfigError("unknown suite '" + item + "'");
    ids.push_back(id);
  }
  return ids;
}

json results_json(const std::vector<acceptance::Result>& results) {
  json arr = json::array();
  for (const auto& r : results) {
    arr.push_back({{"id", r.id},
                   {"name", r.name},
                   {"passed", r.passed},
                   {"seconds", r.seconds},
                   {"time_limit", r.time_limit},
                   {"detail", r.detail}});
  }
  return arr;
}

int cmd_verify(const Common& c, const std::string& suite, bool out_given) {
  if (!c.config.empty()) {
    Common cc = c;
    if (!out_given) cc.out.clear();
    return verify_config(cc);
  }
  auto ids = select_ids(suite);
  auto results = run_suite(c, ids, true);
  std::vector<std::string> failed;
  for (const auto& r : results) {
    if (!r.passed) failed.push_back(r.name);
  }
  if (out_given) {
    ensure_out(c);
    write_file(fs::path(c.out) / "verify.json", results_json(results).dump(2) + "\n");
    write_manifest(c, "verify", {{"suite", suite.empty() ? "all" : suite}}, {"verify.json"});
  }
  std::cout << (results.size() - failed.size()) << "/" << results.size() << " criteria passed\n";
  if (!failed.empty()) {
    std::cerr << "failing:";
    for (const auto& f : failed) std::cerr << " " << f;
    std::cerr << "\n";
    return 1;
  }
  return 0;
}

std::string md_escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    if (ch == '|') out += '\\';
    out += ch;
  }
  return out;
}

int cmd_report(const Common& c, const std::string& suite) {
  auto ids = select_ids(suite);
  ensure_out(c);
  auto results = run_suite(c, ids, false);
  std::ostringstream md;
  md << "| # | criterion | result | seconds | limit | detail |\n|---|---|---|---|---|---|\n";
  std::ostringstream csv;
  csv << "id,name,passed,seconds,time_limit\n";
  int passed = 0;
  for (const auto& r : results) {
    passed += r.passed ? 1 : 0;
    char sec[32];
    std::snprintf(sec, sizeof sec, "%.3f", r.seconds);
    md << "| " << r.id << " | " << r.name << " | " << (r.passed ? "pass" : "FAIL") << " | " << sec << " | "
       << (r.time_limit > 0 ? std::to_string(static_cast<int>(r.time_limit)) : "-") << " | " << md_escape(r.detail) << " |\n";
    csv << r.id << "," << r.name << "," << (r.passed ? 1 : 0) << "," << fmt(r.seconds) << "," << fmt(r.time_limit)
        << "\n";
  }
  md << "\n" << passed << "/" << results.size() << " criteria passed.\n";
  write_file(fs::path(c.out) / "report.md", md.str());
  write_file(fs::path(c.out) / "report.csv", csv.str());
  write_file(fs::path(c.out) / "report.json", results_json(results).dump(2) + "\n");
  write_manifest(c, "report", {{"suite", suite.empty() ? "all" : suite}}, {"report.md", "report.csv", "report.json"});
  std::cout << md.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noether currents for higher-derivative and non-local scalar theories"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", common.config, "Input file");
    if (config_required) opt->required();
    sub->add_option("--out", common.out, "Output directory")->capture_default_str();
    sub->add_option("--seed", common.seed, "Random seed")->capture_default_str();
    sub->add_option("--tol-scale", common.tol_scale, "Multiplier on floating-point tolerances")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  };

  std::string symmetry = "all";
  bool with_defect = false;
  auto* derive = app.add_subcommand("derive", "Derive Noether currents from a Lagrangian file");
  add_common(derive, true);
  derive->add_option("--symmetry", symmetry, "all, internal, translation or rotation")
      ->check(CLI::IsMember({"all", "internal", "translation", "rotation"}));
  derive->add_flag("--defect", with_defect, "Also emit the off-shell divergence defect");

  auto* model = app.add_subcommand("model", "Series coefficients, Ward scan and kernel convergence tables");
  add_common(model, false);

  auto* simulate = app.add_subcommand("simulate", "Run the lattice simulator from a JSON config");
  add_common(simulate, true);

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run acceptance criteria, or check a simulation config");
  add_common(verify, false);
  verify->add_option("--suite", suite, "Criterion names or numbers, comma separated (default all)");

  auto* report = app.add_subcommand("report", "Write a summary table of the acceptance suite");
  add_common(report, false);
  report->add_option("--suite", suite, "Criterion names or numbers, comma separated (default all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*derive) return cmd_derive(common, symmetry, with_defect);
    if (*model) return cmd_model(common);
    if (*simulate) return cmd_simulate(common);
    if (*verify) return cmd_verify(common, suite, verify->count("--out") > 0);
    if (*report) return cmd_report(common, suite);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
