// Batch driver: parse an instance file, run one pipeline command, print a
// JSON report on stdout. Exit codes: 0 success, 1 certification/flow failure,
// 2 validation or input error, 3 internal inconsistency, 4 reproduction
// discrepancy.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "isomono/instance_io.hpp"
#include "isomono/isoflow.hpp"
#include "isomono/reproduce.hpp"
#include "isomono/roots.hpp"
#include "isomono/symplectic.hpp"

using namespace isomono;
using nlohmann::json;

namespace {

int thread_cap() {
  const char *env = std::getenv("ISOMONO_THREADS");
  if (!env)
    return static_cast<int>(std::thread::hardware_concurrency());
  int v = std::atoi(env);
  return v > 0 ? v : 1;
}

void emit(const json &report, const std::string &out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    out << report.dump(2) << "\n";
  }
}

json diagnostics_json(const std::vector<Diagnostic> &ds) {
  json arr = json::array();
  for (auto &d : ds)
    arr.push_back({{"check", d.check}, {"ok", d.ok}, {"detail", d.detail}});
  return arr;
}

json error_json(const std::string &kind, const std::string &what) {
  return json{{"error", kind}, {"detail", what}};
}

std::string point_label(const Instance &inst, std::size_t idx) {
  if (inst.pts[idx].at_infinity)
    return "inf";
  std::size_t k = 0;
  for (std::size_t i = 0; i < idx; ++i)
    if (!inst.pts[i].at_infinity)
      ++k;
  return std::to_string(k + 1);
}

json reduction_json(const Instance &inst, std::size_t idx, int extra) {
  auto conn = assemble_normal_form<Rational>(inst);
  auto red = reduce_point(conn, inst, idx, extra);
  json rj;
  rj["point"] = point_label(inst, idx);
  rj["kind"] = kind_name(inst.pts[idx].kind);
  json tail = json::array();
  json xi = json::array();
  auto mat_json = [](const Mat2<Rational> &m) {
    return json::array({m.a11.str(), m.a12.str(), m.a21.str(), m.a22.str()});
  };
  if (inst.pts[idx].kind == PointKind::kRamified) {
    for (auto &t : red.ra.theta_zeta)
      tail.push_back(t.str());
    for (auto &m : red.ra.xi)
      xi.push_back(mat_json(m));
    rj["residual_order"] = static_cast<int>(red.ra.xi.size()) - 1 - red.pole_order;
  } else {
    for (std::size_t l = 0; l < red.un.theta_plus.size(); ++l)
      tail.push_back(json::array({red.un.theta_plus[l].str(), red.un.theta_minus[l].str()}));
    for (auto &m : red.un.xi)
      xi.push_back(mat_json(m));
    rj["residual_order"] = static_cast<int>(red.un.xi.size()) - 1 - red.pole_order;
  }
  rj["theta_tail"] = tail;
  rj["xi"] = xi;
  return rj;
}

int cmd_validate(const InstanceFile &file, const std::string &out) {
  auto ds = validate(file.inst);
  json report{{"command", "validate"}, {"diagnostics", diagnostics_json(ds)},
              {"ok", all_ok(ds)}};
  emit(report, out);
  return all_ok(ds) ? 0 : 2;
}

int cmd_build(const InstanceFile &file, const std::string &out) {
  auto ds = validate(file.inst);
  if (!all_ok(ds)) {
    emit(json{{"command", "build"}, {"diagnostics", diagnostics_json(ds)},
              {"error", "validation"}},
         out);
    return 2;
  }
  const Instance &inst = file.inst;
  auto cd = build_cd(inst);
  PolyQ ct = solve_ctilde(inst, cd);
  auto conn = assemble_normal_form(inst, cd, ct);
  auto e1 = to_e1(conn, inst);
  check_pole_divisor(e1, inst);
  auto recovered = apparent_data(e1);
  // round trip, order free
  auto sorted_input = inst.dar;
  std::sort(sorted_input.begin(), sorted_input.end(),
            [](auto &x, auto &y) { return x.q < y.q; });
  bool round_trip = recovered.size() == sorted_input.size();
  for (std::size_t j = 0; round_trip && j < recovered.size(); ++j)
    round_trip = recovered[j].q == sorted_input[j].q && recovered[j].p == sorted_input[j].p;
  if (!round_trip) {
    emit(json{{"command", "build"}, {"error", "round-trip"},
              {"detail", "apparent data does not reproduce the Darboux input"}},
         out);
    return 3;
  }
  json report{{"command", "build"},
              {"normal_form", conn_to_json(conn)},
              {"e1", conn_to_json(e1)},
              {"c_tilde", poly_to_json(ct)},
              {"round_trip", "ok"}};
  emit(report, out);
  return 0;
}

int cmd_reduce(const InstanceFile &file, const std::string &point, int truncation,
               const std::string &out) {
  require_valid(file.inst);
  json reports = json::array();
  for (std::size_t i = 0; i < file.inst.pts.size(); ++i) {
    if (!point.empty() && point_label(file.inst, i) != point)
      continue;
    reports.push_back(reduction_json(file.inst, i, truncation));
  }
  emit(json{{"command", "reduce"}, {"reductions", reports}}, out);
  return 0;
}

int cmd_hamiltonians(const InstanceFile &file, const std::string &out) {
  require_valid(file.inst);
  const Instance &inst = file.inst;
  json h_theta = json::object(), h_t = json::object();
  for (auto &c : deformation_directions(inst)) {
    Rational h = hamiltonian(inst, c, file.options.truncation_extra);
    if (c.kind == Coord::kT)
      h_t[coord_name(inst, c)] = h.str();
    else
      h_theta[coord_name(inst, c)] = h.str();
  }
  emit(json{{"command", "hamiltonians"}, {"H_theta", h_theta}, {"H_t", h_t}}, out);
  return 0;
}

int cmd_omega(const InstanceFile &file, const std::string &pairs, const std::string &out) {
  require_valid(file.inst);
  const Instance &inst = file.inst;
  const bool fiber_only = pairs == "canonical";
  std::vector<Coord> basis = coordinate_basis(inst, fiber_only);
  std::vector<OmegaData> data;
  data.reserve(basis.size());
  for (auto &c : basis)
    data.push_back(omega_data(inst, TangentDirection::basis(c),
                              file.options.truncation_extra));
  json labels = json::array();
  for (auto &c : basis)
    labels.push_back(coord_name(inst, c));
  json matrix = json::array();
  for (std::size_t a = 0; a < basis.size(); ++a) {
    json row = json::array();
    for (std::size_t b = 0; b < basis.size(); ++b)
      row.push_back(krichever_pair(data[a], data[b]).str());
    matrix.push_back(row);
  }
  emit(json{{"command", "omega"}, {"basis", labels}, {"matrix", matrix}}, out);
  return 0;
}

int cmd_certify(const InstanceFile &file, const std::string &out) {
  require_valid(file.inst);
  const Instance &inst = file.inst;
  auto dirs = deformation_directions(inst);
  const int cap = std::max(1, thread_cap());
  std::vector<UpsilonResult> results(dirs.size());
  std::size_t next = 0;
  while (next < dirs.size()) {
    std::size_t batch = std::min<std::size_t>(static_cast<std::size_t>(cap),
                                              dirs.size() - next);
    std::vector<std::future<UpsilonResult>> futs;
    for (std::size_t k = 0; k < batch; ++k)
      futs.push_back(std::async(std::launch::async, [&inst, &file, &dirs, next, k] {
        return certify_direction(inst, dirs[next + k], file.options.truncation_extra);
      }));
    for (std::size_t k = 0; k < batch; ++k)
      results[next + k] = futs[k].get();
    next += batch;
  }
  json lines = json::array();
  bool all = true;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    json line{{"direction", coord_name(inst, dirs[k])},
              {"integrable", results[k].ok},
              {"budget_bumped", results[k].budget_bumped}};
    if (!results[k].ok) {
      line["obstruction"] = results[k].failure;
      all = false;
    }
    lines.push_back(line);
  }
  emit(json{{"command", "certify"}, {"directions", lines}, {"ok", all}}, out);
  return all ? 0 : 1;
}

int cmd_flow(const InstanceFile &file, const std::string &dir_spec, double h, long steps,
             const std::string &out) {
  require_valid(file.inst);
  Coord dir = parse_direction(file.inst, dir_spec);
  FlowOptions fo;
  fo.h = h;
  fo.steps = steps;
  fo.margin = file.options.margin;
  fo.extra = file.options.truncation_extra;
  auto traj = flow(file.inst, dir, fo);
  json states = json::array();
  for (auto &st : traj) {
    json q = json::array(), eta = json::array();
    for (double v : st.q)
      q.push_back(v);
    for (double v : st.eta)
      eta.push_back(v);
    states.push_back({{"s", st.s}, {"q", q}, {"eta", eta}});
  }
  emit(json{{"command", "flow"}, {"direction", dir_spec}, {"trajectory", states}}, out);
  return 0;
}

int cmd_reproduce(const std::string &which, std::uint64_t seed, int samples,
                  const std::string &out) {
  ReproResult r;
  std::string canon;
  if (which == "unramified222" || which == "5.1") {
    r = reproduce_triple_unramified(seed, samples);
    canon = "unramified222";
  } else if (which == "kimura92" || which == "5.2") {
    r = reproduce_kimura(seed, samples);
    canon = "kimura92";
  } else {
    emit(error_json("usage", "unknown reproduction case '" + which + "'"), out);
    return 2;
  }
  json lines = json::array();
  for (auto &c : r.checks)
    lines.push_back({{"check", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  emit(json{{"command", "reproduce"}, {"case", canon}, {"seed", seed},
            {"samples", samples}, {"checks", lines}, {"ok", r.ok()},
            {"max_discrepancy", r.ok() ? "0" : "nonzero"}},
       out);
  return r.ok() ? 0 : 4;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"exact engine for rank-2 meromorphic connections in companion "
               "normal form: apparent-singularity coordinates, local formal "
               "reductions, isomonodromy Hamiltonians, integrability "
               "certificates"};
  app.require_subcommand(1);

  std::string instance_path, out_path, point, pairs = "all", dir_spec, which;
  int truncation = 3, samples = 10;
  std::uint64_t seed = 20260810;
  double h = 1e-3;
  long steps = 100;

  auto add_common = [&](CLI::App *cmd, bool needs_instance = true) {
    if (needs_instance)
      cmd->add_option("--instance", instance_path, "instance JSON file")->required();
    cmd->add_option("--out", out_path, "write the JSON report to a file");
  };

  auto *c_validate = app.add_subcommand("validate", "check instance invariants");
  add_common(c_validate);
  auto *c_build = app.add_subcommand(
      "build", "assemble the normal form, transform to E1, and round-trip the "
               "apparent data");
  add_common(c_build);
  auto *c_reduce = app.add_subcommand("reduce", "local formal reduction per point");
  add_common(c_reduce);
  c_reduce->add_option("--point", point, "restrict to one point label (1, 2, ..., inf)");
  c_reduce->add_option("--truncation", truncation,
                       "extra local coefficients beyond 2n_i - 1");
  auto *c_ham = app.add_subcommand("hamiltonians", "Hamiltonians of every admissible "
                                                   "deformation direction");
  add_common(c_ham);
  auto *c_omega = app.add_subcommand("omega", "residue 2-form on the coordinate basis");
  add_common(c_omega);
  c_omega->add_option("--pairs", pairs, "'all' (extended basis) or 'canonical' (fiber)")
      ->check(CLI::IsMember({"all", "canonical"}));
  auto *c_certify = app.add_subcommand(
      "certify", "solve the horizontal-lift equation along every direction");
  add_common(c_certify);
  auto *c_flow = app.add_subcommand("flow", "integrate the Hamiltonian flow (RK4)");
  c_flow->set_help_flag("--help", "print help"); // frees --h for the step size
  add_common(c_flow);
  c_flow->add_option("--dir", dir_spec, "theta_un:<pt>:<l>:<+|-> | theta_ra:<pt>:<l'> | t:<pt>")
      ->required();
  c_flow->add_option("--h", h, "step size");
  c_flow->add_option("--steps", steps, "step count");
  auto *c_repro = app.add_subcommand("reproduce", "golden closed-form reproductions");
  c_repro->add_option("--case", which, "unramified222 | kimura92")->required();
  c_repro->add_option("--samples", samples, "number of seeded samples");
  c_repro->add_option("--seed", seed, "PRNG seed");
  c_repro->add_option("--out", out_path, "write the JSON report to a file");

  CLI11_PARSE(app, argc, argv);

  auto started = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    InstanceFile file;
    if (!instance_path.empty())
      file = load_instance(instance_path);
    if (c_validate->parsed())
      rc = cmd_validate(file, out_path);
    else if (c_build->parsed())
      rc = cmd_build(file, out_path);
    else if (c_reduce->parsed()) {
      file.options.truncation_extra = truncation;
      rc = cmd_reduce(file, point, truncation, out_path);
    } else if (c_ham->parsed())
      rc = cmd_hamiltonians(file, out_path);
    else if (c_omega->parsed())
      rc = cmd_omega(file, pairs, out_path);
    else if (c_certify->parsed())
      rc = cmd_certify(file, out_path);
    else if (c_flow->parsed())
      rc = cmd_flow(file, dir_spec, h, steps, out_path);
    else if (c_repro->parsed())
      rc = cmd_reproduce(which, seed, samples, out_path);
  } catch (const ParseError &e) {
    emit(error_json("parse", e.what()), out_path);
    rc = 2;
  } catch (const ValidationError &e) {
    emit(error_json("validation", e.what()), out_path);
    rc = 2;
  } catch (const InternalInconsistency &e) {
    emit(error_json("internal", e.what()), out_path);
    rc = 3;
  } catch (const FlowSingular &e) {
    emit(error_json("flow", std::string(e.what()) + " at step " + std::to_string(e.step)),
         out_path);
    rc = 1;
  } catch (const Error &e) {
    emit(error_json("error", e.what()), out_path);
    rc = 2;
  }
  auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started);
  std::cerr << "[isomono] " << elapsed.count() << " s\n";
  return rc;
}
